"""Experiment harness: end-to-end pipeline records, seeded batch grids,
JSONL persistence, re-validation, conjecture tallies and table exports.

Records are deterministic: identical (g, k, p, seed, toolVersion) must give
byte-identical JSONL lines, so wall-clock timings are kept in memory only
and never serialized.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .curvegen import CurveSpec, build_curve, derive_seed
from .errors import ScrollresError
from .invariants import (
    beta_rank,
    brill_noether_rho,
    bundle_degree,
    conjectured_mu_splitting,
    dual_refined_range,
    g_minus_k2_prediction,
    is_balanced,
    refined_bound_holds,
    stated_refined_range,
)
from .relres import (
    betti_table,
    composition_is_zero,
    duality_holds,
    exactness_certificate,
    resolve_on_scroll,
    splitting_types,
)
from .scrollcox import (
    build_scroll_embedding,
    curve_on_scroll,
    verify_preimage,
    verify_scroll_kernel,
)

SCHEMA_VERSION = 1


@dataclass
class ExperimentRecord:
    g: int
    k: int
    p: int
    seed: int
    status: str
    scroll_type: list = None
    quadric_count: int = None
    hilbert: list = None
    splitting_types: list = None  # [{"i": i, "twists": [...]}]
    balanced_flags: list = None
    final_twist: int = None
    betti: dict = None
    structural_checks: dict = None
    conjecture_checks: dict = None
    timings: dict = field(default_factory=dict)  # ms per stage, never serialized

    def to_dict(self):
        return {
            "schemaVersion": SCHEMA_VERSION,
            "toolVersion": __version__,
            "g": self.g,
            "k": self.k,
            "p": self.p,
            "seed": self.seed,
            "status": self.status,
            "scrollType": self.scroll_type,
            "quadricCount": self.quadric_count,
            "hilbert": self.hilbert,
            "splittingTypes": self.splitting_types,
            "balancedFlags": self.balanced_flags,
            "finalTwist": self.final_twist,
            "betti": self.betti,
            "structuralChecks": self.structural_checks,
            "conjectureChecks": self.conjecture_checks,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), separators=(", ", ": "))

    @classmethod
    def from_dict(cls, d):
        if d.get("schemaVersion") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {d.get('schemaVersion')}")
        return cls(
            g=d["g"],
            k=d["k"],
            p=d["p"],
            seed=d["seed"],
            status=d["status"],
            scroll_type=d.get("scrollType"),
            quadric_count=d.get("quadricCount"),
            hilbert=d.get("hilbert"),
            splitting_types=d.get("splittingTypes"),
            balanced_flags=d.get("balancedFlags"),
            final_twist=d.get("finalTwist"),
            betti=d.get("betti"),
            structural_checks=d.get("structuralChecks"),
            conjecture_checks=d.get("conjectureChecks"),
        )


def _conjecture_checks(g, k, types):
    """Per-record conjecture comparators; "n.a." when hypotheses fail."""
    observed = {t.i: list(t.twists) for t in types}
    checks = {}
    rho = brill_noether_rho(g, k)

    if rho < 0:
        checks["negRhoBalancedN1"] = "pass" if is_balanced(observed[1]) else "fail"
    else:
        checks["negRhoBalancedN1"] = "n.a."

    stated = [i for i in stated_refined_range(k) if i in observed]
    if rho >= 0 and stated:
        held = refined_bound_holds(g, k, observed, stated)
        checks["refinedBound"] = "pass" if all(held.values()) else "fail"
        dual = [i for i in dual_refined_range(k) if i in observed]
        held_dual = refined_bound_holds(g, k, observed, dual)
        checks["refinedBoundDual"] = "pass" if all(held_dual.values()) else "fail"
    else:
        checks["refinedBound"] = "n.a."
        checks["refinedBoundDual"] = "n.a."

    intermediate = [i for i in observed if i <= k - 3]
    if k >= 4 and (g - 1) % k == 0 and intermediate:
        if all(is_balanced(observed[i]) for i in intermediate):
            # not on the syzygy divisor, the prediction says nothing
            checks["muSplitting"] = "n.a."
        else:
            ok = all(
                sorted(observed[j], reverse=True) == conjectured_mu_splitting(g, k, j)
                for j in intermediate
            )
            checks["muSplitting"] = "pass" if ok else "fail"
    else:
        checks["muSplitting"] = "n.a."

    if k == g - 2 and k >= 4:
        pred = g_minus_k2_prediction(g)
        ok = all(
            sorted(observed[i], reverse=True) == sorted(pred[i], reverse=True)
            for i in pred
        )
        checks["gMinusK2Form"] = "pass" if ok else "fail"
    else:
        checks["gMinusK2Form"] = "n.a."
    return checks


def run_pipeline(spec, window=None, verify=True):
    """curvegen -> scrollcox -> relres -> invariant checks, as one record."""
    rec = ExperimentRecord(spec.g, spec.k, spec.p, spec.seed, status="pending")
    g, k = spec.g, spec.k
    stages = {}
    t0 = time.perf_counter()

    def mark(name):
        nonlocal t0
        t1 = time.perf_counter()
        stages[name] = round((t1 - t0) * 1000, 3)
        t0 = t1

    try:
        model = build_curve(spec)
        mark("construct")
        emb = build_scroll_embedding(model)
        cos = curve_on_scroll(model, emb, window=window)
        mark("scroll")
        res = resolve_on_scroll(cos, emb.scroll)
        types = splitting_types(res)
        mark("resolve")

        checks = {
            "compositionZero": composition_is_zero(res),
            "exactness": not exactness_certificate(res),
            "duality": duality_holds(res),
            "ranks": all(
                t.rank == (beta_rank(k, t.i) if t.i <= k - 3 else 1) for t in types
            ),
            "degreeFormulas": all(
                t.degree == bundle_degree(g, k, t.i) for t in types if t.i <= k - 3
            ),
            "finalTwist": types[-1].twists == (emb.scroll.f - 2,),
        }
        if verify:
            checks["scrollKernel"] = verify_scroll_kernel(emb)
            checks["preimage"] = verify_preimage(model, emb, cos)
        mark("verify")

        bt = betti_table(res)
        rec.scroll_type = list(emb.scroll.e)
        rec.quadric_count = model.quadric_count
        rec.hilbert = [
            model.hilbert.projective_dimension,
            model.hilbert.degree,
            model.hilbert.arithmetic_genus,
        ]
        rec.splitting_types = [
            {"i": t.i, "twists": list(t.twists)} for t in types
        ]
        rec.balanced_flags = [{"i": t.i, "balanced": t.balanced} for t in types]
        rec.final_twist = types[-1].twists[0]
        rec.betti = {
            "totals": bt.totals,
            "cells": sorted([c, r, n] for (c, r), n in bt.cells.items()),
        }
        rec.structural_checks = checks
        rec.conjecture_checks = _conjecture_checks(g, k, types)
        if not all(checks.values()):
            rec.status = "failed(structural)"
        elif model.attempts > 1:
            rec.status = f"retried({model.attempts - 1})"
        else:
            rec.status = "ok"
    except ScrollresError as exc:
        rec.status = f"failed({type(exc).__name__})"
    rec.timings = stages
    return rec


# ---------------------------------------------------------------------------
# Batch grids


@dataclass
class GridConfig:
    genus: list
    gonality: list
    primes: list = field(default_factory=lambda: [10007])
    trials: int = 1
    master_seed: int = 0
    window: tuple = None

    @classmethod
    def from_file(cls, path):
        text = open(path, "rb").read()
        if str(path).endswith(".toml"):
            try:
                import tomllib
            except ImportError:  # python < 3.11
                import tomli as tomllib

            data = tomllib.loads(text.decode())
        else:
            data = json.loads(text)
        return cls(
            genus=list(data["genus"]),
            gonality=list(data["gonality"]),
            primes=list(data.get("primes", [10007])),
            trials=int(data.get("trials", 1)),
            master_seed=int(data.get("seed", 0)),
            window=tuple(data["window"]) if data.get("window") else None,
        )

    def cells(self):
        out = []
        for g in sorted(self.genus):
            for k in sorted(self.gonality):
                if not 3 <= k <= g - 1:
                    continue
                for p in sorted(self.primes):
                    for trial in range(self.trials):
                        seed = derive_seed(self.master_seed, g, k, p, trial)
                        out.append(CurveSpec(g, k, p, seed))
        return out


def _run_trial(args):
    spec, window = args
    return run_pipeline(spec, window=window)


def run_batch(cfg, out_path, threads=1):
    """One JSONL line per trial, sorted by (g, k, p, seed); returns a summary
    Counter per (g, k, p) cell."""
    specs = cfg.cells()
    jobs = [(s, cfg.window) for s in specs]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_run_trial, jobs))
    else:
        records = [_run_trial(j) for j in jobs]
    records.sort(key=lambda r: (r.g, r.k, r.p, r.seed))
    with open(out_path, "w") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")
    summary = {}
    for rec in records:
        cell = summary.setdefault((rec.g, rec.k, rec.p), Counter())
        if rec.status.startswith("failed"):
            cell["failed"] += 1
        else:
            cell["ok"] += 1
            flags = [b["balanced"] for b in rec.balanced_flags]
            cell["balanced" if all(flags) else "unbalanced"] += 1
    return summary


def read_records(path):
    out = []
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(ExperimentRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{n}: bad record: {exc}") from exc
    return out


def check_records(path):
    """Re-validate persisted invariants independently of the producing run.
    Returns a list of human-readable problems; empty means the file passes."""
    problems = []
    for rec in read_records(path):
        where = f"(g={rec.g}, k={rec.k}, p={rec.p}, seed={rec.seed})"
        if rec.status.startswith("failed"):
            continue
        types = {t["i"]: t["twists"] for t in rec.splitting_types}
        f = sum(rec.scroll_type)
        for i, twists in types.items():
            if i <= rec.k - 3:
                if len(twists) != beta_rank(rec.k, i):
                    problems.append(f"{where}: rank of N_{i} is {len(twists)}")
                if sum(twists) != bundle_degree(rec.g, rec.k, i):
                    problems.append(f"{where}: degree of N_{i} is {sum(twists)}")
            j = rec.k - 2 - i
            if j in types and sorted(f - 2 - a for a in types[i]) != sorted(types[j]):
                problems.append(f"{where}: duality fails between N_{i} and N_{j}")
        if types.get(rec.k - 2) != [f - 2]:
            problems.append(f"{where}: final twist is {types.get(rec.k - 2)}")
        for flag in rec.balanced_flags:
            if flag["balanced"] != is_balanced(types[flag["i"]]):
                problems.append(f"{where}: balanced flag wrong for N_{flag['i']}")
        if rec.structural_checks and not all(rec.structural_checks.values()):
            problems.append(f"{where}: status {rec.status} with failing checks")
    return problems


# ---------------------------------------------------------------------------
# Reports


def conjecture_report(records):
    """Markdown tallies per conjecture predicate; lists counterexamples,
    asserts nothing."""
    names = [
        "negRhoBalancedN1",
        "refinedBound",
        "refinedBoundDual",
        "muSplitting",
        "gMinusK2Form",
    ]
    tallies = {n: Counter() for n in names}
    counterexamples = {n: [] for n in names}
    for rec in records:
        if rec.status.startswith("failed") or not rec.conjecture_checks:
            continue
        for n in names:
            verdict = rec.conjecture_checks.get(n, "n.a.")
            tallies[n][verdict] += 1
            if verdict == "fail":
                counterexamples[n].append(
                    f"(g={rec.g}, k={rec.k}, p={rec.p}, seed={rec.seed})"
                )
    lines = ["# Conjecture tallies", ""]
    lines.append(f"Records considered: {len(records)}")
    lines.append("")
    lines.append("| predicate | pass | fail | n.a. |")
    lines.append("|---|---|---|---|")
    for n in names:
        t = tallies[n]
        lines.append(f"| {n} | {t['pass']} | {t['fail']} | {t['n.a.']} |")
    lines.append("")
    for n in names:
        if counterexamples[n]:
            lines.append(f"## {n} counterexamples")
            lines.extend(f"- {c}" for c in counterexamples[n])
            lines.append("")
    return "\n".join(lines) + "\n"


def _betti_text(betti):
    cols = len(betti["totals"])
    rows = sorted({r for _c, r, _n in betti["cells"]})
    cell = {(c, r): n for c, r, n in betti["cells"]}
    table = []
    for r in rows:
        table.append([str(r)] + [str(cell.get((c, r), "")) or "." for c in range(cols)])
    return rows, cols, cell, table


def tables_export(records, fmt, out_dir):
    """Per (g, k): the most frequent Betti table among ok records, written as
    one Markdown or CSV file, with a variant count."""
    import os

    groups = {}
    for rec in records:
        if rec.status.startswith("failed") or not rec.betti:
            continue
        key = (rec.g, rec.k)
        groups.setdefault(key, []).append(rec)
    written = []
    for (g, k), recs in sorted(groups.items()):
        shapes = Counter(json.dumps(r.betti, sort_keys=True) for r in recs)
        best, count = shapes.most_common(1)[0]
        betti = json.loads(best)
        rows, cols, cell, table = _betti_text(betti)
        name = f"betti_g{g}_k{k}.{'md' if fmt == 'md' else 'csv'}"
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            if fmt == "md":
                fh.write(f"# Betti table for (g, k) = ({g}, {k})\n\n")
                fh.write(
                    f"{count} of {len(recs)} records share this table "
                    f"({len(shapes)} variant(s) seen).\n\n"
                )
                fh.write("| row | " + " | ".join(str(c) for c in range(cols)) + " |\n")
                fh.write("|" + "---|" * (cols + 1) + "\n")
                for line in table:
                    fh.write("| " + " | ".join(line) + " |\n")
                fh.write(
                    "| total | "
                    + " | ".join(str(t) for t in betti["totals"])
                    + " |\n"
                )
            else:
                fh.write("row," + ",".join(str(c) for c in range(cols)) + "\n")
                for line in table:
                    fh.write(",".join(x if x != "." else "" for x in line) + "\n")
                fh.write("total," + ",".join(str(t) for t in betti["totals"]) + "\n")
        written.append(path)
    return written
