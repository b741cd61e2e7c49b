"""Buchberger engine: reduced Groebner bases, normal forms, elimination,
ring-map kernels/preimages and Hilbert-series invariants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import GradedRing, MultiPoly, from_coeff_vector
from .linalg import extend_basis, kernel_basis

import numpy as np


def _lcm(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def _coprime(e1, e2):
    return all(a == 0 or b == 0 for a, b in zip(e1, e2))


def s_poly(f, g):
    ef, cf = f.lead_term()
    eg, cg = g.lead_term()
    ring = f.ring
    lcm = _lcm(ef, eg)
    mf = ring.monomial(tuple(a - b for a, b in zip(lcm, ef)), ring.field.inv(cf))
    mg = ring.monomial(tuple(a - b for a, b in zip(lcm, eg)), ring.field.inv(cg))
    return mf * f - mg * g


def normal_form(f, basis):
    """Fully reduced remainder of f modulo a list of polynomials."""
    ring = f.ring
    p = ring.p
    key = ring.key
    lead = [(g.lead_exp(), g) for g in basis if not g.is_zero()]
    work = dict(f.terms)
    out = {}
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        hit = None
        for le, g in lead:
            if _divides(le, e):
                hit = (le, g)
                break
        if hit is None:
            out[e] = c
            continue
        le, g = hit
        shift = tuple(a - b for a, b in zip(e, le))
        factor = c * ring.field.inv(g.terms[le]) % p
        for ge, gc in g.terms.items():
            if ge == le:
                continue
            te = tuple(a + b for a, b in zip(ge, shift))
            v = (work.get(te, 0) - factor * gc) % p
            if v:
                work[te] = v
            else:
                work.pop(te, None)
    return MultiPoly(ring, out)


def _update_pairs(pairs, leads, t):
    """Gebauer-Moeller update of the critical-pair set after appending basis
    element t.  pairs is a set of (i, j) with i < j."""
    lt = leads[t]
    lcms = {i: _lcm(leads[i], lt) for i in range(t)}
    candidates = sorted(range(t), reverse=True)
    kept = []
    while candidates:
        i = candidates.pop()
        li = lcms[i]
        others = candidates + kept
        if _coprime(leads[i], lt) or not any(
            _divides(lcms[j], li) and lcms[j] != li for j in others
        ):
            kept.append(i)
    new_pairs = {(i, t) for i in kept if not _coprime(leads[i], lt)}
    surviving = set()
    for i, j in pairs:
        lij = _lcm(leads[i], leads[j])
        if _divides(lt, lij) and lcms[i] != lij and lcms[j] != lij:
            continue
        surviving.add((i, j))
    return surviving | new_pairs


def buchberger(generators, degree_cap=None):
    """Reduced Groebner basis of the ideal spanned by generators.

    With degree_cap set, pairs whose lcm exceeds the cap (total degree) are
    dropped; the result is then only a d-truncated basis.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    G = []
    leads = []
    pairs = set()
    for g in gens:
        h = normal_form(g, G)
        if h.is_zero():
            continue
        G.append(h.monic())
        leads.append(h.lead_exp())
        pairs = _update_pairs(pairs, leads, len(G) - 1)
    while pairs:
        pair = min(pairs, key=lambda ij: (ring.key(_lcm(leads[ij[0]], leads[ij[1]])), ij))
        pairs.discard(pair)
        i, j = pair
        if degree_cap is not None and sum(_lcm(leads[i], leads[j])) > degree_cap:
            continue
        h = normal_form(s_poly(G[i], G[j]), G)
        if h.is_zero():
            continue
        G.append(h.monic())
        leads.append(h.lead_exp())
        pairs = _update_pairs(pairs, leads, len(G) - 1)
    return interreduce(G)


def interreduce(G):
    """Minimalize and tail-reduce a basis; result is the unique reduced GB."""
    G = [g for g in G if not g.is_zero()]
    G = sorted((g.monic() for g in G), key=lambda g: g.ring.key(g.lead_exp()))
    minimal = []
    for g in G:
        le = g.lead_exp()
        if any(_divides(h.lead_exp(), le) for h in minimal):
            continue
        minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        reduced.append(normal_form(g, others).monic())
    reduced.sort(key=lambda g: g.ring.key(g.lead_exp()))
    return reduced


class IdealGB:
    """An ideal with a lazily computed reduced Groebner basis."""

    def __init__(self, ring, generators, degree_cap=None):
        self.ring = ring
        self.generators = list(generators)
        self.degree_cap = degree_cap
        self._basis = None

    @property
    def basis(self):
        if self._basis is None:
            self._basis = buchberger(self.generators, degree_cap=self.degree_cap)
        return self._basis

    def normal_form(self, f):
        if f.ring != self.ring:
            raise ValueError("polynomial not in the ideal's ring")
        return normal_form(f, self.basis)

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other):
        return all(self.contains(g) for g in other.generators)

    def equals(self, other):
        if self.ring != other.ring:
            raise ValueError("ideals live in different rings")
        a = {tuple(sorted(g.terms.items())) for g in self.basis}
        b = {tuple(sorted(g.terms.items())) for g in other.basis}
        return a == b

    def hilbert_data(self):
        return hilbert_data(self)

    def shuffled(self, rng):
        gens = list(self.generators)
        rng.shuffle(gens)
        return IdealGB(self.ring, gens)


# ---------------------------------------------------------------------------
# Hilbert series of a monomial ideal, and dimension/degree/genus


def _interreduce_monomials(mons):
    mons = sorted(set(mons), key=sum)
    out = []
    for m in mons:
        if not any(_divides(o, m) for o in out):
            out.append(m)
    return out


def _poly_mul(a, b):
    out = {}
    for da, ca in a.items():
        for db, cb in b.items():
            out[da + db] = out.get(da + db, 0) + ca * cb
    return {d: c for d, c in out.items() if c}


def hilbert_numerator(mons, nvars):
    """Numerator of the Hilbert series of R/(mons) over (1-t)^nvars,
    as a dict degree -> integer coefficient."""
    mons = _interreduce_monomials(mons)
    if not mons:
        return {0: 1}
    if any(sum(m) == 0 for m in mons):
        return {}
    simple = [m for m in mons if sum(1 for e in m if e) == 1]
    if len(simple) == len(mons):
        result = {0: 1}
        for m in mons:
            result = _poly_mul(result, {0: 1, sum(m): -1})
        return result
    # pivot on the most frequent variable (Bigatti-style splitting);
    # only count non-simple monomials or the plus branch can stall
    counts = [0] * nvars
    for m in mons:
        if sum(1 for e in m if e) == 1:
            continue
        for i, e in enumerate(m):
            if e:
                counts[i] += 1
    j = max(range(nvars), key=lambda i: counts[i])
    plus = [m for m in mons if m[j] == 0]
    pivot = tuple(1 if i == j else 0 for i in range(nvars))
    plus.append(pivot)
    colon = [tuple(e - 1 if i == j and e else e for i, e in enumerate(m)) for m in mons]
    n_plus = hilbert_numerator(plus, nvars)
    n_colon = hilbert_numerator(colon, nvars)
    out = dict(n_plus)
    for d, c in n_colon.items():
        out[d + 1] = out.get(d + 1, 0) + c
    return {d: c for d, c in out.items() if c}


@dataclass(frozen=True)
class HilbertData:
    projective_dimension: int
    degree: int
    arithmetic_genus: int


def hilbert_data(ideal):
    """Projective dimension, degree and arithmetic genus of V(I), read off
    the Hilbert series of the lead-term ideal of a full Groebner basis."""
    if ideal.degree_cap is not None:
        raise ValueError("hilbert data requires a full (untruncated) basis")
    for g in ideal.generators:
        if len({sum(e) for e in g.terms}) > 1:
            raise ValueError("hilbert data requires homogeneous generators")
    nvars = ideal.ring.nvars
    leads = [g.lead_exp() for g in ideal.basis]
    num = hilbert_numerator(leads, nvars)
    if not num:
        return HilbertData(-1, 0, 0)
    coeffs = [0] * (max(num) + 1)
    for d, c in num.items():
        coeffs[d] = c
    cancels = 0
    while sum(coeffs) == 0:
        # synthetic division by (1 - t)
        out = [0] * (len(coeffs) - 1)
        run = 0
        for d in range(len(coeffs) - 1):
            run += coeffs[d]
            out[d] = run
        coeffs = out if out else [0]
        cancels += 1
        if not any(coeffs):
            return HilbertData(-1, 0, 0)
    dim_affine = nvars - cancels
    degree = sum(coeffs)
    if dim_affine <= 0:
        return HilbertData(dim_affine - 1, degree, 0)
    # Hilbert polynomial value at 0: HP(d) = sum_j q_j * C(d - j + D - 1, D - 1)
    D = dim_affine
    hp0 = Fraction(0)
    for j, q in enumerate(coeffs):
        if q == 0:
            continue
        val = Fraction(1)
        for i in range(D - 1):
            val *= Fraction(-j + D - 1 - i)
        for i in range(1, D):
            val /= i
        hp0 += q * val
    genus = (-1) ** (D - 1) * (hp0 - 1)
    if genus.denominator != 1:
        raise ArithmeticError("non-integral arithmetic genus; inconsistent Hilbert data")
    return HilbertData(dim_affine - 1, degree, int(genus))


# ---------------------------------------------------------------------------
# Elimination: kernels and preimages of ring maps


def _graph_ring(m):
    source, target = m.source, m.target
    if set(source.names) & set(target.names):
        raise ValueError("source and target variable names must be disjoint")
    names = target.names + source.names
    degrees = [(1, 0)] * (target.nvars + source.nvars)
    return GradedRing(names, degrees, order=("block", target.nvars), p=target.p)

def _lift_target(graph, f):
    nt = graph.nvars - f.ring.nvars
    return MultiPoly(graph, {e + (0,) * nt: c for e, c in f.terms.items()})


def _lift_source_var(graph, target_nvars, i):
    exp = [0] * graph.nvars
    exp[target_nvars + i] = 1
    return graph.monomial(exp)


def _restrict_to_source(graph, source, f):
    nt = graph.nvars - source.nvars
    terms = {}
    for e, c in f.terms.items():
        if any(e[:nt]):
            raise ValueError("polynomial involves eliminated variables")
        terms[e[nt:]] = c
    return MultiPoly(source, terms)


def _eliminate(m, extra_target_gens):
    graph = _graph_ring(m)
    gens = []
    for j in extra_target_gens:
        gens.append(_lift_target(graph, j))
    for i in range(m.source.nvars):
        gens.append(_lift_source_var(graph, m.target.nvars, i) - _lift_target(graph, m.images[i]))
    basis = buchberger(gens)
    nt = m.target.nvars
    kept = []
    for g in basis:
        if any(any(e[:nt]) for e in g.terms):
            continue
        kept.append(_restrict_to_source(graph, m.source, g))
    result = IdealGB(m.source, kept)
    if m.source.order == "grevlex":
        # the block order restricted to the source block is grevlex, so the
        # restriction of the elimination basis is already the reduced basis
        result._basis = sorted(kept, key=lambda g: m.source.key(g.lead_exp()))
    return result


def _images_multidegree(m):
    degs = {f.multidegree() for f in m.images}
    if len(degs) != 1:
        raise ValueError("linalg strategy needs images of one common multidegree")
    return degs.pop()


def _linalg_pieces(m, piece_membership, degree_bound):
    """Minimal generators, degree by degree, of {f : image of f passes
    piece_membership}.  Exact in each degree; complete up to degree_bound."""
    source = m.source
    delta = _images_multidegree(m)
    found = []
    for d in range(1, degree_bound + 1):
        mons = source.monomial_basis((d, 0))
        if not mons:
            continue
        target_deg = (d * delta[0], d * delta[1])
        piece = piece_membership(d, mons, target_deg)
        if not piece:
            continue
        # discard elements generated by lower-degree finds
        old = []
        ncols = len(mons)
        for g in found:
            gd = sum(g.lead_exp())
            for mu in source.monomial_basis((d - gd, 0)):
                old.append((source.monomial(mu) * g).coeff_vector(mons))
        new = extend_basis(old, piece, source.p, ncols)
        for v in new:
            found.append(from_coeff_vector(source, mons, v))
    return found


def kernel_of_ring_map(m, strategy="elim", degree_bound=None):
    """The ideal {f : m(f) = 0}.

    strategy "elim" runs a block-order elimination on the graph ideal and is
    complete.  strategy "linalg" solves an evaluation kernel per degree up to
    degree_bound (requires equal-multidegree homogeneous images); it is exact
    in each computed degree but only generates up to the bound.
    """
    if strategy == "elim":
        return _eliminate(m, [])
    if degree_bound is None:
        raise ValueError("linalg strategy requires a degree bound")

    def membership(d, mons, target_deg):
        target_mons = m.target.monomial_basis(target_deg)
        rows = []
        for mu in mons:
            img = m.apply(m.source.monomial(mu))
            rows.append(img.coeff_vector(target_mons) if target_mons else [0])
        a = np.array(rows, dtype=np.int64).T
        if a.size == 0:
            a = np.zeros((1, len(mons)), dtype=np.int64)
        return kernel_basis(a, m.source.p)

    gens = _linalg_pieces(m, membership, degree_bound)
    return IdealGB(m.source, gens)


def preimage(m, J, strategy="elim", degree_bound=None):
    """The ideal {f in source : m(f) lies in J}."""
    if J.ring != m.target:
        raise ValueError("J must live in the target ring")
    if strategy == "elim":
        return _eliminate(m, J.generators)
    if degree_bound is None:
        raise ValueError("linalg strategy requires a degree bound")

    def membership(d, mons, target_deg):
        target_mons = m.target.monomial_basis(target_deg)
        if not target_mons:
            return kernel_basis(np.zeros((1, len(mons)), dtype=np.int64), m.source.p)
        eval_cols = []
        for mu in mons:
            img = m.apply(m.source.monomial(mu))
            eval_cols.append(img.coeff_vector(target_mons))
        span_cols = []
        for g in J.generators:
            gd = g.multidegree()
            rem = (target_deg[0] - gd[0], target_deg[1] - gd[1])
            for mu in m.target.monomial_basis(rem):
                span_cols.append((m.target.monomial(mu) * g).coeff_vector(target_mons))
        a = np.array(eval_cols + span_cols, dtype=np.int64).T
        full = kernel_basis(a, m.source.p)
        nf = len(mons)
        # project to the f-part and keep an independent subset
        return extend_basis([], [v[:nf] for v in full], m.source.p, nf)

    gens = _linalg_pieces(m, membership, degree_bound)
    return IdealGB(m.source, gens)
