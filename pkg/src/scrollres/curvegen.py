"""Randomized construction of g-nodal k-gonal canonical curves over GF(p).

The curve is built from its rational normalization: pick two degree-k forms
f, h spanning the pencil, glue g pairs of points lying in common fibers of
(f : h), take the canonical sections s_j as products of the node quadrics,
and recombine them so the scroll swept out by the pencil gets its normalized
block-determinantal matrix.  The canonical ideal is cut out by exact kernel
linear algebra and certified through its Hilbert data.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstructionError,
    CurveVerificationError,
    FiltrationMismatchError,
    RankDeficiencyError,
    RetryExhaustedError,
)
from .groebner import IdealGB, hilbert_data
from .linalg import extend_basis, kernel_basis, rank
from .poly import GradedRing, MultiPoly, from_coeff_vector

RETRY_PER_POINT = 200
RETRY_FORMS = 25


def derive_seed(*parts):
    """Map arbitrary labels to a 64-bit seed via SHA-256 of the joined text.

    This fixed byte-level rule keeps experiment records reproducible.
    """
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


@dataclass(frozen=True)
class CurveSpec:
    g: int
    k: int
    p: int = 10007
    seed: int = 0

    def __post_init__(self):
        if self.g < 4:
            raise ValueError("genus must be at least 4")
        if self.k < 3:
            raise ValueError("gonality must be at least 3 (hyperelliptic excluded)")
        if self.k > self.g - 1:
            raise ValueError("gonality must be at most g-1")
        if self.p + 1 < 2 * self.g + 4:
            raise ValueError("field too small to host 2g distinct rational points")


# ---------------------------------------------------------------------------
# Binary forms in S = GF(p)[s, t]


def base_ring(p):
    return GradedRing(("s", "t"), [(1, 0), (1, 0)], order="grevlex", p=p)


def form_coeffs(f, degree):
    """Coefficients [c_d, ..., c_0] of sum c_i s^i t^(degree-i)."""
    out = [0] * (degree + 1)
    for (es, et), c in f.terms.items():
        if es + et != degree:
            raise ValueError("not homogeneous of the stated degree")
        out[degree - es] = c
    return out


def evaluate_form(f, point, p):
    x0, x1 = point
    total = 0
    for (es, et), c in f.terms.items():
        total = (total + c * pow(x0, es, p) * pow(x1, et, p)) % p
    return total


def rational_roots(f, degree, p):
    """All points of P^1(GF(p)) where the binary form vanishes, in the fixed
    scan order (0:1), (1:1), ..., (p-1:1), (1:0)."""
    coeffs = form_coeffs(f, degree)  # descending in s-exponent
    xs = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        vals = (vals * xs + c) % p
    roots = [(int(x), 1) for x in np.nonzero(vals == 0)[0]]
    if coeffs[0] == 0:
        roots.append((1, 0))
    return roots


def gcd_degree(f, h, degree_f, degree_h, p):
    """Degree of gcd of two binary forms (counting s- and t-content)."""
    cf = form_coeffs(f, degree_f)
    ch = form_coeffs(h, degree_h)

    def strip(c):
        lead = 0
        while lead < len(c) and c[lead] == 0:
            lead += 1
        tail = len(c)
        while tail > lead and c[tail - 1] == 0:
            tail -= 1
        return c[lead:tail], lead, len(c) - tail

    a, tf, sf = strip(cf)
    b, th, sh = strip(ch)
    common = min(sf, sh) + min(tf, th)
    while a and b:
        if len(a) < len(b):
            a, b = b, a
        factor = a[0] * pow(b[0], p - 2, p) % p
        # lists are descending in degree, so the leading coefficients align at 0
        a = [(x - factor * b[i]) % p if i < len(b) else x for i, x in enumerate(a)]
        while a and a[0] == 0:
            a = a[1:]
    core = max(len(a), len(b))
    return common + (core - 1 if core else 0)


def random_form(ring, degree, rng):
    p = ring.p
    terms = {}
    for i in range(degree + 1):
        c = rng.randrange(p)
        if c:
            terms[(i, degree - i)] = c
    if not terms:
        terms[(degree, 0)] = 1
    return MultiPoly(ring, terms)


# ---------------------------------------------------------------------------
# Gluing data


@dataclass
class GluingData:
    ring: GradedRing
    k: int
    f: MultiPoly
    h: MultiPoly
    points_r: list
    points_p: list
    points_q: list
    multipliers: list  # pairs (a_i, b_i) with b_i = 1


def build_gluing_data(spec, rng=None):
    """Draw f, h and g points R_i whose determinant forms split off two
    distinct rational points each, pairwise distinct across all indices."""
    if rng is None:
        rng = random.Random(derive_seed(spec.seed, "gluing"))
    g, k, p = spec.g, spec.k, spec.p
    S = base_ring(p)
    s, t = S.gens()
    for _ in range(RETRY_FORMS):
        f = random_form(S, k, rng)
        h = random_form(S, k, rng)
        if gcd_degree(f, h, k, k, p) != 0:
            continue
        used = set()
        points_r, points_p, points_q = [], [], []
        ok = True
        for _i in range(g):
            for _attempt in range(RETRY_PER_POINT):
                r0, r1 = rng.randrange(p), rng.randrange(p)
                if (r0, r1) == (0, 0):
                    continue
                delta = r1 * f - r0 * h
                if delta.is_zero():
                    continue
                roots = rational_roots(delta, k, p)
                fresh = [
                    pt
                    for pt in roots
                    if pt not in used
                    and evaluate_form(f, pt, p) != 0
                    and evaluate_form(h, pt, p) != 0
                ]
                if len(fresh) < 2:
                    continue
                pi, qi = fresh[0], fresh[1]
                used.update({pi, qi})
                points_r.append((r0, r1))
                points_p.append(pi)
                points_q.append(qi)
                break
            else:
                ok = False
                break
        if not ok:
            continue
        multipliers = []
        for pi, qi in zip(points_p, points_q):
            a = evaluate_form(f, pi, p) * pow(evaluate_form(f, qi, p), p - 2, p) % p
            # the pair lies in one fiber of (f:h), so the two ratios agree
            assert a == evaluate_form(h, pi, p) * pow(evaluate_form(h, qi, p), p - 2, p) % p
            multipliers.append((a, 1))
        return GluingData(S, k, f, h, points_r, points_p, points_q, multipliers)
    raise RetryExhaustedError(
        f"no factorizable determinant configuration found for g={g}, k={k}, p={p}"
    )


# ---------------------------------------------------------------------------
# Canonical sections and scroll-adapted normalization


@dataclass
class CanonicalBasis:
    ring: GradedRing
    g: int
    k: int
    q_forms: list
    sections: list
    normalized_sections: list = None
    scroll_type: tuple = None
    blocks: list = None  # per block: (e_i, psi_i)


def point_line(ring, point):
    """The linear form vanishing at (x0 : x1)."""
    s, t = ring.gens()
    return point[1] * s - point[0] * t


def canonical_sections(gluing, g):
    """q_i and the canonical basis s_j = prod_{i != j} q_i."""
    S = gluing.ring
    q_forms = [
        point_line(S, pi) * point_line(S, qi)
        for pi, qi in zip(gluing.points_p, gluing.points_q)
    ]
    prefix = [S.one()]
    for q in q_forms:
        prefix.append(prefix[-1] * q)
    suffix = [S.one()]
    for q in reversed(q_forms):
        suffix.append(suffix[-1] * q)
    suffix.reverse()
    sections = [prefix[j] * suffix[j + 1] for j in range(g)]
    basis = CanonicalBasis(S, g, gluing.k, q_forms, sections)
    mons = S.monomial_basis((2 * g - 2, 0))
    mat = np.array([sec.coeff_vector(mons) for sec in sections], dtype=np.int64)
    if rank(mat, S.p) != g:
        raise RankDeficiencyError("canonical sections are linearly dependent")
    return basis


def _multiplication_matrix(form, source_degree, target_degree, ring):
    """Matrix of w -> form*w between coefficient spaces (descending bases)."""
    src = ring.monomial_basis((source_degree, 0))
    tgt = ring.monomial_basis((target_degree, 0))
    cols = []
    for mu in src:
        cols.append((ring.monomial(mu) * form).coeff_vector(tgt))
    return np.array(cols, dtype=np.int64).T if cols else np.zeros((len(tgt), 0), dtype=np.int64)


def section_filtration(basis, gluing):
    """Dimensions m_j and bases of W_j = {w : f^a h^(j-a) w lies in the
    canonical space for all a+b = j}, the twisted canonical subspaces."""
    S = basis.ring
    p = S.p
    g, k = basis.g, basis.k
    mons = S.monomial_basis((2 * g - 2, 0))
    V = np.array([sec.coeff_vector(mons) for sec in basis.sections], dtype=np.int64)
    annihilators = kernel_basis(V, p)  # functionals vanishing on the canonical space
    ann = np.array(annihilators, dtype=np.int64)
    spaces = [
        [np.array(sec.coeff_vector(mons), dtype=np.int64) for sec in basis.sections]
    ]
    j = 1
    while 2 * g - 2 - j * k >= 0:
        deg_w = 2 * g - 2 - j * k
        blocks = []
        for a in range(j + 1):
            form = (gluing.f ** a) * (gluing.h ** (j - a))
            mult = _multiplication_matrix(form, deg_w, 2 * g - 2, S)
            blocks.append(ann @ mult % p)
        stacked = np.vstack(blocks)
        w_basis = kernel_basis(stacked, p)
        if not w_basis:
            break
        spaces.append(w_basis)
        j += 1
    return spaces


def _conjugate_partition(lam):
    out = []
    i = 1
    while True:
        c = sum(1 for x in lam if x >= i)
        if c == 0:
            break
        out.append(c)
        i += 1
    return out


def normalize_basis_for_scroll(basis, gluing):
    """Recombine the canonical basis block-major so the scroll swept by the
    pencil is cut out by 2x2 minors of consecutive-coordinate blocks."""
    S = basis.ring
    p = S.p
    g, k = basis.g, basis.k
    spaces = section_filtration(basis, gluing)
    dims = [len(w) for w in spaces]
    lam = [dims[j] - (dims[j + 1] if j + 1 < len(dims) else 0) for j in range(len(dims))]
    if lam[0] != k - 1:
        raise FiltrationMismatchError(
            f"pencil filtration has {lam[0]} blocks, expected k-1 = {k - 1}"
        )
    e = sorted((x - 1 for x in _conjugate_partition(lam)), reverse=True)
    if sum(e) != g - k + 1 or len(e) != k - 1:
        raise FiltrationMismatchError(f"scroll type {e} inconsistent with (g, k)")

    psis = []  # (e_i, psi poly), chosen from the deepest filtration level down
    for level in sorted(set(e), reverse=True):
        need = e.count(level)
        deg_w = 2 * g - 2 - level * k
        mons_w = S.monomial_basis((deg_w, 0))
        inherited = []
        for ei, psi in psis:
            for a in range(ei - level + 1):
                form = (gluing.f ** a) * (gluing.h ** (ei - level - a)) * psi
                inherited.append(np.array(form.coeff_vector(mons_w), dtype=np.int64))
        picked = extend_basis(inherited, spaces[level], p, len(mons_w))
        if len(picked) < need:
            raise FiltrationMismatchError(
                f"only {len(picked)} new sections at filtration level {level}, need {need}"
            )
        for v in picked[:need]:
            psis.append((level, from_coeff_vector(S, mons_w, v)))

    normalized = []
    blocks = []
    for ei, psi in psis:
        blocks.append((ei, psi))
        for a in range(ei + 1):
            normalized.append((gluing.f ** (ei - a)) * (gluing.h ** a) * psi)
    mons = S.monomial_basis((2 * g - 2, 0))
    mat = np.array([sec.coeff_vector(mons) for sec in normalized], dtype=np.int64)
    if rank(mat, p) != g:
        raise FiltrationMismatchError("normalized sections are dependent")
    return CanonicalBasis(
        S,
        g,
        k,
        basis.q_forms,
        basis.sections,
        normalized_sections=normalized,
        scroll_type=tuple(e),
        blocks=blocks,
    )


# ---------------------------------------------------------------------------
# Canonical ideal


def canonical_ring(g, p):
    return GradedRing(
        tuple(f"t_{j}" for j in range(g)), [(1, 0)] * g, order="grevlex", p=p
    )


def _generators_in_degree(T, sections, degree, lower_gens, base_ring):
    """Minimal degree-d generators of the kernel of t_j -> s_j, by exact
    linear algebra on the evaluation matrix."""
    g = len(sections)
    p = T.p
    mons = T.monomial_basis((degree, 0))
    target_deg = degree * (2 * g - 2)
    target_mons = base_ring.monomial_basis((target_deg, 0))
    cols = []
    section_of = {i: sections[i] for i in range(g)}
    for exp in mons:
        prod = base_ring.one()
        for i, ei in enumerate(exp):
            for _ in range(ei):
                prod = prod * section_of[i]
        cols.append(prod.coeff_vector(target_mons))
    a = np.array(cols, dtype=np.int64).T
    kern = kernel_basis(a, p)
    old = []
    for q in lower_gens:
        qd = sum(q.lead_exp())
        for mu in T.monomial_basis((degree - qd, 0)):
            old.append((T.monomial(mu) * q).coeff_vector(mons))
    new = extend_basis(old, kern, p, len(mons))
    return [from_coeff_vector(T, mons, v) for v in new]


def canonical_ideal(basis, spec):
    """The canonical ideal in T = GF(p)[t_0..t_{g-1}], generated by quadrics
    (cubics appended when the quadrics have wrong Hilbert data), with the
    Hilbert-data gate (projective dim 1, degree 2g-2, genus g)."""
    if basis.normalized_sections is None:
        raise ValueError("normalize the basis before computing the canonical ideal")
    g, p = spec.g, spec.p
    T = canonical_ring(g, p)
    S = basis.ring
    quadrics = _generators_in_degree(T, basis.normalized_sections, 2, [], S)
    gens = list(quadrics)
    expected = (1, 2 * g - 2, g)

    def gate(ideal):
        hd = hilbert_data(ideal)
        return (hd.projective_dimension, hd.degree, hd.arithmetic_genus) == expected, hd

    ideal = IdealGB(T, gens)
    need_cubics = spec.k == 3
    if not need_cubics:
        ok, hd = gate(ideal)
        if ok:
            return ideal, len(quadrics), hd
        need_cubics = True
    if need_cubics:
        cubics = _generators_in_degree(T, basis.normalized_sections, 3, quadrics, S)
        ideal = IdealGB(T, quadrics + cubics)
        ok, hd = gate(ideal)
        if ok:
            return ideal, len(quadrics), hd
    raise CurveVerificationError(
        f"canonical ideal has Hilbert data {hd}, expected {expected}"
    )


# ---------------------------------------------------------------------------
# Full curve model


@dataclass
class CurveModel:
    spec: CurveSpec
    gluing: GluingData
    basis: CanonicalBasis
    ideal: IdealGB
    hilbert: object
    quadric_count: int
    attempts: int = 1

    @property
    def ring(self):
        return self.ideal.ring


def build_curve(spec, max_attempts=20):
    """Run the randomized construction, redrawing on non-generic failures."""
    last = None
    for attempt in range(max_attempts):
        rng = random.Random(derive_seed(spec.seed, attempt, "curve"))
        try:
            gluing = build_gluing_data(spec, rng)
            basis = canonical_sections(gluing, spec.g)
            basis = normalize_basis_for_scroll(basis, gluing)
            ideal, nquad, hd = canonical_ideal(basis, spec)
            return CurveModel(spec, gluing, basis, ideal, hd, nquad, attempts=attempt + 1)
        except ConstructionError as exc:
            last = exc
    raise RetryExhaustedError(f"curve construction failed after {max_attempts} draws: {last}")
