"""Randomized nodal-curve construction and its certificates."""

import random

import numpy as np
import pytest

from scrollres.curvegen import (
    CurveSpec,
    base_ring,
    build_curve,
    build_gluing_data,
    canonical_sections,
    derive_seed,
    evaluate_form,
    form_coeffs,
    gcd_degree,
    normalize_basis_for_scroll,
    random_form,
    rational_roots,
)
from scrollres.linalg import rank

P = 10007


def test_spec_validation():
    with pytest.raises(ValueError):
        CurveSpec(3, 2)  # hyperelliptic excluded
    with pytest.raises(ValueError):
        CurveSpec(9, 2)
    with pytest.raises(ValueError):
        CurveSpec(9, 9)  # k > g - 1
    with pytest.raises(ValueError):
        CurveSpec(9, 6, p=11)  # too few rational points
    CurveSpec(4, 3)


def test_derive_seed_stable():
    # fixed byte-level rule: SHA-256 of the colon-joined labels
    assert derive_seed(0, "gluing") == derive_seed("0", "gluing")
    assert derive_seed(1, 2) != derive_seed(2, 1)
    assert 0 <= derive_seed("x") < 2**64


def test_form_utilities():
    S = base_ring(P)
    s, t = S.gens()
    f = s * s * 3 + s * t * 5 + t * t
    assert form_coeffs(f, 2) == [3, 5, 1]
    assert evaluate_form(f, (1, 0), P) == 3
    assert evaluate_form(f, (0, 1), P) == 1
    with pytest.raises(ValueError):
        form_coeffs(s + t * t, 2)


def test_rational_roots():
    S = base_ring(P)
    s, t = S.gens()
    # roots of s(s - t)(s - 2t) are (0:1), (1:1), (2:1)
    f = s * (s - t) * (s - 2 * t)
    assert rational_roots(f, 3, P) == [(0, 1), (1, 1), (2, 1)]
    # t^2 * s vanishes at (0:1) and at infinity
    assert rational_roots(t * t * s, 3, P) == [(0, 1), (1, 0)]


def test_gcd_degree():
    S = base_ring(P)
    s, t = S.gens()
    f = (s - t) * (s - 2 * t) * s
    h = (s - t) * (s + t) * t
    assert gcd_degree(f, h, 3, 3, P) == 1
    assert gcd_degree(f, f, 3, 3, P) == 3
    assert gcd_degree(s * s, t * t, 2, 2, P) == 0
    rng = random.Random(1)
    a, b = random_form(S, 4, rng), random_form(S, 5, rng)
    common = (s - 3 * t) * (s + 7 * t)
    assert gcd_degree(a * common, b * common, 6, 7, P) >= 2


def test_gluing_fiber_conditions():
    spec = CurveSpec(9, 6, P, 5)
    gl = build_gluing_data(spec)
    pts = gl.points_p + gl.points_q
    assert len(pts) == 18 and len(set(pts)) == 18
    for pi, qi, (a, b) in zip(gl.points_p, gl.points_q, gl.multipliers):
        fp, fq = evaluate_form(gl.f, pi, P), evaluate_form(gl.f, qi, P)
        hp, hq = evaluate_form(gl.h, pi, P), evaluate_form(gl.h, qi, P)
        # P_i and Q_i sit in one fiber of (f : h)
        assert fp * hq % P == fq * hp % P
        # multiplier convention: a_i = f(P_i)/f(Q_i), b_i = 1
        assert b == 1 and a != 0
        assert a * fq % P == fp
        assert a * hq % P == hp
    for (r0, r1), pi, qi in zip(gl.points_r, gl.points_p, gl.points_q):
        det = r1 * gl.f - r0 * gl.h
        assert evaluate_form(det, pi, P) == 0
        assert evaluate_form(det, qi, P) == 0


def test_canonical_sections():
    spec = CurveSpec(9, 6, P, 5)
    gl = build_gluing_data(spec)
    basis = canonical_sections(gl, spec.g)
    g = spec.g
    mons = gl.ring.monomial_basis((2 * g - 2, 0))
    assert len(mons) == 2 * g - 1
    mat = np.array([sec.coeff_vector(mons) for sec in basis.sections], dtype=np.int64)
    assert mat.shape == (g, 2 * g - 1)
    assert rank(mat, P) == g
    for i, q in enumerate(basis.q_forms):
        assert evaluate_form(q, gl.points_p[i], P) == 0
        assert evaluate_form(q, gl.points_q[i], P) == 0
    # s_j picks up every node quadric except its own
    assert evaluate_form(basis.sections[0], gl.points_p[1], P) == 0
    assert evaluate_form(basis.sections[0], gl.points_p[0], P) != 0


def test_small_genus_section_degree():
    spec = CurveSpec(4, 3, P, 0)
    gl = build_gluing_data(spec)
    basis = canonical_sections(gl, 4)
    assert len(basis.sections) == 4
    assert all(sec.multidegree() == (6, 0) for sec in basis.sections)


def test_normalized_basis_spans_same_space():
    spec = CurveSpec(7, 4, P, 3)
    gl = build_gluing_data(spec)
    basis = normalize_basis_for_scroll(canonical_sections(gl, 7), gl)
    mons = gl.ring.monomial_basis((12, 0))
    old = np.array([s.coeff_vector(mons) for s in basis.sections], dtype=np.int64)
    new = np.array(
        [s.coeff_vector(mons) for s in basis.normalized_sections], dtype=np.int64
    )
    assert rank(new, P) == 7
    assert rank(np.vstack([old, new]), P) == 7
    assert sum(basis.scroll_type) == 7 - 4 + 1
    assert len(basis.scroll_type) == 3


def test_golden_curve_model(golden_model):
    m = golden_model
    assert m.basis.scroll_type == (1, 1, 1, 1, 0)
    assert m.quadric_count == 21 == (9 - 2) * (9 - 3) // 2
    hd = m.hilbert
    assert (hd.projective_dimension, hd.degree, hd.arithmetic_genus) == (1, 16, 9)
    # every generator vanishes under t_j -> s_j
    from scrollres.poly import RingMap

    par = RingMap(m.ring, m.gluing.ring, m.basis.normalized_sections)
    for gen in m.ideal.generators:
        assert par(gen).is_zero()


def test_trigonal_complete_intersection():
    model = build_curve(CurveSpec(4, 3, P, 1))
    assert model.quadric_count == 1
    assert len(model.ideal.generators) == 2
    degs = sorted(sum(g.lead_exp()) for g in model.ideal.generators)
    assert degs == [2, 3]
    hd = model.hilbert
    assert (hd.projective_dimension, hd.degree, hd.arithmetic_genus) == (1, 6, 4)
    assert model.basis.scroll_type in ((1, 1), (2, 0))


def test_build_curve_deterministic():
    a = build_curve(CurveSpec(6, 4, P, 9))
    b = build_curve(CurveSpec(6, 4, P, 9))
    assert [str(x) for x in a.ideal.generators] == [str(x) for x in b.ideal.generators]
    assert a.basis.scroll_type == b.basis.scroll_type


def test_quadric_count_formula():
    for g, k, seed in ((6, 4, 2), (7, 5, 2)):
        model = build_curve(CurveSpec(g, k, P, seed))
        assert model.quadric_count == (g - 2) * (g - 3) // 2
