"""Scroll type, Cox ring, the two ring maps, and the curve on the scroll."""

import pytest

from scrollres.curvegen import CurveSpec, build_curve
from scrollres.errors import GeneratorCountError
from scrollres.groebner import IdealGB
from scrollres.scrollcox import (
    CurveOnScroll,
    ScrollType,
    build_cox_ring,
    build_scroll_embedding,
    curve_on_scroll,
    parametrization_consistent,
    scroll_type_from_curve,
    verify_preimage,
    verify_scroll_kernel,
)

P = 10007


def test_scroll_type_invariants():
    st = ScrollType((1, 1, 1, 1, 0))
    assert st.d == 5 and st.f == 4 and st.r == 8
    assert st.balanced
    assert not ScrollType((2, 0)).balanced
    with pytest.raises(ValueError):
        ScrollType((0, 1))  # must be nonincreasing
    with pytest.raises(ValueError):
        ScrollType((1, -1))
    with pytest.raises(ValueError):
        ScrollType(())


def test_scroll_type_from_golden(golden_model):
    st = scroll_type_from_curve(golden_model)
    assert st.e == (1, 1, 1, 1, 0)


def test_cox_ring_degrees():
    cox = build_cox_ring(ScrollType((1, 1, 1, 1, 0)), P)
    assert cox.ring.names == ("u_0", "u_1", "u_2", "u_3", "u_4", "v", "w")
    assert cox.ring.degrees == ((0, 1),) * 4 + ((1, 1), (1, 0), (1, 0))
    # sections of O(H) = H^0(E) have dimension g = 9
    assert len(cox.section_basis(1, 0)) == 9
    cox2 = build_cox_ring(ScrollType((2, 0)), P)
    assert cox2.ring.degrees == ((0, 1), (2, 1), (1, 0), (1, 0))


def test_section_dimension_matches_basis():
    for e in ((1, 1, 1, 1, 0), (2, 1), (2, 0), (3, 1, 1)):
        cox = build_cox_ring(ScrollType(e), P)
        for a in range(4):
            for b in range(-3, 4):
                assert cox.section_dimension(a, b) == len(cox.section_basis(a, b))
        assert cox.section_dimension(-1, 5) == 0


def test_golden_scroll_matrix(golden_emb):
    top, bottom = golden_emb.scroll_matrix
    assert [str(x) for x in top] == ["t_0", "t_2", "t_4", "t_6"]
    assert [str(x) for x in bottom] == ["t_1", "t_3", "t_5", "t_7"]
    assert len(golden_emb.scroll_ideal.generators) == 6  # all 2x2 minors


def test_scroll_contains_curve(golden_model, golden_emb):
    for minor in golden_emb.scroll_ideal.generators:
        assert golden_model.ideal.contains(minor)


def test_golden_scroll_kernel(golden_emb):
    assert verify_scroll_kernel(golden_emb)


def test_golden_parametrization(golden_model, golden_emb):
    assert parametrization_consistent(golden_model, golden_emb)


def test_golden_curve_on_scroll(golden_cos, golden_emb):
    assert len(golden_cos.J.generators) == 9  # beta_1 = k(k-3)/2
    assert sorted(golden_cos.twists, reverse=True) == [1] * 6 + [0] * 3
    assert all(d2 == 2 for _d1, d2 in golden_cos.generator_bidegrees)
    # generators vanish on the curve
    for gen in golden_cos.J.generators:
        assert golden_emb.cox_parametrization(gen).is_zero()


def test_twist_recovery(golden_cos, golden_emb):
    e1 = golden_emb.scroll.e[0]
    for (d1, d2), a in zip(golden_cos.generator_bidegrees, golden_cos.twists):
        assert a == d2 * e1 - d1


def test_golden_preimage(golden_model, golden_emb, golden_cos):
    assert verify_preimage(golden_model, golden_emb, golden_cos)


def test_preimage_rejects_wrong_ideals(golden_model, golden_emb, golden_cos):
    ring = golden_emb.cox.ring
    # the empty ideal pulls back to the scroll kernel, smaller than I_C
    empty = CurveOnScroll(IdealGB(ring, []), [], [])
    assert not verify_preimage(golden_model, golden_emb, empty)
    # the unit ideal pulls back to everything
    unit = CurveOnScroll(IdealGB(ring, [ring.one()]), [(0, 0)], [0])
    assert not verify_preimage(golden_model, golden_emb, unit)


def test_trigonal_curve_on_scroll():
    model = build_curve(CurveSpec(4, 3, P, 1))
    emb = build_scroll_embedding(model)
    cos = curve_on_scroll(model, emb)
    st = emb.scroll
    assert len(cos.J.generators) == 1
    # single relation of class 3H - (f-2)R, f = 2
    assert cos.twists == [st.f - 2] == [0]
    assert cos.generator_bidegrees == [(3 * st.e[0], 3)]
    assert emb.cox_parametrization(cos.J.generators[0]).is_zero()


def test_pentagonal_counts():
    model = build_curve(CurveSpec(7, 5, P, 2))
    emb = build_scroll_embedding(model)
    cos = curve_on_scroll(model, emb)
    assert len(cos.J.generators) == 5 * 2 // 2  # k(k-3)/2 at k = 5
    assert verify_scroll_kernel(emb)


def test_window_override_too_small():
    model = build_curve(CurveSpec(6, 4, P, 0))
    emb = build_scroll_embedding(model)
    with pytest.raises(GeneratorCountError):
        # a window excluding every generic twist cannot find beta_1 generators
        curve_on_scroll(model, emb, window=(10, 12))
