import math

import mpmath
import pytest

from lorentzseq import (
    Case,
    DivergentSeries,
    EmbeddingSpec,
    Interval,
    UnsupportedPair,
    c0,
    classify,
    linf,
    lorentz,
    series_norm,
    weighted_lp,
    zeta_bracket,
)
from lorentzseq.catalog import parameter_grid

INF = math.inf


def spec(a, b):
    return EmbeddingSpec(a, b)


@pytest.mark.parametrize("s, closed", [(2.0, math.pi**2 / 6), (4.0, math.pi**4 / 90)])
def test_zeta_bracket_classical_values(s, closed):
    br = zeta_bracket(s, 1e-12)
    assert br.lo <= closed <= br.hi
    assert br.width <= 1e-12 * br.lo


@pytest.mark.parametrize("s", [1.05, 1.5, 2.5, 3.3, 7.0])
def test_zeta_bracket_against_mpmath(s):
    br = zeta_bracket(s, 1e-10)
    assert br.lo <= float(mpmath.zeta(s)) <= br.hi


def test_zeta_bracket_diverges_at_one():
    with pytest.raises(DivergentSeries):
        zeta_bracket(1.0)
    with pytest.raises(DivergentSeries):
        series_norm(1.0, 1.0, 2.0)  # exponent 1


def test_series_norm_pi_squared_over_six():
    br = series_norm(1, 2, 2, rel_tol=1e-8)
    assert br.contains(math.sqrt(math.pi**2 / 6))
    assert br.width <= 1e-8 * br.lo


@pytest.mark.parametrize("p1, p2, q2", [(1, 3, 2), (0.5, 2, 1), (2, INF, 3), (1, 2, 0.5)])
def test_series_norm_against_mpmath(p1, p2, q2):
    s = 1 + q2 / p1 - (0 if p2 == INF else q2 / p2)
    br = series_norm(p1, p2, q2, rel_tol=1e-10)
    assert br.contains(float(mpmath.zeta(s)) ** (1 / q2))
    assert br.width <= 1e-10 * br.lo


def test_interval():
    i = Interval(1, 2)
    assert isinstance(i.lo, float) and i.mid == 1.5 and i.contains(2.0)
    assert (i * 2).hi == 4.0
    with pytest.raises(ValueError):
        Interval(2, 1)


def test_l11_to_l22():
    v = classify(spec(lorentz(1, 1), lorentz(2, 2)))
    assert v.embedded
    assert v.constant == Interval.point(1) and v.exact_norm == Interval.point(1)
    assert v.maximally_noncompact is True
    assert v.theorem_tag is Case.INCL_Q1_LE_P1


def test_same_p_weak_target():
    v = classify(spec(lorentz(1, 2), lorentz(1, INF)))
    assert v.theorem_tag is Case.SAME_P_P_LT_Q1
    assert v.constant.hi == v.exact_norm.hi == math.sqrt(2)
    assert v.attainment == "limit-only"


def test_series_case():
    v = classify(spec(lorentz(1, INF), lorentz(2, 2)))
    assert v.theorem_tag is Case.INCL_SERIES
    assert v.exact_norm.contains(math.pi / math.sqrt(6))


@pytest.mark.parametrize("p, q", [(1, 2), (2, 2), (0.5, 1), (3, 1), (2, INF), (INF, 1)])
def test_lorentz_into_c0(p, q):
    v = classify(spec(lorentz(p, q), c0()))
    assert v.embedded and v.exact_norm == Interval.point(1)
    assert v.maximally_noncompact is True


def test_c0_into_linf():
    v = classify(spec(c0(), linf()))
    assert v.exact_norm == Interval.point(1) and v.maximally_noncompact is True


@pytest.mark.parametrize("p, q", [(1, 2), (1, 1), (2, 2), (2, 3)])
def test_lorentz_into_linf_not_maximal(p, q):
    v = classify(spec(lorentz(p, q), linf()))
    assert v.maximally_noncompact is False
    assert math.isclose(v.alpha_upper, 2 ** (-1 / q), rel_tol=1e-15)


def test_infinite_p_into_linf_has_no_alpha_bound():
    v = classify(spec(lorentz(INF, 1), linf()))
    assert v.alpha_upper is None and v.maximally_noncompact is None


def test_uncovered_pairs():
    for a, b in [(lorentz(2, 2), lorentz(1, 2)), (lorentz(1, 3), lorentz(1, 2)),
                 (linf(), c0()), (c0(), lorentz(2, 2))]:
        v = classify(spec(a, b))
        assert v.theorem_tag is Case.UNCOVERED and v.embedded is None


def test_weighted_is_not_classified():
    with pytest.raises(UnsupportedPair):
        classify(spec(lorentz(2, 2), weighted_lp(2)))


def test_linf_aliases():
    v = classify(spec(lorentz(INF, INF), linf()))
    assert v.theorem_tag is Case.IDENTITY


def test_small_q_leaves_exact_norm_open():
    v = classify(spec(lorentz(1, 0.5), lorentz(2, 0.7)))
    assert v.embedded and v.constant == Interval.point(1) and v.exact_norm is None


def test_grid_invariants():
    for sp in parameter_grid():
        v = classify(sp)
        if v.theorem_tag is Case.UNCOVERED:
            continue
        assert v.embedded is True
        if v.exact_norm is not None:
            assert v.exact_norm.hi <= v.constant.hi
        if v.alpha_upper is not None:
            assert v.alpha_upper <= (v.exact_norm or v.constant).lo
        # e^1 has norm 1 everywhere, so the constant is at least 1
        assert v.constant.hi >= 1.0


@pytest.mark.parametrize("a, b, x", [
    ((3, 2), (4, 1), [1.0, 1.0]),
    ((1, 2), (2, 1), [1.0, 1 / 2, 1 / 3, 1 / 4]),
    ((1, 3), (2, 1), [1.0, 1 / 2, 1 / 3, 1 / 4]),
])
def test_unit_constant_fails_below_q1(a, b, x):
    from conftest import lorentz_oracle

    ratio = lorentz_oracle(x, *b) / lorentz_oracle(x, *a)
    assert ratio > 1.05
    v = classify(spec(lorentz(*a), lorentz(*b)))
    assert v.embedded and v.exact_norm is None
    assert v.theorem_tag is Case.INCL_VIA_WEAK
    assert v.constant.hi >= ratio


def test_unit_constant_kept_where_proved():
    assert classify(spec(lorentz(3, 2), lorentz(4, 2))).exact_norm == Interval.point(1)
    assert classify(spec(lorentz(3, 2), lorentz(4, 5))).exact_norm == Interval.point(1)
    v = classify(spec(lorentz(1, 3), lorentz(2, 3)))
    assert v.theorem_tag is Case.INCL_Q1_EQ_Q2 and v.exact_norm == Interval.point(1)
