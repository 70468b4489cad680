from fractions import Fraction
from math import floor

import pytest
from hypothesis import given
from hypothesis import strategies as st

from totalreality.bounds import (
    G0,
    G1,
    UnconstructibleCurve,
    alexander_bound,
    alexander_shape,
    budget,
    classify,
    covering_numerics,
    curve_data,
    cusp_count,
    derived_bound,
    even_case_slack,
    genus_ceiling,
    integral_threshold,
    node_count,
    node_count_variant,
    odd_case_slack,
    rank_L_minus,
    report,
    report_rows,
)
from totalreality.discriminant import discr


def test_curve_data_examples():
    cd = curve_data(1, 4)
    assert (cd.c, cd.n) == (8, 0)
    cd = curve_data(0, 3)
    assert (cd.c, cd.n) == (4, 0)
    assert cusp_count(0, 2) == 2 and node_count(0, 2) == -1
    with pytest.raises(UnconstructibleCurve):
        curve_data(0, 2)
    with pytest.raises(ValueError):
        curve_data(0, 6, split=(3, 2))


@given(st.integers(2, 60), st.integers(0, 400))
def test_genus_formula(d, g):
    assert g + cusp_count(g, d) + node_count(g, d) == (d - 1) ** 2
    assert (node_count(g, d) >= 0) == (g <= genus_ceiling(d))


def test_covering_numerics():
    assert covering_numerics(1) == (6, -4, 1)
    assert covering_numerics(2) == (22, -16, 3)
    for k in range(1, 101):
        b2, sigma, sp = covering_numerics(k)
        assert (b2 + sigma) == 2 * sp == 2 * (2 * k * k - 4 * k + 3)


@given(st.integers(1, 200), st.integers(0, 500))
def test_rank_L_minus_identity(k, x):
    assert rank_L_minus(k, x) + (k - 1) ** 2 + x == covering_numerics(k)[0]


def test_rank_L_minus_examples():
    assert rank_L_minus(2, 0) == 21
    assert rank_L_minus(1, 0) == 6


def test_alexander():
    assert alexander_bound(2) == 0
    assert alexander_bound(6, 3) == 4
    assert alexander_bound(5, 3) == 3
    shape = alexander_shape(6, 3)
    assert (shape.plus_rank, shape.minus_rank) == (5, 4)
    with pytest.raises(ValueError):
        alexander_bound(6, 2)


def test_even_budget_example():
    b = budget(curve_data(3, 6))
    assert (b.curve.c, b.curve.n) == (16, 6)
    assert b.rank_S == 2 * 16 + 6 + 1
    assert b.ell3_S == 16
    assert b.s_minus.signature() == (1, 38, 0)
    assert b.sigma_plus_definite_rank == 1


def test_odd_budget_example():
    cd = curve_data(1, 5)
    b = budget(cd, "odd")
    extra = 2 * (cd.d - 1) + 1 + 3
    assert b.rank_S == 2 * cd.c + cd.n + (cd.d - 1) + 3 + 1
    assert b.sigma_plus_definite_rank == cd.s + 1 + cd.d
    assert b.sigma_minus.rank + b.sigma_plus_definite_rank - (2 * cd.c + cd.r + 2 * cd.s + 1) == extra
    assert b.ell3_S == cd.c


@given(st.integers(3, 12), st.data())
def test_budget_ell3_equals_c(d, data):
    g = data.draw(st.integers(0, max(genus_ceiling(d), 0)))
    cd = curve_data(g, d)
    for parity in ("even", "odd"):
        b = budget(cd, parity)
        # S^- is negative definite apart from the single [4]
        assert b.s_minus.signature() == (1, b.rank_S - 1, 0)
        assert discr(b.s_minus).ell_p(3) == b.ell3_S == cd.c


def test_even_slack_examples():
    assert even_case_slack(2, 1) == -1
    for k in range(1, 51):
        passing = [g for g in range(genus_ceiling(2 * k) + 1) if even_case_slack(k, g) >= 0]
        assert max(passing, default=-1) == k * k - 2 * k


def test_odd_slack_examples():
    assert odd_case_slack(2, 0) == -1
    assert odd_case_slack(3, 1) >= 0
    for k in range(2, 51):
        passing = [g for g in range(genus_ceiling(2 * k - 1) + 1) if odd_case_slack(k, g) >= 0]
        assert max(passing, default=-1) == floor(k * k - Fraction(10 * k - 7, 3))


def test_G_values():
    assert G0(4) == 0 and G1(4) == 1
    assert G0(5) == Fraction(4, 3) and G0(6) == 3
    assert G0(2) == -1


@pytest.mark.parametrize("d", range(2, 101))
def test_derived_bound_matches_G0(d):
    assert derived_bound(d) == integral_threshold(G0(d))


def test_derived_bound_examples():
    assert derived_bound(4) == 0
    assert derived_bound(6) == 3
    assert derived_bound(7) == floor(G0(7)) == 5


def test_variant_node_count_breaks_the_pipeline():
    assert node_count_variant(1, 4) != 0
    bad = [k for k in range(2, 51) if derived_bound(2 * k, nodes=node_count_variant) != k * k - 2 * k]
    assert bad


def test_G0_G1_gap():
    for d in range(1, 1001):
        k = (d + 1) // 2
        assert G0(d) - G1(d) <= -Fraction((k - 1) ** 2, 3) <= 0


def test_classify_examples():
    assert str(classify(0, 7)) == "Covered [g-zero: EG]"
    assert str(classify(0, 9)) == "Covered [g-zero: EG]"
    assert str(classify(1, 5)) == "Open"
    assert classify(2, 5).sources == ("G0-bound",)
    for d in range(1, 21):
        assert classify(0, d).status == "Covered"
    for d in range(1, 5):
        for g in range(50):
            assert classify(g, d).status == "Covered"
    with pytest.raises(ValueError):
        classify(-1, 3)


def test_report_records():
    rec = report(1, 4, with_ell3=True)
    assert (rec.c, rec.n, rec.slack_even, rec.ell3) == (8, 0, -1, 8)
    rows = list(report_rows(6))
    assert {r.d for r in rows} == set(range(2, 7))
    assert all(r.slack_even is None for r in rows if r.d % 2)


def test_reduced_even_inequality():
    # with c >= 2(d-2) the clamp is inactive and the slack collapses to one inequality
    for k in range(2, 51):
        d = 2 * k
        for g in range(genus_ceiling(d) + 1):
            c, n = cusp_count(g, d), node_count(g, d)
            assert c >= 2 * (d - 2)
            reduced = 3 * c + n - 2 * (d - 2) <= 7 * k * k - 6 * k + 3
            assert (even_case_slack(k, g) >= 0) == reduced
