from fractions import Fraction

import pytest

from projcorrect import compute_A, compute_B, hypotheses, max_eps
from projcorrect.bounds import (
    MAX_EPS_DENOMINATOR,
    compute_A_float,
    compute_B_float,
    is_prime_power,
    parse_fraction,
)


def test_A_exact_value():
    # hand evaluation: 2*(1/31)*(31/30)^2 - 1/31 = 1022/27900 = 511/13950
    assert compute_A(2, 4, 0) == Fraction(511, 13950)


def test_A_monotone_in_eps():
    assert compute_A(2, 7, Fraction(1, 100)) > compute_A(2, 7, 0)


def test_A_dual_evaluation():
    exact = compute_A(2, 7, 0)
    assert abs(float(exact) - compute_A_float(2, 7, 0.0)) < 1e-12


def test_B_value_and_dual_evaluation():
    exact = compute_B(2, 7, 0)
    approx = compute_B_float(2, 7, 0.0)
    assert abs(float(exact) - approx) < 1e-9
    assert abs(float(exact) - 0.877) < 1e-3


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("n", range(4, 15))
@pytest.mark.parametrize("eps", [Fraction(0), Fraction(1, 1000), Fraction(1, 100)])
def test_exact_matches_float_on_grid(q, n, eps):
    for exact, approx in [
        (compute_A(q, n, eps), compute_A_float(q, n, float(eps))),
        (compute_B(q, n, eps), compute_B_float(q, n, float(eps))),
    ]:
        assert abs(float(exact) - approx) <= 1e-9 * max(1.0, abs(approx))


def test_B_nondecreasing_in_eps():
    for q, n in [(2, 5), (3, 8), (5, 10)]:
        grid = [Fraction(i, 1000) for i in range(0, 11, 2)]
        vals = [compute_B(q, n, e) for e in grid]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_B_dominates_A_on_grid():
    for n in range(4, 13):
        for eps in (Fraction(0), Fraction(1, 500)):
            assert compute_B(2, n, eps) > compute_A(2, n, eps)


def test_hypotheses_examples():
    r = hypotheses(2, 4, 0)
    # A + 72/30 = 2.44... exceeds 1/2
    assert not r.hyp1_strict
    assert float(r.A + Fraction(72, 30)) > 2.4
    r2 = hypotheses(2, 14, Fraction(1, 1000))
    assert r2.hyp2
    assert r2.hyp1_strict and r2.hyp1_theorem


def test_hyp1_strict_implies_theorem():
    for q in (2, 3):
        for n in range(4, 16):
            r = hypotheses(q, n, Fraction(1, 2000))
            if r.hyp1_strict:
                assert r.hyp1_theorem


def test_guaranteed_agreement_below_one():
    for q, n in [(2, 4), (2, 10), (3, 6), (5, 8)]:
        assert hypotheses(q, n, 0).guaranteed_agreement < 1


def test_max_eps_frontier():
    assert max_eps(2, 4) == 0
    m10 = max_eps(2, 10)
    assert 0 < m10 < Fraction(1, 2048)
    assert max_eps(2, 14) > 0


def test_max_eps_is_exact_boundary():
    m = max_eps(2, 14)
    assert m.denominator <= MAX_EPS_DENOMINATOR
    at = hypotheses(2, 14, m)
    assert at.hyp1_strict and at.hyp2
    beyond = hypotheses(2, 14, m + Fraction(1, MAX_EPS_DENOMINATOR))
    assert not (beyond.hyp1_strict and beyond.hyp2)


def test_max_eps_nondecreasing_in_n():
    vals = [max_eps(2, n) for n in range(8, 17)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_positive_guarantee_under_max_eps():
    for q, n in [(2, 12), (2, 14), (2, 16), (3, 10)]:
        m = max_eps(q, n)
        if m > 0:
            assert hypotheses(q, n, m).guaranteed_agreement > 0


def test_validation_errors():
    with pytest.raises(ValueError):
        compute_A(6, 4, 0)  # not a prime power
    with pytest.raises(ValueError):
        compute_A(2, 0, 0)
    with pytest.raises(ValueError):
        compute_A(2, 4, Fraction(3, 2))
    assert is_prime_power(8) and is_prime_power(9) and not is_prime_power(12)


def test_report_json_schema():
    d = hypotheses(2, 5, Fraction(1, 100)).to_json_dict()
    assert d["q"] == 2 and d["n"] == 5
    assert d["eps"] == {"num": 1, "den": 100}
    assert set(d) == {
        "q", "n", "eps", "A", "B", "hyp1_strict", "hyp1_theorem", "hyp2",
        "guaranteed_agreement",
    }
    assert d["A"]["den"] > 0


def test_parse_fraction():
    assert parse_fraction("3/1000") == Fraction(3, 1000)
    assert parse_fraction("0") == 0
