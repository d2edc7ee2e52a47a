import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from admissible_lab.bounds import (
    EULER_GAMMA,
    ChainViolation,
    SizingReport,
    half_log_bound,
    log_factorial,
    mertens_product,
    mertens_product_exact,
    mertens_table,
    required_r,
    rosser_schoenfeld_lower,
)
from admissible_lab.extended import ExtendedReal
from oracles import exact_mertens, trial_primes

mpmath.mp.dps = 50


def _rs_oracle(r):
    lr = mpmath.log(r)
    return mpmath.exp(-mpmath.euler) / lr * (1 - 1 / lr**2)


def test_gamma_constant():
    assert abs(EULER_GAMMA - float(mpmath.euler)) < 1e-16


def test_mertens_examples():
    assert mertens_product_exact(1) == 1
    assert mertens_product_exact(10) == Fraction(8, 35)
    assert mertens_product(1) == 1
    assert abs(float(mertens_product(10)) - 8 / 35) < 1e-15
    # exact rational over p <= 23
    assert mertens_product_exact(25) == exact_mertens(25) == Fraction(110592, 676039)
    assert round(float(mertens_product(25)), 6) == 0.163588


def test_mertens_is_rounded_down():
    for r in (10, 25, 97, 1000, 9999):
        exact = exact_mertens(r)
        d = mertens_product(r)
        assert Fraction(d) <= exact
        assert exact - Fraction(d) < Fraction(1, 10**38)


def test_mertens_beyond_exact_limit_is_a_lower_bound():
    r = 20011
    exact = mertens_product_exact(r)
    d = mertens_product(r)
    assert Fraction(d) <= exact
    assert exact - Fraction(d) < Fraction(1, 10**30)


def test_mertens_table_steps_at_primes():
    primes = set(trial_primes(2000))
    table = list(mertens_table(2000))
    assert [r for r, _ in table] == list(range(2001))
    for (r0, v0), (r1, v1) in zip(table, table[1:]):
        if r1 in primes:
            assert v1 < v0
        else:
            assert v1 == v0


def test_rosser_schoenfeld_examples():
    assert rosser_schoenfeld_lower(25) == pytest.approx(float(_rs_oracle(25)), rel=1e-14)
    assert round(rosser_schoenfeld_lower(25), 6) == 0.157592
    assert rosser_schoenfeld_lower(math.e) == 0.0
    lr = math.log(10**6)
    assert rosser_schoenfeld_lower(10**6) == pytest.approx(math.exp(-EULER_GAMMA) / lr * (1 - 1 / lr**2), rel=1e-15)
    assert rosser_schoenfeld_lower(10**6) == pytest.approx(float(_rs_oracle(10**6)), rel=1e-14)


@pytest.mark.parametrize("bad", [1, 0.5, 0, -3])
def test_log_bounds_domain(bad):
    with pytest.raises(ValueError):
        rosser_schoenfeld_lower(bad)
    with pytest.raises(ValueError):
        half_log_bound(bad)


def test_half_log_bound_examples():
    assert half_log_bound(25) == pytest.approx(0.155334, abs=1e-6)
    assert half_log_bound(math.e) == 0.5
    assert half_log_bound(math.e**2) == pytest.approx(0.25, rel=1e-15)


def test_half_log_below_rosser_from_25_but_not_at_20():
    # e^-gamma (1 - 1/L^2) >= 1/2 needs L >= 3.02, i.e. r >= 20.5
    assert rosser_schoenfeld_lower(20) < half_log_bound(20)
    assert all(rosser_schoenfeld_lower(r) >= half_log_bound(r) for r in range(21, 2000))


@pytest.mark.parametrize(
    "B, C, r, mid",
    [(3, 1, 404, 6 - math.log(12)), (4, 1, 2981, 8 - math.log(16))],
)
def test_required_r_examples(B, C, r, mid):
    rep = required_r(B, C)
    assert rep.r == r == math.ceil(math.exp(2 * B * C))
    assert float(rep.chain_mid) == pytest.approx(mid, rel=1e-15)
    assert float(rep.lhs) == pytest.approx(math.log(r / (2 * math.log(r))) / C, rel=1e-14)
    assert rep.chain_holds


def test_required_r_b3_c1_values():
    rep = required_r(3, 1)
    assert round(float(rep.lhs), 3) == 3.516
    assert round(float(rep.chain_mid), 3) == 3.515


def test_required_r_symbolic():
    rep = required_r(3, 1000)
    assert rep.symbolic and rep.r is None
    assert rep.r_magnitude.exponent10 == 2605
    # 6000 / ln 10 = 2605.7668...
    assert math.log10(rep.r_magnitude.mantissa) == pytest.approx(6000 / math.log(10) - 2605, abs=1e-9)
    assert rep.chain_holds


def test_required_r_is_exact_ceiling():
    rep = required_r(10, 10)
    assert not rep.symbolic
    mpmath.mp.dps = 120
    try:
        e = mpmath.exp(200)
        assert rep.r == int(mpmath.ceil(e))
        assert rep.r - 1 < e <= rep.r
    finally:
        mpmath.mp.dps = 50


@pytest.mark.parametrize("B", range(3, 11))
@pytest.mark.parametrize("C", [1, 2, 5, 10])
def test_required_r_chain_grid(B, C):
    rep = required_r(B, C)
    assert rep.lhs >= rep.chain_mid > B


def test_required_r_rejects_failing_chain():
    # 2B - log(4BC)/C = 6 - 2 log 6 < 3 for (3, 0.5)
    with pytest.raises(ChainViolation):
        required_r(3, 0.5)
    with pytest.raises(ChainViolation):
        required_r(3, 0.01)
    with pytest.raises(ValueError):
        required_r(2, 1)
    with pytest.raises(ValueError):
        required_r(3, 0)


def test_sizing_report_round_trip():
    for B, C in [(3, 1), (3, 1000), (7, 2.5)]:
        rep = required_r(B, C)
        assert SizingReport.from_dict(rep.to_dict()) == rep


def test_log_factorial_examples():
    assert log_factorial(0).value == 0
    assert log_factorial(1).value == 0
    v = log_factorial(20)
    assert v.value.to_float() == pytest.approx(math.log(2432902008176640000), rel=1e-15)
    assert round(v.value.to_float(), 4) == 42.3356
    assert v.method == "exact-sum"


def test_log_factorial_stirling_against_lgamma():
    for m in (10**6 + 1, 10**7, 10**9, 12345678901):
        lf = log_factorial(m)
        assert lf.method == "stirling"
        assert lf.value.to_float() == pytest.approx(float(mpmath.loggamma(m + 1)), rel=lf.rel_error)


def test_log_factorial_crossover_consistency():
    m = 10**6
    exact = log_factorial(m)
    mpmath.mp.dps = 50
    # the Stirling formula evaluated at M = 10^6 itself must match the exact sum
    stirling = m * mpmath.log(m) - m + mpmath.log(2 * mpmath.pi * m) / 2 + mpmath.mpf(1) / (12 * m)
    assert abs(exact.value.to_float() - float(stirling)) / float(stirling) < 1e-9


@pytest.mark.parametrize("m", [10**6 - 2, 10**6 - 1, 10**6, 10**6 + 1, 10**9])
def test_log_factorial_increment(m):
    a, b = log_factorial(m), log_factorial(m + 1)
    tolerance = a.value.to_float() * a.rel_error + b.value.to_float() * b.rel_error
    assert abs((b.value - a.value).to_float() - math.log(m + 1)) <= tolerance


def test_log_factorial_huge_arguments():
    m = ExtendedReal.from_log10(10**6)  # M = 10^(10^6)
    lf = log_factorial(m)
    # ln(M!) ~ M (ln M - 1) with ln M = 10^6 ln 10
    expected_log10 = 10**6 + math.log10(10**6 * math.log(10) - 1)
    assert lf.value.exponent10 == math.floor(expected_log10)
    assert math.log10(lf.value.mantissa) == pytest.approx(expected_log10 % 1, abs=1e-9)
    big = log_factorial(10**400)
    assert big.value.exponent10 == 402  # 10^400 * (400 ln 10 - 1) = 9.2e402


class TestExtendedReal:
    def test_normalization(self):
        x = ExtendedReal.from_float(1234.5)
        assert (x.sign, x.exponent10) == (1, 3)
        assert x.mantissa == pytest.approx(1.2345)
        assert ExtendedReal.zero().to_float() == 0.0
        with pytest.raises(ValueError):
            ExtendedReal(1, 12.0, 0)

    def test_from_int_large(self):
        n = 3**100000
        x = ExtendedReal.from_int(n)
        log10 = 100000 * mpmath.log10(3)
        assert x.exponent10 == int(mpmath.floor(log10))
        assert x.mantissa == pytest.approx(float(10 ** (log10 - mpmath.floor(log10))), rel=1e-13)

    def test_from_ln(self):
        x = ExtendedReal.from_ln(6000)
        assert x.exponent10 == 2605
        assert x.ln().to_float() == pytest.approx(6000, rel=1e-14)

    def test_overflow_and_underflow_to_float(self):
        assert ExtendedReal(1, 2.0, 400).to_float() == math.inf
        assert ExtendedReal(1, 2.0, -400).to_float() == 0.0
        assert ExtendedReal(1, 2.0, -310).to_float() == pytest.approx(2e-310)

    @settings(max_examples=300)
    @given(
        st.floats(min_value=-1e150, max_value=1e150, allow_nan=False).filter(lambda v: abs(v) > 1e-150),
        st.floats(min_value=-1e150, max_value=1e150, allow_nan=False).filter(lambda v: abs(v) > 1e-150),
    )
    def test_arithmetic_matches_float(self, a, b):
        x, y = ExtendedReal.from_float(a), ExtendedReal.from_float(b)
        assert (x * y).to_float() == pytest.approx(a * b, rel=1e-14)
        assert (x / y).to_float() == pytest.approx(a / b, rel=1e-14)
        s = (x + y).to_float()
        assert s == pytest.approx(a + b, rel=1e-12, abs=1e-14 * max(abs(a), abs(b)))
        assert (x < y) == (a < b)
        assert (x == y) == (a == b) or x.isclose(y, 1e-15)

    @settings(max_examples=200)
    @given(st.floats(min_value=1e-300, max_value=1e300))
    def test_ln_matches_math(self, a):
        x = ExtendedReal.from_float(a)
        assert x.ln().to_float() == pytest.approx(math.log(a), rel=1e-13, abs=1e-13)

    def test_ordering_across_huge_exponents(self):
        a = ExtendedReal(1, 9.9, 10**30)
        b = ExtendedReal(1, 1.0, 10**30 + 1)
        assert a < b and -b < -a
        assert ExtendedReal.zero() < a
        assert -a < ExtendedReal.zero()

    def test_round_trip(self):
        x = ExtendedReal(-1, 3.25, -(10**50))
        assert ExtendedReal.from_dict(x.to_dict()) == x
