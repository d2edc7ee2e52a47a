"""Explicit analytic quantities used by the admissible-subset argument.

Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import Iterator, Optional, Union

from .extended import ExtendedReal
from .primal import primes_up_to

EULER_GAMMA = 0.57721566490153286
EXACT_MERTENS_LIMIT = 10**4
EXACT_LOG_FACTORIAL_LIMIT = 10**6
MERTENS_PRECISION = 40
DEFAULT_MAX_EXACT_DIGITS = 1000

_EPS = 2.0**-52


class ChainViolation(ValueError):
    """The (B, C) pair does not satisfy the sizing inequality chain."""


def mertens_product_exact(r: int) -> Fraction:
    """prod_{p <= r} (1 - 1/p) as an exact rational."""
    num = den = 1
    for p in primes_up_to(r):
        num *= p - 1
        den *= p
    return Fraction(num, den)


def _floor_decimal(q: Fraction, prec: int = MERTENS_PRECISION) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec
        ctx.rounding = ROUND_FLOOR
        return Decimal(q.numerator) / Decimal(q.denominator)


def mertens_table(r_max: int, prec: int = MERTENS_PRECISION) -> Iterator[tuple[int, Decimal]]:
    """Yield ``(r, lower bound of prod_{p <= r}(1 - 1/p))`` for r = 0..r_max.

    A running product with every operation rounded toward zero, so each value
    is a certified lower bound accurate to about ``prec`` digits.
    """
    flags = bytearray(b"\x01") * (r_max + 1)
    value = Decimal(1)
    with localcontext() as ctx:
        ctx.prec = prec
        ctx.rounding = ROUND_FLOOR
        for r in range(r_max + 1):
            if r >= 2 and flags[r]:
                flags[r * r :: r] = bytes(len(range(r * r, r_max + 1, r)))
                value = value * (Decimal(r - 1) / Decimal(r))
            yield r, value


def mertens_product(r: int) -> Decimal:
    """prod_{p <= r}(1 - 1/p), rounded down to 40 significant digits.

    Exact rational arithmetic up to r = 10**4; above that a running product
    rounded toward zero at every step.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r <= EXACT_MERTENS_LIMIT:
        return _floor_decimal(mertens_product_exact(r))
    value = Decimal(1)
    with localcontext() as ctx:
        ctx.prec = MERTENS_PRECISION
        ctx.rounding = ROUND_FLOOR
        for p in primes_up_to(r):
            value = value * (Decimal(p - 1) / Decimal(p))
    return value


def _check_log_domain(r: float) -> float:
    if not r > 1:
        raise ValueError(f"requires r > 1, got {r}")
    return math.log(r)


def rosser_schoenfeld_lower(r: float) -> float:
    """e**-gamma / log r * (1 - 1/log(r)**2), the explicit Mertens lower bound."""
    lr = _check_log_domain(r)
    return math.exp(-EULER_GAMMA) / lr * (1.0 - 1.0 / (lr * lr))


def half_log_bound(r: float) -> float:
    """1 / (2 log r); below the Rosser-Schoenfeld bound once r >= 25."""
    return 1.0 / (2.0 * _check_log_domain(r))


@dataclass(frozen=True)
class SizingReport:
    B: int
    C: float
    r: Optional[int]  # None when r is too large to materialize
    r_magnitude: ExtendedReal
    lhs: Decimal  # log(r / (2 log r)) / C
    chain_mid: Decimal  # 2B - log(4BC) / C
    symbolic: bool

    @property
    def chain_holds(self) -> bool:
        return self.lhs >= self.chain_mid > self.B

    def to_dict(self) -> dict:
        return {
            "B": self.B,
            "C": self.C,
            "r": None if self.r is None else str(self.r),
            "r_magnitude": self.r_magnitude.to_dict(),
            "lhs": str(self.lhs),
            "chain_mid": str(self.chain_mid),
            "symbolic": self.symbolic,
            "chain_holds": self.chain_holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SizingReport":
        return cls(
            d["B"],
            d["C"],
            None if d["r"] is None else int(d["r"]),
            ExtendedReal.from_dict(d["r_magnitude"]),
            Decimal(d["lhs"]),
            Decimal(d["chain_mid"]),
            d["symbolic"],
        )


def required_r(B: int, C: float, max_exact_digits: int = DEFAULT_MAX_EXACT_DIGITS) -> SizingReport:
    """Size r = ceil(exp(2BC)) and verify log(r/(2 log r))/C >= 2B - log(4BC)/C > B.

    When exp(2BC) has more than ``max_exact_digits`` digits, r is reported only
    through ``r_magnitude`` and ``lhs`` is evaluated at the lower bound
    log r >= 2BC, where it coincides with the middle term.
    """
    if B < 3:
        raise ValueError("B must be at least 3")
    if not C > 0:
        raise ValueError("C must be positive")
    x = Decimal(2 * B) * Decimal(C)
    digits = int(x / Decimal("2.302585092994045684")) + 1
    symbolic = digits > max_exact_digits
    with localcontext() as ctx:
        ctx.prec = (40 if symbolic else digits) + 40
        ln2 = Decimal(2).ln()
        chain_mid = 2 * B - (2 * x).ln() / Decimal(C)
        if symbolic:
            r = None
            ln_r = x
            magnitude = ExtendedReal.from_ln(x)
        else:
            ex = x.exp()
            r = int(ex.to_integral_value(rounding=ROUND_CEILING))
            ln_r = Decimal(r).ln()
            magnitude = ExtendedReal.from_int(r)
        if ln_r <= 1:
            raise ChainViolation(f"exp(2BC) = exp({x}) is too small for the chain")
        lhs = (ln_r - ln2 - ln_r.ln()) / Decimal(C)
        lhs, chain_mid = +lhs, +chain_mid
    report = SizingReport(B, C, r, magnitude, lhs, chain_mid, symbolic)
    if not lhs >= chain_mid:
        raise ChainViolation(f"log(r/(2 log r))/C = {lhs} < {chain_mid}")
    if not chain_mid > B:
        raise ChainViolation(f"2B - log(4BC)/C = {chain_mid} does not exceed B = {B}")
    return report


@dataclass(frozen=True)
class LogFactorial:
    """ln(M!) together with a bound on its relative error."""

    value: ExtendedReal
    rel_error: float
    method: str  # "exact-sum" or "stirling"

    def to_dict(self) -> dict:
        return {"value": self.value.to_dict(), "rel_error": self.rel_error, "method": self.method}


def _ln_factorial_sum(m: int) -> float:
    return math.fsum(map(math.log, range(2, m + 1)))


def log_factorial(m: Union[int, ExtendedReal]) -> LogFactorial:
    """Natural log of M!.

    Exact summation of logs for M <= 10**6, otherwise Stirling's series
    M ln M - M + ln(2 pi M)/2 + 1/(12M). ``M`` may be an :class:`ExtendedReal`
    when it is too large for an int to be practical.
    """
    if isinstance(m, ExtendedReal):
        if m.sign < 0:
            raise ValueError("M must be non-negative")
        if m.exponent10 < 300:
            m_float = m.to_float()
            if m_float <= EXACT_LOG_FACTORIAL_LIMIT:
                return log_factorial(round(m_float))
            return _stirling_float(m_float)
        return _stirling_extended(m)
    if m < 0:
        raise ValueError("M must be non-negative")
    if m <= EXACT_LOG_FACTORIAL_LIMIT:
        # each log within one ulp, fsum exact: total error below 2 ulps of the sum
        return LogFactorial(ExtendedReal.from_float(_ln_factorial_sum(m)), 4 * _EPS, "exact-sum")
    if m.bit_length() < 1000:
        return _stirling_float(float(m))
    return _stirling_extended(ExtendedReal.from_int(m))


def _stirling_float(m: float) -> LogFactorial:
    lm = math.log(m)
    value = m * lm - m + 0.5 * math.log(2 * math.pi * m) + 1.0 / (12.0 * m)
    truncation = 1.0 / (360.0 * m**3)
    rel = 16 * _EPS + truncation / value
    return LogFactorial(ExtendedReal.from_float(value), rel, "stirling")


def _stirling_extended(m: ExtendedReal) -> LogFactorial:
    # the ln(2 pi M)/2 and 1/(12M) terms sit far below the mantissa's resolution
    lm = m.ln()
    value = m * (lm - 1) + ExtendedReal.from_float(0.5 * math.log(2 * math.pi)) + lm * 0.5
    return LogFactorial(value, 16 * _EPS, "stirling")
