"""Reals with a float mantissa and an unbounded decimal exponent."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_FLOOR, Decimal, localcontext
from functools import total_ordering
from typing import Union

_LN10 = math.log(10.0)


def _ln10_dec(prec: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec + 5
        return Decimal(10).ln()


def _split_log10(log10: Decimal) -> tuple[float, int]:
    """Turn a decimal log10 into (mantissa in [1, 10), integer exponent)."""
    e = int(log10.to_integral_value(rounding=ROUND_FLOOR))
    m = 10.0 ** float(log10 - e)
    if m >= 10.0:
        m, e = m / 10.0, e + 1
    return m, e


@total_ordering
@dataclass(frozen=True, eq=False)
class ExtendedReal:
    """sign * mantissa * 10**exponent10 with 1 <= mantissa < 10 (zero: sign 0)."""

    sign: int
    mantissa: float
    exponent10: int

    def __post_init__(self):
        if self.sign == 0:
            object.__setattr__(self, "mantissa", 0.0)
            object.__setattr__(self, "exponent10", 0)
            return
        if self.sign not in (1, -1) or not (1.0 <= self.mantissa < 10.0):
            raise ValueError(f"unnormalized ExtendedReal({self.sign}, {self.mantissa}, {self.exponent10})")
        object.__setattr__(self, "exponent10", int(self.exponent10))

    # construction

    @classmethod
    def zero(cls) -> "ExtendedReal":
        return cls(0, 0.0, 0)

    @classmethod
    def _normalized(cls, sign: int, m: float, e: int) -> "ExtendedReal":
        if sign == 0 or m == 0.0:
            return cls.zero()
        if not math.isfinite(m):
            raise OverflowError("mantissa is not finite")
        shift = math.floor(math.log10(m))
        m = m / 10.0**shift
        e += shift
        # correct for log10 rounding at decade boundaries
        if m >= 10.0:
            m, e = m / 10.0, e + 1
        elif m < 1.0:
            m, e = m * 10.0, e - 1
        return cls(sign, m, e)

    @classmethod
    def from_float(cls, x: float) -> "ExtendedReal":
        if x == 0:
            return cls.zero()
        if not math.isfinite(x):
            raise ValueError("cannot represent non-finite value")
        return cls._normalized(1 if x > 0 else -1, abs(x), 0)

    @classmethod
    def from_int(cls, n: int) -> "ExtendedReal":
        if n == 0:
            return cls.zero()
        sign = 1 if n > 0 else -1
        n = abs(n)
        if n.bit_length() < 1000:
            return cls._normalized(sign, float(n), 0)
        shift = n.bit_length() - 64
        top = n >> shift
        with localcontext() as ctx:
            ctx.prec = 60
            log10 = Decimal(top).log10() + shift * Decimal(2).log10()
        m, e = _split_log10(log10)
        return cls(sign, m, e)

    @classmethod
    def from_log10(cls, log10: Union[Decimal, float, int]) -> "ExtendedReal":
        """10**log10 for a positive result."""
        m, e = _split_log10(Decimal(log10))
        return cls(1, m, e)

    @classmethod
    def from_ln(cls, x: Union[Decimal, float, int]) -> "ExtendedReal":
        """exp(x), with enough working precision to place the decimal point."""
        x = Decimal(x)
        with localcontext() as ctx:
            ctx.prec = max(40, len(str(abs(int(x)))) + 30)
            return cls.from_log10(x / _ln10_dec(ctx.prec))

    @classmethod
    def coerce(cls, x) -> "ExtendedReal":
        if isinstance(x, ExtendedReal):
            return x
        if isinstance(x, int):
            return cls.from_int(x)
        return cls.from_float(float(x))

    # conversion

    def to_float(self) -> float:
        """Nearest float; overflows to +/-inf and underflows to 0."""
        if self.sign == 0:
            return 0.0
        if self.exponent10 > 308:
            return math.copysign(math.inf, self.sign)
        if self.exponent10 < -340:
            return 0.0
        if self.exponent10 < -300:
            return self.sign * (self.mantissa * 1e-300) * 10.0 ** (self.exponent10 + 300)
        return self.sign * self.mantissa * 10.0**self.exponent10

    def __float__(self) -> float:
        return self.to_float()

    def log10(self) -> "ExtendedReal":
        if self.sign <= 0:
            raise ValueError("log10 of a non-positive value")
        return _add_float_to_int(math.log10(self.mantissa), self.exponent10)

    def ln(self) -> "ExtendedReal":
        if self.sign <= 0:
            raise ValueError("log of a non-positive value")
        if abs(self.exponent10) < 1 << 52:
            return ExtendedReal.from_float(math.log(self.mantissa) + self.exponent10 * _LN10)
        return ExtendedReal.from_int(self.exponent10) * ExtendedReal.from_float(_LN10) + ExtendedReal.from_float(
            math.log(self.mantissa)
        )

    # arithmetic

    def __neg__(self) -> "ExtendedReal":
        return ExtendedReal(-self.sign, self.mantissa, self.exponent10)

    def __abs__(self) -> "ExtendedReal":
        return ExtendedReal(abs(self.sign), self.mantissa, self.exponent10)

    def __mul__(self, other) -> "ExtendedReal":
        other = ExtendedReal.coerce(other)
        if self.sign == 0 or other.sign == 0:
            return ExtendedReal.zero()
        return ExtendedReal._normalized(
            self.sign * other.sign, self.mantissa * other.mantissa, self.exponent10 + other.exponent10
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "ExtendedReal":
        if self.sign == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return ExtendedReal._normalized(self.sign, 1.0 / self.mantissa, -self.exponent10)

    def __truediv__(self, other) -> "ExtendedReal":
        return self * ExtendedReal.coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "ExtendedReal":
        return ExtendedReal.coerce(other) * self.reciprocal()

    def __add__(self, other) -> "ExtendedReal":
        other = ExtendedReal.coerce(other)
        if other.sign == 0:
            return self
        if self.sign == 0:
            return other
        big, small = (self, other) if self.exponent10 >= other.exponent10 else (other, self)
        gap = big.exponent10 - small.exponent10
        if gap > 20:
            return big
        m = big.sign * big.mantissa + small.sign * small.mantissa * 10.0**-gap
        if m == 0.0:
            return ExtendedReal.zero()
        return ExtendedReal._normalized(1 if m > 0 else -1, abs(m), big.exponent10)

    __radd__ = __add__

    def __sub__(self, other) -> "ExtendedReal":
        return self + (-ExtendedReal.coerce(other))

    def __rsub__(self, other) -> "ExtendedReal":
        return ExtendedReal.coerce(other) - self

    # comparison

    def _key(self):
        if self.sign == 0:
            return (0, 0, 0.0)
        return (self.sign, self.sign * self.exponent10, self.sign * self.mantissa)

    def __eq__(self, other) -> bool:
        try:
            other = ExtendedReal.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other) -> bool:
        try:
            other = ExtendedReal.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def isclose(self, other, rel: float) -> bool:
        other = ExtendedReal.coerce(other)
        if self.sign == 0 or other.sign == 0:
            return self.sign == other.sign
        return abs(self - other) <= abs(self) * rel

    def __repr__(self) -> str:
        return f"ExtendedReal({self.sign * self.mantissa!r}e{self.exponent10})"

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        if -6 < self.exponent10 < 16:
            return f"{self.to_float():.15g}"
        return f"{self.sign * self.mantissa:.15g}e{self.exponent10}"

    def to_dict(self) -> dict:
        return {"sign": self.sign, "mantissa": self.mantissa, "exponent10": str(self.exponent10)}

    @classmethod
    def from_dict(cls, d: dict) -> "ExtendedReal":
        return cls(d["sign"], d["mantissa"], int(d["exponent10"]))


def _add_float_to_int(frac: float, n: int) -> ExtendedReal:
    # n + frac without losing n's integer digits
    if abs(n) < 1 << 52:
        return ExtendedReal.from_float(n + frac)
    return ExtendedReal.from_int(n) + ExtendedReal.from_float(frac)
