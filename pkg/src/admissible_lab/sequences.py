"""Named integer sequences with exact values when small and log-magnitudes always."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import total_ordering
from pathlib import Path
from typing import Optional, Union

from .bounds import log_factorial
from .extended import ExtendedReal
from .tuples import OffsetTuple

DEFAULT_MATERIALIZATION_CAP = 10**6  # decimal digits
_LN2 = math.log(2.0)
_LN10 = math.log(10.0)


class SequenceKind(str, enum.Enum):
    FERMAT = "fermat"
    FORD_CUBE = "ford-cube"
    FORD_FACTORIAL_SUM = "ford-factorial"
    GOLOMB_TOWER = "golomb-tower"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class SequenceSpec:
    kind: SequenceKind
    values: Optional[OffsetTuple] = None  # EXPLICIT only

    def __post_init__(self):
        if self.kind is SequenceKind.EXPLICIT:
            if self.values is None:
                raise ValueError("explicit sequences need values")
            if len(self.values) and self.values[0] <= 1:
                raise ValueError("explicit sequence terms must exceed 1")

    @property
    def first_index(self) -> int:
        return 0 if self.kind is SequenceKind.FERMAT else 1

    def __str__(self) -> str:
        if self.kind is SequenceKind.EXPLICIT:
            return "explicit:" + ",".join(map(str, self.values))
        return self.kind.value


def explicit(values) -> SequenceSpec:
    """Explicit sequence; values must already be strictly increasing and > 1."""
    return SequenceSpec(SequenceKind.EXPLICIT, OffsetTuple(tuple(values)))


def parse_sequence_spec(text: str) -> SequenceSpec:
    """Parse ``fermat``, ``ford-cube``, ``ford-factorial``, ``golomb-tower``,
    ``explicit:@file`` or ``explicit:4,6,10``."""
    text = text.strip()
    if text.startswith("explicit:"):
        body = text[len("explicit:") :]
        if body.startswith("@"):
            body = Path(body[1:]).read_text()
        values = []
        for line in body.splitlines():
            line = line.split("#", 1)[0]
            values += [int(t) for t in line.split(",") if t.strip()]
        return explicit(values)
    try:
        return SequenceSpec(SequenceKind(text))
    except ValueError:
        raise ValueError(f"unknown sequence spec {text!r}") from None


@total_ordering
@dataclass(frozen=True)
class TowerMagnitude:
    """Symbolic ln of ((10^(10^(10^(10^(10^n)))))!)^3.

    Only ordering questions are answerable: towers compare by n and exceed
    every :class:`ExtendedReal`.
    """

    n: int

    def __lt__(self, other) -> bool:
        if isinstance(other, TowerMagnitude):
            return self.n < other.n
        return False

    def __gt__(self, other) -> bool:
        if isinstance(other, TowerMagnitude):
            return self.n > other.n
        return True

    def __str__(self) -> str:
        return f"3*ln(M!) with M = 10^(10^(10^(10^(10^{self.n}))))"

    def to_dict(self) -> dict:
        return {"tower": self.n}


Magnitude = Union[ExtendedReal, TowerMagnitude]


@dataclass(frozen=True)
class SequenceTerm:
    index: int
    value: Optional[int]  # None means too large to materialize
    log_value: Magnitude  # natural log of the term
    digits10: Magnitude  # number of decimal digits

    @property
    def too_large(self) -> bool:
        return self.value is None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "value": "TooLarge" if self.value is None else str(self.value),
            "log_value": self.log_value.to_dict(),
            "digits10": self.digits10.to_dict(),
        }


def _digits_from_ln(ln_value: ExtendedReal) -> ExtendedReal:
    log10 = ln_value / _LN10
    if log10.exponent10 < 15:
        return ExtendedReal.from_int(math.floor(log10.to_float()) + 1)
    return log10


def _digit_count(value: int) -> int:
    d = int(math.log10(value)) + 1
    # log10 may land on the wrong side of a power of ten
    if value >= 10**d:
        d += 1
    elif value < 10 ** (d - 1):
        d -= 1
    return d


def _materialized(index: int, value: int) -> SequenceTerm:
    return SequenceTerm(index, value, ExtendedReal.from_float(math.log(value)), ExtendedReal.from_int(_digit_count(value)))


def term(spec: SequenceSpec, index: int, cap: int = DEFAULT_MATERIALIZATION_CAP) -> SequenceTerm:
    """The index-th term; Fermat numbers start at 0, every other kind at 1."""
    if index < spec.first_index:
        raise IndexError(f"{spec.kind.value} terms start at index {spec.first_index}")
    kind = spec.kind

    if kind is SequenceKind.EXPLICIT:
        if index > len(spec.values):
            raise IndexError(f"explicit sequence has only {len(spec.values)} terms")
        return _materialized(index, spec.values[index - 1])

    if kind is SequenceKind.GOLOMB_TOWER:
        return SequenceTerm(index, None, TowerMagnitude(index), TowerMagnitude(index))

    if kind is SequenceKind.FERMAT:
        # ln(2^(2^i) + 1) = 2^i ln 2 + log1p(2^-(2^i))
        e = 1 << index
        ln_value = ExtendedReal.from_int(e) * _LN2
        if index < 11:
            ln_value = ExtendedReal.from_float(e * _LN2 + math.log1p(2.0**-e))
        digits = _digits_from_ln(ln_value)
        if digits <= cap:
            return _materialized(index, (1 << e) + 1)
        return SequenceTerm(index, None, ln_value, digits)

    if kind is SequenceKind.FORD_CUBE:
        ln_value = log_factorial(2 * index).value * 3
        digits = _digits_from_ln(ln_value)
        if digits <= cap:
            return _materialized(index, math.factorial(2 * index) ** 3)
        return SequenceTerm(index, None, ln_value, digits)

    # FORD_FACTORIAL_SUM: ((2k)!)! + k!; the k! summand is invisible at float precision past k = 2
    inner = log_factorial(2 * index).value
    if inner.exponent10 < 4:
        m = math.factorial(2 * index)
    elif inner.exponent10 < 300:
        m = ExtendedReal.from_ln(inner.to_float())
    else:
        raise OverflowError(f"(2k)! for k = {index} is beyond the supported range")
    if isinstance(m, int) and m <= 1000:
        # small enough to take the log of the exact value, k! included
        ln_value = ExtendedReal.from_float(math.log(math.factorial(m) + math.factorial(index)))
    else:
        ln_value = log_factorial(m).value
    digits = _digits_from_ln(ln_value)
    if digits <= cap:
        return _materialized(index, math.factorial(m) + math.factorial(index))
    return SequenceTerm(index, None, ln_value, digits)


def prefix(spec: SequenceSpec, r: int, cap: int = DEFAULT_MATERIALIZATION_CAP) -> list[SequenceTerm]:
    """The first r terms."""
    if r < 0:
        raise ValueError("r must be non-negative")
    start = spec.first_index
    return [term(spec, i, cap) for i in range(start, start + r)]
