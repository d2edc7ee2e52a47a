"""Heuristic expected prime counts, sum of 1/ln a_n over a sequence."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .bounds import log_factorial
from .extended import ExtendedReal
from .sequences import SequenceKind, SequenceSpec, term

DEFAULT_TAIL_TOLERANCE = 1e-12
DEFAULT_PARTIAL_TERMS = 1000
# exponent of the reported upper bound 10^-(10^k) for tower sequences
TOWER_BOUND_EXPONENT_DIGITS = 100


class UnsupportedTail(ValueError):
    """No growth certificate is available to bound the tail of this sequence."""


@dataclass(frozen=True)
class HeuristicSum:
    """Partial sum plus, where certified, a rigorous bound on the omitted tail.

    ``lower``/``upper`` bracket the full infinite sum; ``upper`` is None when
    no tail certificate exists. For tower sequences ``estimate`` is None and
    the interval [0, upper] is all that is reported.
    """

    kind: str
    terms: int
    estimate: Optional[ExtendedReal]
    tail_bound: Optional[ExtendedReal]
    lower: ExtendedReal
    upper: Optional[ExtendedReal]
    underflow: bool = False
    divergent: bool = False

    def to_dict(self) -> dict:
        opt = lambda x: None if x is None else x.to_dict()
        return {
            "kind": self.kind,
            "terms": self.terms,
            "estimate": opt(self.estimate),
            "tail_bound": opt(self.tail_bound),
            "lower": self.lower.to_dict(),
            "upper": opt(self.upper),
            "underflow": self.underflow,
            "divergent": self.divergent,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HeuristicSum":
        opt = lambda x: None if x is None else ExtendedReal.from_dict(x)
        return cls(
            d["kind"],
            d["terms"],
            opt(d["estimate"]),
            opt(d["tail_bound"]),
            ExtendedReal.from_dict(d["lower"]),
            opt(d["upper"]),
            d["underflow"],
            d["divergent"],
        )


def _fermat_tail(n_terms: int) -> float:
    # ln F_i > 2^i ln 2, so sum_{i >= N} 1/ln F_i < 2^(1-N) / ln 2
    return 2.0 ** (1 - n_terms) / math.log(2.0)


def _ford_factorial_tail(n_terms: int) -> float:
    # ln(N'!) >= (N'/N) ln(N!) for N' >= N, and (2k+2)!/(2k)! >= 12, so the
    # terms after k = n_terms shrink at least geometrically with ratio 1/12.
    lf = log_factorial(_ford_inner(n_terms + 1))
    first = lf.value * (1.0 - lf.rel_error)
    return (12.0 / 11.0) / first.to_float()


def _ford_inner(k: int) -> Union[int, ExtendedReal]:
    inner = log_factorial(2 * k).value
    if inner.exponent10 < 4:
        return math.factorial(2 * k)
    return ExtendedReal.from_ln(inner.to_float())


def _partial(spec: SequenceSpec, n_terms: int) -> tuple[float, float]:
    """Sum of 1/ln a over the first n_terms, with an absolute error bound."""
    start = spec.first_index
    recips = [1.0 / term(spec, i, cap=0).log_value.to_float() for i in range(start, start + n_terms)]
    total = math.fsum(recips)
    return total, 8 * 2.0**-52 * total


def _tail_bounded_terms(tail, tol: float) -> int:
    n = 1
    while tail(n) > tol:
        n += 1
    return n


def heuristic_expected_primes(
    spec: SequenceSpec, terms: Union[int, str, None] = None, tol: float = DEFAULT_TAIL_TOLERANCE
) -> HeuristicSum:
    """Sum 1/ln a_n over ``terms`` terms, or until the certified tail is below ``tol``.

    ``terms`` may be a count, ``"tail-bounded"`` or None (tail-bounded where a
    certificate exists, else a fixed partial sum). Fermat and
    ((2k)!)! + k! carry tail certificates. ((2k)!)^3 has none: its terms decay
    like 1/(6 k ln k), so the sum diverges and only partial sums are reported.
    """
    kind = spec.kind
    if kind is SequenceKind.GOLOMB_TOWER:
        # every term is below 10^-(10^(10^(10^10))); report a representable ceiling
        ceiling = ExtendedReal(1, 1.0, -(10**TOWER_BOUND_EXPONENT_DIGITS))
        return HeuristicSum(kind.value, 0, None, ceiling, ExtendedReal.zero(), ceiling, underflow=True)

    tails = {SequenceKind.FERMAT: _fermat_tail, SequenceKind.FORD_FACTORIAL_SUM: _ford_factorial_tail}
    tail = tails.get(kind)
    if terms == "tail-bounded" or terms is None:
        if tail is not None:
            n_terms = _tail_bounded_terms(tail, tol)
        elif terms is None:
            n_terms = len(spec.values) if kind is SequenceKind.EXPLICIT else DEFAULT_PARTIAL_TERMS
        else:
            raise UnsupportedTail(f"no tail certificate for {kind.value} sequences")
    else:
        n_terms = int(terms)
        if n_terms < 1:
            raise ValueError("terms must be positive")

    total, err = _partial(spec, n_terms)
    estimate = ExtendedReal.from_float(total)
    lower = ExtendedReal.from_float(total - err)
    if tail is None:
        return HeuristicSum(kind.value, n_terms, estimate, None, lower, None, divergent=kind is SequenceKind.FORD_CUBE)
    t = tail(n_terms)
    return HeuristicSum(
        kind.value,
        n_terms,
        estimate,
        ExtendedReal.from_float(t),
        lower,
        ExtendedReal.from_float(total + err + t),
    )
