"""Prime counts in translates {h_i + n} and presieved searches over shifts n."""

from __future__ import annotations

import bisect
import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .bounds import SizingReport, mertens_product_exact, required_r
from .primal import DEFAULT_ROUNDS, DETERMINISTIC_LIMIT, PrimalityStatus, is_prime_64, is_probable_prime, primes_up_to
from .tuples import ExtractionTrace, OffsetTuple, extract_admissible_subset, is_admissible

DEFAULT_PRESIEVE_CAP = 1000
DEFAULT_BLOCK = 1 << 16
# cap on block_length * tuple_size for the kill mask
_MASK_CELLS = 1 << 22


class Certainty(str, enum.Enum):
    PROVEN = "Proven"
    PROBABLE = "Probable"


class PresieveMode(str, enum.Enum):
    FULL_CONSTELLATION = "FullConstellation"
    COUNT_PRUNING = "CountPruning"


@dataclass(frozen=True)
class ShiftHit:
    """A shift n with the tuple indices i for which h_i + n is (probably) prime."""

    shift: int
    prime_indices: tuple[int, ...]
    certainty: Certainty = Certainty.PROVEN

    @property
    def count(self) -> int:
        return len(self.prime_indices)

    def to_dict(self) -> dict:
        return {
            "shift": str(self.shift),
            "count": self.count,
            "prime_indices": list(self.prime_indices),
            "certainty": self.certainty.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ShiftHit":
        return cls(int(d["shift"]), tuple(d["prime_indices"]), Certainty(d["certainty"]))


@dataclass(frozen=True)
class TranslateQuery:
    tuple: OffsetTuple
    shift_lo: int
    shift_hi: int
    target: int
    rounds: int = DEFAULT_ROUNDS

    def __post_init__(self):
        if self.shift_lo > self.shift_hi:
            raise ValueError("shift_lo must not exceed shift_hi")
        if not 1 <= self.target <= len(self.tuple):
            raise ValueError(f"target must lie in [1, {len(self.tuple)}]")


def _prime_status(v: int, rounds: int) -> tuple[bool, bool]:
    """(is prime, verdict was only probable)."""
    if v < 2:
        return False, False
    if v < DETERMINISTIC_LIMIT:
        return is_prime_64(v), False
    verdict = is_probable_prime(v, rounds)
    return verdict.is_prime, verdict.status is PrimalityStatus.PROBABLE_PRIME


def count_primes_in_translate(h: Sequence[int], n: int, rounds: int = DEFAULT_ROUNDS) -> ShiftHit:
    """Which h_i + n are prime; values below 2 never count."""
    indices = []
    probable = False
    for i, x in enumerate(h):
        is_p, prob = _prime_status(x + n, rounds)
        if is_p:
            indices.append(i)
            probable |= prob
    return ShiftHit(n, tuple(indices), Certainty.PROBABLE if probable else Certainty.PROVEN)


@dataclass(frozen=True)
class PresievePlan:
    """Residue classes of n that force h_i + n to be divisible by a small prime.

    ``kill_residues[j][i]`` is (-h_i) mod small_primes[j]: when n falls in that
    class, p divides h_i + n and the element is nonprime unless h_i + n = p,
    which is carved out explicitly. Values below 2 are also marked. Every mark
    is a proof of compositeness, so pruning on the mark count never loses a
    shift that reaches the target.
    """

    tuple: OffsetTuple
    target: int
    small_primes: tuple[int, ...]
    mode: PresieveMode
    kill_residues: tuple[tuple[int, ...], ...] = field(repr=False)
    # per prime: ((residue, element indices), ...) grouped for block marking
    _groups: tuple = field(repr=False, compare=False, default=())

    @property
    def modulus(self) -> int:
        """The primorial the wheel works modulo."""
        return math.prod(self.small_primes)

    def killed_mask(self, n0: int, n1: int) -> np.ndarray:
        """Boolean array [n - n0, i]: h_i + n is certainly not prime, for n in [n0, n1]."""
        length = n1 - n0 + 1
        k = len(self.tuple)
        killed = np.zeros((length, k), dtype=bool)
        for p, groups in zip(self.small_primes, self._groups):
            for c, idx in groups:
                j0 = (c - n0) % p
                if j0 >= length:
                    continue
                if len(idx) == 1:
                    killed[j0::p, idx[0]] = True
                else:
                    killed[np.ix_(np.arange(j0, length, p), idx)] = True
        primes = self.small_primes
        for i, h in enumerate(self.tuple):
            # h + n = p for a plan prime p is prime despite p | h + n
            lo = bisect.bisect_left(primes, h + n0)
            for p in primes[lo : bisect.bisect_left(primes, h + n0 + length)]:
                killed[p - h - n0, i] = False
            # h + n < 2
            below = min(length, 2 - h - n0)
            if below > 0:
                killed[:below, i] = True
        return killed

    def upper_bounds(self, n0: int, n1: int) -> np.ndarray:
        """For each shift in [n0, n1], the most primes the translate could hold."""
        return len(self.tuple) - self.killed_mask(n0, n1).sum(axis=1)

    def excludes(self, n: int) -> bool:
        return bool(self.upper_bounds(n, n)[0] < self.target)

    def survivors(self, n0: int, n1: int) -> np.ndarray:
        return n0 + np.flatnonzero(self.upper_bounds(n0, n1) >= self.target)


def build_presieve(h: OffsetTuple, cap: int = DEFAULT_PRESIEVE_CAP, target: Optional[int] = None) -> PresievePlan:
    """Presieve plan over the primes <= cap.

    With target == len(h) any single kill excludes a shift (full constellation
    wheel); otherwise shifts are skipped only when too many elements are
    killed to reach the target.
    """
    if cap < 2:
        raise ValueError("presieve cap must be at least 2")
    k = len(h)
    target = k if target is None else target
    mode = PresieveMode.FULL_CONSTELLATION if target == k else PresieveMode.COUNT_PRUNING
    primes = tuple(primes_up_to(cap))
    kill = tuple(tuple((-x) % p for x in h) for p in primes)
    groups = []
    for p, res in zip(primes, kill):
        by_class: dict[int, list[int]] = {}
        for i, c in enumerate(res):
            by_class.setdefault(c, []).append(i)
        groups.append(tuple((c, np.array(idx)) for c, idx in sorted(by_class.items())))
    return PresievePlan(h, target, primes, mode, kill, tuple(groups))


@dataclass(frozen=True)
class SearchResult:
    query: TranslateQuery
    hits: tuple[ShiftHit, ...]
    complete: bool
    scanned_hi: int  # last shift examined (shift_lo - 1 if none)
    best: Optional[ShiftHit] = None  # max count, smallest shift; only when tracked

    def to_dict(self) -> dict:
        return {
            "tuple": [str(x) for x in self.query.tuple],
            "shift_lo": str(self.query.shift_lo),
            "shift_hi": str(self.query.shift_hi),
            "target": self.query.target,
            "hits": [hit.to_dict() for hit in self.hits],
            "complete": self.complete,
            "scanned_hi": str(self.scanned_hi),
            "best": None if self.best is None else self.best.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchResult":
        q = TranslateQuery(
            OffsetTuple(tuple(int(x) for x in d["tuple"])), int(d["shift_lo"]), int(d["shift_hi"]), d["target"]
        )
        return cls(
            q,
            tuple(ShiftHit.from_dict(x) for x in d["hits"]),
            d["complete"],
            int(d["scanned_hi"]),
            None if d["best"] is None else ShiftHit.from_dict(d["best"]),
        )


def _scan_block(plan: PresievePlan, n0: int, n1: int, threshold: int, rounds: int) -> list[ShiftHit]:
    """Translates in [n0, n1] holding at least ``threshold`` primes."""
    h = plan.tuple.offsets
    killed = plan.killed_mask(n0, n1)
    bounds = len(h) - killed.sum(axis=1)
    out = []
    for j in np.flatnonzero(bounds >= threshold):
        n = n0 + int(j)
        alive = np.flatnonzero(~killed[j]).tolist()
        remaining = len(alive)
        indices = []
        probable = False
        for i in alive:
            remaining -= 1
            is_p, prob = _prime_status(h[i] + n, rounds)
            if is_p:
                indices.append(i)
                probable |= prob
            elif len(indices) + remaining < threshold:
                break
        if len(indices) >= threshold:
            out.append(ShiftHit(n, tuple(indices), Certainty.PROBABLE if probable else Certainty.PROVEN))
    return out


def _better(a: Optional[ShiftHit], b: ShiftHit) -> bool:
    return a is None or b.count > a.count


def scan(
    h: OffsetTuple,
    shift_lo: int,
    shift_hi: int,
    target: int,
    *,
    rounds: int = DEFAULT_ROUNDS,
    presieve_cap: int = DEFAULT_PRESIEVE_CAP,
    block: int = DEFAULT_BLOCK,
    workers: int = 1,
    max_shifts: Optional[int] = None,
    max_seconds: Optional[float] = None,
    track_best: bool = False,
    progress: Optional[Callable[[int, int], None]] = None,
    progress_every: int = 1 << 20,
) -> tuple[list[ShiftHit], bool, int, Optional[ShiftHit]]:
    """Presieved scan; returns (hits, complete, last shift scanned, best).

    ``target`` may exceed len(h) here, in which case nothing is ever a hit but
    ``best`` is still tracked. Blocks are handed to ``workers`` threads in
    waves and merged in shift order, so output does not depend on ``workers``
    (wall-time budgets aside).
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    k = len(h)
    plan = build_presieve(h, presieve_cap, min(target, k) if k else 1)
    block = max(1, min(block, _MASK_CELLS // max(k, 1)))
    stop = shift_hi if max_shifts is None else min(shift_hi, shift_lo + max_shifts - 1)
    complete = stop == shift_hi
    starts = range(shift_lo, stop + 1, block)
    deadline = None if max_seconds is None else time.monotonic() + max_seconds

    hits: list[ShiftHit] = []
    best: Optional[ShiftHit] = None
    scanned_hi = shift_lo - 1
    next_report = progress_every
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for w in range(0, len(starts), workers):
            if k == 0:
                scanned_hi = stop
                break
            if deadline is not None and time.monotonic() > deadline:
                complete = False
                break
            if track_best:
                threshold = min(target, best.count + 1 if best is not None else 1)
            elif target > k:
                scanned_hi = stop
                break
            else:
                threshold = target
            wave = [(s, min(s + block - 1, stop)) for s in starts[w : w + workers]]
            if pool is None:
                results = [_scan_block(plan, a, b, threshold, rounds) for a, b in wave]
            else:
                results = list(pool.map(lambda ab: _scan_block(plan, ab[0], ab[1], threshold, rounds), wave))
            for found in results:
                for hit in found:
                    if hit.count >= target:
                        hits.append(hit)
                    if track_best and _better(best, hit):
                        best = hit
            scanned_hi = wave[-1][1]
            if progress is not None and scanned_hi - shift_lo + 1 >= next_report:
                progress(scanned_hi - shift_lo + 1, len(hits))
                next_report += progress_every
    finally:
        if pool is not None:
            pool.shutdown()
    return hits, complete, scanned_hi, best


def shift_search(q: TranslateQuery, **options) -> SearchResult:
    """Every shift in [shift_lo, shift_hi] whose translate holds >= target primes, ascending.

    Keyword options are passed to :func:`scan` (``workers``, ``presieve_cap``,
    ``max_shifts``, ``max_seconds``, ``progress`` ...). A budget cut leaves
    ``complete`` False and ``scanned_hi`` at the last shift examined.
    """
    hits, complete, scanned_hi, best = scan(q.tuple, q.shift_lo, q.shift_hi, q.target, rounds=q.rounds, **options)
    return SearchResult(q, tuple(hits), complete, scanned_hi, best)


def shift_search_naive(q: TranslateQuery) -> SearchResult:
    """Reference scan: count primes in every translate, no presieve."""
    hits = []
    h = q.tuple.offsets
    for n in range(q.shift_lo, q.shift_hi + 1):
        hit = count_primes_in_translate(h, n, q.rounds)
        if hit.count >= q.target:
            hits.append(hit)
    return SearchResult(q, tuple(hits), True, q.shift_hi)


@dataclass(frozen=True)
class HarnessReport:
    input_size: int
    subset: OffsetTuple
    trace: ExtractionTrace
    subset_admissible: bool
    product_bound: int  # ceil(r * prod_{p <= r}(1 - 1/p))
    half_log_threshold: Optional[float]  # r / (2 ln r) for r >= 25
    size_bound_ok: bool
    B: int
    target: int
    shift_lo: int
    shift_hi: int
    hits: tuple[ShiftHit, ...]
    best: Optional[ShiftHit]
    success: bool
    failure: Optional[str]  # "capacity", "not-found" or None
    complete: bool
    scanned_hi: int
    sizing: Optional[SizingReport] = None

    @property
    def first_success(self) -> Optional[int]:
        return self.hits[0].shift if self.hits else None

    def to_dict(self) -> dict:
        return {
            "input_size": self.input_size,
            "subset": [str(x) for x in self.subset],
            "subset_size": len(self.subset),
            "trace": self.trace.to_dict(),
            "subset_admissible": self.subset_admissible,
            "product_bound": self.product_bound,
            "half_log_threshold": self.half_log_threshold,
            "size_bound_ok": self.size_bound_ok,
            "B": self.B,
            "target": self.target,
            "shift_lo": str(self.shift_lo),
            "shift_hi": str(self.shift_hi),
            "hits": [hit.to_dict() for hit in self.hits],
            "best": None if self.best is None else self.best.to_dict(),
            "success": self.success,
            "first_success": None if self.first_success is None else str(self.first_success),
            "failure": self.failure,
            "complete": self.complete,
            "scanned_hi": str(self.scanned_hi),
            "sizing": None if self.sizing is None else self.sizing.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HarnessReport":
        return cls(
            d["input_size"],
            OffsetTuple(tuple(int(x) for x in d["subset"])),
            ExtractionTrace.from_dict(d["trace"]),
            d["subset_admissible"],
            d["product_bound"],
            d["half_log_threshold"],
            d["size_bound_ok"],
            d["B"],
            d["target"],
            int(d["shift_lo"]),
            int(d["shift_hi"]),
            tuple(ShiftHit.from_dict(x) for x in d["hits"]),
            None if d["best"] is None else ShiftHit.from_dict(d["best"]),
            d["success"],
            d["failure"],
            d["complete"],
            int(d["scanned_hi"]),
            None if d["sizing"] is None else SizingReport.from_dict(d["sizing"]),
        )


def refutation_harness(
    a: OffsetTuple, B: int, shift_lo: int, shift_hi: int, C: float = 1.0, **options
) -> HarnessReport:
    """Extract an admissible subset of ``a`` and look for shifts with B + 1 primes in it.

    Reports the size guarantees of the extraction, the (B, C) sizing chain when
    B >= 3, every shift reaching B + 1 primes, and the best shift seen even when
    none does. A subset with at most B elements fails by capacity.
    """
    if len(a) < 1:
        raise ValueError("harness needs a non-empty set")
    if B < 1:
        raise ValueError("B must be at least 1")
    r = len(a)
    subset, trace = extract_admissible_subset(a)
    admissible = is_admissible(subset).admissible
    product_bound = math.ceil(r * mertens_product_exact(r))
    size_ok = len(subset) >= product_bound
    half_log = None
    if r >= 25:
        half_log = r / (2 * math.log(r))
        size_ok = size_ok and len(subset) > half_log

    sizing = None
    if B >= 3:
        sizing = required_r(B, C)

    target = B + 1
    hits, complete, scanned_hi, best = scan(subset, shift_lo, shift_hi, target, track_best=True, **options)
    if hits:
        failure = None
    elif target > len(subset):
        failure = "capacity"
    else:
        failure = "not-found"
    return HarnessReport(
        r,
        subset,
        trace,
        admissible,
        product_bound,
        half_log,
        size_ok,
        B,
        target,
        shift_lo,
        shift_hi,
        tuple(hits),
        best,
        bool(hits),
        failure,
        complete,
        scanned_hi,
        sizing,
    )
