"""Admissible tuples and greedy extraction of an admissible subset."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .primal import primes_up_to

_INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class OffsetTuple:
    """Strictly increasing integers h_1 < ... < h_k."""

    offsets: tuple[int, ...] = ()

    def __post_init__(self):
        offs = tuple(int(h) for h in self.offsets)
        object.__setattr__(self, "offsets", offs)
        if any(a >= b for a, b in zip(offs, offs[1:])):
            raise ValueError("offsets must be strictly increasing")

    @classmethod
    def of(cls, values: Iterable[int]) -> "OffsetTuple":
        """Build from any iterable of integers, sorting and dropping duplicates."""
        return cls(tuple(sorted(set(int(v) for v in values))))

    def __len__(self) -> int:
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def __getitem__(self, i):
        return self.offsets[i]

    def shifted(self, c: int) -> "OffsetTuple":
        return OffsetTuple(tuple(h + c for h in self.offsets))

    def fits_int64(self) -> bool:
        return not self.offsets or (-_INT64_MAX <= self.offsets[0] and self.offsets[-1] <= _INT64_MAX)


def parse_tuple_text(text: str) -> OffsetTuple:
    """Parse one integer per line or comma-separated values; ``#`` starts a comment."""
    values = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for tok in line.split(","):
            tok = tok.strip()
            if tok:
                values.append(int(tok))
    if len(set(values)) != len(values):
        raise ValueError("tuple contains duplicate values")
    return OffsetTuple(tuple(sorted(values)))


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    obstructions: tuple[int, ...]
    # largest prime examined; None when the tuple has fewer than 2 elements
    checked_up_to: Optional[int]

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "obstructions": list(self.obstructions),
            "checked_up_to": self.checked_up_to,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AdmissibilityReport":
        return cls(d["admissible"], tuple(d["obstructions"]), d["checked_up_to"])


@dataclass(frozen=True)
class ExtractionStep:
    prime: int
    dropped: Optional[int]  # residue class removed, or None
    size_before: int
    size_after: int


@dataclass(frozen=True)
class ExtractionTrace:
    steps: tuple[ExtractionStep, ...]
    input_size: int
    output_size: int

    def to_dict(self) -> dict:
        return {
            "input_size": self.input_size,
            "output_size": self.output_size,
            "steps": [
                {
                    "prime": s.prime,
                    "dropped": "none" if s.dropped is None else s.dropped,
                    "size_before": s.size_before,
                    "size_after": s.size_after,
                }
                for s in self.steps
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExtractionTrace":
        steps = tuple(
            ExtractionStep(
                s["prime"],
                None if s["dropped"] == "none" else s["dropped"],
                s["size_before"],
                s["size_after"],
            )
            for s in d["steps"]
        )
        return cls(steps, d["input_size"], d["output_size"])


def residues_mod(h: Sequence[int], p: int) -> frozenset[int]:
    """Residues {x mod p} normalized into [0, p)."""
    return frozenset(x % p for x in h)


def _class_counts(values, p: int) -> np.ndarray:
    if isinstance(values, np.ndarray):
        return np.bincount(values % p, minlength=p)
    counts = np.zeros(p, dtype=np.int64)
    for x in values:
        counts[x % p] += 1
    return counts


def _as_working(h: OffsetTuple):
    # int64 arrays when possible, plain Python ints otherwise
    if h.fits_int64():
        return np.fromiter(h.offsets, dtype=np.int64, count=len(h))
    return list(h.offsets)


def is_admissible(h: OffsetTuple | Sequence[int]) -> AdmissibilityReport:
    """Check that no prime p <= len(h) sees all p residue classes occupied.

    Primes above len(h) cannot be covered by len(h) residues, so they are never
    examined.
    """
    if not isinstance(h, OffsetTuple):
        h = OffsetTuple.of(h)
    k = len(h)
    primes = primes_up_to(k)
    values = _as_working(h)
    obstructions = []
    for p in primes:
        if isinstance(values, np.ndarray):
            if np.unique(values % p).size == p:
                obstructions.append(p)
        elif len(residues_mod(values, p)) == p:
            obstructions.append(p)
    return AdmissibilityReport(not obstructions, tuple(obstructions), primes[-1] if primes else None)


def _thinnest_class(counts: np.ndarray) -> Optional[int]:
    if counts.min() == 0:
        return None
    return int(np.argmin(counts))  # argmin returns the first, i.e. smallest, residue


def drop_thinnest_class(a: OffsetTuple, p: int) -> tuple[OffsetTuple, Optional[int]]:
    """Remove the least populated residue class mod p.

    Nothing is removed when some class is already empty. Ties go to the
    numerically smallest residue.
    """
    if len(a) < p:
        return a, None
    dropped = _thinnest_class(_class_counts(_as_working(a), p))
    if dropped is None:
        return a, None
    return OffsetTuple(tuple(x for x in a.offsets if x % p != dropped)), dropped


def extract_admissible_subset(
    a: OffsetTuple | Sequence[int], early_exit: bool = False
) -> tuple[OffsetTuple, ExtractionTrace]:
    """Greedy admissible subset: one drop_thinnest_class pass per prime p <= len(a).

    The primes run up to the original size r, so the result keeps at least
    ceil(r * prod_{p <= r}(1 - 1/p)) elements. With ``early_exit`` the loop stops
    as soon as the current set is too small to cover any remaining prime.
    """
    if not isinstance(a, OffsetTuple):
        a = OffsetTuple.of(a)
    r = len(a)
    values = _as_working(a)
    steps = []
    for p in primes_up_to(r):
        n = len(values)
        if early_exit and n < p:
            break
        dropped = None
        if n >= p:
            dropped = _thinnest_class(_class_counts(values, p))
            if dropped is not None:
                if isinstance(values, np.ndarray):
                    values = values[values % p != dropped]
                else:
                    values = [x for x in values if x % p != dropped]
        steps.append(ExtractionStep(p, dropped, n, len(values)))
    out = OffsetTuple(tuple(int(x) for x in values))
    return out, ExtractionTrace(tuple(steps), r, len(out))
