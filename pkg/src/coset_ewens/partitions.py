"""Integer partitions: canonical form, enumeration, counting, and the
Hardy-Ramanujan growth approximation.
"""
from __future__ import annotations

import math
import re
import sys
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ResourceLimitError

#: enumeration refused above this weight (p(90) > 5*10^7); use counting
#: or generating-function APIs instead.
ENUMERATION_MAX_M = 90


@dataclass(frozen=True)
class Partition:
    """A multiset of positive parts, stored as ((part, multiplicity), ...)
    with parts strictly ascending and all multiplicities >= 1.

    ``m`` is the weight, i.e. sum(part * multiplicity).
    """

    counts: tuple[tuple[int, int], ...]
    m: int

    def __post_init__(self):
        last = 0
        total = 0
        for part, mult in self.counts:
            if part <= last or mult < 1:
                raise ValueError(f"non-canonical partition data {self.counts!r}")
            last = part
            total += part * mult
        if total != self.m:
            raise ValueError(f"weight mismatch: parts sum to {total}, m={self.m}")

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        counts: dict[int, int] = {}
        for p in parts:
            if p < 1:
                raise ValueError(f"nonpositive part {p}")
            counts[p] = counts.get(p, 0) + 1
        items = tuple(sorted(counts.items()))
        return cls(items, sum(p * r for p, r in items))

    @classmethod
    def from_multiplicities(cls, mult: dict[int, int]) -> "Partition":
        items = tuple(sorted((p, r) for p, r in mult.items() if r))
        return cls(items, sum(p * r for p, r in items))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse the ``"1^3 2^1"`` text form (ascending ``i^r`` tokens)."""
        text = text.strip()
        if not text:
            return cls((), 0)
        mult: dict[int, int] = {}
        for token in text.split():
            m = re.fullmatch(r"(\d+)\^(\d+)", token)
            if not m:
                raise ValueError(f"bad partition token {token!r}")
            part, r = int(m.group(1)), int(m.group(2))
            if part < 1 or r < 1:
                raise ValueError(f"nonpositive entry in token {token!r}")
            if part in mult:
                raise ValueError(f"repeated part size {part}")
            mult[part] = r
        return cls.from_multiplicities(mult)

    def multiplicity(self, part: int) -> int:
        for p, r in self.counts:
            if p == part:
                return r
        return 0

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def num_parts(self) -> int:
        """Total number of parts (counted with multiplicity)."""
        return sum(r for _, r in self.counts)

    def parts_desc(self) -> tuple[int, ...]:
        out: list[int] = []
        for p, r in reversed(self.counts):
            out.extend([p] * r)
        return tuple(out)

    def __str__(self) -> str:
        return " ".join(f"{p}^{r}" for p, r in self.counts)


def iter_partitions(m: int) -> Iterator[Partition]:
    """Yield all partitions of ``m`` in reverse-lexicographic order on
    descending part lists ({m} first, {1^m} last).  Streaming counterpart
    of :func:`enumerate_partitions` without the memory of a full list.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")

    def rec(remaining: int, maxpart: int, acc: list[int]) -> Iterator[Partition]:
        if remaining == 0:
            yield Partition.from_parts(acc)
            return
        for first in range(min(maxpart, remaining), 0, -1):
            acc.append(first)
            yield from rec(remaining - first, first, acc)
            acc.pop()

    yield from rec(m, m, [])


def enumerate_partitions(m: int) -> list[Partition]:
    """All p(m) partitions of ``m`` as a list, reverse-lexicographic order."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > ENUMERATION_MAX_M:
        raise ResourceLimitError(
            f"enumerate_partitions limited to m <= {ENUMERATION_MAX_M} "
            f"(p({m}) is too large to list); use partition_count or the "
            "series coefficients instead"
        )
    return list(iter_partitions(m))


_pcount: list[int] = [1]
_pcount_lock = threading.Lock()


def partition_count(m: int) -> int:
    """p(m) via Euler's pentagonal-number recurrence, exact and memoized."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m < len(_pcount):
        return _pcount[m]
    with _pcount_lock:
        while len(_pcount) <= m:
            n = len(_pcount)
            total = 0
            k = 1
            while True:
                g1 = n - k * (3 * k - 1) // 2
                g2 = n - k * (3 * k + 1) // 2
                if g1 < 0 and g2 < 0:
                    break
                term = 0
                if g1 >= 0:
                    term += _pcount[g1]
                if g2 >= 0:
                    term += _pcount[g2]
                total += term if k % 2 == 1 else -term
                k += 1
            _pcount.append(total)
    return _pcount[m]


# largest m for which exp(pi*sqrt(2m/3)) stays below the float maximum
HARDY_RAMANUJAN_MAX_M = int(1.5 * (math.log(sys.float_info.max) / math.pi) ** 2)


def hardy_ramanujan(m: int) -> float:
    """Leading-order growth approximation exp(pi*sqrt(2m/3)) / (4*sqrt(3)*m).

    Accurate only asymptotically; at small m the ratio to p(m) is far
    from 1.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > HARDY_RAMANUJAN_MAX_M:
        raise OverflowError(
            f"hardy_ramanujan overflows float range for m > {HARDY_RAMANUJAN_MAX_M}"
        )
    return math.exp(math.pi * math.sqrt(2.0 * m / 3.0)) / (4.0 * math.sqrt(3.0) * m)
