"""The probability layer: the exact double-coset measure on partitions,
its identity with the Ewens distribution at bias 1/2, seeded sampling,
and the density of elements with small intersection order.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import rng
from .cosets import predicted_intersection_order
from .errors import ResourceLimitError
from .partitions import Partition, iter_partitions

EXACT_TAIL_MAX_M = 60

#: two-sided 95% normal quantile, used by the Wilson score radius
Z_95 = 1.959963984540054

# chunk layout for parallel Monte Carlo: sample s lives in chunk s // _CHUNK,
# and round t of chunk c consumes stream indices c*2^40 + t*2^12 + lane
_CHUNK = 4096
_ROUND_SHIFT = 12
_CHUNK_SHIFT = 40


def f_of(lam: Partition) -> int:
    """The intersection-order random variable f on partitions
    (alias of :func:`coset_ewens.cosets.predicted_intersection_order`)."""
    return predicted_intersection_order(lam)


@lru_cache(maxsize=256)
def _rising_factorial(theta: Fraction, m: int) -> Fraction:
    out = Fraction(1)
    for j in range(m):
        out *= theta + j
    return out


def _as_positive_fraction(theta) -> Fraction:
    th = Fraction(theta)
    if th <= 0:
        raise ValueError("theta must be > 0")
    return th


def esf_density(lam: Partition, theta) -> Fraction:
    """Exact Ewens density at bias ``theta``:
    m!/(theta (theta+1)...(theta+m-1)) * prod (theta/i)^{r_i} / r_i!.
    """
    th = _as_positive_fraction(theta)
    m = lam.m
    if m < 1:
        raise ValueError("lam must have weight >= 1")
    out = Fraction(math.factorial(m)) / _rising_factorial(th, m)
    for part, r in lam.counts:
        out *= (th / part) ** r / math.factorial(r)
    return out


def coset_probability(lam: Partition, m: int) -> Fraction:
    """|HxH| / (2m)! as an exact rational; identical to esf_density(lam, 1/2)."""
    if lam.m != m:
        raise ValueError(f"partition has weight {lam.m}, expected {m}")
    numer = 2 ** (2 * m) * math.factorial(m) ** 2
    return Fraction(numer, math.factorial(2 * m) * f_of(lam))


def log_f(lam: Partition) -> float:
    """log f(lam) evaluated part-by-part (safe for huge multiplicities)."""
    return sum(r * math.log(2 * part) + math.lgamma(r + 1) for part, r in lam.counts)


# --- threshold comparison f <= m^c -------------------------------------

_EXACT_POW_BIT_LIMIT = 2_000_000


def f_leq_threshold(f: int, m: int, c) -> bool:
    """Decide f <= m^c without the predicate ever flipping due to rounding.

    When c is (or converts exactly to) a rational p/q with small q, the
    comparison is done on integers as f^q <= m^p.  Otherwise a float
    log comparison decides, escalating to 50-digit decimal logarithms
    inside a 1e-9 guard band.
    """
    if f < 1 or m < 1:
        raise ValueError("f and m must be positive")
    cf = Fraction(c)
    if cf <= 0:
        return f <= 1
    p, q = cf.numerator, cf.denominator
    if q <= 64 and q * f.bit_length() <= _EXACT_POW_BIT_LIMIT \
            and p * m.bit_length() <= _EXACT_POW_BIT_LIMIT:
        return f**q <= m**p
    lf = math.log(f)
    lt = float(cf) * math.log(m)
    if abs(lf - lt) > 1e-9 * max(1.0, abs(lt)):
        return lf < lt
    with localcontext() as ctx:
        ctx.prec = 50
        dlf = Decimal(f).ln()
        dlt = (Decimal(p) / Decimal(q)) * Decimal(m).ln()
        return dlf <= dlt


@lru_cache(maxsize=4)
def _tail_table(m: int) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """Distinct f values of partitions of m (ascending) with cumulative
    exact probabilities."""
    agg: dict[int, Fraction] = {}
    for lam in iter_partitions(m):
        agg[f_of(lam)] = agg.get(f_of(lam), Fraction(0)) + coset_probability(lam, m)
    fs = sorted(agg)
    cum = []
    total = Fraction(0)
    for f in fs:
        total += agg[f]
        cum.append(total)
    return tuple(fs), tuple(cum)


def good_probability_exact(m: int, c) -> Fraction:
    """P(f <= m^c) under the double-coset measure, as an exact rational."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > EXACT_TAIL_MAX_M:
        raise ResourceLimitError(
            f"good_probability_exact limited to m <= {EXACT_TAIL_MAX_M}"
        )
    fs, cum = _tail_table(m)
    # rightmost f with f <= m^c (f_leq_threshold is monotone in f)
    lo, hi = -1, len(fs) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if f_leq_threshold(fs[mid], m, c):
            lo = mid
        else:
            hi = mid - 1
    return cum[lo] if lo >= 0 else Fraction(0)


# --- sampling -----------------------------------------------------------

def sample_partition(m: int, theta: float, seed: int) -> Partition:
    """One draw from the Ewens distribution via the sequential
    part-opening process: element n+1 opens a new part with probability
    theta/(theta+n), otherwise it joins an existing part with probability
    proportional to the part's size.

    Bit-identical for a fixed seed across runs and platforms; draw n
    consumes stream index n of :mod:`coset_ewens.rng`.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if theta <= 0:
        raise ValueError("theta must be > 0")
    sizes: list[int] = []
    member_table: list[int] = []  # element index -> its part
    for n in range(m):
        y = rng.uniform01(seed, n) * (theta + n)
        if y < theta:
            member_table.append(len(sizes))
            sizes.append(1)
        else:
            # y - theta is in [0, n); the clamp guards the last-ulp case
            t = member_table[min(int(y - theta), n - 1)]
            member_table.append(t)
            sizes[t] += 1
    return Partition.from_parts(sizes)


@lru_cache(maxsize=8)
def _gap_prefix(m: int, theta: float) -> np.ndarray:
    """Prefix sums A[j] = sum_{l=2..j+1} log((l-1)/(theta+l-1)), j=0..m-1.

    With marks at positions 1..m drawn independently (position l marked
    with probability theta/(theta+l-1), position 1 always marked), the
    gap from a mark at i to the next mark satisfies
    log P(no mark in (i, j]) = A[j-1] - A[i-1].
    """
    l = np.arange(2, m + 1, dtype=np.float64)
    steps = np.log((l - 1.0) / (theta + l - 1.0))
    return np.concatenate([[0.0], np.cumsum(steps)])


def _sample_parts_chunk(m: int, theta: float, seed: int, chunk_index: int,
                        count: int) -> list[list[int]]:
    """Part lists for one chunk of samples, via inverse-CDF gap sampling
    of the mark positions (distribution identical to sample_partition's
    process; validated against it by total-variation tests)."""
    A = _gap_prefix(m, theta)
    neg_a = -A  # increasing
    base = chunk_index << _CHUNK_SHIFT
    positions = np.ones(count, dtype=np.int64)
    parts: list[list[int]] = [[] for _ in range(count)]
    active = np.arange(count)
    rnd = 0
    while active.size:
        idx = base + (rnd << _ROUND_SHIFT) + active
        u = rng.uniform01_array(seed, idx.astype(np.uint64))
        with np.errstate(divide="ignore"):
            log_u = np.log(u)
        targets = A[positions[active] - 1] + log_u
        nxt = np.searchsorted(neg_a, -targets, side="right") + 1
        still = []
        for lane, j in zip(active, nxt):
            i = int(positions[lane])
            if j > m:
                parts[lane].append(m + 1 - i)
            else:
                parts[lane].append(int(j) - i)
                positions[lane] = j
                still.append(lane)
        active = np.array(still, dtype=np.int64)
        rnd += 1
    return parts


@dataclass(frozen=True)
class SampleReport:
    """Monte Carlo estimate of P(f <= m^c) with provenance."""

    m: int
    c: float
    samples: int
    hits: int
    frequency: float
    wilson_radius_95: float
    seed: int

    def to_json_dict(self) -> dict:
        return asdict(self)


def wilson_radius(hits: int, samples: int, z: float = Z_95) -> float:
    """Half-width of the Wilson score interval."""
    p = hits / samples
    denom = 1.0 + z * z / samples
    return z * math.sqrt(p * (1.0 - p) / samples + z * z / (4.0 * samples * samples)) / denom


def _chunk_hits(m: int, c: float, seed: int, chunk_index: int, count: int) -> int:
    log_m = math.log(m)
    target = c * log_m
    hits = 0
    for parts in _sample_parts_chunk(m, 0.5, seed, chunk_index, count):
        counts = Counter(parts)
        lf = sum(r * math.log(2 * part) + math.lgamma(r + 1)
                 for part, r in counts.items())
        if abs(lf - target) < 1e-9:
            f = 1
            for part, r in counts.items():
                f *= (2 * part) ** r * math.factorial(r)
            if f_leq_threshold(f, m, c):
                hits += 1
        elif lf < target:
            hits += 1
    return hits


def good_probability_mc(m: int, c: float, samples: int, seed: int,
                        threads: int | None = None) -> SampleReport:
    """Monte Carlo frequency of f(lam) <= m^c under Ewens(1/2) sampling.

    The sample stream is partitioned into fixed-size chunks with
    counter-derived sub-streams, so the report is identical for any
    thread count.  The f-threshold test runs in log space with an exact
    big-integer fallback inside a 1e-9 guard band.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    chunks = [(i, min(_CHUNK, samples - i * _CHUNK))
              for i in range((samples + _CHUNK - 1) // _CHUNK)]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hit_counts = list(pool.map(
                lambda ic: _chunk_hits(m, c, seed, ic[0], ic[1]), chunks))
    else:
        hit_counts = [_chunk_hits(m, c, seed, i, cnt) for i, cnt in chunks]
    hits = sum(hit_counts)
    return SampleReport(
        m=m,
        c=float(c),
        samples=samples,
        hits=hits,
        frequency=hits / samples,
        wilson_radius_95=wilson_radius(hits, samples),
        seed=seed,
    )
