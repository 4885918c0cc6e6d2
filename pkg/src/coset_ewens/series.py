"""The analytic layer: weighted partition sums W(beta, m), their
generating-function product, the value of that product at z = 1, moment
tail bounds, and convergence diagnostics.

Notation used throughout the module: f(lam) is the intersection order
prod (2i)^{r_i} r_i!, W(beta, m) = sum over partitions of m of
f(lam)^{-beta}, and the generating function
sum_m W(beta, m) z^m factorizes as prod_{i>=1} I_beta(z^i / (2i)^beta)
with I_beta(z) = sum_j z^j / (j!)^beta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimitError
from .ewens import f_of, log_f
from .partitions import Partition, iter_partitions

DIRECT_MAX_M = 60
SERIES_EXACT_MAX_M = 200
SERIES_MAX_M = 20000


def _is_integral(beta) -> bool:
    if isinstance(beta, int):
        return True
    if isinstance(beta, Fraction):
        return beta.denominator == 1
    return False


def W_direct(beta, m: int):
    """sum over partitions of m of f(lam)^{-beta}, by direct enumeration.

    Exact rational for a nonnegative integer beta (pass an int or an
    integral Fraction), float otherwise.  Capped at m <= 60.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > DIRECT_MAX_M:
        raise ResourceLimitError(f"W_direct limited to m <= {DIRECT_MAX_M}")
    if _is_integral(beta) and beta >= 0:
        b = int(beta)
        return sum((Fraction(1, f_of(lam) ** b) for lam in iter_partitions(m)),
                   Fraction(0))
    b = float(beta)
    return math.fsum(math.exp(-b * log_f(lam)) for lam in iter_partitions(m))


@lru_cache(maxsize=128)
def log_W_direct(beta: float, m: int) -> float:
    """log W(beta, m) by a log-sum-exp over partitions (underflow-safe)."""
    if m > DIRECT_MAX_M:
        raise ResourceLimitError(f"log_W_direct limited to m <= {DIRECT_MAX_M}")
    logs = [-beta * log_f(lam) for lam in iter_partitions(m)]
    top = max(logs)
    return top + math.log(math.fsum(math.exp(v - top) for v in logs))


def W_one_closed(m: int):
    """W(1, m) = (2m)! / (2^{2m} (m!)^2), exact for m <= 2000, float above."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m <= 2000:
        return Fraction(math.factorial(2 * m),
                        4**m * math.factorial(m) ** 2)
    return math.exp(log_W_one_closed(m))


def log_W_one_closed(m: int) -> float:
    """log W(1, m) through lgamma; absolute error below 1e-10 for the
    supported range (m up to a few 10^4)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return (math.lgamma(2 * m + 1) - 2 * m * math.log(2.0)
            - 2 * math.lgamma(m + 1))


@dataclass(frozen=True)
class TruncatedSeries:
    """Power-series coefficients 0..truncation, exact or float."""

    coefficients: tuple
    truncation: int
    exact: bool

    def coefficient(self, k: int):
        if not 0 <= k <= self.truncation:
            raise ValueError(f"coefficient index {k} outside 0..{self.truncation}")
        return self.coefficients[k]


def W_series_coeffs(beta, M: int, exact: bool | None = None) -> TruncatedSeries:
    """Coefficients of prod_{i>=1} I_beta(z^i/(2i)^beta) through degree M.

    Factor i only contributes degrees >= i, so cutting every factor's
    j-sum at i*j <= M and the product at degree M reproduces every
    coefficient m <= M without truncation error.  Exact rational mode is
    available for integer beta >= 0 and M <= 200; otherwise coefficients
    are float64.
    """
    if M < 0:
        raise ValueError("M must be nonnegative")
    if M > SERIES_MAX_M:
        raise ResourceLimitError(f"W_series_coeffs limited to M <= {SERIES_MAX_M}")
    if exact is None:
        exact = _is_integral(beta) and beta >= 0 and M <= SERIES_EXACT_MAX_M
    if exact:
        if not (_is_integral(beta) and beta >= 0):
            raise ValueError("exact mode requires a nonnegative integer beta")
        if M > SERIES_EXACT_MAX_M:
            raise ResourceLimitError(
                f"exact series mode limited to M <= {SERIES_EXACT_MAX_M}")
        return TruncatedSeries(tuple(_exact_coeffs(int(beta), M)), M, True)
    arr = _float_coeffs(float(beta), M)
    return TruncatedSeries(tuple(float(v) for v in arr), M, False)


def _exact_coeffs(beta: int, M: int) -> list[Fraction]:
    acc = [Fraction(0)] * (M + 1)
    acc[0] = Fraction(1)
    for i in range(1, M + 1):
        new = list(acc)
        for j in range(1, M // i + 1):
            coef = Fraction(1, math.factorial(j) ** beta * (2 * i) ** (beta * j))
            step = i * j
            for d in range(M - step + 1):
                if acc[d]:
                    new[d + step] += acc[d] * coef
        acc = new
    return acc


@lru_cache(maxsize=64)
def _float_coeffs_cached(beta: float, M: int) -> np.ndarray:
    acc = np.zeros(M + 1)
    acc[0] = 1.0
    for i in range(1, M + 1):
        log2i = math.log(2.0 * i)
        jmax = M // i
        coefs = [math.exp(-beta * (math.lgamma(j + 1) + j * log2i))
                 for j in range(1, jmax + 1)]
        new = acc.copy()
        for j, cf in enumerate(coefs, start=1):
            step = i * j
            new[step:] += acc[: M + 1 - step] * cf
        acc = new
    acc.setflags(write=False)
    return acc


def _float_coeffs(beta: float, M: int) -> np.ndarray:
    return _float_coeffs_cached(beta, M)


def W_coefficient(beta: float, m: int) -> float:
    """Float W(beta, m) through the series product (degree-exact)."""
    return float(_float_coeffs(float(beta), m)[m])


# --- the product value at z = 1 (beta > 1) ------------------------------

@dataclass(frozen=True)
class WAtOneResult:
    value: float
    error_bound: float
    truncation: int

    def __float__(self) -> float:
        return self.value


def _zeta_tail(s: float, N: int) -> tuple[float, float]:
    """sum_{i > N} i^{-s} as (estimate, certified absolute error bound),
    by Euler-Maclaurin with an alternating-remainder bound."""
    est = N ** (1.0 - s) / (s - 1.0) - 0.5 * N ** (-s) + (s / 12.0) * N ** (-s - 1.0)
    rem = (s * (s + 1.0) * (s + 2.0) / 720.0) * N ** (-s - 3.0)
    return est, rem


_W_AT_ONE_MAX_N = 30_000_000


def W_at_one(beta: float) -> WAtOneResult:
    """prod_{i>=1} I_beta((2i)^{-beta}) with a certified truncation error.

    The product is summed in log space over i <= N; the omitted factors
    satisfy x - x^2/2 <= log I_beta(x) <= x for x = (2i)^{-beta} <= 1/2,
    so their total is pinned between Euler-Maclaurin tail sums whose
    midpoint is applied as a correction and whose half-width enters the
    certified bound.  N is chosen to keep the bound below 1e-10.
    """
    beta = float(beta)
    if beta <= 1.0:
        raise ValueError("W_at_one requires beta > 1 (the product diverges at 1)")
    target = 2e-11
    need = (2.0 ** (-2.0 * beta) / ((2.0 * beta - 1.0) * target)) ** (1.0 / (2.0 * beta - 1.0))
    N = max(1000, int(need) + 1)
    if N > _W_AT_ONE_MAX_N:
        raise ResourceLimitError(
            f"W_at_one cannot certify 1e-10 for beta={beta} (needs N={N})")

    jmax = 40
    inv_fact_pow = np.array([math.exp(-beta * math.lgamma(j + 1))
                             for j in range(1, jmax + 1)])
    log_total = 0.0
    chunk = 1_000_000
    for start in range(1, N + 1, chunk):
        stop = min(N, start + chunk - 1)
        i = np.arange(start, stop + 1, dtype=np.float64)
        x = (2.0 * i) ** (-beta)
        series = np.zeros_like(x)
        p = np.ones_like(x)
        for j in range(jmax):
            p = p * x
            series += p * inv_fact_pow[j]
            if p.max() * inv_fact_pow[min(j + 1, jmax - 1)] < 1e-25:
                break
        log_total += float(np.sum(np.log1p(series)))

    s1, e1 = _zeta_tail(beta, N)
    s2, e2 = _zeta_tail(2.0 * beta, N)
    tail_mid = 2.0 ** (-beta) * s1 - 0.25 * (2.0 ** (-2.0 * beta)) * s2
    uncertainty = (0.25 * (2.0 ** (-2.0 * beta)) * s2
                   + 2.0 ** (-beta) * e1 + 2.0 ** (-2.0 * beta) * e2
                   + 1e-13)
    value = math.exp(log_total + tail_mid)
    return WAtOneResult(value, value * math.expm1(uncertainty) + 1e-15, N)


# --- tail bounds ---------------------------------------------------------

@dataclass(frozen=True)
class TailBoundResult:
    m: int
    c: float
    parameter_name: str
    parameter: float
    bound: float
    grid: tuple[tuple[float, float], ...]


def default_alpha_grid(points: int = 64, lo: float = 1e-3, hi: float = 8.0) -> tuple[float, ...]:
    return tuple(float(a) for a in np.geomspace(lo, hi, points))


def left_tail_bound(m: int, c: float, alpha_grid: Sequence[float] | None = None) -> TailBoundResult:
    """Markov bound on P(f <= m^c): min over the grid of
    m^{c a} * W(1,m)^{-1} * W(a+1, m); every grid value is itself valid."""
    if m < 1:
        raise ValueError("m must be >= 1")
    alphas = tuple(alpha_grid) if alpha_grid is not None else default_alpha_grid()
    if not alphas:
        raise ValueError("alpha grid must be nonempty")
    if any(a <= 0 for a in alphas):
        raise ValueError("alpha grid entries must be > 0")
    log_m = math.log(m)
    log_w1 = log_W_one_closed(m)
    grid = []
    for a in alphas:
        val = math.exp(c * a * log_m - log_w1) * W_coefficient(a + 1.0, m)
        grid.append((float(a), float(val)))
    best = min(grid, key=lambda t: t[1])
    return TailBoundResult(m, float(c), "alpha", best[0], best[1], tuple(grid))


def right_tail_bound(m: int, c: float, beta) -> TailBoundResult:
    """Markov bound on P(f > m^c): m^{-c(1-beta)} W(1,m)^{-1} W(beta, m)
    for 0 < beta < 1; a scalar or a grid of betas may be supplied."""
    if m < 1:
        raise ValueError("m must be >= 1")
    betas: Iterable[float] = (beta,) if isinstance(beta, (int, float)) else tuple(beta)
    betas = tuple(float(b) for b in betas)
    if not betas:
        raise ValueError("beta grid must be nonempty")
    if any(not 0.0 < b < 1.0 for b in betas):
        raise ValueError("beta must lie strictly inside (0, 1)")
    log_m = math.log(m)
    log_w1 = log_W_one_closed(m)
    grid = []
    for b in betas:
        val = math.exp(-c * (1.0 - b) * log_m - log_w1) * W_coefficient(b, m)
        grid.append((b, float(val)))
    best = min(grid, key=lambda t: t[1])
    return TailBoundResult(m, float(c), "beta", best[0], best[1], tuple(grid))


def default_right_beta(m: int, t: float = 1.0) -> float:
    """beta = 1 - t/(log m)^2, the scaling used for the right tail."""
    if m < 3:
        raise ValueError("m must be >= 3 for the default beta")
    b = 1.0 - t / math.log(m) ** 2
    if not 0.0 < b < 1.0:
        raise ValueError(f"t={t} gives beta={b} outside (0, 1) at m={m}")
    return b


# --- log-convexity and asymptotics --------------------------------------

@dataclass(frozen=True)
class JensenResult:
    ok: bool
    lhs_log: float
    rhs_log: float

    @property
    def lhs(self) -> float:
        return math.exp(self.lhs_log)

    @property
    def rhs(self) -> float:
        return math.exp(self.rhs_log)


def jensen_check(alpha: float, beta: float, gamma: float, m: int,
                 rel_slack: float = 1e-12) -> JensenResult:
    """Check W(alpha+beta, m) <= W(beta, m)^{1-gamma} * W(alpha/gamma+beta, m)^{gamma}
    (log-convexity of beta |-> W(beta, m)); compared in log space."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie strictly inside (0, 1)")
    if m > DIRECT_MAX_M:
        raise ResourceLimitError(f"jensen_check limited to m <= {DIRECT_MAX_M}")
    lhs = log_W_direct(alpha + beta, m)
    rhs = ((1.0 - gamma) * log_W_direct(float(beta), m)
           + gamma * log_W_direct(alpha / gamma + beta, m))
    ok = lhs <= rhs + rel_slack * max(1.0, abs(rhs))
    return JensenResult(ok, lhs, rhs)


@dataclass(frozen=True)
class AsymptoticRow:
    m: int
    scaled: float           # m^beta * W(beta, m)
    limit: float            # W_at_one(beta) / 2^beta
    relative_deviation: float


def asymptotic_diagnostic(beta: float, m_list: Sequence[int]) -> list[AsymptoticRow]:
    """Convergence table for m^beta W(beta, m) -> W_at_one(beta)/2^beta
    (beta > 1); deviations shrink as m grows."""
    beta = float(beta)
    if beta <= 1.0:
        raise ValueError("asymptotic_diagnostic requires beta > 1")
    if not m_list:
        raise ValueError("m_list must be nonempty")
    top = max(m_list)
    if top > SERIES_MAX_M:
        raise ResourceLimitError(f"asymptotic_diagnostic limited to m <= {SERIES_MAX_M}")
    coeffs = _float_coeffs(beta, top)
    limit = W_at_one(beta).value / 2.0**beta
    rows = []
    for m in m_list:
        scaled = m**beta * float(coeffs[m])
        rows.append(AsymptoticRow(m, scaled, limit, abs(scaled / limit - 1.0)))
    return rows
