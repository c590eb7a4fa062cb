"""Restricted isometry constants, eps-spark, contiguity scans, and the
small-bandwidth behavior of the smallest Gram eigenvalue.

The minimum over all supports of a given size is not computable on an
infinite grid, so every result is labeled with its mode: 'contiguous'
invokes the contiguous-minimizer property, 'exhaustive' enumerates all
canonical supports (tau_0 = 0) up to a stated span and is exact within it.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb

from mpmath import mp, mpf, workprec

from .checks import BoundCheck, bound_check
from .core import SupportSet, SystemParams, build_gram, keep_real
from .errors import (
    DomainError,
    EnumerationBudgetError,
    PrecisionError,
    SpanTooSmallError,
)
from .hp import MinEigResult, min_eig_adaptive
from .szego import leading_coeffs

__all__ = [
    "BoundCheck",
    "EpsilonResult",
    "SparkResult",
    "SrfBoundsResult",
    "ContiguityResult",
    "SmallYResult",
    "sigma_min",
    "epsilon",
    "eps_spark",
    "verify_srf_bounds",
    "contiguity_scan",
    "smally_exponent",
]

CONTIGUOUS = "contiguous"
EXHAUSTIVE = "exhaustive"
DEFAULT_ENUMERATION_BUDGET = 10 ** 6


def _as_support(T) -> SupportSet:
    return T if isinstance(T, SupportSet) else SupportSet(tuple(T))


def min_eig_for_support(params: SystemParams, T, reltol=None) -> MinEigResult:
    """Precision-ladder smallest eigenvalue of the Gram matrix over T."""
    T = _as_support(T)
    kwargs = {} if reltol is None else {"reltol": reltol}
    return min_eig_adaptive(
        lambda bits: build_gram(params.at_bits(bits), T, bits=bits).as_lists(),
        **kwargs,
    )


def sigma_min(params: SystemParams, T) -> mpf:
    """Least singular value of the atom matrix over T: sqrt(lambda_min(G))."""
    T = _as_support(T)
    if len(T) == 1:
        return mpf(1)
    res = min_eig_for_support(params, T)
    with workprec(2 * res.bits_used):
        return mp.sqrt(res.value)


@dataclass(frozen=True)
class EpsilonResult:
    """Lower restricted isometry constant at sparsity k, with provenance."""

    k: int
    value: mpf
    attaining_support: SupportSet
    mode: str
    span_searched: int | None


def canonical_supports(k, span_max):
    """All supports tau_0 = 0 < ... < tau_{k-1} <= span_max, lexicographic."""
    if k == 1:
        yield SupportSet.of(0)
        return
    for rest in itertools.combinations(range(1, span_max + 1), k - 1):
        yield SupportSet((0,) + rest)


def epsilon(params: SystemParams, k, mode=CONTIGUOUS, span_max=None,
            workers=1) -> EpsilonResult:
    """eps_k = min over size-k supports of sigma_min(A_T).

    Contiguous mode evaluates the single support {0..k-1}; exhaustive mode
    scans every canonical support within span_max (ties broken toward the
    lexicographically smallest support).
    """
    k = int(k)
    if k < 1:
        raise DomainError("sparsity level k must be at least 1")
    if mode == CONTIGUOUS:
        T = SupportSet(tuple(range(k)))
        return EpsilonResult(k=k, value=sigma_min(params, T),
                             attaining_support=T, mode=CONTIGUOUS,
                             span_searched=None)
    if mode != EXHAUSTIVE:
        raise DomainError(f"unknown mode {mode!r}")
    if span_max is None or span_max < k - 1:
        raise SpanTooSmallError(f"exhaustive mode requires span_max >= {k - 1}")
    best_val, best_T = None, None
    for T, val in _scan(params, canonical_supports(k, span_max), workers):
        if best_val is None or val < best_val:
            best_val, best_T = val, T
    return EpsilonResult(k=k, value=best_val, attaining_support=best_T,
                         mode=EXHAUSTIVE, span_searched=int(span_max))


def _scan_worker(args):
    params, offsets = args
    T = SupportSet(offsets)
    return offsets, sigma_min(params, T)


def _scan(params, supports, workers):
    """Map sigma_min over supports, preserving order; forks when asked to."""
    supports = list(supports)
    if workers and workers > 1 and len(supports) >= 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for offsets, val in pool.map(
                _scan_worker, [(params, T.offsets) for T in supports], chunksize=8
            ):
                yield SupportSet(offsets), val
    else:
        for T in supports:
            yield T, sigma_min(params, T)


@dataclass(frozen=True)
class SparkResult:
    """eps-spark: the largest s with eps_s >= threshold.

    ``saturated`` distinguishes 'the answer is exactly value' from 'every
    level up to k_max passed, the true spark is >= value'.
    """

    value: int
    saturated: bool
    threshold: mpf
    levels: tuple  # (k, eps_k) pairs actually computed


def eps_spark(params: SystemParams, eps, k_max, mode=CONTIGUOUS,
              span_max=None, workers=1) -> SparkResult:
    """Largest s <= k_max such that every support of size <= s has
    sigma_min at least eps. Returns 0 when even single atoms fail."""
    eps = keep_real(eps)
    if not eps > 0:
        raise DomainError("threshold eps must be positive")
    k_max = int(k_max)
    levels = []
    for s in range(1, k_max + 1):
        res = epsilon(params, s, mode=mode, span_max=span_max, workers=workers)
        levels.append((s, res.value))
        if res.value < eps:
            return SparkResult(value=s - 1, saturated=False, threshold=eps,
                               levels=tuple(levels))
    return SparkResult(value=k_max, saturated=True, threshold=eps,
                       levels=tuple(levels))


@dataclass(frozen=True)
class SrfBoundsResult:
    """Checks of the singular-value decay bounds, plus the measured
    lower-bound ratios (the constant in the lower bound is unspecified,
    so it is reported, never asserted)."""

    checks: tuple
    ratios: tuple  # (n, eps_{n+1} / (c/4)^n)
    min_lower_ratio: mpf


def verify_srf_bounds(params: SystemParams, n_max, mode=CONTIGUOUS,
                      span_max=None) -> SrfBoundsResult:
    """Certify eps_{n+1} <= k_n^{-1} <= 4 c^n for n = 1..n_max and record
    the ratio eps_{n+1} / (c/4)^n."""
    n_max = int(n_max)
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    table = leading_coeffs(params, n_max, bits=params.bits)
    checks = []
    ratios = []
    min_ratio = None
    with workprec(params.bits):
        for n in range(1, n_max + 1):
            eps_n1 = epsilon(params, n + 1, mode=mode, span_max=span_max).value
            kn_inv = 1 / table.k_values[n]
            four_cn = 4 * params.c ** n
            checks.append(bound_check(f"eps_le_kn_inv[n={n}]", eps_n1, kn_inv))
            checks.append(bound_check(f"kn_inv_le_4cn[n={n}]", kn_inv, four_cn))
            r = eps_n1 / (params.c / 4) ** n
            ratios.append((n, r))
            checks.append(bound_check(f"lower_ratio_positive[n={n}]", 0, r))
            if min_ratio is None or r < min_ratio:
                min_ratio = r
    return SrfBoundsResult(checks=tuple(checks), ratios=tuple(ratios),
                           min_lower_ratio=min_ratio)


@dataclass(frozen=True)
class ContiguityResult:
    """Outcome of an exhaustive scan at fixed support size."""

    holds: bool
    table: tuple  # (SupportSet, sigma_min) sorted ascending by sigma_min
    monotonicity_violations: tuple
    supports_checked: int


def _gap_vector(T: SupportSet):
    return tuple(b - a for a, b in zip(T.offsets, T.offsets[1:]))


def contiguity_scan(params: SystemParams, size, span_max,
                    budget=DEFAULT_ENUMERATION_BUDGET, workers=1) -> ContiguityResult:
    """Check that the contiguous support strictly minimizes sigma_min.

    Also verifies the stronger statement that sigma_min is monotone under
    componentwise domination of the pairwise offset differences
    (equivalently, of the consecutive gap vectors).
    """
    size = int(size)
    if size < 2:
        raise DomainError("size must be at least 2")
    if span_max < size - 1:
        raise SpanTooSmallError(f"span_max must be at least {size - 1}")
    count = comb(int(span_max), size - 1)
    if count > budget:
        raise EnumerationBudgetError(
            f"{count} supports exceed the enumeration budget {budget}"
        )
    entries = list(_scan(params, canonical_supports(size, span_max), workers))
    table = sorted(entries, key=lambda e: (e[1], e[0].offsets))
    contiguous = SupportSet(tuple(range(size)))
    holds = table[0][0] == contiguous and (
        len(table) == 1 or table[1][1] > table[0][1]
    )
    violations = []
    gaps = [(T, _gap_vector(T), val) for T, val in entries]
    for (Ta, ga, va), (Tb, gb, vb) in itertools.combinations(gaps, 2):
        if all(x >= y for x, y in zip(ga, gb)) and ga != gb:
            wide, tight, vw, vt = Ta, Tb, va, vb
        elif all(y >= x for x, y in zip(ga, gb)) and ga != gb:
            wide, tight, vw, vt = Tb, Ta, vb, va
        else:
            continue
        if not vw > vt:
            violations.append((tight.offsets, wide.offsets, vt, vw))
    return ContiguityResult(holds=holds, table=tuple(table),
                            monotonicity_violations=tuple(violations),
                            supports_checked=len(entries))


@dataclass(frozen=True)
class SmallYResult:
    """Least-squares fit of log lambda_min = log mu + alpha log y.

    ``pencil`` carries the limiting rank-one pencil data for comparison;
    the fitted exponent is reported next to both 2n (the exact two-atom
    order) and 2n+1 (the claimed order), never asserted against either.
    """

    support: SupportSet
    alpha: mpf
    mu: mpf
    table: tuple  # (y, lambda_min, bits_used)
    pencil: object
    gram_order_alpha: int  # 2n for |T| = n+1
    claimed_alpha: int  # 2n+1


def smally_exponent(T, y_grid, bits=None) -> SmallYResult:
    """Fit the decay exponent of lambda_min(G_T(y)) on a small-y grid."""
    from .hp import pencil_mu

    T = _as_support(T)
    ys = [mpf(str(v)) if not isinstance(v, mpf) else v for v in y_grid]
    if len(ys) < 4:
        raise DomainError("need at least 4 grid points")
    if any(not 0 < v <= mpf("0.02") for v in ys):
        raise DomainError("y grid must lie in (0, 0.02]")
    ys = sorted(ys, reverse=True)
    rows = []
    for yv in ys:
        params = SystemParams.from_y(yv, bits=bits)
        res = min_eig_for_support(params, T)
        if res.value <= 0:
            raise PrecisionError(f"lambda_min underflowed the ladder at y = {yv}")
        rows.append((yv, res.value, res.bits_used))
    n_pts = len(rows)
    work_bits = max(r[2] for r in rows) * 2
    with workprec(work_bits):
        xs = [mp.log(r[0]) for r in rows]
        ls = [mp.log(r[1]) for r in rows]
        sx = sum(xs)
        sl = sum(ls)
        sxx = sum(x * x for x in xs)
        sxl = sum(x * l for x, l in zip(xs, ls))
        denom = n_pts * sxx - sx * sx
        if denom == 0:
            raise PrecisionError("degenerate fit: y grid collapsed")
        alpha = (n_pts * sxl - sx * sl) / denom
        mu = mp.exp((sl - alpha * sx) / n_pts)
    n = len(T) - 1
    pencil = pencil_mu(T.offsets, bits=bits) if n >= 1 else None
    return SmallYResult(support=T, alpha=alpha, mu=mu, table=tuple(rows),
                        pencil=pencil, gram_order_alpha=2 * n,
                        claimed_alpha=2 * n + 1)
