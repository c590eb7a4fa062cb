"""Brute-force l0 recovery and the minimax sandwich experiments.

(P0) is solved by exhaustive support enumeration only. No heuristic
solver is included on purpose: the window is finite and small, and the
point of this module is to realize the combinatorial estimator whose
error the theory brackets, not to approximate it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from mpmath import mp, mpc, mpf, workprec

from .checks import bound_check
from .core import (
    CoefficientVector,
    MeasurementVector,
    SupportSet,
    SystemParams,
    build_gram,
    gram_quadform,
    keep_real,
    synthesize,
)
from .errors import (
    DomainError,
    InfeasibleError,
    PrecisionError,
    ThresholdTieError,
)
from .hp import cholesky_solve, hp_cholesky
from .spectral import CONTIGUOUS, epsilon, min_eig_for_support

DEFAULT_WINDOW_CAP = 16


@dataclass(frozen=True)
class RecoveryResult:
    """Minimizer of (P0) over the window at tolerance sigma.

    ``support``/``estimate`` are None for the zero (0-sparse) explanation.
    """

    estimate: CoefficientVector | None
    support: SupportSet | None
    sparsity: int
    residual: mpf
    supports_examined: int


def l0_solve(params: SystemParams, f: MeasurementVector, sigma, k_cap,
             bits=None) -> RecoveryResult:
    """Sparsest explanation of f within residual tolerance sigma.

    Supports are enumerated by increasing cardinality, lexicographic
    within each; the first feasible one wins. The residual of a candidate
    support T is computed exactly in coefficient space through the Schur
    complement: ||f||^2 - b* G_T^{-1} b + rho^2 with b = G_{T,W} coeffs.
    """
    sigma = keep_real(sigma)
    if sigma < 0:
        raise DomainError("sigma must be nonnegative")
    k_cap = int(k_cap)
    window = f.window
    nw = len(window)
    if k_cap > nw:
        raise DomainError("k_cap cannot exceed the window size")
    if nw > DEFAULT_WINDOW_CAP:
        raise DomainError(
            f"window size {nw} exceeds the enumeration cap {DEFAULT_WINDOW_CAP}"
        )
    bits = params.bits if bits is None else bits
    G = build_gram(params, window, bits=bits)
    with workprec(bits):
        base = gram_quadform(G.entries, f.coeffs, bits=bits)
        fnorm2 = base + f.rho * f.rho
        guard = mpf(2) ** (-bits // 2) * (1 + fnorm2)
        target = sigma * sigma + guard
        examined = 0
        for s in range(0, k_cap + 1):
            for idx in itertools.combinations(range(nw), s):
                examined += 1
                if s == 0:
                    resid2 = fnorm2
                    coeffs_T = ()
                else:
                    sub = [[G.entries[i][j] for j in idx] for i in idx]
                    b = []
                    for i in idx:
                        acc = mpc(0)
                        for j in range(nw):
                            acc += G.entries[i][j] * f.coeffs[j]
                        b.append(acc)
                    L = hp_cholesky(sub, bits=bits)
                    x = cholesky_solve(L, b, bits=bits)
                    proj = sum((mp.conj(bi) * xi).real for bi, xi in zip(b, x))
                    resid2 = fnorm2 - proj
                    coeffs_T = tuple(x)
                if resid2 <= target:
                    residual = mp.sqrt(resid2) if resid2 > 0 else mpf(0)
                    if s == 0:
                        return RecoveryResult(None, None, 0, residual, examined)
                    T = SupportSet(tuple(window.offsets[i] for i in idx))
                    est = CoefficientVector(support=T, values=coeffs_T)
                    return RecoveryResult(est, T, s, residual, examined)
    if f.rho > sigma:
        raise InfeasibleError(
            f"rho = {f.rho} exceeds sigma = {sigma}: no support can explain f"
        )
    raise InfeasibleError(
        f"no support of size <= {k_cap} reaches residual {sigma} "
        f"({examined} supports examined)"
    )


@dataclass(frozen=True)
class AdversarialPair:
    """Two k-sparse vectors that the data cannot tell apart at noise sigma.

    Built from the least singular vector v over the worst support of size
    2k: x1 carries the k largest-magnitude entries, -x0 the rest, both
    rescaled by sigma/eps_2k, so ||x0 - x1|| = sigma/eps_2k while
    ||A (x0 - x1)|| <= sigma.
    """

    x0: CoefficientVector
    x1: CoefficientVector
    T_star: SupportSet
    eps2k: mpf
    sigma: mpf
    threshold_tie: bool
    least_vector: tuple


def adversarial_pair(params: SystemParams, k, sigma, mode=CONTIGUOUS,
                     span_max=None, strict_ties=False, bits=None) -> AdversarialPair:
    """Construct the indistinguishable pair realizing the minimax lower bound.

    A tie between the k-th and (k+1)-th magnitudes of the least singular
    vector makes the split ambiguous; it is broken toward lower indices
    and flagged (or raised when strict_ties is set).
    """
    k = int(k)
    if k < 1:
        raise DomainError("k must be at least 1")
    sigma = keep_real(sigma)
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    bits = params.bits if bits is None else bits
    eps_res = epsilon(params, 2 * k, mode=mode, span_max=span_max)
    T = eps_res.attaining_support
    eig = min_eig_for_support(params, T)
    with workprec(max(bits, 2 * eig.bits_used)):
        eps2k = mp.sqrt(eig.value)
        v = eig.vector
        order = sorted(range(2 * k), key=lambda i: (-abs(v[i]), i))
        tie = abs(abs(v[order[k - 1]]) - abs(v[order[k]])) <= mpf(2) ** (-bits // 2)
        if tie and strict_ties:
            raise ThresholdTieError(
                "k-th and (k+1)-th magnitudes of the least singular vector "
                "agree to working precision"
            )
        scale = sigma / eps2k
        top = sorted(order[:k])
        rest = sorted(order[k:])
        x1 = CoefficientVector(
            support=SupportSet(tuple(T.offsets[i] for i in top)),
            values=tuple(scale * v[i] for i in top),
        )
        x0 = CoefficientVector(
            support=SupportSet(tuple(T.offsets[i] for i in rest)),
            values=tuple(-scale * v[i] for i in rest),
        )
        # postconditions, recomputed before returning
        diff = [a - b for a, b in zip(x0.embed(T), x1.embed(T))]
        gap = mp.sqrt(sum((d * mp.conj(d)).real for d in diff))
        if abs(gap - scale) > mpf(2) ** (-bits // 3) * scale:
            raise PrecisionError("||x0 - x1|| drifted from sigma/eps_2k")
        G = build_gram(params, T, bits=2 * bits)
        image = mp.sqrt(gram_quadform(G.entries, diff, bits=2 * bits))
        if image > sigma * (1 + mpf(2) ** (-bits // 3)):
            raise PrecisionError("||A (x0 - x1)|| exceeded sigma")
    return AdversarialPair(x0=x0, x1=x1, T_star=T, eps2k=eps2k, sigma=sigma,
                           threshold_tie=bool(tie), least_vector=v)


@dataclass(frozen=True)
class MinimaxReport:
    """All four numbers of the sandwich, with their two checks."""

    pair: AdversarialPair
    recovery: RecoveryResult
    err_x0: mpf
    err_x1: mpf
    upper_bound: mpf
    lower_bound: mpf
    checks: tuple


def minimax_experiment(params: SystemParams, k, sigma, mode=CONTIGUOUS,
                       span_max=None, bits=None) -> MinimaxReport:
    """Run the estimator on adversarial data and verify both sandwich sides.

    Upper side: ||xhat - x0|| <= 2 sigma / eps_2k (any (P0) minimizer).
    Lower side: max(||xhat - x0||, ||xhat - x1||) >= sigma / (2 eps_2k).
    """
    sigma = keep_real(sigma)
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    bits = params.bits if bits is None else bits
    pair = adversarial_pair(params, k, sigma, mode=mode, span_max=span_max,
                            bits=bits)
    f = synthesize(params, pair.x0, pair.T_star)
    rec = l0_solve(params, f, sigma, k_cap=k, bits=bits)
    with workprec(2 * bits):
        est = rec.estimate.embed(pair.T_star) if rec.estimate is not None \
            else tuple(mpc(0) for _ in pair.T_star)
        e0 = [a - b for a, b in zip(est, pair.x0.embed(pair.T_star))]
        e1 = [a - b for a, b in zip(est, pair.x1.embed(pair.T_star))]
        err0 = mp.sqrt(sum((d * mp.conj(d)).real for d in e0))
        err1 = mp.sqrt(sum((d * mp.conj(d)).real for d in e1))
        upper = 2 * sigma / pair.eps2k
        lower = sigma / (2 * pair.eps2k)
    checks = (
        bound_check("l0_error_within_upper", err0, upper),
        bound_check("adversarial_error_above_lower", lower, max(err0, err1)),
    )
    return MinimaxReport(pair=pair, recovery=rec, err_x0=err0, err_x1=err1,
                         upper_bound=upper, lower_bound=lower, checks=checks)


@dataclass(frozen=True)
class ScalingResult:
    """Log-log fit of eps_2k against SRF; slope should be near -(2k-1)."""

    k: int
    slope: mpf
    intercept: mpf
    table: tuple  # (srf, y, eps_2k)


def srf_scaling(k, srf_grid, bits=None) -> ScalingResult:
    """Fit log eps_2k = intercept + slope * log SRF over the grid."""
    k = int(k)
    if k < 1:
        raise DomainError("k must be at least 1")
    grid = [mpf(str(s)) if not isinstance(s, mpf) else s for s in srf_grid]
    if len(grid) < 4:
        raise DomainError("need at least 4 SRF grid points")
    if any(not s > 2 for s in grid):
        raise DomainError("every SRF must exceed 2")
    rows = []
    for srf in grid:
        params = SystemParams.from_srf(srf, bits=bits)
        val = epsilon(params, 2 * k, mode=CONTIGUOUS).value
        rows.append((srf, params.y, val))
    with workprec(512):
        xs = [mp.log(r[0]) for r in rows]
        ls = [mp.log(r[2]) for r in rows]
        n = len(rows)
        sx, sl = sum(xs), sum(ls)
        sxx = sum(x * x for x in xs)
        sxl = sum(x * l for x, l in zip(xs, ls))
        slope = (n * sxl - sx * sl) / (n * sxx - sx * sx)
        intercept = (sl - slope * sx) / n
    return ScalingResult(k=k, slope=slope, intercept=intercept, table=tuple(rows))
