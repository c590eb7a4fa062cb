"""Acceptance suite: every exit criterion of the toolkit, one function each.

Each criterion returns a CriterionOutcome with a pass flag and a short
human-readable detail line. ``run_all`` executes them in order; the CLI
``selftest`` subcommand and the pytest acceptance module both call into
this module so that CI and the command line agree by construction.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpc, mpf, workprec

from .core import (
    SupportSet,
    SystemParams,
    build_gram,
    gram_entry,
    gram_quadform,
    synthesize,
)
from .errors import PrecisionError
from .hp import cholesky_solve, hp_cholesky, hp_symmetric_eigen
from .recovery import l0_solve, minimax_experiment
from .spectral import contiguity_scan, min_eig_for_support, smally_exponent
from .szego import (
    Phi_map,
    arc_inner_product,
    bound_suite,
    faber_arc_max,
    faber_poly,
    leading_coeffs,
    phi_map,
    szego_reproduce,
)


@dataclass(frozen=True)
class CriterionOutcome:
    name: str
    passed: bool
    detail: str
    seconds: float


def _outcome(name, passed, detail, t0) -> CriterionOutcome:
    return CriterionOutcome(name=name, passed=bool(passed), detail=detail,
                            seconds=time.time() - t0)


THM10_Y_GRID = ("0.05", "0.1", "0.25", "0.4")


def criterion_1_kn_bracket() -> CriterionOutcome:
    """Two-sided bracket on k_n^{-2} with positive slack, n <= 12, 512 bits."""
    t0 = time.time()
    min_slack = None
    for ys in THM10_Y_GRID:
        params = SystemParams.from_y(ys, bits=512)
        for chk in leading_coeffs(params, 12, bits=512).thm10_checks(params):
            rel = chk.slack / abs(chk.rhs)
            if min_slack is None or rel < min_slack:
                min_slack = rel
            if not chk.slack > 0:
                return _outcome("criterion_1_kn_bracket", False,
                                f"nonpositive slack in {chk.name} at y={ys}", t0)
    return _outcome("criterion_1_kn_bracket", True,
                    f"bracket holds for 4 y-values, n<=12; min relative slack "
                    f"{mp.nstr(min_slack, 3)}", t0)


def criterion_2_upper_chain() -> CriterionOutcome:
    """sigma_min(A_{0..n}) <= k_n^{-1} <= 4 c^n on the same grid."""
    t0 = time.time()
    worst = None
    for ys in THM10_Y_GRID:
        params = SystemParams.from_y(ys, bits=512)
        table = leading_coeffs(params, 12, bits=512)
        for n in range(0, 13):
            T = SupportSet(tuple(range(n + 1)))
            if n == 0:
                smin = mpf(1)
            else:
                res = min_eig_for_support(params, T)
                with workprec(2 * res.bits_used):
                    smin = mp.sqrt(res.value)
            with workprec(512):
                kn_inv = 1 / table.k_values[n]
                cap = 4 * params.c ** n
                if not (smin <= kn_inv and kn_inv <= cap):
                    return _outcome(
                        "criterion_2_upper_chain", False,
                        f"chain broken at y={ys} n={n}: "
                        f"{mp.nstr(smin, 8)} <= {mp.nstr(kn_inv, 8)} <= {mp.nstr(cap, 8)}",
                        t0)
                gap = (kn_inv - smin) / kn_inv
                if n >= 1 and (worst is None or gap < worst):
                    worst = gap
    return _outcome("criterion_2_upper_chain", True,
                    f"chain exact on grid; tightest relative gap "
                    f"{mp.nstr(worst, 3)}", t0)


def criterion_3_lower_ratio_stable() -> CriterionOutcome:
    """min over n <= 10, y <= 0.3 of eps_{n+1}/(c/4)^n: positive and stable
    to 1e-6 relative between 512 and 1024 bits."""
    t0 = time.time()
    mins = []
    for bits in (512, 1024):
        min_ratio = None
        for ys in ("0.05", "0.1", "0.2", "0.3"):
            params = SystemParams.from_y(ys, bits=bits)
            for n in range(1, 11):
                G = build_gram(params, SupportSet(tuple(range(n + 1))), bits=bits)
                lam = hp_symmetric_eigen(G.as_lists(), bits=bits).eigenvalues[0]
                if not lam > 0:
                    return _outcome("criterion_3_lower_ratio_stable", False,
                                    f"lambda_min <= 0 at y={ys} n={n} bits={bits}", t0)
                with workprec(bits):
                    ratio = mp.sqrt(lam) / (params.c / 4) ** n
                if min_ratio is None or ratio < min_ratio:
                    min_ratio = ratio
        mins.append(min_ratio)
    with workprec(160):
        drift = abs(mins[0] - mins[1]) / mins[1]
    passed = mins[1] > 0 and drift <= mpf("1e-6")
    return _outcome("criterion_3_lower_ratio_stable", passed,
                    f"min ratio {mp.nstr(mins[1], 10)}, drift across precisions "
                    f"{mp.nstr(drift, 3)}", t0)


def criterion_4_contiguity() -> CriterionOutcome:
    """Exhaustive scan at y = 0.05, sizes 2-4, span 10: contiguous wins."""
    t0 = time.time()
    params = SystemParams.from_y("0.05")
    total = 0
    for size in (2, 3, 4):
        res = contiguity_scan(params, size, 10)
        total += res.supports_checked
        if not res.holds:
            return _outcome("criterion_4_contiguity", False,
                            f"contiguous support not the strict minimizer at size {size}", t0)
        if res.monotonicity_violations:
            return _outcome("criterion_4_contiguity", False,
                            f"{len(res.monotonicity_violations)} monotonicity "
                            f"violations at size {size}", t0)
    return _outcome("criterion_4_contiguity", True,
                    f"contiguous strictly minimal and gap-monotone over "
                    f"{total} supports", t0)


def criterion_5_srf_scaling() -> CriterionOutcome:
    """Slope of log eps_2k vs log SRF equals -(2k-1) within 0.15, k = 1..3."""
    from .recovery import srf_scaling

    t0 = time.time()
    details = []
    for k in (1, 2, 3):
        res = srf_scaling(k, ("8", "12", "16", "24", "32"))
        dev = abs(res.slope + (2 * k - 1))
        details.append(f"k={k}: {mp.nstr(res.slope, 6)}")
        if not dev <= mpf("0.15"):
            return _outcome("criterion_5_srf_scaling", False,
                            f"slope {mp.nstr(res.slope, 6)} off target "
                            f"{-(2 * k - 1)} by {mp.nstr(dev, 3)}", t0)
    return _outcome("criterion_5_srf_scaling", True, "; ".join(details), t0)


def _det(M, bits):
    with workprec(bits):
        n = len(M)
        A = [row[:] for row in M]
        det = mpf(1)
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(A[r][col]))
            if A[piv][col] == 0:
                return mpf(0)
            if piv != col:
                A[col], A[piv] = A[piv], A[col]
                det = -det
            det *= A[col][col]
            for r in range(col + 1, n):
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
        return det


def _lambda_min_bisect(entries, bits):
    """Characteristic-polynomial bisection for the smallest eigenvalue of a
    positive definite matrix; independent of the Jacobi path.

    Grows the shift from far below until the determinant first changes
    sign, so the initial bracket (hi/2, hi] straddles lambda_min alone;
    valid whenever the next eigenvalue is more than twice lambda_min,
    which holds with huge margin for the exponentially graded spectra
    this oracle is pointed at.
    """
    with workprec(bits):
        n = len(entries)

        def shifted(lam):
            return [[entries[i][j] - (lam if i == j else 0) for j in range(n)]
                    for i in range(n)]

        hi = mpf(2) ** (-(3 * bits) // 4)
        while _det(shifted(hi), bits) > 0:
            hi *= 2
            if hi > n:
                raise PrecisionError("bisection failed to bracket lambda_min")
        lo = hi / 2
        for _ in range(bits):
            mid = (lo + hi) / 2
            if _det(shifted(mid), bits) > 0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= mpf(2) ** (-bits) * hi:
                break
        return (lo + hi) / 2


def criterion_6_minimax_sandwich() -> CriterionOutcome:
    """Minimax sandwich for (k, y, sigma) in {(1, 0.2, 1e-4), (2, 0.2, 1e-6)},
    with the bounds recomputed independently from Gram data."""
    t0 = time.time()
    for k, sigma in ((1, mpf("1e-4")), (2, mpf("1e-6"))):
        params = SystemParams.from_y("0.2", bits=512)
        rep = minimax_experiment(params, k, sigma, bits=512)
        if not all(c.satisfied for c in rep.checks):
            return _outcome("criterion_6_minimax_sandwich", False,
                            f"in-pipeline check failed at k={k}", t0)
        # independent recomputation: bisected eps_2k and direct error norms
        G = build_gram(params, rep.pair.T_star, bits=512)
        lam = _lambda_min_bisect(G.as_lists(), 512)
        with workprec(512):
            eps_indep = mp.sqrt(lam)
            agree = abs(eps_indep - rep.pair.eps2k) / eps_indep
            if agree > mpf(10) ** (-30):
                return _outcome("criterion_6_minimax_sandwich", False,
                                f"eps_2k mismatch vs bisection: {mp.nstr(agree, 3)}", t0)
            est = rep.recovery.estimate.embed(rep.pair.T_star)
            x0 = rep.pair.x0.embed(rep.pair.T_star)
            x1 = rep.pair.x1.embed(rep.pair.T_star)
            err0 = mp.sqrt(sum(((a - b) * mp.conj(a - b)).real
                               for a, b in zip(est, x0)))
            err1 = mp.sqrt(sum(((a - b) * mp.conj(a - b)).real
                               for a, b in zip(est, x1)))
            upper = 2 * sigma / eps_indep
            lower = sigma / (2 * eps_indep)
            diff = [a - b for a, b in zip(x0, x1)]
            image = mp.sqrt(gram_quadform(G.entries, diff, bits=512))
            ok = (err0 <= upper and max(err0, err1) >= lower
                  and image <= sigma * (1 + mpf(10) ** (-50)))
        if not ok:
            return _outcome("criterion_6_minimax_sandwich", False,
                            f"independent recomputation failed at k={k}", t0)
    return _outcome("criterion_6_minimax_sandwich", True,
                    "both sandwich sides hold; eps_2k, error norms and "
                    "||A(x0-x1)|| <= sigma re-derived from Gram data", t0)


def criterion_7_reproducing() -> CriterionOutcome:
    """Kernel quadrature reproduces Phi^{-n}, n <= 5, at 20 exterior points
    to relative 1e-8."""
    t0 = time.time()
    params = SystemParams.from_y("0.17")
    rng = np.random.default_rng(7)
    radii = rng.uniform(2.2, 6.0, 20)
    angles = rng.uniform(-np.pi, np.pi, 20)
    worst = mpf(0)
    with workprec(params.bits):
        points = [phi_map(params.c, mpf(float(r)) * mp.exp(mpc(0, 1) * mpf(float(a))))
                  for r, a in zip(radii, angles)]
        for n in range(0, 6):
            for z in points:
                val = szego_reproduce(params, n, z)
                ref = Phi_map(params.c, z) ** (-n)
                err = abs(val - ref) / abs(ref)
                worst = max(worst, err)
                if err > mpf("1e-8"):
                    return _outcome("criterion_7_reproducing", False,
                                    f"relative error {mp.nstr(err, 3)} at n={n}", t0)
    return _outcome("criterion_7_reproducing", True,
                    f"120 reproductions; worst relative error {mp.nstr(worst, 3)}", t0)


def criterion_8_faber_rotation_bound() -> CriterionOutcome:
    """Sampled max of |Faber_n| on the arc (1e4 points) <= 2(1+2y)."""
    t0 = time.time()
    worst = None
    for ys in ("0.1", "0.3"):
        params = SystemParams.from_y(ys)
        with workprec(params.bits):
            bound = 2 * (1 + 2 * params.y)
        for n in range(0, 11):
            coeffs = faber_poly(params, n)
            peak = faber_arc_max(params, coeffs, arc_samples=10 ** 4)
            margin = (bound - peak) / bound
            if worst is None or margin < worst:
                worst = margin
            if not peak <= bound:
                return _outcome("criterion_8_faber_rotation_bound", False,
                                f"max |Faber_{n}| = {mp.nstr(peak, 8)} exceeds "
                                f"{mp.nstr(bound, 8)} at y={ys}", t0)
    return _outcome("criterion_8_faber_rotation_bound", True,
                    f"22 polynomials within the rotation bound; smallest "
                    f"relative margin {mp.nstr(worst, 3)}", t0)


def criterion_9_growth_bounds() -> CriterionOutcome:
    """100 random arc-unit polynomials per (n <= 6, y in {0.1, 0.3}):
    zero violations of the exterior and banana-region growth bounds."""
    t0 = time.time()
    checked = 0
    for seed, ys in ((101, "0.1"), (103, "0.3")):
        params = SystemParams.from_y(ys)
        suite = bound_suite(params, 6, samples=200, seed=seed, polys=100)
        if suite.errors:
            return _outcome("criterion_9_growth_bounds", False,
                            f"suite errors at y={ys}: {suite.errors}", t0)
        growth = [c for c in suite.checks
                  if c.name.startswith(("growth_", "phi_prime_envelope"))]
        checked += len(growth)
        bad = [c.name for c in growth if not c.satisfied]
        if bad:
            return _outcome("criterion_9_growth_bounds", False,
                            f"violations at y={ys}: {bad}", t0)
    return _outcome("criterion_9_growth_bounds", True,
                    f"{checked} aggregated growth checks, zero violations", t0)


def criterion_10_smally_exponent() -> CriterionOutcome:
    """Fitted decay exponent equals 2n +- 0.05 for n = 1..3; the n = 1
    constant matches pi^2/6 within 1%. (The fitted order is 2n, one power
    of y below the claimed 2n+1; both are recorded in the result.)"""
    t0 = time.time()
    grid = ("0.001", "0.002", "0.003", "0.004", "0.006", "0.008")
    details = []
    for n in (1, 2, 3):
        res = smally_exponent(SupportSet(tuple(range(n + 1))), grid)
        dev = abs(res.alpha - 2 * n)
        details.append(f"n={n}: alpha={mp.nstr(res.alpha, 7)}")
        if not dev <= mpf("0.05"):
            return _outcome("criterion_10_smally_exponent", False,
                            f"alpha={mp.nstr(res.alpha, 7)} not within 0.05 of {2 * n}", t0)
        if res.gram_order_alpha + 1 != res.claimed_alpha:
            return _outcome("criterion_10_smally_exponent", False,
                            "claimed order no longer recorded next to the fit", t0)
        if n == 1:
            with workprec(256):
                target = mp.pi ** 2 / 6
                rel = abs(res.mu - target) / target
            details.append(f"mu={mp.nstr(res.mu, 7)} vs pi^2/6 (rel {mp.nstr(rel, 3)})")
            if not rel <= mpf("0.01"):
                return _outcome("criterion_10_smally_exponent", False,
                                f"mu={mp.nstr(res.mu, 8)} off pi^2/6 by {mp.nstr(rel, 3)}", t0)
    return _outcome("criterion_10_smally_exponent", True, "; ".join(details), t0)


def _l0_reference(params, f, sigma, bits):
    """All-subsets direct-residual search: the independence oracle for l0_solve."""
    W = f.window
    nw = len(W)
    G = build_gram(params, W, bits=bits)
    with workprec(bits):
        fnorm2 = gram_quadform(G.entries, f.coeffs, bits=bits) + f.rho ** 2
        guard = mpf(2) ** (-bits // 2) * (1 + fnorm2)
        best = None  # (sparsity, support, residual)
        for s in range(0, nw + 1):
            for idx in itertools.combinations(range(nw), s):
                if s == 0:
                    resid2 = fnorm2
                else:
                    sub = [[G.entries[i][j] for j in idx] for i in idx]
                    b = []
                    for i in idx:
                        b.append(sum(G.entries[i][j] * f.coeffs[j] for j in range(nw)))
                    L = hp_cholesky(sub, bits=bits)
                    x = cholesky_solve(L, b, bits=bits)
                    # residual evaluated directly as ||f - A x|| in window space
                    diff = list(f.coeffs)
                    for pos, i in enumerate(idx):
                        diff[i] -= x[pos]
                    # f - Ax has window coefficients coeffs - embed(x)
                    resid2 = gram_quadform(G.entries, diff, bits=bits) + f.rho ** 2
                if resid2 <= sigma * sigma + guard:
                    best = (s, idx)
                    return best
        return best


def criterion_11_oracle_equivalence() -> CriterionOutcome:
    """Closed forms against their independent oracles:
    gram_entry vs quadrature (1e-12), l0_solve vs all-subsets direct
    residual search, Cholesky k_n vs classical Gram-Schmidt (n <= 6)."""
    t0 = time.time()
    rng = np.random.default_rng(11)

    # (i) gram_entry vs quadrature of the defining integral
    params = SystemParams.from_y("0.1", bits=128)
    for m in sorted(set(int(v) for v in rng.integers(-20, 21, 12))):
        f = [mpf(0)] * (abs(m) + 1)
        f[abs(m)] = mpf(1)
        quad = arc_inner_product(f, [mpf(1)], params, bits=128)
        closed = gram_entry(params, m, bits=128)
        with workprec(128):
            err = abs(quad.real - closed) / max(abs(closed), mpf("1e-3"))
        if err > mpf("1e-12"):
            return _outcome("criterion_11_oracle_equivalence", False,
                            f"gram_entry vs quadrature off by {mp.nstr(err, 3)} at m={m}", t0)

    # (ii) l0_solve vs exhaustive direct-residual search
    params = SystemParams.from_y("0.22")
    window = SupportSet(tuple(range(8)))
    for trial in range(4):
        support_idx = sorted(rng.choice(8, size=2, replace=False))
        from .core import CoefficientVector
        x_true = CoefficientVector(
            support=SupportSet(tuple(window.offsets[i] for i in support_idx)),
            values=tuple(mpc(float(rng.standard_normal()), float(rng.standard_normal()))
                         for _ in support_idx),
        )
        f = synthesize(params, x_true, window)
        sigma = mpf("1e-12")
        res = l0_solve(params, f, sigma, k_cap=8)
        ref = _l0_reference(params, f, sigma, params.bits)
        ref_support = tuple(window.offsets[i] for i in ref[1])
        if res.sparsity != ref[0] or res.support.offsets != ref_support:
            return _outcome("criterion_11_oracle_equivalence", False,
                            f"l0 mismatch on trial {trial}: {res.support} vs {ref_support}", t0)

    # (iii) Cholesky k_n vs classical Gram-Schmidt on monomial inner products
    params = SystemParams.from_y("0.15")
    table = leading_coeffs(params, 6)
    with workprec(params.bits):
        basis = []  # orthonormal polynomials as coefficient lists
        def ip(a, b):
            return sum(a[i] * gram_entry(params, j - i) * b[j]
                       for i in range(len(a)) for j in range(len(b)))
        for n in range(7):
            mono = [mpf(0)] * (n + 1)
            mono[n] = mpf(1)
            resid = list(mono)
            for q in basis:
                coef = ip([x for x in q] + [mpf(0)] * (n + 1 - len(q)), mono)
                for i in range(len(q)):
                    resid[i] -= coef * q[i]
            norm = mp.sqrt(ip(resid, resid))
            kn_gs = 1 / norm
            rel = abs(kn_gs - table.k_values[n]) / table.k_values[n]
            if rel > mpf(2) ** (-params.bits // 4):
                return _outcome("criterion_11_oracle_equivalence", False,
                                f"k_{n} Cholesky vs Gram-Schmidt differ by {mp.nstr(rel, 3)}", t0)
            basis.append([x / norm for x in resid])
    return _outcome("criterion_11_oracle_equivalence", True,
                    "quadrature, direct-residual and Gram-Schmidt oracles agree", t0)


ALL_CRITERIA = (
    criterion_1_kn_bracket,
    criterion_2_upper_chain,
    criterion_3_lower_ratio_stable,
    criterion_4_contiguity,
    criterion_5_srf_scaling,
    criterion_6_minimax_sandwich,
    criterion_7_reproducing,
    criterion_8_faber_rotation_bound,
    criterion_9_growth_bounds,
    criterion_10_smally_exponent,
    criterion_11_oracle_equivalence,
)


def run_all():
    return [fn() for fn in ALL_CRITERIA]
