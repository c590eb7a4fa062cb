"""Adaptive arbitrary-precision dense linear algebra.

Everything here operates on plain lists of mpmath scalars so that values
stay immutable-by-convention and picklable. Matrices never exceed a few
dozen rows, so the O(n^3) classics are used throughout:

* Cholesky factorization with pivot diagnostics,
* a cyclic two-sided Jacobi eigensolver (chosen over QR-type methods
  because it preserves the relative accuracy of tiny eigenvalues of
  positive definite matrices),
* a precision ladder that doubles the mantissa until the smallest
  eigenvalue stabilizes,
* exact rational Hilbert/Vandermonde machinery for the rank-one limiting
  pencil of the small-bandwidth asymptotics.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from mpmath import mp, mpf, workprec

from .errors import (
    ConvergenceError,
    DomainError,
    NotPositiveDefiniteError,
    PrecisionCapError,
    SingularSystemError,
)

ENV_PRECISION = "SRF_PRECISION_BITS"
MIN_BITS = 64
MAX_BITS = 8192
LADDER_START_BITS = 128
LADDER_CAP_BITS = 8192
LADDER_RELTOL = mpf("1e-6")
JACOBI_SWEEP_CAP = 40


def default_bits() -> int:
    """Mantissa budget in bits: SRF_PRECISION_BITS if set, else 256."""
    raw = os.environ.get(ENV_PRECISION)
    if raw is None:
        return 256
    try:
        bits = int(raw)
    except ValueError:
        raise DomainError(f"{ENV_PRECISION} must be an integer, got {raw!r}")
    if not MIN_BITS <= bits <= MAX_BITS:
        raise DomainError(f"{ENV_PRECISION} must lie in [{MIN_BITS}, {MAX_BITS}]")
    return bits


def _check_square_symmetric(M):
    n = len(M)
    for row in M:
        if len(row) != n:
            raise DomainError("matrix must be square")
    return n


def hp_cholesky(M, bits=None):
    """Lower-triangular L with L L^T = M, computed at ``bits`` precision.

    Raises NotPositiveDefiniteError with the first failing pivot index,
    which signals either a genuine singularity or insufficient precision.
    """
    bits = default_bits() if bits is None else bits
    n = _check_square_symmetric(M)
    with workprec(bits):
        L = [[mpf(0)] * n for _ in range(n)]
        for j in range(n):
            s = M[j][j]
            for k in range(j):
                s -= L[j][k] * L[j][k]
            if s <= 0:
                raise NotPositiveDefiniteError(j)
            L[j][j] = mp.sqrt(s)
            for i in range(j + 1, n):
                s = M[i][j]
                for k in range(j):
                    s -= L[i][k] * L[j][k]
                L[i][j] = s / L[j][j]
    return L


def cholesky_solve(L, b, bits=None):
    """Solve (L L^T) x = b by forward/back substitution. b may be complex."""
    bits = default_bits() if bits is None else bits
    n = len(L)
    with workprec(bits):
        y = list(b)
        for i in range(n):
            s = y[i]
            for k in range(i):
                s -= L[i][k] * y[k]
            y[i] = s / L[i][i]
        x = y[:]
        for i in range(n - 1, -1, -1):
            s = x[i]
            for k in range(i + 1, n):
                s -= L[k][i] * x[k]
            x[i] = s / L[i][i]
    return x


def _jacobi_sweeps(A, V, n, bits, max_sweeps):
    """In-place cyclic Jacobi on A with accumulation into V (may be None)."""
    tol = mpf(2) ** (-bits)
    sweeps = 0
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                if apq == 0:
                    continue
                scale = mp.sqrt(abs(A[p][p] * A[q][q]))
                thresh = tol * scale if scale > 0 else tol
                if abs(apq) <= thresh:
                    continue
                rotated = True
                theta = (A[q][q] - A[p][p]) / (2 * apq)
                t = 1 / (abs(theta) + mp.sqrt(1 + theta * theta))
                if theta < 0:
                    t = -t
                c = 1 / mp.sqrt(1 + t * t)
                s = t * c
                for k in range(n):
                    akp, akq = A[k][p], A[k][q]
                    A[k][p] = c * akp - s * akq
                    A[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = A[p][k], A[q][k]
                    A[p][k] = c * apk - s * aqk
                    A[q][k] = s * apk + c * aqk
                if V is not None:
                    for k in range(n):
                        vkp, vkq = V[k][p], V[k][q]
                        V[k][p] = c * vkp - s * vkq
                        V[k][q] = s * vkp + c * vkq
        sweeps = sweep + 1
        if not rotated:
            return sweeps
    raise ConvergenceError(f"Jacobi did not converge within {max_sweeps} sweeps")


@dataclass(frozen=True)
class EigenResult:
    """Symmetric eigendecomposition, eigenvalues ascending.

    ``vectors[i]`` is the unit eigenvector paired with ``eigenvalues[i]``.
    ``kappa_scaled`` reports the condition factor of the diagonally scaled
    matrix, which governs the relative accuracy of the small eigenvalues
    (about 2^{-bits/2} * kappa_scaled per the two-sided Jacobi contract).
    """

    eigenvalues: tuple
    vectors: tuple
    bits: int
    sweeps: int
    kappa_scaled: mpf


def _scaled_condition(M, eigenvalues, n, bits):
    diag = [M[i][i] for i in range(n)]
    if any(d <= 0 for d in diag):
        mags = sorted(abs(e) for e in eigenvalues)
        return mp.inf if mags[0] == 0 else mags[-1] / mags[0]
    unit = all(abs(d - 1) <= mpf(2) ** (8 - bits) for d in diag)
    if unit:
        lam = eigenvalues
    else:
        roots = [mp.sqrt(d) for d in diag]
        S = [[M[i][j] / (roots[i] * roots[j]) for j in range(n)] for i in range(n)]
        _jacobi_sweeps(S, None, n, bits, JACOBI_SWEEP_CAP)
        lam = sorted(S[i][i] for i in range(n))
    lo = lam[0]
    return mp.inf if lo <= 0 else lam[-1] / lo


def hp_symmetric_eigen(M, bits=None, max_sweeps=JACOBI_SWEEP_CAP) -> EigenResult:
    """Eigen decomposition of a symmetric real matrix by cyclic Jacobi."""
    bits = default_bits() if bits is None else bits
    n = _check_square_symmetric(M)
    with workprec(bits):
        A = [[mpf(M[i][j]) for j in range(n)] for i in range(n)]
        V = [[mpf(1) if i == j else mpf(0) for j in range(n)] for i in range(n)]
        sweeps = _jacobi_sweeps(A, V, n, bits, max_sweeps)
        order = sorted(range(n), key=lambda i: A[i][i])
        eigenvalues = tuple(A[i][i] for i in order)
        vectors = []
        for i in order:
            col = [V[k][i] for k in range(n)]
            # deterministic sign: largest-magnitude entry positive
            pivot = max(range(n), key=lambda k: abs(col[k]))
            if col[pivot] < 0:
                col = [-x for x in col]
            vectors.append(tuple(col))
        kappa = _scaled_condition(M, eigenvalues, n, bits)
    return EigenResult(eigenvalues, tuple(vectors), bits, sweeps, kappa)


@dataclass(frozen=True)
class MinEigResult:
    """Smallest eigenvalue certified by the precision ladder.

    ``bits_used`` is the lower level of the first pair of consecutive
    precisions that agreed to the requested relative tolerance; ``value``
    is taken from the higher (more accurate) level. ``history`` records
    every (bits, estimate) pair the ladder visited.
    """

    value: mpf
    vector: tuple
    bits_used: int
    history: tuple


def min_eig_adaptive(builder, reltol=LADDER_RELTOL,
                     start_bits=LADDER_START_BITS,
                     cap_bits=LADDER_CAP_BITS) -> MinEigResult:
    """Smallest eigenvalue of builder(bits), doubling bits until stable.

    ``builder`` must rebuild the same mathematical matrix at any requested
    precision. Stability means two consecutive ladder levels agree to
    relative ``reltol`` on a positive value.
    """
    reltol = mpf(reltol)
    history = []
    prev = None
    bits = start_bits
    while bits <= cap_bits:
        res = hp_symmetric_eigen(builder(bits), bits=bits)
        lam = res.eigenvalues[0]
        history.append((bits, lam))
        if prev is not None and lam > 0 and prev > 0:
            if abs(lam - prev) <= reltol * abs(lam):
                return MinEigResult(lam, res.vectors[0], bits // 2, tuple(history))
        prev = lam
        bits *= 2
    raise PrecisionCapError(
        f"smallest eigenvalue did not stabilize to rel {reltol} within {cap_bits} bits"
    )


# ---------------------------------------------------------------------------
# exact rational auxiliaries


def hilbert_matrix(n):
    """(n+1)x(n+1) Hilbert matrix H[i][j] = 1/(i+j+1), exact Fractions."""
    if n < 0:
        raise DomainError("hilbert_matrix requires n >= 0")
    return [[Fraction(1, i + j + 1) for j in range(n + 1)] for i in range(n + 1)]


def rational_inverse(M):
    """Exact inverse of a square Fraction matrix by Gauss-Jordan elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise SingularSystemError("matrix is singular over the rationals")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


def rational_solve(M, b):
    """Exact solution of M x = b over the rationals (partial pivoting)."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(M, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise SingularSystemError("singular system (duplicate nodes?)")
        A[col], A[piv] = A[piv], A[col]
        for r in range(col + 1, n):
            if A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b_ for a, b_ in zip(A[r], A[col])]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = A[i][n] - sum(A[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / A[i][i]
    return x


def vandermonde_lastrow(offsets):
    """Last row m of the inverse Vandermonde on integer nodes tau_j.

    m solves sum_j m_j tau_j^i = delta_{i,n} for i = 0..n. The solve is
    exact over the rationals; magnitudes agree with the product formula
    |m_j| = prod_{i != j} 1/|tau_i - tau_j|.
    """
    taus = [int(t) for t in offsets]
    if not taus:
        raise DomainError("need at least one node")
    if len(set(taus)) != len(taus):
        raise SingularSystemError("duplicate nodes make the Vandermonde singular")
    n = len(taus) - 1
    M = [[Fraction(t) ** i for t in taus] for i in range(n + 1)]
    rhs = [Fraction(int(i == n)) for i in range(n + 1)]
    return tuple(rational_solve(M, rhs))


def vieta_magnitudes(offsets):
    """|m_j| = prod_{i != j} 1/|tau_i - tau_j| (cross-check for the solve)."""
    taus = [int(t) for t in offsets]
    out = []
    for j, tj in enumerate(taus):
        prod = Fraction(1)
        for i, ti in enumerate(taus):
            if i != j:
                prod *= Fraction(1, abs(ti - tj))
        out.append(prod)
    return tuple(out)


@dataclass(frozen=True)
class PencilData:
    """Ingredients of the rank-one limiting pencil H_n - mu * c_n m m^T.

    ``quad_form`` = m^T H_n^{-1} m is kept as an exact Fraction; ``c_n`` =
    (2 pi)^{2n} / (n!)^2 and ``mu`` = 1/(c_n * quad_form) are mpf values at
    the stated precision.
    """

    n: int
    hilbert: tuple
    m: tuple
    quad_form: Fraction
    c_n: mpf
    mu: mpf
    bits: int


def pencil_mu(offsets, bits=None) -> PencilData:
    """Unique finite generalized eigenvalue of the limiting pencil."""
    bits = default_bits() if bits is None else bits
    taus = sorted(int(t) for t in offsets)
    if len(taus) < 2:
        raise DomainError("pencil requires at least two offsets")
    n = len(taus) - 1
    H = hilbert_matrix(n)
    Hinv = rational_inverse(H)
    m = vandermonde_lastrow(taus)
    qf = Fraction(0)
    for i in range(n + 1):
        for j in range(n + 1):
            qf += m[i] * Hinv[i][j] * m[j]
    with workprec(bits):
        c_n = (2 * mp.pi) ** (2 * n) / mpf(factorial(n)) ** 2
        mu = 1 / (c_n * mpf(qf.numerator) / mpf(qf.denominator))
    return PencilData(
        n=n,
        hilbert=tuple(tuple(row) for row in H),
        m=m,
        quad_form=qf,
        c_n=c_n,
        mu=mu,
        bits=bits,
    )
