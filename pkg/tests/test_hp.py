"""High-precision linear algebra: Cholesky, Jacobi eigen, precision ladder,
and the exact rational Hilbert/Vandermonde/pencil machinery."""

import pytest
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf, workprec

from conftest import lit
from srflimits import SupportSet, SystemParams, build_gram
from srflimits.acceptance import _lambda_min_bisect
from srflimits.errors import (
    NotPositiveDefiniteError,
    PrecisionCapError,
    SingularSystemError,
)
from srflimits.hp import (
    hilbert_matrix,
    hp_cholesky,
    hp_symmetric_eigen,
    min_eig_adaptive,
    pencil_mu,
    rational_inverse,
    vandermonde_lastrow,
    vieta_magnitudes,
)


def random_spd(n, bits, seed):
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((n, n))
    M = B.T @ B + np.eye(n)
    with workprec(bits):
        return [[mpf(M[i, j]) for j in range(n)] for i in range(n)]


def frob(M):
    return mp.sqrt(sum(sum(x * x for x in row) for row in M))


# --- Cholesky ---------------------------------------------------------------


def test_cholesky_identity():
    L = hp_cholesky([[mpf(1), mpf(0)], [mpf(0), mpf(1)]], bits=128)
    assert L[0][0] == 1 and L[1][1] == 1 and L[1][0] == 0


def test_cholesky_closed_form_2x2():
    g = mpf("0.983632")
    L = hp_cholesky([[mpf(1), g], [g, mpf(1)]], bits=256)
    with workprec(256):
        assert abs(L[1][0] - g) < mpf(2) ** (-250)
        assert abs(L[1][1] - mp.sqrt(1 - g * g)) < mpf(2) ** (-240)


def test_cholesky_flags_failing_pivot():
    with pytest.raises(NotPositiveDefiniteError) as err:
        hp_cholesky([[mpf(1), mpf(2)], [mpf(2), mpf(1)]], bits=128)
    assert err.value.pivot == 1


def test_cholesky_reconstruction_residual():
    bits = 192
    M = random_spd(7, bits, seed=1)
    L = hp_cholesky(M, bits=bits)
    with workprec(bits):
        n = len(M)
        R = [[sum(L[i][k] * L[j][k] for k in range(n)) - M[i][j]
              for j in range(n)] for i in range(n)]
        assert frob(R) <= mpf(2) ** (-bits // 2) * frob(M)


# --- Jacobi eigen -----------------------------------------------------------


def test_eigen_diagonal_matrix():
    M = [[mpf(3), mpf(0), mpf(0)],
         [mpf(0), mpf(1), mpf(0)],
         [mpf(0), mpf(0), mpf(2)]]
    res = hp_symmetric_eigen(M, bits=128)
    assert [round(float(e)) for e in res.eigenvalues] == [1, 2, 3]
    # permutation eigenvectors
    assert res.vectors[0][1] == 1 and res.vectors[1][2] == 1 and res.vectors[2][0] == 1


def test_eigen_2x2_closed_form():
    p = SystemParams.from_y("0.1", bits=256)
    G = build_gram(p, SupportSet.of(0, 1), bits=256)
    res = hp_symmetric_eigen(G.as_lists(), bits=256)
    g = G.entries[0][1]
    with workprec(256):
        assert abs(res.eigenvalues[0] - (1 - g)) < mpf(2) ** (-240)
        assert abs(res.eigenvalues[1] - (1 + g)) < mpf(2) ** (-240)
        v = res.vectors[0]
        assert abs(abs(v[0]) - 1 / mp.sqrt(2)) < mpf(2) ** (-120)
        assert abs(v[0] + v[1]) < mpf(2) ** (-120)


def test_eigen_reconstruction_and_orthogonality():
    bits = 192
    M = random_spd(6, bits, seed=3)
    res = hp_symmetric_eigen(M, bits=bits)
    n = len(M)
    with workprec(bits):
        V = [[res.vectors[j][i] for j in range(n)] for i in range(n)]  # columns
        VtV = [[sum(V[k][i] * V[k][j] for k in range(n)) - (i == j)
                for j in range(n)] for i in range(n)]
        assert frob(VtV) <= mpf(2) ** (-bits // 2)
        R = [[sum(V[i][k] * res.eigenvalues[k] * V[j][k] for k in range(n)) - M[i][j]
              for j in range(n)] for i in range(n)]
        assert frob(R) <= mpf(2) ** (-bits // 2) * frob(M)


def test_eigen_prolate_matches_bisection_oracle():
    # bracket from the decay theory plus an independent characteristic
    # polynomial bisection at 512 bits
    p = SystemParams.from_y("0.1", bits=512)
    G = build_gram(p, SupportSet(tuple(range(5))), bits=512)
    res = hp_symmetric_eigen(G.as_lists(), bits=512)
    lam = res.eigenvalues[0]
    oracle = _lambda_min_bisect(G.as_lists(), 512)
    with workprec(512):
        assert lam > 0
        assert lam <= 16 * p.c ** 8
        assert abs(lam - oracle) <= lit("1e-60") * oracle
        assert res.kappa_scaled > 1


def test_cholesky_eigen_determinant_consistency():
    bits = 256
    p = SystemParams.from_y("0.2", bits=bits)
    G = build_gram(p, SupportSet(tuple(range(5))), bits=bits)
    L = hp_cholesky(G.as_lists(), bits=bits)
    res = hp_symmetric_eigen(G.as_lists(), bits=bits)
    with workprec(bits):
        det_chol = mpf(1)
        for i in range(5):
            det_chol *= L[i][i] ** 2
        det_eig = mpf(1)
        for e in res.eigenvalues:
            det_eig *= e
        assert abs(det_chol - det_eig) <= mpf(2) ** (-bits // 4) * det_eig


# --- precision ladder -------------------------------------------------------


def test_ladder_trivial_matrix_stops_at_first_level():
    res = min_eig_adaptive(lambda bits: [[mpf(1)]])
    assert res.value == 1
    assert res.vector == (mpf(1),)
    assert res.bits_used == 128


def test_ladder_2x2_forced_eigenvector():
    p = SystemParams.from_y("0.1")
    res = min_eig_adaptive(
        lambda bits: build_gram(p.at_bits(bits), SupportSet.of(0, 1), bits=bits).as_lists()
    )
    with workprec(256):
        assert abs(res.value - lit("0.01636835691653403265251213")) < lit("1e-24")
        assert abs(abs(res.vector[0]) - 1 / mp.sqrt(2)) < mpf("1e-30")
        assert abs(res.vector[0] + res.vector[1]) < mpf("1e-30")


def test_ladder_tiny_eigenvalue_magnitude():
    # independently confirmed by characteristic-polynomial sign checks at
    # 768 bits: lambda_min for 7 contiguous atoms at y = 0.05 is 9.07e-17,
    # inside (0, 16 c^12]
    p = SystemParams.from_y("0.05")
    res = min_eig_adaptive(
        lambda bits: build_gram(p.at_bits(bits), SupportSet(tuple(range(7))), bits=bits).as_lists()
    )
    assert 0 < res.value <= 16 * p.c ** 12
    assert abs(res.value - lit("9.0715022895199882e-17")) < lit("1e-24")
    assert res.bits_used >= 128 and len(res.history) >= 2


def test_ladder_history_contracts():
    p = SystemParams.from_y("0.08")
    res = min_eig_adaptive(
        lambda bits: build_gram(p.at_bits(bits), SupportSet(tuple(range(5))), bits=bits).as_lists(),
        reltol=mpf("1e-40"),
    )
    vals = [v for _, v in res.history]
    diffs = [abs(a - b) for a, b in zip(vals, vals[1:])]
    started = False
    for a, b in zip(diffs, diffs[1:]):
        if a > 0:
            started = True
            assert b < a or b == 0
    assert started and len(res.history) >= 3


def test_ladder_cap_error():
    p = SystemParams.from_y("0.1")
    with pytest.raises(PrecisionCapError):
        min_eig_adaptive(
            lambda bits: build_gram(p.at_bits(bits), SupportSet.of(0, 1), bits=bits).as_lists(),
            reltol=mpf(0),
            cap_bits=512,
        )


# --- exact rational machinery -----------------------------------------------


def test_hilbert_entries():
    H = hilbert_matrix(2)
    assert H[0][0] == 1
    assert H[1][2] == Fraction(1, 4)


def test_hilbert_inverse_exact():
    H = hilbert_matrix(2)
    Hinv = rational_inverse(H)
    assert Hinv == [[Fraction(9), Fraction(-36), Fraction(30)],
                    [Fraction(-36), Fraction(192), Fraction(-180)],
                    [Fraction(30), Fraction(-180), Fraction(180)]]
    n = 3
    ident = [[sum(H[i][k] * Hinv[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
    assert ident == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def test_vandermonde_lastrow_examples():
    assert vandermonde_lastrow((0, 1)) == (Fraction(-1), Fraction(1))
    assert vandermonde_lastrow((0, 1, 2)) == (Fraction(1, 2), Fraction(-1), Fraction(1, 2))


def test_vandermonde_row_sums_to_zero():
    for T in [(0, 1, 3), (0, 2, 5, 9), (1, 4, 6, 7, 10)]:
        m = vandermonde_lastrow(T)
        assert sum(m) == 0
        # defining equations hold exactly
        n = len(T) - 1
        for i in range(n + 1):
            assert sum(mj * Fraction(t) ** i for mj, t in zip(m, T)) == (i == n)


def test_vandermonde_magnitudes_match_vieta():
    for T in [(0, 1, 2), (0, 3, 5, 9)]:
        m = vandermonde_lastrow(T)
        for got, want in zip(m, vieta_magnitudes(T)):
            assert abs(got) == want


def test_vandermonde_duplicate_nodes_rejected():
    with pytest.raises(SingularSystemError):
        vandermonde_lastrow((0, 0, 1))


def test_pencil_examples():
    d = pencil_mu((0, 1), bits=256)
    assert d.quad_form == 28
    with workprec(256):
        assert abs(d.c_n - 4 * mp.pi ** 2) < mpf(2) ** (-240)
        assert abs(d.mu - lit("0.0009046534253780158164632095")) < lit("1e-24")

    d = pencil_mu((0, 1, 2), bits=256)
    assert d.quad_form == Fraction(1881, 4)
    with workprec(256):
        assert abs(d.mu - lit("5.457725813229311636976493e-6")) < lit("1e-27")


def test_pencil_mu_always_positive():
    for T in [(0, 1), (0, 2, 7), (0, 1, 2, 3), (0, 4, 5, 11, 13)]:
        assert pencil_mu(T).mu > 0


def test_default_bits_env_override(monkeypatch):
    from srflimits.hp import default_bits

    monkeypatch.delenv("SRF_PRECISION_BITS", raising=False)
    assert default_bits() == 256
    monkeypatch.setenv("SRF_PRECISION_BITS", "512")
    assert default_bits() == 512
    monkeypatch.setenv("SRF_PRECISION_BITS", "16")
    with pytest.raises(Exception):
        default_bits()


def test_jacobi_sweep_cap():
    from srflimits.errors import ConvergenceError

    M = [[mpf(1), mpf("0.5")], [mpf("0.5"), mpf(1)]]
    with pytest.raises(ConvergenceError):
        hp_symmetric_eigen(M, bits=128, max_sweeps=0)
