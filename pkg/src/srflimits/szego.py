"""Conformal maps, Szego kernel, orthogonal-polynomial leading coefficients
and Faber polynomials for the circular arc Gamma = {e^{i theta}: |theta| <= pi y}.

Geometry conventions
--------------------
phi(w) = w (c w + 1)/(w + c) maps |w| > 1 conformally onto the exterior of
the arc, with capacity c = sin(pi y / 2) as the leading Laurent coefficient.
Its inverse Phi(z) is evaluated as the root of the quadratic
c w^2 + (1 - z) w - z c = 0 with |w| > 1, which sidesteps all branch-cut
bookkeeping for the square root in the closed form; points on the arc
(where both roots sit on |w| = 1) are rejected.

The analytic square root of Phi' needed by the Szego kernel is built from
q(w) = sqrt(c) * w * sqrt(1 + 2c/w + 1/w^2) / (w + c),
a branch of sqrt(phi') that is analytic on |w| > 1 because
1 + 2c u + u^2 never meets the negative real axis for |u| < 1. Then
sqrt(Phi'(z)) = 1 / q(Phi(z)), positive at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpc, mpf, workprec

from .checks import bound_check
from .core import SupportSet, SystemParams, build_gram, keep_complex
from .errors import (
    ConvergenceError,
    DomainError,
    KernelDegeneracyError,
    OnArcError,
    PoleError,
    TruncationError,
)
from .hp import default_bits, hp_cholesky

ON_ARC_TOL = mpf("1e-12")
KERNEL_DEGENERACY_TOL = mpf("1e-30")
QUAD_REL_TARGET = mpf("1e-13")
QUAD_NODE_CAP = 2 ** 16


def _is_inf(z) -> bool:
    if z is None or z == "inf":
        return True
    try:
        return bool(mp.isinf(z))
    except TypeError:
        return False


def _cap_of(params_or_c):
    # never mpf()-convert an existing mpf: that re-rounds at ambient precision
    if isinstance(params_or_c, SystemParams):
        return params_or_c.c
    if isinstance(params_or_c, mpf):
        return params_or_c
    return mpf(params_or_c)


# ---------------------------------------------------------------------------
# conformal maps


def phi_map(c, w):
    """Exterior map phi(w) = w (c w + 1)/(w + c); pole at w = -c."""
    c = _cap_of(c)
    w = keep_complex(w)
    if abs(w + c) == 0:
        raise PoleError("phi has a pole at w = -c")
    return w * (c * w + 1) / (w + c)


def phi_prime(c, w):
    """phi'(w) = c (w^2 + 2 c w + 1)/(w + c)^2."""
    c = _cap_of(c)
    w = keep_complex(w)
    if abs(w + c) == 0:
        raise PoleError("phi' has a pole at w = -c")
    return c * (w * w + 2 * c * w + 1) / ((w + c) * (w + c))


def Phi_map(c, z, bits=None):
    """Inverse map: the root of c w^2 + (1-z) w - z c = 0 with |w| > 1.

    Raises OnArcError when both candidate roots have modulus within
    1 +- 1e-12, i.e. z is numerically on the arc.
    """
    c = _cap_of(c)
    bits = default_bits() if bits is None else bits
    with workprec(bits):
        z = keep_complex(z)
        disc = mp.sqrt((1 - z) ** 2 + 4 * c * c * z)
        w1 = ((z - 1) + disc) / (2 * c)
        w2 = ((z - 1) - disc) / (2 * c)
        # root product is -z; recompute the small root from it when possible
        big, small = (w1, w2) if abs(w1) >= abs(w2) else (w2, w1)
        if abs(big) != 0:
            small = -z / big
        if abs(abs(big) - 1) < ON_ARC_TOL and abs(abs(small) - 1) < ON_ARC_TOL:
            raise OnArcError(f"z = {z} lies on the arc (both roots on |w| = 1)")
        return big


def phi_prime_sqrt(c, w):
    """Analytic branch q(w) of sqrt(phi'(w)) on |w| >= 1, q(inf) = sqrt(c)."""
    c = _cap_of(c)
    w = keep_complex(w)
    u = 1 / w
    return mp.sqrt(c) * w * mp.sqrt(1 + 2 * c * u + u * u) / (w + c)


def Phi_prime(c, z, bits=None):
    """Phi'(z) computed through 1/phi'(Phi(z))."""
    c = _cap_of(c)
    return 1 / phi_prime(c, Phi_map(c, z, bits=bits))


def Phi_prime_sqrt(c, z, bits=None):
    """Analytic sqrt(Phi'(z)), positive at infinity."""
    c = _cap_of(c)
    return 1 / phi_prime_sqrt(c, Phi_map(c, z, bits=bits))


@dataclass(frozen=True)
class ArcGeometry:
    """The arc, its endpoints e^{+-i pi y}, and total rotation V = 2 pi (1+2y)."""

    params: SystemParams
    endpoint: mpc
    total_rotation: mpf
    bits: int

    def point(self, theta):
        with workprec(self.bits):
            return mp.exp(mpc(0, 1) * mpf(theta))


def arc_geometry(params: SystemParams, bits=None) -> ArcGeometry:
    bits = params.bits if bits is None else bits
    with workprec(bits):
        endpoint = mp.exp(mpc(0, 1) * mp.pi * params.y)
        v = 2 * mp.pi * (1 + 2 * params.y)
    return ArcGeometry(params=params, endpoint=endpoint, total_rotation=v, bits=bits)


# ---------------------------------------------------------------------------
# Szego kernel


def _sqrt_phi_prime_at(c, point, bits):
    """(sqrt(Phi'), Phi) at a finite point or at infinity (Phi = None)."""
    if _is_inf(point):
        return 1 / mp.sqrt(c), None
    w = Phi_map(c, point, bits=bits)
    return 1 / phi_prime_sqrt(c, w), w


def szego_kernel(params: SystemParams, zeta, z, bits=None):
    """Reproducing kernel of the Hardy space of the arc exterior.

    K(zeta, z) = (L/pi) sqrt(Phi'(zeta)) conj(sqrt(Phi'(z)))
                 * P / (P - 1) with P = Phi(zeta) conj(Phi(z)).
    Either argument may be infinite (None, 'inf', or an mpmath inf);
    K(inf, inf) = L/(pi c).
    """
    bits = params.bits if bits is None else bits
    c, L = params.c, params.arc_length
    with workprec(bits):
        s1, w1 = _sqrt_phi_prime_at(c, zeta, bits)
        s2, w2 = _sqrt_phi_prime_at(c, z, bits)
        if w1 is None or w2 is None:
            ratio = mpf(1)
        else:
            p = w1 * mp.conj(w2)
            if abs(p - 1) < KERNEL_DEGENERACY_TOL:
                raise KernelDegeneracyError(
                    "Phi(zeta) * conj(Phi(z)) = 1: kernel pole"
                )
            ratio = p / (p - 1)
        return (L / mp.pi) * s1 * mp.conj(s2) * ratio


# ---------------------------------------------------------------------------
# Gauss-Legendre quadrature with node doubling

_NODE_CACHE = {}


def legendre_nodes(n, bits):
    """Gauss-Legendre nodes/weights on [-1, 1] at ``bits`` precision.

    float64 initial guesses polished by Newton iterations on P_n.
    """
    key = (n, bits)
    cached = _NODE_CACHE.get(key)
    if cached is not None:
        return cached
    guess, _ = np.polynomial.legendre.leggauss(n)
    with workprec(bits + 16):
        nodes = []
        for g in guess:
            x = mpf(float(g))
            for _ in range(1 + max(1, (bits // 50).bit_length())):
                p0, p1 = mpf(1), x
                for k in range(1, n):
                    p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
                dp = n * (x * p1 - p0) / (x * x - 1)
                x -= p1 / dp
            p0, p1 = mpf(1), x
            for k in range(1, n):
                p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append((x, 2 / ((1 - x * x) * dp * dp)))
    result = tuple(nodes)
    _NODE_CACHE[key] = result
    return result


def _gl_sum(f, a, b, n, bits):
    """Plain n-node Gauss-Legendre approximation of int_a^b f, plus the
    largest sampled |f| (used as the scale in convergence tests)."""
    half = (b - a) / 2
    mid = (b + a) / 2
    total = mpc(0)
    peak = mpf(0)
    for x, w in legendre_nodes(n, bits):
        val = f(mid + half * x)
        total += w * val
        peak = max(peak, abs(val))
    return half * total, peak


def integrate_doubling(f, a, b, rel_target=QUAD_REL_TARGET, bits=None,
                       start_nodes=16, node_cap=QUAD_NODE_CAP):
    """Node-doubling Gauss-Legendre integration of f over [a, b].

    Converged when two successive node counts agree to ``rel_target``
    relative to max(|integral|, sampled peak of |f|), which keeps
    integrals that vanish by symmetry from chasing an impossible
    relative tolerance. Raises ConvergenceError past ``node_cap`` nodes.
    """
    bits = default_bits() if bits is None else bits
    rel_target = mpf(rel_target)
    with workprec(bits):
        n = start_nodes
        prev, peak = _gl_sum(f, a, b, n, bits)
        while 2 * n <= node_cap:
            n *= 2
            cur, pk = _gl_sum(f, a, b, n, bits)
            peak = max(peak, pk)
            scale = max(abs(cur), peak)
            if abs(cur - prev) <= rel_target * scale:
                return cur
            prev = cur
        raise ConvergenceError(
            f"quadrature did not converge to rel {rel_target} within {node_cap} nodes"
        )


def _poly_eval(coeffs, z):
    acc = mpc(0)
    for a in reversed(coeffs):
        acc = acc * z + a
    return acc


def arc_inner_product(f_coeffs, g_coeffs, params: SystemParams,
                      start_nodes=16, rel_target=QUAD_REL_TARGET, bits=None,
                      node_cap=QUAD_NODE_CAP):
    """Arclength inner product (1/L) int_Gamma f conj(g) |dz| of polynomials.

    Pure quadrature on theta in [-pi y, pi y], doubling from start_nodes
    until two successive evaluations agree; this is the test oracle for
    the closed-form Gram entries and the reproducing property, never a
    production path.
    """
    bits = params.bits if bits is None else bits
    with workprec(bits):
        hi = mp.pi * params.y

        def integrand(theta):
            z = mp.exp(mpc(0, 1) * theta)
            return _poly_eval(f_coeffs, z) * mp.conj(_poly_eval(g_coeffs, z))

        total = integrate_doubling(integrand, -hi, hi, rel_target=rel_target,
                                   bits=bits, start_nodes=start_nodes,
                                   node_cap=node_cap)
        return total / params.arc_length


def _integrate_with_sqrt_endpoints(f, a, b, rel_target, bits, node_cap):
    """Integrate f over [a, b] when f has square-root kinks at the endpoints.

    The substitution t = a + (b-a)(1 - cos(pi s))/2 makes the composite
    integrand analytic in s, restoring spectral convergence of the
    node-doubling rule.
    """
    with workprec(bits):
        width = b - a

        def g(s):
            t = a + width * (1 - mp.cos(mp.pi * s)) / 2
            dt = width * (mp.pi / 2) * mp.sin(mp.pi * s)
            return f(t) * dt

        return integrate_doubling(g, mpf(0), mpf(1), rel_target=rel_target,
                                  bits=bits, node_cap=node_cap)


def szego_reproduce(params: SystemParams, n, z, rel_target=QUAD_REL_TARGET,
                    bits=None, node_cap=QUAD_NODE_CAP):
    """Reproduce F(z) = Phi(z)^{-n} from its boundary trace via the kernel.

    Evaluates the reproducing integral over the slit boundary (the arc
    covered once per side, i.e. the full |w| = 1 preimage) with the single-
    traversal normalization: value = (1/(2L)) * \\oint F conj(K) |dzeta|.
    The boundary integrand has square-root kinks at the two arc-endpoint
    preimages cos(t) = -c, so the circle splits there and each piece is
    integrated under a kink-flattening substitution.
    """
    bits = params.bits if bits is None else bits
    c, L = params.c, params.arc_length
    n = int(n)
    if n < 0:
        raise DomainError("n must be nonnegative")
    with workprec(bits):
        W = Phi_map(c, z, bits=bits)
        SW = 1 / phi_prime_sqrt(c, W)
        t0 = mp.acos(-c)

        def integrand(t):
            w = mp.exp(mpc(0, 1) * t)
            Kb = (L / mp.pi) * (1 / phi_prime_sqrt(c, w)) * mp.conj(SW) \
                * (w * mp.conj(W)) / (w * mp.conj(W) - 1)
            return w ** (-n) * mp.conj(Kb) * abs(phi_prime(c, w))

        part1 = _integrate_with_sqrt_endpoints(integrand, -t0, t0,
                                               rel_target, bits, node_cap)
        part2 = _integrate_with_sqrt_endpoints(integrand, t0, 2 * mp.pi - t0,
                                               rel_target, bits, node_cap)
        return (part1 + part2) / (2 * L)


# ---------------------------------------------------------------------------
# truncated Laurent series and Faber polynomials


_CLEAN_EVERYWHERE = -(10 ** 9)


class LaurentSeries:
    """Truncated Laurent series at infinity with tracked tail bookkeeping.

    Coefficients run from ``top_degree`` down to ``low_degree``.
    ``tail_bound`` estimates the l1 mass of everything below the stored
    range (0 means the series is complete: all lower coefficients vanish).
    Degrees below ``dirty_below`` may have been polluted by unknown tail
    terms during truncated convolutions and must not be read.
    """

    __slots__ = ("top_degree", "coefficients", "low_degree", "tail_bound", "dirty_below")

    def __init__(self, top_degree, coefficients, tail_bound=mpf(0), dirty_below=None):
        self.top_degree = int(top_degree)
        self.coefficients = tuple(coefficients)
        self.low_degree = self.top_degree - len(self.coefficients) + 1
        self.tail_bound = mpf(tail_bound)
        if dirty_below is None:
            dirty_below = _CLEAN_EVERYWHERE if self.tail_bound == 0 else self.low_degree
        self.dirty_below = int(dirty_below)

    def coefficient(self, degree):
        if degree < self.dirty_below:
            raise TruncationError(f"coefficient at degree {degree} is below the clean range")
        if degree > self.top_degree or degree < self.low_degree:
            return mpf(0)
        return self.coefficients[self.top_degree - degree]

    def _stored_l1(self):
        return sum(abs(a) for a in self.coefficients)

    def __add__(self, other):
        top = max(self.top_degree, other.top_degree)
        low = min(self.low_degree, other.low_degree)
        dirty = max(self.dirty_below, other.dirty_below)
        low = max(low, dirty)
        coeffs = [self.coefficient(d) + other.coefficient(d)
                  for d in range(top, low - 1, -1)]
        return LaurentSeries(top, coeffs,
                             tail_bound=self.tail_bound + other.tail_bound,
                             dirty_below=dirty)

    def mul(self, other, floor=None):
        """Product truncated at degree ``floor`` (defaults to the deeper low)."""
        if floor is None:
            floor = max(self.low_degree, other.low_degree)
        top = self.top_degree + other.top_degree
        size = top - floor + 1
        out = [mpf(0)] * size
        discarded = mpf(0)
        for i, a in enumerate(self.coefficients):
            da = self.top_degree - i
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                d = da + (other.top_degree - j)
                prod = a * b
                if d >= floor:
                    out[top - d] += prod
                else:
                    discarded += abs(prod)
        tail = (self.tail_bound * (other._stored_l1() + other.tail_bound)
                + other.tail_bound * self._stored_l1() + discarded)
        dirty = max(self.dirty_below + other.top_degree,
                    other.dirty_below + self.top_degree, _CLEAN_EVERYWHERE)
        return LaurentSeries(top, out, tail_bound=tail, dirty_below=dirty)

    def __mul__(self, other):
        return self.mul(other)

    def pow_int(self, n, floor=None):
        if n < 0:
            raise DomainError("only nonnegative integer powers are supported")
        if floor is None:
            floor = self.low_degree
        result = LaurentSeries(0, [mpf(1)] + [mpf(0)] * max(0, -floor), tail_bound=mpf(0))
        for _ in range(n):
            result = result.mul(self, floor=floor)
        return result

    def polynomial_part(self):
        """Coefficients of degrees 0..top, ascending."""
        if self.dirty_below > 0:
            raise TruncationError(
                "truncation too shallow: pollution reached the polynomial part"
            )
        if self.low_degree > 0 and self.tail_bound > 0:
            raise TruncationError(
                "nonzero coefficients below the stored range were discarded"
            )
        return tuple(self.coefficient(d) for d in range(0, self.top_degree + 1))


def phi_laurent(c, depth, bits=None) -> LaurentSeries:
    """Laurent series of phi(w) at infinity: c w + (1-c^2) + sum gamma_n w^-n.

    gamma_n = c (1-c^2) (-c)^{n-1}; the coefficient of w is the capacity.
    """
    c = _cap_of(c)
    bits = default_bits() if bits is None else bits
    with workprec(bits):
        coeffs = [c, 1 - c * c]
        g = c * (1 - c * c)
        for k in range(1, depth + 1):
            coeffs.append(g)
            g = g * (-c)
        tail = abs(g) / (1 - abs(c)) if abs(c) < 1 else mp.inf
        return LaurentSeries(1, coeffs, tail_bound=tail)


def inverse_map_laurent(c, depth, bits=None) -> LaurentSeries:
    """Laurent series of Phi(z) at infinity: z/c + (c^2-1)/c + sum b_{-m} z^{-m}.

    Coefficients follow by matching powers of z in the defining quadratic
    c w^2 + (1-z) w - z c = 0:
        b_{-1}   = -b_0 (c b_0 + 1),
        b_{d-1}  = -((2 c b_0 + 1) b_d + c * sum_{i,j<=-1, i+j=d} b_i b_j).
    The recurrence is exact at working precision; tail_bound extrapolates
    the measured geometric decay of the last stored coefficients.
    """
    c = _cap_of(c)
    bits = default_bits() if bits is None else bits
    with workprec(bits):
        b = {1: 1 / c, 0: (c * c - 1) / c}
        b[-1] = -b[0] * (c * b[0] + 1)
        for d in range(-1, -depth, -1):
            conv = mpf(0)
            for i in range(d + 1, 0):
                conv += b[i] * b[d - i]
            b[d - 1] = -((2 * c * b[0] + 1) * b[d] + c * conv)
        coeffs = [b[k] for k in range(1, -depth - 1, -1)]
        last, prev = abs(b[-depth]), abs(b[-depth + 1]) if depth >= 2 else abs(b[-1])
        ratio = last / prev if prev > 0 else mpf(0)
        if ratio >= 1:
            ratio = mpf("0.99")
        tail = last * ratio / (1 - ratio)
        return LaurentSeries(1, coeffs, tail_bound=tail)


def faber_poly(params: SystemParams, n, truncation=None, bits=None):
    """Faber polynomial of degree n: the polynomial part of Phi(z)^n.

    Returned as ascending real coefficients; the leading one is c^{-n}.
    ``truncation`` counts the retained tail terms of the Phi series and
    must allow at least n + 10 of them.
    """
    bits = params.bits if bits is None else bits
    n = int(n)
    if n < 0:
        raise DomainError("Faber degree must be nonnegative")
    if truncation is None:
        truncation = n + 16
    if truncation < n + 10:
        raise TruncationError(f"truncation {truncation} < n + 10 tail terms")
    with workprec(bits):
        if n == 0:
            return (mpf(1),)
        base = inverse_map_laurent(params.c, truncation, bits=bits)
        power = base.pow_int(n, floor=-truncation)
        return power.polynomial_part()


# ---------------------------------------------------------------------------
# orthogonal polynomial leading coefficients


@dataclass(frozen=True)
class OrthoPolyTable:
    """Leading coefficients k_n of the arc-orthonormal polynomials.

    Realized through the Cholesky factor of the monomial Gram matrix:
    k_n = 1 / L[n][n], the reciprocal distance from z^n to lower degrees.
    """

    n_max: int
    k_values: tuple
    cholesky_diag: tuple
    cholesky_factor: tuple
    bits: int

    def poly_coeffs(self, n):
        """Coefficients of the orthonormal p_n (ascending, degree <= n)."""
        L = self.cholesky_factor
        x = [mpf(0)] * (n + 1)
        x[n] = 1 / L[n][n]
        for i in range(n - 1, -1, -1):
            s = mpf(0)
            for k in range(i + 1, n + 1):
                s -= L[k][i] * x[k]
            x[i] = s / L[i][i]
        return tuple(x)

    def thm10_checks(self, params: SystemParams):
        """Two-sided bracket c/(2y) c^{2n} <= k_n^{-2} <= 4 (1+2y)^2 c^{2n}."""
        c, y = params.c, params.y
        with workprec(self.bits):
            out = []
            for n, k in enumerate(self.k_values):
                val = 1 / (k * k)
                lo = c / (2 * y) * c ** (2 * n)
                hi = 4 * (1 + 2 * y) ** 2 * c ** (2 * n)
                out.append(bound_check(f"kn_bracket_lower[n={n}]", lo, val))
                out.append(bound_check(f"kn_bracket_upper[n={n}]", val, hi))
            return out


def leading_coeffs(params: SystemParams, n_max, bits=None) -> OrthoPolyTable:
    """k_0..k_{n_max} from the Cholesky factor of the contiguous Gram matrix."""
    bits = params.bits if bits is None else bits
    n_max = int(n_max)
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    G = build_gram(params, SupportSet(tuple(range(n_max + 1))), bits=bits)
    L = hp_cholesky(G.as_lists(), bits=bits)
    with workprec(bits):
        diag = tuple(L[i][i] for i in range(n_max + 1))
        ks = tuple(1 / d for d in diag)
    return OrthoPolyTable(n_max=n_max, k_values=ks, cholesky_diag=diag,
                          cholesky_factor=tuple(tuple(row) for row in L), bits=bits)


# ---------------------------------------------------------------------------
# sampled bound suite (numpy; float64 with rounding cushions)


def _np_phi(c, w):
    return w * (c * w + 1) / (w + c)


def _np_phi_prime(c, w):
    return c * (w * w + 2 * c * w + 1) / ((w + c) ** 2)


def _np_poly_eval(coeff_rows, z):
    """Rows of coefficients (ascending) evaluated at points z: (rows, len(z))."""
    powers = z[None, :] ** np.arange(coeff_rows.shape[1])[:, None]
    return coeff_rows @ powers


def faber_arc_max(params: SystemParams, coeffs, arc_samples=10 ** 4):
    """Sampled max of |Faber_n| on the arc plus a float64 rounding cushion.

    Coefficients can reach c^{-n}, so the cushion tracks the l1 mass of
    the coefficient vector; it stays orders of magnitude below the
    theorem's slack for every tested configuration.
    """
    y = float(params.y)
    theta = np.linspace(-np.pi * y, np.pi * y, arc_samples)
    z = np.exp(1j * theta)
    row = np.array([[float(a) for a in coeffs]], dtype=float)
    vals = np.abs(_np_poly_eval(row.astype(complex), z))[0]
    cushion = 8 * row.shape[1] * np.abs(row).sum() * np.finfo(float).eps
    return mpf(float(vals.max())) + mpf(float(cushion))


@dataclass(frozen=True)
class BoundSuiteResult:
    checks: tuple
    errors: tuple
    seed: int
    samples: int
    polys: int


def _unit_arc_polys(params, degree, count, rng):
    """Random degree-n polynomials with unit arc norm (coefficients sampled
    on the complex sphere, then normalized through the Gram quadratic form)."""
    y = float(params.y)
    m = np.arange(degree + 1)
    diff = np.pi * y * (m[None, :] - m[:, None])
    G = np.ones_like(diff)
    nz = diff != 0
    G[nz] = np.sin(diff[nz]) / diff[nz]
    C = rng.standard_normal((count, degree + 1)) + 1j * rng.standard_normal((count, degree + 1))
    norms = np.sqrt(np.einsum("pi,ij,pj->p", C.conj(), G, C).real)
    return C / norms[:, None]


def bound_suite(params: SystemParams, n_max, samples=200, seed=0, polys=100,
                arc_samples=10 ** 4, bits=None) -> BoundSuiteResult:
    """Certify the explicit arc inequalities on sampled points.

    Emits, per degree n <= n_max:
      (a) the two-sided bracket on k_n^{-2},
      (b) sampled max of |Faber_n| on the arc against 2(1+2y),
      (c) exterior growth of random unit-norm polynomials against the
          kernel-based envelope at points with |Phi(z)| >= 1.1,
      (d) the flat bound inside the |Phi(z)| = 2 region,
      (f) the measured ratio k_n^{-2} / ((c/y) c^{2n}) (recorded, not asserted),
    and once overall:
      (e) the elementary envelope for |Phi'(z)|.
    Individual section failures are captured, never aborting the suite.
    """
    bits = params.bits if bits is None else bits
    n_max = int(n_max)
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if samples < 100:
        raise DomainError("at least 100 sample points required")
    checks = []
    errors = []
    rng = np.random.default_rng(seed)

    c = float(params.c)
    y = float(params.y)
    L = float(params.arc_length)

    try:
        table = leading_coeffs(params, n_max, bits=bits)
        checks.extend(table.thm10_checks(params))
        with workprec(bits):
            for n, k in enumerate(table.k_values):
                ratio = (1 / (k * k)) / ((params.c / params.y) * params.c ** (2 * n))
                checks.append(bound_check(f"kn_asymptotic_ratio[n={n}]", 0, ratio))
    except Exception as exc:  # noqa: BLE001 - per-check isolation
        errors.append(("kn_bracket", repr(exc)))

    try:
        with workprec(bits):
            rot_bound = 2 * (1 + 2 * params.y)
        for n in range(n_max + 1):
            coeffs = faber_poly(params, n, bits=bits)
            peak = faber_arc_max(params, coeffs, arc_samples=arc_samples)
            checks.append(bound_check(f"faber_arc_max[n={n}]", peak, rot_bound))
    except Exception as exc:  # noqa: BLE001
        errors.append(("faber_arc_max", repr(exc)))

    try:
        r_ext = rng.uniform(1.1, 5.0, samples)
        t_ext = rng.uniform(-np.pi, np.pi, samples)
        w_ext = r_ext * np.exp(1j * t_ext)
        z_ext = _np_phi(c, w_ext)
        dphi_ext = np.abs(1.0 / _np_phi_prime(c, w_ext))

        r_ban = rng.uniform(1.02, 2.0, samples)
        t_ban = rng.uniform(-np.pi, np.pi, samples)
        w_ban = r_ban * np.exp(1j * t_ban)
        z_ban = _np_phi(c, w_ban)
        dphi_ban = np.abs(1.0 / _np_phi_prime(c, w_ban))

        for n in range(1, n_max + 1):
            P = _unit_arc_polys(params, n, polys, rng)
            vals_ext = np.abs(_np_poly_eval(P, z_ext)) ** 2
            rhs_ext = (L / np.pi) * dphi_ext * r_ext ** 2 / (r_ext ** 2 - 1) \
                * r_ext ** (2 * n)
            ratio_ext = (vals_ext / rhs_ext[None, :]).max()
            checks.append(bound_check(f"growth_exterior[n={n}]", mpf(float(ratio_ext)), 1))

            vals_ban = np.abs(_np_poly_eval(P, z_ban)) ** 2
            rhs_ban = (4 * L / np.pi) / (c * np.sqrt(1 - c * c)) * 4.0 ** n
            ratio_ban = (vals_ban / rhs_ban).max()
            checks.append(bound_check(f"growth_inside_gamma2[n={n}]", mpf(float(ratio_ban)), 1))

        env = 1.0 / (c * np.sqrt(1 - c * c))
        r_all = np.concatenate([r_ext, r_ban])
        dphi_all = np.concatenate([dphi_ext, dphi_ban])
        rhs_env = env * (r_all + c) ** 2 / (r_all ** 2 - 1)
        ratio_env = (dphi_all / rhs_env).max()
        checks.append(bound_check("phi_prime_envelope", mpf(float(ratio_env)), 1))
    except Exception as exc:  # noqa: BLE001
        errors.append(("sampled_growth", repr(exc)))

    return BoundSuiteResult(checks=tuple(checks), errors=tuple(errors),
                            seed=seed, samples=samples, polys=polys)
