"""Normalized partial Fourier system on the band [-pi*y, pi*y].

Atoms are a_j(theta) = e^{i j theta} / sqrt(2 pi y). Their pairwise inner
products have the closed form sinc(pi y (j2 - j1)), so every Gram matrix,
measurement norm, and residual in this package is computed exactly in
coefficient space; no function-space discretization is ever performed.
Quadrature of the defining integral survives only as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf, workprec

from .errors import DomainError, PrecisionError, SupportError
from .hp import default_bits


def _to_mpf(value, bits):
    """Parse a real parameter at the given precision (str keeps all digits)."""
    with workprec(bits):
        if isinstance(value, Fraction):
            return mpf(value.numerator) / mpf(value.denominator)
        if isinstance(value, str) and "/" in value:
            num, den = value.split("/", 1)
            return mpf(num.strip()) / mpf(den.strip())
        return mpf(value)


_MPF_ZERO = mpf(0)._mpf_


def keep_real(value):
    """Coerce to mpf without re-rounding values that already are mpf."""
    return value if isinstance(value, mpf) else mpf(value)


def keep_complex(value):
    """Coerce to mpc without re-rounding mpf/mpc values at ambient precision."""
    if isinstance(value, mpc):
        return value
    if isinstance(value, mpf):
        return mp.make_mpc((value._mpf_, _MPF_ZERO))
    return mpc(value)


def capacity(y, bits=None) -> mpf:
    """Capacity (transfinite diameter) of the arc: sin(pi*y/2).

    Equals the leading Laurent coefficient of the exterior conformal map.
    """
    bits = default_bits() if bits is None else bits
    yv = _to_mpf(y, bits)
    if not 0 < yv < mpf("0.5"):
        raise DomainError(f"band fraction y must lie in (0, 1/2), got {yv}")
    with workprec(bits):
        return mp.sin(mp.pi * yv / 2)


@dataclass(frozen=True)
class SystemParams:
    """Normalized problem: band fraction y in (0, 1/2), srf = 1/y,
    capacity c = sin(pi*y/2), arc length L = 2*pi*y."""

    y: mpf
    srf: mpf
    c: mpf
    arc_length: mpf
    bits: int

    def __post_init__(self):
        if not 0 < self.y < mpf("0.5"):
            raise DomainError(f"band fraction y must lie in (0, 1/2), got {self.y}")

    @classmethod
    def from_y(cls, y, bits=None) -> "SystemParams":
        bits = default_bits() if bits is None else bits
        yv = _to_mpf(y, bits)
        if not 0 < yv < mpf("0.5"):
            raise DomainError(f"band fraction y must lie in (0, 1/2), got {yv}")
        with workprec(bits):
            return cls(y=yv, srf=1 / yv, c=mp.sin(mp.pi * yv / 2),
                       arc_length=2 * mp.pi * yv, bits=bits)

    @classmethod
    def from_srf(cls, srf, bits=None) -> "SystemParams":
        bits = default_bits() if bits is None else bits
        sv = _to_mpf(srf, bits)
        if not sv > 2:
            raise DomainError(f"srf must exceed 2 (so that y = 1/srf < 1/2), got {sv}")
        with workprec(bits):
            return cls.from_y(1 / sv, bits=bits)

    def at_bits(self, bits) -> "SystemParams":
        """Same dyadic y, derived quantities recomputed at a new precision."""
        if bits == self.bits:
            return self
        with workprec(bits):
            return SystemParams(y=self.y, srf=1 / self.y, c=mp.sin(mp.pi * self.y / 2),
                                arc_length=2 * mp.pi * self.y, bits=bits)


@dataclass(frozen=True)
class SupportSet:
    """Strictly increasing integer atom offsets tau_0 < ... < tau_n."""

    offsets: tuple

    def __post_init__(self):
        offs = tuple(int(t) for t in self.offsets)
        if not offs:
            raise SupportError("support set must be nonempty")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise SupportError("offsets must be strictly increasing")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def of(cls, *offsets) -> "SupportSet":
        return cls(tuple(offsets))

    @classmethod
    def from_text(cls, text) -> "SupportSet":
        return cls(tuple(int(p) for p in text.split(",") if p.strip() != ""))

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def __getitem__(self, i):
        return self.offsets[i]

    def __contains__(self, t):
        return t in self.offsets

    @property
    def span(self) -> int:
        return self.offsets[-1] - self.offsets[0]

    def canonical(self) -> "SupportSet":
        """Translate so that tau_0 = 0 (the spectrum only sees differences)."""
        t0 = self.offsets[0]
        return SupportSet(tuple(t - t0 for t in self.offsets))

    def reflected(self) -> "SupportSet":
        return SupportSet(tuple(sorted(-t for t in self.offsets)))

    def translated(self, shift) -> "SupportSet":
        return SupportSet(tuple(t + shift for t in self.offsets))

    def index_of(self, t) -> int:
        return self.offsets.index(t)


def gram_entry(params: SystemParams, m, bits=None) -> mpf:
    """Inner product of two atoms at offset difference m: sinc(pi*y*m)."""
    bits = params.bits if bits is None else bits
    m = int(m)
    if m == 0:
        return mpf(1)
    with workprec(bits):
        x = mp.pi * params.y * m
        return mp.sin(x) / x


@dataclass(frozen=True)
class GramMatrix:
    """Gram matrix of the atoms over a support; symmetric, unit diagonal,
    positive definite, and Toeplitz for contiguous supports."""

    support: SupportSet
    entries: tuple
    bits: int

    @property
    def size(self) -> int:
        return len(self.support)

    def as_lists(self):
        return [list(row) for row in self.entries]


def build_gram(params: SystemParams, support, bits=None) -> GramMatrix:
    """Gram matrix with entry (i, j) = gram_entry(tau_j - tau_i)."""
    bits = params.bits if bits is None else bits
    T = support if isinstance(support, SupportSet) else SupportSet(tuple(support))
    offs = T.offsets
    diffs = {}
    for i, ti in enumerate(offs):
        for j, tj in enumerate(offs):
            d = abs(tj - ti)
            if d not in diffs:
                diffs[d] = gram_entry(params, d, bits=bits)
    rows = tuple(
        tuple(diffs[abs(tj - ti)] for tj in offs) for ti in offs
    )
    return GramMatrix(support=T, entries=rows, bits=bits)


def gram_quadform(entries, v, bits=None) -> mpf:
    """Real quadratic form v* G v for a real symmetric G and complex v."""
    bits = default_bits() if bits is None else bits
    n = len(v)
    with workprec(bits):
        total = mpf(0)
        for i in range(n):
            row = entries[i]
            acc = mpc(0)
            for j in range(n):
                acc += row[j] * v[j]
            total += (mp.conj(v[i]) * acc).real
        return total


@dataclass(frozen=True)
class CoefficientVector:
    """Complex coefficients attached to the offsets of a support set."""

    support: SupportSet
    values: tuple

    def __post_init__(self):
        vals = tuple(keep_complex(v) for v in self.values)
        if len(vals) != len(self.support):
            raise SupportError("one value per support offset required")
        object.__setattr__(self, "values", vals)

    def sparsity(self) -> int:
        """Number of nonzero values (l0 norm)."""
        return sum(1 for v in self.values if v != 0)

    def l2_norm(self, bits=None) -> mpf:
        bits = default_bits() if bits is None else bits
        with workprec(bits):
            return mp.sqrt(sum((v * mp.conj(v)).real for v in self.values))

    def embed(self, window: SupportSet):
        """Zero-padded value tuple over a containing window."""
        out = [mpc(0)] * len(window)
        for t, v in zip(self.support, self.values):
            if t not in window:
                raise SupportError(f"offset {t} outside window {window.offsets}")
            out[window.index_of(t)] = v
        return tuple(out)


@dataclass(frozen=True)
class MeasurementVector:
    """A function represented over a working window W: complex coefficients
    on the atoms of W plus the norm rho of the orthogonal remainder."""

    window: SupportSet
    coeffs: tuple
    rho: mpf

    def __post_init__(self):
        coeffs = tuple(keep_complex(v) for v in self.coeffs)
        if len(coeffs) != len(self.window):
            raise SupportError("one coefficient per window offset required")
        rho = keep_real(self.rho)
        if rho < 0:
            raise DomainError("rho must be nonnegative")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rho", rho)


def synthesize(params: SystemParams, x: CoefficientVector, window) -> MeasurementVector:
    """Noiseless measurement f = A x embedded in the window (rho = 0)."""
    W = window if isinstance(window, SupportSet) else SupportSet(tuple(window))
    return MeasurementVector(window=W, coeffs=x.embed(W), rho=mpf(0))


def measurement_norm(params: SystemParams, f: MeasurementVector, bits=None) -> mpf:
    """sqrt(coeffs* G_W coeffs + rho^2).

    Raises PrecisionError if the quadratic form evaluates negative beyond
    the rounding tolerance of the requested precision.
    """
    bits = params.bits if bits is None else bits
    G = build_gram(params, f.window, bits=bits)
    with workprec(bits):
        q = gram_quadform(G.entries, f.coeffs, bits=bits)
        scale = sum((v * mp.conj(v)).real for v in f.coeffs) + mpf(1)
        if q < 0:
            if abs(q) > mpf(2) ** (-bits // 2) * scale:
                raise PrecisionError(
                    f"quadratic form is negative ({q}) beyond rounding at {bits} bits"
                )
            q = mpf(0)
        return mp.sqrt(q + f.rho * f.rho)
