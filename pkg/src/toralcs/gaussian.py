"""Finite-dimensional oscillatory Gaussian integrals.

``fresnel`` evaluates the closed form of the normalized oscillatory Gaussian
factor, ``fresnel_quadrature_oracle`` recomputes it numerically from damped
integrals, and ``kron_factorize`` checks how signature and determinant
behave for a tensor product ``K (x) A``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import intmat
from .errors import GaugeDependence, NonConvergent, SingularForm
from .lattice import EvenLattice

SYMMETRY_TOL = 1e-12
SINGULAR_TOL = 1e-12
DET_TOL = 1e-9


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction, np.integer)) and not isinstance(x, bool)


@dataclass(frozen=True)
class SymForm:
    """Real symmetric matrix ``A``; keeps an exact copy when the entries are rational."""

    matrix: np.ndarray = field(repr=False)
    dim: int
    exact: tuple[tuple[Fraction, ...], ...] | None = field(default=None, repr=False)

    @classmethod
    def of(cls, m) -> SymForm:
        if isinstance(m, SymForm):
            return m
        rows = [list(r) for r in (m.tolist() if isinstance(m, np.ndarray) else m)]
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("form must be a square matrix")
        exact = None
        if all(_is_rational(x) for r in rows for x in r):
            exact = tuple(tuple(Fraction(x) for x in r) for r in rows)
        mat = np.array([[float(x) for x in r] for r in rows], dtype=float).reshape(dim, dim)
        scale = max(1.0, float(np.abs(mat).max())) if dim else 1.0
        if exact is not None:
            if not intmat.is_symmetric(exact):
                raise ValueError("form is not symmetric")
        elif np.abs(mat - mat.T).max(initial=0.0) > SYMMETRY_TOL * scale:
            raise ValueError("form is not symmetric within tolerance")
        return cls(mat, dim, exact)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def direct_sum(self, other: SymForm) -> SymForm:
        if self.is_exact and other.is_exact:
            return SymForm.of(intmat.block_diag(self.exact, other.exact))
        out = np.zeros((self.dim + other.dim,) * 2)
        out[:self.dim, :self.dim] = self.matrix
        out[self.dim:, self.dim:] = other.matrix
        return SymForm.of(out)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix) if self.dim else np.zeros(0)


def signature_of(a: SymForm) -> int:
    """Exact congruence signature for rational forms, eigenvalue signs otherwise."""
    if a.is_exact:
        inert = intmat.inertia(a.exact)
        if inert.zero:
            raise SingularForm("form is singular")
        return inert.signature
    lam = a.eigenvalues()
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    if np.any(np.abs(lam) <= SINGULAR_TOL * scale):
        raise SingularForm(f"eigenvalue {lam[np.argmin(np.abs(lam))]:.3e} is numerically zero")
    return int(np.sum(lam > 0) - np.sum(lam < 0))


def log_abs_det(a: SymForm) -> float:
    if a.is_exact:
        num = intmat.determinant([[x.numerator * (_lcm_den(a) // x.denominator) for x in r]
                                  for r in a.exact])
        if num == 0:
            raise SingularForm("form is singular")
        return math.log(abs(num)) - a.dim * math.log(_lcm_den(a))
    sign, logdet = np.linalg.slogdet(a.matrix) if a.dim else (1.0, 0.0)
    scale = max(1.0, float(np.abs(a.matrix).max(initial=0.0)))
    if sign == 0 or logdet < math.log(SINGULAR_TOL) + a.dim * math.log(scale):
        raise SingularForm("determinant below tolerance")
    return float(logdet)


def _lcm_den(a: SymForm) -> int:
    den = 1
    for r in a.exact:
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return den


@dataclass(frozen=True)
class FresnelFactor:
    """``exp(pi i sgn / 4) (2 pi)^(dim/2) exp(-log|det| / 2)`` with exact phase data."""

    signature: int
    dim: int
    log_abs_det: float

    @property
    def phase_eighths(self) -> int:
        return self.signature % 8

    @property
    def value(self) -> complex:
        mag = math.exp(0.5 * self.dim * math.log(2 * math.pi) - 0.5 * self.log_abs_det)
        return mag * cmath.exp(0.25j * math.pi * self.signature)

    def __mul__(self, other: FresnelFactor) -> FresnelFactor:
        return FresnelFactor(self.signature + other.signature, self.dim + other.dim,
                             self.log_abs_det + other.log_abs_det)


def fresnel_factor(a) -> FresnelFactor:
    a = SymForm.of(a)
    return FresnelFactor(signature_of(a), a.dim, log_abs_det(a))


def fresnel(a) -> complex:
    """Closed form of ``int exp(i/2 <An, n>) dn`` over R^dim."""
    return fresnel_factor(a).value


# --- quadrature oracle ---------------------------------------------------

_GL_NODES = 24
# phase advance allowed per Gauss-Legendre panel, in radians
_PANEL_PHASE = 6.0
# truncate where the damping envelope exp(-eps x^2) has fallen below e^-40
_ENVELOPE_EXPONENT = 40.0


@lru_cache(maxsize=4)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _damped_line_integral(lam: float, eps: float, cutoff: float | None) -> complex:
    """``int_R exp(i lam x^2 / 2 - eps x^2) dx`` by composite Gauss-Legendre."""
    c = cutoff if cutoff is not None else math.sqrt(_ENVELOPE_EXPONENT / eps)
    # panel breakpoints at equal increments of the phase |lam| x^2 / 2
    total_phase = 0.5 * abs(lam) * c * c
    panels = max(8, int(math.ceil(total_phase / _PANEL_PHASE)))
    t = np.linspace(0.0, 1.0, panels + 1)
    edges = c * np.sqrt(t)
    # the sqrt spacing is too coarse near 0 for the envelope; refine uniformly
    edges = np.union1d(edges, np.linspace(0.0, c, 65))
    x0, w0 = _gauss_legendre(_GL_NODES)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    x = (lo + hi) * 0.5 + half * x0[None, :]
    w = half * w0[None, :]
    vals = np.exp((0.5j * lam - eps) * x * x)
    return complex(2.0 * np.sum(w * vals))


def _richardson(values: list[complex], hs: list[float]) -> list[complex]:
    """Neville-Aitken extrapolation to h = 0; returns the diagonal estimates."""
    table = list(values)
    diag = [table[0]]
    n = len(values)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            table[i] = table[i] + (table[i] - table[i - 1]) * hs[i] / (hs[i - k] - hs[i])
        diag.append(table[k])
    return diag


def fresnel_quadrature_oracle(a, damping: float = 0.1, cutoff: float | None = None,
                              levels: int = 8, ratio: float = 0.5,
                              rtol: float = 1e-6) -> complex:
    """Numerical Fresnel integral from damped Gaussian integrals.

    The integrand ``exp(i/2 x^T A x - eps |x|^2)`` is integrated over
    ``[-cutoff, cutoff]^dim`` for ``eps = damping * ratio**k``,
    ``k < levels``, and the results are extrapolated to ``eps -> 0``.  The
    tensor-product rule is laid out along the principal axes of ``A``, where
    it factors into one-dimensional composite Gauss-Legendre rules.
    """
    if damping <= 0:
        raise ValueError("damping must be positive")
    a = SymForm.of(a)
    lam, _ = np.linalg.eigh(a.matrix) if a.dim else (np.zeros(0), None)
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    if np.any(np.abs(lam) <= SINGULAR_TOL * scale):
        raise SingularForm("form is singular")
    hs = [damping * ratio ** k for k in range(levels)]
    values = []
    for eps in hs:
        v = 1.0 + 0j
        for l in lam:
            v *= _damped_line_integral(float(l), eps, cutoff)
        values.append(v)
    if levels == 1:
        return values[0]
    diag = _richardson(values, hs)
    best = diag[-1]
    correction = abs(diag[-1] - diag[-2])
    if not math.isfinite(correction) or correction > rtol * max(1.0, abs(best)):
        raise NonConvergent(f"damping extrapolation unstable: last correction {correction:.3e}")
    return best


# --- linear quotient model ----------------------------------------------

@dataclass(frozen=True)
class QuotientModel:
    """Gaussian phase on ``V = H + E + N`` that only sees the ``N`` sector."""

    q0: complex
    lattice_volume: float
    form: SymForm

    def __post_init__(self):
        if not self.lattice_volume > 0:
            raise ValueError("lattice volume must be positive")

    @classmethod
    def from_decomposition(cls, quadratic, harmonic_dim: int, gauge_dim: int,
                           q0: complex = 0.0, lattice_volume: float = 1.0,
                           tol: float = 1e-12) -> QuotientModel:
        """Build from a full quadratic form on ``V`` ordered as ``(H, E, N)``.

        Raises :class:`GaugeDependence` if the form couples to the harmonic or
        gauge directions, since the quotient integral is then not defined.
        """
        q = np.asarray(quadratic, dtype=float)
        k = harmonic_dim + gauge_dim
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] < k:
            raise ValueError("quadratic form has the wrong shape")
        if q.shape[0] and (np.abs(q[:k, :]).max(initial=0.0) > tol
                           or np.abs(q[:, :k]).max(initial=0.0) > tol):
            raise GaugeDependence("quadratic phase depends on H or E directions")
        return cls(q0, lattice_volume, SymForm.of(q[k:, k:]))


def quotient_gaussian(m: QuotientModel) -> complex:
    return cmath.exp(1j * m.q0) * m.lattice_volume * fresnel(m.form)


# --- tensor products ----------------------------------------------------

@dataclass(frozen=True)
class KronResult:
    matrix: np.ndarray = field(repr=False)
    signature: int
    log_abs_det: float


def kron_factorize(k: EvenLattice, a) -> KronResult:
    a = SymForm.of(a)
    n, m = k.rank, a.dim
    sgn_a = signature_of(a)
    lad_a = log_abs_det(a)
    if a.is_exact:
        prod = SymForm.of(intmat.kron(k.gram, a.exact))
    else:
        prod = SymForm.of(np.kron(np.array(k.gram, dtype=float), a.matrix))
    sig = signature_of(prod)
    lad = log_abs_det(prod)
    if sig != k.signature * sgn_a:
        raise ArithmeticError(f"signature {sig} != {k.signature} * {sgn_a}")
    expected = m * math.log(k.abs_det) + n * lad_a
    if abs(lad - expected) > DET_TOL * max(1.0, abs(expected)):
        raise ArithmeticError(f"log|det| {lad} != {expected}")
    return KronResult(prod.matrix, sig, lad)
