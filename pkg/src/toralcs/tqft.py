"""Closed partition functions, boundary Hilbert spaces, cylinder and gluing.

The closed invariant of a surgery presentation with linking matrix ``L``
(``m`` components) is

    Z = |det K|^(-1/2) |det K|^(-m/2) e(sigma(K)/8)^(-sigma(L))
        * sum_{a in G_K^m} e( sum_i L_ii q(a_i) + sum_{i<j} L_ij b(a_i, a_j) )

with ``e(x) = exp(2 pi i x)``.  The three prefactors are not taken as
given: :class:`SurgeryNormalization` solves for them from the values on
S^3, S^2 x S^1 and invariance under +-1 stabilization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import intmat
from .errors import (DecompositionFailure, DimensionMismatch, InvalidPresentation,
                     NotLagrangian, RelationViolation, SizeLimit, UnsupportedFamily)
from .lattice import (DiscGroup, EvenLattice, coset_representatives, discriminant_group,
                      gauss_sum, validate_even_lattice)
from .manifolds import (SURGERY, Presentation, homology, m_exponent_bordism, to_surgery)
from .phases import PhaseSum, RationalPhase, phase_histogram
from .values import PartitionValue, det_power

DEFAULT_BUDGET = 10 ** 7
TOL = 1e-9


# --- normalization ------------------------------------------------------

@dataclass(frozen=True)
class SurgeryNormalization:
    """Prefactors of the surgery Gauss sum, fixed by three closed values.

    ``global_exponent`` and ``per_component_exponent`` are powers of |det K|;
    ``anomaly`` is the phase removed per unit of linking-matrix signature.
    """

    global_exponent: Fraction
    per_component_exponent: Fraction
    anomaly: RationalPhase
    residual: float = 0.0

    @classmethod
    def derive(cls, k: EvenLattice, tol: float = 1e-12) -> SurgeryNormalization:
        g = discriminant_group(k)
        d = k.abs_det
        gamma = gauss_sum(g).evaluate()
        # Z(S^3) = |det K|^(-1/2) with the empty sum equal to 1
        glob = det_power(d, Fraction(-1, 2))
        # Z(S^2 x S^1) = glob * c * |G| = 1
        c = 1.0 / (glob * g.order)
        # invariance under the +1 unknot: glob * c * alpha^(-1) * gamma = glob
        alpha = c * gamma
        residuals = [
            abs(c - det_power(d, Fraction(-1, 2))) / c,
            abs(alpha - RationalPhase(k.signature, 8).value()),
            # the -1 unknot must then be consistent as well
            abs(glob * c * alpha * gamma.conjugate() - glob) / glob,
        ]
        res = max(residuals)
        if res > tol:
            raise RelationViolation(f"surgery normalization not pinned: residual {res:.3e}")
        return cls(Fraction(-1, 2), Fraction(-1, 2), RationalPhase(k.signature, 8), res)


@lru_cache(maxsize=256)
def _normalization(gram: tuple) -> SurgeryNormalization:
    return SurgeryNormalization.derive(validate_even_lattice(gram))


# --- Gauss sums over G^m -------------------------------------------------

def _blocks(linking: list[list[int]]) -> list[list[int]]:
    """Connected components of the graph with an edge wherever ``L_ij != 0``."""
    m = len(linking)
    seen, out = set(), []
    for s in range(m):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(m):
                if j not in seen and linking[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        out.append(sorted(comp))
    return out


def _block_gauss_sum(lmat: list[list[int]], g: DiscGroup, b_table) -> PhaseSum:
    """Exact histogram of the quadratic phase over ``G^k`` for a connected block."""
    mod = g.modulus
    k = len(lmat)
    qt = g.q_table
    lm = [[x % mod for x in row] for row in lmat]
    if k == 1:
        return phase_histogram(lm[0][0] * qt % mod, mod)
    n = g.order
    counts = np.zeros(mod, dtype=np.int64)
    rest = k - 1
    # static part over components 1..k-1, independent of a_0
    static = np.zeros((n,) * rest, dtype=np.int64)
    for i in range(1, k):
        shape = [1] * rest
        shape[i - 1] = n
        static = (static + (lm[i][i] * qt % mod).reshape(shape)) % mod
        for j in range(i + 1, k):
            if lm[i][j]:
                shape2 = [1] * rest
                shape2[i - 1] = n
                shape2[j - 1] = n
                # b_table[a_i, a_j] placed on axes (i-1, j-1)
                static = (static + (lm[i][j] * b_table % mod).reshape(shape2)) % mod
    # outermost component enumerated one coset at a time
    for a0 in range(n):
        part = static + lm[0][0] * int(qt[a0])
        for j in range(1, k):
            if lm[0][j]:
                shape = [1] * rest
                shape[j - 1] = n
                part = part + (lm[0][j] * b_table[a0] % mod).reshape(shape)
        counts += np.bincount((part % mod).ravel(), minlength=mod)
    return PhaseSum.from_histogram(counts, mod)


def surgery_gauss_sum(linking: Sequence[Sequence[int]], k: EvenLattice,
                      budget: int = DEFAULT_BUDGET) -> PhaseSum:
    """Exact ``sum_{a in G^m} e(Q_L(a))``, factored over disconnected blocks."""
    lm = [list(r) for r in linking]
    g = discriminant_group(k)
    blocks = _blocks(lm)
    worst = max((g.order ** len(b) for b in blocks), default=1)
    if worst > budget:
        raise SizeLimit(f"{g.order}^{max(len(b) for b in blocks)} = {worst} states "
                        f"exceed the enumeration budget {budget}")
    b_table = g.b_table() if any(len(b) > 1 for b in blocks) else None
    total = PhaseSum.one()
    for b in blocks:
        sub = [[lm[i][j] for j in b] for i in b]
        total = total * _block_gauss_sum(sub, g, b_table)
    return total


def z_surgery(p: Presentation, k: EvenLattice, budget: int = DEFAULT_BUDGET) -> PartitionValue:
    if p.kind != SURGERY:
        raise InvalidPresentation("z_surgery needs a surgery presentation")
    norm = _normalization(k.gram)
    lm = p.linking_list()
    m = len(lm)
    s = surgery_gauss_sum(lm, k, budget)
    sig_l = intmat.inertia(lm).signature if m else 0
    exact = s.shift(-sig_l * norm.anomaly)
    exponent = norm.global_exponent + m * norm.per_component_exponent
    amp = det_power(k.abs_det, exponent) * exact.evaluate()
    return PartitionValue(amp, homology(p).m_x, f"surgery Gauss sum, {m} components",
                          phase_sum=exact)


def z_standard(p: Presentation, k: EvenLattice, budget: int = DEFAULT_BUDGET) -> PartitionValue:
    if p.kind != "Standard":
        raise UnsupportedFamily("z_standard needs a standard-family presentation")
    d = k.abs_det
    fam = p.family
    if fam == "S3":
        e = Fraction(-1, 2)
        return PartitionValue(det_power(d, e), e, "S^3")
    if fam == "S2xS1":
        return PartitionValue(1.0, Fraction(0), "S^2 x S^1")
    if fam == "T3":
        return PartitionValue(float(d), Fraction(1), "T^3")
    if fam == "SigmaXS1":
        gg = p.params[0]
        return PartitionValue(det_power(d, gg), Fraction(gg), f"Sigma_{gg} x S^1")
    if fam == "Lens":
        z = z_surgery(to_surgery(p), k, budget)
        return PartitionValue(z.amplitude, z.det_k_exponent, f"L{p.params} via surgery",
                              phase_sum=z.phase_sum)
    if fam == "ConnectedSum":
        parts = [partition(x, k, budget) for x in p.params]
        s3 = det_power(d, Fraction(-1, 2))
        amp = complex(1.0)
        for z in parts:
            amp *= z.amplitude
        amp /= s3 ** (len(parts) - 1)
        exponent = sum((z.det_k_exponent for z in parts), Fraction(0)) \
            + Fraction(len(parts) - 1, 2)
        return PartitionValue(amp, exponent, p.describe())
    raise UnsupportedFamily(f"unsupported family {fam!r}")


def partition(p: Presentation, k: EvenLattice, budget: int = DEFAULT_BUDGET) -> PartitionValue:
    if p.kind == SURGERY:
        return z_surgery(p, k, budget)
    return z_standard(p, k, budget)


# --- decomposition over torsion classes --------------------------------

@dataclass
class DecompositionReport:
    """The total closed value split over the classes of Tor H^2(X; Lambda)."""

    classes: list[tuple[int, ...]]
    phases: list[complex]
    cs_angles: list[RationalPhase]
    weights: list[float]
    weight: float
    tor_order: int
    prefactor: float
    z_reassembled: complex
    z_surgery: complex
    residual: float
    max_phase_deviation: float
    quadratic_coefficient: int | None = None
    tor_divisors: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "torOrder": self.tor_order,
            "torDivisors": list(self.tor_divisors),
            "weight": self.weight,
            "prefactor": self.prefactor,
            "reassembledRe": self.z_reassembled.real,
            "reassembledIm": self.z_reassembled.imag,
            "residual": self.residual,
            "quadraticCoefficient": self.quadratic_coefficient,
            "classes": [
                {"class": list(c), "phaseRe": ph.real, "phaseIm": ph.imag,
                 "csAngle": str(cs), "weight": w}
                for c, ph, cs, w in zip(self.classes, self.phases, self.cs_angles, self.weights)
            ],
        }


def z_torsion_decomposition(p: Presentation, k: EvenLattice, tol: float = TOL,
                          budget: int = DEFAULT_BUDGET) -> DecompositionReport:
    """Write the closed value as an average over Tor H^2(X; Lambda).

    ``Z = (1/#Tor) sum_x |det K|^(-1/2) phase_x weight_x``.  The terms are
    obtained by grouping the Gauss sum of the even form ``B = L (x) K`` on
    its discriminant group ``H`` by the characters of the subgroup
    ``(L (x) 1) Z / B Z``, which is a copy of ``G_K^m``: the class of
    ``x in Z^{mn} / (L (x) 1) Z^{mn}`` collects

        rho_x = |det K|^(-m/2) e(-sigma(L) sigma(K)/8) sum_{h in H} e(q_B(h) + b_B((1 (x) K) x, h)).

    Each ``rho_x`` is then split into a unit phase and a positive weight.
    The phases are compared with ``e(-x^T (L^-1 (x) K) x / 2)``.
    """
    sp = to_surgery(p)
    hom = homology(sp)
    if hom.b1 != 0:
        raise InvalidPresentation(f"decomposition needs b1 = 0, got b1 = {hom.b1}")
    z = z_surgery(sp, k, budget)
    lm = sp.linking_list()
    m, n = len(lm), k.rank
    d = k.abs_det
    pref = det_power(d, Fraction(-1, 2))
    if m == 0:
        return DecompositionReport([()], [1 + 0j], [RationalPhase(0)], [1.0], 1.0, 1, pref,
                                   complex(pref), z.amplitude, abs(pref - z.amplitude), 0.0,
                                   None, ())
    b_form = validate_even_lattice(intmat.kron(lm, k.gram))
    h = discriminant_group(b_form)
    if h.order > budget:
        raise SizeLimit(f"decomposition over |H| = {h.order} exceeds the budget")
    tor_divs, classes = coset_representatives(intmat.kron(lm, intmat.identity(n)))
    tor = len(classes)
    assert tor == hom.tor_h2_order(n)
    q_k = intmat.kron(intmat.identity(m), k.gram)
    charges = [intmat.matvec(q_k, x) for x in classes]
    sig_l = intmat.inertia(lm).signature
    shift = RationalPhase(-sig_l * k.signature, 8)
    scale = det_power(d, Fraction(-m, 2))
    qt = h.q_table
    bt = h.b_against(charges)
    rhos = []
    for col in range(tor):
        ps = phase_histogram((qt + bt[:, col]) % h.modulus, h.modulus).shift(shift)
        rhos.append(scale * ps.evaluate())
    weights = [abs(r) for r in rhos]
    if min(weights) <= tol:
        raise DecompositionFailure("a torsion class has vanishing weight")
    phases = [r / w for r, w in zip(rhos, weights)]
    wmean = math.fsum(weights) / tor
    spread = max(abs(w - wmean) for w in weights) / wmean
    if spread > tol:
        raise DecompositionFailure(f"class weights disagree: relative spread {spread:.3e}")
    # closed-form Chern-Simons phases for comparison
    adj_l = intmat.adjugate(lm)
    det_l = intmat.determinant(lm)
    cs_form = intmat.kron(adj_l, k.gram)
    cs = [RationalPhase(-sum(a * b for a, b in zip(intmat.matvec(cs_form, x), x)), 2 * det_l)
          for x in classes]
    dev = max(abs(ph - c.value()) for ph, c in zip(phases, cs))
    if dev > tol:
        raise DecompositionFailure(f"class phases differ from the CS form by {dev:.3e}")
    rebuilt = complex(sum(pref * ph * w for ph, w in zip(phases, weights)) / tor)
    residual = abs(rebuilt - z.amplitude)
    if residual > tol * max(1.0, abs(z.amplitude)):
        raise DecompositionFailure(f"reassembled value off by {residual:.3e}")
    coeff = _quadratic_fit(phases, tor_divs, tol)
    return DecompositionReport(list(classes), phases, cs, weights, wmean, tor, pref, rebuilt,
                               z.amplitude, residual, dev, coeff, tor_divs)


def _quadratic_fit(phases: list[complex], divisors: tuple[int, ...], tol: float) -> int | None:
    """Integer ``c`` with ``phase(lambda) = e(c lambda^2 / p)`` on a cyclic group of order p."""
    if len(divisors) != 1:
        return None
    p = divisors[0]
    for c in range(p):
        if all(abs(phases[lam] - RationalPhase(c * lam * lam, p).value()) <= tol
               for lam in range(p)):
            return c
    return None


# --- boundary theory ----------------------------------------------------

def symplectic_j(genus: int) -> list[list[int]]:
    z = [[0] * (2 * genus) for _ in range(2 * genus)]
    for i in range(genus):
        z[i][genus + i] = 1
        z[genus + i][i] = -1
    return z


@dataclass
class BoundarySpace:
    """Real-polarization Hilbert space on a genus-g surface: one line per leaf."""

    genus: int
    lattice: EvenLattice
    lagrangian: list[list[int]]
    leaves: list[tuple[tuple[int, ...], ...]] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.leaves)

    def symplectic_pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        """``u^T (J (x) K) v`` on ``H^1(Sigma; Z) (x) Lambda``."""
        w = intmat.kron(symplectic_j(self.genus), self.lattice.gram)
        return sum(a * b for a, b in zip(u, intmat.matvec(w, v)))

    def cylinder_operator(self) -> DiagonalKernel:
        """The cylinder: identity on leaves times ``|det K|^{g/2}``."""
        return DiagonalKernel(np.ones(self.dim, dtype=np.int64), Fraction(self.genus, 2))


@dataclass
class DiagonalKernel:
    """Leafwise-diagonal operator ``|det K|^det_exponent * diag(entries)``.

    Kept separate from dense matrices so that identity-like kernels on
    large leaf sets never have to be materialized.
    """

    entries: np.ndarray
    det_exponent: Fraction = Fraction(0)

    @property
    def dim(self) -> int:
        return len(self.entries)


def boundary_space(genus: int, k: EvenLattice, lagrangian=None) -> BoundarySpace:
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    if lagrangian is None:
        lagrangian = [[int(i == j) for j in range(genus)] for i in range(2 * genus)]
    lag = [list(map(int, r)) for r in lagrangian]
    if genus and (len(lag) != 2 * genus or any(len(r) != genus for r in lag)):
        raise NotLagrangian(f"lagrangian must be {2 * genus} x {genus}")
    cols = intmat.transpose(lag) if genus else []
    j = symplectic_j(genus)
    for a, b in itertools.combinations_with_replacement(range(genus), 2):
        if sum(x * y for x, y in zip(cols[a], intmat.matvec(j, cols[b]))):
            raise NotLagrangian(f"columns {a} and {b} are not isotropic")
    if genus and intmat.rank(lag) != genus:
        raise NotLagrangian("lagrangian columns are linearly dependent")
    g = discriminant_group(k)
    leaves = list(itertools.product(g.elements, repeat=genus))
    if len(leaves) != k.abs_det ** genus:
        raise ArithmeticError("leaf count differs from |det K|^g")
    return BoundarySpace(genus, k, lag, leaves)


def cylinder_scalar(genus: int, k: EvenLattice) -> float:
    """``|det K|^{dim H^1(Sigma)/4}``."""
    return det_power(k.abs_det, Fraction(2 * genus, 4))


def cylinder_exponent(genus: int) -> Fraction:
    return m_exponent_bordism(2 * genus, 1, 1, 0)


def glue_trace(b: BoundarySpace, operator, det_exponent=0) -> PartitionValue:
    """Self-glue along the boundary: trace, with one cylinder scalar divided out.

    ``operator`` is a square leafwise matrix or a :class:`DiagonalKernel`;
    an exact factor ``|det K|^det_exponent`` may be pulled out of either.
    """
    e = Fraction(det_exponent)
    if isinstance(operator, DiagonalKernel):
        if operator.dim != b.dim:
            raise DimensionMismatch(f"kernel dimension {operator.dim} != {b.dim}")
        e += operator.det_exponent
        diag = operator.entries
    else:
        op = np.asarray(operator)
        if op.shape != (b.dim, b.dim):
            raise DimensionMismatch(f"operator shape {op.shape} != ({b.dim}, {b.dim})")
        diag = np.diagonal(op)
    e -= Fraction(b.genus, 2)
    d = b.lattice.abs_det
    if np.issubdtype(diag.dtype, np.integer):
        # integer traces stay exact: fold them into the power of |det K| when possible
        tr = int(diag.astype(object).sum())
        if tr == d ** b.genus:
            total = e + b.genus
            return PartitionValue(det_power(d, total), total, "trace of identity kernel")
        return PartitionValue(det_power(d, e) * tr, e, "boundary trace")
    tr = complex(np.sum(diag))
    return PartitionValue(det_power(d, e) * tr, e, "boundary trace")
