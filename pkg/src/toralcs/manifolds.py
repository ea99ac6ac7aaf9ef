"""Closed 3-manifold presentations and their homological data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import intmat
from .errors import IndexOutOfRange, InvalidPresentation, NonHalfInteger

SURGERY = "SurgeryLink"
STANDARD = "Standard"

FAMILIES = ("S3", "S2xS1", "T3", "SigmaXS1", "Lens", "ConnectedSum")


@dataclass(frozen=True)
class Presentation:
    """A framed-link linking matrix, or a tagged standard family.

    Only the linking matrix of a surgery link is stored; crossing data never
    enters the abelian invariant.
    """

    kind: str
    linking: tuple[tuple[int, ...], ...] = ()
    family: str | None = None
    params: tuple = ()

    @classmethod
    def surgery(cls, linking: Sequence[Sequence[int]]) -> Presentation:
        rows = [list(r) for r in linking]
        try:
            m = intmat.as_int_matrix(rows) if rows else []
        except (TypeError, ValueError) as exc:
            raise InvalidPresentation(f"linking matrix: {exc}") from exc
        if not intmat.is_symmetric(m):
            raise InvalidPresentation("linking matrix must be symmetric")
        return cls(SURGERY, tuple(map(tuple, m)))

    @classmethod
    def standard(cls, family: str, *params) -> Presentation:
        if family not in FAMILIES:
            raise InvalidPresentation(f"unknown family {family!r}")
        if family == "Lens":
            if len(params) != 2:
                raise InvalidPresentation("Lens needs (p, q)")
            p, q = map(int, params)
            if p < 1 or not 0 <= q < p:
                raise InvalidPresentation(f"Lens({p},{q}) needs p >= 1 and 0 <= q < p")
            if math.gcd(p, q) != 1:
                raise InvalidPresentation(f"Lens({p},{q}) needs gcd(p, q) = 1")
            params = (p, q)
        elif family == "SigmaXS1":
            if len(params) != 1 or int(params[0]) < 0:
                raise InvalidPresentation("SigmaXS1 needs a genus g >= 0")
            params = (int(params[0]),)
        elif family == "ConnectedSum":
            if not params or not all(isinstance(x, Presentation) for x in params):
                raise InvalidPresentation("ConnectedSum needs a nonempty list of presentations")
            params = tuple(params)
        elif params:
            raise InvalidPresentation(f"{family} takes no parameters")
        return cls(STANDARD, family=family, params=params)

    @classmethod
    def lens(cls, p: int, q: int) -> Presentation:
        return cls.standard("Lens", p, q)

    @classmethod
    def connected_sum(cls, parts: Sequence[Presentation]) -> Presentation:
        return cls.standard("ConnectedSum", *parts)

    @property
    def components(self) -> int:
        return len(self.linking)

    def linking_list(self) -> list[list[int]]:
        return [list(r) for r in self.linking]

    def describe(self) -> str:
        if self.kind == SURGERY:
            return f"surgery{self.linking_list()}"
        if self.family == "ConnectedSum":
            return " # ".join(p.describe() for p in self.params)
        if self.params:
            return f"{self.family}{self.params}"
        return self.family


@dataclass(frozen=True)
class HomologySummary:
    b1: int
    torsion_divisors: tuple[int, ...]
    m_x: Fraction

    def tor_h2_order(self, lattice_rank: int) -> int:
        """Order of Tor H^2(X; Lambda) = Tor H_1(X) (x) Z^rank."""
        return math.prod(self.torsion_divisors) ** lattice_rank

    @property
    def h1_order(self) -> int | None:
        """|H_1(X; Z)| for rational homology spheres, ``None`` otherwise."""
        return math.prod(self.torsion_divisors) if self.b1 == 0 else None


def closed_m_exponent(b1: int) -> Fraction:
    return Fraction(b1 - 1, 2)


def homology(p: Presentation) -> HomologySummary:
    if p.kind == SURGERY:
        if not p.linking:
            return HomologySummary(0, (), closed_m_exponent(0))
        _, _, _, diag = intmat.smith_decomposition(p.linking_list())
        b1 = sum(1 for d in diag if d == 0)
        tors = tuple(d for d in diag if d > 1)
        return HomologySummary(b1, tors, closed_m_exponent(b1))
    fam = p.family
    if fam == "S3":
        b1, tors = 0, ()
    elif fam == "S2xS1":
        b1, tors = 1, ()
    elif fam == "T3":
        b1, tors = 3, ()
    elif fam == "SigmaXS1":
        b1, tors = 2 * p.params[0] + 1, ()
    elif fam == "Lens":
        b1, tors = 0, ((p.params[0],) if p.params[0] > 1 else ())
    elif fam == "ConnectedSum":
        parts = [homology(x) for x in p.params]
        b1 = sum(h.b1 for h in parts)
        tors = tuple(sorted(d for h in parts for d in h.torsion_divisors))
    else:
        raise InvalidPresentation(f"unknown family {fam!r}")
    return HomologySummary(b1, tors, closed_m_exponent(b1))


def m_exponent_bordism(b1abs: int, b1rel: int, b0abs: int, b0rel: int) -> Fraction:
    """``(b1 + b1_rel - b0 - b0_rel) / 4`` as an exact half-integer."""
    num = b1abs + b1rel - b0abs - b0rel
    if num % 2:
        raise NonHalfInteger(f"Betti combination {num} is odd; m_X would be {num}/4")
    return Fraction(num, 4)


def kirby_stabilize(p: Presentation, sign: int) -> Presentation:
    """Add a disjoint unknot with framing ``sign``."""
    if p.kind != SURGERY:
        raise InvalidPresentation("stabilization needs a surgery presentation")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return Presentation.surgery(intmat.block_diag(p.linking_list(), [[sign]]))


def handle_slide(p: Presentation, i: int, j: int, sign: int = 1) -> Presentation:
    """Slide component ``i`` over component ``j`` (0-based).

    The linking matrix changes by the congruence ``E^T L E`` with
    ``E = I + sign * e_j e_i^T``, i.e. row/column ``j`` is added to row/column ``i``.
    """
    if p.kind != SURGERY:
        raise InvalidPresentation("handle slides need a surgery presentation")
    m = p.components
    if not (0 <= i < m and 0 <= j < m) or i == j:
        raise IndexOutOfRange(f"slide({i}, {j}) invalid for a {m}-component link")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    e = intmat.identity(m)
    e[j][i] = sign
    return Presentation.surgery(intmat.matmul(intmat.matmul(intmat.transpose(e), p.linking_list()), e))


def lens_chain(p: int, q: int) -> list[int]:
    """Framings ``a_1..a_k`` of a linear chain of unknots presenting L(p, q).

    ``p/q = a_1 - 1/(a_2 - 1/(... - 1/a_k))``; empty for L(1, 0) = S^3.
    """
    if p == 1:
        return []
    out = []
    num, den = p, q
    while den:
        a = -(-num // den)
        out.append(a)
        num, den = den, a * den - num
    return out


def chain_linking(framings: Sequence[int]) -> list[list[int]]:
    k = len(framings)
    m = [[0] * k for _ in range(k)]
    for i, a in enumerate(framings):
        m[i][i] = a
        if i + 1 < k:
            m[i][i + 1] = m[i + 1][i] = 1
    return m


def to_surgery(p: Presentation) -> Presentation:
    """Linking-matrix presentation of a standard family, where one exists here.

    Connected sums become block sums.  Sigma_g x S^1 with g >= 2 has no
    linking-matrix form in this module.
    """
    if p.kind == SURGERY:
        return p
    fam = p.family
    if fam == "S3":
        return Presentation.surgery([])
    if fam == "S2xS1":
        return Presentation.surgery([[0]])
    if fam == "T3":
        # 0-framed Borromean rings; same linking data as #^3 (S^2 x S^1)
        return Presentation.surgery([[0] * 3 for _ in range(3)])
    if fam == "SigmaXS1" and p.params[0] <= 1:
        return to_surgery(Presentation.standard("S2xS1" if p.params[0] == 0 else "T3"))
    if fam == "Lens":
        pp, q = p.params
        return Presentation.surgery(chain_linking(lens_chain(pp, q)))
    if fam == "ConnectedSum":
        return Presentation.surgery(
            intmat.block_diag(*[to_surgery(x).linking_list() for x in p.params]))
    raise InvalidPresentation(f"no linking-matrix form for {p.describe()}")
