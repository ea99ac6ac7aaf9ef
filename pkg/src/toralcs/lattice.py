"""Even integral lattices, their Smith data and discriminant forms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import intmat
from .errors import Degenerate, NotEven, NotSymmetric
from .phases import PhaseSum, RationalPhase, phase_histogram, root_of_unity

# int64 is used for vectorised residue arithmetic only while entries provably fit
_INT64_SAFE = 2 ** 62


@dataclass(frozen=True)
class SmithData:
    u: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]
    divisors: tuple[int, ...]
    u_inv: tuple[tuple[int, ...], ...] = field(repr=False, default=())


@dataclass(frozen=True)
class EvenLattice:
    """Gram matrix of an even, integral, nondegenerate symmetric form on Z^n."""

    gram: tuple[tuple[int, ...], ...]
    rank: int
    det: int
    signature: int

    @cached_property
    def adjugate(self) -> tuple[tuple[int, ...], ...]:
        return tuple(map(tuple, intmat.adjugate(self.gram)))

    @cached_property
    def smith(self) -> SmithData:
        return smith_normal_form(self.gram)

    @property
    def abs_det(self) -> int:
        return abs(self.det)

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.gram]

    def __repr__(self):
        return f"EvenLattice({self.to_list()}, det={self.det}, signature={self.signature})"


def validate_even_lattice(gram: Sequence[Sequence[int]]) -> EvenLattice:
    m = intmat.as_int_matrix(gram)
    n = len(m)
    if n == 0:
        raise Degenerate("lattice must have positive rank")
    if not intmat.is_symmetric(m):
        i, j = next((i, j) for i in range(n) for j in range(n) if m[i][j] != m[j][i])
        raise NotSymmetric(f"gram[{i}][{j}] = {m[i][j]} != gram[{j}][{i}] = {m[j][i]}")
    odd = [i for i in range(n) if m[i][i] % 2]
    if odd:
        raise NotEven(f"diagonal entry gram[{odd[0]}][{odd[0]}] = {m[odd[0]][odd[0]]} is odd")
    det = intmat.determinant(m)
    if det == 0:
        raise Degenerate("determinant is zero")
    sig = intmat.inertia(m).signature
    return EvenLattice(tuple(map(tuple, m)), n, det, sig)


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithData:
    """Smith normal form ``u @ m @ v = diag(divisors)`` of a nonsingular integer matrix."""
    a = intmat.as_int_matrix(m)
    u, u_inv, v, diag = intmat.smith_decomposition(a)
    if any(d == 0 for d in diag):
        raise Degenerate("Smith normal form requested for a singular matrix")
    return SmithData(tuple(map(tuple, u)), tuple(map(tuple, v)), tuple(diag),
                     tuple(map(tuple, u_inv)))


class DiscGroup:
    """The discriminant group ``Z^n / K Z^n`` with its quadratic and bilinear forms.

    Elements are integer vectors.  The canonical representatives are the
    preimages ``u_inv @ c`` of the box ``prod [0, d_i)`` in Smith coordinates,
    listed lexicographically in ``c``.  All form values are kept as residues
    modulo ``2|det K|``: ``q(a) = r / (2|det K|)`` and likewise for ``b``.
    """

    def __init__(self, lattice: EvenLattice):
        self.parent = lattice
        sd = lattice.smith
        self._axes = [i for i, d in enumerate(sd.divisors) if d > 1]
        self.divisors = tuple(sd.divisors[i] for i in self._axes)
        self.order = math.prod(self.divisors)
        assert self.order == lattice.abs_det
        self.modulus = 2 * lattice.abs_det
        sign = 1 if lattice.det > 0 else -1
        # q(a) = a^T adj a / (2 det) = sign * a^T adj a / modulus
        self._form = [[sign * x for x in row] for row in lattice.adjugate]
        self._u = [list(sd.u[i]) for i in self._axes]
        self._gens = [tuple(row[i] for row in sd.u_inv) for i in self._axes]

    def __repr__(self):
        return f"DiscGroup(divisors={self.divisors}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def rank(self) -> int:
        return self.parent.rank

    @cached_property
    def elements(self) -> list[tuple[int, ...]]:
        n = self.rank
        out = []
        for c in itertools.product(*(range(d) for d in self.divisors)):
            vec = [0] * n
            for ci, g in zip(c, self._gens):
                if ci:
                    for k in range(n):
                        vec[k] += ci * g[k]
            out.append(tuple(vec))
        return out

    @property
    def generators(self) -> list[tuple[int, ...]]:
        return list(self._gens)

    def coordinates(self, a: Sequence[int]) -> tuple[int, ...]:
        """Smith coordinates of ``a`` in the box ``prod [0, d_i)``."""
        return tuple(sum(x * y for x, y in zip(row, a)) % d
                     for row, d in zip(self._u, self.divisors))

    def index(self, a: Sequence[int]) -> int:
        idx = 0
        for c, d in zip(self.coordinates(a), self.divisors):
            idx = idx * d + c
        return idx

    def q_residue(self, a: Sequence[int]) -> int:
        w = intmat.matvec(self._form, a)
        return sum(x * y for x, y in zip(w, a)) % self.modulus

    def b_residue(self, a: Sequence[int], a2: Sequence[int]) -> int:
        w = intmat.matvec(self._form, a)
        return 2 * sum(x * y for x, y in zip(w, a2)) % self.modulus

    def q(self, a: Sequence[int]) -> RationalPhase:
        return RationalPhase(self.q_residue(a), self.modulus)

    def b(self, a: Sequence[int], a2: Sequence[int]) -> RationalPhase:
        return RationalPhase(self.b_residue(a, a2), self.modulus)

    # vectorised tables -------------------------------------------------

    def _dtype(self):
        bound = self.rank * self.modulus ** 2
        return np.int64 if bound < _INT64_SAFE else object

    @cached_property
    def _reps_mod(self) -> np.ndarray:
        dt = self._dtype()
        reps = np.array(self.elements, dtype=object).reshape(self.order, self.rank)
        return (reps % self.modulus).astype(dt)

    @cached_property
    def _form_mod(self) -> np.ndarray:
        return (np.array(self._form, dtype=object) % self.modulus).astype(self._dtype())

    @cached_property
    def q_table(self) -> np.ndarray:
        """``q`` residues of all elements, in canonical order."""
        r = self._reps_mod
        w = (r @ self._form_mod) % self.modulus
        return ((w * r).sum(axis=1) % self.modulus).astype(np.int64)

    def b_table(self) -> np.ndarray:
        """``|G| x |G|`` matrix of ``b`` residues."""
        r = self._reps_mod
        w = (r @ self._form_mod) % self.modulus
        return ((2 * (w @ r.T)) % self.modulus).astype(np.int64)

    def b_against(self, vectors) -> np.ndarray:
        """``b`` residues between all elements (rows) and the given vectors (columns)."""
        vs = (np.array(vectors, dtype=object).reshape(-1, self.rank) % self.modulus)
        vs = vs.astype(self._dtype())
        w = (self._reps_mod @ self._form_mod) % self.modulus
        return ((2 * (w @ vs.T)) % self.modulus).astype(np.int64)

    @cached_property
    def negation(self) -> np.ndarray:
        """Permutation taking the index of ``a`` to the index of ``-a``."""
        return np.array([self.index([-x for x in a]) for a in self.elements], dtype=np.int64)

    @cached_property
    def character_permutation(self) -> np.ndarray:
        """Index map ``a -> k(a)`` with ``b(a, g_j) = k_j(a) / d_j`` on the Smith generators.

        Turns the pairing kernel ``exp(-2 pi i b(a, a'))`` into a plain
        multidimensional DFT on the box of Smith coordinates.
        """
        if not self.divisors:
            return np.zeros(1, dtype=np.int64)
        res = self.b_against(self._gens)
        ks = []
        for j, d in enumerate(self.divisors):
            num = res[:, j] * d
            if np.any(num % self.modulus):
                raise ArithmeticError("pairing with a Smith generator has the wrong order")
            ks.append((num // self.modulus) % d)
        idx = np.zeros(self.order, dtype=np.int64)
        for k, d in zip(ks, self.divisors):
            idx = idx * d + k
        return idx


def discriminant_group(lattice: EvenLattice) -> DiscGroup:
    return DiscGroup(lattice)


def disc_q(g: DiscGroup, a: Sequence[int]) -> RationalPhase:
    return g.q(a)


def disc_b(g: DiscGroup, a: Sequence[int], a2: Sequence[int]) -> RationalPhase:
    return g.b(a, a2)


def gauss_sum(g: DiscGroup) -> PhaseSum:
    """Exact ``sum_a exp(2 pi i q(a))`` over the discriminant group."""
    return phase_histogram(g.q_table, g.modulus)


def milgram_check(lattice: EvenLattice) -> float:
    g = discriminant_group(lattice)
    lhs = gauss_sum(g).evaluate() / math.sqrt(g.order)
    return abs(lhs - root_of_unity(lattice.signature, 8))


def random_even_lattice(rng: np.random.Generator, rank: int, bound: int = 3) -> EvenLattice:
    """Random ``B + B^T`` with entries of ``B`` in ``[-bound, bound]``, nondegenerate."""
    while True:
        b = rng.integers(-bound, bound + 1, size=(rank, rank))
        gram = (b + b.T).tolist()
        if intmat.determinant(gram) != 0:
            return validate_even_lattice(gram)


def coset_representatives(m: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    """Divisors ``> 1`` and representatives of ``Z^n / m Z^n`` for nonsingular ``m``.

    Uses the same Smith-box ordering as :class:`DiscGroup`.
    """
    sd = smith_normal_form(m)
    axes = [i for i, d in enumerate(sd.divisors) if d > 1]
    divs = tuple(sd.divisors[i] for i in axes)
    gens = [tuple(row[i] for row in sd.u_inv) for i in axes]
    n = len(sd.divisors)
    reps = []
    for c in itertools.product(*(range(d) for d in divs)):
        vec = [0] * n
        for ci, g in zip(c, gens):
            for k in range(n):
                vec[k] += ci * g[k]
        reps.append(tuple(vec))
    return divs, reps
