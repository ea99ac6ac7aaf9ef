"""Genus-one modular data: the Weil representation on functions on G_K.

The representation is projective.  ``S`` has entries
``|G|^{-1/2} exp(-2 pi i b(a, a'))`` and ``T`` is ``diag exp(2 pi i q(a))``;
with the minus sign in ``S`` the relation ``(ST)^3 = exp(2 pi i sigma/8) S^2``
carries the same phase as the Milgram Gauss sum.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import intmat
from .errors import RelationViolation
from .lattice import DiscGroup, EvenLattice, discriminant_group
from .phases import PhaseSum, RationalPhase, phase_histogram, root_of_unity
from .values import PartitionValue

RELATION_TOL = 1e-9
UNITARY_TOL = 1e-10
DENSE_LIMIT = 1024

LETTERS = ("S", "T", "Ti")
_SL2Z = {
    "S": ((0, -1), (1, 0)),
    "T": ((1, 1), (0, 1)),
    "Ti": ((1, -1), (0, 1)),
}
_TOKEN = re.compile(r"\s*(S|T(?:\^-1|-1|⁻¹|')?|t)")


@dataclass(frozen=True)
class McgWord:
    """Mapping class of the torus as a word in ``S``, ``T`` and ``T^-1``."""

    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("word must be nonempty")
        bad = [x for x in self.letters if x not in LETTERS]
        if bad:
            raise ValueError(f"unknown letters {bad}")

    @classmethod
    def parse(cls, text: str) -> McgWord:
        """Parse e.g. ``"STTS"``, ``"S T T^-1"``; ``t`` also means ``T^-1``."""
        pos, out = 0, []
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse word at position {pos}: {text[pos:]!r}")
            tok = m.group(1)
            out.append("S" if tok == "S" else "T" if tok == "T" else "Ti")
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        return cls(tuple(out))

    def __str__(self):
        return " ".join("T^-1" if x == "Ti" else x for x in self.letters)

    def rotate(self, k: int) -> McgWord:
        k %= len(self.letters)
        return McgWord(self.letters[k:] + self.letters[:k])

    def inverse(self) -> McgWord:
        inv = {"T": ("Ti",), "Ti": ("T",), "S": ("S", "S", "S")}
        return McgWord(tuple(x for l in reversed(self.letters) for x in inv[l]))

    def sl2z(self) -> list[list[int]]:
        m = intmat.identity(2)
        for l in self.letters:
            m = intmat.matmul(m, _SL2Z[l])
        return m


class ModularData:
    """S and T for the discriminant form of an even lattice."""

    def __init__(self, group: DiscGroup, check: bool = True, probes: int = 3, seed: int = 0):
        self.group = group
        self.order = group.order
        self.anomaly = RationalPhase(group.parent.signature, 8)
        self._shape = group.divisors
        self._perm = group.character_permutation
        self.t_diagonal = np.exp(2j * np.pi * group.q_table / group.modulus)
        if check:
            self._check_relations(probes, seed)

    @property
    def dim(self) -> int:
        return self.order

    @cached_property
    def s_matrix(self) -> np.ndarray:
        if self.order > DENSE_LIMIT:
            raise MemoryError(f"dense S for |G| = {self.order} exceeds {DENSE_LIMIT}")
        g = self.group
        return np.exp(-2j * np.pi * g.b_table() / g.modulus) / math.sqrt(self.order)

    @cached_property
    def t_matrix(self) -> np.ndarray:
        return np.diag(self.t_diagonal)

    def charge_conjugation(self) -> np.ndarray:
        c = np.zeros((self.order, self.order))
        c[np.arange(self.order), self.group.negation] = 1.0
        return c

    def s_squared_exact(self) -> list[list[PhaseSum]]:
        """Entries of ``|G| S^2`` as exact phase sums."""
        g = self.group
        b = g.b_table()
        n = self.order
        return [[phase_histogram(-(b[i] + b[:, j]), g.modulus) for j in range(n)]
                for i in range(n)]

    # matrix-free action; S is a DFT on Smith coordinates up to reindexing
    def apply_s(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        extra = v.shape[1:]
        if not self._shape:
            return v.copy()
        f = np.fft.fftn(v.reshape(self._shape + extra), axes=tuple(range(len(self._shape))))
        return f.reshape((self.order,) + extra)[self._perm] / math.sqrt(self.order)

    def apply_t(self, v: np.ndarray, power: int = 1) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        d = self.t_diagonal ** power
        return d.reshape((-1,) + (1,) * (v.ndim - 1)) * v

    def apply_word(self, word: McgWord, v: np.ndarray) -> np.ndarray:
        for l in reversed(word.letters):
            v = self.apply_s(v) if l == "S" else self.apply_t(v, 1 if l == "T" else -1)
        return v

    def _check_relations(self, probes: int, seed: int):
        n = self.order
        if n <= DENSE_LIMIT:
            s = self.s_matrix
            unit = np.abs(s @ s.conj().T - np.eye(n)).max()
            if unit > UNITARY_TOL:
                raise RelationViolation(f"S not unitary: {unit:.3e}")
            s2 = s @ s
            perm = np.abs(s2 - self.charge_conjugation()).max()
            if perm > RELATION_TOL:
                raise RelationViolation(f"S^2 is not charge conjugation: {perm:.3e}")
            st = s @ self.t_matrix
            res = np.abs(st @ st @ st - self.anomaly.value() * s2).max()
        else:
            rng = np.random.default_rng(seed)
            vs = rng.normal(size=(n, probes)) + 1j * rng.normal(size=(n, probes))
            vs /= np.linalg.norm(vs, axis=0)
            sv = self.apply_s(vs)
            unit = np.abs(np.linalg.norm(sv, axis=0) - 1).max()
            if unit > UNITARY_TOL:
                raise RelationViolation(f"S not unitary: {unit:.3e}")
            s2v = self.apply_s(sv)
            perm = np.abs(s2v - vs[self.group.negation]).max()
            if perm > RELATION_TOL:
                raise RelationViolation(f"S^2 is not charge conjugation: {perm:.3e}")
            w = vs
            for _ in range(3):
                w = self.apply_s(self.apply_t(w))
            res = np.abs(w - self.anomaly.value() * s2v).max()
        if res > RELATION_TOL:
            raise RelationViolation(f"(ST)^3 != e(sigma/8) S^2: residual {res:.3e}")
        self.relation_residual = float(res)

    def measured_anomaly(self) -> complex:
        """``((ST)^3 v)_0 / (S^2 v)_0`` for the delta function at 0."""
        e0 = np.zeros(self.order, dtype=complex)
        e0[0] = 1.0
        return complex(self.apply_word(McgWord(("S", "T") * 3), e0)[0]
                       / self.apply_word(McgWord(("S", "S")), e0)[0])


def modular_data(l: EvenLattice, check: bool = True) -> ModularData:
    return ModularData(discriminant_group(l), check=check)


def rep_word(d: ModularData, w: McgWord) -> np.ndarray:
    mats = {"S": d.s_matrix, "T": d.t_matrix, "Ti": d.t_matrix.conj()}
    out = mats[w.letters[0]]
    for l in w.letters[1:]:
        out = out @ mats[l]
    return out


def mapping_torus_m_exponent(w: McgWord) -> Fraction:
    """``(b1 - 1)/2`` of the mapping torus; ``b1 = 1 + dim ker(phi - 1)``."""
    m = w.sl2z()
    null = 2 - intmat.rank([[m[0][0] - 1, m[0][1]], [m[1][0], m[1][1] - 1]])
    return Fraction(null, 2)


def mapping_torus_trace(d: ModularData, w: McgWord) -> PartitionValue:
    if d.order <= DENSE_LIMIT:
        tr = complex(np.trace(rep_word(d, w)))
    else:
        tr = complex(sum(d.apply_word(w, _delta(d.order, i))[i] for i in range(d.order)))
    return PartitionValue(
        tr, mapping_torus_m_exponent(w),
        f"trace of {w}; phase defined up to powers of e({d.anomaly})")


def _delta(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=complex)
    v[i] = 1.0
    return v
