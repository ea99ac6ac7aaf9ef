"""Exact arithmetic on roots of unity.

A :class:`RationalPhase` is an angle in Q/Z standing for ``exp(2*pi*i*angle)``.
A :class:`PhaseSum` is a finite integer combination of such roots of unity;
Gauss sums are accumulated as PhaseSums and only turned into complex floats
at the very end.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np


@dataclass(frozen=True, order=True)
class RationalPhase:
    """The angle ``numerator/denominator`` in Q/Z, kept in lowest terms."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        num, den = int(self.numerator), int(self.denominator)
        if den == 0:
            raise ZeroDivisionError("phase denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = math.gcd(num, den)
        if num == 0:
            den = 1
        else:
            num, den = num // g, den // g
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def from_fraction(cls, x) -> RationalPhase:
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __add__(self, other: RationalPhase) -> RationalPhase:
        return RationalPhase.from_fraction(self.fraction + other.fraction)

    def __sub__(self, other: RationalPhase) -> RationalPhase:
        return RationalPhase.from_fraction(self.fraction - other.fraction)

    def __neg__(self) -> RationalPhase:
        return RationalPhase(-self.numerator, self.denominator)

    def __mul__(self, k: int) -> RationalPhase:
        return RationalPhase(self.numerator * int(k), self.denominator)

    __rmul__ = __mul__

    def value(self) -> complex:
        return root_of_unity(self.numerator, self.denominator)

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


ZERO_PHASE = RationalPhase(0)


def root_of_unity(k: int, n: int) -> complex:
    """``exp(2*pi*i*k/n)`` with exact values at the eighth roots of unity."""
    k %= n
    eighths, rem = divmod(8 * k, n)
    if rem == 0:
        return _EIGHTH_ROOTS[eighths]
    return cmath.exp(2j * math.pi * k / n)


_H = math.sqrt(0.5)
_EIGHTH_ROOTS = (1 + 0j, complex(_H, _H), 1j, complex(-_H, _H),
                 -1 + 0j, complex(-_H, -_H), -1j, complex(_H, -_H))


class PhaseSum:
    """Integer combination ``sum_k m_k exp(2*pi*i*theta_k)`` of roots of unity.

    The term map is stored as given; it is *not* a normal form, since roots
    of unity satisfy linear relations.  Use :meth:`canonical` or
    :meth:`exact_equal` for exact comparisons.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[RationalPhase, int] | None = None):
        clean = {}
        for phase, mult in (terms or {}).items():
            if not isinstance(phase, RationalPhase):
                phase = RationalPhase.from_fraction(phase)
            mult = int(mult)
            if mult:
                clean[phase] = clean.get(phase, 0) + mult
        self._terms = {p: m for p, m in clean.items() if m}

    @classmethod
    def from_phases(cls, phases: Iterable[RationalPhase]) -> PhaseSum:
        return cls(Counter(phases))

    @classmethod
    def from_histogram(cls, counts, denominator: int) -> PhaseSum:
        """Build from ``counts[r]`` = multiplicity of the angle ``r/denominator``."""
        return cls({RationalPhase(r, denominator): int(c)
                    for r, c in enumerate(counts) if c})

    @classmethod
    def one(cls) -> PhaseSum:
        return cls({ZERO_PHASE: 1})

    @property
    def terms(self) -> dict[RationalPhase, int]:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        body = ", ".join(f"{m}*e({p})" for p, m in sorted(self._terms.items()))
        return f"PhaseSum({body})"

    def count(self) -> int:
        """Total signed multiplicity (the value at the trivial character)."""
        return sum(self._terms.values())

    def __add__(self, other: PhaseSum) -> PhaseSum:
        out = dict(self._terms)
        for p, m in other._terms.items():
            out[p] = out.get(p, 0) + m
        return PhaseSum(out)

    def __neg__(self) -> PhaseSum:
        return PhaseSum({p: -m for p, m in self._terms.items()})

    def __sub__(self, other: PhaseSum) -> PhaseSum:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PhaseSum):
            out: dict[RationalPhase, int] = {}
            for p, m in self._terms.items():
                for p2, m2 in other._terms.items():
                    key = p + p2
                    out[key] = out.get(key, 0) + m * m2
            return PhaseSum(out)
        if isinstance(other, RationalPhase):
            return self.shift(other)
        return PhaseSum({p: m * int(other) for p, m in self._terms.items()})

    __rmul__ = __mul__

    def shift(self, phase: RationalPhase) -> PhaseSum:
        """Multiply every term by ``exp(2*pi*i*phase)``."""
        return PhaseSum({p + phase: m for p, m in self._terms.items()})

    def conjugate(self) -> PhaseSum:
        return PhaseSum({-p: m for p, m in self._terms.items()})

    def conductor(self) -> int:
        n = 1
        for p in self._terms:
            n = n * p.denominator // math.gcd(n, p.denominator)
        return n

    def evaluate(self) -> complex:
        re, im = [], []
        for p, m in self._terms.items():
            z = p.value()
            re.append(m * z.real)
            im.append(m * z.imag)
        return complex(math.fsum(re), math.fsum(im))

    def __complex__(self):
        return self.evaluate()

    def canonical(self, conductor: int | None = None) -> tuple[int, tuple[int, ...]]:
        """Exact normal form: coefficients in Z[x]/Phi_N(x), N the conductor."""
        n = conductor or self.conductor()
        if not self._terms:
            return n, ()
        if n > MAX_CONDUCTOR:
            raise ValueError(f"conductor {n} too large for exact reduction")
        coeffs = [0] * n
        for p, m in self._terms.items():
            if n % p.denominator:
                raise ValueError(f"conductor {n} is not a multiple of {p.denominator}")
            coeffs[p.numerator * (n // p.denominator)] += m
        rem = _poly_mod(coeffs, cyclotomic_polynomial(n))
        while rem and rem[-1] == 0:
            rem.pop()
        return n, tuple(rem)

    def exact_equal(self, other: PhaseSum) -> bool:
        n1, n2 = self.conductor(), other.conductor()
        n = n1 * n2 // math.gcd(n1, n2)
        return (self - other).canonical(n)[1] == ()

    def is_zero(self) -> bool:
        return self.canonical()[1] == ()


MAX_CONDUCTOR = 10 ** 6


def phase_histogram(numerators, modulus: int) -> PhaseSum:
    """PhaseSum of ``exp(2*pi*i*r/modulus)`` over an integer array of residues."""
    counts = np.bincount(np.asarray(numerators, dtype=np.int64).ravel() % modulus,
                         minlength=modulus)
    return PhaseSum.from_histogram(counts, modulus)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + len(den) - 1]
        quot[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return quot


def _poly_mod(num: list[int], den) -> list[int]:
    """Remainder of ``num`` modulo the monic integer polynomial ``den``."""
    num = list(num)
    deg = len(den) - 1
    for i in range(len(num) - 1, deg - 1, -1):
        c = num[i]
        if c:
            for j, d in enumerate(den):
                num[i - deg + j] -= c * d
    return num[:deg]
