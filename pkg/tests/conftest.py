import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def fraction_inverse(m):
    """Gauss-Jordan inverse over Q, independent of the package's linear algebra."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def brute_cosets(gram):
    """Representatives of Z^n / K Z^n found by reducing a box modulo K with rational coordinates."""
    n = len(gram)
    inv = fraction_inverse(gram)
    d = abs(round(np.linalg.det(np.array(gram, dtype=float))))
    # K^-1 v mod Z^n identifies the coset; scale by d to work with integers
    scaled = np.array([[int(x * d) for x in row] for row in inv], dtype=np.int64)
    box = np.array(list(itertools.product(range(d), repeat=n)), dtype=np.int64).reshape(-1, n)
    keys = (box @ scaled.T) % d
    _, first = np.unique(keys, axis=0, return_index=True)
    return [tuple(int(x) for x in box[i]) for i in sorted(first)]


def brute_q(gram, a):
    inv = fraction_inverse(gram)
    n = len(gram)
    return (Fraction(1, 2) * sum(a[i] * inv[i][j] * a[j] for i in range(n) for j in range(n))) % 1


def brute_b(gram, a, c):
    inv = fraction_inverse(gram)
    n = len(gram)
    return sum(a[i] * inv[i][j] * c[j] for i in range(n) for j in range(n)) % 1


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
