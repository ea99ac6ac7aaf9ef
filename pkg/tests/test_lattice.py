import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_b, brute_cosets, brute_q
from toralcs import intmat
from toralcs.errors import Degenerate, NotEven, NotSymmetric
from toralcs.lattice import (coset_representatives, disc_b, disc_q, discriminant_group,
                             gauss_sum, milgram_check, random_even_lattice,
                             smith_normal_form, validate_even_lattice)
from toralcs.phases import PhaseSum, RationalPhase


def even_lattices(max_rank=4, bound=3):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_rank))
        b = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                          min_size=n, max_size=n))
        gram = [[b[i][j] + b[j][i] for j in range(n)] for i in range(n)]
        if intmat.determinant(gram) == 0:
            gram = [[gram[i][j] + (2 * (n + 3) if i == j else 0) for j in range(n)]
                    for i in range(n)]
        if intmat.determinant(gram) == 0:
            gram = [[2 * (i == j) for j in range(n)] for i in range(n)]
        return validate_even_lattice(gram)
    return build()


# --- validation ----------------------------------------------------------

@pytest.mark.parametrize("gram, det, sig", [
    ([[2]], 2, 1),
    ([[0, 1], [1, 0]], -1, 0),
    ([[2, 1], [1, 2]], 3, 2),
    ([[-2]], -2, -1),
    ([[2, 3], [3, -4]], -17, 0),
])
def test_validate_known(gram, det, sig):
    k = validate_even_lattice(gram)
    assert (k.rank, k.det, k.signature) == (len(gram), det, sig)


def test_validate_rejects_odd_diagonal():
    with pytest.raises(NotEven, match=r"gram\[1\]\[1\]"):
        validate_even_lattice([[2, 1], [1, 1]])


def test_validate_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        validate_even_lattice([[2, 1], [0, 2]])


def test_validate_rejects_degenerate():
    with pytest.raises(Degenerate):
        validate_even_lattice([[2, 2], [2, 2]])


def test_signature_matches_eigenvalues(rng):
    for _ in range(40):
        k = random_even_lattice(rng, int(rng.integers(1, 5)))
        lam = np.linalg.eigvalsh(np.array(k.gram, dtype=float))
        assert k.signature == int(np.sum(lam > 0) - np.sum(lam < 0))
        assert k.det == round(np.linalg.det(np.array(k.gram, dtype=float)))
        assert (k.signature - k.rank) % 2 == 0


# --- Smith normal form ----------------------------------------------------

@pytest.mark.parametrize("m, divisors", [
    ([[2, 0], [0, 4]], (2, 4)),
    ([[0, 1], [1, 0]], (1, 1)),
    ([[2, 1], [1, 2]], (1, 3)),
    ([[4, 0], [0, 6]], (2, 12)),
])
def test_smith_examples(m, divisors):
    assert smith_normal_form(m).divisors == divisors


def test_smith_singular_rejected():
    with pytest.raises(Degenerate):
        smith_normal_form([[1, 2], [2, 4]])


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_smith_properties(m):
    if intmat.determinant(m) == 0:
        return
    sd = smith_normal_form(m)
    n = len(m)
    d = intmat.matmul(intmat.matmul(sd.u, m), sd.v)
    assert d == [[sd.divisors[i] if i == j else 0 for j in range(n)] for i in range(n)]
    assert abs(intmat.determinant(sd.u)) == 1 and abs(intmat.determinant(sd.v)) == 1
    assert intmat.matmul(sd.u, sd.u_inv) == intmat.identity(n)
    assert all(sd.divisors[i + 1] % sd.divisors[i] == 0 for i in range(n - 1))
    assert math.prod(sd.divisors) == abs(intmat.determinant(m))


def test_smith_big_entries_stay_exact():
    m = [[10 ** 30 + 1, 7], [7, 2 * 10 ** 25]]
    sd = smith_normal_form(m)
    assert math.prod(sd.divisors) == abs(intmat.determinant(m))


# --- discriminant group ---------------------------------------------------

def test_group_z2():
    g = discriminant_group(validate_even_lattice([[2]]))
    assert g.order == 2 and g.elements == [(0,), (1,)]


def test_group_trivial():
    g = discriminant_group(validate_even_lattice([[0, 1], [1, 0]]))
    assert g.order == 1 and len(g.elements) == 1


def test_group_a2_is_cyclic_of_order_three():
    g = discriminant_group(validate_even_lattice([[2, 1], [1, 2]]))
    assert g.divisors == (3,)


def test_representatives_are_distinct_cosets(rng):
    for _ in range(15):
        k = random_even_lattice(rng, int(rng.integers(1, 4)), bound=2)
        g = discriminant_group(k)
        assert len(brute_cosets(k.to_list())) == g.order
        keys = {tuple(brute_b(k.to_list(), a, e) for e in np.eye(k.rank, dtype=int).tolist())
                for a in g.elements}
        assert len(keys) == g.order
        assert sorted(g.index(a) for a in g.elements) == list(range(g.order))


def test_coset_representatives_of_nonsymmetric_matrix():
    divs, reps = coset_representatives([[2, 1], [0, 3]])
    assert math.prod(divs) == 6 and len(reps) == 6


# --- q and b ---------------------------------------------------------------

def test_q_examples():
    g = discriminant_group(validate_even_lattice([[2]]))
    assert disc_q(g, [1]) == RationalPhase(1, 4)
    assert disc_q(g, [0]) == RationalPhase(0)
    assert disc_q(g, [3]) == disc_q(g, [1])
    assert disc_b(g, [1], [1]) == RationalPhase(1, 2)
    assert disc_b(g, [0], [1]) == RationalPhase(0)


def test_q_against_rational_oracle(rng):
    for _ in range(20):
        k = random_even_lattice(rng, int(rng.integers(1, 5)))
        g = discriminant_group(k)
        for _ in range(10):
            a = rng.integers(-9, 10, size=k.rank).tolist()
            c = rng.integers(-9, 10, size=k.rank).tolist()
            assert disc_q(g, a).fraction == brute_q(k.to_list(), a)
            assert disc_b(g, a, c).fraction == brute_b(k.to_list(), a, c)


def test_q_table_matches_scalar_path(rng):
    k = random_even_lattice(rng, 3)
    g = discriminant_group(k)
    assert [int(x) for x in g.q_table] == [g.q_residue(a) for a in g.elements]
    bt = g.b_table()
    assert all(bt[i, j] == g.b_residue(a, c) for i, a in enumerate(g.elements)
               for j, c in enumerate(g.elements))


@given(even_lattices(), st.data())
def test_coset_invariance(k, data):
    g = discriminant_group(k)
    n = k.rank
    vec = st.lists(st.integers(-50, 50), min_size=n, max_size=n)
    a, v = data.draw(vec), data.draw(vec)
    shifted = [x + y for x, y in zip(a, intmat.matvec(k.gram, v))]
    assert disc_q(g, shifted) == disc_q(g, a)


def test_coset_invariance_thousand_triples(rng):
    count = 0
    while count < 1000:
        k = random_even_lattice(rng, int(rng.integers(1, 5)))
        g = discriminant_group(k)
        for _ in range(50):
            a = rng.integers(-30, 31, size=k.rank).tolist()
            v = rng.integers(-30, 31, size=k.rank).tolist()
            shifted = [x + y for x, y in zip(a, intmat.matvec(k.gram, v))]
            assert disc_q(g, shifted) == disc_q(g, a)
            count += 1


@given(even_lattices(), st.data())
def test_polarization(k, data):
    g = discriminant_group(k)
    vec = st.lists(st.integers(-20, 20), min_size=k.rank, max_size=k.rank)
    a, c = data.draw(vec), data.draw(vec)
    s = [x + y for x, y in zip(a, c)]
    assert disc_b(g, a, c) == disc_q(g, s) - disc_q(g, a) - disc_q(g, c)
    assert disc_b(g, a, c) == disc_b(g, c, a)


# --- Gauss sums ------------------------------------------------------------

def test_gauss_sum_trivial_group():
    assert gauss_sum(discriminant_group(validate_even_lattice([[0, 1], [1, 0]]))).evaluate() == 1


def test_gauss_sum_z2():
    s = gauss_sum(discriminant_group(validate_even_lattice([[2]])))
    assert s.exact_equal(PhaseSum.from_phases([RationalPhase(0), RationalPhase(1, 4)]))
    assert abs(s.evaluate() - (1 + 1j)) < 1e-15


def test_gauss_sum_negative_definite_z2():
    k = validate_even_lattice([[-2]])
    s = gauss_sum(discriminant_group(k))
    assert abs(s.evaluate() - (1 - 1j)) < 1e-15
    assert milgram_check(k) < 1e-12


def test_gauss_sum_brute_force(rng):
    for _ in range(10):
        k = random_even_lattice(rng, int(rng.integers(1, 4)), bound=2)
        reps = brute_cosets(k.to_list())
        direct = sum(cmath.exp(2j * math.pi * float(brute_q(k.to_list(), a))) for a in reps)
        assert abs(gauss_sum(discriminant_group(k)).evaluate() - direct) < 1e-9


@pytest.mark.parametrize("gram", [[[2]], [[0, 1], [1, 0]], [[-2]], [[2, 1], [1, 2]]])
def test_milgram_examples(gram):
    assert milgram_check(validate_even_lattice(gram)) < 1e-12


def test_milgram_random_entries_up_to_six(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        while True:
            b = rng.integers(-3, 4, size=(n, n))
            gram = (b + b.T).tolist()
            if intmat.determinant(gram) != 0:
                break
        assert milgram_check(validate_even_lattice(gram)) < 1e-9


@given(even_lattices(max_rank=3))
def test_gauss_sum_norm_exact(k):
    s = gauss_sum(discriminant_group(k))
    norm = s * s.conjugate()
    assert norm.exact_equal(PhaseSum({RationalPhase(0): k.abs_det}))


def test_int64_guard_switches_to_objects():
    k = validate_even_lattice([[2 * 10 ** 9 + 2, 1], [1, 2]])
    g = discriminant_group(k)
    assert g._dtype() is object
    a = [123456789, -987654321]
    assert Fraction(g.q_residue(a), g.modulus) == brute_q(k.to_list(), a)


def test_tables_agree_with_object_arithmetic(monkeypatch):
    import toralcs.lattice as lat
    k = validate_even_lattice([[4, 1, 0], [1, 6, 1], [0, 1, 8]])
    fast = discriminant_group(k)
    monkeypatch.setattr(lat, "_INT64_SAFE", 0)
    slow = discriminant_group(k)
    assert slow._dtype() is object
    assert np.array_equal(fast.q_table, slow.q_table)
    assert np.array_equal(fast.b_table(), slow.b_table())
