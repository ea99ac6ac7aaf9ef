"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import cmath
import math
import time
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest

from toralcs import intmat
from toralcs.gaussian import fresnel, fresnel_quadrature_oracle, kron_factorize
from toralcs.lattice import discriminant_group, gauss_sum, validate_even_lattice
from toralcs.manifolds import Presentation, m_exponent_bordism
from toralcs.tqft import (boundary_space, cylinder_scalar, glue_trace, partition,
                          z_torsion_decomposition, z_surgery)
from toralcs.verify import verify_kirby
from toralcs.weil import McgWord, mapping_torus_trace, modular_data


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
    return emit


def random_symmetric(rng, dim, gap=0.2):
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    lam = rng.uniform(gap, 4.0, size=dim) * rng.choice([-1, 1], size=dim)
    return (q * lam) @ q.T


def random_lattice(rng, rank, lo=-6, hi=6):
    """Symmetric integer matrix with entries in [lo, hi] and even diagonal, det != 0."""
    while True:
        m = rng.integers(lo, hi + 1, size=(rank, rank))
        m = np.triu(m, 1)
        m = m + m.T
        m[np.diag_indices(rank)] = 2 * rng.integers(lo // 2, hi // 2 + 1, size=rank)
        gram = m.tolist()
        if intmat.determinant(gram) != 0:
            return validate_even_lattice(gram)


def exact_power(d, e: Fraction) -> float:
    """Correctly rounded ``d ** e`` for a half-integer ``e``."""
    getcontext().prec = 60
    x = Decimal(d) ** abs(e.numerator)
    if e.denominator == 2:
        x = x.sqrt()
    return float(1 / x if e < 0 else x)


def test_criterion_1_fresnel(report):
    rng = np.random.default_rng(20240101)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        a = random_symmetric(rng, int(rng.integers(1, 5)))
        assert np.abs(np.linalg.eigvalsh(a)).min() >= 0.2
        worst = max(worst, abs(fresnel(a) - fresnel_quadrature_oracle(a)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-4 and elapsed <= 60
    report(1, "Fresnel closed form vs damped quadrature", ok,
           f"50 forms, max error {worst:.2e} (<= 1e-4), {elapsed:.1f}s (<= 60s)")
    assert worst <= 1e-4
    assert elapsed <= 60


def test_criterion_2_kron(report):
    rng = np.random.default_rng(20240102)
    worst = 0.0
    sig_ok = True
    for _ in range(100):
        k = random_lattice(rng, int(rng.integers(1, 5)), -3, 3)
        m = int(rng.integers(1, 5))
        while True:
            b = rng.integers(-4, 5, size=(m, m))
            a = (b + b.T).tolist()
            if intmat.determinant(a) != 0:
                break
        r = kron_factorize(k, a)
        # independent oracles: exact inertia of the integer Kronecker product, numpy slogdet
        prod = intmat.kron(k.gram, a)
        sig_a = intmat.inertia(a).signature
        sig_ok &= r.signature == intmat.inertia(prod).signature == k.signature * sig_a
        expected = m * math.log(k.abs_det) + k.rank * math.log(abs(intmat.determinant(a)))
        worst = max(worst, abs(r.log_abs_det - expected),
                    abs(np.linalg.slogdet(np.array(prod, dtype=float))[1] - expected))
    ok = sig_ok and worst <= 1e-9
    report(2, "sgn(K(x)A) = sgn K sgn A, log|det| additivity", ok,
           f"100 pairs, signatures exact: {sig_ok}, max log-det residual {worst:.2e} (<= 1e-9)")
    assert sig_ok
    assert worst <= 1e-9


def test_criterion_3_milgram_and_anomaly(report):
    rng = np.random.default_rng(20240103)
    worst_milgram = worst_anomaly = 0.0
    for _ in range(50):
        k = random_lattice(rng, int(rng.integers(1, 5)))
        g = discriminant_group(k)
        milgram = gauss_sum(g).evaluate() / math.sqrt(g.order)
        expected = cmath.exp(2j * math.pi * k.signature / 8)
        worst_milgram = max(worst_milgram, abs(milgram - expected))
        md = modular_data(k)
        worst_anomaly = max(worst_anomaly, abs(md.measured_anomaly() - milgram))
    ok = worst_milgram <= 1e-9 and worst_anomaly <= 1e-9
    report(3, "Milgram phase and Weil (ST)^3 anomaly", ok,
           f"50 lattices, Milgram {worst_milgram:.2e}, anomaly {worst_anomaly:.2e} (<= 1e-9)")
    assert worst_milgram <= 1e-9
    assert worst_anomaly <= 1e-9


# one lattice for each |det K| = 1..16, plus non-cyclic groups of order 16
DET_LATTICES = [
    [[0, 1], [1, 0]], [[2]], [[2, 1], [1, 2]], [[4]], [[2, 1], [1, -2]], [[6]],
    [[2, 1], [1, 4]], [[8]], [[2, 1], [1, -4]], [[10]], [[2, 1], [1, 6]], [[12]],
    [[2, 1], [1, -6]], [[14]], [[2, 1], [1, 8]], [[16]], [[4, 0], [0, 4]], [[2, 0], [0, 8]],
]


def test_criterion_4_hilbert_dimensions(report):
    bad = []
    dets = set()
    for gram in DET_LATTICES:
        k = validate_even_lattice(gram)
        dets.add(k.abs_det)
        for g in range(4):
            b = boundary_space(g, k)
            if not (b.dim == len(set(b.leaves)) == k.abs_det ** g):
                bad.append((gram, g))
    ok = not bad and dets == set(range(1, 17))
    report(4, "leaf count = |det K|^g", ok,
           f"{len(DET_LATTICES)} lattices covering |det K| = 1..16, g = 0..3, mismatches {bad}")
    assert dets == set(range(1, 17))
    assert not bad


def test_criterion_5_cylinder_and_gluing(report):
    bad = []
    for gram in DET_LATTICES + [[[2, 3], [3, -4]]]:
        k = validate_even_lattice(gram)
        d = k.abs_det
        for g in range(4):
            e = m_exponent_bordism(2 * g, 1, 1, 0)
            if e != Fraction(g, 2) or cylinder_scalar(g, k) != exact_power(d, e):
                bad.append(("cylinder", gram, g))
            b = boundary_space(g, k)
            z = glue_trace(b, b.cylinder_operator())
            closed = partition(Presentation.standard("SigmaXS1", g), k)
            if not (z.amplitude == d ** g == closed.amplitude and z.det_k_exponent == g):
                bad.append(("glue", gram, g))
    report(5, "cylinder scalar |det K|^(g/2), self-glued cylinder = Z(Sigma_g x S^1)", not bad,
           f"g = 0..3 on {len(DET_LATTICES) + 1} lattices, exact mismatches {bad}")
    assert not bad


CLOSED_LATTICES = [[[2]], [[-2]], [[6]], [[2, 1], [1, 2]], [[2, 3], [3, -4]],
                   [[0, 1], [1, 0]], [[2, 1, 0], [1, 2, 1], [0, 1, 2]]]


def test_criterion_6_closed_values(report):
    worst = 0.0
    indefinite = rank2 = False
    for gram in CLOSED_LATTICES:
        k = validate_even_lattice(gram)
        d = k.abs_det
        indefinite |= abs(k.signature) < k.rank
        rank2 |= k.rank >= 2
        s3 = z_surgery(Presentation.surgery([]), k).amplitude
        worst = max(worst, abs(s3 - d ** -0.5))
        worst = max(worst, abs(z_surgery(Presentation.surgery([[0]]), k).amplitude - 1))
        worst = max(worst, abs(z_surgery(Presentation.surgery([[0] * 3] * 3), k).amplitude - d))
        trace = mapping_torus_trace(modular_data(k), McgWord.parse("S S S S")).amplitude
        worst = max(worst, abs(trace - d))
        worst = max(worst, abs(partition(Presentation.standard("T3"), k).amplitude - d))
        pieces = [[[3]], [[2, 1], [1, -2]], [[5, 1], [1, 2]], [[0]]]
        for a in pieces:
            for b in pieces:
                za = z_surgery(Presentation.surgery(a), k).amplitude
                zb = z_surgery(Presentation.surgery(b), k).amplitude
                zab = z_surgery(Presentation.surgery(intmat.block_diag(a, b)), k).amplitude
                worst = max(worst, abs(zab * s3 - za * zb))
    ok = worst <= 1e-9 and indefinite and rank2
    report(6, "closed values S^3, S^2 x S^1, T^3 and multiplicativity", ok,
           f"{len(CLOSED_LATTICES)} lattices (rank >= 2: {rank2}, indefinite: {indefinite}), "
           f"max residual {worst:.2e} (<= 1e-9)")
    assert indefinite and rank2
    assert worst <= 1e-9


def test_criterion_7_kirby(report):
    t0 = time.perf_counter()
    rep = verify_kirby(trials=100, seed=20240107, moves=5)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and rep.max_residual <= 1e-9 and elapsed <= 120
    report(7, "Kirby invariance", ok,
           f"100 trials x 5 moves, max residual {rep.max_residual:.2e} (<= 1e-9), "
           f"{elapsed:.1f}s (<= 120s)")
    assert rep.max_residual <= 1e-9
    assert elapsed <= 120


def test_criterion_8_decomposition(report):
    lattices = [[[2]], [[4]], [[-6]], [[2, 1], [1, 2]], [[2, 3], [3, -4]], [[2, 0], [0, 2]]]
    worst_unit = worst_weight = worst_rebuild = 0.0
    positive = True
    for gram in lattices:
        k = validate_even_lattice(gram)
        for p in range(2, 14):
            r = z_torsion_decomposition(Presentation.lens(p, 1), k)
            z = z_surgery(Presentation.surgery([[p]]), k).amplitude
            worst_unit = max(worst_unit, max(abs(abs(x) - 1) for x in r.phases))
            worst_weight = max(worst_weight, (max(r.weights) - min(r.weights)) / r.weight)
            worst_rebuild = max(worst_rebuild, abs(r.z_reassembled - z))
            positive &= r.weight > 0
    ok = positive and max(worst_unit, worst_weight, worst_rebuild) <= 1e-9
    report(8, "decomposition over torsion classes for L(p,1), p = 2..13", ok,
           f"{len(lattices)} lattices, unit-modulus {worst_unit:.2e}, weight spread "
           f"{worst_weight:.2e}, reassembly {worst_rebuild:.2e} (all <= 1e-9)")
    assert positive
    assert worst_unit <= 1e-9
    assert worst_weight <= 1e-9
    assert worst_rebuild <= 1e-9
