import numpy as np

from toralcs.manifolds import Presentation
from toralcs.verify import (KIRBY_LATTICES, Report, random_kirby_move, random_linking,
                            verify_axioms, verify_kirby)


def test_kirby_report_is_deterministic():
    a = verify_kirby(trials=6, seed=3).to_json()
    b = verify_kirby(trials=6, seed=3).to_json()
    assert a == b and a["passed"] and len(a["checks"]) == 6


def test_kirby_lattices_are_small():
    from toralcs.lattice import validate_even_lattice
    assert all(validate_even_lattice(g).abs_det <= 9 for g in KIRBY_LATTICES)


def test_random_linking_is_symmetric_and_bounded():
    rng = np.random.default_rng(0)
    for m in range(1, 4):
        lm = np.array(random_linking(rng, m))
        assert (lm == lm.T).all() and np.abs(lm).max() <= 4


def test_moves_respect_state_cap():
    rng = np.random.default_rng(1)
    p = Presentation.surgery([[1]])
    for _ in range(20):
        p, _ = random_kirby_move(rng, p, 9, 9 ** 4)
        assert p.components <= 4


def test_report_failure_flag():
    r = Report("x", 1e-9)
    r.add("ok", 0.0)
    assert r.passed
    r.add("bad", 1e-3)
    assert not r.passed and r.max_residual == 1e-3


def test_axioms_on_single_lattice():
    rep = verify_axioms([[[2, 1], [1, -4]]])
    assert rep.passed and rep.max_residual < 1e-9
