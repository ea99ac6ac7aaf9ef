"""Randomized and fixed-case verification suites with residual reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lattice import EvenLattice, milgram_check, validate_even_lattice
from .manifolds import Presentation, handle_slide, homology, kirby_stabilize
from .tqft import (DEFAULT_BUDGET, boundary_space, cylinder_exponent, cylinder_scalar,
                   glue_trace, partition, z_torsion_decomposition, z_surgery)
from .values import det_power
from .weil import McgWord, mapping_torus_trace, modular_data

DEFAULT_LATTICES = (
    [[2]],
    [[6]],
    [[2, 1], [1, 2]],
    [[2, 1], [1, 4]],
    [[2, 3], [3, -4]],
    [[0, 1], [1, 0]],
    [[-2, 1], [1, -2]],
)

# small lattices with |det K| <= 9 used for the Kirby suite
KIRBY_LATTICES = (
    [[2]],
    [[4]],
    [[8]],
    [[-2]],
    [[2, 1], [1, 2]],
    [[2, 1], [1, -2]],
    [[2, 1], [1, -4]],
    [[4, 1], [1, 2]],
    [[2, 0], [0, 2]],
    [[2, 1, 0], [1, 2, 1], [0, 1, 2]],
)


@dataclass
class Check:
    name: str
    residual: float
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "residual": self.residual, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    suite: str
    tolerance: float
    checks: list[Check] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def add(self, name: str, residual: float, detail: str = "") -> Check:
        c = Check(name, float(residual), bool(residual <= self.tolerance), detail)
        self.checks.append(c)
        return c

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "maxResidual": self.max_residual,
            "checks": [c.to_json() for c in self.checks],
            **self.extra,
        }


def random_linking(rng: np.random.Generator, m: int, bound: int = 4) -> list[list[int]]:
    a = rng.integers(-bound, bound + 1, size=(m, m))
    upper = np.triu(a)
    return (upper + np.triu(a, 1).T).tolist()


def random_kirby_move(rng: np.random.Generator, p: Presentation, order: int,
                      max_states: int) -> tuple[Presentation, str]:
    """One stabilization or handle slide; stabilizing stops once ``|G|^m`` would pass ``max_states``."""
    m = p.components
    can_slide = m >= 2
    can_stab = order ** (m + 1) <= max_states
    if can_stab and (not can_slide or rng.random() < 0.5):
        sign = int(rng.choice([1, -1]))
        return kirby_stabilize(p, sign), f"stab({sign:+d})"
    if not can_slide:
        raise RuntimeError("no admissible move")
    i, j = rng.choice(m, size=2, replace=False)
    sign = int(rng.choice([1, -1]))
    return handle_slide(p, int(i), int(j), sign), f"slide({i},{j},{sign:+d})"


def verify_kirby(trials: int = 100, seed: int = 0, lattices=KIRBY_LATTICES, moves: int = 5,
                 tol: float = 1e-9, budget: int = DEFAULT_BUDGET,
                 max_states: int = 200_000) -> Report:
    rng = np.random.default_rng(seed)
    lats = [validate_even_lattice(g) for g in lattices]
    rep = Report("kirby", tol)
    for t in range(trials):
        k = lats[int(rng.integers(len(lats)))]
        order = k.abs_det
        m = int(rng.integers(1, 4))
        p = Presentation.surgery(random_linking(rng, m))
        z0 = z_surgery(p, k, budget).amplitude
        worst, path = 0.0, []
        for _ in range(moves):
            p, label = random_kirby_move(rng, p, order, max_states)
            path.append(label)
            worst = max(worst, abs(z_surgery(p, k, budget).amplitude - z0))
        rep.add(f"trial {t}", worst, f"K={k.to_list()} moves={' '.join(path)}")
    rep.extra["trials"] = trials
    rep.extra["seed"] = seed
    return rep


def _closed_checks(rep: Report, k: EvenLattice):
    d = k.abs_det
    tag = str(k.to_list())
    s3 = det_power(d, Fraction(-1, 2))
    z_s3s = z_surgery(Presentation.surgery([]), k).amplitude
    rep.add(f"Z(S3) {tag}", abs(z_s3s - s3))
    rep.add(f"Z(S2xS1) {tag}", abs(z_surgery(Presentation.surgery([[0]]), k).amplitude - 1))
    t3 = z_surgery(Presentation.surgery([[0] * 3] * 3), k).amplitude
    rep.add(f"Z(T3) surgery {tag}", abs(t3 - d))
    md = modular_data(k)
    t3_trace = mapping_torus_trace(md, McgWord(("T", "Ti"))).amplitude
    rep.add(f"Z(T3) genus-one trace {tag}", abs(t3_trace - d))
    for p in [Presentation.lens(2, 1), Presentation.lens(5, 2)]:
        s = Presentation.connected_sum([p, p])
        lhs = partition(s, k).amplitude * s3
        rhs = partition(p, k).amplitude ** 2
        rep.add(f"multiplicativity {p.describe()} # itself {tag}", abs(lhs - rhs))
    for fam in (Presentation.standard("S3"), Presentation.standard("S2xS1"),
                Presentation.standard("T3"), Presentation.standard("SigmaXS1", 2),
                Presentation.lens(3, 1), Presentation.lens(7, 3)):
        z = partition(fam, k)
        rep.add(f"exponent {fam.describe()} {tag}",
                float(abs(z.det_k_exponent - homology(fam).m_x)))


def verify_axioms(lattices=DEFAULT_LATTICES, tol: float = 1e-9, seed: int = 0,
                  budget: int = DEFAULT_BUDGET) -> Report:
    rep = Report("axioms", tol)
    lats = [validate_even_lattice(g) for g in lattices]
    rng = np.random.default_rng(seed)
    for k in lats:
        tag = str(k.to_list())
        rep.add(f"Milgram {tag}", milgram_check(k))
        md = modular_data(k)
        rep.add(f"Weil anomaly {tag}", abs(md.measured_anomaly() - md.anomaly.value()))
        d = k.abs_det
        for g in range(4):
            b = boundary_space(g, k)
            rep.add(f"dim H(g={g}) {tag}", abs(b.dim - d ** g))
            rep.add(f"cylinder g={g} {tag}",
                    abs(cylinder_scalar(g, k) - det_power(d, cylinder_exponent(g))))
            glued = glue_trace(b, b.cylinder_operator())
            rep.add(f"glue cylinder g={g} {tag}", abs(glued.amplitude - d ** g))
        _closed_checks(rep, k)
        for p in range(2, 6):
            r = z_torsion_decomposition(Presentation.lens(p, 1), k, tol, budget)
            rep.add(f"decomposition L({p},1) {tag}", r.residual)
        # random congruence invariance of |Z|
        lm = [[2, 1], [1, -3]]
        base = abs(z_surgery(Presentation.surgery(lm), k).amplitude)
        p = Presentation.surgery(lm)
        for _ in range(3):
            p = handle_slide(p, 0, 1, int(rng.choice([1, -1])))
        rep.add(f"congruence {tag}", abs(abs(z_surgery(p, k).amplitude) - base))
    return rep

