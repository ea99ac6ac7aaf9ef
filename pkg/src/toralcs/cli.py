"""Command-line front end: JSON in, JSON out.

Exit status is 0 on success, 1 when a verification residual exceeds the
tolerance and 2 on malformed input.  Nothing is written to stdout on
failure paths other than the verification report itself.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import ToralError
from .gaussian import fresnel_factor
from .lattice import EvenLattice, discriminant_group, validate_even_lattice
from .manifolds import FAMILIES, Presentation, homology
from .tqft import DEFAULT_BUDGET, partition, z_torsion_decomposition
from .verify import DEFAULT_LATTICES, verify_axioms, verify_kirby
from .weil import McgWord, mapping_torus_trace, modular_data

COMMANDS = ("lattice-info", "gauss-fresnel", "manifold-invariants", "tqft-partition",
            "tqft-weil", "verify-kirby", "verify-axioms")


class InputError(Exception):
    """Malformed input; carries a path-qualified diagnostic."""


@dataclass
class RunConfig:
    command: str
    lattice: str | None = None
    manifold: str | None = None
    matrix: str | None = None
    word: str | None = None
    trials: int = 100
    seed: int = 0
    tolerance: float = 1e-9
    budget: int = DEFAULT_BUDGET
    decompose: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if not self.tolerance > 0:
            raise InputError(f"--tolerance must be positive, got {self.tolerance}")
        if self.budget <= 0:
            raise InputError(f"--budget must be positive, got {self.budget}")
        if self.trials < 0:
            raise InputError(f"--trials must be nonnegative, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError(f"--seed must fit in 64 bits, got {self.seed}")


# --- JSON output -------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x} in output")
    s = f"{x:.17g}"
    if all(c not in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --- input parsing -----------------------------------------------------

def _load_json(source: str, what: str):
    """Inline JSON text, or a path to a JSON file."""
    text = source
    p = Path(source)
    if not source.lstrip().startswith(("[", "{")):
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"{what}: cannot read {source}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _int_matrix(data, where: str) -> list[list[int]]:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError(f"{where}: expected a list of rows")
    out = []
    for i, row in enumerate(data):
        if len(row) != len(data):
            raise InputError(f"{where}[{i}]: row has {len(row)} entries, expected {len(data)}")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or x != int(x):
                raise InputError(f"{where}[{i}][{j}]: expected an integer, got {x!r}")
        out.append([int(x) for x in row])
    return out


def parse_lattice(data, where: str = "lattice") -> EvenLattice:
    if isinstance(data, dict):
        if "gram" not in data:
            raise InputError(f"{where}: missing field 'gram'")
        data, where = data["gram"], f"{where}.gram"
    gram = _int_matrix(data, where)
    try:
        return validate_even_lattice(gram)
    except ToralError as exc:
        raise InputError(f"{where}: {exc}") from exc


def parse_manifold(data, where: str = "manifold") -> Presentation:
    if not isinstance(data, dict) or len(data) != 1:
        raise InputError(f"{where}: expected an object with a single key 'surgery' or 'standard'")
    (kind, body), = data.items()
    if not isinstance(body, dict):
        raise InputError(f"{where}.{kind}: expected an object")
    try:
        if kind == "surgery":
            if "linking" not in body:
                raise InputError(f"{where}.surgery: missing field 'linking'")
            lm = body["linking"]
            return Presentation.surgery(_int_matrix(lm, f"{where}.surgery.linking") if lm else [])
        if kind == "standard":
            fam = body.get("family")
            if fam not in FAMILIES:
                raise InputError(f"{where}.standard.family: expected one of {', '.join(FAMILIES)}, got {fam!r}")
            if fam == "Lens":
                return Presentation.lens(_req_int(body, "p", where), _req_int(body, "q", where))
            if fam == "SigmaXS1":
                return Presentation.standard(fam, _req_int(body, "g", where))
            if fam == "ConnectedSum":
                parts = body.get("parts")
                if not isinstance(parts, list) or not parts:
                    raise InputError(f"{where}.standard.parts: expected a nonempty list")
                return Presentation.connected_sum(
                    [parse_manifold(x, f"{where}.standard.parts[{i}]") for i, x in enumerate(parts)])
            return Presentation.standard(fam)
    except ToralError as exc:
        raise InputError(f"{where}: {exc}") from exc
    raise InputError(f"{where}: unknown key {kind!r}; expected 'surgery' or 'standard'")


def _req_int(body: dict, key: str, where: str) -> int:
    x = body.get(key)
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}.standard.{key}: expected an integer, got {x!r}")
    return x


def _need(value, flag: str):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


# --- commands ----------------------------------------------------------

def _lattice_info(cfg: RunConfig) -> tuple[dict, bool]:
    k = parse_lattice(_load_json(_need(cfg.lattice, "--lattice"), "--lattice"))
    g = discriminant_group(k)
    return {
        "rank": k.rank,
        "det": k.det,
        "signature": k.signature,
        "discriminant_order": g.order,
        "divisors": list(g.divisors),
    }, True


def _gauss_fresnel(cfg: RunConfig) -> tuple[dict, bool]:
    data = _load_json(_need(cfg.matrix, "--matrix"), "--matrix")
    if isinstance(data, dict):
        data = data.get("matrix", data.get("gram"))
    if not isinstance(data, list) or not all(isinstance(r, list) and len(r) == len(data) for r in data):
        raise InputError("--matrix: expected a square list of rows")
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise InputError(f"--matrix[{i}][{j}]: expected a number, got {x!r}")
    try:
        f = fresnel_factor(data)
    except (ToralError, ValueError) as exc:
        raise InputError(f"--matrix: {exc}") from exc
    z = f.value
    return {"re": z.real, "im": z.imag, "sgn": f.signature, "logAbsDet": f.log_abs_det}, True


def _manifold_invariants(cfg: RunConfig) -> tuple[dict, bool]:
    p = parse_manifold(_load_json(_need(cfg.manifold, "--manifold"), "--manifold"))
    h = homology(p)
    return {
        "presentation": p.describe(),
        "b1": h.b1,
        "torsion": list(h.torsion_divisors),
        "h1Order": h.h1_order,
        "mX": float(h.m_x),
    }, True


def _tqft_partition(cfg: RunConfig) -> tuple[dict, bool]:
    k = parse_lattice(_load_json(_need(cfg.lattice, "--lattice"), "--lattice"))
    p = parse_manifold(_load_json(_need(cfg.manifold, "--manifold"), "--manifold"))
    z = partition(p, k, cfg.budget)
    out = z.to_json()
    if cfg.decompose:
        rep = z_torsion_decomposition(p, k, cfg.tolerance, cfg.budget)
        d = rep.to_json()
        out["classes"] = d.pop("classes")
        out["decomposition"] = d
    return out, True


def _tqft_weil(cfg: RunConfig) -> tuple[dict, bool]:
    k = parse_lattice(_load_json(_need(cfg.lattice, "--lattice"), "--lattice"))
    try:
        w = McgWord.parse(_need(cfg.word, "--word"))
    except ValueError as exc:
        raise InputError(f"--word: {exc}") from exc
    md = modular_data(k)
    z = mapping_torus_trace(md, w)
    return {
        "word": str(w),
        "traceRe": z.amplitude.real,
        "traceIm": z.amplitude.imag,
        "magnitude": z.magnitude,
        "anomaly": str(md.anomaly),
        "anomalyRe": md.anomaly.value().real,
        "anomalyIm": md.anomaly.value().imag,
        "detKExponent": float(z.det_k_exponent),
    }, True


def _verify_kirby(cfg: RunConfig) -> tuple[dict, bool]:
    rep = verify_kirby(cfg.trials, cfg.seed, tol=cfg.tolerance, budget=cfg.budget)
    return rep.to_json(), rep.passed


def _verify_axioms(cfg: RunConfig) -> tuple[dict, bool]:
    lats = DEFAULT_LATTICES
    if cfg.lattice is not None:
        lats = [parse_lattice(_load_json(cfg.lattice, "--lattice")).to_list()]
    rep = verify_axioms(lats, cfg.tolerance, cfg.seed, cfg.budget)
    return rep.to_json(), rep.passed


_DISPATCH = {
    "lattice-info": _lattice_info,
    "gauss-fresnel": _gauss_fresnel,
    "manifold-invariants": _manifold_invariants,
    "tqft-partition": _tqft_partition,
    "tqft-weil": _tqft_weil,
    "verify-kirby": _verify_kirby,
    "verify-axioms": _verify_axioms,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        payload, ok = _DISPATCH[cfg.command](cfg)
        text = dumps(payload)
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (ToralError, ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 2
    out.write(text + "\n")
    return 0 if ok else 1


# --- argument parsing --------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toralcs", description="Abelian Chern-Simons invariants of even lattices.")
    groups = ap.add_subparsers(dest="group", required=True)

    def common(p, *flags):
        if "lattice" in flags:
            p.add_argument("--lattice", help="lattice JSON file or inline JSON")
        if "manifold" in flags:
            p.add_argument("--manifold", help="manifold JSON file or inline JSON")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    lat = groups.add_parser("lattice").add_subparsers(dest="action", required=True)
    common(lat.add_parser("info"), "lattice")

    gauss = groups.add_parser("gauss").add_subparsers(dest="action", required=True)
    fr = gauss.add_parser("fresnel")
    fr.add_argument("--matrix", required=True, help="symmetric matrix as JSON file or inline JSON")
    common(fr)

    man = groups.add_parser("manifold").add_subparsers(dest="action", required=True)
    common(man.add_parser("invariants"), "manifold")

    tq = groups.add_parser("tqft").add_subparsers(dest="action", required=True)
    part = tq.add_parser("partition")
    common(part, "lattice", "manifold")
    part.add_argument("--decompose", action="store_true")
    weil = tq.add_parser("weil")
    common(weil, "lattice")
    weil.add_argument("--word", required=True)

    ver = groups.add_parser("verify").add_subparsers(dest="action", required=True)
    kb = ver.add_parser("kirby")
    common(kb)
    kb.add_argument("--trials", type=int, default=100)
    common(ver.add_parser("axioms"), "lattice")
    return ap


def config_from_args(argv: list[str]) -> RunConfig:
    # hyphenated single-word commands are accepted too
    if argv and argv[0] in COMMANDS:
        argv = argv[0].split("-", 1) + argv[1:]
    ns = build_parser().parse_args(argv)
    return RunConfig(
        command=f"{ns.group}-{ns.action}",
        lattice=getattr(ns, "lattice", None),
        manifold=getattr(ns, "manifold", None),
        matrix=getattr(ns, "matrix", None),
        word=getattr(ns, "word", None),
        trials=getattr(ns, "trials", 100),
        seed=ns.seed,
        tolerance=ns.tolerance,
        budget=ns.budget,
        decompose=getattr(ns, "decompose", False),
    )


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
