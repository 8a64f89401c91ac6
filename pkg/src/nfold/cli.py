"""Command-line front end.

Exit codes: 0 all checks pass, 1 a checked invariant fails (the report
carries a witness), 2 bad input, 3 a capacity bound was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .errors import CapacityError, ComposabilityError, MoveError, NFoldError, ValidationError

EXIT_OK, EXIT_FALSIFIED, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Run:
    """Collects input digests while a command reads its files."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: dict[str, str] = {}

    def read_json(self, path: str) -> Any:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self.inputs[Path(path).name] = hashlib.sha256(raw).hexdigest()
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}") from None

    def group(self, spec: str):
        from .groups import load_group

        if spec.endswith(".json"):
            return load_group(self.read_json(spec))
        return load_group(spec)


def _int_cap(args, default: int) -> int:
    if args.cap is None:
        return default
    try:
        value = int(args.cap)
    except ValueError:
        raise InputError(f"--cap must be an integer for {args.command}, got {args.cap!r}") from None
    if value <= 0:
        raise InputError("--cap must be positive")
    return value


def _bidegree(text: str) -> tuple[int, int]:
    try:
        p, q = (int(s) for s in text.split(","))
    except ValueError:
        raise InputError(f"bidegree must look like 3,3, got {text!r}") from None
    if p < 0 or q < 0:
        raise InputError("bidegree entries must be non-negative")
    return p, q


# -- commands -------------------------------------------------------------------------------------


def cmd_coherence(run: _Run) -> tuple[bool, dict]:
    from .diagrams import DEFAULT_MAX_TREES, parse_grid
    from .rewrite import coherence_report

    args = run.args
    grid = parse_grid(args.grid)
    max_trees = args.max_trees or _int_cap(args, DEFAULT_MAX_TREES)
    report, cx = coherence_report(grid, max_trees)
    out = report.to_json()
    if args.emit_complex:
        Path(args.emit_complex).write_text(json.dumps(cx.to_json(), sort_keys=True, indent=1) + "\n")
        out["complex_written"] = Path(args.emit_complex).name
    return report.ok, out


def cmd_axioms(run: _Run) -> tuple[bool, dict]:
    from .spans import SHAPES, check_pseudo_axioms, random_instance
    from .diagrams import GluingDiagram

    args = run.args
    extents, tag = SHAPES[args.shape]
    if args.core_size < 1:
        raise InputError("--core-size must be at least 1")
    seed = args.seed if args.seed is not None else 0
    inst = random_instance(GluingDiagram(extents), seed, core_size=args.core_size)
    report = check_pseudo_axioms(inst)
    out = report.to_json()
    out["shape"] = args.shape
    out["cell"] = tag
    return report.ok, out


def _load_nerve_input(run: _Run, data: dict):
    from .strict import FiniteDoubleCategory

    if not isinstance(data, dict):
        raise InputError("nerve-check input must be a JSON object")
    mutation = None
    if "double_category" in data:
        mutation = data.get("delete_simplex")
        data = data["double_category"]
    return FiniteDoubleCategory.from_json(data), mutation


def cmd_nerve_check(run: _Run) -> tuple[bool, dict]:
    from .nerve import check_simplicial_identities, check_unique_inner_horns, delete_simplex, nerve
    from .strict import check_strict_axioms

    args = run.args
    C, mutation = _load_nerve_input(run, run.read_json(args.input))
    cap = _bidegree(args.cap) if args.cap else (3, 3)
    strict = check_strict_axioms(C)
    N = nerve(C, cap)
    out: dict = {"name": C.name, "cap": list(cap), "strict": strict.to_json(), "simplices": N.count()}
    if mutation is not None:
        try:
            pq = tuple(int(v) for v in mutation["bidegree"])
            rank = int(mutation["rank"])
        except (KeyError, TypeError, ValueError):
            raise InputError("delete_simplex needs a bidegree pair and an integer rank") from None
        if pq not in N.simplices:
            raise InputError(f"bidegree {list(pq)} is outside the cap {list(cap)}")
        degen = N.degenerate()
        ordered = [x for x in N.simplices[pq] if x not in degen] + [x for x in N.simplices[pq] if x in degen]
        if not 0 <= rank < len(ordered):
            raise InputError(f"rank {rank} is out of range; bidegree {list(pq)} has {len(ordered)} simplices")
        N = delete_simplex(N, pq, ordered[rank])
        out["deleted"] = {"bidegree": list(pq), "rank": rank, "simplex": repr(ordered[rank])[:400]}
    identities = check_simplicial_identities(N)
    horns = check_unique_inner_horns(N)
    out["identities"] = identities.to_json()
    out["horns"] = horns.to_json()
    witness = next((r.witness for r in horns.results if r.witness), None)
    out["witness"] = witness
    return strict.ok and horns.ok, out


def cmd_dw(run: _Run) -> tuple[bool, dict]:
    from .cobordism import DEFAULT_FIELD_CAP, CobPresentation, dw_invariant, flat_fields, gauge_classes

    args = run.args
    M = CobPresentation.from_json(run.read_json(args.cobordism))
    G = run.group(args.group)
    fields = flat_fields(M, G, _int_cap(args, DEFAULT_FIELD_CAP))
    z = dw_invariant(M, G)
    out = {
        "cobordism": M.name or Path(args.cobordism).stem,
        "group": G.name,
        "group_order": G.order,
        "vertices": M.n_vertices,
        "flat_fields": len(fields),
        "gauge_classes": len(gauge_classes(M, G, fields)),
        "Z": str(z),
    }
    return True, out


def cmd_dw_compose(run: _Run) -> tuple[bool, dict]:
    from .cobordism import CobPresentation, check_functor_coherence, compose_cobordisms, dw_invariant

    args = run.args
    M = CobPresentation.from_json(run.read_json(args.left))
    N = CobPresentation.from_json(run.read_json(args.right))
    G = run.group(args.group)
    K, _, _ = compose_cobordisms(M, N, args.dir)
    out: dict = {
        "group": G.name,
        "dir": args.dir,
        "composite": K.to_json(),
        "Z": {"left": str(dw_invariant(M, G)), "right": str(dw_invariant(N, G)), "composite": str(dw_invariant(K, G))},
    }
    ok = True
    if args.check_coherence:
        rep = check_functor_coherence(M, N, args.dir, G)
        out["coherence"] = rep.to_json()
        out["witness"] = rep.witness
        ok = rep.ok
    return ok, out


def cmd_report(run: _Run) -> tuple[bool, dict]:
    """Quick end-to-end sweep over all engines at small sizes."""
    from .cobordism import check_functor_coherence, cylinder, dw_invariant, interval, sphere, surface, torus
    from .diagrams import GluingDiagram
    from .groups import builtin_group
    from .nerve import check_unique_inner_horns, nerve
    from .rewrite import coherence_report
    from .spans import SHAPES, check_pseudo_axioms, random_instance
    from .strict import corpus

    seed = run.args.seed if run.args.seed is not None else 0
    sections: dict[str, dict] = {}
    grids = [(2,), (3,), (4,), (5,), (2, 2), (2, 3), (3, 3), (2, 2, 2)]
    sections["coherence"] = {}
    for g in grids:
        rep, _ = coherence_report(GluingDiagram(g))
        sections["coherence"]["x".join(map(str, g))] = rep.ok
    sections["axioms"] = {}
    for shape, (extents, _) in sorted(SHAPES.items()):
        sections["axioms"][shape] = all(
            check_pseudo_axioms(random_instance(GluingDiagram(extents), seed + i, core_size=2)).ok for i in range(3)
        )
    S3, Z2 = builtin_group("S3"), builtin_group("Z2")
    dw = {
        "sphere/Z2": str(dw_invariant(sphere(), Z2)),
        "torus/S3": str(dw_invariant(torus(), S3)),
        "genus2/Z2": str(dw_invariant(surface(2), Z2)),
    }
    dw_ok = dw == {"sphere/Z2": "1/2", "torus/S3": "3", "genus2/Z2": "8"}
    coh = all(
        check_functor_coherence(M(), M(), 1, builtin_group(name)).ok
        for M in (cylinder, interval)
        for name in ("Z2", "Z3", "S3")
    )
    sections["dw"] = {"values": dw, "expected_values": dw_ok, "functor_coherence": coh}
    sections["nerve"] = {C.name: check_unique_inner_horns(nerve(C, (2, 2))).ok for C in corpus()}
    ok = (
        all(sections["coherence"].values())
        and all(sections["axioms"].values())
        and dw_ok
        and coh
        and all(sections["nerve"].values())
    )
    return ok, sections


COMMANDS: dict[str, Callable[[_Run], tuple[bool, dict]]] = {
    "coherence": cmd_coherence,
    "axioms": cmd_axioms,
    "nerve-check": cmd_nerve_check,
    "dw": cmd_dw,
    "dw-compose": cmd_dw_compose,
    "report": cmd_report,
}


# -- parsing and output ------------------------------------------------------------------------------


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--seed", type=int, **({"default": None} | d), help="seed for random instances")
    p.add_argument(
        "--cap",
        **({"default": None} | d),
        help="capacity bound: max trees (coherence), max candidate fields (dw), bidegree p,q (nerve-check)",
    )
    p.add_argument("--format", choices=("json", "text"), **({"default": "json"} | d))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nfold", description="Coherence, span, nerve and gauge-theory checks.")
    parser.add_argument("--version", action="version", version=f"nfold {__version__}")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coherence", help="rewrite graph, critical pairs and H1 for a grid")
    p.add_argument("--grid", required=True, help="extents such as 2x3")
    p.add_argument("--max-trees", type=int, default=None)
    p.add_argument("--emit-complex", metavar="PATH", default=None)
    _global_options(p, suppress=True)

    p = sub.add_parser("axioms", help="pointwise pentagon and hexagon checks on a random span grid")
    p.add_argument("--shape", required=True, choices=("pentagon", "hexagon1", "hexagon2"))
    p.add_argument("--core-size", type=int, default=3)
    _global_options(p, suppress=True)

    p = sub.add_parser("nerve-check", help="unique inner horn filling for a double category nerve")
    p.add_argument("--input", required=True)
    _global_options(p, suppress=True)

    p = sub.add_parser("dw", help="Dijkgraaf-Witten invariant of a presented cobordism")
    p.add_argument("--cobordism", required=True)
    p.add_argument("--group", required=True, help="builtin name or group JSON file")
    _global_options(p, suppress=True)

    p = sub.add_parser("dw-compose", help="glue two cobordisms and compare gauge classes")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--dir", type=int, default=1)
    p.add_argument("--group", default="Z2")
    p.add_argument("--check-coherence", action="store_true")
    _global_options(p, suppress=True)

    p = sub.add_parser("report", help="quick sweep over every engine")
    _global_options(p, suppress=True)
    return parser


def _render_text(obj: Any, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            lines += _render_text(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return lines
    if isinstance(obj, list) and len(obj) > 8:
        return [f"{prefix}: [{len(obj)} items]"]
    return [f"{prefix}: {json.dumps(obj, sort_keys=True)}"]


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "text":
        stream.write("\n".join(_render_text(report)) + "\n")
    else:
        stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def _normalize_argv(argv: list[str]) -> list[str]:
    # "dw compose ..." is an alias of "dw-compose ..."
    for i, a in enumerate(argv):
        if not a.startswith("-"):
            if a == "dw" and i + 1 < len(argv) and argv[i + 1] == "compose":
                return argv[:i] + ["dw-compose"] + argv[i + 2 :]
            break
    return argv


def run(argv: list[str] | None = None, stream=None) -> int:
    argv = _normalize_argv(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    ctx = _Run(args)
    report: dict = {"command": args.command, "version": __version__}
    t0 = time.perf_counter()
    try:
        ok, body = COMMANDS[args.command](ctx)
        report["result"] = body
        report["status"] = "ok" if ok else "falsified"
        code = EXIT_OK if ok else EXIT_FALSIFIED
    except CapacityError as exc:
        report["status"] = "capacity"
        report["error"] = {"type": "CapacityError", "message": str(exc)}
        code = EXIT_CAPACITY
    except (InputError, ValidationError, ComposabilityError, MoveError, NFoldError, KeyError) as exc:
        report["status"] = "input-error"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INPUT
    report["inputs"] = dict(sorted(ctx.inputs.items()))
    if args.format == "text":
        report["elapsed_s"] = round(time.perf_counter() - t0, 3)
    emit(report, args.format, stream)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
