"""Command line entry point: ``hypcsp <command> ...``.

Exit codes: 0 ok, 2 bad input, 3 no solution to sample, 4 internal error.
Machine-readable output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys

from .. import minesweeper, pipeline
from ..engine import Unsatisfiable
from ..tessellation import TilingSpec, generate_tiling, validate_embedding
from ..treedec import build_decomposition, validate_decomposition
from . import formats
from .render import RenderStyle, render_svg

EXIT_OK, EXIT_INPUT, EXIT_UNSAT, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(Exception):
    pass


def _parse_ids(text):
    if not text:
        return frozenset()
    try:
        return frozenset(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise InputError(f"bad id list {text!r}") from exc


def _load(path):
    try:
        return formats.read(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except formats.FormatError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _problem(f: formats.InstanceFile):
    """The HLCSP to solve and the colour names to print."""
    if (f.hlcsp is None) == (f.board is None):
        raise InputError('exactly one of "hlcsp" or "board" must be present')
    if f.board is not None:
        return minesweeper.encode(f.board), minesweeper.COLORS.names
    return f.hlcsp, f.hlcsp.colors.names


def _emit(text, out=None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    try:
        spec = TilingSpec(args.p, args.q, args.rings, _parse_ids(args.remove))
        g = generate_tiling(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(formats.dumps(formats.InstanceFile(g)), args.out)


def cmd_validate(args):
    f = _load(args.infile)
    rep = validate_embedding(f.graph)
    print(f"embedding: {rep.summary()}")
    td = build_decomposition(f.graph)
    drep = validate_decomposition(f.graph, td)
    print(f"decomposition: width={td.width} {drep.summary()}")


def cmd_solve(args):
    inst, names = _problem(_load(args.infile))
    sol = pipeline.witness(pipeline.prepare(inst))
    if sol is None:
        print("UNSAT")
        return
    print("SAT")
    sys.stdout.write(formats.coloring_json(sol, names))


def cmd_count(args):
    inst, _ = _problem(_load(args.infile))
    print(pipeline.count(pipeline.prepare(inst)))


def cmd_sample(args):
    inst, names = _problem(_load(args.infile))
    prep = pipeline.prepare(inst)
    try:
        sol = pipeline.sample(prep, args.seed)
    except Unsatisfiable:
        print("instance is unsatisfiable; nothing to sample", file=sys.stderr)
        return EXIT_UNSAT
    _emit(formats.coloring_json(sol, names), args.out)


def cmd_deduce(args):
    f = _load(args.infile)
    if f.board is None:
        raise InputError("deduce needs a board")
    res = minesweeper.deduce(f.board)
    print(f"count {res.count}")
    if res.status is None:
        print("INCONSISTENT")
        return
    for v in sorted(res.status):
        print(f"{v} {res.status[v]}")


def cmd_widths(args):
    if args.max_rings < 0:
        raise InputError("--max-rings must be non-negative")
    for rings in range(args.max_rings + 1):
        try:
            g = generate_tiling(TilingSpec(args.p, args.q, rings))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        print(g.n, build_decomposition(g).width)


def cmd_render(args):
    f = _load(args.infile)
    overlay = None
    fill = "color"
    if f.board is not None:
        overlay, fill = f.board, "clue"
    if args.seed is not None:
        inst, _ = _problem(f)
        try:
            sol = pipeline.sample(pipeline.prepare(inst), args.seed)
        except Unsatisfiable:
            print("instance is unsatisfiable; nothing to sample", file=sys.stderr)
            return EXIT_UNSAT
        if f.board is not None:
            overlay, fill = (f.board, sol), "solution"
        else:
            overlay = sol
    style = RenderStyle(fill=fill, radius_px=args.radius, labels=args.labels)
    _emit(render_svg(f.graph, overlay, style), args.out)


def build_parser():
    ap = argparse.ArgumentParser(prog="hypcsp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a {p,q} tiling instance")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--rings", type=int, required=True)
    p.add_argument("--remove", default="", help="comma-separated tile ids to delete")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    for name, func, helptext in [
        ("validate", cmd_validate, "check embedding and decomposition"),
        ("solve", cmd_solve, "decide satisfiability and print a witness"),
        ("count", cmd_count, "print the exact number of solutions"),
        ("deduce", cmd_deduce, "classify unknown board cells"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="infile", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("sample", help="print a uniformly random solution")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("widths", help="decomposition width for rings 0..R")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-rings", type=int, required=True)
    p.set_defaults(func=cmd_widths)

    p = sub.add_parser("render", help="draw the instance (optionally a sample) as SVG")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--radius", type=float, default=400.0)
    p.add_argument("--labels", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
