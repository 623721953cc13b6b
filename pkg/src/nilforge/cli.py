"""Command line entry point: ``nilforge <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .coloring import DEFAULT_RADIUS, Coloring, alphabet_text
from .complex import CapacityError, build, dump
from .dol import dol_iterate, find_square_fast
from .presentation import DEFAULT_CAT2_EDGES, DeterminismError, Presentation, build_presentation
from .rewrite import Zero, reduces_to_zero


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit(reports, args) -> int:
    lines = [r.line() for r in reports]
    _write("\n".join(lines) + "\n", getattr(args, "out", None))
    wdir = getattr(args, "witness_dir", None)
    if wdir:
        Path(wdir).mkdir(parents=True, exist_ok=True)
        for i, r in enumerate(reports):
            if r.verdict != harness.PASS:
                Path(wdir, f"{i:02d}-{r.check}.witness.json").write_text(
                    json.dumps({"scope": r.scope, "witnesses": r.witnesses}, indent=1, default=str) + "\n")
    return harness.exit_code(reports)


def cmd_build(args) -> int:
    _write(dump(build(args.level)), args.out)
    return 0


def cmd_alphabet(args) -> int:
    _write(alphabet_text(Coloring(build(args.level), args.env_radius)), args.out)
    return 0


def cmd_presentation(args) -> int:
    cx = build(args.level)
    if args.auto_radius:
        col, _, _ = harness.select_radius(cx, args.env_radius)
    else:
        col = Coloring(cx, args.env_radius)
    try:
        pres = build_presentation(col, args.cat2_edges, strict=not args.lenient)
    except DeterminismError as exc:
        print(f"nilforge: {exc}", file=sys.stderr)
        return 1
    _write(pres.export(), args.out)
    return 0


def cmd_reduce(args) -> int:
    pres = Presentation.parse(Path(args.rels).read_text())
    word = tuple(Path(args.word).read_text().split())
    res = reduces_to_zero(word, pres, args.budget, args.strategy)
    verdict = type(res).__name__
    print(verdict)
    if args.trace and isinstance(res, Zero):
        Path(args.trace).write_text("".join(
            f"{s.rel} {s.pos} {int(s.forward)} {s.length}\n" for s in res.trace))
    return 0 if isinstance(res, Zero) else 2


def cmd_dol(args) -> int:
    w = dol_iterate(args.iterate)
    print(" ".join(w))
    if args.check_squares:
        sq = find_square_fast(w)
        print("square-free" if sq is None else "square: (" + " ".join(sq) + ")^2")
        return 0 if sq is None else 1
    return 0


def cmd_verify_structure(args) -> int:
    if args.dump:
        return _emit([harness.verify_dump(Path(args.dump).read_text())], args)
    return _emit([harness.verify_structure(args.level)], args)


def cmd_verify_determinism(args) -> int:
    return _emit([harness.verify_determinism(args.level, args.env_radius, not args.fixed_radius)], args)


def cmd_nil_check(args) -> int:
    return _emit([harness.nil_check(args.level, args.max_edges, args.budget, args.env_radius)], args)


def cmd_growth_census(args) -> int:
    per_level = None if args.all_macrotiles else 1
    return _emit([harness.growth_census(args.level, args.max_len, args.budget, args.env_radius, per_level)], args)


def cmd_report(args) -> int:
    return _emit(harness.full_report(args.level, args.budget), args)


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilforge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, level=3):
        s = sub.add_parser(name)
        s.set_defaults(fn=fn)
        s.add_argument("--level", type=int, default=level)
        s.add_argument("--out")
        return s

    add("build", cmd_build)
    s = add("alphabet", cmd_alphabet)
    s.add_argument("--env-radius", type=int, default=DEFAULT_RADIUS)
    s = add("presentation", cmd_presentation)
    s.add_argument("--cat2-edges", type=int, default=DEFAULT_CAT2_EDGES)
    s.add_argument("--env-radius", type=int, default=DEFAULT_RADIUS)
    s.add_argument("--auto-radius", action="store_true", help="raise the radius until determinism holds")
    s.add_argument("--lenient", action="store_true", help="emit tile flips even when determinism fails")

    s = sub.add_parser("reduce")
    s.set_defaults(fn=cmd_reduce)
    s.add_argument("--rels", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--budget", type=int, default=1_000_000)
    s.add_argument("--strategy", choices=("pipeline", "bfs"), default="pipeline")
    s.add_argument("--trace")

    s = sub.add_parser("dol")
    s.set_defaults(fn=cmd_dol)
    s.add_argument("--iterate", type=int, default=6)
    s.add_argument("--check-squares", action="store_true")

    s = add("verify-structure", cmd_verify_structure)
    s.add_argument("--dump", help="check a textual dump instead of building")
    s = add("verify-determinism", cmd_verify_determinism)
    s.add_argument("--env-radius", type=int, default=DEFAULT_RADIUS)
    s.add_argument("--fixed-radius", action="store_true")
    s = add("nil-check", cmd_nil_check, level=4)
    s.add_argument("--max-edges", type=int, default=4)
    s.add_argument("--budget", type=int, default=1_000_000)
    s.add_argument("--env-radius", type=int, default=DEFAULT_RADIUS)
    s = add("growth-census", cmd_growth_census, level=4)
    s.add_argument("--max-len", type=int, default=2)
    s.add_argument("--budget", type=int, default=2_000)
    s.add_argument("--env-radius", type=int, default=DEFAULT_RADIUS)
    s.add_argument("--all-macrotiles", action="store_true", help="every macrotile instead of one per level")
    s = add("report", cmd_report, level=4)
    s.add_argument("--budget", type=int, default=100_000)
    for name in ("verify-structure", "verify-determinism", "nil-check", "growth-census", "report"):
        sub.choices[name].add_argument("--witness-dir", help="write one witness file per non-PASS report")
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.fn(args)
    except CapacityError as exc:
        print(f"nilforge: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
