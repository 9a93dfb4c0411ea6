"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import fixtures as fx
from .fan import Fan, FanError, is_complete, is_purely_top, is_simplicial
from .fanio import parse_fan, parse_plf, serialize_fan
from .mes import (TruncationWarning, build_mes, default_cutoff, dump_atlas, global_ih_dims,
                  is_equivariantly_formal, local_poincare, torsion_witness, verify_axioms)
from .sections import lift_fan_by_plf, mayer_vietoris_coker, sr_hilbert, sr_quotient_hilbert


class InputError(Exception):
    pass


class Report:
    """Collects output lines in either table or key=value form."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []

    def item(self, key: str, value, label: str | None = None) -> None:
        if isinstance(value, bool):
            value = "yes" if value else "no"
        elif isinstance(value, (list, tuple)):
            value = " ".join(str(x) for x in value)
        if self.fmt == "kv":
            self.lines.append(f"{key}={value}")
        else:
            self.lines.append(f"{label or key}: {value}")

    def raw(self, text: str) -> None:
        self.lines.extend(text.rstrip("\n").split("\n"))

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load_fan(path: str) -> Fan:
    return parse_fan(_read(path))


def _cutoff(args, f: Fan) -> int:
    c = default_cutoff(f) if args.cutoff is None else args.cutoff
    if c <= 0 or c % 2:
        raise InputError(f"cutoff must be a positive even integer, got {c}")
    return c


def _labels(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"cone labels must be integers: {text!r}") from None


def cmd_check(args, rep: Report) -> int:
    f = _load_fan(args.fan)
    rep.item("ambient_dim", f.ambient_dim, "ambient dimension")
    rep.item("rays", len(f.rays))
    rep.item("f_vector", f.f_vector(), "f-vector")
    rep.item("maximal_cones", len(f.maximal), "maximal cones")
    preds = [("complete", is_complete(f)), ("simplicial", is_simplicial(f)),
             ("purely_top", is_purely_top(f))]
    if rep.fmt == "kv":
        for k, v in preds:
            rep.item(k, v)
    else:
        rep.lines.append(", ".join(f"{k.replace('_', '-')}: {_yes(v)}" for k, v in preds))
    return 0


def cmd_mes(args, rep: Report) -> int:
    f = _load_fan(args.fan)
    atlas = build_mes(f, _cutoff(args, f))
    if rep.fmt == "table":
        rep.raw(dump_atlas(atlas))
    for c in range(len(f.cones)):
        degs = " ".join(str(d) for d in atlas.basis_degrees[c])
        if rep.fmt == "kv":
            rep.item(f"cone.{c}.degrees", degs)
            rep.item(f"cone.{c}.local", local_poincare(atlas, c))
        else:
            rep.lines.append(f"cone {c} degrees: {degs} local: {local_poincare(atlas, c)}")
    status = 0
    if args.verify:
        result = verify_axioms(atlas, f)
        if rep.fmt == "kv":
            rep.item("axioms", "pass" if result.passed else "fail")
            for c in result.failures():
                rep.item(f"failure.{c.name}", c.detail)
        else:
            rep.raw(result.summary())
        status = 0 if result.passed else 1
    return status


def cmd_betti(args, rep: Report) -> int:
    f = _load_fan(args.fan)
    cutoff = _cutoff(args, f)
    atlas = build_mes(f, cutoff)
    report = is_equivariantly_formal(atlas, f, cutoff)
    dims = global_ih_dims(atlas, f, cutoff)
    if report.formal:
        rep.item("ih", dims, "ih")
    else:
        rep.item("generator_dims", dims, "generator dims (not formal, edge-image dims only)")
    if rep.fmt == "kv":
        rep.item("formal", report.formal)
        rep.item("formal_through_degree", cutoff)
        if report.first_failure is not None:
            rep.item("first_failure", report.first_failure)
    else:
        rep.lines.append(report.summary())
    w = torsion_witness(atlas, f)
    rep.item("torsion", w.describe(f) if w else "none")
    return 0


def cmd_sr(args, rep: Report) -> int:
    f = _load_fan(args.fan)
    cutoff = _cutoff(args, f)
    rep.item("sr_hilbert", sr_hilbert(f, cutoff), "sr-hilbert")
    rep.item("sr_quotient", sr_quotient_hilbert(f, cutoff), "sr-quotient")
    return 0


def cmd_mv(args, rep: Report) -> int:
    f = _load_fan(args.fan)
    left = f.label_subfan(_labels(args.left))
    right = f.label_subfan(_labels(args.right))
    if args.degree is None:
        degrees = list(range(0, _cutoff(args, f) + 1, 2))
    else:
        if args.degree < 0 or args.degree % 2:
            raise InputError("degree must be even and nonnegative")
        degrees = [args.degree]
    for d in degrees:
        val = mayer_vietoris_coker(f, left, right, d)
        if rep.fmt == "kv":
            rep.item(f"coker_dim.{d}", val)
        else:
            rep.lines.append(f"coker-dim(deg {d}) = {val}")
    return 0


def cmd_lift(args, rep: Report) -> int:
    f = _load_fan(args.fan)
    values = parse_plf(_read(args.plf))
    rep.raw(serialize_fan(lift_fan_by_plf(f, values)))
    return 0


def _parse_rays(text: str) -> list[tuple[int, ...]]:
    try:
        return [tuple(int(x) for x in r.replace(",", " ").split()) for r in text.split(";") if r.strip()]
    except ValueError:
        raise InputError(f"bad ray list {text!r}; use e.g. '1,0,0; 0,1,0'") from None


def cmd_gen(args, rep: Report) -> int:
    name = args.fixture
    if name == "polygon_cone":
        f = fx.polygon_cone(args.m if args.m is not None else 4)
    elif name == "affine_cone":
        if not args.rays:
            raise InputError("affine_cone needs --rays")
        f = fx.affine_cone(_parse_rays(args.rays))
    else:
        f = fx.fixtures(name)
    rep.raw(serialize_fan(f))
    return 0


COMMANDS = {
    "check": cmd_check, "mes": cmd_mes, "betti": cmd_betti, "sr": cmd_sr,
    "mv": cmd_mv, "lift": cmd_lift, "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", type=int, default=None,
                        help="highest even degree computed (default 2n+2)")
    common.add_argument("--format", choices=("table", "kv"), default="table")
    common.add_argument("--out", default=None, help="write output to this file")

    p = argparse.ArgumentParser(prog="toricmes",
                                description="Minimal extension sheaves and piecewise polynomials on fans.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in [("check", "fan predicates and face counts"),
                           ("mes", "build the minimal extension sheaf and dump it"),
                           ("betti", "global Betti numbers and formality verdict"),
                           ("sr", "Stanley-Reisner Hilbert functions")]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("fan")
        if name == "mes":
            sp.add_argument("--verify", action="store_true", help="also run the axiom checks")
    sp = sub.add_parser("mv", parents=[common], help="Mayer-Vietoris cokernel dimension")
    sp.add_argument("fan")
    sp.add_argument("--left", required=True, help="cone labels of the first subfan, e.g. 0,1")
    sp.add_argument("--right", required=True, help="cone labels of the second subfan")
    sp.add_argument("--degree", type=int, default=None)
    sp = sub.add_parser("lift", parents=[common], help="fan of the line bundle of a PLF")
    sp.add_argument("fan")
    sp.add_argument("plf")
    sp = sub.add_parser("gen", parents=[common], help="write a fixture fan file")
    sp.add_argument("fixture", choices=sorted(fx.FIXTURES))
    sp.add_argument("--m", type=int, default=None, help="polygon size for polygon_cone")
    sp.add_argument("--rays", default=None, help="rays for affine_cone, e.g. '1,0; 0,1'")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    rep = Report(args.format)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        try:
            status = COMMANDS[args.command](args, rep)
        except (InputError, FanError, ValueError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
    seen = set()
    for w in caught:
        msg = str(w.message)
        if issubclass(w.category, TruncationWarning) and msg not in seen:
            seen.add(msg)
            print(f"warning: {msg}", file=sys.stderr)
    out = rep.text()
    if args.out:
        try:
            Path(args.out).write_text(out)
        except OSError as e:
            print(f"error: cannot write {args.out}: {e.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
