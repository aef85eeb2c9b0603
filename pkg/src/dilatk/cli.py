"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails (the report is still
printed on standard output), 2 on unreadable input or a failed precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import bcl, dilation1, dot, endo, ext, io, lifting, multivar, suites, wold
from .errors import DilatkError, InvalidInput
from .report import VerificationReport
from .symset import Elem, SymSet, TailAffineMap

DEFAULT_DEPTH = 8
MAX_DEPTH = 64


class _Inputs:
    """Reads file arguments; ``-`` means standard input and may be used once."""

    def __init__(self, stdin):
        self.stdin = stdin
        self.used_stdin = False

    def text(self, arg: str) -> str:
        if arg == "-":
            if self.used_stdin:
                raise InvalidInput("standard input can be used for one argument only")
            self.used_stdin = True
            return self.stdin.read()
        try:
            with open(arg, encoding="utf-8") as fh:
                return fh.read()
        except OSError as e:
            raise InvalidInput(f"cannot read {arg}: {e.strerror}") from None

    def json(self, arg: str):
        return io.parse_json(self.text(arg))

    def function(self, arg: str) -> endo.FinFunc:
        """A function file, or an inline table such as ``1,1,2``."""
        if arg != "-" and not os.path.exists(arg):
            if arg.strip().startswith("[") or "," in arg or arg.strip().isdigit():
                return io.parse_inline_table(arg)
        return io.decode(self.json(arg), "function")


def _int_list(text: str | None) -> list[int]:
    if text is None or text.strip() in ("", "-", "none"):
        return []
    try:
        return [int(x) for x in text.replace(" ", "").strip("[]{}").split(",") if x]
    except ValueError:
        raise InvalidInput(f"expected a comma separated list of integers, got {text!r}") from None


def _elems(text: str | None, space: SymSet):
    """``R:0,R:1`` or a JSON subset document."""
    if text is None:
        return space.empty()
    t = text.strip()
    if t.startswith("{") or t.startswith("["):
        return io.decode_subset(io.parse_json(t), space)
    out = []
    for part in filter(None, t.split(",")):
        comp, _, idx = part.partition(":")
        try:
            out.append(Elem(comp, int(idx)))
        except ValueError:
            raise InvalidInput(f"bad element {part!r}; expected component:index") from None
    return space.subset(out)


# -- output -------------------------------------------------------------------


def _emit(args, out, text: str, data) -> None:
    if args.format == "json":
        out.write(io.dumps(data) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _emit_report(args, out, rep: VerificationReport, extra: dict | None = None) -> int:
    if args.format == "json":
        data = io.encode_report(rep)
        if extra:
            data.update(extra)
        out.write(io.dumps(data) + "\n")
    else:
        if extra:
            for k, v in extra.items():
                out.write(f"{k}: {json.dumps(v) if not isinstance(v, str) else v}\n")
        out.write(rep.render() + "\n")
    if args.plot:
        from .plotting import plot_report

        plot_report(rep, args.plot)
    return 0 if rep.ok else 1


# -- commands -----------------------------------------------------------------


def cmd_classify(args, inp, out) -> int:
    v = io.decode(inp.json(args.map), "map")
    prof = wold.classify_orbits(v)
    _emit(args, out, prof.describe() + ("\nshift" if prof.is_shift else ""), {**prof.to_json(), "shift": prof.is_shift})
    if args.plot:
        from .plotting import plot_orbit_profile

        plot_orbit_profile(prof, args.plot)
    return 0


def cmd_wold(args, inp, out) -> int:
    v = io.decode(inp.json(args.map), "map")
    split = wold.wold_decompose(v)
    if args.dot or args.format == "dot":
        out.write(dot.wold_dot(v, args.depth, args.max_nodes, split) + "\n")
        return 0
    data = {"wandering": split.wandering.to_json(), "shift_part": split.shift_part.to_json(),
            "bijective_part": split.bijective_part.to_json(),
            "orbits": wold.classify_orbits(v).to_json()}
    _emit(args, out, split.describe(), data)
    return 0


def cmd_defect(args, inp, out) -> int:
    h = inp.function(args.function)
    if args.check is not None:
        D = endo.defect_space(h, _int_list(args.check))
        minimal = endo.is_minimal_defect(h, D.members)
        _emit(args, out, f"defect space {list(D.members)}" + (" (minimal)" if minimal else " (not minimal)"),
              {"defect": list(D.members), "minimal": minimal})
        return 0
    all_d = [list(d.members) for d in endo.all_minimal_defects(h)]
    canon = list(endo.minimal_defect(h).members)
    text = f"minimal defect: {canon}\ncount: {len(all_d)}"
    if args.all:
        text += "\nall: " + "; ".join(map(str, all_d))
    _emit(args, out, text, {"minimal": canon, "count": len(all_d), "all": all_d})
    return 0


def _build_dilation(h, kind: str, defect: str | None):
    if kind == "standard":
        return dilation1.standard_dilation(h)
    if kind == "defect":
        D = _int_list(defect) if defect is not None else list(endo.minimal_defect(h).members)
        return dilation1.defect_dilation(h, D)
    if kind == "unitary":
        return dilation1.unitary_dilation(h)
    if kind == "halmos":
        return dilation1.halmos_dilate(h)
    raise InvalidInput(f"unknown dilation kind {kind!r}")


def cmd_dilate(args, inp, out) -> int:
    h = inp.function(args.function)
    q = _build_dilation(h, args.kind, args.defect)
    if args.format == "dot":
        out.write(dot.quadruple_dot(q, args.depth, args.max_nodes) + "\n")
    else:
        out.write(io.dumps(io.encode_quadruple(q)) + "\n")
    return 0


def cmd_verify(args, inp, out) -> int:
    q = io.decode(inp.json(args.quadruple), "quadruple")
    h = inp.function(args.function)
    if q.kind == "halmos":
        rep = dilation1.check_one_step(q, h)
    else:
        rep = dilation1.verify_power_dilation(q, h, args.depth)
    w = dilation1.coinvariance_witness(q)
    return _emit_report(args, out, rep, {"co-invariant": w is None})


def cmd_lift(args, inp, out) -> int:
    h1, h2 = inp.function(args.h1), inp.function(args.h2)
    s = io.decode_intertwiner(inp.json(args.s) if args.s == "-" or os.path.exists(args.s)
                              else _int_list(args.s), h1.n)
    if args.defect:
        lift = lifting.defect_intertwine_lift(h1, _int_list(args.defect[0]), h2, _int_list(args.defect[1]), s)
    else:
        lift = lifting.intertwine_lift(h1, h2, s)
    rep = lifting.lift_report(lift, s)
    rep.merge(lifting.lift_report_to_depth(lift, args.depth))
    back = lifting.intertwine_compress(lift)
    if back == s:
        rep.passed("compress recovers s")
    else:
        rep.fail("compress recovers s", list(back.table))
    return _emit_report(args, out, rep, {"s": list(s.table)})


def cmd_sarason(args, inp, out) -> int:
    v = io.decode(inp.json(args.map), "map")
    B = v.domain
    A1, A2 = _elems(args.a1, B), _elems(args.a2, B) if args.a2 is not None else B.full()
    h = io.decode(inp.json(args.h), "map") if args.h else TailAffineMap.identity(B)
    p = lifting.sarason_projection(v, A1, A2, h)
    rep = lifting.check_projection(v, A2 - A1, h, p, args.depth)
    extra = {"p": io.encode_map(p)} if args.format == "json" else {}
    if args.format != "json":
        pts = ", ".join(f"{x}->{p(x)}" for x in B.elements(min(args.depth, 6)))
        extra["p on a truncation"] = pts
    return _emit_report(args, out, rep, extra)


def cmd_multi(args, inp, out) -> int:
    f = io.decode(inp.json(args.family), "family")
    D = _int_list(args.defect) if args.defect is not None else None
    if args.mode == "commuting":
        q = (multivar.commuting_standard_dilation(f) if D is None
             else multivar.commuting_defect_dilation(f, D))
    else:
        q = (multivar.noncommuting_standard_dilation(f) if D is None
             else multivar.noncommuting_defect_dilation(f, D))
    rep = multivar.verify_multivar(q, f, args.depth)
    extra = {}
    if args.mode == "free" and D is not None:
        jd, _ = multivar.noncomm_classify(q, min(args.depth, 4))
        extra["recovered defect"] = list(jd.members)
    return _emit_report(args, out, rep, extra)


def cmd_bcl(args, inp, out) -> int:
    if args.action == "synth":
        if len(args.files) != 1:
            raise InvalidInput("bcl synth takes one data file")
        d = io.decode(inp.json(args.files[0]), "bcl")
        A, s1, s2 = bcl.bcl_synthesize(d)
        out.write(io.dumps({"set": io.encode_symset(A), "s1": io.encode_map(s1), "s2": io.encode_map(s2)}) + "\n")
        return 0
    if args.action == "analyze":
        if len(args.files) != 2:
            raise InvalidInput("bcl analyze takes two map files")
        v1, v2 = (io.decode(inp.json(f), "map") for f in args.files)
        an = bcl.bcl_analyze(v1, v2, args.depth)
        extra = {"data": an.data.to_json(), "wandering": [str(x) for x in an.wandering],
                 "unitary part": an.unitary_part.describe()}
        return _emit_report(args, out, an.report, extra)
    # roundtrip
    rep = VerificationReport(f"BCL round trips |W| <= {args.wmax}")
    lines, total = [], 0
    for size in range(1, args.wmax + 1):
        passed = failed = 0
        for d in bcl.all_bcl_data(size):
            r = bcl.bcl_roundtrip_check(d, args.depth)
            if r.ok:
                passed += 1
            else:
                failed += 1
                rep.fail("round trip", {"data": d.to_json(), "check": r.failed()[0].name})
        total += passed
        rep.count(f"|W|={size}", passed + failed)
        lines.append(f"|W|={size}: {passed} cases pass" + (f", {failed} fail" if failed else ""))
    rep.passed("round trip")
    if args.format == "json":
        return _emit_report(args, out, rep, {"per_size": lines, "passed": total})
    out.write("\n".join(lines) + f"\ntotal: {total} cases pass\n")
    out.write(rep.render() + "\n")
    if args.plot:
        from .plotting import plot_report

        plot_report(rep, args.plot)
    return 0 if rep.ok else 1


def cmd_monoid(args, inp, out) -> int:
    M = ext.PresentedMonoid.preset(args.preset)
    act = io.decode_action(inp.json(args.action), M)
    q = ext.monoid_standard_dilation(act, args.length)
    rep = ext.verify_monoid_dilation(q, act, args.length)
    return _emit_report(args, out, rep, {"monoid": M.name})


def cmd_linear(args, inp, out) -> int:
    h = io.decode_linmap(inp.json(args.matrix), args.field)
    rep = ext.verify_linear_dilation(ext.linear_standard_dilation(h), args.depth)
    return _emit_report(args, out, rep, {"field": ext.field_name(h.field), "dim": h.dim})


def cmd_export_dot(args, inp, out) -> int:
    obj = io.decode(inp.json(args.object))
    if args.wold:
        if not isinstance(obj, TailAffineMap):
            raise InvalidInput("--wold needs a map")
        out.write(dot.wold_dot(obj, args.depth, args.max_nodes) + "\n")
    else:
        out.write(dot.export_dot(obj, args.depth, args.max_nodes) + "\n")
    return 0


def cmd_selftest(args, inp, out) -> int:
    results = suites.run_all(quick=not args.full, seed=args.seed)
    if args.format == "json":
        out.write(io.dumps([r.to_json() for r in results]) + "\n")
    else:
        for r in results:
            out.write(r.line() + "\n")
            for note in r.notes:
                out.write(f"    {note}\n")
    if args.plot:
        from .plotting import plot_suite

        plot_suite([(r.name, r.cases, r.failures, r.seconds) for r in results], args.plot)
    return 0 if all(r.ok for r in results) else 1


# -- parser ---------------------------------------------------------------------


def _depth(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid depth {text!r}") from None
    if not 0 <= d <= MAX_DEPTH:
        raise argparse.ArgumentTypeError(f"depth must lie in [0, {MAX_DEPTH}]")
    return d


def _global_options(p: argparse.ArgumentParser, defaults: bool):
    kw = (lambda v: {"default": v}) if defaults else (lambda v: {"default": argparse.SUPPRESS})
    p.add_argument("--depth", type=_depth, help=f"verification depth (default {DEFAULT_DEPTH})",
                   **kw(DEFAULT_DEPTH))
    p.add_argument("--format", choices=["text", "json", "dot"], **kw("text"))
    p.add_argument("--seed", type=int, **kw(0))
    p.add_argument("--max-nodes", type=int, dest="max_nodes", **kw(dot.MAX_NODES))
    p.add_argument("--plot", metavar="PATH", help="write a matplotlib figure of the result", **kw(None))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dilatk", description="Dilations of functions on sets.")
    _global_options(parser, True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("classify", cmd_classify, "orbit profile of an injective map")
    p.add_argument("map")
    p = add("wold", cmd_wold, "Wold split of an injective map")
    p.add_argument("map")
    p.add_argument("--dot", action="store_true")
    p = add("defect", cmd_defect, "minimal defect spaces of a function")
    p.add_argument("function")
    p.add_argument("--all", action="store_true")
    p.add_argument("--check", metavar="D")
    p = add("dilate", cmd_dilate, "build a dilation quadruple")
    p.add_argument("function")
    p.add_argument("--kind", choices=["standard", "defect", "halmos", "unitary"], default="standard")
    p.add_argument("--defect", metavar="D")
    p = add("verify", cmd_verify, "verify a quadruple against a function")
    p.add_argument("quadruple")
    p.add_argument("function")
    p = add("lift", cmd_lift, "lift an intertwiner and compress it back")
    p.add_argument("h1")
    p.add_argument("h2")
    p.add_argument("s")
    p.add_argument("--defect", nargs=2, metavar=("D1", "D2"))
    p = add("sarason", cmd_sarason, "projection onto a difference of invariant sets")
    p.add_argument("map")
    p.add_argument("--a1")
    p.add_argument("--a2")
    p.add_argument("--h", help="map file whose values on A define h (default: identity)")
    p = add("multi", cmd_multi, "dilate a family of functions")
    p.add_argument("family")
    p.add_argument("--mode", choices=["commuting", "free"], default="commuting")
    p.add_argument("--defect", metavar="D")
    p = add("bcl", cmd_bcl, "normal form of commuting pairs")
    p.add_argument("action", choices=["synth", "analyze", "roundtrip"])
    p.add_argument("files", nargs="*")
    p.add_argument("--wmax", type=int, default=3)
    p = add("monoid", cmd_monoid, "dilate a monoid action")
    p.add_argument("action")
    p.add_argument("--preset", default="zplus2")
    p.add_argument("--length", type=int, default=5)
    p = add("linear", cmd_linear, "dilate a matrix over an exact field")
    p.add_argument("matrix")
    p.add_argument("--field", default=None, help="q or gf:P (default: the document's field, else q)")
    p = add("export-dot", cmd_export_dot, "render a map, function or quadruple as DOT")
    p.add_argument("object")
    p.add_argument("--wold", action="store_true")
    p = add("selftest", cmd_selftest, "run the built-in sweeps")
    p.add_argument("--full", action="store_true", help="acceptance-size ranges (slower)")
    return parser


def run(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args, _Inputs(stdin), stdout)
    except DilatkError as e:
        stderr.write(f"dilatk: {type(e).__name__}: {e}\n")
        return e.exit_code
    except RecursionError:
        stderr.write("dilatk: input too deep\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
