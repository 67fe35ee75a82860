"""Command-line interface: classify, holonomy, verify, plot, seifert.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from trefoil_geom import holonomy as hol
from trefoil_geom import plots
from trefoil_geom import surgery as sg
from trefoil_geom import verify as ver
from trefoil_geom.errors import GeometryError, NilRegime

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def format_float(v: float) -> str:
    if math.isnan(v):
        return "null"
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    if v == 0:
        return "0.0"
    s = format(v, ".17g")
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, Fraction):
        return dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def pi_multiple(v: float, max_den: int = 600) -> str | None:
    """``"pi/5"``-style text when v is within 1e-12 of a small rational multiple of pi."""
    if not math.isfinite(v):
        return None
    if v == 0:
        return "0"
    f = Fraction(v / math.pi).limit_denominator(max_den)
    if abs(v - float(f) * math.pi) > 1e-12 or abs(f.numerator) > 100 * max_den:
        return None
    num = "" if abs(f.numerator) == 1 else str(abs(f.numerator))
    sign = "-" if f < 0 else ""
    body = f"{num}pi" if f.denominator == 1 else f"{num}pi/{f.denominator}"
    return sign + body


def pi2_multiple(v: float) -> str | None:
    if v == 0:
        return "0"
    f = Fraction(v / math.pi**2).limit_denominator(10000)
    if abs(v - float(f) * math.pi**2) > 1e-12 * max(1.0, abs(v)):
        return None
    num = {1: "", -1: "-"}.get(f.numerator, str(f.numerator))
    return f"{num}pi^2/{f.denominator}" if f.denominator != 1 else f"{num}pi^2"


def angle(v) -> dict | None:
    if v is None:
        return None
    return {"radians": float(v), "pi": pi_multiple(float(v))}


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


def structure_dict(st: sg.GeomStructure) -> dict:
    spec = st.spec
    d = {
        "p": spec.p,
        "q": spec.q,
        "r": "inf" if isinstance(spec.r, float) and math.isinf(spec.r) else spec.r,
        "class": st.cls.value,
        "alpha": angle(st.alpha),
        "theta": angle(st.theta),
        "S": st.S,
        "cone_angle": angle(st.cone_angle),
        "length": None if st.length is None else {"raw": st.length.raw, "abs": st.length.length},
        "volume": None if st.volume is None else {"value": st.volume, "pi2": pi2_multiple(st.volume)},
        "seifert": None,
        "notes": list(st.notes),
    }
    if st.seifert is not None:
        d["seifert"] = seifert_dict(st.seifert)
    return d


def seifert_dict(sd: sg.SeifertData) -> dict:
    return {
        "symbol": sd.symbol(),
        "normalized": sd.normalized().symbol(),
        "m": sd.m,
        "n": sd.n,
        "gcd": sd.gcd,
        "exceptional": list(sd.exceptional),
        "cone_angle": angle(sd.cone_angle),
    }


def _text_report(d: dict, indent: str = "") -> str:
    lines = []
    for k, v in d.items():
        if isinstance(v, dict):
            if set(v) == {"radians", "pi"}:
                extra = f" ({v['pi']})" if v["pi"] else ""
                lines.append(f"{indent}{k}: {format_float(v['radians'])}{extra}")
            else:
                lines.append(f"{indent}{k}:")
                lines.append(_text_report(v, indent + "  "))
        elif isinstance(v, float):
            lines.append(f"{indent}{k}: {format_float(v)}")
        else:
            lines.append(f"{indent}{k}: {v}")
    return "\n".join(lines)


def _spec(args) -> sg.SurgerySpec:
    return sg.SurgerySpec(args.p, args.q, sg.parse_r(args.r))


def cmd_classify(args) -> int:
    st = sg.geometric_structure(_spec(args))
    d = structure_dict(st)
    text = dumps(d) + "\n" if args.format == "json" else _text_report(d) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_holonomy(args) -> int:
    if args.nil_t is not None:
        pair = hol.nil_generators(args.nil_t)
        d = {"kind": "nil", **pair.to_dict()}
    else:
        if args.alpha is None:
            raise UsageError("give --alpha (with --theta) or --nil-t")
        if abs(1 - 2 * math.sin(args.alpha)) < hol.NIL_GUARD:
            raise UsageError("alpha is pi/6, where the geometry is Nil: use --nil-t T (theta = alpha + T(6 alpha - pi))")
        if args.theta is None:
            raise UsageError("--theta is required with --alpha")
        pair = hol.generators_ab(args.alpha, args.theta)
        d = {"kind": "curved", **pair.to_dict()}
    rep = hol.relator_check(pair)
    d["relator_residual"] = {"lr": rep.lr_residual, "lm": rep.lm_residual}
    _write(dumps(d) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = ver.run_suite(args.suite, args.seed)
    _write(dumps(rep.to_dict()) + "\n", args.out)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.residual:.3e} (tol {c.tol:g})", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def _resolution(text: str | None):
    if text is None:
        return None
    try:
        nx, ny = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError("resolution is NXxNY, e.g. 49x17") from None
    return nx, ny


def cmd_plot(args) -> int:
    which = plots.Which(args.which)
    fmt_name = args.format
    if fmt_name is None:
        fmt_name = "svg" if args.out and args.out.endswith(".svg") else "csv"
    if fmt_name not in ("csv", "svg"):
        raise UsageError("plot formats are csv and svg")
    window = plots.Window.parse(args.window) if args.window else None
    reg = plots.plot_regions(which, window, _resolution(args.resolution))
    _write(plots.render(reg, fmt_name), args.out)
    return EXIT_OK


def cmd_seifert(args) -> int:
    if args.m is not None or args.n is not None:
        if args.m is None or args.n is None:
            raise UsageError("give both -m and -n")
        spec = sg.spec_from_seifert(Fraction(args.m), Fraction(args.n))
    else:
        if args.p is None or args.q is None:
            raise UsageError("give -m/-n or -p/-q/-r")
        spec = _spec(args)
    st = sg.geometric_structure(spec)
    d = structure_dict(st)
    text = dumps(d) + "\n" if args.format == "json" else _text_report(d) + "\n"
    _write(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trefoil-geom", description="Geometric structures on surgeries of the trefoil knot.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="geometry, holonomy parameters and volume of (T_p/q, r)")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument("-r", default="1", help="integer, a/b, decimal or inf")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("holonomy", help="dump the generators a, b (or a_t, b_t)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--nil-t", type=float, dest="nil_t")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", nargs="?", default="all", choices=list(ver.SUITES) + ["all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="emit the P1 or P2 region plot")
    p.add_argument("--which", choices=["p1", "p2"], default="p1")
    p.add_argument("--format", choices=["csv", "svg"])
    p.add_argument("--window", help="x0,x1,y0,y1")
    p.add_argument("--resolution", help="NXxNY grid for p1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("seifert", help="convert between (p, q, r) and S(m, n)")
    p.add_argument("-m")
    p.add_argument("-n")
    p.add_argument("-p", type=int)
    p.add_argument("-q", type=int)
    p.add_argument("-r", default="1")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_seifert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GeometryError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, NilRegime):
            print("error: alpha is pi/6; use --nil-t", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
