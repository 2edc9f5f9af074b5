"""Command-line front end.

Exit codes: 0 success (or Inside), 1 Outside, 2 Unknown, 64 usage error,
65 data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from typing import Optional

from .chern import ChernCharacter, parse_character
from .contraction import contract, pinch_demo, sample_margin, verify_path
from .errors import GeostabError
from .lattice import load_surface, validate_surface
from .lepotier import CLOSED, CONVENTIONS, EnumerationBox, phi_at_slope, phi_profile, phi_upper
from .rational import (
    DEFAULT_PRECISION,
    Q,
    RationalComplex,
    format_rational,
    format_vector,
    parse_rational,
)
from .region import (
    GeoPoint,
    InsideCertificate,
    OutsideCertificate,
    Verdict,
    central_charge,
    charge_at_origin,
    membership,
)

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_DATA = 65

COMMANDS = ("validate", "phi", "member", "charge", "contract", "slice", "pinch-demo")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    surface: Optional[str] = None
    precision: Q = DEFAULT_PRECISION
    output: str = "human"


# -- argument parsing helpers -------------------------------------------


def _rational(text):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _precision(text):
    text = text.strip()
    if text.startswith("2^"):
        q = Q(2) ** int(text[2:])
    else:
        q = _rational(text)
    if q <= 0:
        raise UsageError(f"precision must be positive, got {text}")
    return q


def _vector(text):
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if not parts:
        raise UsageError(f"empty vector {text!r}")
    return tuple(_rational(p) for p in parts)


def _grid(text):
    return [_rational(p) for p in text.split(",") if p.strip()]


def _range(text):
    if ".." not in text:
        raise UsageError(f"expected a range a..b, got {text!r}")
    a, b = text.split("..", 1)
    return _rational(a), _rational(b)


def _point(text):
    parts = text.split(";")
    if len(parts) != 5:
        raise UsageError('point must look like "lambda_re,lambda_im;H;D;beta;alpha"')
    lam = _vector(parts[0])
    if len(lam) == 1:
        lam = (lam[0], Q(0))
    if len(lam) != 2:
        raise UsageError("lambda needs a real and an imaginary part")
    return GeoPoint(RationalComplex(*lam), _vector(parts[1]), _vector(parts[2]), _rational(parts[3]), _rational(parts[4]))


def _character(text):
    parts = text.split(";")
    if len(parts) != 3:
        raise UsageError('character must look like "r;c1;ch2", e.g. "1;2,0;1/2"')
    try:
        return parse_character({"rank": parts[0], "c1": list(_vector(parts[1])), "ch2": parts[2]})
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _witness_fields(v: Optional[ChernCharacter]):
    if v is None:
        return ["", "", ""]
    return [str(v.r), ";".join(format_rational(c) for c in v.c1), format_rational(v.ch2)]


def _csv_writer(out):
    return csv.writer(out, lineterminator="\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geostab", description="Numerics on the geometric stability manifold of a surface.")
    parser.add_argument("--precision", default="2^-40", help="outward rounding grid for irrational outputs")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("validate", help="validate a surface file")
    p.add_argument("file")

    def surface_flags(p):
        p.add_argument("--surface", required=True)
        p.add_argument("--csv", action="store_true")

    p = sub.add_parser("phi", help="bracket the Le Potier function")
    surface_flags(p)
    p.add_argument("--H", required=True)
    p.add_argument("--D", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--box", type=int, default=5)
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--grid", default="1,1/2,1/4,1/8")
    p.add_argument("--convention", choices=CONVENTIONS, default=CLOSED)

    p = sub.add_parser("member", help="three-valued membership in the geometric region")
    surface_flags(p)
    p.add_argument("--point", required=True)
    p.add_argument("--box", type=int, default=5)
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--grid", default="")
    p.add_argument("--convention", choices=CONVENTIONS, default=CLOSED)

    p = sub.add_parser("charge", help="evaluate the central charge of a class")
    surface_flags(p)
    p.add_argument("--point", required=True)
    p.add_argument("--v", required=True, help='"r;c1;ch2"')

    p = sub.add_parser("contract", help="sample the contraction path of a point")
    surface_flags(p)
    p.add_argument("--point", required=True)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--base", default=None, help="base point (alpha is ignored)")
    p.add_argument("--allow-uncertified", action="store_true")

    p = sub.add_parser("slice", help="CSV sweep of the bracket over a beta interval")
    p.add_argument("--surface", required=True)
    p.add_argument("--H", required=True)
    p.add_argument("--D", required=True)
    p.add_argument("--beta", required=True, help="closed interval a..b")
    p.add_argument("--step", required=True)
    p.add_argument("--box", type=int, default=5)
    p.add_argument("--max-rank", type=int, default=8)

    p = sub.add_parser("pinch-demo", help="components above the graph of 1/z")
    p.add_argument("--grid", default="-2,2,-3,3", help="x0,x1,a0,a1")
    p.add_argument("--spacing", default="1/20")
    return parser


def _value_flags(parser):
    flags = set()
    actions = list(parser._actions)
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sp in action.choices.values():
                actions.extend(sp._actions)
    for action in actions:
        if action.nargs is None and action.option_strings:
            flags.update(action.option_strings)
    return flags


def _glue_negative_values(argv, flags):
    """``--beta -2..2`` would be read as two flags; rewrite as ``--beta=-2..2``."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in flags and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1] not in flags:
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


# -- commands ------------------------------------------------------------


def _load(path):
    return validate_surface(load_surface(path))


def _box(args):
    return EnumerationBox(args.box, max_rank=args.max_rank)


def cmd_validate(cfg, args, out):
    s = _load(args.file)
    print(f"surface     {s.data.name or args.file}", file=out)
    print(f"rank        {s.rank}", file=out)
    print(f"signature   {s.signature}", file=out)
    print(f"ample mode  {s.ample_mode}", file=out)
    print(f"reference   {format_vector(s.reference_ample)}", file=out)
    if s.facets:
        print(f"facets      {' '.join(format_vector(f) for f in s.facets)}", file=out)
    print(f"stable characters  {len(s.stable_characters)}", file=out)
    if s.data.albanese_finite is not None:
        print(f"albanese finite    {s.data.albanese_finite}", file=out)
    return EXIT_OK


def cmd_phi(cfg, args, out):
    H, D, beta = _vector(args.H), _vector(args.D), _rational(args.beta)
    grid = _grid(args.grid)
    s = _load(args.surface)
    b = phi_profile(s, H, D, beta, _box(args), grid, args.convention)
    if cfg.output == "csv":
        w = _csv_writer(out)
        w.writerow(["delta", "punctured_sup", "witness_r", "witness_c1", "witness_ch2"])
        for e in b.window_profile:
            w.writerow([format_rational(e.delta), format_rational(e.punctured_sup), *_witness_fields(e.witness)])
        return EXIT_OK
    print(f"upper      {format_rational(b.upper)}", file=out)
    wit = f"   witness {b.witness}" if b.witness is not None else "   no candidate at this slope"
    print(f"pointwise  {format_rational(b.pointwise)}{wit}", file=out)
    print(f"estimate   {format_rational(b.estimate())}   [{b.convention}]", file=out)
    print("window profile (0 < |mu - beta| <= delta):", file=out)
    for e in b.window_profile:
        wit = f"  witness {e.witness}" if e.witness is not None else ""
        print(f"  delta={format_rational(e.delta)}  sup={format_rational(e.punctured_sup)}{wit}", file=out)
    return EXIT_OK


def cmd_member(cfg, args, out):
    p = _point(args.point)
    grid = _grid(args.grid) if args.grid else None
    s = _load(args.surface)
    m = membership(s, p, _box(args), grid, args.convention)
    c = m.certificate
    upper = phi_upper(s, p.H, p.D, p.beta)
    if isinstance(c, OutsideCertificate):
        pointwise, witness = c.value, c.witness
    elif isinstance(c, InsideCertificate):
        pointwise, witness = None, None
    else:
        pointwise, witness = c.pointwise, None
    if cfg.output == "csv":
        w = _csv_writer(out)
        w.writerow(["verdict", "alpha", "upper", "pointwise", "witness_r", "witness_c1", "witness_ch2", "convention"])
        w.writerow(
            [
                m.verdict.value,
                format_rational(p.alpha),
                format_rational(upper),
                "" if pointwise is None else format_rational(pointwise),
                *_witness_fields(witness),
                args.convention,
            ]
        )
        return m.verdict.exit_code
    print(f"verdict  {m.verdict.value}", file=out)
    print(f"point    {p}", file=out)
    if m.verdict is Verdict.INSIDE:
        print(f"certificate  alpha={format_rational(p.alpha)} > upper={format_rational(upper)}", file=out)
    elif m.verdict is Verdict.OUTSIDE:
        print(
            f"certificate  witness {witness} at slope beta has value {format_rational(pointwise)} "
            f">= alpha={format_rational(p.alpha)} [{c.convention}]",
            file=out,
        )
    else:
        print(
            f"bracket  pointwise={format_rational(pointwise)} < alpha={format_rational(p.alpha)} "
            f"<= upper={format_rational(upper)}",
            file=out,
        )
    return m.verdict.exit_code


def cmd_charge(cfg, args, out):
    p = _point(args.point)
    v = _character(args.v)
    s = _load(args.surface)
    z0 = charge_at_origin(s, p, v)
    z = central_charge(s, p, v)
    (re_lo, re_hi), (im_lo, im_hi) = z.enclosure(cfg.precision)
    if cfg.output == "csv":
        w = _csv_writer(out)
        w.writerow(["z0_re", "z0_im", "re_lo", "re_hi", "im_lo", "im_hi"])
        w.writerow([format_rational(x) for x in (z0.re, z0.im, re_lo, re_hi, im_lo, im_hi)])
        return EXIT_OK
    print(f"class    {v}", file=out)
    print(f"Z0       {z0}", file=out)
    if re_lo == re_hi and im_lo == im_hi:
        print(f"Z        {RationalComplex(re_lo, im_lo)}  (exact)", file=out)
    else:
        print(f"Z        ~ {complex(z):.12g}", file=out)
        print(f"Re Z in  [{format_rational(re_lo)}, {format_rational(re_hi)}]", file=out)
        print(f"Im Z in  [{format_rational(im_lo)}, {format_rational(im_hi)}]", file=out)
    return EXIT_OK


def cmd_contract(cfg, args, out):
    p = _point(args.point)
    base = _point(args.base) if args.base else None
    s = _load(args.surface)
    path = contract(s, p, args.steps, base=base, allow_uncertified=args.allow_uncertified)
    report = verify_path(s, path)
    header = ["t", "phase", "lambda_re", "lambda_im", "H", "D", "beta", "alpha", "margin"]
    rows = []
    for smp in path.samples:
        pt = smp.point
        rows.append(
            [
                format_rational(smp.t),
                smp.phase,
                format_rational(pt.lam.re),
                format_rational(pt.lam.im),
                ";".join(format_rational(c) for c in pt.H),
                ";".join(format_rational(c) for c in pt.D),
                format_rational(pt.beta),
                format_rational(pt.alpha),
                format_rational(sample_margin(s, smp)),
            ]
        )
    if cfg.output == "csv":
        w = _csv_writer(out)
        w.writerow(header)
        w.writerows(rows)
    else:
        widths = [max(len(r[k]) for r in rows + [header]) for k in range(len(header))]
        for r in [header] + rows:
            print("  ".join(x.rjust(wd) for x, wd in zip(r, widths)), file=out)
        print(f"base point  {path.base_point}", file=out)
        print(f"violations  {len(report.violations)}", file=out)
        for v in report.violations:
            print(f"  {v}", file=out)
        print(f"max jump    {format_rational(report.max_jump)}", file=out)
    return EXIT_OK if report.ok else EXIT_DATA


def cmd_slice(cfg, args, out):
    H, D = _vector(args.H), _vector(args.D)
    lo, hi = _range(args.beta)
    step = _rational(args.step)
    if step <= 0 or hi < lo:
        raise UsageError("slice needs a positive step and a nonempty interval")
    s = _load(args.surface)
    box = _box(args)
    w = _csv_writer(out)
    w.writerow(["beta", "phi_upper", "phi_pointwise", "witness_r", "witness_c1", "witness_ch2"])
    beta = lo
    while beta <= hi:
        sup = phi_at_slope(s, H, D, beta, box)
        w.writerow(
            [
                format_rational(beta),
                format_rational(phi_upper(s, H, D, beta)),
                format_rational(sup.value),
                *_witness_fields(sup.witness),
            ]
        )
        beta += step
    return EXIT_OK


def cmd_pinch(cfg, args, out):
    g = _grid(args.grid)
    if len(g) != 4:
        raise UsageError('grid must be "x0,x1,a0,a1"')
    res = pinch_demo((g[0], g[1]), (g[2], g[3]), _rational(args.spacing))
    print(f"components  {res.count}", file=out)
    for label, (z, a) in enumerate(res.representatives):
        print(f"  component {label}: representative (z={format_rational(z)}, alpha={format_rational(a)})", file=out)
    for z, a in ((Q(-1), Q(2)), (Q(1), Q(2))):
        if z in res.xs and a in res.alphas:
            print(f"  (z={format_rational(z)}, alpha={format_rational(a)}) lies in component {res.label_at(z, a)}", file=out)
    return EXIT_OK


HANDLERS = {
    "validate": cmd_validate,
    "phi": cmd_phi,
    "member": cmd_member,
    "charge": cmd_charge,
    "contract": cmd_contract,
    "slice": cmd_slice,
    "pinch-demo": cmd_pinch,
}


def run(argv, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(list(argv), _value_flags(parser)))
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        cfg = RunConfig(
            command=args.command,
            surface=getattr(args, "surface", None) or getattr(args, "file", None),
            precision=_precision(args.precision),
            output="csv" if getattr(args, "csv", False) else "human",
        )
        buf = io.StringIO()
        code = HANDLERS[args.command](cfg, args, buf)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except GeostabError as exc:
        print(f"data error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_DATA
    out.write(buf.getvalue())
    return code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
