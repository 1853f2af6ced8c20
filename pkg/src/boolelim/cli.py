"""Command line front end.

Subcommands: eliminate, decide, verify, report, selftest, plot. Exit codes
are part of the contract: 0 success, 2 parse error, 3 incompatible form,
field, or literal kind, 4 size limit, 5 unresolved sampling verdict,
6 unsupported equation shape, 7 equivalence disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .decide import (
    SamplePlan,
    VerdictKind,
    decider_for_shape,
    equivalence_run,
    refute_ae,
)
from .elim import (
    QuantifiedEquation,
    Shape,
    build_for_shape,
    degree_report,
    from_json,
    to_json,
    to_latex,
)
from .errors import (
    FormulaSyntaxError,
    NeqLiteralError,
    OrderInComplexError,
    OrderLiteralError,
    ShapeUnsupportedError,
    SizeLimitError,
    WrongKindError,
)
from .exactnum import GaussianRational
from .fixtures import (
    GOLDEN_CASES,
    build_case,
    grid_points,
    quadrant_fixture,
    rendered_equation,
)
from .formula import (
    DEFAULT_CLAUSE_LIMIT,
    NormalForm,
    parse,
    rewrite_neq_to_orders,
    to_cnf,
    to_dnf,
)
from .poly import Field, render_poly

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCOMPATIBLE = 3
EXIT_SIZE = 4
EXIT_UNRESOLVED = 5
EXIT_SHAPE = 6
EXIT_DISAGREE = 7

# which fields each requested form makes sense over, and the shape it builds
_FORM_FIELDS = {
    "ea": {Field.C},
    "ae": {Field.C, Field.R},
    "e": {Field.R, Field.Q},
    "ed": {Field.R},
    "e3d": {Field.Q},
    "ae3": {Field.Q},
}

_FORM_SHAPE = {
    ("ea", Field.C): Shape.EA_C,
    ("ae", Field.C): Shape.AE_C,
    ("ae", Field.R): Shape.AE_R,
    ("e", Field.R): Shape.E_R,
    ("e", Field.Q): Shape.E_R,
    ("ed", Field.R): Shape.Ed_R,
    ("e3d", Field.Q): Shape.E3d_Q,
    ("ae3", Field.Q): Shape.AE3_Q,
}

# forms whose gadgets encode order literals, so != must be rewritten first
_ORDER_FORMS = {("ae", Field.R), ("ed", Field.R), ("e3d", Field.Q), ("ae3", Field.Q)}

_DNF_FORMS = {"ea", "e"}


class _CliFail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    with open(arg, "r", encoding="utf-8") as fh:
        return fh.read()


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def _parse_gaussian(text: str) -> GaussianRational:
    """Accepts 1, -2/3, i, -i, 2i, 1+2i, 1-2/3i and the like."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty scalar")
    if "i" not in t:
        return GaussianRational.of(Fraction(t))
    # split off the imaginary tail: the last +/- not at position 0 and not
    # inside a fraction starts the imaginary part when the tail carries i
    body = t[:-1] if t.endswith("i") else None
    if body is None:
        raise ValueError(f"imaginary unit must be the trailing token: {text!r}")
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "+-/*":
            re_part, im_part = body[:k], body[k:]
            break
    else:
        re_part, im_part = "", body
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_part)
    re = Fraction(re_part) if re_part else Fraction(0)
    return GaussianRational(re, im)


def _parse_point(text: str, fld: Field) -> dict:
    point = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise ValueError(f"point entry {piece!r} is not name=value")
        name, val = piece.split("=", 1)
        if fld is Field.C:
            point[name.strip()] = _parse_gaussian(val)
        else:
            point[name.strip()] = _parse_fraction(val)
    return point


def _parse_grid(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("grid spec must be lo:hi:step")
    lo, hi, step = (Fraction(p) for p in parts)
    if step <= 0:
        raise ValueError("grid step must be positive")
    if lo > hi:
        raise ValueError("grid lo must not exceed hi")
    return lo, hi, step


def _build_from_text(text: str, form: str, fld: Field, limit: int) -> tuple:
    if fld not in _FORM_FIELDS[form]:
        raise _CliFail(
            EXIT_INCOMPATIBLE,
            f"form {form!r} is not defined over field {fld.value}",
        )
    try:
        phi = parse(text, fld)
    except OrderInComplexError as exc:
        raise _CliFail(EXIT_INCOMPATIBLE, str(exc))
    except FormulaSyntaxError as exc:
        raise _CliFail(EXIT_PARSE, str(exc))
    if (form, fld) in _ORDER_FORMS:
        phi = rewrite_neq_to_orders(phi)
    try:
        m = to_dnf(phi, limit) if form in _DNF_FORMS else to_cnf(phi, limit)
    except SizeLimitError as exc:
        raise _CliFail(EXIT_SIZE, str(exc))
    shape = _FORM_SHAPE[(form, fld)]
    try:
        qe = build_for_shape(shape, m)
    except (OrderLiteralError, NeqLiteralError, WrongKindError) as exc:
        raise _CliFail(EXIT_INCOMPATIBLE, str(exc))
    return phi, qe


def _print_equation(qe: QuantifiedEquation, output: str, out) -> None:
    if output == "json":
        payload = {
            "equation": json.loads(to_json(qe)),
            "report": degree_report(qe).to_dict(),
        }
        print(json.dumps(payload, indent=2), file=out)
        return
    if output == "latex":
        print(to_latex(qe), file=out)
    else:
        prefix = " ".join(f"{q} {n}" for q, n in qe.prefix)
        print(f"{prefix}: {render_poly(qe.equation, qe.prefix)} = 0", file=out)
    rep = degree_report(qe)
    degs = ", ".join(f"{n}:{v}" for n, v in rep.degrees.items())
    bnds = ", ".join(f"{n}<={v}" for n, v in rep.bounds.items())
    print(f"degrees {degs}  bounds {bnds}  satisfied {rep.satisfied}", file=out)


def _cmd_eliminate(args, out) -> int:
    text = _read_input(args.input)
    fld = Field.from_letter(args.field)
    _, qe = _build_from_text(text, args.form, fld, args.clause_limit)
    _print_equation(qe, args.output, out)
    return EXIT_OK


def _cmd_report(args, out) -> int:
    text = _read_input(args.input)
    fld = Field.from_letter(args.field)
    _, qe = _build_from_text(text, args.form, fld, args.clause_limit)
    rep = degree_report(qe)
    if args.output == "json":
        print(json.dumps(rep.to_dict(), indent=2), file=out)
    else:
        for name, v in rep.degrees.items():
            exact = "=" if rep.exact.get(name) else "<="
            print(f"{name}: degree {v}, bound {exact}{rep.bounds[name]}", file=out)
        print(f"satisfied: {rep.satisfied}", file=out)
    return EXIT_OK


def _cmd_decide(args, out) -> int:
    payload = _read_input(args.input)
    try:
        qe = from_json(payload)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise _CliFail(EXIT_PARSE, f"bad equation JSON: {exc}")
    point = _parse_point(args.point or "", qe.field)
    if args.refute:
        if args.seed is None:
            raise _CliFail(EXIT_PARSE, "--refute needs --seed")
        plan = SamplePlan(seed=args.seed, count=args.points, bound=args.bound)
        verdict = refute_ae(qe, point, plan)
        print(str(verdict), file=out)
        return EXIT_UNRESOLVED if verdict.kind is VerdictKind.UNRESOLVED else EXIT_OK
    decider = decider_for_shape(qe.shape)
    result = decider(qe, point)
    print(VerdictKind.TRUE.value if result else VerdictKind.FALSE.value, file=out)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    text = _read_input(args.input)
    fld = Field.from_letter(args.field)
    phi, qe = _build_from_text(text, args.form, fld, args.clause_limit)
    if args.corrupt:
        # negative control: swap in the complement formula's equation, which
        # must disagree with phi at every sampled point
        from .formula import f_not, render_formula

        _, qe = _build_from_text(
            render_formula(f_not(phi)), args.form, fld, args.clause_limit
        )
    plan = SamplePlan(seed=args.seed, count=args.points, bound=args.bound)
    decider = decider_for_shape(qe.shape)
    try:
        report = equivalence_run(phi, qe, decider, plan)
    except ShapeUnsupportedError as exc:
        raise _CliFail(EXIT_SHAPE, str(exc))
    print(
        f"{report['agreements']}/{report['points']} agree (seed {report['seed']})",
        file=out,
    )
    if report["disagreements"]:
        for rec in report["disagreements"]:
            print(json.dumps(rec), file=out)
        return EXIT_DISAGREE
    return EXIT_OK


def _selftest_cases(corrupt: bool):
    for case in GOLDEN_CASES:
        expected = case.expected
        if corrupt and case is GOLDEN_CASES[0]:
            expected = expected.replace("+ 1", "+ 2")
        got = rendered_equation(build_case(case))
        yield f"golden {case.name}", got == expected

    from .decide import decide_e_r

    simplified = quadrant_fixture(True)
    raw = quadrant_fixture(False)
    pts = grid_points(Fraction(-2), Fraction(2), Fraction(1, 4))
    ok = True
    for yv in pts:
        for zv in pts:
            x = {"y": yv, "z": zv}
            want = yv > 0 and zv > 0
            if decide_e_r(simplified, x) != want or decide_e_r(raw, x) != want:
                ok = False
    yield "quadrant grid sweep", ok

    from .exactnum import is_sum_three_squares, three_squares_pair

    blocked = _no_three_squares(500)
    ok = True
    for n in range(1, 500):
        ts = three_squares_pair(n)
        if ts.selector * n != sum(p * p for p in ts.parts) or ts.selector not in (1, 2):
            ok = False
        if is_sum_three_squares(n) != (n not in blocked):
            ok = False
    yield "three squares identities", ok

    from .formula import RandomFormulaParams, random_formula

    sweep = (
        ("ea", Field.C, NormalForm.DNF, Shape.EA_C),
        ("ae", Field.C, NormalForm.CNF, Shape.AE_C),
        ("e", Field.R, NormalForm.DNF, Shape.E_R),
    )
    ok = True
    for form, fld, kind, shape in sweep:
        for seed in range(3):
            phi = random_formula(seed, RandomFormulaParams(field=fld, kind=kind))
            m = to_dnf(phi) if kind is NormalForm.DNF else to_cnf(phi)
            qe = build_for_shape(shape, m)
            rep = equivalence_run(
                phi, qe, decider_for_shape(shape), SamplePlan(seed=seed + 100, count=8)
            )
            if rep["disagreements"]:
                ok = False
    yield "reduced equivalence sweep", ok


def _no_three_squares(limit: int) -> set:
    # integers of the form 4^a (8b + 7)
    out = set()
    a = 1
    while a <= limit:
        m = 7
        while a * m <= limit:
            out.add(a * m)
            m += 8
        a *= 4
    return out


def _cmd_selftest(args, out) -> int:
    failures = []
    for name, ok in _selftest_cases(args.corrupt):
        print(("ok " if ok else "FAIL ") + name, file=out)
        if not ok:
            failures.append(name)
    if failures:
        print("failing: " + ", ".join(failures), file=out)
        return 1
    return EXIT_OK


def _cmd_plot(args, out) -> int:
    from .decide import decide_e_r

    if args.fixture:
        qe = quadrant_fixture(simplified=args.fixture == "quadrant")
    else:
        if not args.input:
            raise _CliFail(EXIT_PARSE, "plot needs --input or --fixture")
        try:
            qe = from_json(_read_input(args.input))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise _CliFail(EXIT_PARSE, f"bad equation JSON: {exc}")
    kinds = tuple(q for q, _ in qe.prefix)
    frees = qe.free_names()
    if kinds != ("exists",) or len(frees) != 2 or qe.field is Field.C:
        raise _CliFail(
            EXIT_SHAPE,
            "plot needs a single real exists variable over two free variables",
        )
    lo, hi, step = _parse_grid(args.grid)
    ycol, zcol = frees
    print(f"{ycol},{zcol},has_real_root", file=out)
    for yv in grid_points(lo, hi, step):
        for zv in grid_points(lo, hi, step):
            hit = decide_e_r(qe, {ycol: yv, zcol: zv})
            print(f"{yv},{zv},{1 if hit else 0}", file=out)
    return EXIT_OK


def _add_common(sp, need_form=True):
    if need_form:
        sp.add_argument("--field", choices=["c", "r", "q"], required=True)
        sp.add_argument("--form", choices=sorted(_FORM_FIELDS), required=True)
    sp.add_argument("--input", default="-", help="formula or equation file, - for stdin")
    sp.add_argument("--output", choices=["json", "latex", "text"], default="text")
    sp.add_argument("--clause-limit", type=int, default=DEFAULT_CLAUSE_LIMIT)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="boolelim")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eliminate", help="compile a formula to a quantified equation")
    _add_common(sp)

    sp = sub.add_parser("report", help="degree report for the compiled equation")
    _add_common(sp)

    sp = sub.add_parser("decide", help="decide a serialized equation at a point")
    _add_common(sp, need_form=False)
    sp.add_argument("--point", default="", help="comma separated name=value")
    sp.add_argument("--refute", action="store_true", help="sample the universal variable")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--points", type=int, default=64)
    sp.add_argument("--bound", type=int, default=32)

    sp = sub.add_parser("verify", help="sampled equivalence between formula and equation")
    _add_common(sp)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--points", type=int, default=64)
    sp.add_argument("--bound", type=int, default=32)
    sp.add_argument("--corrupt", action="store_true", help="negative control")

    sp = sub.add_parser("selftest", help="golden fixtures and reduced invariant sweeps")
    sp.add_argument("--corrupt", action="store_true", help="negative control")

    sp = sub.add_parser("plot", help="CSV sweep of a single-exists real equation")
    sp.add_argument("--input", default=None)
    sp.add_argument("--fixture", choices=["quadrant", "quadrant-raw"], default=None)
    sp.add_argument(
        "--grid",
        default="-2:2:1/4",
        help="lo:hi:step; write --grid=-2:2:1/4 when lo is negative",
    )

    return ap


_DISPATCH = {
    "eliminate": _cmd_eliminate,
    "report": _cmd_report,
    "decide": _cmd_decide,
    "verify": _cmd_verify,
    "selftest": _cmd_selftest,
    "plot": _cmd_plot,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args, out)
    except _CliFail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ShapeUnsupportedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
