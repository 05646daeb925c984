"""Command-line front end.

Exit status: 0 when the question was decided, 2 when the answer is
``unknown`` (including exhausted search bounds), 1 on errors.
"""

import argparse
from fractions import Fraction
import json
import sys

from .errors import CapacityError, OuterFormsError, ParseError
from .fields import Scalar, parse_tower
from .grammar import evaluate, split_top_level

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2

A3_FORMULA = "a1*((1-a1)^2*(1+a2)^2-4*(1-a1)*a2)"
A3_RST = "a1*r^2+a2*s^2+a1*a2*t^2"


class Context:
    """Tower plus user macros, shared by every parser call of one command."""

    def __init__(self, tower_text, defines=()):
        self.tower = parse_tower(tower_text)
        vars_ = set(self.tower.vars)
        self.defines = {}
        if {"a1", "a2"} <= vars_:
            self.defines["a3"] = A3_RST if {"r", "s", "t"} <= vars_ else A3_FORMULA
        for item in defines:
            name, sep, expr = item.partition("=")
            if not sep or not name.strip().isidentifier():
                raise ParseError(f"bad --define {item!r}, expected NAME=EXPR")
            self.defines[name.strip()] = expr

    def scalar(self, text, _seen=()):
        tower = self.tower

        def resolve(name):
            if name in self.defines and name not in tower.vars:
                if name in _seen:
                    raise ParseError(f"recursive definition of {name}")
                return self.scalar(self.defines[name], _seen + (name,))
            if name in ("i", "I") and tower.gaussian:
                return tower.sqrt_minus_one()
            if name in tower.vars:
                return tower.var(name)
            raise KeyError(name)

        value = evaluate(str(text), resolve, tower.scalar)
        return value if isinstance(value, Scalar) else tower.scalar(value)

    def scalars(self, text):
        return [self.scalar(p) for p in split_top_level(text)]

    def algebra(self, a, b, d=None):
        from .quaternion import QuatAlgebra

        Q = QuatAlgebra(self.scalar(a), self.scalar(b), self.tower)
        return Q if d is None else Q.over(self.scalar(d))


# ----------------------------------------------------------------- commands


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational number, got {text!r}") from None


def cmd_symbol(args):
    from .quadforms.local import hilbert_symbol

    if args.tower != "Q":
        raise OuterFormsError("Hilbert symbols are computed over Q only")
    a, b = _rational(args.a), _rational(args.b)
    s = hilbert_symbol(a, b, args.place)
    return EXIT_OK, {"a": str(a), "b": str(b), "place": str(args.place), "symbol": s}, str(s)


def cmd_isotropy(args):
    from .quadforms.certificates import verify
    from .quadforms.forms import QuadForm
    from .quadforms.springer import certify_anisotropic, represents

    ctx = Context(args.tower, args.define)
    q = QuadForm(ctx.scalars(args.form), ctx.tower)
    if args.value is not None:
        d = represents(q, ctx.scalar(args.value), budget=args.budget)
        key = "represents"
    else:
        d = certify_anisotropic(q, budget=args.budget)
        key = "verdict"
    rep = {"form": q.strings(), "tower": str(ctx.tower), key: d.verdict}
    if d.certificate is not None:
        rep["certificate"] = d.certificate.to_dict()
        rep["certified"] = verify(d.certificate)
    if d.value is not None:
        rep["vector"] = [str(x) for x in d.value]
    return (EXIT_UNKNOWN if d.verdict == "unknown" else EXIT_OK), rep, d.verdict


def cmd_quat(args):
    from .quaternion import is_division, pure_with_square, splits_over

    ctx = Context(args.tower, args.define)
    Q = ctx.algebra(args.a, args.b)
    rep = {"Q": [str(Q.a), str(Q.b)], "tower": str(ctx.tower)}
    lines, code = [], EXIT_OK
    for text in args.element or ():
        x = ctx_parse_quat(ctx, Q, text)
        rep.setdefault("elements", []).append({
            "input": text, "value": str(x), "nrd": str(x.nrd()), "trd": str(x.trd()),
            "conj": str(x.conj()), "square": str(x * x), "pure": x.is_pure()})
        lines.append(f"{x}: Nrd = {x.nrd()}, Trd = {x.trd()}")
    checks = []
    if args.division:
        checks.append(("division", is_division(Q)))
    if args.pure_square:
        checks.append(("pure_square", pure_with_square(Q, ctx.scalar(args.pure_square), budget=args.budget)))
    if args.splits:
        checks.append(("splits", splits_over(Q, ctx.scalar(args.splits), budget=args.budget)))
    for name, d in checks:
        entry = {"verdict": d.verdict}
        if d.certificate is not None:
            entry["certificate"] = d.certificate.to_dict()
        if d.value is not None:
            entry["value"] = str(d.value) if not isinstance(d.value, (list, tuple)) else [str(v) for v in d.value]
        rep[name] = entry
        lines.append(f"{name}: {d.verdict}")
        if d.verdict == "unknown":
            code = EXIT_UNKNOWN
    return code, rep, "\n".join(lines)


def ctx_parse_quat(ctx, alg, text):
    """Quaternion expression; user macros are allowed as scalar coefficients."""
    def resolve(name):
        if name in ("i", "j", "k"):
            return {"i": alg.i, "j": alg.j, "k": alg.k}[name]()
        if name == "sqrtd" and alg.ext is not None:
            return alg.sqrt_d()
        return alg.element(ctx.scalar(name))

    return evaluate(text, resolve, alg.element)


def cmd_similitude(args):
    from .hermitian import IMPROPER, PROPER, SkewHermForm, build_diagonal_similitude

    ctx = Context(args.tower, args.define)
    Q = ctx.algebra(args.a, args.b)
    h = SkewHermForm(Q, [ctx_parse_quat(ctx, Q, e) for e in split_top_level(args.entries)])
    kinds = {"+": PROPER, "-": IMPROPER}
    if set(args.pattern) - set(kinds):
        raise ParseError("pattern uses + (proper) and - (improper) only")
    sim = build_diagonal_similitude(h, ctx.scalar(args.mu), [kinds[c] for c in args.pattern],
                                    budget=args.budget)
    rep = {"form": h.strings(), "similitude": sim.to_dict(), "verified": True}
    return EXIT_OK, rep, f"{sim.kind} similitude, multiplier {sim.mu}\n" + "\n".join(
        "  " + " | ".join(row) for row in sim.to_dict()["matrix"])


def cmd_outness(args):
    from .genericsum import HOLDS, FAILS, decide_out_generic

    ctx = Context(args.tower, args.define)
    squares = ctx.scalars(args.squares)
    if len(squares) < 2 and (args.a is None or args.b is None):
        raise OuterFormsError("give -a/-b or at least two squares")
    a = args.a if args.a is not None else args.squares_list[0]
    b = args.b if args.b is not None else args.squares_list[1]
    Q = ctx.algebra(a, b)
    n = args.n or len(squares)
    if args.even and n % 2:
        raise OuterFormsError("--even given with odd n")
    if args.odd and n % 2 == 0:
        raise OuterFormsError("--odd given with even n")
    asserted = {}
    for item in args.assert_ or ():
        signs, sep, claim = item.partition("=")
        if not sep or set(signs) - {"+", "-"}:
            raise ParseError(f"bad --assert {item!r}, expected SIGNS=CLAIM")
        asserted[signs] = claim
    r = decide_out_generic(squares, Q, n, asserted=asserted, budget=args.budget)
    r.check_monotone()
    decided = all(v in (HOLDS, FAILS) for v in r.verdicts())
    lines = []
    for name, v in (("Out1", r.out1), ("Out2", r.out2), ("Out3", r.out3)):
        tag = "" if v.status == "verified" else f" [{v.status}]"
        lines.append(f"{name}: {v.verdict}{tag}")
    for p in r.patterns:
        d = p.to_dict()
        lines.append(f"  pattern {d['signs']}: {d['verdict']}" + (f" ({d['reason']})" if d.get("reason") else ""))
    return (EXIT_OK if decided else EXIT_UNKNOWN), r.to_dict(), "\n".join(lines)


def cmd_descend(args):
    from .descent import UnitaryDescentDatum, descend
    from .hermitian import UnitaryHermForm

    ctx = Context(args.tower, args.define)
    datum = UnitaryDescentDatum(ctx.algebra(args.a, args.b), ctx.scalar(args.d))
    entries = [ctx_parse_quat(ctx, datum.alg, e) for e in split_top_level(args.entries)]
    res = descend(UnitaryHermForm(datum.alg, entries=entries), datum)
    rep = res.to_dict()
    return (EXIT_OK if res.ok else EXIT_ERROR), rep, f"q = {res.q}\nh' = <{', '.join(rep['hPrime'])}>"


def cmd_verify_paper(args):
    from .corpus import verify_paper

    report = verify_paper(args.corpus, only=args.only, jobs=args.jobs)
    d = report.to_dict()
    lines = []
    for r in sorted(report.results, key=lambda r: r.id):
        if r.status == "verified":
            lines.append(f"{'ok  ' if r.ok else 'FAIL'} {r.id}")
    lines.append(f"{d['verified']} verified, {len(d['regressions'])} regressions")
    lines.append(f"paper-asserted ({len(d['paper_asserted'])}): " + ", ".join(d["paper_asserted"]))
    return (EXIT_OK if report.passed else EXIT_ERROR), d, "\n".join(lines)


# ------------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    # usage errors are errors (1); argparse's default 2 would read as "unknown"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="outerforms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tower=True):
        if tower:
            sp.add_argument("--tower", default="Q", help="field tower, e.g. 'Q(i)[a1,a2][r,s,t]'")
            sp.add_argument("--define", action="append", default=[], metavar="NAME=EXPR",
                            help="scalar macro usable in later arguments")
            sp.add_argument("--budget", type=int, default=None, help="witness search budget")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    s = sub.add_parser("symbol", help="Hilbert symbol over Q")
    common(s)
    s.add_argument("-a", required=True)
    s.add_argument("-b", required=True)
    s.add_argument("--place", required=True, help="prime or 'inf'")
    s.set_defaults(func=cmd_symbol)

    s = sub.add_parser("isotropy", help="isotropy or representation for a diagonal form")
    common(s)
    s.add_argument("--form", required=True, help="comma separated diagonal entries")
    s.add_argument("--value", help="decide whether the form represents this value")
    s.set_defaults(func=cmd_isotropy)

    s = sub.add_parser("quat", help="quaternion arithmetic and decisions")
    common(s)
    s.add_argument("-a", required=True)
    s.add_argument("-b", required=True)
    s.add_argument("--element", action="append", help="quaternion x0 + x1*i + x2*j + x3*k")
    s.add_argument("--division", action="store_true")
    s.add_argument("--pure-square", metavar="C")
    s.add_argument("--splits", metavar="DELTA", help="is Q split by F(sqrt DELTA)?")
    s.set_defaults(func=cmd_quat)

    s = sub.add_parser("similitude", help="diagonal similitude of a skew-hermitian form")
    common(s)
    s.add_argument("-a", required=True)
    s.add_argument("-b", required=True)
    s.add_argument("--entries", required=True, help="comma separated pure quaternions")
    s.add_argument("--mu", required=True)
    s.add_argument("--pattern", required=True, help="one of + (proper) / - (improper) per entry")
    s.set_defaults(func=cmd_similitude)

    s = sub.add_parser("outness", help="decide Out1/Out2/Out3 for a generic sum")
    common(s)
    s.add_argument("--squares", required=True, help="comma separated squares a_1,...")
    s.add_argument("--n", type=int)
    s.add_argument("-a", help="first quaternion parameter (default: first square)")
    s.add_argument("-b", help="second quaternion parameter (default: second square)")
    par = s.add_mutually_exclusive_group()
    par.add_argument("--even", action="store_true")
    par.add_argument("--odd", action="store_true")
    s.add_argument("--assert", dest="assert_", action="append", metavar="SIGNS=CLAIM",
                   help="treat a sign pattern as empty on external authority")
    s.set_defaults(func=cmd_outness)

    s = sub.add_parser("descend", help="unitary descent for rank <= 3")
    common(s)
    s.add_argument("-a", required=True)
    s.add_argument("-b", required=True)
    s.add_argument("-d", required=True)
    s.add_argument("--entries", required=True, help="comma separated theta-symmetric entries")
    s.set_defaults(func=cmd_descend)

    s = sub.add_parser("verify-paper", help="replay the claims corpus")
    common(s, tower=False)
    s.add_argument("--corpus", help="alternative corpus file")
    s.add_argument("--only", action="append", help="restrict to these claim ids")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_verify_paper)
    return p


def run(argv=None, out=None):
    """Parse ``argv``, run the command and print its report; return the exit code."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "squares", None) is not None:
        args.squares_list = split_top_level(args.squares)
    try:
        code, report, text = args.func(args)
    except CapacityError as exc:
        code, report, text = EXIT_UNKNOWN, {"unknown": str(exc), "bound": exc.bound_name,
                                            "limit": exc.bound}, f"unknown: {exc}"
    except ParseError as exc:
        code, report, text = EXIT_ERROR, {"error": str(exc), "position": exc.position}, f"error: {exc}"
    except OuterFormsError as exc:
        code, report, text = EXIT_ERROR, {"error": str(exc)}, f"error: {exc}"
    if args.json:
        print(json.dumps(report, sort_keys=True, separators=(",", ":"), default=str), file=out)
    else:
        print(text, file=out)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
