"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 verification failure,
3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .combinatorics import enumerate_pairs, enumerate_partitions, multinomial_m
from .decompose import (
    DISCRIMINANT,
    DecompositionError,
    DecompositionResult,
    decompose_discriminant,
    decompose_resultant,
    degree_audit,
)
from .equivariant import DividedDifferenceError, EquivarianceError, check_equivariance, check_invariance
from .oracle import DEFAULT_BOUND, DEFAULT_TRIALS, draw_point, verify_decomposition, verify_discriminant
from .polyring import ParseError, Polynomial, RingContext
from .resultant import (
    DEFAULT_SYMBOLIC_CAP,
    DegenerateSpecializationError,
    ResultantError,
    SymbolicCapError,
    macaulay_resultant,
    resultant,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY = 2
EXIT_IO = 3


class InputError(Exception):
    """Unreadable or malformed input (exit code 3)."""


class ValidationFailure(Exception):
    """Input parsed but failed a mathematical precondition (exit code 1)."""


@dataclass
class SystemFile:
    ctx: RingContext
    degree: int
    system: list[Polynomial] | None = None
    polynomial: Polynomial | None = None
    closed_form: Polynomial | None = None

    @property
    def mode(self) -> str:
        return "system" if self.system is not None else "polynomial"


def _parse_in(text, ctx, what):
    try:
        return ctx.parse(text)
    except ParseError as exc:
        raise InputError(f"{what}: {exc}") from exc


def load_system_file(path: str) -> SystemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        n = int(doc["n"])
        p = int(doc["p"])
        degree = int(doc["degree"])
        variables = list(doc["variables"])
        parameters = list(doc.get("parameters", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: missing or malformed field ({exc})") from exc
    if len(variables) != n:
        raise InputError(f"{path}: n = {n} but {len(variables)} variables declared")
    if ("system" in doc) == ("polynomial" in doc):
        raise InputError(f"{path}: give exactly one of 'system' or 'polynomial'")
    try:
        ctx = RingContext(tuple(variables), tuple(parameters), p)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    closed = None
    if "closed_form" in doc:
        closed = _parse_in(doc["closed_form"], ctx.coefficient_context(), "closed_form")
    if "system" in doc:
        strings = list(doc["system"])
        if len(strings) != n:
            raise InputError(f"{path}: n = {n} but {len(strings)} polynomials given")
        polys = [_parse_in(s, ctx, f"system[{i}]") for i, s in enumerate(strings)]
        for i, f in enumerate(polys, 1):
            if f.degree() != degree:
                raise ValidationFailure(f"f^{{{i}}} has degree {f.degree()}, file declares {degree}")
        return SystemFile(ctx, degree, system=polys, closed_form=closed)
    f = _parse_in(doc["polynomial"], ctx, "polynomial")
    if f.degree() != degree:
        raise ValidationFailure(f"polynomial has degree {f.degree()}, file declares {degree}")
    return SystemFile(ctx, degree, polynomial=f, closed_form=closed)


def parse_assignment(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise InputError(f"bad --at item {item!r}; expected name=value")
        name, value = (s.strip() for s in item.split("=", 1))
        try:
            v = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad value for {name}: {value!r}") from exc
        out[name] = v.numerator if v.denominator == 1 else v
    return out


def _check_point(point: dict, ctx: RingContext):
    unknown = [k for k in point if not ctx.is_parameter(k)]
    if unknown:
        raise InputError(f"--at assigns unknown parameters: {', '.join(unknown)}")


def _fmt(v) -> str:
    return str(v)


# ---------------------------------------------------------------------------
# decomposition rendering


def _evaluate_factors(result: DecompositionResult, point: dict, cap: int):
    """Per-factor values; None where a symbolic evaluation would exceed the cap."""
    rng = random.Random(0)
    values = []
    for fac in result.factors:
        try:
            values.append(fac.evaluate(point or None, symbolic_cap=cap, rng=rng))
        except SymbolicCapError:
            values.append(None)
    return values


def decomposition_document(result: DecompositionResult, values=None, point=None) -> dict:
    ctx = result.system.ctx
    doc = {
        "variant": result.variant,
        "case": result.case,
        "n": result.n,
        "p": result.p,
        "q": result.q,
        "d": result.d,
        "variables": list(ctx.variables),
        "parameters": list(ctx.parameters),
        "prefactor": None if result.prefactor is None else {
            "base": result.prefactor[0], "exponent": result.prefactor[1]},
        "point": None if not point else {k: str(v) for k, v in point.items()},
        "factors": [],
    }
    for i, fac in enumerate(result.factors):
        entry = {"kind": fac.kind, "exponent": fac.exponent}
        if fac.kind == "constant":
            entry["block"] = fac.block
            entry["value"] = fac.value.format()
        else:
            entry["pair"] = [list(fac.pair.first.parts), list(fac.pair.second.parts)]
            entry["variables"] = list(fac.system[0].ctx.variables)
            entry["system"] = [f.format() for f in fac.system]
        if values is not None:
            entry["evaluated"] = None if values[i] is None else _fmt(values[i])
        doc["factors"].append(entry)
    if values is not None and all(v is not None for v in values) and point:
        doc["product"] = _fmt(result.evaluate(values=values))
    return doc


def _render_text(result: DecompositionResult, values, point) -> list[str]:
    lines = []
    title = "discriminant" if result.variant == DISCRIMINANT else "resultant"
    lines.append(f"{title} decomposition: n={result.n} p={result.p} q={result.q} d={result.d}")
    lines.append(f"case: {result.case}")
    if result.prefactor is not None:
        base, a = result.prefactor
        lines.append(f"prefactor: {base}^{a} * Disc(f) = Res(partials) = +-(product below)")
    if point:
        lines.append("point: " + ", ".join(f"{k}={v}" for k, v in point.items()))
    for i, fac in enumerate(result.factors):
        if fac.kind == "constant":
            lines.append(f"[{i + 1}] constant f^(block {fac.block}) = {fac.value} ; exponent mu{fac.block} = {fac.exponent}")
        else:
            lines.append(f"[{i + 1}] Lambda = {fac.pair} ; exponent m*m' = {fac.exponent}")
            for f in fac.system:
                lines.append(f"      {f}")
        if values is not None:
            v = values[i]
            lines.append("      value: " + ("not evaluated (exceeds symbolic cap; pass --at)" if v is None else _fmt(v)))
    if values is not None and all(v is not None for v in values):
        audit = degree_audit(result, values if not point else None)
        lines.extend("audit: " + s for s in audit.lines())
        if point:
            lines.append(f"product: {result.evaluate(values=values)}")
    return lines


def _emit(args, doc: dict, lines: list[str]):
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        print("\n".join(lines))


# ---------------------------------------------------------------------------
# subcommands


def _system_of(sf: SystemFile):
    return check_equivariance(sf.system, sf.ctx)


def cmd_check(args) -> int:
    sf = load_system_file(args.file)
    if sf.mode == "system":
        sys_ = _system_of(sf)
        msg = (f"valid: {sys_.n} polynomials of degree {sys_.degree} equivariant under "
               f"S_{{1..{sys_.p}}} x S_{{{sys_.p + 1}..{sys_.n}}}")
    else:
        check_invariance(sf.polynomial, sf.ctx)
        decompose_discriminant(sf.polynomial, sf.ctx)
        msg = (f"valid: degree-{sf.degree} form invariant under S_{{1..{sf.ctx.p}}} x "
               f"S_{{{sf.ctx.p + 1}..{sf.ctx.n}}}; partial derivatives form an equivariant system")
    if args.json:
        print(json.dumps({"valid": True, "message": msg}))
    else:
        print(msg)
    return EXIT_OK


def _decomposition_cmd(args, result: DecompositionResult) -> int:
    point = parse_assignment(args.at)
    _check_point(point, result.system.ctx)
    values = None if args.no_eval else _evaluate_factors(result, point, args.symbolic_cap)
    _emit(args, decomposition_document(result, values, point), _render_text(result, values, point))
    return EXIT_OK


def cmd_decompose(args) -> int:
    sf = load_system_file(args.file)
    if sf.mode != "system":
        raise ValidationFailure("decompose expects a 'system' file; use 'discriminant' for a polynomial")
    return _decomposition_cmd(args, decompose_resultant(_system_of(sf)))


def cmd_discriminant(args) -> int:
    sf = load_system_file(args.file)
    if sf.mode != "polynomial":
        raise ValidationFailure("discriminant expects a 'polynomial' file")
    return _decomposition_cmd(args, decompose_discriminant(sf.polynomial, sf.ctx))


def _direct_polys(sf: SystemFile):
    if sf.mode == "system":
        return sf.system
    return [sf.polynomial.partial_derivative(v) for v in sf.ctx.variables]


def cmd_resultant(args) -> int:
    sf = load_system_file(args.file)
    point = parse_assignment(args.at)
    _check_point(point, sf.ctx)
    polys = _direct_polys(sf)
    if point:
        polys = [f.evaluate(point) for f in polys]
    rng = random.Random(0)
    if args.decomposed:
        result = (decompose_resultant(_system_of(sf)) if sf.mode == "system"
                  else decompose_discriminant(sf.polynomial, sf.ctx))
        values = _evaluate_factors(result, point, args.symbolic_cap)
        if any(v is None for v in values):
            raise ValidationFailure("a factor exceeds the symbolic cap; pass --at")
        value = result.evaluate(values=values)
        how = "decomposed"
    else:
        try:
            value = macaulay_resultant(polys, symbolic_cap=args.symbolic_cap, rng=rng)
        except SymbolicCapError as exc:
            raise ValidationFailure(f"{exc} (pass --at name=value,...)") from exc
        how = "direct"
    if args.json:
        print(json.dumps({"method": how, "point": {k: str(v) for k, v in point.items()} or None,
                          "resultant": _fmt(value)}, indent=2))
    else:
        print(f"{how} resultant: {value}")
    return EXIT_OK


def cmd_verify(args) -> int:
    sf = load_system_file(args.file)
    if sf.mode == "system":
        report = verify_decomposition(_system_of(sf), args.trials, args.seed, args.bound,
                                      closed_form=sf.closed_form)
    else:
        report = verify_discriminant(sf.polynomial, sf.ctx, args.trials, args.seed, args.bound,
                                     closed_form=sf.closed_form)
    doc = report.to_dict(timings=args.timings)
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(f"verdict: {doc['verdict']}")
        print(f"trials: {report.completed}/{report.trials_requested} completed, "
              f"{report.skipped_degenerate} skipped (degenerate), {report.vanishing} vanishing")
        print(f"global sign: {report.sign_label}")
        if "closed_form_sign" in doc:
            print(f"closed-form sign: {doc['closed_form_sign']}")
        if report.counterexample is not None:
            ce = doc["counterexample"]
            print(f"counterexample ({ce['reason']}) at " + ", ".join(f"{k}={v}" for k, v in ce["point"].items()))
            print(f"  direct:     {ce['direct']}")
            print(f"  decomposed: {ce['decomposed']}")
        if args.timings:
            print("trial seconds: " + " ".join(f"{t:.3f}" for t in report.trial_seconds))
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_partitions(args) -> int:
    if args.q is None:
        parts = enumerate_partitions(args.n, args.max_length)
        rows = [{"partition": list(lam.parts), "length": lam.length, "m": multinomial_m(lam)} for lam in parts]
        if args.json:
            print(json.dumps(rows, indent=2))
        else:
            for r in rows:
                print(f"{tuple(r['partition'])}  r={r['length']}  m={r['m']}")
            print(f"count={len(rows)}  sum m={sum(r['m'] for r in rows)}")
    else:
        pairs = enumerate_pairs(args.n, args.q, args.max_length, args.max_length)
        rows = [{"first": list(pp.first.parts), "second": list(pp.second.parts), "weight": pp.weight}
                for pp in pairs]
        if args.json:
            print(json.dumps(rows, indent=2))
        else:
            for pp in pairs:
                print(f"{pp}  m*m'={pp.weight}")
            print(f"count={len(pairs)}")
    return EXIT_OK


def cmd_bench(args) -> int:
    sf = load_system_file(args.file)
    result = (decompose_resultant(_system_of(sf)) if sf.mode == "system"
              else decompose_discriminant(sf.polynomial, sf.ctx))
    polys = _direct_polys(sf)
    rows = []
    for i in range(args.trials):
        point = draw_point(sf.ctx.parameters, args.seed, i, args.bound).values
        specialized = [f.evaluate(point) for f in polys]
        t0 = time.perf_counter()
        try:
            direct = macaulay_resultant(specialized, rng=random.Random(i))
        except DegenerateSpecializationError:
            continue
        t_direct = time.perf_counter() - t0
        times = []
        values = []
        rng = random.Random(i)
        for fac in result.factors:
            t1 = time.perf_counter()
            values.append(fac.evaluate(point, rng=rng))
            times.append(time.perf_counter() - t1)
        product = result.evaluate(values=values)
        agree = direct == product or direct == -product
        rows.append((i, t_direct, sum(times), max(times), agree))
    if args.json:
        print(json.dumps({
            "factors": len(result.factors),
            "trials": [{"index": i, "direct_s": round(a, 6), "factors_sum_s": round(b, 6),
                        "factors_max_s": round(c, 6), "agree": ok} for i, a, b, c, ok in rows],
        }, indent=2))
    else:
        print(f"factors: {len(result.factors)}")
        print(f"{'trial':>5} {'direct[s]':>10} {'sum[s]':>10} {'max[s]':>10} {'speedup':>8} agree")
        for i, a, b, c, ok in rows:
            print(f"{i:>5} {a:>10.4f} {b:>10.4f} {c:>10.4f} {a / b if b else float('inf'):>8.1f} {ok}")
    return EXIT_OK if all(r[4] for r in rows) else EXIT_VERIFY


def cmd_evaluate(args) -> int:
    """Re-evaluate the factors of a ``decompose --json`` document."""
    try:
        with open(args.file, encoding="utf-8") as fh:
            doc = json.load(fh)
        params = tuple(doc["parameters"])
        factors = doc["factors"]
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from exc
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"{args.file} is not a decomposition document: {exc}") from exc
    point = parse_assignment(args.at)
    if not point and doc.get("point"):
        point = parse_assignment(",".join(f"{k}={v}" for k, v in doc["point"].items()))
    cctx = RingContext((), params)
    rng = random.Random(0)
    values = []
    total = 1
    for fac in factors:
        if fac["kind"] == "constant":
            v = _parse_in(fac["value"], cctx, "constant factor")
            v = v.evaluate(point) if point else v
            if isinstance(v, Polynomial) and v.is_constant():
                v = v.constant_value()
        else:
            fctx = RingContext(tuple(fac["variables"]), params)
            polys = [_parse_in(s, fctx, "factor polynomial") for s in fac["system"]]
            if point:
                polys = [f.evaluate(point) for f in polys]
            try:
                v = resultant(polys, symbolic_cap=args.symbolic_cap, rng=rng)
            except SymbolicCapError:
                v = None
        values.append(v)
        if v is not None and total is not None:
            total = v ** fac["exponent"] * total
        else:
            total = None
    out = {"values": [None if v is None else _fmt(v) for v in values]}
    if point and total is not None:
        out["product"] = _fmt(total)
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        for i, v in enumerate(out["values"], 1):
            print(f"[{i}] {v}")
        if "product" in out:
            print(f"product: {out['product']}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqres",
        description="Resultants of block-equivariant systems and discriminants of block-invariant forms.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, file=True):
        if file:
            p.add_argument("file", help="system file (JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    def evaluation(p):
        p.add_argument("--at", help="parameter assignment, e.g. a=1,b=2/3")
        p.add_argument("--symbolic-cap", type=int, default=DEFAULT_SYMBOLIC_CAP,
                       help="largest Macaulay matrix evaluated over Q[parameters] (default %(default)s)")

    def trials(p):
        p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--bound", type=int, default=DEFAULT_BOUND)

    p = sub.add_parser("check", help="validate equivariance / invariance")
    common(p)
    p.set_defaults(func=cmd_check)

    for name, func, helptext in (("decompose", cmd_decompose, "decompose the resultant of a system"),
                                 ("discriminant", cmd_discriminant, "decompose the discriminant of a form")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        evaluation(p)
        p.add_argument("--no-eval", action="store_true", help="print factor systems only")
        p.set_defaults(func=func)

    p = sub.add_parser("resultant", help="compute the resultant directly (or via the decomposition)")
    common(p)
    evaluation(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--direct", action="store_true", default=True, help="full Macaulay matrix (default)")
    mode.add_argument("--decomposed", action="store_true", help="product of decomposition factors")
    p.set_defaults(func=cmd_resultant)

    p = sub.add_parser("verify", help="randomized check of the decomposition against the direct resultant")
    common(p)
    trials(p)
    p.add_argument("--timings", action="store_true", help="include per-trial wall times")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("partitions", help="list partitions (or partition pairs) with their weights")
    p.add_argument("n", type=int)
    p.add_argument("q", type=int, nargs="?", help="second block size: list pairs instead")
    p.add_argument("--max-length", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("bench", help="time direct vs decomposed evaluation")
    common(p)
    trials(p)
    p.set_defaults(func=cmd_bench, trials=3)

    p = sub.add_parser("evaluate", help="evaluate a 'decompose --json' document")
    common(p)
    evaluation(p)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationFailure, EquivarianceError, DividedDifferenceError, DecompositionError,
            ResultantError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DegenerateSpecializationError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
