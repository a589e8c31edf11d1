"""Randomized certification of decomposition identities against direct resultants.

Each trial specializes every parameter to a random rational, computes the
direct Macaulay resultant of the full system (no block splitting, so the
check stays independent of the factor path) and compares it with the
product of evaluated factors.  Equality is required up to one global sign.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .decompose import DecompositionResult, decompose_discriminant, decompose_resultant
from .equivariant import EquivariantSystem, Permutation, check_equivariance
from .polyring import Polynomial, RingContext, Scalar
from .resultant import DegenerateSpecializationError, macaulay_resultant

DEFAULT_TRIALS = 20
DEFAULT_BOUND = 10


# ---------------------------------------------------------------------------
# specialization points


@dataclass(frozen=True)
class SpecializationPoint:
    values: dict
    seed: int
    index: int

    def __getitem__(self, key):
        return self.values[key]


def trial_rng(seed: int, index: int, salt: str = "point") -> random.Random:
    return random.Random(f"{salt}:{seed}:{index}")


def draw_point(parameters, seed: int, index: int, bound: int = DEFAULT_BOUND) -> SpecializationPoint:
    """Rational values with numerators in [-B, B] and denominators in [1, B]."""
    rng = trial_rng(seed, index)
    values = {}
    for name in parameters:
        values[name] = _normal(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))
    return SpecializationPoint(values, seed, index)


def _normal(x: Fraction):
    return x.numerator if x.denominator == 1 else x


# ---------------------------------------------------------------------------
# reports


@dataclass
class Counterexample:
    point: dict
    direct: Scalar
    decomposed: Scalar
    closed_form: Scalar | None = None
    reason: str = ""


@dataclass
class VerificationReport:
    trials_requested: int
    completed: int = 0
    skipped_degenerate: int = 0
    vanishing: int = 0
    sign: int | None = None
    closed_form_sign: int | None = None
    counterexample: Counterexample | None = None
    trial_seconds: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.completed >= 1 and self.counterexample is None and self.sign is not None

    @property
    def sign_label(self) -> str:
        return {1: "+1", -1: "-1", None: "undetermined"}[self.sign]

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "verdict": "pass" if self.passed else "fail",
            "trials_requested": self.trials_requested,
            "completed": self.completed,
            "skipped_degenerate": self.skipped_degenerate,
            "vanishing": self.vanishing,
            "sign": self.sign_label,
        }
        if self.closed_form_sign is not None:
            out["closed_form_sign"] = "+1" if self.closed_form_sign > 0 else "-1"
        if self.counterexample is not None:
            ce = self.counterexample
            out["counterexample"] = {
                "point": {k: str(v) for k, v in ce.point.items()},
                "direct": str(ce.direct),
                "decomposed": str(ce.decomposed),
                "closed_form": None if ce.closed_form is None else str(ce.closed_form),
                "reason": ce.reason,
            }
        if timings:
            out["trial_seconds"] = [round(t, 6) for t in self.trial_seconds]
        return out


def _sign_of(lhs, rhs):
    if lhs == rhs:
        return 1
    if lhs == -rhs:
        return -1
    return None


def _run_trials(
    direct_system,
    decomposition: DecompositionResult,
    trials: int,
    seed: int,
    bound: int,
    scale: Scalar = 1,
    closed_form: Polynomial | None = None,
    closed_scale: Scalar = 1,
) -> VerificationReport:
    """Shared loop: ``Res(direct_system) == +-scale * product`` at random points.

    Points where both sides vanish carry no sign information; they are
    counted in ``vanishing`` and redrawn (up to 3x the requested trials).
    """
    params = decomposition.system.ctx.parameters
    report = VerificationReport(trials)
    if not params:
        trials = 1
    index = 0
    max_draws = 3 * trials + 5
    while report.completed < trials and index < max_draws:
        point = draw_point(params, seed, index, bound)
        rng = trial_rng(seed, index, "change-of-variables")
        index += 1
        start = time.perf_counter()
        specialized = [f.evaluate(point.values) for f in direct_system]
        try:
            lhs = macaulay_resultant(specialized, rng=rng)
            rhs = decomposition.evaluate(point.values, rng=rng) * scale
        except DegenerateSpecializationError:
            report.skipped_degenerate += 1
            continue
        cf = None
        if closed_form is not None:
            cf = closed_form.evaluate(point.values) * closed_scale
        report.trial_seconds.append(time.perf_counter() - start)
        if lhs == 0 and rhs == 0 and (cf is None or cf == 0):
            report.vanishing += 1
            continue
        s = _sign_of(lhs, rhs)
        reason = ""
        if s is None:
            reason = "direct resultant differs from decomposition product"
        elif report.sign is not None and s != report.sign:
            reason = "inconsistent global sign"
        if not reason and cf is not None:
            cs = _sign_of(lhs, cf)
            if cs is None:
                reason = "direct resultant differs from closed form"
            elif report.closed_form_sign is not None and cs != report.closed_form_sign:
                reason = "inconsistent closed-form sign"
            else:
                report.closed_form_sign = cs
        if reason:
            report.counterexample = Counterexample(dict(point.values), lhs, rhs, cf, reason)
            break
        report.sign = s
        report.completed += 1
    return report


def verify_decomposition(
    sys: EquivariantSystem,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    bound: int = DEFAULT_BOUND,
    *,
    closed_form: Polynomial | None = None,
    decomposition: DecompositionResult | None = None,
) -> VerificationReport:
    """Check Res(f^1..f^n) = +-(product of factors) at random rational points.

    ``closed_form`` (a polynomial in the parameters) is compared against
    the direct resultant as a third route when given.
    """
    decomposition = decomposition or decompose_resultant(sys)
    return _run_trials(sys.polys, decomposition, trials, seed, bound, closed_form=closed_form)


def verify_discriminant(
    f: Polynomial,
    ctx: RingContext | None = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    bound: int = DEFAULT_BOUND,
    *,
    closed_form: Polynomial | None = None,
    decomposition: DecompositionResult | None = None,
) -> VerificationReport:
    """Check Res(partials) = +-(product of factors) = +-d^a(n,d) * Disc(f).

    ``closed_form`` is a closed expression for Disc(f) itself; it is scaled
    by ``d ** a(n, d)`` (taken from the decomposition's prefactor) before
    comparison with the resultant of the partials.
    """
    decomposition = decomposition or decompose_discriminant(f, ctx)
    base, a = decomposition.prefactor
    return _run_trials(
        decomposition.system.polys,
        decomposition,
        trials,
        seed,
        bound,
        closed_form=closed_form,
        closed_scale=base ** a,
    )


# ---------------------------------------------------------------------------
# random equivariant systems


def _elementary_symmetric(ctx: RingContext, names: list[str], k: int) -> Polynomial:
    total = ctx.zero()
    for combo in itertools.combinations(names, k):
        term = ctx.one()
        for name in combo:
            term = term * ctx.symbol(name)
        total = total + term
    return total


def _weighted_monomials(weights: list[int], degree: int):
    """Exponent vectors e with sum(e_i * w_i) == degree."""
    if not weights:
        if degree == 0:
            yield ()
        return
    w = weights[0]
    for k in range(degree // w + 1):
        for rest in _weighted_monomials(weights[1:], degree - k * w):
            yield (k,) + rest


def _seed_generators(ctx: RingContext, lead: str, own_rest: list[str], other: list[str]):
    gens = [(ctx.symbol(lead), 1)]
    gens += [(_elementary_symmetric(ctx, own_rest, k), k) for k in range(1, len(own_rest) + 1)]
    gens += [(_elementary_symmetric(ctx, other, k), k) for k in range(1, len(other) + 1)]
    return gens


def _seed_shapes(ctx, lead, own_rest, other, d):
    gens = _seed_generators(ctx, lead, own_rest, other)
    return gens, list(_weighted_monomials([w for _, w in gens], d))


def random_equivariant_system(
    n: int,
    p: int,
    d: int,
    seed: int = 0,
    mode: str = "parameters",
    bound: int = DEFAULT_BOUND,
) -> EquivariantSystem:
    """A random S_{1..p} x S_{p+1..n} equivariant system of degree ``d``.

    f^1 is built from x_1 and the elementary symmetric polynomials of
    {x_2..x_p} and of {x_{p+1}..x_n}, so it is fixed by every permutation
    fixing 1; the rest of the first block is its orbit under (1 i).  The
    second block is seeded the same way at x_{p+1}.  In ``"parameters"``
    mode every coefficient is a fresh parameter ``c1, c2, ...``; in
    ``"rational"`` mode coefficients are random rationals.
    """
    if not 1 <= p < n:
        raise ValueError("need 1 <= p < n")
    if d < 1:
        raise ValueError("need d >= 1")
    if mode not in ("parameters", "rational"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(f"system:{n}:{p}:{d}:{seed}")
    xs = [f"x{i}" for i in range(1, n + 1)]
    base = RingContext(tuple(xs), (), p)
    shapes = [
        _seed_shapes(base, xs[0], xs[1:p], xs[p:], d),
        _seed_shapes(base, xs[p], xs[p + 1:], xs[:p], d),
    ]
    if mode == "parameters":
        count = sum(len(s[1]) for s in shapes)
        ctx = RingContext(tuple(xs), tuple(f"c{k}" for k in range(1, count + 1)), p)
    else:
        ctx = base
    seeds = []
    counter = itertools.count(1)
    for gens, exps in shapes:
        f = ctx.zero()
        lifted = [g.change_context(ctx) for g, _ in gens]
        for e in exps:
            term = ctx.one()
            for g, k in zip(lifted, e):
                if k:
                    term = term * g ** k
            if mode == "parameters":
                coef = ctx.symbol(f"c{next(counter)}")
            else:
                num = 0
                while num == 0:
                    num = rng.randint(-bound, bound)
                coef = ctx.constant(Fraction(num, rng.randint(1, bound)))
            f = f + coef * term
        seeds.append(f)
    polys = [seeds[0]]
    for i in range(2, p + 1):
        polys.append(Permutation.transposition(n, p, 1, i).act(seeds[0]))
    polys.append(seeds[1])
    for j in range(p + 2, n + 1):
        polys.append(Permutation.transposition(n, p, p + 1, j).act(seeds[1]))
    return check_equivariance(polys, ctx)


# ---------------------------------------------------------------------------
# combinatorial oracle


BRUTE_FORCE_LIMIT = 9


def _set_partitions(elements: list):
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def brute_force_multinomial(lam) -> int:
    """Count set partitions of {1..p} whose block sizes are exactly ``lam``."""
    p = lam.total
    if p > BRUTE_FORCE_LIMIT:
        raise ValueError(f"p = {p} exceeds the enumeration bound {BRUTE_FORCE_LIMIT}")
    target = sorted(lam.parts)
    return sum(1 for sp in _set_partitions(list(range(p))) if sorted(map(len, sp)) == target)


def bell_numbers(limit: int) -> list[int]:
    """Bell numbers B_0..B_limit via the Bell triangle."""
    bells = [1]
    row = [1]
    for _ in range(limit):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
        bells.append(row[0])
    return bells
