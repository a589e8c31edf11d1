"""Splitting equivariant resultants and invariant discriminants into small factors."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .combinatorics import PartitionPair, enumerate_pairs, enumerate_partitions, falling_product, multinomial_m
from .equivariant import (
    EquivarianceError,
    EquivariantSystem,
    build_factor_system,
    check_equivariance,
    check_invariance,
    constant_divided_difference,
)
from .polyring import Polynomial, RingContext, Scalar
from .resultant import DEFAULT_SYMBOLIC_CAP, resultant

RESULTANT = "resultant"
DISCRIMINANT = "discriminant"


class DecompositionError(ValueError):
    pass


def _mu(n: int, d: int, own: int, other: int) -> int:
    total = n * d ** (n - 1)
    for lam in enumerate_partitions(own, max_length=d):
        r = lam.length
        fall = falling_product(d, r)
        inner = sum(fall * d ** other // (d - j + 1) for j in range(1, r + 1))
        inner += fall * other * d ** (other - 1)
        total -= multinomial_m(lam) * inner
    return total


def mu_exponent(n: int, d: int, p: int, q: int, block: int, variant: str = RESULTANT) -> int:
    """Exponent of the constant divided-difference factor of ``block``.

    For the discriminant variant ``d`` is the degree of the invariant form;
    the counting runs with ``d - 1`` (the degree of its partials).
    """
    if p + q != n:
        raise DecompositionError("p + q must equal n")
    if variant not in (RESULTANT, DISCRIMINANT):
        raise DecompositionError(f"unknown variant {variant!r}")
    own, other = (p, q) if block == 1 else (q, p)
    e = d if variant == RESULTANT else d - 1
    if own <= e:
        rel = ">" if variant == RESULTANT else ">="
        raise DecompositionError(
            f"block {block} has size {own}; the constant factor only occurs when size {rel} d"
        )
    if e < 1:
        raise DecompositionError("degree too small")
    value = _mu(n, e, own, other)
    if value < 0:
        raise DecompositionError(f"negative exponent mu = {value} for (n,d,p,q)=({n},{d},{p},{q})")
    return value


def a_exponent(n: int, d: int) -> int:
    """((d-1)^n - (-1)^n) / d, the power of d relating Res(partials) to Disc."""
    if n < 2 or d < 2:
        raise DecompositionError("a(n, d) needs n >= 2 and d >= 2")
    num = (d - 1) ** n - (-1) ** n
    assert num % d == 0
    return num // d


@dataclass
class DecompositionFactor:
    kind: str  # "constant" or "resultant"
    exponent: int
    block: int | None = None
    value: Polynomial | None = None
    pair: PartitionPair | None = None
    system: list[Polynomial] | None = None

    @property
    def label(self) -> str:
        if self.kind == "constant":
            return f"const[block {self.block}]"
        return f"Res{self.pair}"

    def evaluate(self, point: Mapping[str, Scalar] | None = None, *, symbolic_cap=DEFAULT_SYMBOLIC_CAP, rng=None):
        if self.kind == "constant":
            v = self.value
            if point:
                v = v.evaluate(point)
            if isinstance(v, Polynomial) and v.is_constant():
                return v.constant_value()
            return v
        polys = self.system
        if point:
            polys = [f.evaluate(point) for f in polys]
        return resultant(polys, symbolic_cap=symbolic_cap, rng=rng)

    def coefficient_degree(self, base_degree: int = 1) -> int:
        """Degree of this factor in the coefficients of the input system."""
        if self.kind == "constant":
            return base_degree
        degs = [f.degree() for f in self.system]
        total = 0
        for i in range(len(degs)):
            prod_other = 1
            for j, dj in enumerate(degs):
                if j != i:
                    prod_other *= dj
            total += prod_other
        return total * base_degree


@dataclass
class DecompositionResult:
    variant: str
    case: str
    n: int
    p: int
    q: int
    d: int
    factors: list[DecompositionFactor]
    system: EquivariantSystem
    prefactor: tuple[int, int] | None = None  # (base d, exponent a(n,d)) for discriminants
    source: Polynomial | None = None

    @property
    def constant_factors(self):
        return [f for f in self.factors if f.kind == "constant"]

    @property
    def resultant_factors(self):
        return [f for f in self.factors if f.kind == "resultant"]

    def evaluate_factors(self, point=None, *, symbolic_cap=DEFAULT_SYMBOLIC_CAP, rng=None) -> list:
        rng = rng or random.Random(0)
        return [f.evaluate(point, symbolic_cap=symbolic_cap, rng=rng) for f in self.factors]

    def evaluate(self, point=None, *, symbolic_cap=DEFAULT_SYMBOLIC_CAP, rng=None, values=None):
        """Product of all factors raised to their exponents.

        For the discriminant variant this is ``d**a(n,d) * Disc(f)``, i.e.
        the resultant of the partial derivatives.
        """
        if values is None:
            values = self.evaluate_factors(point, symbolic_cap=symbolic_cap, rng=rng)
        total = 1
        for fac, v in zip(self.factors, values):
            total = v ** fac.exponent * total
        if isinstance(total, Fraction) and total.denominator == 1:
            total = total.numerator
        return total

    def discriminant(self, point=None, **kw):
        """Disc(f) = product / d**a(n,d) (discriminant variant only)."""
        if self.prefactor is None:
            raise DecompositionError("not a discriminant decomposition")
        base, a = self.prefactor
        value = self.evaluate(point, **kw)
        if isinstance(value, Polynomial):
            return value.scale(Fraction(1, base ** a))
        return Fraction(value, base ** a) if isinstance(value, int) else value / base ** a


def _case_label(p, q, d, variant):
    if variant == RESULTANT:
        a = "p>d" if p > d else "p<=d"
        b = "q>d" if q > d else "q<=d"
    else:
        a = "p>=d" if p >= d else "p<d"
        b = "q>=d" if q >= d else "q<d"
    return f"{a}, {b}"


def _decompose(sys: EquivariantSystem, variant: str, d_label: int) -> list[DecompositionFactor]:
    e = sys.degree
    n, p, q = sys.n, sys.p, sys.q
    factors = []
    for block, size in ((1, p), (2, q)):
        if size > e:
            value = constant_divided_difference(sys, block)
            mu = mu_exponent(n, d_label, p, q, block, variant)
            factors.append(DecompositionFactor("constant", mu, block=block, value=value.change_context(
                sys.ctx.coefficient_context())))
    for pair in enumerate_pairs(p, q, cap1=e, cap2=e):
        factors.append(
            DecompositionFactor("resultant", pair.weight, pair=pair, system=build_factor_system(sys, pair))
        )
    return factors


def decompose_resultant(sys: EquivariantSystem) -> DecompositionResult:
    """Structural decomposition of Res(f^1, ..., f^n); factors are evaluated lazily."""
    if sys.n < 2:
        raise DecompositionError("need n >= 2")
    d = sys.degree
    if d < 1:
        raise DecompositionError("polynomials must have degree >= 1")
    factors = _decompose(sys, RESULTANT, d)
    return DecompositionResult(RESULTANT, _case_label(sys.p, sys.q, d, RESULTANT), sys.n, sys.p, sys.q, d,
                               factors, sys)


def partials_system(f: Polynomial, ctx: RingContext | None = None) -> EquivariantSystem:
    ctx = ctx or f.ctx
    partials = [f.partial_derivative(v) for v in ctx.variables]
    return check_equivariance(partials, ctx)


def decompose_discriminant(f: Polynomial, ctx: RingContext | None = None) -> DecompositionResult:
    """Decomposition of d**a(n,d) * Disc(f) for a block-invariant form f."""
    ctx = ctx or f.ctx
    if f.ctx != ctx:
        raise DecompositionError("polynomial does not live in the given context")
    if f.is_zero() or not f.is_homogeneous():
        raise EquivarianceError("input must be a nonzero homogeneous polynomial")
    d = f.degree()
    if d < 2:
        raise DecompositionError(f"discriminant needs degree >= 2, got {d}")
    n = ctx.n
    if n < 2:
        raise DecompositionError("discriminant needs n >= 2")
    check_invariance(f, ctx)
    sys = partials_system(f, ctx)
    factors = _decompose(sys, DISCRIMINANT, d)
    return DecompositionResult(DISCRIMINANT, _case_label(ctx.split, n - ctx.split, d, DISCRIMINANT), n,
                               ctx.split, n - ctx.split, d, factors, sys, prefactor=(d, a_exponent(n, d)),
                               source=f)


# ---------------------------------------------------------------------------
# degree bookkeeping


@dataclass
class DegreeAuditEntry:
    label: str
    exponent: int
    factor_degree: int
    contribution: int


@dataclass
class DegreeAudit:
    mode: str  # "parameter" (evaluated symbolically) or "coefficient" (multidegree bookkeeping)
    entries: list[DegreeAuditEntry]
    total: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.total == self.expected

    def lines(self) -> list[str]:
        out = [f"{e.label}: degree {e.factor_degree} x exponent {e.exponent} = {e.contribution}" for e in self.entries]
        out.append(f"total {self.total} (expected {self.expected}) [{self.mode} degrees] {'ok' if self.ok else 'MISMATCH'}")
        return out


def degree_audit(result: DecompositionResult, values: list | None = None) -> DegreeAudit:
    """Check that exponent-weighted factor degrees add up to n * e^(n-1).

    With symbolic ``values`` the parameter degrees of the evaluated factors
    are used (meaningful when every input coefficient has parameter degree
    <= 1); otherwise degrees come from multidegree bookkeeping.
    """
    e = result.system.degree
    expected = result.n * e ** (result.n - 1)
    entries = []
    mode = "parameter" if values is not None else "coefficient"
    for i, fac in enumerate(result.factors):
        if values is not None:
            v = values[i]
            deg = v.parameter_degree() if isinstance(v, Polynomial) else 0
            if deg == float("-inf"):
                deg = 0
        else:
            deg = fac.coefficient_degree()
        entries.append(DegreeAuditEntry(fac.label, fac.exponent, int(deg), int(deg) * fac.exponent))
    return DegreeAudit(mode, entries, sum(x.contribution for x in entries), expected)
