"""Exact resultants of square homogeneous systems.

Three engines live here:

* :func:`macaulay_resultant` -- the classical Macaulay quotient
  ``det(M) / det(M')`` at critical degree ``nu = 1 + sum(d_i - 1)``;
* :func:`sylvester_resultant` -- the bivariate Sylvester determinant;
* :func:`resultant` -- a dispatcher that peels off block-triangular
  subsystems and then uses Sylvester (two variables) or Macaulay.

All determinants go through :func:`determinant_fraction_free`, a Bareiss
elimination over the integers or over Z[parameters].  Results are scalars
when the input coefficients are numbers and polynomials in the parameter
ring otherwise.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Sequence

from .polyring import Polynomial, RingContext, Scalar, normalize_scalar

try:  # GMP-backed integers make the exact divisions several times faster
    from gmpy2 import divexact as _divexact
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int

    def _divexact(x, y):
        return x // y

DEFAULT_SYMBOLIC_CAP = 64
MAX_RETRIES = 5


class ResultantError(ValueError):
    """Malformed input system."""


class DegenerateSpecializationError(ArithmeticError):
    """The reduced Macaulay minor stayed singular after every change of variables."""


class SymbolicCapError(ValueError):
    """A symbolic Macaulay matrix would exceed the configured size cap."""


# ---------------------------------------------------------------------------
# determinants


def _bareiss_int(rows: list[list[int]]) -> int:
    """Bareiss elimination over Z with lazily rescaled rows.

    A row whose pivot-column entry is zero would only be multiplied by
    ``akk / prev``.  Instead each row keeps the divisor that was current
    when it was last touched; updating it later with that divisor gives
    the same (exact) Bareiss value.
    """
    n = len(rows)
    if n == 0:
        return 1
    a = [[_mpz(x) for x in r] for r in rows]
    divisor = [_mpz(1)] * n
    dx = _divexact
    sign = 1
    prev = _mpz(1)
    for k in range(n - 1):
        piv = None
        best = None
        for i in range(k, n):
            v = a[i][k]
            if v:
                # prefer sparse rows to limit fill-in
                cost = len(a[i]) - k - a[i][k:].count(0)
                if best is None or cost < best:
                    piv, best = i, cost
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            divisor[k], divisor[piv] = divisor[piv], divisor[k]
            sign = -sign
        rowk = a[k]
        if divisor[k] != prev:
            dk = divisor[k]
            rowk[k:] = [dx(x * prev, dk) for x in rowk[k:]]
            divisor[k] = prev
        akk = rowk[k]
        tail_k = rowk[k + 1:]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            if aik:
                di = divisor[i]
                rowi[k + 1:] = [dx(akk * x - aik * y, di) for x, y in zip(rowi[k + 1:], tail_k)]
                rowi[k] = 0
                divisor[i] = akk
        prev = akk
    last = a[n - 1][n - 1]
    if divisor[n - 1] != prev:
        last = dx(last * prev, divisor[n - 1])
    return sign * int(last)


def _bareiss_poly(rows: list[list[Polynomial]], ctx: RingContext) -> Polynomial:
    """Bareiss over Z[parameters]; same lazy row scaling as the integer version."""
    n = len(rows)
    if n == 0:
        return ctx.one()
    a = [list(r) for r in rows]
    one = ctx.one()
    divisor = [one] * n
    sign = 1
    prev = one
    for k in range(n - 1):
        piv = None
        best = None
        for i in range(k, n):
            v = a[i][k]
            if v:
                cost = (len(v), sum(1 for x in a[i][k:] if x))
                if best is None or cost < best:
                    piv, best = i, cost
        if piv is None:
            return ctx.zero()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            divisor[k], divisor[piv] = divisor[piv], divisor[k]
            sign = -sign
        rowk = a[k]
        if divisor[k] != prev:
            dk = divisor[k]
            rowk[k:] = [(x * prev).exact_divide(dk) if x else x for x in rowk[k:]]
            divisor[k] = prev
        akk = rowk[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            if not aik:
                continue
            di = divisor[i]
            for j in range(k + 1, n):
                x = rowi[j]
                y = rowk[j]
                if y:
                    num = akk * x - aik * y if x else -(aik * y)
                elif x:
                    num = akk * x
                else:
                    continue
                rowi[j] = num.exact_divide(di) if di != one else num
            rowi[k] = ctx.zero()
            divisor[i] = akk
        prev = akk
    det = a[n - 1][n - 1]
    if divisor[n - 1] != prev:
        det = (det * prev).exact_divide(divisor[n - 1])
    return det if sign > 0 else -det


def determinant_fraction_free(matrix: Sequence[Sequence]) -> Scalar | Polynomial:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Entries may be ints, Fractions, or Polynomials sharing one context.
    Rational denominators are cleared row by row first and the scaling is
    divided back out at the end.
    """
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise ValueError("matrix must be square")
    ctx = None
    for row in matrix:
        for v in row:
            if isinstance(v, Polynomial):
                ctx = v.ctx
                break
        if ctx is not None:
            break

    if ctx is None:
        scale = 1
        rows = []
        for row in matrix:
            row = [normalize_scalar(v) for v in row]
            den = math.lcm(*(v.denominator for v in row if isinstance(v, Fraction))) if any(
                isinstance(v, Fraction) for v in row) else 1
            scale *= den
            rows.append([int(v * den) for v in row])
        det = _bareiss_int(rows)
        return normalize_scalar(Fraction(det, scale)) if scale != 1 else det

    scale = 1
    rows = []
    for row in matrix:
        prow = [v if isinstance(v, Polynomial) else ctx.constant(v) for v in row]
        den = math.lcm(*(v.content_denominator() for v in prow))
        scale *= den
        rows.append([v.scale(den) if den != 1 else v for v in prow])
    det = _bareiss_poly(rows, ctx)
    return det.scale(Fraction(1, scale)) if scale != 1 else det


# ---------------------------------------------------------------------------
# Macaulay construction


def _monomials(m: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given degree in m variables, lex-descending."""
    if m == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in _monomials(m - 1, degree - first):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class MacaulayLayout:
    degrees: tuple[int, ...]
    nu: int
    monomials: tuple[tuple[int, ...], ...]
    owners: tuple[int, ...]
    nonreduced: tuple[bool, ...]

    @property
    def size(self) -> int:
        return len(self.monomials)

    @property
    def minor_indices(self) -> list[int]:
        return [i for i, flag in enumerate(self.nonreduced) if flag]


@lru_cache(maxsize=256)
def macaulay_layout(degrees: tuple[int, ...]) -> MacaulayLayout:
    degrees = tuple(degrees)
    if not degrees or any(d < 1 for d in degrees):
        raise ResultantError(f"degrees must all be >= 1: {degrees}")
    m = len(degrees)
    nu = 1 + sum(d - 1 for d in degrees)
    mons = _monomials(m, nu)
    owners = []
    flags = []
    for a in mons:
        div = [i for i in range(m) if a[i] >= degrees[i]]
        owners.append(div[0])
        flags.append(len(div) >= 2)
    assert len(mons) == comb(nu + m - 1, m - 1)
    return MacaulayLayout(degrees, nu, tuple(mons), tuple(owners), tuple(flags))


def _check_system(polys: Sequence[Polynomial]) -> tuple[RingContext, tuple[int, ...]]:
    if not polys:
        raise ResultantError("empty system")
    ctx = polys[0].ctx
    if any(f.ctx != ctx for f in polys):
        raise ResultantError("polynomials live in different contexts")
    if ctx.n != len(polys):
        raise ResultantError(f"need as many polynomials as main variables ({len(polys)} vs {ctx.n})")
    degrees = []
    for k, f in enumerate(polys):
        if not f.is_homogeneous():
            raise ResultantError(f"polynomial #{k + 1} is not homogeneous: {f}")
        d = f.degree()
        degrees.append(d)
    return ctx, tuple(degrees)


def _coefficient_table(polys, ctx):
    """Main-monomial coefficients of each polynomial; numeric when possible."""
    tables = [f.main_coefficients() for f in polys]
    symbolic = any(not c.is_constant() for t in tables for c in t.values())
    if symbolic:
        return tables, True
    return [{k: c.constant_value() for k, c in t.items()} for t in tables], False


def macaulay_matrix(polys: Sequence[Polynomial], layout: MacaulayLayout, *, symbolic: bool | None = None):
    ctx = polys[0].ctx
    tables, is_sym = _coefficient_table(polys, ctx)
    if symbolic is None:
        symbolic = is_sym
    zero = ctx.coefficient_context().zero() if symbolic else 0
    col = {mon: j for j, mon in enumerate(layout.monomials)}
    size = layout.size
    rows = []
    for mon, i in zip(layout.monomials, layout.owners):
        shift = list(mon)
        shift[i] -= layout.degrees[i]
        row = [zero] * size
        for e, c in tables[i].items():
            target = tuple(a + b for a, b in zip(shift, e))
            if symbolic and not isinstance(c, Polynomial):
                c = ctx.coefficient_context().constant(c)
            row[col[target]] = c
        rows.append(row)
    return rows


def _random_invertible(m: int, rng: random.Random) -> list[list[int]]:
    while True:
        A = [[rng.randint(-2, 2) for _ in range(m)] for _ in range(m)]
        if _bareiss_int(A) != 0:
            return A


def _change_variables(polys, A):
    ctx = polys[0].ctx
    gens = ctx.gens()
    images = {}
    for i, name in enumerate(ctx.variables):
        img = ctx.zero()
        for j, a in enumerate(A[i]):
            if a:
                img = img + gens[j].scale(a)
        images[name] = img
    return [f.compose(images) for f in polys]


def _macaulay_quotient(polys, layout, cap):
    tables, symbolic = _coefficient_table(polys, polys[0].ctx)
    if symbolic and layout.size > cap:
        raise SymbolicCapError(
            f"symbolic Macaulay matrix of size {layout.size} exceeds cap {cap}; specialize parameters first"
        )
    M = macaulay_matrix(polys, layout)
    idx = layout.minor_indices
    minor = [[M[i][j] for j in idx] for i in idx]
    den = determinant_fraction_free(minor)
    if den == 0:
        return None
    num = determinant_fraction_free(M)
    if isinstance(num, Polynomial):
        if not isinstance(den, Polynomial):
            return num.scale(Fraction(1) / den)
        return num.exact_divide(den)
    return normalize_scalar(Fraction(num) / den)


def macaulay_resultant(
    polys: Sequence[Polynomial],
    *,
    symbolic_cap: int = DEFAULT_SYMBOLIC_CAP,
    rng: random.Random | None = None,
    max_retries: int = MAX_RETRIES,
):
    """Resultant of ``len(polys)`` homogeneous polynomials in as many main variables.

    When the reduced minor is singular, the system is pushed through a
    random invertible linear change of variables A and the result is
    corrected by ``det(A) ** prod(d_i)``.
    """
    ctx, degrees = _check_system(polys)
    if any(f.is_zero() for f in polys):
        return _zero_like(polys)
    if any(d < 1 for d in degrees):
        raise ResultantError(f"every polynomial needs degree >= 1, got {degrees}")
    if len(polys) == 1:
        return _univariate(polys[0])
    layout = macaulay_layout(degrees)
    value = _macaulay_quotient(polys, layout, symbolic_cap)
    if value is not None:
        return value
    rng = rng or random.Random(0)
    total = prod(degrees)
    for _ in range(max_retries):
        A = _random_invertible(len(polys), rng)
        value = _macaulay_quotient(_change_variables(polys, A), layout, symbolic_cap)
        if value is not None:
            detA = _bareiss_int(A)
            return value * Fraction(1, detA ** total) if not isinstance(value, Polynomial) else value.scale(
                Fraction(1, detA ** total))
    raise DegenerateSpecializationError(
        f"reduced Macaulay minor singular after {max_retries} random changes of variables"
    )


def _zero_like(polys):
    tables, symbolic = _coefficient_table(polys, polys[0].ctx)
    return polys[0].ctx.coefficient_context().zero() if symbolic else 0


def _univariate(f: Polynomial):
    # Res(c * x^d) = c
    (c,) = f.main_coefficients().values()
    return c if not c.is_constant() else c.constant_value()


# ---------------------------------------------------------------------------
# Sylvester


def sylvester_resultant(f: Polynomial, g: Polynomial):
    """Homogeneous resultant of two binary forms via the Sylvester matrix.

    With ``f = sum a_i x^(d1-i) y^i`` and ``g = sum b_i x^(d2-i) y^i`` this is
    the determinant of the usual (d1+d2)-square matrix; ``Res(x^d1, y^d2) = 1``.
    """
    ctx, (d1, d2) = _check_system([f, g])
    if f.is_zero() or g.is_zero():
        return _zero_like([f, g])
    if d1 < 1 or d2 < 1:
        raise ResultantError("both forms need degree >= 1")
    tables, symbolic = _coefficient_table([f, g], ctx)
    zero = ctx.coefficient_context().zero() if symbolic else 0
    a = [tables[0].get((d1 - i, i), zero) for i in range(d1 + 1)]
    b = [tables[1].get((d2 - i, i), zero) for i in range(d2 + 1)]
    size = d1 + d2
    rows = []
    for k in range(d2):
        rows.append([zero] * k + a + [zero] * (size - k - d1 - 1))
    for k in range(d1):
        rows.append([zero] * k + b + [zero] * (size - k - d2 - 1))
    return determinant_fraction_free(rows)


# ---------------------------------------------------------------------------
# dispatcher


def _find_triangular_block(polys: Sequence[Polynomial]):
    """Smallest proper subset S of polynomials whose variables W satisfy |W| = |S|."""
    m = len(polys)
    supports = [f.variable_support() for f in polys]
    for size in range(1, m):
        for S in itertools.combinations(range(m), size):
            W = set().union(*(supports[i] for i in S))
            if len(W) == size:
                return list(S), sorted(W)
    return None


def _restrict(polys, keep_vars: list[int], ctx: RingContext):
    """Set main variables outside ``keep_vars`` to zero and drop them from the context."""
    names = [ctx.variables[i] for i in keep_vars]
    sub = RingContext(tuple(names), ctx.parameters)
    drop = {v: 0 for i, v in enumerate(ctx.variables) if i not in set(keep_vars)}
    out = []
    for f in polys:
        g = f.evaluate(drop) if drop else f
        out.append(g.change_context(sub))
    return out


def resultant(
    polys: Sequence[Polynomial],
    *,
    symbolic_cap: int = DEFAULT_SYMBOLIC_CAP,
    rng: random.Random | None = None,
    split: bool = True,
):
    """Resultant of a square homogeneous system, up to sign.

    If some k polynomials involve only k of the variables, the product rule
    ``Res(F) = +-Res(S)^(prod of other degrees) * Res(rest|_{W=0})^(prod of S degrees)``
    is applied recursively; what remains goes to Sylvester or Macaulay.
    """
    ctx, degrees = _check_system(polys)
    if any(f.is_zero() for f in polys):
        return _zero_like(polys)
    if any(d < 1 for d in degrees):
        raise ResultantError(f"every polynomial needs degree >= 1, got {degrees}")
    m = len(polys)
    if m == 1:
        return _univariate(polys[0])
    if split and m > 2:
        block = _find_triangular_block(polys)
        if block is not None:
            S, W = block
            rest = [i for i in range(m) if i not in S]
            others = [i for i in range(m) if i not in W]
            res_s = resultant(_restrict([polys[i] for i in S], W, ctx), symbolic_cap=symbolic_cap, rng=rng)
            res_r = resultant(_restrict([polys[i] for i in rest], others, ctx), symbolic_cap=symbolic_cap, rng=rng)
            return res_s ** prod(degrees[i] for i in rest) * res_r ** prod(degrees[i] for i in S)
    if m == 2:
        return sylvester_resultant(*polys)
    return macaulay_resultant(polys, symbolic_cap=symbolic_cap, rng=rng)
