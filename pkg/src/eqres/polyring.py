"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`RingContext` declares two classes of symbols: *main variables*
(the ones the grading counts) and *parameters* (weight 0).  Every
:class:`Polynomial` lives in one context and stores its terms as a dict
from dense exponent tuples (main variables first, then parameters) to
coefficients.  Coefficients are ``int`` or ``fractions.Fraction``, always
in lowest terms; a Fraction with denominator 1 is stored as an ``int``.
"""

from __future__ import annotations

import heapq
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]

NEG_INF = -math.inf

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class ContextMismatchError(ValueError):
    """Raised when combining polynomials from different ring contexts."""


class InexactDivisionError(ArithmeticError):
    """Raised by :meth:`Polynomial.exact_divide` when a remainder is left."""


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


def normalize_scalar(c) -> Scalar:
    if isinstance(c, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return normalize_scalar(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational scalar: {c!r}")


@dataclass(frozen=True)
class RingContext:
    """Symbol table for a polynomial ring Q[parameters][main variables].

    ``split`` is the block index p: main variables ``[0, p)`` form the first
    block and ``[p, n)`` the second.  It may be ``None`` for contexts that
    carry no block structure (coefficient rings, generic resultant input).
    """

    variables: tuple[str, ...]
    parameters: tuple[str, ...] = ()
    split: int | None = None
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        names = self.variables + self.parameters
        for name in names:
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise ValueError(f"invalid symbol name: {name!r}")
        if len(set(names)) != len(names):
            raise ValueError("symbol names must be distinct")
        if self.split is not None and not 1 <= self.split < len(self.variables):
            raise ValueError(
                f"block split p={self.split} must satisfy 1 <= p < n={len(self.variables)}"
            )
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(names)})

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def p(self) -> int | None:
        return self.split

    @property
    def q(self) -> int | None:
        return None if self.split is None else self.n - self.split

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.variables + self.parameters

    @property
    def nsyms(self) -> int:
        return len(self.variables) + len(self.parameters)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown symbol {name!r}") from None

    def is_variable(self, name: str) -> bool:
        i = self._index.get(name)
        return i is not None and i < len(self.variables)

    def is_parameter(self, name: str) -> bool:
        i = self._index.get(name)
        return i is not None and i >= len(self.variables)

    def coefficient_context(self) -> RingContext:
        """The ring of parameters alone (no main variables)."""
        return RingContext((), self.parameters)

    def with_split(self, split: int | None) -> RingContext:
        return RingContext(self.variables, self.parameters, split)

    # constructors -------------------------------------------------------
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c) -> Polynomial:
        c = normalize_scalar(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, {(0,) * self.nsyms: c})

    def symbol(self, name: str) -> Polynomial:
        e = [0] * self.nsyms
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> tuple[Polynomial, ...]:
        return tuple(self.symbol(v) for v in self.variables)

    def parse(self, text: str) -> Polynomial:
        return parse(text, self)


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


class Polynomial:
    """Immutable sparse polynomial over a :class:`RingContext`."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: RingContext, terms: Mapping[tuple, Scalar] | None = None, *, _clean=False):
        self.ctx = ctx
        if _clean or not terms:
            self.terms = dict(terms) if terms else {}
        else:
            nsyms = ctx.nsyms
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nsyms or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e} for context")
                c = normalize_scalar(c)
                if c:
                    clean[e] = c
            self.terms = clean
        self._hash = None

    # basic queries -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()), 0)

    def free_symbols(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return {self.ctx.symbols[i] for i in used}

    def degree(self):
        """Total degree in the main variables; ``NEG_INF`` for zero."""
        if not self.terms:
            return NEG_INF
        n = self.ctx.n
        return max(sum(e[:n]) for e in self.terms)

    def is_homogeneous(self) -> bool:
        n = self.ctx.n
        degs = {sum(e[:n]) for e in self.terms}
        return len(degs) <= 1

    def degree_and_homogeneity(self):
        return self.degree(), self.is_homogeneous()

    def parameter_degree(self):
        if not self.terms:
            return NEG_INF
        n = self.ctx.n
        return max(sum(e[n:]) for e in self.terms)

    def leading_term(self):
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # equality -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.symbols, frozenset(self.terms.items())))
        return self._hash

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatchError(
                    f"ring contexts differ: {self.ctx.symbols} vs {other.ctx.symbols}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ctx.constant(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = normalize_scalar(s) if isinstance(s, Fraction) else s
            else:
                out.pop(e, None)
        return Polynomial(self.ctx, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ctx, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> Polynomial:
        c = normalize_scalar(c)
        if c == 0:
            return self.ctx.zero()
        if c == 1:
            return self
        out = {}
        for e, a in self.terms.items():
            v = a * c
            out[e] = normalize_scalar(v) if isinstance(v, Fraction) else v
        return Polynomial(self.ctx, out, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ctx.zero()
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple([x + y for x, y in zip(ea, eb)])
                out[e] = get(e, 0) + ca * cb
        clean = {}
        for e, c in out.items():
            if c:
                clean[e] = normalize_scalar(c) if isinstance(c, Fraction) else c
        return Polynomial(self.ctx, clean, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar, or exact division by a polynomial."""
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            return self.scale(Fraction(1) / other)
        if isinstance(other, Polynomial):
            return self.exact_divide(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_divide(self, g: Polynomial) -> Polynomial:
        """Return q with ``self == q * g``; raise if g does not divide self."""
        g = self._coerce(g)
        if not g.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self.ctx.zero()
        if g.is_constant():
            return self / g.constant_value()
        lg, cg = g.leading_term()
        g_rest = [(e, c) for e, c in g.terms.items() if e != lg]
        rem = dict(self.terms)
        # max-heap over grlex keys, lazy deletion
        heap = [_neg_key(e) for e in rem]
        heapq.heapify(heap)
        quot = {}
        inv_int = isinstance(cg, int) and cg in (1, -1)
        while rem:
            while True:
                nk = heapq.heappop(heap)
                e = nk[1]
                if e in rem:
                    break
            c = rem.pop(e)
            if any(x < y for x, y in zip(e, lg)):
                raise InexactDivisionError(f"{g} does not divide {self}")
            t = tuple([x - y for x, y in zip(e, lg)])
            if inv_int:
                qc = c * cg
            else:
                qc = normalize_scalar(Fraction(c) / cg)
            quot[t] = qc
            for eg, c2 in g_rest:
                m = tuple([x + y for x, y in zip(t, eg)])
                v = rem.get(m, 0) - qc * c2
                if v:
                    if m not in rem:
                        heapq.heappush(heap, _neg_key(m))
                    rem[m] = normalize_scalar(v) if isinstance(v, Fraction) else v
                elif m in rem:
                    del rem[m]
        return Polynomial(self.ctx, quot, _clean=True)

    # calculus and substitution --------------------------------------------
    def partial_derivative(self, var: str) -> Polynomial:
        if not self.ctx.is_variable(var):
            raise ValueError(f"{var!r} is not a main variable of the context")
        i = self.ctx.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Polynomial(self.ctx, out, _clean=True)

    diff = partial_derivative

    def substitute_variables(self, mapping: Mapping[str, str], target: RingContext | None = None) -> Polynomial:
        """Rename/merge main variables: each ``x -> y`` sends symbol x to symbol y.

        Unmapped main variables keep their name; parameters pass through.
        Every resulting name must be declared in ``target`` (defaults to
        this polynomial's context).
        """
        target = self.ctx if target is None else target
        src = self.ctx
        dest = []
        for name in src.symbols:
            new = mapping.get(name, name)
            if src.is_parameter(name) and new != name:
                raise ValueError(f"parameter {name!r} cannot be substituted by renaming")
            try:
                j = target.index(new)
            except KeyError:
                raise ValueError(f"target symbol {new!r} is not declared") from None
            if src.is_variable(name) != target.is_variable(new):
                raise ValueError(f"{name!r} and {new!r} are of different symbol classes")
            dest.append(j)
        m = target.nsyms
        out: dict = {}
        for e, c in self.terms.items():
            e2 = [0] * m
            for i, k in enumerate(e):
                if k:
                    e2[dest[i]] += k
            t = tuple(e2)
            out[t] = out.get(t, 0) + c
        return Polynomial(target, out)

    def compose(self, images: Mapping[str, Polynomial], target: RingContext | None = None) -> Polynomial:
        """Ring homomorphism sending each named symbol to a polynomial in ``target``.

        Symbols not in ``images`` must exist in ``target`` under the same name.
        """
        target = self.ctx if target is None else target
        gens = []
        for name in self.ctx.symbols:
            if name in images:
                img = images[name]
                if img.ctx != target:
                    raise ContextMismatchError("image lives in a different context")
                gens.append(img)
            else:
                gens.append(target.symbol(name))
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = gens[i] if k == 1 else power(i, k - 1) * gens[i]
            return powers[key]

        total = target.zero()
        for e, c in self.terms.items():
            term = target.constant(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def evaluate(self, assignment: Mapping[str, Scalar]):
        """Substitute scalars for symbols; returns a scalar when every symbol is assigned."""
        idx = []
        for name, v in assignment.items():
            idx.append((self.ctx.index(name), normalize_scalar(v)))
        full = len({i for i, _ in idx}) == self.ctx.nsyms
        if not idx:
            return self
        out: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            v = c
            for i, val in idx:
                k = e2[i]
                if k:
                    v = v * val ** k
                    e2[i] = 0
            if v:
                t = tuple(e2)
                out[t] = out.get(t, 0) + v
        result = Polynomial(self.ctx, out)
        if full:
            return result.constant_value()
        return result

    def change_context(self, target: RingContext) -> Polynomial:
        """Re-express in a context declaring (at least) every symbol used here."""
        if target == self.ctx:
            return self
        used = self.free_symbols()
        pos = []
        for i, name in enumerate(self.ctx.symbols):
            if name in used:
                pos.append((i, target.index(name)))
        m = target.nsyms
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * m
            for i, j in pos:
                e2[j] = e[i]
            out[tuple(e2)] = c
        return Polynomial(target, out, _clean=True)

    def main_coefficients(self) -> dict[tuple[int, ...], Polynomial]:
        """Split into ``{main exponent: coefficient polynomial in parameters}``."""
        n = self.ctx.n
        cctx = self.ctx.coefficient_context()
        groups: dict = {}
        for e, c in self.terms.items():
            groups.setdefault(e[:n], {})[e[n:]] = c
        return {k: Polynomial(cctx, v, _clean=True) for k, v in groups.items()}

    def variable_support(self) -> set[int]:
        n = self.ctx.n
        used = set()
        for e in self.terms:
            used.update(i for i in range(n) if e[i])
        return used

    def content_denominator(self) -> int:
        """Least common multiple of the coefficient denominators."""
        dens = [c.denominator for c in self.terms.values() if isinstance(c, Fraction)]
        return math.lcm(*dens) if dens else 1

    # formatting -----------------------------------------------------------
    def format(self) -> str:
        if not self.terms:
            return "0"
        names = self.ctx.symbols
        pieces = []
        for e, c in self.sorted_terms():
            factors = []
            n = self.ctx.n
            for i in list(range(n, len(e))) + list(range(n)):
                k = e[i]
                if k == 1:
                    factors.append(names[i])
                elif k:
                    factors.append(f"{names[i]}^{k}")
            neg = c < 0
            a = -c if neg else c
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = f"{a}*" + "*".join(factors)
            pieces.append((neg, body))
        neg, body = pieces[0]
        out = ("-" if neg else "") + body
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    __str__ = format

    def __repr__(self):
        return f"Polynomial({self.format()!r})"


def _neg_key(e):
    return (-sum(e), tuple(-x for x in e)), e


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>\*\*|[-+*/^()])")


def _tokenize(text: str):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: RingContext):
        self.text = text
        self.ctx = ctx
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty expression")
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("num", "name") or tok[1] == "(":
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected token {tok[1]!r}")
        return result

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self):
        left = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            optok = self.take()
            right = self.unary()
            if optok[1] == "*":
                left = left * right
            else:
                if not right.is_constant():
                    self.error("division is only allowed by a constant", optok)
                if right.is_zero():
                    self.error("division by zero", optok)
                left = left / right.constant_value()
        return left

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            val = self.unary()
            return -val if tok[1] == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            etok = self.peek()
            if etok[0] == "op" and etok[1] == "-":
                self.error("negative exponent", etok)
            if etok[0] == "op" and etok[1] == "(":
                self.take()
                inner = self.peek()
                if inner[0] == "op" and inner[1] == "-":
                    self.error("negative exponent", inner)
                if inner[0] != "num":
                    self.error("exponent must be a non-negative integer literal")
                self.take()
                if self.take()[1] != ")":
                    self.error("expected ')'")
                return base ** int(inner[1])
            if etok[0] != "num":
                self.error("exponent must be a non-negative integer literal")
            self.take()
            return base ** int(etok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return self.ctx.constant(int(val))
        if kind == "name":
            if val not in self.ctx.symbols:
                raise ParseError(f"unknown symbol {val!r}", pos, self.text)
            return self.ctx.symbol(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                raise ParseError("expected ')'", close[2], self.text)
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected token {val!r}", pos, self.text)


def parse(text: str, ctx: RingContext) -> Polynomial:
    """Parse an expression over the symbols of ``ctx``.

    Accepts ``+ - * / ^`` (``**`` as a synonym for ``^``), parentheses and
    integer literals; ``3/4`` is a rational literal.  Division is allowed
    only by constants.  Implicit multiplication (``2x1``) is rejected.
    """
    return _Parser(text, ctx).parse()


def format_polynomial(f: Polynomial) -> str:
    return f.format()


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    return f.exact_divide(g)


def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    return f.partial_derivative(var)


def substitute_variables(f: Polynomial, mapping: Mapping[str, str], target: RingContext | None = None) -> Polynomial:
    return f.substitute_variables(mapping, target)


def evaluate(f: Polynomial, assignment: Mapping[str, Scalar]):
    return f.evaluate(assignment)


def degree_and_homogeneity(f: Polynomial):
    return f.degree_and_homogeneity()


def product(polys: Iterable[Polynomial], ctx: RingContext) -> Polynomial:
    out = ctx.one()
    for f in polys:
        out = out * f
    return out
