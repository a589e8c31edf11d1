"""Block-equivariant polynomial systems, divided differences and the collapsing maps.

The acting group is S_{1..p} x S_{p+1..n}; a permutation sigma acts on a
polynomial by ``(sigma f)(x_1, ..., x_n) = f(x_sigma(1), ..., x_sigma(n))``.
Indices in this module are 1-based to match the usual labels f^{1..n}.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

from .combinatorics import PartitionPair
from .polyring import Polynomial, RingContext


class EquivarianceError(ValueError):
    """Input is not a valid block-equivariant (or invariant) system.

    ``transposition`` and ``label`` identify the failing check when the
    failure is an equivariance violation.
    """

    def __init__(self, message, transposition=None, label=None):
        super().__init__(message)
        self.transposition = transposition
        self.label = label


class DividedDifferenceError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A block-preserving permutation of {1..n}, stored as its image list."""

    images: tuple[int, ...]
    split: int

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        n = len(imgs)
        if sorted(imgs) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {imgs}")
        p = self.split
        if set(imgs[:p]) != set(range(1, p + 1)):
            raise ValueError("permutation does not preserve the blocks")

    @classmethod
    def identity(cls, n: int, split: int) -> Permutation:
        return cls(tuple(range(1, n + 1)), split)

    @classmethod
    def transposition(cls, n: int, split: int, i: int, j: int) -> Permutation:
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[j - 1] = j, i
        return cls(tuple(imgs), split)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: Permutation) -> Permutation:
        """``(self * other)(i) = self(other(i))``."""
        return Permutation(tuple(self(other(i)) for i in range(1, len(self.images) + 1)), self.split)

    def act(self, f: Polynomial) -> Polynomial:
        names = f.ctx.variables
        mapping = {names[i - 1]: names[self(i) - 1] for i in range(1, len(names) + 1)}
        return f.substitute_variables(mapping)


def block_generators(n: int, p: int) -> list[tuple[int, int]]:
    """Adjacent transpositions generating S_{1..p} x S_{p+1..n}."""
    gens = [(i, i + 1) for i in range(1, p)]
    gens += [(i, i + 1) for i in range(p + 1, n)]
    return gens


def block_of(i: int, p: int) -> int:
    return 1 if i <= p else 2


@dataclass(eq=False)
class EquivariantSystem:
    ctx: RingContext
    polys: tuple[Polynomial, ...]
    degree: int
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def p(self) -> int:
        return self.ctx.split

    @property
    def q(self) -> int:
        return self.ctx.n - self.ctx.split

    def f(self, i: int) -> Polynomial:
        return self.polys[i - 1]

    def __getstate__(self):
        return {"ctx": self.ctx, "polys": self.polys, "degree": self.degree}

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._cache = {}
        self._lock = threading.Lock()


def _validate_degrees(polys: Sequence[Polynomial]) -> int:
    degree = None
    for k, f in enumerate(polys, 1):
        if f.is_zero():
            raise EquivarianceError(f"f^{{{k}}} is the zero polynomial")
        if not f.is_homogeneous():
            raise EquivarianceError(f"f^{{{k}}} is not homogeneous in the main variables")
        d = f.degree()
        if degree is None:
            degree = d
        elif d != degree:
            raise EquivarianceError(f"degree mismatch: f^{{{k}}} has degree {d}, expected {degree}")
    return degree


def check_equivariance(polys: Sequence[Polynomial], ctx: RingContext | None = None) -> EquivariantSystem:
    """Validate ``sigma(f^k) = f^sigma(k)`` on the adjacent-transposition generators.

    Raises :class:`EquivarianceError` naming the first failing transposition
    and label.
    """
    polys = tuple(polys)
    ctx = ctx or polys[0].ctx
    if ctx.split is None:
        raise EquivarianceError("context has no block split p")
    if len(polys) != ctx.n:
        raise EquivarianceError(f"expected {ctx.n} polynomials, got {len(polys)}")
    if any(f.ctx != ctx for f in polys):
        raise EquivarianceError("polynomials do not share the given context")
    degree = _validate_degrees(polys)
    n, p = ctx.n, ctx.split
    for i, j in block_generators(n, p):
        tau = Permutation.transposition(n, p, i, j)
        for k in range(1, n + 1):
            if tau.act(polys[k - 1]) != polys[tau(k) - 1]:
                raise EquivarianceError(
                    f"equivariance fails for transposition ({i} {j}) at label {k}: "
                    f"({i} {j}) f^{{{k}}} != f^{{{tau(k)}}}",
                    transposition=(i, j),
                    label=k,
                )
    return EquivariantSystem(ctx, polys, degree)


def check_invariance(f: Polynomial, ctx: RingContext | None = None) -> None:
    ctx = ctx or f.ctx
    if ctx.split is None:
        raise EquivarianceError("context has no block split p")
    for i, j in block_generators(ctx.n, ctx.split):
        tau = Permutation.transposition(ctx.n, ctx.split, i, j)
        if tau.act(f) != f:
            raise EquivarianceError(f"polynomial is not invariant under ({i} {j})", transposition=(i, j))


def divided_difference(sys: EquivariantSystem, indices: Sequence[int]) -> Polynomial:
    """The divided difference f^{(i_1..i_k)} of the family.

    Recursion pivots on the last two indices::

        f^{(I, a, b)} = (f^{(I, a)} - f^{(I, b)}) / (x_a - x_b)
    """
    idx = tuple(indices)
    k = len(idx)
    if k == 0:
        raise DividedDifferenceError("need at least one index")
    if len(set(idx)) != k:
        raise DividedDifferenceError(f"indices must be distinct: {idx}")
    if any(not 1 <= i <= sys.n for i in idx):
        raise DividedDifferenceError(f"indices out of range 1..{sys.n}: {idx}")
    if len({block_of(i, sys.p) for i in idx}) != 1:
        raise DividedDifferenceError(f"indices cross blocks: {idx}")
    if k > sys.degree + 1:
        raise DividedDifferenceError(f"{k} indices exceed degree + 1 = {sys.degree + 1}")
    return _dd(sys, idx)


def _dd(sys: EquivariantSystem, idx: tuple[int, ...]) -> Polynomial:
    with sys._lock:
        hit = sys._cache.get(idx)
    if hit is not None:
        return hit
    if len(idx) == 1:
        value = sys.f(idx[0])
    else:
        a, b = idx[-2], idx[-1]
        num = _dd(sys, idx[:-1]) - _dd(sys, idx[:-2] + (b,))
        xa = sys.ctx.symbol(sys.ctx.variables[a - 1])
        xb = sys.ctx.symbol(sys.ctx.variables[b - 1])
        try:
            value = num.exact_divide(xa - xb)
        except ArithmeticError as exc:
            raise DividedDifferenceError(
                f"difference for indices {idx} is not divisible by x{a} - x{b}; family is not equivariant"
            ) from exc
    with sys._lock:
        sys._cache[idx] = value
    return value


def constant_divided_difference(sys: EquivariantSystem, block: int, length: int | None = None) -> Polynomial:
    """Degree-0 divided difference over the first ``d + 1`` indices of a block.

    ``length`` overrides the number of indices (it must still make the
    result a constant, i.e. equal ``d + 1``).
    """
    size = sys.p if block == 1 else sys.q
    length = sys.degree + 1 if length is None else length
    if size < length:
        raise DividedDifferenceError(
            f"block {block} has {size} indices; a constant divided difference needs {length}"
        )
    start = 1 if block == 1 else sys.p + 1
    value = divided_difference(sys, range(start, start + length))
    if not value.free_symbols() <= set(sys.ctx.parameters):
        raise DividedDifferenceError("divided difference is not free of main variables")
    return value


# ---------------------------------------------------------------------------
# collapsing maps


@dataclass(frozen=True)
class SpecializationMap:
    pair: PartitionPair
    source: RingContext
    target: RingContext
    mapping: dict
    representatives: tuple[tuple[int, ...], tuple[int, ...]]

    def __hash__(self):
        return hash((self.pair, self.source))


def first_block_names(r: int) -> list[str]:
    return [f"y{t}" for t in range(1, r + 1)]


def second_block_names(r: int) -> list[str]:
    return [f"y'{t}" for t in range(1, r + 1)]


def specialization_map(ctx: RingContext, pair: PartitionPair) -> SpecializationMap:
    """Build the map collapsing the t-th run of lambda_t x's to y_t (and y'_t)."""
    p = ctx.split
    if pair.p != p or pair.q != ctx.n - p:
        raise ValueError(f"partition pair {pair} does not match split (p, q) = ({p}, {ctx.n - p})")
    ys = first_block_names(pair.r1)
    zs = second_block_names(pair.r2)
    target = RingContext(tuple(ys + zs), ctx.parameters, pair.r1)
    mapping = {}
    reps1 = []
    pos = 1
    for t, size in enumerate(pair.first.parts):
        reps1.append(pos)
        for i in range(pos, pos + size):
            mapping[ctx.variables[i - 1]] = ys[t]
        pos += size
    reps2 = []
    for t, size in enumerate(pair.second.parts):
        reps2.append(pos)
        for i in range(pos, pos + size):
            mapping[ctx.variables[i - 1]] = zs[t]
        pos += size
    return SpecializationMap(pair, ctx, target, mapping, (tuple(reps1), tuple(reps2)))


def rho_specialize(smap: SpecializationMap, f: Polynomial) -> Polynomial:
    return f.substitute_variables(smap.mapping, smap.target)


def build_factor_system(sys: EquivariantSystem, pair: PartitionPair) -> list[Polynomial]:
    """The chains rho(f^{(i_1)}), rho(f^{(i_1,i_2)}), ... for both blocks."""
    d = sys.degree
    if pair.r1 > d or pair.r2 > d:
        raise DividedDifferenceError(
            f"partition pair {pair} needs r1, r2 <= d = {d}; a chain member would be constant"
        )
    smap = specialization_map(sys.ctx, pair)
    reps1, reps2 = smap.representatives
    out = []
    for reps in (reps1, reps2):
        for k in range(1, len(reps) + 1):
            out.append(rho_specialize(smap, divided_difference(sys, reps[:k])))
    return out
