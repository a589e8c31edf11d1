import itertools

import pytest
from hypothesis import given, settings, strategies as st

from eqres.combinatorics import Partition, PartitionPair
from eqres.equivariant import (
    DividedDifferenceError,
    EquivarianceError,
    Permutation,
    build_factor_system,
    check_equivariance,
    check_invariance,
    constant_divided_difference,
    divided_difference,
    rho_specialize,
    specialization_map,
)
from eqres.decompose import partials_system
from eqres.oracle import random_equivariant_system
from eqres.polyring import RingContext

from conftest import fixture_path
from eqres.cli import load_system_file


def pair(a, b):
    return PartitionPair(Partition(a), Partition(b))


@pytest.fixture(scope="module")
def sys5(buse5):
    return check_equivariance(buse5.system, buse5.ctx)


def yctx(sys, pr):
    return specialization_map(sys.ctx, pr).target


def test_five_polynomial_system_is_valid(sys5):
    assert (sys5.n, sys5.p, sys5.q, sys5.degree) == (5, 3, 2, 2)


def test_broken_orbit_names_transposition():
    sf = load_system_file(fixture_path("broken5.json"))
    with pytest.raises(EquivarianceError) as info:
        check_equivariance(sf.system, sf.ctx)
    assert info.value.transposition == (4, 5)


def test_partials_of_invariant_form(disc4):
    check_invariance(disc4.polynomial, disc4.ctx)
    sys = partials_system(disc4.polynomial, disc4.ctx)
    assert sys.degree == 3


def test_rejects_inhomogeneous_and_mixed_degrees():
    ctx = RingContext(("x1", "x2"), (), 1)
    with pytest.raises(EquivarianceError):
        check_equivariance([ctx.parse("x1^2 + x2"), ctx.parse("x2^2 + x1")], ctx)
    with pytest.raises(EquivarianceError):
        check_equivariance([ctx.parse("x1^2"), ctx.parse("x2^3")], ctx)


def test_divided_differences_on_five_polynomial_system(sys5):
    assert divided_difference(sys5, (1, 2, 3)) == sys5.ctx.parse("a")
    assert divided_difference(sys5, (1, 3)) == sys5.ctx.parse("(a+b)*(x1+x3)+b*x2")
    assert constant_divided_difference(sys5, 1) == sys5.ctx.parse("a")


def test_power_family():
    ctx = RingContext(("x1", "x2", "x3", "x4"), (), 3)
    sys = check_equivariance([ctx.parse(f"x{i}^2") for i in range(1, 5)], ctx)
    assert divided_difference(sys, (1, 2)) == ctx.parse("x1+x2")
    assert divided_difference(sys, (1, 2, 3)) == 1
    assert constant_divided_difference(sys, 1) == 1


def test_divided_difference_errors(sys5):
    with pytest.raises(DividedDifferenceError):
        divided_difference(sys5, (3, 4))
    with pytest.raises(DividedDifferenceError):
        divided_difference(sys5, (1, 1))
    with pytest.raises(DividedDifferenceError):
        divided_difference(sys5, (4, 5, 6))
    with pytest.raises(DividedDifferenceError):
        constant_divided_difference(sys5, 2)


def test_constant_needs_big_block(disc4):
    sys = partials_system(disc4.polynomial, disc4.ctx)
    with pytest.raises(DividedDifferenceError, match="block"):
        constant_divided_difference(sys, 1)


def test_rho_examples(sys5):
    pr = pair((2, 1), (2,))
    smap = specialization_map(sys5.ctx, pr)
    assert rho_specialize(smap, sys5.f(1)) == smap.target.parse("(a+2*b+2*c)*y1^2+b*y1*y2+c*y2^2+y'1^2")
    smap = specialization_map(sys5.ctx, pair((3,), (2,)))
    assert rho_specialize(smap, sys5.f(4)) == smap.target.parse("(p+q)*y'1^2")


def test_identity_specialization_renames(sys5):
    smap = specialization_map(sys5.ctx, pair((1, 1, 1), (1, 1)))
    for i in range(1, 6):
        g = rho_specialize(smap, sys5.f(i))
        assert len(g.terms) == len(sys5.f(i).terms)
        assert g.degree() == 2


def test_representatives(sys5):
    smap = specialization_map(sys5.ctx, pair((2, 1), (1, 1)))
    assert smap.representatives == ((1, 3), (4, 5))


def test_factor_systems_on_five_polynomial_system(sys5):
    pr = pair((2, 1), (1, 1))
    polys = build_factor_system(sys5, pr)
    t = yctx(sys5, pr)
    assert polys[1] == t.parse("(a+2*b)*y1+(a+b)*y2")
    assert polys[3] == t.parse("(p-q)*y'1+(p-q)*y'2")
    assert [f.degree() for f in polys] == [2, 1, 2, 1]
    pr = pair((3,), (2,))
    t = yctx(sys5, pr)
    assert build_factor_system(sys5, pr) == [t.parse("(a+3*b+3*c)*y1^2+y'1^2"), t.parse("(p+q)*y'1^2")]


def test_factor_system_degree_cap(sys5):
    with pytest.raises(DividedDifferenceError):
        build_factor_system(sys5, pair((1, 1, 1), (2,)))


def test_discriminant_factor_degrees(disc4):
    sys = partials_system(disc4.polynomial, disc4.ctx)
    polys = build_factor_system(sys, pair((1, 1), (1, 1)))
    assert [f.degree() for f in polys] == [3, 2, 3, 2]
    assert polys[0].ctx.n == 4


def test_well_definedness(sys5):
    for pr in (pair((2, 1), (2,)), pair((3,), (1, 1))):
        smap = specialization_map(sys5.ctx, pr)
        for i, j in itertools.combinations(range(1, 6), 2):
            vi, vj = sys5.ctx.variables[i - 1], sys5.ctx.variables[j - 1]
            if smap.mapping[vi] == smap.mapping[vj]:
                assert rho_specialize(smap, sys5.f(i)) == rho_specialize(smap, sys5.f(j))


def test_commutation_on_five_polynomial_system(sys5):
    # collapse first, then take the divided difference in the y variables
    pr = pair((2, 1), (2,))
    smap = specialization_map(sys5.ctx, pr)
    t = smap.target
    lhs = rho_specialize(smap, divided_difference(sys5, (1, 3)))
    direct = (rho_specialize(smap, sys5.f(1)) - rho_specialize(smap, sys5.f(3))).exact_divide(
        t.parse("y1 - y2"))
    assert lhs == direct == t.parse("(a+2*b)*y1+(a+b)*y2")


# properties on generated systems --------------------------------------------

SHAPES = [(3, 1, 2), (3, 2, 2), (4, 2, 2), (4, 2, 3), (4, 3, 2), (5, 3, 2), (5, 2, 3)]


@st.composite
def generated(draw):
    n, p, d = draw(st.sampled_from(SHAPES))
    seed = draw(st.integers(0, 10_000))
    return random_equivariant_system(n, p, d, seed, mode="rational")


def _index_set(sys, rnd):
    block = rnd.choice([b for b in (1, 2) if (sys.p if b == 1 else sys.q) >= 2])
    pool = list(range(1, sys.p + 1)) if block == 1 else list(range(sys.p + 1, sys.n + 1))
    k = rnd.randint(2, min(len(pool), sys.degree + 1))
    return rnd.sample(pool, k)


@settings(max_examples=50)
@given(generated(), st.randoms(use_true_random=False))
def test_divided_difference_symmetry_and_degree(sys, rnd):
    idx = _index_set(sys, rnd)
    base = divided_difference(sys, idx)
    for perm in itertools.permutations(idx):
        assert divided_difference(sys, perm) == base
    if not base.is_zero():
        assert base.is_homogeneous()
        assert base.degree() == sys.degree - len(idx) + 1


@settings(max_examples=25)
@given(generated(), st.randoms(use_true_random=False))
def test_equivariance_transport(sys, rnd):
    idx = _index_set(sys, rnd)
    first = list(range(1, sys.p + 1))
    second = list(range(sys.p + 1, sys.n + 1))
    rnd.shuffle(first)
    rnd.shuffle(second)
    sigma = Permutation(tuple(first + second), sys.p)
    moved = divided_difference(sys, [sigma(i) for i in idx])
    assert moved == sigma.act(divided_difference(sys, idx))


@settings(max_examples=25)
@given(generated())
def test_commutation_property(sys):
    # first-block fibre (2, 1, ...) when p >= 2: representatives 1 and 3 map to y1, y2
    if sys.p < 3:
        return
    rest = (1,) * (sys.p - 3)
    pr = PartitionPair(Partition((2, 1) + rest), Partition((1,) * sys.q))
    smap = specialization_map(sys.ctx, pr)
    t = smap.target
    lhs = rho_specialize(smap, divided_difference(sys, (1, 3)))
    rhs = (rho_specialize(smap, sys.f(1)) - rho_specialize(smap, sys.f(3))).exact_divide(t.parse("y1 - y2"))
    assert lhs == rhs


@pytest.mark.parametrize("n,p,d", SHAPES)
def test_generator_always_equivariant(n, p, d):
    for seed in range(3):
        for mode in ("parameters", "rational"):
            sys = random_equivariant_system(n, p, d, seed, mode=mode)
            assert check_equivariance(sys.polys, sys.ctx).degree == d


def test_block_preservation():
    with pytest.raises(ValueError):
        Permutation((3, 2, 1), 1)
    tau = Permutation.transposition(4, 2, 3, 4)
    assert tau.compose(tau) == Permutation.identity(4, 2)
