import random

import pytest

from eqres.decompose import (
    DISCRIMINANT,
    DecompositionError,
    a_exponent,
    decompose_discriminant,
    decompose_resultant,
    degree_audit,
    mu_exponent,
)
from eqres.equivariant import EquivarianceError, check_equivariance
from eqres.oracle import random_equivariant_system
from eqres.polyring import RingContext


@pytest.fixture(scope="module")
def dec5(buse5):
    return decompose_resultant(check_equivariance(buse5.system, buse5.ctx))


def test_mu_values():
    assert mu_exponent(5, 2, 3, 2, 1) == 8
    assert mu_exponent(5, 2, 2, 3, 2) == 8
    assert mu_exponent(4, 2, 3, 1, 1) == 4


def test_mu_rejected_when_factor_absent():
    with pytest.raises(DecompositionError):
        mu_exponent(5, 2, 3, 2, 2)
    with pytest.raises(DecompositionError):
        mu_exponent(4, 4, 2, 2, 1, DISCRIMINANT)


@pytest.mark.parametrize("n", range(2, 7))
def test_mu_nonnegative_on_grid(n):
    for d in range(1, 5):
        for p in range(1, n):
            q = n - p
            for block, size in ((1, p), (2, q)):
                if size > d:
                    assert mu_exponent(n, d, p, q, block) >= 0
                if d >= 2 and size >= d:
                    assert mu_exponent(n, d, p, q, block, DISCRIMINANT) >= 0


def test_a_exponent():
    assert a_exponent(4, 4) == 20
    assert a_exponent(2, 2) == 0
    assert a_exponent(3, 2) == 1
    for n in range(2, 8):
        for d in range(2, 8):
            assert a_exponent(n, d) * d == (d - 1) ** n - (-1) ** n


def test_five_polynomial_system_structure(dec5):
    assert dec5.case == "p>d, q<=d"
    assert [f.kind for f in dec5.factors] == ["constant"] + ["resultant"] * 4
    assert dec5.factors[0].exponent == 8
    assert [f.exponent for f in dec5.resultant_factors] == [1, 3, 1, 3]


def test_degree_audit_five_polynomial_system(dec5):
    coeff = degree_audit(dec5)
    assert coeff.ok and coeff.total == 80
    values = dec5.evaluate_factors()
    param = degree_audit(dec5, values)
    assert param.ok and [e.factor_degree for e in param.entries] == [1, 4, 8, 8, 12]


def test_discriminant_structure(disc4):
    dec = decompose_discriminant(disc4.polynomial, disc4.ctx)
    assert dec.case == "p<d, q<d"
    assert dec.prefactor == (4, 20)
    assert not dec.constant_factors
    assert [str(f.pair) for f in dec.factors] == ["((2),(2))", "((1,1),(2))", "((2),(1,1))", "((1,1),(1,1))"]
    assert degree_audit(dec).expected == 108


def test_discriminant_of_sum_of_squares():
    c = RingContext(("x1", "x2"), (), 1)
    dec = decompose_discriminant(c.parse("x1^2 + x2^2"), c)
    assert dec.prefactor == (2, 0)
    assert dec.evaluate() == 4
    assert dec.discriminant() == 4


def test_discriminant_rejections():
    c = RingContext(("x1", "x2", "x3"), (), 2)
    with pytest.raises(EquivarianceError, match="not invariant"):
        decompose_discriminant(c.parse("x1^2 + 2*x2^2 + x3^2"), c)
    with pytest.raises(DecompositionError):
        decompose_discriminant(c.parse("x1 + x2 + x3"), c)


def test_linear_systems_accepted():
    c = RingContext(("x1", "x2", "x3"), ("a", "b"), 2)
    polys = [c.parse("a*x1 + b*(x2 + x3)"), c.parse("a*x2 + b*(x1 + x3)"), c.parse("a*x3 + b*(x1+x2)")]
    dec = decompose_resultant(check_equivariance(polys, c))
    assert dec.case == "p>d, q<=d"


@pytest.mark.parametrize("p,q,d", [(p, q, d) for p in range(1, 5) for q in range(1, 5) for d in range(1, 4)])
def test_case_exclusivity(p, q, d):
    n = p + q
    sys = random_equivariant_system(n, p, d, 0, mode="rational")
    dec = decompose_resultant(sys)
    blocks = {f.block for f in dec.constant_factors}
    assert blocks == {b for b, s in ((1, p), (2, q)) if s > d}
    assert all(f.pair.r1 <= d and f.pair.r2 <= d for f in dec.resultant_factors)
    cases = [p <= d and q <= d, p <= d < q, q <= d < p, p > d and q > d]
    assert sum(cases) == 1


def test_all_ones_pair_present_with_exponent_one():
    sys = random_equivariant_system(4, 2, 2, 1, mode="rational")
    dec = decompose_resultant(sys)
    last = [f for f in dec.resultant_factors if set(f.pair.first.parts) == {1} and set(f.pair.second.parts) == {1}]
    assert len(last) == 1 and last[0].exponent == 1


def _swap_blocks(sys):
    """Relabel so that the second block comes first."""
    n, p = sys.n, sys.p
    order = list(range(p + 1, n + 1)) + list(range(1, p + 1))  # new label k is old label order[k-1]
    names = sys.ctx.variables
    new_ctx = RingContext(names, sys.ctx.parameters, n - p)
    rename = {names[old - 1]: names[new - 1] for new, old in enumerate(order, 1)}
    polys = [sys.f(old).substitute_variables(rename, new_ctx) for old in order]
    return check_equivariance(polys, new_ctx)


@pytest.mark.parametrize("n,p,d", [(3, 1, 2), (4, 1, 2), (5, 3, 2), (4, 1, 3)])
def test_block_swap(n, p, d):
    sys = random_equivariant_system(n, p, d, 4, mode="rational")
    a = decompose_resultant(sys)
    b = decompose_resultant(_swap_blocks(sys))
    rng = random.Random(0)
    va = sorted(abs(v) ** f.exponent for f, v in zip(a.factors, a.evaluate_factors(rng=rng)))
    vb = sorted(abs(v) ** f.exponent for f, v in zip(b.factors, b.evaluate_factors(rng=rng)))
    assert va == vb
    assert {f.exponent for f in a.constant_factors} == {f.exponent for f in b.constant_factors}


