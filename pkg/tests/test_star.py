import random
from fractions import Fraction
from math import comb

import pytest

from gradpoisson.cohomology import EpsSeries
from gradpoisson.corpus import JACOBI, get
from gradpoisson.randomized import random_poly
from gradpoisson.star import (DEFAULT_WEIGHTS, MOYAL, BidiffOperator, NotCasimir, StarConfig, StarProduct,
                              associate_check, casimir_quotient, central_lift, certify_associativity,
                              derive_order2_weights, is_casimir, order2_operator)


def star_for(name, **kw):
    return StarProduct(get(name).pi(), **kw)


@pytest.mark.parametrize("name", ["symplectic-r2", "nonabelian-2d", "abelian-plane"])
def test_associative_small(name):
    assert certify_associativity(star_for(name), 3) is None


def test_non_jacobi_associator_value():
    S = star_for("non-jacobi")
    x2, x3, x4 = (S.context.gen(n) for n in ("x2", "x3", "x4"))
    a = associate_check(S, x2, x3, x4)
    assert a[0].is_zero() and a[1].is_zero()
    assert a[2] == S.context.const(Fraction(2, 3))


@pytest.mark.parametrize("name", JACOBI + ("non-jacobi",))
def test_commutator_identity(name):
    S = star_for(name)
    rng = random.Random(name)
    for _ in range(20):
        f, g = random_poly(rng, S.context, 3, 3), random_poly(rng, S.context, 3, 3)
        c = S.commutator(f, g)
        assert c[0].is_zero()
        assert c[1] == S.B1(f, g).scale(2)
        assert c[2].is_zero()  # B2 symmetric


def test_symplectic_plane_values():
    S = star_for("symplectic-r2")
    q, p = S.context.gens("q", "p")
    assert str(S.star(q, p)) == "eps^0*(q*p) + eps^1*(1)"
    assert S.commutator(q, p) == EpsSeries((S.context.zero(), S.context.const(2), S.context.zero()))
    assert str(S.star(q * q, p * p)) == "eps^0*(q^2*p^2) + eps^1*(4*q*p) + eps^2*(2)"


def test_constant_pi_forces_moyal():
    S = star_for("symplectic-r4")
    sol = derive_order2_weights([S.pi])
    kernel_ops = [order2_operator(S.context, S.matrix, zip(sol.patterns, k)) for k in sol.kernel]
    assert all(len(op) == 0 for op in kernel_ops)
    part = order2_operator(S.context, S.matrix, zip(sol.patterns, sol.particular))
    assert part == order2_operator(S.context, S.matrix, [(MOYAL, Fraction(1, 2))])


def test_weight_family_contains_defaults():
    pis = [get(n).pi() for n in ("sl2-origin", "nonabelian-2d")]
    sol = derive_order2_weights(pis, triples_per_pi=30)
    assert sol.solvable and sol.contains(DEFAULT_WEIGHTS)
    assert not sol.contains(((MOYAL, Fraction(1, 2)),))


def test_b2_symmetric():
    for name in JACOBI:
        assert star_for(name).b2_is_symmetric()


def test_third_order_with_user_operator():
    # exp(eps Pi) on the symplectic plane: B3 = Pi^3 / 6
    S2 = star_for("symplectic-r2")
    ctx = S2.context
    terms = {}
    for k in range(4):
        alpha = ("q",) * (3 - k) + ("p",) * k
        beta = ("q",) * k + ("p",) * (3 - k)
        terms[(alpha, beta)] = ctx.const(Fraction((-1) ** k * comb(3, k), 6))
    S3 = StarProduct(S2.pi, StarConfig(order=3), extra=[BidiffOperator(ctx, terms)])
    assert certify_associativity(S3, 3) is None
    with pytest.raises(ValueError):
        StarProduct(S2.pi, StarConfig(order=3))


def test_central_lift_and_quotient():
    S = star_for("sl2-origin")
    x, y, z = S.context.gens("x", "y", "z")
    phi = x * x + y * y + z * z
    assert is_casimir(S, phi)
    t = central_lift(S, phi, 3)
    assert t[0] == phi
    Q = casimir_quotient(S, [t - EpsSeries.from_poly(S.context.one(), 2)], 3)
    assert Q.dims_by_degree() == {0: 1, 1: 3, 2: 5, 3: 7}
    assert not Q.associativity_defects() and not Q.projection_defects()
    assert [str(b) for b in Q.basis()[:5]] == ["1", "x", "y", "z", "x*y"]


def test_quotient_trivial_cases():
    S = star_for("sl2-origin")
    assert casimir_quotient(S, [], 3).dims_by_degree() == {0: 1, 1: 3, 2: 6, 3: 10}
    A = star_for("abelian-plane")
    xs = A.context.gen("x")
    Q = casimir_quotient(A, [A.series(xs)], 3)
    assert Q.dims_by_degree() == {0: 1, 1: 1, 2: 1, 3: 1}
    y = A.context.gen("y")
    assert Q.product(y, y)[0] == y * y


def test_lifts_commute():
    A = star_for("abelian-plane")
    x, y = A.context.gens("x", "y")
    lifts = [central_lift(A, x, 3), central_lift(A, y, 3)]
    assert A.commutator(lifts[0], lifts[1]).is_zero()


def test_not_casimir():
    S = star_for("sl2-origin")
    with pytest.raises(NotCasimir):
        central_lift(S, S.context.gen("x"), 3)
