import random

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from gradpoisson.corpus import STRUCTURES, get
from gradpoisson.multivector import (CotangentContext, bivector, induced_bracket, is_maurer_cartan,
                                     jacobiator, legendre_shift, poisson_matrix, schouten)
from gradpoisson.randomized import random_poly
from oracles import sympy_bracket, to_sympy
from strategies import homogeneous_polys


def koszul(a, b):
    return -1 if ((a - 1) * (b - 1)) % 2 else 1


@st.composite
def multivector_triples(draw):
    base = [("x", 0), ("y", draw(st.sampled_from([0, 0, 1, -1, 2]))), ("z", 0)]
    ctx = CotangentContext(base)
    out = [draw(homogeneous_polys(ctx, max_terms=3, max_total=3)) for _ in range(3)]
    assume(all(out))
    return out


@given(multivector_triples())
def test_graded_antisymmetry(t):
    P, Q, _ = t
    assert schouten(P, Q) == schouten(Q, P).scale(-koszul(P.degree(), Q.degree()))


@given(multivector_triples())
def test_graded_jacobi(t):
    P, Q, R = t
    lhs = schouten(P, schouten(Q, R))
    rhs = schouten(schouten(P, Q), R) + schouten(Q, schouten(P, R)).scale(koszul(P.degree(), Q.degree()))
    assert lhs == rhs


@given(multivector_triples())
def test_leibniz(t):
    P, Q, R = t
    sign = -1 if ((P.degree() - 1) * Q.degree()) % 2 else 1
    assert schouten(P, Q * R) == schouten(P, Q) * R + (Q * schouten(P, R)).scale(sign)


def test_bracket_of_coordinates():
    ctx = CotangentContext([("x", 0), ("y", 0)])
    x, y = ctx.gens("x", "y")
    tx, ty = ctx.theta("x"), ctx.theta("y")
    assert schouten(tx, x) == ctx.one()
    assert schouten(x, tx) == -ctx.one()
    assert not schouten(x, y)
    pi = tx * ty
    assert induced_bracket(pi, x, y) == ctx.one()


@pytest.mark.parametrize("name", STRUCTURES)
def test_induced_bracket_matches_sympy(name):
    prob = get(name)
    pi = prob.pi()
    ctx = pi.context
    names = list(ctx.base)
    syms, br = sympy_bracket(prob.poisson, names)
    rng = random.Random(7)
    for _ in range(15):
        f = random_poly(rng, ctx, 3, 3, names=names)
        g = random_poly(rng, ctx, 3, 3, names=names)
        got = to_sympy(induced_bracket(pi, f, g), syms)
        assert sympy.expand(got - br(to_sympy(f, syms), to_sympy(g, syms))) == 0


@pytest.mark.parametrize("name", STRUCTURES)
def test_mc_iff_jacobi_oracle(name):
    prob = get(name)
    pi = prob.pi()
    names = list(pi.context.base)
    syms, br = sympy_bracket(prob.poisson, names)
    s = [syms[n] for n in names]
    jac_zero = all(sympy.expand(br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))) == 0
                   for a in s for b in s for c in s)
    assert is_maurer_cartan(pi).ok == jac_zero
    assert jac_zero == (name != "non-jacobi")


def test_non_jacobi_certificate():
    pi = get("non-jacobi").pi()
    mc = is_maurer_cartan(pi)
    assert not mc.ok
    assert str(mc.certificate) == "-2*theta_x2*theta_x3*theta_x4"
    x = {n: pi.context.gen(n) for n in pi.context.base}
    assert jacobiator(pi, x["x2"], x["x3"], x["x4"])


def test_poisson_matrix_roundtrip():
    pi = get("sl2-origin").pi()
    mat = poisson_matrix(pi)
    assert bivector(pi.context, {k: v for k, v in mat.items() if k[0] < k[1]}) == pi
    assert mat[("y", "x")] == -mat[("x", "y")]


def test_mc_rejects_wrong_degree():
    ctx = CotangentContext([("x", 0)])
    with pytest.raises(ValueError):
        is_maurer_cartan(ctx.theta("x"))


@pytest.mark.parametrize("name", ["sl2-origin", "symplectic-r4", "non-jacobi"])
def test_legendre_shift_is_antihomomorphism(name):
    prob = get(name)
    pi = prob.pi()
    ctx = pi.context
    split = prob.constraints
    rng = random.Random(3)
    for _ in range(10):
        P = random_poly(rng, ctx, 3, 3, degree=rng.randint(1, 2))
        Q = random_poly(rng, ctx, 3, 3, degree=rng.randint(1, 2))
        LP, LQ = legendre_shift(P, split), legendre_shift(Q, split)
        assert schouten(LP, LQ) == -legendre_shift(schouten(P, Q), split)
        assert legendre_shift(P * Q, split) == LP * LQ
    back = legendre_shift(legendre_shift(pi, split), [y + "_dual" for y in split],
                          {y + "_dual": y for y in split})
    assert back == pi
