import random
from fractions import Fraction

import pytest

from gradpoisson import pointwise as pw
from gradpoisson.coiso import (CoisoSplitting, PInfinityStructure, check_coisotropic, include_i,
                               l_infinity_check, lam, project_P)
from gradpoisson.core import evaluate
from gradpoisson.corpus import CORPUS, JACOBI, get
from gradpoisson.multivector import CotangentContext, bivector, poisson_matrix


def pinf(name, constraints=None, require_mc=True):
    prob = get(name)
    pi = prob.pi()
    S = CoisoSplitting(pi.context, constraints if constraints is not None else prob.constraints)
    return PInfinityStructure(S, pi, require_mc=require_mc)


def pointwise_coisotropic(prob, point):
    pi = prob.pi()
    base = list(pi.context.base)
    mat = poisson_matrix(pi)
    assign = dict(zip(base, point))
    rows = [[evaluate(mat[(a, b)], assign).constant_term() if (a, b) in mat else Fraction(0)
             for b in base] for a in base]
    n = len(base)
    W = pw.Subspace(tuple(pw.standard_basis(n, i) for i, x in enumerate(base)
                          if x not in prob.constraints), n)
    return pw.classify(pw.BilinearData.from_pi(rows), W).coisotropic


WITH_CONSTRAINTS = sorted(n for n, p in CORPUS.items() if p.constraints and p.poisson)


@pytest.mark.parametrize("name", WITH_CONSTRAINTS)
def test_lambda0_agrees_with_pointwise(name):
    prob = get(name)
    P = pinf(name, require_mc=False)
    rng = random.Random(name)
    base = list(P.pi.context.base)
    for _ in range(20):
        point = [Fraction(0) if x in prob.constraints else Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                 for x in base]
        l0 = evaluate(P.lambda0, dict(zip(base, point)))
        assert (not l0) == pointwise_coisotropic(prob, point)


def test_known_coisotropy():
    assert check_coisotropic(pinf("sl2-origin")).coisotropic
    assert not check_coisotropic(pinf("symplectic-r4-noncoiso")).coisotropic
    # coisotropic only along z = 0
    assert str(pinf("sl2-axis").lambda0) == "z*theta_x*theta_y"


def test_lambda1_sign_convention():
    P = pinf("symplectic-r2")
    q = P.splitting.context.gen("q")
    assert str(P.lam(q)) == "-theta_p"


def test_projection_and_inclusion():
    P = pinf("sl2-origin", ["z"])
    S = P.splitting
    ctx = S.context
    assert set(S.a_generators) == {"x", "y", "theta_z"}
    a = ctx.parse("x*theta_z + y")
    assert project_P(S, include_i(S, a)) == a
    assert not project_P(S, ctx.parse("z*x + theta_x"))


@pytest.mark.parametrize("name,constraints", [(n, c) for n, c in
                         [("symplectic-r2", ("p",)), ("sl2-origin", ("z",)), ("nonabelian-2d", ("y1",)),
                          ("abelian-plane", ("y",)), ("symplectic-r4", ("p1",))]])
def test_lambda1_squares_to_zero(name, constraints):
    P = pinf(name, constraints)
    for a in P.splitting.a_monomials(2):
        assert not P.lam(P.lam(a))


@pytest.mark.parametrize("name", JACOBI)
def test_linf_relations_hold(name):
    report = l_infinity_check(pinf(name), arity=3, sample_degree=1)
    assert report.ok and report.checked > 0


def test_linf_relations_curved():
    # the sl2 axis is not coisotropic, but the curved relations still hold
    report = l_infinity_check(pinf("sl2-axis"), arity=3, sample_degree=1)
    assert report.ok


def test_linf_relations_fail_without_jacobi():
    report = l_infinity_check(pinf("non-jacobi", require_mc=False), arity=3, sample_degree=1)
    assert report.violations


def test_require_mc_and_arity_bound():
    with pytest.raises(ValueError):
        pinf("non-jacobi")
    P = pinf("sl2-origin")
    x = P.splitting.context.gen("theta_x")
    with pytest.raises(ValueError):
        lam(-1, P)
    with pytest.raises(ValueError):
        P.lam(*([x] * (P.max_arity + 2)))


def test_bad_splitting():
    ctx = CotangentContext([("x", 0), ("t", 1)])
    with pytest.raises(ValueError):
        CoisoSplitting(ctx, ["x"])
    with pytest.raises(ValueError):
        CoisoSplitting(CotangentContext([("x", 0)]), ["q"])


def test_lambda2_is_minus_bracket_on_functions():
    # on degree-0 elements of A, lambda_2 reproduces the graph bracket for C = R^2 x {0}
    ctx = CotangentContext([("x", 0), ("y", 0), ("z", 0)])
    pi = bivector(ctx, {("x", "y"): ctx.parse("x")})
    P = PInfinityStructure(CoisoSplitting(ctx, ["z"]), pi)
    x, y = ctx.gens("x", "y")
    assert P.lam(x, y) == -ctx.parse("x")


@pytest.mark.parametrize("name,constraints", [("sl2-origin", ("z",)), ("nonabelian-2d", ("y1",)),
                                              ("symplectic-r4", ("p1", "p2"))])
def test_degree_bookkeeping_and_multiderivation(name, constraints):
    P = pinf(name, constraints)
    rng = random.Random(1)
    monos = P.splitting.a_monomials(2)
    for _ in range(40):
        k = rng.randint(1, 3)
        args = [rng.choice(monos) for _ in range(k)]
        v = P.lam(*args)
        if v:
            assert v.degrees() == (sum(a.degree() for a in args) + 2 - k,)
        # Leibniz in the last slot: lam(..., b c) = lam(..., b) c + (-1)^{|b|(|lam|)} b lam(..., c)
        b, c = rng.choice(monos), rng.choice(monos)
        head = args[:-1]
        shift = sum(a.degree() for a in head) + 2 - len(head) - 1
        lhs = P.lam(*head, b * c)
        sign = -1 if (shift * b.degree()) % 2 else 1
        assert lhs == P.lam(*head, b) * c + (b * P.lam(*head, c)).scale(sign)


@pytest.mark.parametrize("name,constraints", [("sl2-origin", ("z",)), ("nonabelian-2d", ("y1",)),
                                              ("symplectic-r2", ("p",))])
def test_lambda1_agrees_across_legendre_shift(name, constraints):
    # on T*[1](E[1]) the A-elements are functions of (x, y_dual); P' kills theta_x and theta_{y_dual}
    from gradpoisson.core import substitute
    from gradpoisson.multivector import legendre_shift, schouten
    P = pinf(name, constraints)
    Pi = legendre_shift(P.pi, constraints)
    sctx = Pi.context
    kill = {sctx.conjugate[n]: 0 for n in sctx.base}
    for a in P.splitting.a_monomials(2):
        La = legendre_shift(a, constraints)
        lhs = substitute(schouten(Pi, La), kill)
        assert lhs == -legendre_shift(P.lam(a), constraints)
