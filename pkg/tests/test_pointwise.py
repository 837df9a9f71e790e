import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gradpoisson import pointwise as pw
from oracles import classify_bruteforce

small = st.sampled_from([Fraction(v) for v in (-2, -1, 0, 0, 0, 1, 2)])


def random_skew(rng, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.choice([-2, -1, 0, 0, 1, 2]))
            m[i][j], m[j][i] = v, -v
    return m


def random_subspace(rng, n):
    k = rng.randint(0, n)
    vecs = [[Fraction(rng.choice([-1, 0, 0, 1, 2])) for _ in range(n)] for _ in range(k)]
    return pw.Subspace.span(vecs, n)


def test_matches_bruteforce_on_random_subspaces():
    rng = random.Random(11)
    for _ in range(500):
        n = rng.randint(1, 5)
        pi = random_skew(rng, n)
        W = random_subspace(rng, n)
        r = pw.classify(pw.BilinearData.from_pi(pi), W)
        ref = classify_bruteforce(pi, [list(v) for v in W.basis])
        assert r.coisotropic == ref["coisotropic"]
        assert r.cosymplectic == ref["cosymplectic"]
        assert r.symplectic == ref["symplectic"]
        assert r.rank_phi == ref["rank_phi"]
        assert len(r.characteristic_basis) == ref["characteristic_dim"]


@given(st.integers(1, 3), st.data())
def test_coisotropic_extension(k, data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    n = 2 * k
    pi = random_skew(rng, n)
    data_ = pw.BilinearData.from_pi(pi)
    W = random_subspace(rng, n)
    Wp = pw.coisotropic_extension(data_, W)
    assert pw.classify(data_, Wp).cosymplectic
    sub = pw.restrict_cosymplectic(data_, Wp)
    inner = pw.classify(sub, pw.coordinates_in(Wp, W))
    assert inner.coisotropic


def test_symplectic_plane_examples():
    d = pw.BilinearData.from_pi([[0, 1], [-1, 0]])
    line = pw.Subspace.span([[1, 0]])
    r = pw.classify(d, line)
    assert r.coisotropic and not r.symplectic and not r.cosymplectic
    whole = pw.Subspace.span([[1, 0], [0, 1]])
    r = pw.classify(d, whole)
    assert r.symplectic and r.cosymplectic and r.coisotropic
    point = pw.Subspace((), 2)
    r = pw.classify(d, point)
    assert not r.coisotropic and r.cosymplectic


def test_graph_of_poisson_map_is_coisotropic():
    std = pw.BilinearData.from_pi([[0, 1], [-1, 0]])
    assert pw.graph_coisotropy_check(std, std, [[1, 0], [0, 1]]).coisotropic
    assert pw.graph_coisotropy_check(std, std, [[1, 1], [0, 1]]).coisotropic  # det 1
    assert not pw.graph_coisotropy_check(std, std, [[2, 0], [0, 1]]).coisotropic


def test_bad_input():
    with pytest.raises(ValueError):
        pw.BilinearData.from_pi([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        pw.BilinearData.from_omega([[0, 0], [0, 0]])
    std = pw.BilinearData.from_pi([[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        pw.graph_coisotropy_check(std, std, [[1, 0, 0]])
