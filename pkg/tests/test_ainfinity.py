import pytest
from hypothesis import given, strategies as st

from gradpoisson.ainfinity import (AInfinityTruncation, ainf_check, classical_bracket, degree_profile_ok,
                                   differential_layer, gauge_shift, kill_curvature, rescale_brackets)
from gradpoisson.cohomology import EpsSeries
from gradpoisson.core import GradedContext, left_derivative

CTX = GradedContext([("x", 0), ("t1", 1), ("t2", 1), ("t3", 1)])
x, t1, t2, t3 = CTX.gens("x", "t1", "t2", "t3")
SAMPLES = [CTX.one(), x, t1, t2, x * t3, x * x * t2]


def d(p):
    return t1 * left_derivative(p, "x")


def curved(w, order=3):
    return AInfinityTruncation.from_layers(CTX, order, {0: {2: lambda: w}, 1: {1: d}})


def test_dga_satisfies_relations():
    T = AInfinityTruncation.from_layers(CTX, 2, {1: {0: d}})
    assert ainf_check(T, SAMPLES, 3).ok


def test_non_derivation_detected():
    T = AInfinityTruncation.from_layers(CTX, 2, {1: {0: lambda p: t1 * p}})
    report = ainf_check(T, SAMPLES, 3)
    assert not report.ok


def test_curvature_killed_when_exact():
    T = curved(t1 * t2)
    assert ainf_check(T, SAMPLES, 3).ok
    r = kill_curvature(T, 3)
    assert r.ok
    assert str(r.gamma) == "eps^1*(-x*t2)"
    assert r.shifted.mu0.is_zero()
    assert ainf_check(r.shifted, SAMPLES[:4], 3).ok


def test_curvature_obstruction():
    r = kill_curvature(curved(t2 * t3), 3)
    assert not r.ok
    assert r.obstruction_order == 2
    assert r.obstruction == t2 * t3
    assert r.obstruction_class == (1,)


@given(st.sampled_from([x * t2 + t3, t2, x * t3, x * x * t2 - t3]),
       st.sampled_from([t1 * x, x * t2, t3]))
def test_gauge_shift_preserves_structure(g1, g2):
    T = AInfinityTruncation.from_layers(CTX, 2, {1: {1: d}})
    S = gauge_shift(T, EpsSeries((CTX.zero(), g1, g2)))
    assert ainf_check(S, [x, t1, t2, x * t3], 3).ok
    for a in (x, t2, x * t3):
        for b in (x, t1):
            assert classical_bracket(S, a, b) == classical_bracket(T, a, b)


def test_gauge_shift_requires_degree_one_and_eps():
    T = AInfinityTruncation.from_layers(CTX, 2, {1: {1: d}})
    with pytest.raises(ValueError):
        gauge_shift(T, EpsSeries((t1, CTX.zero(), CTX.zero())))
    with pytest.raises(ValueError):
        gauge_shift(T, EpsSeries((CTX.zero(), x, CTX.zero())))


def test_rescale_profile():
    T = AInfinityTruncation.from_layers(CTX, 3, {0: {2: lambda: t1 * t2}, 1: {1: d}})
    tau = rescale_brackets(T, SAMPLES)
    assert tau.order == 1
    assert tau.mu0[0] == t1 * t2
    assert degree_profile_ok(tau, SAMPLES[:4], d)
    assert differential_layer(T, 1)(x) == t1


def test_rescale_rejects_bad_valuations():
    with pytest.raises(ValueError):
        rescale_brackets(AInfinityTruncation.from_layers(CTX, 3, {0: {1: lambda: t1 * t2}}), SAMPLES)
    with pytest.raises(ValueError):
        rescale_brackets(AInfinityTruncation.from_layers(CTX, 3, {1: {0: d}}), SAMPLES)
