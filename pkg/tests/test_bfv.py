import random

import pytest
from hypothesis import given, strategies as st

from gradpoisson import bfv
from gradpoisson.corpus import COISOTROPIC, get
from gradpoisson.randomized import random_poly


def ctx_for(name, constraints):
    return bfv.BfvContext.from_pi(get(name).pi(), constraints)


def test_nonabelian_charge_exact():
    ch = bfv.bfv_charge(get("nonabelian-2d").pi(), ["y1", "y2"])
    ctx = ch.context
    y1, y2, b1, c1, c2 = ctx.gens("y1", "y2", "b_y1", "c_y1", "c_y2")
    assert ch.omega == y1 * c1 + y2 * c2 - b1 * c1 * c2
    assert ch.terminated and ch.stop_reason == "closed"


def test_sl2_origin_charge_exact():
    ch = bfv.bfv_charge(get("sl2-origin").pi(), ["x", "y", "z"])
    assert str(ch.omega) == ("-b_x*c_y*c_z + b_y*c_x*c_z - b_z*c_x*c_y + x*c_x + y*c_y + z*c_z")
    assert ch.terminated


@pytest.mark.parametrize("name,constraints", COISOTROPIC)
def test_charge_squares_to_zero(name, constraints):
    ch = bfv.bfv_charge(get(name).pi(), constraints)
    assert ch.terminated
    assert not bfv.bracket(ch.omega, ch.omega)
    assert ch.omega.degrees() == (1,)


def test_noncoisotropic_rejected_with_certificate():
    with pytest.raises(bfv.NotCoisotropic) as err:
        bfv.bfv_charge(get("symplectic-r4-noncoiso").pi(), ["q2", "p2"])
    assert str(err.value.certificate) == "c_q2*c_p2"
    with pytest.raises(bfv.NotCoisotropic):
        bfv.bfv_charge(get("sl2-axis").pi(), ["x", "y"])


def test_degree_cap_stops_early():
    ch = bfv.bfv_charge(get("nonabelian-2d").pi(), ["y1", "y2"], max_degree=2)
    assert not ch.terminated and ch.stop_reason == "degree cap"
    assert ch.residual


def test_extended_bracket_pairings():
    ctx = ctx_for("nonabelian-2d", ["y1", "y2"])
    y1, y2 = ctx.gens("y1", "y2")
    assert bfv.bracket(ctx.b("y1"), ctx.c("y1")) == ctx.one()
    assert bfv.bracket(ctx.c("y1"), ctx.b("y1")) == ctx.one()
    assert not bfv.bracket(ctx.b("y1"), ctx.c("y2"))
    assert bfv.bracket(y1, y2) == y1
    assert ctx.generator("b_y1").degree == -1 and ctx.generator("c_y1").degree == 1


@given(st.integers(0, 10 ** 6))
def test_homotopy_identity(seed):
    rng = random.Random(seed)
    ctx = ctx_for(*rng.choice(COISOTROPIC))
    p = random_poly(rng, ctx, 3, 4)
    d, s = bfv.koszul_delta0, bfv.homotopy_s
    assert d(s(p)) + s(d(p)) == p - bfv.projection_pr(p)
    assert not d(d(p))


@given(st.integers(0, 10 ** 6))
def test_bracket_graded_jacobi(seed):
    rng = random.Random(seed)
    ctx = ctx_for("sl2-origin", ["x", "y", "z"])
    F, G, H = (random_poly(rng, ctx, 2, 2, degree=rng.randint(-1, 1)) for _ in range(3))
    if not (F and G and H):
        return
    f, g = F.degree(), G.degree()
    br = bfv.bracket
    sign = -1 if (f * g) % 2 else 1
    assert br(F, G) == br(G, F).scale(-sign)
    assert br(F, br(G, H)) == br(br(F, G), H) + br(G, br(F, H)).scale(sign)


def test_delta0_preimage():
    ctx = ctx_for("sl2-origin", ["x", "y", "z"])
    F = bfv.f0(ctx)
    pre = bfv.delta0_preimage(F)
    assert pre is not None and bfv.koszul_delta0(pre) == F
    bad = ctx_for("symplectic-r4-noncoiso", ["q2", "p2"])
    assert bfv.delta0_preimage(bfv.f0(bad)) is None


def test_cohomology_sl2_origin():
    ch = bfv.bfv_charge(get("sl2-origin").pi(), ["x", "y", "z"])
    H = bfv.bfv_cohomology(ch, range(-3, 4), 3)
    assert {d: g.dimension for d, g in H.items()} == {-3: 0, -2: 0, -1: 0, 0: 1, 1: 0, 2: 0, 3: 1}
    assert [str(p) for p in H[3].polys()] == ["c_x*c_y*c_z"]
