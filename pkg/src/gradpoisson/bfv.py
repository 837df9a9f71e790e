"""BFV charge by homological perturbation.

For constraints ``y^mu`` the extended algebra is polynomials in the base
coordinates together with odd ghost momenta ``b_mu`` (degree -1) and odd
ghosts ``c_mu`` (degree +1), so that ``D = {Omega, -}`` raises degree.
The opposite convention (b of degree +1, c of degree -1) is the mirror
image of this one:

    here        b: -1   c: +1   Omega_0 = y^mu c_mu   D: degree +1
    mirrored    b: +1   c: -1   same formulas         D: degree -1

The Poisson bracket on the extended algebra is

    {F, G} = pi^{ij} dF/dz^i (R) dG/dz^j (L)
             + sum_mu dF/db_mu (R) dG/dc_mu (L) + dF/dc_mu (R) dG/db_mu (L)

so that {b_mu, c_nu} = {c_nu, b_mu} = delta_mu_nu.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from . import linalg
from .core import GradedContext, GradedPoly, embed, left_derivative, right_derivative
from .multivector import CotangentContext, poisson_matrix


class NotCoisotropic(ValueError):
    def __init__(self, certificate: GradedPoly):
        super().__init__(f"F0 = {certificate} is not delta0-exact: C is not coisotropic")
        self.certificate = certificate


def ghost_momentum(y: str) -> str:
    return f"b_{y}"


def ghost(y: str) -> str:
    return f"c_{y}"


class BfvContext(GradedContext):
    """Base coordinates plus one (b, c) pair per constraint."""

    def __init__(self, base: Sequence[str], constraints: Sequence[str],
                 matrix: Dict[Tuple[str, str], GradedPoly]):
        self.base = tuple(base)
        self.constraints = tuple(constraints)
        gens = [(n, 0) for n in self.base]
        gens += [(ghost_momentum(y), -1) for y in self.constraints]
        gens += [(ghost(y), 1) for y in self.constraints]
        super().__init__(gens)
        self.ghost_pairs = tuple((ghost_momentum(y), ghost(y)) for y in self.constraints)
        self.matrix = {k: embed(v, self) if v.context != self else v for k, v in matrix.items()}

    @classmethod
    def from_pi(cls, pi: GradedPoly, constraints: Sequence[str]) -> "BfvContext":
        ctx = pi.context
        if not isinstance(ctx, CotangentContext):
            raise TypeError("pi must live on a CotangentContext")
        for y in constraints:
            if y not in ctx.base:
                raise ValueError(f"constraint {y!r} is not a base coordinate")
        plain = GradedContext([(n, ctx.generator(n).degree) for n in ctx.base])
        mat = {k: _to_plain(v, ctx, plain) for k, v in poisson_matrix(pi).items()}
        out = cls(ctx.base, constraints, {})
        out.matrix = {k: embed(v, out) for k, v in mat.items()}
        return out

    def b(self, y: str) -> GradedPoly:
        return self.gen(ghost_momentum(y))

    def c(self, y: str) -> GradedPoly:
        return self.gen(ghost(y))


def _to_plain(v: GradedPoly, ctx: CotangentContext, plain: GradedContext) -> GradedPoly:
    if not v.free_of(*ctx.conjugate.values()):
        raise ValueError("Poisson coefficients must be theta-free")
    return GradedPoly(plain, {m[:len(ctx.base)]: c for m, c in v.terms.items()})


def bracket(F: GradedPoly, G: GradedPoly) -> GradedPoly:
    ctx: BfvContext = F.context
    out = ctx.zero()
    if not F or not G:
        return out
    dF = {}
    for (a, b), coeff in ctx.matrix.items():
        if a not in dF:
            dF[a] = right_derivative(F, a)
        if not dF[a]:
            continue
        dG = left_derivative(G, b)
        if dG:
            out = out + coeff * dF[a] * dG
    for bn, cn in ctx.ghost_pairs:
        fb = right_derivative(F, bn)
        if fb:
            out = out + fb * left_derivative(G, cn)
        fc = right_derivative(F, cn)
        if fc:
            out = out + fc * left_derivative(G, bn)
    return out


def koszul_delta0(p: GradedPoly) -> GradedPoly:
    """delta0 = y^mu d/db_mu."""
    ctx: BfvContext = p.context
    out = ctx.zero()
    for y in ctx.constraints:
        d = left_derivative(p, ghost_momentum(y))
        if d:
            out = out + ctx.gen(y) * d
    return out


def _h(p: GradedPoly) -> GradedPoly:
    ctx: BfvContext = p.context
    out = ctx.zero()
    for y in ctx.constraints:
        d = left_derivative(p, y)
        if d:
            out = out + ctx.b(y) * d
    return out


def euler_degree(ctx: BfvContext, m) -> int:
    idx = [ctx.index(y) for y in ctx.constraints] + [ctx.index(ghost_momentum(y)) for y in ctx.constraints]
    return sum(m[i] for i in idx)


def homotopy_s(p: GradedPoly) -> GradedPoly:
    """s = h / E on the positive E-eigenspaces, zero on E = 0."""
    ctx: BfvContext = p.context
    by_e: Dict[int, Dict] = {}
    for m, c in p.terms.items():
        by_e.setdefault(euler_degree(ctx, m), {})[m] = c
    out = ctx.zero()
    for e, terms in sorted(by_e.items()):
        if e:
            out = out + _h(GradedPoly(ctx, terms)).scale(Fraction(1, e))
    return out


def projection_pr(p: GradedPoly) -> GradedPoly:
    ctx: BfvContext = p.context
    return p.filter(lambda m: euler_degree(ctx, m) == 0)


def omega0(ctx: BfvContext) -> GradedPoly:
    out = ctx.zero()
    for y in ctx.constraints:
        out = out + ctx.gen(y) * ctx.c(y)
    return out


def f0(ctx: BfvContext) -> GradedPoly:
    """F0 = 1/2 {Omega0, Omega0} = 1/2 {y^mu, y^nu} c_mu c_nu."""
    o = omega0(ctx)
    return bracket(o, o).scale(Fraction(1, 2))


def delta0_preimage(F: GradedPoly) -> Optional[GradedPoly]:
    """Solve delta0(beta) = F by exact linear algebra; None when F is not exact."""
    ctx: BfvContext = F.context
    if not F:
        return ctx.zero()
    cand = set()
    ys = [ctx.index(y) for y in ctx.constraints]
    bs = [ctx.index(ghost_momentum(y)) for y in ctx.constraints]
    for m in F.terms:
        for yi, bi in zip(ys, bs):
            if m[yi] > 0 and m[bi] == 0:
                nm = list(m)
                nm[yi] -= 1
                nm[bi] = 1
                cand.add(tuple(nm))
    cand = sorted(cand)
    target_index: Dict = {}

    def as_vec(p):
        v = {}
        for mm, c in p.terms.items():
            v[target_index.setdefault(mm, len(target_index))] = c
        return v

    b = as_vec(F)
    cols = [as_vec(koszul_delta0(ctx.monomial(m))) for m in cand]
    x = linalg.solve(cols, b)
    if x is None:
        return None
    out = ctx.zero()
    for j, c in x.items():
        out = out + ctx.monomial(cand[j], c)
    return out


@dataclass(frozen=True)
class BfvCharge:
    context: BfvContext
    components: Tuple[GradedPoly, ...]
    terminated: bool
    residual: GradedPoly
    max_degree: int
    stop_reason: str

    @property
    def omega(self) -> GradedPoly:
        out = self.context.zero()
        for c in self.components:
            out = out + c
        return out


def bfv_charge(pi: GradedPoly, constraints: Sequence[str], max_degree: int = 8) -> BfvCharge:
    """Omega = sum Omega_k with Omega_{k+1} = -1/2 s({R_k, R_k}).

    Stops when Omega_{k+1} vanishes, when k+1 exceeds the number of
    constraints, or when a component exceeds ``max_degree`` in polynomial
    degree.  ``terminated`` means the series closed with {Omega, Omega} = 0.
    """
    ctx = pi if isinstance(pi, BfvContext) else BfvContext.from_pi(pi, constraints)
    F = f0(ctx)
    if F and delta0_preimage(F) is None:
        raise NotCoisotropic(F)
    comps = [omega0(ctx)]
    R = comps[0]
    reason = "closed"
    while True:
        k = len(comps) - 1
        nxt = homotopy_s(bracket(R, R)).scale(Fraction(-1, 2))
        if not nxt:
            reason = "closed"
            break
        if k + 1 > len(ctx.constraints):
            reason = "ghost bound"
            break
        if nxt.poly_degree() > max_degree:
            reason = "degree cap"
            break
        comps.append(nxt)
        R = R + nxt
    residual = bracket(R, R)
    return BfvCharge(ctx, tuple(comps), reason == "closed" and not residual, residual,
                     max_degree, reason)


def bfv_differential(charge: BfvCharge, p: GradedPoly) -> GradedPoly:
    return bracket(charge.omega, p)


def bfv_cohomology(charge: BfvCharge, degrees: Sequence[int], cap: int,
                   weights: Optional[Sequence[int]] = None):
    """H_D in the given degrees at weight cap (delegates to the cohomology engine)."""
    from .cohomology import CochainComplex, bfv_weights
    w = weights or bfv_weights(charge.context)
    cx = CochainComplex.from_operator(charge.context, lambda p: bfv_differential(charge, p),
                                      cap, w, degrees)
    return {d: cx.cohomology(d) for d in degrees}
