"""Multivector fields as functions on the shifted cotangent bundle T*[1]M.

Each base generator ``x`` of degree ``d`` gets a conjugate ``theta_x`` of
degree ``1 - d``.  The Schouten bracket is the canonical odd Poisson bracket
normalized by ``[theta_a, x^b] = delta_a^b``; it has degree -1.

Sign conventions (all derived from the normalization above and checked
against the axioms in the test suite, with p, q the function degrees):

    antisymmetry  [P, Q] = -(-1)^{(p-1)(q-1)} [Q, P]
    Jacobi        [P, [Q, R]] = [[P, Q], R] + (-1)^{(p-1)(q-1)} [Q, [P, R]]
    Leibniz       [P, Q R] = [P, Q] R + (-1)^{(p-1) q} Q [P, R]
    bivector      pi = 1/2 pi^{ij} theta_i theta_j
    induced       {f, g} = -[[pi, f], g]   so that {x^i, x^j} = pi^{ij}
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .core import (ContextMismatch, GradedContext, GradedPoly, left_derivative,
                   right_derivative, substitute)

THETA_PREFIX = "theta_"


def conjugate_name(name: str) -> str:
    return THETA_PREFIX + name


class CotangentContext(GradedContext):
    """Context of T*[1]M: base generators followed by their conjugates."""

    def __init__(self, base: Iterable[Tuple[str, int]], conjugates: Optional[Mapping[str, str]] = None):
        base = [(str(n), int(d)) for n, d in base]
        conjugates = dict(conjugates or {})
        names = [conjugates.get(n, conjugate_name(n)) for n, _ in base]
        super().__init__(base + [(t, 1 - d) for t, (_, d) in zip(names, base)])
        self.base: Tuple[str, ...] = tuple(n for n, _ in base)
        self.pairs: Tuple[Tuple[str, str], ...] = tuple(zip(self.base, names))
        self.conjugate = dict(self.pairs)
        self.base_of = {t: x for x, t in self.pairs}

    def theta(self, name: str) -> GradedPoly:
        return self.gen(self.conjugate[name])

    def __repr__(self):
        return f"CotangentContext({', '.join(f'{n}:{self.generator(n).degree}' for n in self.base)})"


def _cotangent(p: GradedPoly) -> CotangentContext:
    ctx = p.context
    if not isinstance(ctx, CotangentContext):
        raise TypeError("multivector operations need a CotangentContext")
    return ctx


def schouten(P: GradedPoly, Q: GradedPoly) -> GradedPoly:
    """Schouten-Nijenhuis bracket  sum_a dP/dtheta_a (R) dQ/dx^a (L) - dP/dx^a (R) dQ/dtheta_a (L)."""
    ctx = _cotangent(P)
    if Q.context != ctx:
        raise ContextMismatch("schouten arguments live in different contexts")
    out = ctx.zero()
    if not P or not Q:
        return out
    for x, t in ctx.pairs:
        dpt = right_derivative(P, t)
        if dpt:
            dqx = left_derivative(Q, x)
            if dqx:
                out = out + dpt * dqx
        dpx = right_derivative(P, x)
        if dpx:
            dqt = left_derivative(Q, t)
            if dqt:
                out = out - dpx * dqt
    return out


def is_theta_free(f: GradedPoly) -> bool:
    ctx = _cotangent(f)
    return f.free_of(*(t for _, t in ctx.pairs))


def induced_bracket(pi: GradedPoly, f: GradedPoly, g: GradedPoly) -> GradedPoly:
    """Poisson bracket of functions, {f, g} = -[[pi, f], g]."""
    if not (is_theta_free(f) and is_theta_free(g)):
        raise ValueError("induced_bracket takes theta-free arguments")
    return -schouten(schouten(pi, f), g)


def bivector(ctx: CotangentContext, matrix: Mapping[Tuple[str, str], GradedPoly]) -> GradedPoly:
    """Assemble pi = 1/2 pi^{ij} theta_i theta_j from entries {(x_i, x_j): pi^{ij}}.

    Entries may be given for one ordering of each pair; the transpose is
    filled in by skew symmetry and checked if both are present.
    """
    full: Dict[Tuple[str, str], GradedPoly] = {}
    for (a, b), v in matrix.items():
        if isinstance(v, str):
            v = ctx.parse(v)
        elif not isinstance(v, GradedPoly):
            v = ctx.const(v)
        if a == b:
            if v:
                raise ValueError(f"diagonal entry ({a},{a}) must vanish")
            continue
        for key, val in (((a, b), v), ((b, a), -v)):
            if key in full and full[key] != val:
                raise ValueError(f"entries for pair {key} are not skew")
            full[key] = val
    pi = ctx.zero()
    for (a, b), v in full.items():
        pi = pi + (v * ctx.theta(a) * ctx.theta(b)).scale(Fraction(1, 2))
    return pi


def poisson_matrix(pi: GradedPoly) -> Dict[Tuple[str, str], GradedPoly]:
    """The coefficient matrix pi^{ij} = {x^i, x^j} over the even base generators."""
    ctx = _cotangent(pi)
    xs = [ctx.gen(n) for n in ctx.base]
    out = {}
    for i, a in enumerate(ctx.base):
        for j, b in enumerate(ctx.base):
            if i != j:
                v = induced_bracket(pi, xs[i], xs[j])
                if v:
                    out[(a, b)] = v
    return out


def jacobiator(pi: GradedPoly, f: GradedPoly, g: GradedPoly, h: GradedPoly) -> GradedPoly:
    br = lambda a, b: induced_bracket(pi, a, b)
    return br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))


@dataclass(frozen=True)
class McElement:
    pi: GradedPoly
    certificate: GradedPoly
    ok: bool = True


@dataclass(frozen=True)
class McFailure:
    pi: GradedPoly
    certificate: GradedPoly
    ok: bool = False


def is_maurer_cartan(pi: GradedPoly):
    """Return McElement when [pi, pi] = 0, else McFailure carrying [pi, pi]."""
    if pi and pi.degrees() != (2,):
        raise ValueError(f"Maurer-Cartan candidates have degree 2, got {pi.degrees()}")
    cert = schouten(pi, pi)
    if cert:
        return McFailure(pi, cert)
    return McElement(pi, cert)


def shifted_context(ctx: CotangentContext, split: Sequence[str],
                    names: Optional[Mapping[str, str]] = None) -> CotangentContext:
    """Context of T*[1](E*[1]) for the fiber generators ``split`` of E."""
    names = dict(names or {})
    for y in split:
        if y not in ctx.base:
            raise ValueError(f"{y!r} is not a base generator with a conjugate")
    base = []
    conj = {}
    for x in ctx.base:
        d = ctx.generator(x).degree
        if x in split:
            b = names.get(x, x + "_dual")
            base.append((b, 1 - d))
            conj[b] = conjugate_name(b)
        else:
            base.append((x, d))
            conj[x] = ctx.conjugate[x]
    return CotangentContext(base, conj)


def legendre_shift(P: GradedPoly, split: Sequence[str],
                   names: Optional[Mapping[str, str]] = None) -> GradedPoly:
    """Degree-shift (Legendre) map  y -> theta_b,  theta_y -> b,  theta_x -> -theta_x.

    ``b`` is the new fiber generator of degree ``1 - |y|``; base generators
    outside ``split`` keep their names and their conjugates change sign.
    The map is an algebra isomorphism and reverses the sign of the Schouten
    bracket, so bivectors without fiber dependence are fixed.
    Shifting again along the new fibers, with ``names`` mapping them back,
    returns the original element exactly.
    """
    ctx = _cotangent(P)
    new = shifted_context(ctx, split, names)
    assign = {}
    names = dict(names or {})
    for x in ctx.base:
        if x in split:
            b = names.get(x, x + "_dual")
            assign[x] = new.theta(b)
            assign[ctx.conjugate[x]] = new.gen(b)
        else:
            assign[ctx.conjugate[x]] = -new.gen(ctx.conjugate[x])
    return substitute(P, assign, target=new)
