"""Derived brackets of a Poisson structure along C = {y = 0}.

The ambient space is NC with tangential coordinates ``x`` and transverse
coordinates ``y``.  A = Gamma(Lambda NC) is realized as polynomials in
``x`` and ``theta_y``; ``P`` restricts to ``y = 0`` and kills ``theta_x``,
and ``i`` is the identity embedding of such polynomials.

    lambda_k(a_1, ..., a_k) = P([...[[pi, a_1], a_2], ..., a_k])

The brackets are graded symmetric for the shifted degree |a| - 1 and have
shifted degree +1, so the L-infinity relations checked here are

    sum_{i+j=n} sum_{unshuffles s} eps(s) lambda_{j+1}(lambda_i(a_s1..a_si), a_s(i+1)..a_sn) = 0

with eps the Koszul sign of the permutation in shifted degrees.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import List, Optional, Sequence, Tuple

from .core import GradedPoly, monomials_up_to, substitute
from .multivector import CotangentContext, is_maurer_cartan, schouten

DEFAULT_MAX_ARITY = 4


class CoisoSplitting:
    """Tangential/transverse split of the base generators of a CotangentContext."""

    def __init__(self, context: CotangentContext, transverse: Sequence[str]):
        self.context = context
        self.transverse = tuple(transverse)
        for y in self.transverse:
            if y not in context.base:
                raise ValueError(f"{y!r} is not a base generator")
        self.tangential = tuple(x for x in context.base if x not in self.transverse)
        for n in context.base:
            if context.generator(n).degree != 0:
                raise ValueError("splittings need degree-0 base coordinates")
        self.a_generators = self.tangential + tuple(context.conjugate[y] for y in self.transverse)
        self._kill = {y: 0 for y in self.transverse}
        self._kill.update({context.conjugate[x]: 0 for x in self.tangential})
        # Ker P is generated by y and theta_x; check it is closed under the bracket
        gens = [context.gen(n) for n in self._kill]
        for a in gens:
            for b in gens:
                if project_P(self, schouten(a, b)):
                    raise ValueError("Ker P is not a subalgebra for this splitting")

    def is_a_element(self, a: GradedPoly) -> bool:
        return a.context == self.context and a.free_of(*self._kill)

    def a_monomials(self, max_total: int) -> List[GradedPoly]:
        ctx = self.context
        return [ctx.monomial(m) for m in monomials_up_to(ctx, max_total, names=self.a_generators)]


def project_P(S: CoisoSplitting, P: GradedPoly) -> GradedPoly:
    """Restrict to y = 0 and drop every term containing theta_x."""
    return substitute(P, S._kill)


def include_i(S: CoisoSplitting, a: GradedPoly) -> GradedPoly:
    if not S.is_a_element(a):
        raise ValueError("include_i takes polynomials in x and theta_y only")
    return a


class PInfinityStructure:
    """Derived brackets of a Maurer-Cartan element for a splitting."""

    def __init__(self, splitting: CoisoSplitting, pi: GradedPoly, require_mc: bool = True,
                 max_arity: int = DEFAULT_MAX_ARITY):
        self.splitting = splitting
        self.pi = pi
        self.max_arity = max_arity
        if require_mc and not is_maurer_cartan(pi).ok:
            raise ValueError("pi is not a Maurer-Cartan element")

    def lam(self, *args: GradedPoly) -> GradedPoly:
        k = len(args)
        if k > self.max_arity + 1:
            raise ValueError(f"arity {k} exceeds the configured bound {self.max_arity}")
        X = self.pi
        for a in args:
            X = schouten(X, include_i(self.splitting, a))
            if not X:
                break
        return project_P(self.splitting, X)

    @property
    def lambda0(self) -> GradedPoly:
        return project_P(self.splitting, self.pi)


def lam(k: int, S: PInfinityStructure, *args: GradedPoly) -> GradedPoly:
    if k < 0:
        raise ValueError("arity must be nonnegative")
    if len(args) != k:
        raise ValueError(f"lambda_{k} takes {k} arguments")
    return S.lam(*args)


@dataclass(frozen=True)
class CoisotropyResult:
    coisotropic: bool
    certificate: GradedPoly


def check_coisotropic(S: PInfinityStructure) -> CoisotropyResult:
    l0 = S.lambda0
    return CoisotropyResult(not l0, l0)


def _shifted_parity(a: GradedPoly) -> int:
    return (a.degree() - 1) % 2 if a else 0


def _unshuffle_sign(args: Sequence[GradedPoly], first: Tuple[int, ...]) -> int:
    """Koszul sign (shifted degrees) of moving positions ``first`` to the front."""
    rest = [i for i in range(len(args)) if i not in first]
    order = list(first) + rest
    sign = 1
    for p in range(len(order)):
        for q in range(p + 1, len(order)):
            if order[p] > order[q] and _shifted_parity(args[order[p]]) and _shifted_parity(args[order[q]]):
                sign = -sign
    return sign


def linf_relation(S: PInfinityStructure, args: Sequence[GradedPoly]) -> GradedPoly:
    """Left side of the arity-n L-infinity relation on ``args`` (zero when it holds)."""
    n = len(args)
    total = S.splitting.context.zero()
    for i in range(n + 1):
        for first in combinations(range(n), i):
            inner = S.lam(*(args[j] for j in first))
            if not inner:
                continue
            rest = [args[j] for j in range(n) if j not in first]
            val = S.lam(inner, *rest)
            if val:
                total = total + (val if _unshuffle_sign(args, first) > 0 else -val)
    return total


RELATION_NAMES = {
    0: "lambda1(lambda0) = 0",
    1: "lambda1^2 + lambda2(lambda0, -) = 0",
    2: "lambda1 is a derivation of lambda2",
    3: "lambda2 Jacobi up to lambda1-homotopy",
}


@dataclass
class LInfinityReport:
    checked: int = 0
    violations: List[Tuple[str, Tuple[GradedPoly, ...], GradedPoly]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def l_infinity_check(S: PInfinityStructure, arity: int = 3,
                     samples: Optional[Sequence[GradedPoly]] = None,
                     sample_degree: int = 2) -> LInfinityReport:
    """Check the relations of arity 0..``arity`` on all multisets of samples."""
    if samples is None:
        samples = S.splitting.a_monomials(sample_degree)
    samples = [s for s in samples if s]
    report = LInfinityReport()
    for n in range(arity + 1):
        for tup in combinations_with_replacement(range(len(samples)), n):
            args = tuple(samples[j] for j in tup)
            val = linf_relation(S, args)
            report.checked += 1
            if val:
                report.violations.append((RELATION_NAMES.get(n, f"arity {n}"), args, val))
    return report
