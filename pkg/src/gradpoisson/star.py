"""Order-eps^2 star products for polynomial Poisson structures.

    f * g = f g + eps {f, g} + eps^2 B_2(f, g)  (mod eps^3)

B_2 is a combination of contraction patterns quadratic in pi.  A pattern
assigns each of the four indices of pi^{ij} pi^{kl} to the left argument
``f``, the right argument ``g`` or a derivative ``D`` of the other factor
of pi.  The weights are pinned by the order-eps^2 associativity equation,
a linear system in the pattern weights (see :func:`derive_order2_weights`).

With B_1 = {-, -} the commutator is f*g - g*f = 2 eps {f, g} + O(eps^3)
whenever B_2 is symmetric; no rescaling of eps is applied.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .cohomology import EpsSeries, TruncationError
from .core import GradedContext, GradedPoly, left_derivative, monomials_up_to
from .expr import monomial_sort_key
from .multivector import CotangentContext, poisson_matrix

Pattern = Tuple[str, str, str, str]  # destinations of i, j, k, l in pi^{ij} pi^{kl}
MultiIndex = Tuple[str, ...]

# pi^{ij}pi^{kl} d_i d_k f d_j d_l g, pi^{ij} d_j pi^{kl} d_i d_k f d_l g,
# pi^{ij} d_j pi^{kl} d_k f d_i d_l g, d_l pi^{ij} d_j pi^{kl} d_i f d_k g
MOYAL: Pattern = ("f", "g", "f", "g")
DEFAULT_WEIGHTS: Tuple[Tuple[Pattern, Fraction], ...] = (
    (MOYAL, Fraction(1, 2)),
    (("f", "D", "f", "g"), Fraction(1, 3)),
    (("g", "D", "f", "g"), Fraction(-1, 3)),
    (("f", "D", "g", "D"), Fraction(-1, 6)),
)


def ansatz_patterns() -> List[Pattern]:
    """All patterns with one or two derivatives on each argument."""
    out = []
    for p in product("fgD", repeat=4):
        nf, ng = p.count("f"), p.count("g")
        if 1 <= nf <= 2 and 1 <= ng <= 2:
            out.append(p)
    return out


class BidiffOperator:
    """Finite sum of coeff * d^alpha f * d^beta g over even coordinates."""

    def __init__(self, context: GradedContext, terms: Mapping[Tuple[MultiIndex, MultiIndex], GradedPoly]):
        self.context = context
        self.terms = {k: v for k, v in terms.items() if v}
        for (a, b) in self.terms:
            if not a or not b:
                raise ValueError("bidifferential terms must differentiate both slots")
        self._cache: Dict[Tuple[GradedPoly, MultiIndex], GradedPoly] = {}

    def derivative(self, f: GradedPoly, alpha: MultiIndex) -> GradedPoly:
        key = (f, alpha)
        hit = self._cache.get(key)
        if hit is None:
            hit = f
            for n in alpha:
                hit = left_derivative(hit, n)
                if not hit:
                    break
            if len(self._cache) > 200000:
                self._cache.clear()
            self._cache[key] = hit
        return hit

    def __call__(self, f: GradedPoly, g: GradedPoly) -> GradedPoly:
        out = self.context.zero()
        if not f or not g:
            return out
        for (a, b), c in self.terms.items():
            df = self.derivative(f, a)
            if not df:
                continue
            dg = self.derivative(g, b)
            if dg:
                out = out + c * df * dg
        return out

    def transpose(self) -> "BidiffOperator":
        return BidiffOperator(self.context, {(b, a): c for (a, b), c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, BidiffOperator) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)


def plain_matrix(pi: GradedPoly) -> Tuple[GradedContext, Dict[Tuple[str, str], GradedPoly]]:
    """Coordinate ring and coefficient matrix of a bivector on T*[1]M."""
    ctx = pi.context
    if not isinstance(ctx, CotangentContext):
        raise TypeError("pi must live on a CotangentContext")
    for n in ctx.base:
        if ctx.generator(n).degree != 0:
            raise ValueError("star products need degree-0 coordinates")
    plain = GradedContext([(n, 0) for n in ctx.base])
    mat = {}
    for k, v in poisson_matrix(pi).items():
        mat[k] = GradedPoly(plain, {m[:len(ctx.base)]: c for m, c in v.terms.items()})
    return plain, mat


def to_plain(ctx: GradedContext, p: GradedPoly) -> GradedPoly:
    if p.context == ctx:
        return p
    names = ctx.names
    idx = [p.context.index(n) for n in names]
    out = {}
    for m, c in p.terms.items():
        if sum(m) != sum(m[i] for i in idx):
            raise ValueError("polynomial involves generators outside the coordinate ring")
        out[tuple(m[i] for i in idx)] = c
    return GradedPoly(ctx, out)


def poisson_operator(ctx: GradedContext, mat: Mapping[Tuple[str, str], GradedPoly]) -> BidiffOperator:
    return BidiffOperator(ctx, {((a,), (b,)): v for (a, b), v in mat.items()})


def pattern_operator(ctx: GradedContext, mat: Mapping[Tuple[str, str], GradedPoly],
                     pattern: Pattern) -> BidiffOperator:
    names = ctx.names
    zero = ctx.zero()
    terms: Dict[Tuple[MultiIndex, MultiIndex], GradedPoly] = {}
    cache: Dict[Tuple[str, str, MultiIndex], GradedPoly] = {}

    def entry(a, b, ders):
        key = (a, b, ders)
        if key not in cache:
            v = mat.get((a, b), zero)
            for n in ders:
                if not v:
                    break
                v = left_derivative(v, n)
            cache[key] = v
        return cache[key]

    for i, j, k, l in product(names, repeat=4):
        if not mat.get((i, j)) or not mat.get((k, l)):
            continue
        idx = (i, j, k, l)
        d_first = tuple(sorted(idx[q] for q in (2, 3) if pattern[q] == "D"))
        d_second = tuple(sorted(idx[q] for q in (0, 1) if pattern[q] == "D"))
        c = entry(i, j, d_first)
        if not c:
            continue
        c = c * entry(k, l, d_second)
        if not c:
            continue
        alpha = tuple(sorted(idx[q] for q in range(4) if pattern[q] == "f"))
        beta = tuple(sorted(idx[q] for q in range(4) if pattern[q] == "g"))
        key = (alpha, beta)
        terms[key] = terms.get(key, zero) + c
    return BidiffOperator(ctx, terms)


def order2_operator(ctx: GradedContext, mat, weights: Iterable[Tuple[Pattern, Fraction]]) -> BidiffOperator:
    terms: Dict[Tuple[MultiIndex, MultiIndex], GradedPoly] = {}
    for pattern, w in weights:
        if not w:
            continue
        for key, c in pattern_operator(ctx, mat, pattern).terms.items():
            terms[key] = terms.get(key, ctx.zero()) + c.scale(w)
    return BidiffOperator(ctx, terms)


@dataclass(frozen=True)
class StarConfig:
    order: int = 2
    weights: Tuple[Tuple[Pattern, Fraction], ...] = DEFAULT_WEIGHTS


class StarProduct:
    """f * g = sum_n eps^n B_n(f, g) with B_0 the product and B_1 the Poisson bracket."""

    def __init__(self, pi: GradedPoly, config: StarConfig = StarConfig(),
                 extra: Sequence[BidiffOperator] = (), certify: bool = False):
        self.pi = pi
        self.config = config
        self.context, self.matrix = plain_matrix(pi)
        self.B1 = poisson_operator(self.context, self.matrix)
        self.B2 = order2_operator(self.context, self.matrix, config.weights)
        self.ops: List[BidiffOperator] = [self.B1, self.B2] + list(extra)
        if config.order > len(self.ops):
            raise ValueError(f"order {config.order} needs user-supplied B_3..B_{config.order}")
        self.order = config.order
        if certify:
            defect = certify_associativity(self, max_total=2)
            if defect is not None:
                raise ValueError(f"not associative mod eps^{self.order + 1} on {defect[0]}")

    def series(self, f) -> EpsSeries:
        if isinstance(f, EpsSeries):
            if f.order != self.order:
                raise ValueError("eps order mismatch")
            if f.context != self.context:
                return f.map(lambda p: to_plain(self.context, p))
            return f
        if not isinstance(f, GradedPoly):
            f = self.context.const(f)
        return EpsSeries.from_poly(to_plain(self.context, f), self.order)

    def parse(self, text: str) -> GradedPoly:
        return self.context.parse(text)

    def bidiff(self, n: int, f: GradedPoly, g: GradedPoly) -> GradedPoly:
        return f * g if n == 0 else self.ops[n - 1](f, g)

    def star(self, f, g) -> EpsSeries:
        f, g = self.series(f), self.series(g)
        N = self.order
        out = [self.context.zero() for _ in range(N + 1)]
        for a in range(N + 1):
            if not f[a]:
                continue
            for b in range(N + 1 - a):
                if not g[b]:
                    continue
                for n in range(N + 1 - a - b):
                    out[a + b + n] = out[a + b + n] + self.bidiff(n, f[a], g[b])
        return EpsSeries(tuple(out))

    def commutator(self, f, g) -> EpsSeries:
        return self.star(f, g) - self.star(g, f)

    def bracket(self, f: GradedPoly, g: GradedPoly) -> GradedPoly:
        return self.B1(to_plain(self.context, f), to_plain(self.context, g))

    def b2_is_symmetric(self) -> bool:
        return self.B2 == self.B2.transpose()


def star(S: StarProduct, f, g) -> EpsSeries:
    return S.star(f, g)


def associate_check(S: StarProduct, f, g, h) -> EpsSeries:
    """(f*g)*h - f*(g*h) modulo eps^{N+1}."""
    return S.star(S.star(f, g), h) - S.star(f, S.star(g, h))


def certify_associativity(S: StarProduct, max_total: int = 3):
    """First monomial triple with a nonzero associator, or None."""
    monos = [S.context.monomial(m) for m in monomials_up_to(S.context, max_total) if sum(m) > 0]
    prods = {}
    for f in monos:
        for g in monos:
            prods[(f, g)] = S.star(f, g)
    for f in monos:
        for g in monos:
            fg = prods[(f, g)]
            for h in monos:
                d = S.star(fg, h) - S.star(f, prods[(g, h)])
                if not d.is_zero():
                    return (f, g, h), d
    return None


# weight derivation ------------------------------------------------------------

@dataclass(frozen=True)
class WeightSolution:
    patterns: Tuple[Pattern, ...]
    particular: Optional[Tuple[Fraction, ...]]
    kernel: Tuple[Tuple[Fraction, ...], ...]
    equations: int

    @property
    def solvable(self) -> bool:
        return self.particular is not None

    def contains(self, weights: Iterable[Tuple[Pattern, Fraction]]) -> bool:
        """Whether the given weights lie in the affine solution family."""
        if self.particular is None:
            return False
        w = dict(weights)
        target = {i: Fraction(w.get(p, 0)) - self.particular[i] for i, p in enumerate(self.patterns)}
        target = {i: c for i, c in target.items() if c}
        e = linalg.Echelon()
        for k in self.kernel:
            e.add({i: c for i, c in enumerate(k) if c})
        return e.contains(target)


def _hochschild(op: BidiffOperator, f, g, h) -> GradedPoly:
    return op(f, g) * h + op(f * g, h) - f * op(g, h) - op(f, g * h)


def derive_order2_weights(pis: Sequence[GradedPoly], triples_per_pi: int = 60,
                          max_total: int = 2, seed: int = 0) -> WeightSolution:
    """Solve order-eps^2 associativity for the pattern weights.

    For each Poisson structure and each test triple the equation
        sum_a w_a dH(T_a)(f, g, h) = -(B_1(B_1(f, g), h) - B_1(f, B_1(g, h)))
    contributes one row per output monomial.  Test triples are drawn
    deterministically from monomials of degree 1..max_total.
    """
    import random
    rng = random.Random(seed)
    patterns = ansatz_patterns()
    cols: List[Dict[int, Fraction]] = [dict() for _ in patterns]
    rhs: Dict[int, Fraction] = {}
    row_index: Dict = {}
    for pid, pi in enumerate(pis):
        ctx, mat = plain_matrix(pi)
        B1 = poisson_operator(ctx, mat)
        ops = [pattern_operator(ctx, mat, p) for p in patterns]
        monos = [ctx.monomial(m) for m in monomials_up_to(ctx, max_total) if sum(m) > 0]
        triples = [tuple(rng.choice(monos) for _ in range(3)) for _ in range(triples_per_pi)]
        for tid, (f, g, h) in enumerate(triples):
            r = B1(B1(f, g), h) - B1(f, B1(g, h))
            for m, c in r.terms.items():
                rhs[row_index.setdefault((pid, tid, m), len(row_index))] = -c
            for a, op in enumerate(ops):
                for m, c in _hochschild(op, f, g, h).terms.items():
                    cols[a][row_index.setdefault((pid, tid, m), len(row_index))] = c
    rhs = {i: c for i, c in rhs.items() if c}
    part = linalg.solve(cols, rhs)
    kern = linalg.kernel(cols)
    n = len(patterns)
    dense = lambda v: tuple(v.get(i, Fraction(0)) for i in range(n))
    return WeightSolution(tuple(patterns), dense(part) if part is not None else None,
                          tuple(dense(k) for k in kern), len(row_index))


# central lifts and quotients ------------------------------------------------------

class NotCasimir(ValueError):
    pass


def is_casimir(S: StarProduct, phi: GradedPoly) -> bool:
    phi = to_plain(S.context, phi)
    return all(not S.B1(phi, S.context.gen(n)) for n in S.context.names)


def central_lift(S: StarProduct, phi: GradedPoly, cap: int = 3) -> EpsSeries:
    """t = phi + sum_{k>=2} eps^k u_k central against all monomials of degree <= cap.

    Solved as one exact linear system in the coefficients of the u_k,
    which range over polynomials of degree <= deg(phi).
    """
    ctx = S.context
    phi = to_plain(ctx, phi)
    if not is_casimir(S, phi):
        raise NotCasimir(f"{phi} is not a Casimir")
    N = S.order
    tests = [ctx.monomial(m) for m in monomials_up_to(ctx, cap)]
    unknown = [(k, m) for k in range(2, N + 1) for m in monomials_up_to(ctx, phi.poly_degree())]
    index: Dict = {}

    def vec(series_list):
        v = {}
        for fi, s in enumerate(series_list):
            for n in range(N + 1):
                for m, c in s[n].terms.items():
                    v[index.setdefault((fi, n, m), len(index))] = c
        return v

    base = vec([S.commutator(phi, f) for f in tests])
    cols = []
    for k, m in unknown:
        u = EpsSeries(tuple(ctx.monomial(m) if n == k else ctx.zero() for n in range(N + 1)))
        cols.append(vec([S.commutator(u, f) for f in tests]))
    x = linalg.solve(cols, linalg.scale(base, -1))
    if x is None:
        raise TruncationError("no central lift within the polynomial-degree cap")
    coeffs = [phi] + [ctx.zero() for _ in range(N)]
    for j, c in x.items():
        k, m = unknown[j]
        coeffs[k] = coeffs[k] + ctx.monomial(m, c)
    t = EpsSeries(tuple(coeffs))
    for f in tests:
        if not S.commutator(t, f).is_zero():
            raise AssertionError("central lift failed verification")
    return t


def _element_key(N):
    # ascending index = lower eps power first, then higher monomial first
    def key(item):
        n, m = item
        return (n, monomial_sort_key(m))
    return key


@dataclass
class CasimirQuotient:
    star: StarProduct
    lifts: Tuple[EpsSeries, ...]
    cap: int
    standard: Tuple[Tuple[int, Tuple[int, ...]], ...]
    _index: Dict = field(repr=False)
    _ideal: linalg.Echelon = field(repr=False)

    @property
    def context(self) -> GradedContext:
        return self.star.context

    def dims_by_degree(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for n, m in self.standard:
            if n == 0:
                out[sum(m)] = out.get(sum(m), 0) + 1
        return dict(sorted(out.items()))

    def basis(self) -> List[GradedPoly]:
        """Standard monomials at eps^0, degree first, then lex with x > y > ..."""
        ctx = self.context
        monos = sorted((m for n, m in self.standard if n == 0), key=lambda m: (sum(m), tuple(-e for e in m)))
        return [ctx.monomial(m) for m in monos]

    def _vec(self, s: EpsSeries) -> Dict[int, Fraction]:
        v = {}
        for n in range(s.order + 1):
            for m, c in s[n].terms.items():
                i = self._index.get((n, m))
                if i is None:
                    raise TruncationError(f"eps^{n} term {m} beyond the degree cap {self.cap}")
                v[i] = c
        return v

    def _series(self, v) -> EpsSeries:
        ctx = self.context
        keys = list(self._index)
        coeffs = [dict() for _ in range(self.star.order + 1)]
        for i, c in v.items():
            n, m = keys[i]
            coeffs[n][m] = c
        return EpsSeries(tuple(GradedPoly(ctx, c) for c in coeffs))

    def normal_form(self, f) -> EpsSeries:
        return self._series(self._ideal.reduce(self._vec(self.star.series(f))))

    def in_ideal(self, f) -> bool:
        return self._ideal.contains(self._vec(self.star.series(f)))

    def product(self, f, g) -> EpsSeries:
        return self.normal_form(self.star.star(self.normal_form(f), self.normal_form(g)))

    def table(self) -> List[Tuple[GradedPoly, GradedPoly, EpsSeries]]:
        """Normal forms of products of basis monomials whose degrees fit the cap."""
        out = []
        basis = self.basis()
        for a in basis:
            for b in basis:
                if a.poly_degree() + b.poly_degree() <= self.cap:
                    out.append((a, b, self.product(a, b)))
        return out

    def associativity_defects(self) -> List[Tuple[GradedPoly, GradedPoly, GradedPoly]]:
        basis = self.basis()
        bad = []
        for a in basis:
            for b in basis:
                for c in basis:
                    if a.poly_degree() + b.poly_degree() + c.poly_degree() > self.cap:
                        continue
                    if self.product(self.product(a, b), c) != self.product(a, self.product(b, c)):
                        bad.append((a, b, c))
        return bad

    def projection_defects(self) -> List[Tuple[GradedPoly, GradedPoly]]:
        """Pairs where NF(f*g) differs from NF(NF f * NF g)."""
        ctx = self.context
        monos = [ctx.monomial(m) for m in monomials_up_to(ctx, self.cap)]
        bad = []
        for f in monos:
            for g in monos:
                if f.poly_degree() + g.poly_degree() > self.cap:
                    continue
                if self.normal_form(self.star.star(f, g)) != self.product(f, g):
                    bad.append((f, g))
        return bad


def casimir_quotient(S: StarProduct, lifts: Sequence[EpsSeries], cap: int = 3) -> CasimirQuotient:
    """A[eps]/(eps^{N+1}, ideal of the central lifts), truncated at polynomial degree ``cap``.

    The ideal is spanned by eps^k (m * t) with deg m + deg t <= cap.  Basis
    elements eps^n x^a are ordered by eps power, then degree-then-lex from
    the top, so echelon pivots are leading terms and the remaining
    (standard) monomials form the quotient basis.
    """
    ctx = S.context
    N = S.order
    keys = sorted(((n, m) for n in range(N + 1) for m in monomials_up_to(ctx, cap)),
                  key=_element_key(N))
    index = {k: i for i, k in enumerate(keys)}
    q = CasimirQuotient(S, tuple(lifts), cap, (), index, linalg.Echelon())
    gens = []
    for t in lifts:
        t = S.series(t)
        dt = max(c.poly_degree() for c in t.coeffs if c)
        for m in monomials_up_to(ctx, cap - dt):
            for k in range(N + 1):
                gens.append(S.star(ctx.monomial(m), t).shift(k))
    for g in gens:
        q._ideal.add(q._vec(g))
    # two-sidedness on the generators: t * m must lie in the span as well
    for t in lifts:
        t = S.series(t)
        dt = max(c.poly_degree() for c in t.coeffs if c)
        for m in monomials_up_to(ctx, cap - dt):
            if not q._ideal.contains(q._vec(S.star(t, ctx.monomial(m)))):
                raise AssertionError("ideal is not two-sided within the truncation")
    piv = set(q._ideal.pivots)
    q.standard = tuple(k for k in keys if index[k] not in piv)
    return q
