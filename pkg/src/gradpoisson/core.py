"""Exact graded-commutative polynomials with Koszul signs.

A :class:`GradedContext` fixes an ordered list of generators, each with an
integer degree.  Generators of odd degree anticommute and square to zero.
Monomials are stored as exponent tuples in declaration order; the sign
produced by sorting odd factors into that order is folded into the
coefficient, so every polynomial has a unique canonical term map.

Coefficients are :class:`fractions.Fraction`; nothing here touches floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]


class ContextMismatch(ValueError):
    """Raised when two values built over different contexts are combined."""


class ParityError(ValueError):
    """Raised when an assignment or power violates parity rules."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    index: int

    @property
    def parity(self) -> int:
        return self.degree % 2

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class GradedContext:
    """Immutable ordered set of graded generators."""

    def __init__(self, generators: Iterable[Tuple[str, int]]):
        gens = []
        seen = set()
        for i, (name, deg) in enumerate(generators):
            if name in seen:
                raise ValueError(f"duplicate generator name {name!r}")
            seen.add(name)
            gens.append(Generator(str(name), int(deg), i))
        self.generators: Tuple[Generator, ...] = tuple(gens)
        self._index = {g.name: g.index for g in gens}
        self.odd_mask: Tuple[bool, ...] = tuple(g.odd for g in gens)
        self.degrees: Tuple[int, ...] = tuple(g.degree for g in gens)
        self._key = tuple((g.name, g.degree) for g in gens)
        self._mul_cache: Dict[Tuple[Monomial, Monomial], Tuple[int, Optional[Monomial]]] = {}

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        return self is other or (isinstance(other, GradedContext) and self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GradedContext({inner})"

    def __len__(self):
        return len(self.generators)

    def __contains__(self, name):
        return name in self._index

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    # -- constructors -----------------------------------------------------
    def zero(self) -> "GradedPoly":
        return GradedPoly(self, {})

    def one(self) -> "GradedPoly":
        return self.const(1)

    def const(self, c) -> "GradedPoly":
        c = Fraction(c)
        return GradedPoly(self, {self.unit_monomial: c} if c else {})

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.generators)

    def gen(self, name: str) -> "GradedPoly":
        i = self.index(name)
        exps = [0] * len(self.generators)
        exps[i] = 1
        return GradedPoly(self, {tuple(exps): Fraction(1)})

    def gens(self, *names: str) -> Tuple["GradedPoly", ...]:
        return tuple(self.gen(n) for n in names)

    def monomial(self, exps: Sequence[int], coeff=1) -> "GradedPoly":
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(self.generators):
            raise ValueError("exponent vector has wrong length")
        for e, odd in zip(exps, self.odd_mask):
            if e < 0 or (odd and e > 1):
                raise ParityError("odd generators take exponent 0 or 1")
        c = Fraction(coeff)
        return GradedPoly(self, {exps: c} if c else {})

    def parse(self, text: str) -> "GradedPoly":
        from .expr import parse
        return parse(text, self)

    # -- monomial helpers -------------------------------------------------
    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def mono_parity(self, m: Monomial) -> int:
        return sum(e for e, odd in zip(m, self.odd_mask) if odd) % 2

    def mono_mul(self, m1: Monomial, m2: Monomial) -> Tuple[int, Optional[Monomial]]:
        """Return ``(sign, product)``; product is None when an odd square appears."""
        key = (m1, m2)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        odd = self.odd_mask
        swaps = 0
        later_odd_in_m1 = 0
        # walk from the right: each odd factor of m2 passes the odd factors of
        # m1 that sit to its right in declaration order
        result = None
        for i in range(len(m1) - 1, -1, -1):
            if odd[i]:
                if m2[i] and m1[i]:
                    result = (0, None)
                    break
                if m2[i]:
                    swaps += later_odd_in_m1
                if m1[i]:
                    later_odd_in_m1 += 1
        if result is None:
            prod = tuple(a + b for a, b in zip(m1, m2))
            result = (-1 if swaps % 2 else 1, prod)
        if len(self._mul_cache) < 200000:
            self._mul_cache[key] = result
        return result


def _coerce(ctx: GradedContext, value) -> "GradedPoly":
    if isinstance(value, GradedPoly):
        if value.context != ctx:
            raise ContextMismatch("polynomials live in different contexts")
        return value
    if isinstance(value, (int, Fraction, Rational)):
        return ctx.const(value)
    raise TypeError(f"cannot combine GradedPoly with {type(value).__name__}")


class GradedPoly:
    """Element of the free graded-commutative algebra on a context.

    ``terms`` maps exponent tuples to nonzero Fractions and must not be
    mutated after construction.
    """

    __slots__ = ("context", "terms", "_hash")

    def __init__(self, context: GradedContext, terms: Mapping[Monomial, Fraction]):
        self.context = context
        self.terms: Dict[Monomial, Fraction] = {m: c for m, c in terms.items() if c}
        self._hash = None

    # -- basic protocol ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.context == other.context and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.context.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.context, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"GradedPoly({self})"

    def __str__(self):
        from .expr import format_poly
        return format_poly(self)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(self.context, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GradedPoly(self.context, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(self.context, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(self.context, other))

    def __rsub__(self, other):
        return _coerce(self.context, other) - self

    def scale(self, c) -> "GradedPoly":
        c = Fraction(c)
        if not c:
            return self.context.zero()
        return GradedPoly(self.context, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(self.context, other)
        ctx = self.context
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, m = ctx.mono_mul(m1, m2)
                if m is None:
                    continue
                v = out.get(m, 0) + (c1 * c2 if sign > 0 else -c1 * c2)
                if v:
                    out[m] = v
                else:
                    del out[m]
        return GradedPoly(ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return _coerce(self.context, other) * self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.context.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- grading ----------------------------------------------------------
    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({self.context.mono_degree(m) for m in self.terms}))

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"not homogeneous (degrees {ds})")
        return ds[0]

    def parity(self) -> int:
        ps = {self.context.mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            raise ValueError("polynomial mixes parities")
        return ps.pop() if ps else 0

    def homogeneous_part(self, d: int) -> "GradedPoly":
        ctx = self.context
        return GradedPoly(ctx, {m: c for m, c in self.terms.items() if ctx.mono_degree(m) == d})

    def homogeneous_parts(self) -> Dict[int, "GradedPoly"]:
        return {d: self.homogeneous_part(d) for d in self.degrees()}

    def poly_degree(self) -> int:
        """Largest total exponent count of any term (-1 for zero)."""
        return max((sum(m) for m in self.terms), default=-1)

    def filter(self, keep) -> "GradedPoly":
        return GradedPoly(self.context, {m: c for m, c in self.terms.items() if keep(m)})

    def free_of(self, *names: str) -> bool:
        idx = [self.context.index(n) for n in names]
        return all(m[i] == 0 for m in self.terms for i in idx)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.context.unit_monomial, Fraction(0))


# -- derivatives ----------------------------------------------------------

def left_derivative(p: GradedPoly, g) -> GradedPoly:
    """Left partial derivative with respect to generator ``g`` (name or Generator)."""
    ctx = p.context
    name = g.name if isinstance(g, Generator) else g
    if name not in ctx:
        return ctx.zero()
    k = ctx.index(name)
    odd = ctx.odd_mask
    out: Dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        e = m[k]
        if not e:
            continue
        if odd[k]:
            before = sum(m[i] for i in range(k) if odd[i])
            coeff = -c if before % 2 else c
        else:
            coeff = c * e
        nm = m[:k] + (e - 1,) + m[k + 1:]
        out[nm] = out.get(nm, 0) + coeff
    return GradedPoly(ctx, out)


def right_derivative(p: GradedPoly, g) -> GradedPoly:
    """Right derivative via the parity twist  d^R p = (-1)^{|g|(|p|+1)} d^L p.

    The identity is applied term by term, each monomial being homogeneous.
    """
    ctx = p.context
    name = g.name if isinstance(g, Generator) else g
    if name not in ctx:
        return ctx.zero()
    if not ctx.generator(name).odd:
        return left_derivative(p, name)
    out = ctx.zero()
    for par in (0, 1):
        part = p.filter(lambda m, par=par: ctx.mono_parity(m) == par)
        if part:
            d = left_derivative(part, name)
            out = out + (d if par == 1 else -d)
    return out


# -- substitution ---------------------------------------------------------

def substitute(p: GradedPoly, assignments: Mapping[str, object],
               target: Optional[GradedContext] = None) -> GradedPoly:
    """Apply the algebra morphism sending listed generators to given values.

    Unlisted generators map to themselves (requires them in ``target``).
    Odd generators may only receive odd values or zero, even generators
    only even values.
    """
    src = p.context
    tgt = target or src
    images = []
    for g in src.generators:
        if g.name in assignments:
            v = assignments[g.name]
            v = v if isinstance(v, GradedPoly) else tgt.const(v)
            if v.context != tgt:
                raise ContextMismatch("assignment value lives in a foreign context")
            if v:
                ps = {tgt.mono_parity(m) for m in v.terms}
                if ps != {g.parity}:
                    raise ParityError(f"generator {g.name} of parity {g.parity} assigned "
                                      f"a value of parity {sorted(ps)}")
            images.append(v)
        else:
            images.append(tgt.gen(g.name))
    powers: Dict[Tuple[int, int], GradedPoly] = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] ** e
        return powers[key]

    out = tgt.zero()
    for m, c in p.terms.items():
        term = tgt.const(c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
                if not term:
                    break
        out = out + term
    return out


def evaluate(p: GradedPoly, assignments: Mapping[str, object]) -> GradedPoly:
    """Substitute values into ``p`` within its own context."""
    return substitute(p, assignments)


def embed(p: GradedPoly, target: GradedContext) -> GradedPoly:
    """Re-express ``p`` in a context that contains all of its generators."""
    if p.context == target:
        return p
    return substitute(p, {}, target=target)


def monomials_up_to(ctx: GradedContext, max_total: int, weights: Optional[Sequence[int]] = None,
                    names: Optional[Sequence[str]] = None) -> Iterator[Monomial]:
    """All monomials (in generators ``names``) with weighted size ``<= max_total``.

    Weights default to 1 for every generator; even generators need positive
    weight for the enumeration to be finite.
    """
    idx = [ctx.index(n) for n in names] if names is not None else list(range(len(ctx)))
    w = list(weights) if weights is not None else [1] * len(ctx)
    odd = ctx.odd_mask
    for i in idx:
        if not odd[i] and w[i] <= 0:
            raise ValueError("even generators need positive weight")
    # odd generators may carry nonpositive weight; bound by their total budget
    slack = sum(-w[i] for i in idx if odd[i] and w[i] < 0)
    n = len(ctx)

    def rec(pos, exps, total):
        if pos == len(idx):
            if total <= max_total:
                yield tuple(exps)
            return
        i = idx[pos]
        if odd[i]:
            rng = (0, 1)
        else:
            rng = range(0, (max_total + slack - total) // w[i] + 1 if w[i] > 0 else 1)
        for e in rng:
            t = total + e * w[i]
            if t > max_total + slack:
                break
            exps[i] = e
            yield from rec(pos + 1, exps, t)
        exps[i] = 0

    yield from rec(0, [0] * n, 0)
