"""Truncated A-infinity structures on A[eps]/eps^{N+1}.

Operations are given in the unshifted convention mu_k (degree 2 - k) and
handled internally through the bar convention

    b_k(a_1, ..., a_k) = (-1)^{sum_i (k - i)|a_i|} mu_k(a_1, ..., a_k)

in which the A-infinity relations read

    sum_{r+s+t=n} (-1)^{s(a_1) + ... + s(a_r)} b_{r+1+t}(a_1..a_r, b_s(a_{r+1}..a_{r+s}), ..) = 0

with s(a) = |a| - 1 and twisting by a degree-1 element gamma is sign-free:
b^gamma_n(x_1..x_n) = sum b_{n+k}(gamma.., x_1, gamma.., ..., x_n, gamma..).
Arguments must be homogeneous.  Every operation beyond ``max_arity`` is
taken to vanish.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import linalg
from .cohomology import CochainComplex, EpsSeries
from .core import GradedContext, GradedPoly, monomials_up_to

MuOp = Callable[..., EpsSeries]


def series_degree(a: EpsSeries) -> Optional[int]:
    degs = set()
    for c in a.coeffs:
        degs.update(c.degrees())
    if len(degs) > 1:
        raise ValueError("A-infinity operations take homogeneous arguments")
    return degs.pop() if degs else None


def _deg(a: EpsSeries) -> int:
    d = series_degree(a)
    return 0 if d is None else d


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def multilinear(layers: Dict[int, Callable[..., GradedPoly]], arity: int, ctx: GradedContext,
                order: int) -> MuOp:
    """eps-multilinear extension of Q-multilinear layers f_r (coefficient of eps^r)."""
    def op(*args: EpsSeries) -> EpsSeries:
        if len(args) != arity:
            raise ValueError(f"expected {arity} arguments")
        out = [ctx.zero() for _ in range(order + 1)]
        for r, f in layers.items():
            if r > order:
                continue
            if arity == 0:
                out[r] = out[r] + f()
                continue
            for idx in product(*(range(order + 1 - r) for _ in range(arity))):
                n = r + sum(idx)
                if n > order:
                    continue
                parts = [a[i] for a, i in zip(args, idx)]
                if all(parts):
                    out[n] = out[n] + f(*parts)
        return EpsSeries(tuple(out))
    return op


def _product(*args: GradedPoly) -> GradedPoly:
    return args[0] * args[1]


@dataclass(frozen=True)
class AInfinityTruncation:
    context: GradedContext
    order: int
    ops: Dict[int, MuOp] = field(compare=False)
    max_arity: int = 3

    @classmethod
    def from_layers(cls, ctx: GradedContext, order: int,
                    layers: Dict[int, Dict[int, Callable[..., GradedPoly]]],
                    product: bool = True, max_arity: int = 3) -> "AInfinityTruncation":
        """mu_k = sum_r eps^r layers[k][r]; ``product`` adds chi to mu_2 at eps^0."""
        layers = {k: dict(v) for k, v in layers.items()}
        if product:
            m2 = layers.setdefault(2, {})
            base = m2.get(0)
            m2[0] = _product if base is None else (lambda a, b, f=base: a * b + f(a, b))
        ops = {k: multilinear(v, k, ctx, order) for k, v in layers.items() if k <= max_arity}
        return cls(ctx, order, ops, max_arity)

    def zero(self) -> EpsSeries:
        return EpsSeries.zero(self.context, self.order)

    def series(self, p) -> EpsSeries:
        if isinstance(p, EpsSeries):
            if p.order != self.order:
                raise ValueError("eps order mismatch")
            return p
        return EpsSeries.from_poly(p, self.order)

    def mu(self, k: int, *args) -> EpsSeries:
        if len(args) != k:
            raise ValueError(f"mu_{k} takes {k} arguments")
        op = self.ops.get(k)
        if op is None or k > self.max_arity:
            return self.zero()
        return op(*(self.series(a) for a in args))

    def bar(self, k: int, *args) -> EpsSeries:
        args = tuple(self.series(a) for a in args)
        e = sum((k - 1 - i) * _deg(a) for i, a in enumerate(args))
        v = self.mu(k, *args)
        return v if e % 2 == 0 else -v

    @property
    def mu0(self) -> EpsSeries:
        return self.mu(0)

    @property
    def flat(self) -> bool:
        return self.mu0.is_zero()


def from_bar(ctx: GradedContext, order: int, bar_ops: Dict[int, MuOp], max_arity: int) -> AInfinityTruncation:
    def conv(k, b):
        def op(*args):
            e = sum((k - 1 - i) * _deg(a) for i, a in enumerate(args))
            v = b(*args)
            return v if e % 2 == 0 else -v
        return op
    return AInfinityTruncation(ctx, order, {k: conv(k, b) for k, b in bar_ops.items()}, max_arity)


def ainf_relation(T: AInfinityTruncation, args: Sequence) -> EpsSeries:
    args = [T.series(a) for a in args]
    n = len(args)
    total = T.zero()
    for r in range(n + 1):
        for s in range(n - r + 1):
            t = n - r - s
            if r + 1 + t > T.max_arity or s > T.max_arity:
                continue
            inner = T.bar(s, *args[r:r + s])
            if inner.is_zero():
                continue
            v = T.bar(r + 1 + t, *args[:r], inner, *args[r + s:])
            if v.is_zero():
                continue
            sign = _sign(sum(_deg(a) - 1 for a in args[:r]))
            total = total + (v if sign > 0 else -v)
    return total


@dataclass
class AInfinityReport:
    checked: int = 0
    violations: List[Tuple[Tuple[GradedPoly, ...], EpsSeries]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def ainf_check(T: AInfinityTruncation, samples: Sequence[GradedPoly], arity: int = 3) -> AInfinityReport:
    """A-infinity relations of arity 0..``arity`` on all ordered tuples of samples."""
    report = AInfinityReport()
    for n in range(arity + 1):
        for tup in product(samples, repeat=n):
            report.checked += 1
            v = ainf_relation(T, tup)
            if not v.is_zero():
                report.violations.append((tup, v))
    return report


def gauge_shift(T: AInfinityTruncation, gamma: EpsSeries) -> AInfinityTruncation:
    """Twist by gamma in eps A^1[eps]: b^gamma_n(x) = sum b_{n+k}(gamma.., x_1, .., x_n, gamma..)."""
    gamma = T.series(gamma)
    if not gamma.is_zero():
        if series_degree(gamma) != 1:
            raise ValueError("gamma must have degree 1")
        if gamma.valuation() < 1:
            raise ValueError("gamma must be of order eps")
    if gamma.is_zero():
        return T
    # each gamma costs at least one power of eps
    budget = T.order

    def shifted(n):
        def b(*xs):
            out = T.zero()
            for extra in range(0, min(budget, T.max_arity - n) + 1):
                for slots in _compositions(extra, n + 1):
                    seq = []
                    for i, k in enumerate(slots):
                        seq.extend([gamma] * k)
                        if i < n:
                            seq.append(xs[i])
                    out = out + T.bar(n + extra, *seq)
            return out
        return b

    bar_ops = {n: shifted(n) for n in range(T.max_arity + 1)}
    return from_bar(T.context, T.order, bar_ops, T.max_arity)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def classical_bracket(T: AInfinityTruncation, a: GradedPoly, b: GradedPoly) -> GradedPoly:
    """psi mod eps: coefficient of eps in mu_2(a, b) - (-1)^{|a||b|} mu_2(b, a)."""
    ab = T.mu(2, a, b)
    ba = T.mu(2, b, a)
    s = _sign(_deg(T.series(a)) * _deg(T.series(b)))
    return ab[1] - ba[1].scale(s)


def rescale_brackets(T: AInfinityTruncation, samples: Optional[Sequence[GradedPoly]] = None) -> AInfinityTruncation:
    """tau_k = eps^{k-2} mu_k.

    mu_0 must be divisible by eps^2 and mu_1 by eps (checked on ``samples``);
    the result is known modulo eps^{N'+1} with N' = N - 2 when mu_0 is
    present and N - 1 otherwise.
    """
    if samples is None:
        samples = [T.context.monomial(m) for m in monomials_up_to(T.context, 2)]
    m0 = T.mu0
    if not m0.is_zero() and m0.valuation() < 2:
        raise ValueError("mu_0 is not divisible by eps^2")
    for a in samples:
        v = T.mu(1, a)
        if not v.is_zero() and v.valuation() < 1:
            raise ValueError("mu_1 is not divisible by eps")
    new_order = T.order - (2 if not m0.is_zero() else 1)
    if new_order < 0:
        raise ValueError("eps order too small to rescale")

    def cut(s: EpsSeries) -> EpsSeries:
        return EpsSeries(s.coeffs[:new_order + 1])

    def rescaled(k):
        def op(*args):
            full = [EpsSeries(a.coeffs + tuple(T.context.zero() for _ in range(T.order - new_order)))
                    for a in args]
            return cut(T.mu(k, *full).shift(k - 2))
        return op

    ops = {k: rescaled(k) for k in T.ops}
    return AInfinityTruncation(T.context, new_order, ops, T.max_arity)


def degree_profile_ok(tau: AInfinityTruncation, samples: Sequence[GradedPoly],
                      dd: Callable[[GradedPoly], GradedPoly]) -> bool:
    """tau_1 = dd + O(eps), tau_2 = chi + O(eps), tau_k = O(eps^{k-1}) for k > 2."""
    for a in samples:
        if tau.mu(1, a)[0] != dd(a):
            return False
        for b in samples:
            if tau.mu(2, a, b)[0] != a * b:
                return False
    for k in range(3, tau.max_arity + 1):
        for args in product(samples, repeat=k):
            v = tau.mu(k, *args)
            if not v.is_zero() and v.valuation() < k - 1:
                return False
    return True


def differential_layer(T: AInfinityTruncation, r: int = 1) -> Callable[[GradedPoly], GradedPoly]:
    """The Q-linear operator a -> coefficient of eps^r in mu_1(a)."""
    return lambda a: T.mu(1, a)[r]


@dataclass(frozen=True)
class CurvatureResult:
    ok: bool
    gamma: EpsSeries
    shifted: AInfinityTruncation
    obstruction_order: Optional[int] = None
    obstruction: Optional[GradedPoly] = None
    obstruction_class: Optional[Tuple[Fraction, ...]] = None


def kill_curvature(T: AInfinityTruncation, cap: int, weights: Optional[Sequence[int]] = None) -> CurvatureResult:
    """Find gamma with mu^gamma_0 = 0 mod eps^{N+1}, order by order.

    At order m the curvature coefficient c_m is a dd-cocycle of degree 2
    (dd the eps^1 layer of mu_1); gamma gains eps^{m-1} g with dd g = -c_m.
    A non-exact c_m is returned as the obstruction with its H^2 class.
    """
    ctx = T.context
    m0 = T.mu0
    if m0[0] or (T.order >= 1 and m0[1]):
        raise ValueError("classical curvature is nonzero: mu_0 must be O(eps^2)")
    dd = differential_layer(T, 1)
    w = list(weights) if weights is not None else [1] * len(ctx)
    cx = CochainComplex.from_operator(ctx, dd, cap, w)
    gamma = T.zero()
    shifted = T
    for m in range(2, T.order + 1):
        curv = shifted.mu0
        if any(curv[j] for j in range(m)):
            raise AssertionError("curvature reappeared below the current order")
        c = curv[m]
        if not c:
            continue
        target = cx.basis.to_vec(c, 2)
        x = linalg.solve(cx.diff.get(1, []), linalg.scale(target, -1))
        if x is None:
            h = cx.cohomology_unchecked(2)
            coords = h.quotient.coordinates(target)
            return CurvatureResult(False, gamma, shifted, m, c,
                                   tuple(coords) if coords is not None else None)
        g = cx.basis.to_poly(x, 1)
        coeffs = list(gamma.coeffs)
        coeffs[m - 1] = coeffs[m - 1] + g
        gamma = EpsSeries(tuple(coeffs))
        shifted = gauge_shift(T, gamma)
    if not shifted.mu0.is_zero():
        raise AssertionError("curvature survived the order-by-order solve")
    return CurvatureResult(True, gamma, shifted)
