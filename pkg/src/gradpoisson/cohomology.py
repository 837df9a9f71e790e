"""Exact cohomology of graded differentials at finite truncation.

Complexes are spanned by monomials whose weighted size is at most a cap.
For a Poisson structure whose coefficients are homogeneous of polynomial
degree k, giving even coordinates weight 1 and the odd generators that pair
with them (theta_y on the P-infinity side, the ghosts c on the BFV side)
weight 1 - k makes both lambda_1 and D weight-preserving, so the truncated
spaces are subcomplexes and their cohomology is the weight-graded piece of
the full one.  Operators that leave the truncated span raise TruncationError.

The eps-adic part works over Q[eps]/(eps^{N+1}) with differentials
delta = sum_r eps^r dd_r given layer by layer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg
from .core import GradedContext, GradedPoly, left_derivative, monomials_up_to, substitute

Vec = linalg.Vec


class TruncationError(ValueError):
    """An operator maps outside the truncated span."""


class DifferentialError(ValueError):
    def __init__(self, degree: int, column: int, image: Vec):
        super().__init__(f"d o d != 0 starting in degree {degree}, basis element {column}: {image}")
        self.degree, self.column, self.image = degree, column, image


@dataclass(frozen=True)
class Truncation:
    max_degree: int = 3
    eps_order: int = 2
    window: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.max_degree < 0 or self.eps_order < 0:
            raise ValueError("truncation caps must be nonnegative")


class GradedBasis:
    """Per-degree ordered bases; labels are monomials or plain integers."""

    def __init__(self, labels: Dict[int, Sequence], context: Optional[GradedContext] = None):
        self.context = context
        self.labels = {d: tuple(v) for d, v in sorted(labels.items())}
        self._index = {d: {m: i for i, m in enumerate(v)} for d, v in self.labels.items()}

    @classmethod
    def from_dims(cls, dims: Dict[int, int]) -> "GradedBasis":
        return cls({d: range(n) for d, n in dims.items()})

    @classmethod
    def from_weights(cls, ctx: GradedContext, cap: int, weights: Sequence[int],
                     names: Optional[Sequence[str]] = None) -> "GradedBasis":
        by_deg: Dict[int, List] = {}
        for m in monomials_up_to(ctx, cap, weights, names):
            if sum(w * e for w, e in zip(weights, m)) <= cap:
                by_deg.setdefault(ctx.mono_degree(m), []).append(m)
        for d in by_deg:
            by_deg[d].sort(key=_mono_order)
        return cls(by_deg, ctx)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(self.labels)

    def dim(self, d: int) -> int:
        return len(self.labels.get(d, ()))

    def to_vec(self, p: GradedPoly, d: int) -> Vec:
        idx = self._index.get(d, {})
        out = {}
        for m, c in p.terms.items():
            i = idx.get(m)
            if i is None:
                if self.context.mono_degree(m) != d:
                    raise TruncationError(f"term of degree {self.context.mono_degree(m)} where degree {d} was expected")
                raise TruncationError(f"monomial {m} lies outside the truncated basis in degree {d}")
            out[i] = Fraction(c)
        return out

    def to_poly(self, v: Vec, d: int) -> GradedPoly:
        ctx = self.context
        return GradedPoly(ctx, {self.labels[d][i]: c for i, c in v.items()})


def _mono_order(m):
    return (sum(m), tuple(-e for e in m))


@dataclass(frozen=True)
class CohomologyGroup:
    degree: int
    dimension: int
    cocycle_dim: int
    boundary_dim: int
    representatives: Tuple[Vec, ...]
    quotient: linalg.Quotient = field(repr=False, compare=False)
    basis: GradedBasis = field(repr=False, compare=False)

    def polys(self) -> List[GradedPoly]:
        return [self.basis.to_poly(v, self.degree) for v in self.representatives]

    def reduce(self, x) -> List[Fraction]:
        """Coordinates of the class of a cocycle in the representative basis."""
        v = self.basis.to_vec(x, self.degree) if isinstance(x, GradedPoly) else x
        coords = self.quotient.coordinates(v)
        if coords is None:
            raise ValueError("not a cocycle")
        return coords


class CochainComplex:
    """Finite cochain complex; ``diff[d][j]`` is the image of basis vector j of degree d."""

    def __init__(self, basis: GradedBasis, diff: Dict[int, List[Vec]],
                 window: Optional[Tuple[int, int]] = None):
        self.basis = basis
        self.diff = {d: list(diff.get(d, [{}] * basis.dim(d))) for d in basis.degrees}
        degs = basis.degrees
        self.window = window or ((min(degs), max(degs)) if degs else (0, 0))
        for d in self.diff:
            if self.diff[d] and d + 1 not in self.diff and any(self.diff[d]):
                raise TruncationError(f"differential leaves the complex in degree {d}")
            nxt = self.diff.get(d + 1)
            if nxt:
                bad = linalg.compose_zero(self.diff[d], nxt)
                if bad:
                    raise DifferentialError(d, *bad[0])

    @classmethod
    def from_operator(cls, ctx: GradedContext, op: Callable[[GradedPoly], GradedPoly],
                      cap: int, weights: Sequence[int], window=None,
                      names: Optional[Sequence[str]] = None) -> "CochainComplex":
        basis = GradedBasis.from_weights(ctx, cap, weights, names)
        return cls(basis, _operator_columns(basis, op), _window(window))

    def dim(self, d: int) -> int:
        return self.basis.dim(d)

    def apply(self, d: int, v: Vec) -> Vec:
        return linalg.apply(self.diff.get(d, []), v)

    def cohomology(self, d: int) -> CohomologyGroup:
        lo, hi = self.window
        if not lo <= d <= hi:
            raise ValueError(f"degree {d} outside the window [{lo}, {hi}]")
        return self.cohomology_unchecked(d)

    def cohomology_unchecked(self, d: int) -> CohomologyGroup:
        cocycles = linalg.kernel(self.diff.get(d, []))
        boundaries = [c for c in self.diff.get(d - 1, []) if c]
        q = linalg.Quotient(cocycles, boundaries)
        return CohomologyGroup(d, q.dimension, len(cocycles), q.boundaries.rank,
                               tuple(q.representatives), q, self.basis)

    def dims(self) -> Dict[int, int]:
        lo, hi = self.window
        return {d: self.cohomology(d).dimension for d in range(lo, hi + 1)}


def _window(window):
    if window is None:
        return None
    if isinstance(window, Truncation):
        return window.window
    lo, hi = window if len(window) == 2 else (min(window), max(window))
    return (lo, hi)


def _operator_columns(basis: GradedBasis, op) -> Dict[int, List[Vec]]:
    ctx = basis.context
    out = {}
    for d, labels in basis.labels.items():
        cols = []
        for m in labels:
            img = op(ctx.monomial(m))
            cols.append(basis.to_vec(img, d + 1) if img else {})
        out[d] = cols
    return out


def graded_derivation(ctx: GradedContext, images: Dict[str, GradedPoly]) -> Callable[[GradedPoly], GradedPoly]:
    """The degree +1 derivation with D(g) = images[g] (zero on the other generators)."""
    for g, img in images.items():
        if img and img.degrees() != (ctx.generator(g).degree + 1,):
            raise ValueError(f"image of {g} must have degree {ctx.generator(g).degree + 1}")

    def D(p: GradedPoly) -> GradedPoly:
        out = ctx.zero()
        for g, img in images.items():
            if img:
                d = left_derivative(p, g)
                if d:
                    out = out + img * d
        return out
    return D


# weights -------------------------------------------------------------------

def coefficient_degree(matrix: Dict[Tuple[str, str], GradedPoly], names: Sequence[str]) -> int:
    """Common polynomial degree k of the Poisson coefficients (0 for pi = 0)."""
    degs = set()
    for v in matrix.values():
        idx = [v.context.index(n) for n in names]
        for m in v.terms:
            degs.add(sum(m[i] for i in idx))
    if len(degs) > 1:
        raise TruncationError(f"coefficients of mixed polynomial degree {sorted(degs)}; pass explicit weights")
    return degs.pop() if degs else 0


def bfv_weights(ctx) -> List[int]:
    """x, y, b of weight 1 and c of weight 1 - k."""
    k = coefficient_degree(ctx.matrix, ctx.base)
    ghosts = {f"c_{y}" for y in ctx.constraints}
    return [1 - k if n in ghosts else 1 for n in ctx.names]


def a_weights(pi: GradedPoly) -> List[int]:
    """Base coordinates of weight 1 and their conjugates of weight 1 - k."""
    from .multivector import poisson_matrix
    ctx = pi.context
    k = coefficient_degree(poisson_matrix(pi), ctx.base)
    return [1 if n in ctx.base else 1 - k for n in ctx.names]


def lambda1_complex(S, cap: int, weights: Optional[Sequence[int]] = None) -> CochainComplex:
    """The complex (A, lambda_1) at weight cap for a flat P-infinity structure."""
    if S.lambda0:
        raise ValueError("lambda_0 != 0: lambda_1 is not a differential")
    w = weights or a_weights(S.pi)
    return CochainComplex.from_operator(S.splitting.context, lambda a: S.lam(a), cap, w,
                                        names=S.splitting.a_generators)


# eps-series ----------------------------------------------------------------

@dataclass(frozen=True)
class EpsSeries:
    """a_0 + eps a_1 + ... + eps^N a_N, arithmetic modulo eps^{N+1}."""
    coeffs: Tuple[GradedPoly, ...]

    @classmethod
    def from_poly(cls, p: GradedPoly, order: int) -> "EpsSeries":
        return cls((p,) + tuple(p.context.zero() for _ in range(order)))

    @classmethod
    def zero(cls, ctx: GradedContext, order: int) -> "EpsSeries":
        return cls(tuple(ctx.zero() for _ in range(order + 1)))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def context(self) -> GradedContext:
        return self.coeffs[0].context

    def __getitem__(self, n: int) -> GradedPoly:
        return self.coeffs[n] if 0 <= n <= self.order else self.context.zero()

    def _check(self, other: "EpsSeries"):
        if other.order != self.order:
            raise ValueError("eps orders differ")

    def __add__(self, other: "EpsSeries") -> "EpsSeries":
        self._check(other)
        return EpsSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "EpsSeries":
        return EpsSeries(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "EpsSeries") -> "EpsSeries":
        return self + (-other)

    def scale(self, c) -> "EpsSeries":
        return EpsSeries(tuple(a.scale(c) for a in self.coeffs))

    def shift(self, k: int) -> "EpsSeries":
        """Multiply by eps^k (k may be negative when the series is divisible)."""
        N = self.order
        if k < 0 and any(self.coeffs[n] for n in range(-k)):
            raise ValueError(f"series is not divisible by eps^{-k}")
        return EpsSeries(tuple(self[n - k] for n in range(N + 1)))

    def valuation(self) -> Optional[int]:
        for n, a in enumerate(self.coeffs):
            if a:
                return n
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def map(self, f: Callable[[GradedPoly], GradedPoly]) -> "EpsSeries":
        return EpsSeries(tuple(f(a) for a in self.coeffs))

    def __str__(self):
        from .expr import format_poly
        parts = [f"eps^{n}*({format_poly(a)})" for n, a in enumerate(self.coeffs) if a]
        return " + ".join(parts) if parts else "0"


def classical_projection(a: EpsSeries) -> GradedPoly:
    return a[0]


# eps-complexes -------------------------------------------------------------

class EpsComplex:
    """delta = sum_r eps^r dd_r over Q[eps]/(eps^{N+1}); ``layers[r][d]`` are columns."""

    def __init__(self, basis: GradedBasis, layers: Sequence[Dict[int, List[Vec]]],
                 order: Optional[int] = None):
        self.basis = basis
        self.layers = [{d: list(l.get(d, [{}] * basis.dim(d))) for d in basis.degrees}
                       for l in layers] or [{d: [{}] * basis.dim(d) for d in basis.degrees}]
        self.order = order if order is not None else max(1, len(self.layers) - 1)
        if self.order < 1:
            raise ValueError("eps order must be at least 1")
        self.classical = CochainComplex(basis, self.layers[0])
        self.total(self.order)  # asserts delta^2 = 0 mod eps^{N+1}

    @classmethod
    def from_operators(cls, ctx: GradedContext, ops: Sequence[Callable], cap: int,
                       weights: Sequence[int], order: Optional[int] = None,
                       names=None) -> "EpsComplex":
        basis = GradedBasis.from_weights(ctx, cap, weights, names)
        return cls(basis, [_operator_columns(basis, op) for op in ops], order)

    def layer(self, r: int, d: int) -> List[Vec]:
        if r < len(self.layers):
            return self.layers[r].get(d, [])
        return [{}] * self.basis.dim(d)

    def total(self, N: int) -> CochainComplex:
        """The complex A[eps]/eps^{N+1}; basis index n*dim + j stands for eps^n e_j."""
        dims = {d: self.basis.dim(d) * (N + 1) for d in self.basis.degrees}
        diff = {}
        for d in self.basis.degrees:
            nd, nd1 = self.basis.dim(d), self.basis.dim(d + 1)
            cols = []
            for n in range(N + 1):
                for j in range(nd):
                    col: Vec = {}
                    for r in range(0, N - n + 1):
                        lay = self.layer(r, d)
                        if j < len(lay):
                            for i, c in lay[j].items():
                                col[(n + r) * nd1 + i] = c
                    cols.append(col)
            diff[d] = cols
        return CochainComplex(GradedBasis.from_dims(dims), diff)

    def stack(self, series: Sequence[Vec], d: int) -> Vec:
        nd = self.basis.dim(d)
        out = {}
        for n, v in enumerate(series):
            for i, c in v.items():
                out[n * nd + i] = c
        return out

    def unstack(self, v: Vec, d: int, N: int) -> List[Vec]:
        nd = self.basis.dim(d)
        out = [dict() for _ in range(N + 1)]
        for k, c in v.items():
            out[k // nd][k % nd] = c
        return out


@dataclass(frozen=True)
class DegreeTorsion:
    degree: int
    dim_A: int
    dim_B: int
    dim_B_prev: int
    rank_eps: int
    torsion_free: bool
    surjective: bool
    torsion_witness: Optional[Vec]
    missed_class: Optional[Vec]


@dataclass(frozen=True)
class TorsionReport:
    order: int
    degrees: Tuple[DegreeTorsion, ...]
    equivalence_ok: bool
    les_ok: bool

    def at(self, d: int) -> DegreeTorsion:
        for e in self.degrees:
            if e.degree == d:
                return e
        raise KeyError(d)

    @property
    def torsion_free(self) -> bool:
        return all(e.torsion_free for e in self.degrees)

    @property
    def surjective(self) -> bool:
        return all(e.surjective for e in self.degrees)


def torsion_check(ecx: EpsComplex, N: Optional[int] = None,
                  degrees: Optional[Iterable[int]] = None) -> TorsionReport:
    """Torsion-freeness of B = H(A[eps]/eps^{N+1}) and surjectivity of [pi0]: B -> A.

    torsion_free(i): eps: B_{N-1}^i -> B_N^i is injective.
    surjective(i):   pi0: B_N^i -> A^i is onto.
    The long exact sequence of 0 -> A[eps]/eps^N -> A[eps]/eps^{N+1} -> A -> 0
    makes surjective(i-1) equivalent to torsion_free(i); both are computed
    from independent rank counts and the equivalence is asserted.
    """
    N = N or ecx.order
    if N < 1:
        raise ValueError("torsion needs eps order >= 1")
    BN, BP, A = ecx.total(N), ecx.total(N - 1), ecx.classical
    all_degs = list(ecx.basis.degrees)
    entries = {}
    for d in all_degs:
        hA, hN, hP = A.cohomology_unchecked(d), BN.cohomology_unchecked(d), BP.cohomology_unchecked(d)
        nd = ecx.basis.dim(d)
        # eps: shift index by one order
        images = [{k + nd: c for k, c in z.items()} for z in hP.representatives]
        e = linalg.Echelon(track=True)
        for b in hN.quotient.boundaries.rows.values():
            e.add(b)
        base = e.count
        rank_eps = 0
        witness = None
        for img in images:
            raised, rel = e.add(img)
            if raised:
                rank_eps += 1
            elif witness is None:
                # combination of eps-images landing in boundaries
                witness = {}
                for vid, c in rel.items():
                    if vid >= base:
                        witness = linalg.axpy(witness, c, hP.representatives[vid - base])
        # pi0 on representatives of B_N
        heads = [{k: c for k, c in z.items() if k < nd} for z in hN.representatives]
        eA = linalg.Echelon()
        for b in hA.quotient.boundaries.rows.values():
            eA.add(b)
        brank = eA.rank
        for h in heads:
            eA.add(h)
        img_rank = eA.rank - brank
        missed = None
        if img_rank < hA.dimension:
            for r in hA.representatives:
                if eA.add(r)[0]:
                    missed = r
                    break
        entries[d] = DegreeTorsion(d, hA.dimension, hN.dimension, hP.dimension, rank_eps,
                                   rank_eps == hP.dimension, img_rank == hA.dimension,
                                   witness, missed)
    equivalence = all(entries[d].torsion_free == entries[d - 1].surjective if d - 1 in entries
                      else entries[d].torsion_free for d in all_degs)
    les = True
    for d in all_degs:
        nxt = entries.get(d + 1)
        rhs = entries[d].dim_B - entries[d].rank_eps
        if nxt is not None:
            rhs += nxt.dim_B_prev - nxt.rank_eps
        les &= rhs == entries[d].dim_A
        if nxt is None:
            # above the top degree all groups vanish
            les &= entries[d].surjective
    wanted = set(degrees) if degrees is not None else set(all_degs)
    return TorsionReport(N, tuple(entries[d] for d in all_degs if d in wanted), equivalence, les)


@dataclass(frozen=True)
class LiftResult:
    ok: bool
    series: Tuple[Vec, ...]
    degree: int
    obstruction_order: Optional[int] = None
    obstruction: Optional[Vec] = None
    obstruction_class: Optional[Tuple[Fraction, ...]] = None

    def polys(self, basis: GradedBasis) -> List[GradedPoly]:
        return [basis.to_poly(v, self.degree) for v in self.series]


def lift_cocycle(ecx: EpsComplex, a0, degree: int, N: Optional[int] = None) -> LiftResult:
    """Extend a dd_0-cocycle a0 to a with delta a = 0 mod eps^{N+1} and a|_{eps=0} = a0.

    Order m solves dd_0 a_m = -sum_{r=1..m} dd_r a_{m-r}.  When some right
    side is not dd_0-exact the first one is returned with its class in
    H^{degree+1}(A, dd_0).  Earlier choices are the echelon-canonical ones.
    """
    N = N or ecx.order
    v0 = ecx.basis.to_vec(a0, degree) if isinstance(a0, GradedPoly) else dict(a0)
    d0 = ecx.layer(0, degree)
    if linalg.apply(d0, v0):
        raise ValueError("a0 is not dd_0-closed")
    series = [v0]
    for m in range(1, N + 1):
        rhs: Vec = {}
        for r in range(1, m + 1):
            rhs = linalg.axpy(rhs, -1, linalg.apply(ecx.layer(r, degree), series[m - r]))
        x = linalg.solve(d0, rhs) if rhs else {}
        if x is None:
            h = ecx.classical.cohomology_unchecked(degree + 1)
            coords = h.quotient.coordinates(rhs)
            return LiftResult(False, tuple(series), degree, m, rhs,
                              tuple(coords) if coords is not None else None)
        series.append(x)
    res = LiftResult(True, tuple(series), degree)
    # post hoc check, independent of the solve
    tot = ecx.total(N)
    if tot.apply(degree, ecx.stack(series, degree)) or series[0] != v0:
        raise AssertionError("lift failed its own verification")
    return res


# BFV versus P-infinity ---------------------------------------------------------

@dataclass(frozen=True)
class SchaetzReport:
    cap: int
    dims_D: Dict[int, int]
    dims_lambda: Dict[int, int]
    h0_map_iso: bool
    bracket_pairs: int
    bracket_mismatches: Tuple[Tuple[int, int], ...]

    @property
    def dims_equal(self) -> bool:
        keys = set(self.dims_D) | set(self.dims_lambda)
        return all(self.dims_D.get(k, 0) == self.dims_lambda.get(k, 0) for k in keys)

    @property
    def ok(self) -> bool:
        return self.dims_equal and self.h0_map_iso and not self.bracket_mismatches


def bfv_to_a(S, p: GradedPoly) -> GradedPoly:
    """y = 0, b = 0, c_mu -> theta_{y^mu}: the chain map from the BFV complex to A."""
    from .bfv import ghost, ghost_momentum
    ctx = S.splitting.context
    assign = {}
    for y in S.splitting.transverse:
        assign[y] = 0
        assign[ghost_momentum(y)] = 0
        assign[ghost(y)] = ctx.theta(y)
    return substitute(p, assign, target=ctx)


def schaetz_crosscheck(S, cap: int = 3, charge=None) -> SchaetzReport:
    """Compare H_D with H_{lambda_1} degree by degree and the brackets on H^0.

    On H^0 the D-side bracket is the extended Poisson bracket and the A-side
    bracket is {a, b} = -lambda_2(a, b), the sign matching {f, g} = -[[pi, f], g].
    """
    from .bfv import bfv_charge, bfv_differential, bracket
    ch = charge or bfv_charge(S.pi, S.splitting.transverse)
    if not ch.terminated:
        raise ValueError("BFV charge did not terminate")
    n = len(S.splitting.transverse)
    win = (-n, n)
    dcx = CochainComplex.from_operator(ch.context, lambda p: bfv_differential(ch, p), cap,
                                       bfv_weights(ch.context), win)
    acx = lambda1_complex(S, cap)
    dims_D = {d: dcx.cohomology_unchecked(d).dimension for d in range(-n, n + 1)}
    dims_A = {d: acx.cohomology_unchecked(d).dimension for d in range(-n, n + 1)}
    h0D = dcx.cohomology_unchecked(0)
    h0A = acx.cohomology_unchecked(0)
    reps = h0D.polys()
    images = [bfv_to_a(S, r) for r in reps]
    iso = len(images) == h0A.dimension
    e = linalg.Echelon()
    for im in images:
        v = acx.basis.to_vec(im, 0)
        if acx.apply(0, v) or not e.add(v)[0]:
            iso = False
    bad = []
    pairs = 0
    for i in range(len(reps)):
        for j in range(i, len(reps)):
            pairs += 1
            lhs = bfv_to_a(S, bracket(reps[i], reps[j]))
            rhs = -S.lam(images[i], images[j])
            if lhs != rhs:
                bad.append((i, j))
    return SchaetzReport(cap, dims_D, dims_A, iso, pairs, tuple(bad))
