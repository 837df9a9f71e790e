"""Random instances for property tests and experiment scripts."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cohomology import EpsComplex, GradedBasis
from .core import GradedContext, GradedPoly, monomials_up_to
from .pointwise import invert


def random_fraction(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 2))


def random_poly(rng: random.Random, ctx: GradedContext, max_total: int = 2, terms: int = 3,
                degree: Optional[int] = None, names: Optional[Sequence[str]] = None) -> GradedPoly:
    monos = list(monomials_up_to(ctx, max_total, names=names))
    if degree is not None:
        monos = [m for m in monos if ctx.mono_degree(m) == degree]
    out = ctx.zero()
    if not monos:
        return out
    for _ in range(terms):
        out = out + ctx.monomial(rng.choice(monos), random_fraction(rng))
    return out


def _random_invertible(rng: random.Random, n: int):
    while True:
        m = tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)) for _ in range(n))
        if n == 0 or invert(m) is not None:
            return m


def _series_inverse(gs, N: int):
    n = len(gs[0])
    h0 = invert(gs[0])
    hs = [h0]
    for k in range(1, N + 1):
        acc = [[Fraction(0)] * n for _ in range(n)]
        for j in range(1, k + 1):
            prod = _mul(gs[j], hs[k - j])
            for a in range(n):
                for b in range(n):
                    acc[a][b] += prod[a][b]
        hs.append(tuple(tuple(-x for x in row) for row in _mul(h0, acc)))
    return hs


def _mul(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(len(b[0])))
                 for i in range(n))


def random_eps_complex(rng: random.Random, N: int = 2, degrees: Tuple[int, int] = (0, 3),
                       pieces: int = 5, conjugate: bool = True) -> EpsComplex:
    """Direct sum of elementary complexes, conjugated by a random invertible g(eps).

    Pieces are free generators and pairs u -> eps^k v (0 <= k <= N).  The
    structure of B is then known in closed form, but the conjugation hides it
    from the engine.
    """
    lo, hi = degrees
    dims: Dict[int, int] = {d: 0 for d in range(lo, hi + 1)}
    arrows: List[Tuple[int, int, int, int]] = []  # (degree, source, target, k)
    for _ in range(pieces):
        d = rng.randint(lo, hi)
        if d < hi and rng.random() < 0.7:
            k = rng.randint(0, N)
            arrows.append((d, dims[d], dims[d + 1], k))
            dims[d] += 1
            dims[d + 1] += 1
        else:
            dims[d] += 1
    layers = [{d: [dict() for _ in range(dims[d])] for d in dims} for _ in range(N + 1)]
    for d, s, t, k in arrows:
        layers[k][d][s] = {t: Fraction(1)}
    if conjugate:
        gs = {d: [_random_invertible(rng, dims[d])] +
              [tuple(tuple(Fraction(rng.randint(-1, 1)) for _ in range(dims[d])) for _ in range(dims[d]))
               for _ in range(N)] for d in dims}
        hs = {d: _series_inverse(gs[d], N) if dims[d] else [()] * (N + 1) for d in dims}
        new = [{d: [dict() for _ in range(dims[d])] for d in dims} for _ in range(N + 1)]
        for d in dims:
            if d + 1 not in dims or not dims[d] or not dims[d + 1]:
                continue
            for r in range(N + 1):
                # delta'_r = sum_{a+b+c=r} g_a(d+1) delta_b h_c(d)
                for a in range(r + 1):
                    for b in range(r - a + 1):
                        c = r - a - b
                        for j in range(dims[d]):
                            for i_mid in range(dims[d]):
                                hc = hs[d][c][i_mid][j]
                                if not hc:
                                    continue
                                for t, val in layers[b][d][i_mid].items():
                                    for out in range(dims[d + 1]):
                                        ga = gs[d + 1][a][out][t]
                                        if ga:
                                            col = new[r][d][j]
                                            col[out] = col.get(out, 0) + ga * val * hc
        layers = [{d: [{i: c for i, c in col.items() if c} for col in lay[d]] for d in lay}
                  for lay in new]
    return EpsComplex(GradedBasis.from_dims(dims), layers, N)
