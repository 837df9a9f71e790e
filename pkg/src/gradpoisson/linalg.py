"""Sparse exact linear algebra over the rationals.

Vectors are dicts ``{index: Fraction}`` with no zero entries.  Pivots are
the smallest index of each echelon row, so results are deterministic and
depend only on the order in which vectors are supplied.
"""
from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vec = Dict[int, Fraction]


def vec(items) -> Vec:
    return {i: Fraction(c) for i, c in dict(items).items() if c}


def axpy(y: Vec, a, x: Vec) -> Vec:
    """Return ``y + a*x`` as a new vector."""
    out = dict(y)
    if not a:
        return out
    for i, c in x.items():
        v = out.get(i, 0) + a * c
        if v:
            out[i] = v
        else:
            out.pop(i, None)
    return out


def scale(x: Vec, a) -> Vec:
    if not a:
        return {}
    return {i: a * c for i, c in x.items()}


class Echelon:
    """Incrementally built echelon basis of a subspace.

    With ``track=True`` every row remembers how it was obtained from the
    vectors passed to :meth:`add`, which lets :meth:`express` solve linear
    systems.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.rows: Dict[int, Vec] = {}
        self.hist: Dict[int, Vec] = {}
        self.pivots: List[int] = []
        self.count = 0
        self.independent: List[int] = []  # ids of added vectors that raised the rank

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, v: Vec, h: Optional[Vec]) -> Tuple[Vec, Optional[Vec]]:
        v = dict(v)
        for p in self.pivots:
            c = v.get(p)
            if c:
                row = self.rows[p]
                for i, r in row.items():
                    val = v.get(i, 0) - c * r
                    if val:
                        v[i] = val
                    else:
                        v.pop(i, None)
                if h is not None:
                    h = axpy(h, -c, self.hist[p])
        return v, h

    def reduce(self, v: Vec) -> Vec:
        return self._reduce(v, None)[0]

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def add(self, v: Vec) -> Tuple[bool, Optional[Vec]]:
        """Add ``v``.  Returns (raised_rank, relation).

        When tracking and ``v`` is dependent, ``relation`` is the combination
        of added vectors (by id) that sums to zero, with coefficient 1 on
        ``v`` itself.
        """
        vid = self.count
        self.count += 1
        h = {vid: Fraction(1)} if self.track else None
        r, h = self._reduce(v, h)
        if not r:
            return False, h
        p = min(r)
        inv = 1 / r[p]
        r = {i: c * inv for i, c in r.items()}
        self.rows[p] = r
        if self.track:
            self.hist[p] = scale(h, inv)
        bisect.insort(self.pivots, p)
        self.independent.append(vid)
        return True, None

    def express(self, v: Vec) -> Optional[Vec]:
        """Coefficients ``a`` (by added-vector id) with ``sum a_i v_i = v``, or None."""
        if not self.track:
            raise RuntimeError("Echelon built without tracking")
        r, h = self._reduce(v, {})
        if r:
            return None
        return scale(h, -1)


def rank(vectors: Iterable[Vec]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def kernel(columns: Sequence[Vec]) -> List[Vec]:
    """Basis of the kernel of the map sending basis vector j to ``columns[j]``."""
    e = Echelon(track=True)
    out = []
    for col in columns:
        raised, rel = e.add(col)
        if not raised:
            out.append({i: c for i, c in rel.items() if c})
    return out


def image_basis(columns: Sequence[Vec]) -> Echelon:
    e = Echelon()
    for col in columns:
        e.add(col)
    return e


def solve(columns: Sequence[Vec], b: Vec) -> Optional[Vec]:
    """A particular solution x with ``sum x_j columns[j] = b`` (free variables zero)."""
    e = Echelon(track=True)
    for col in columns:
        e.add(col)
    return e.express(b)


def apply(columns: Sequence[Vec], x: Vec) -> Vec:
    out: Vec = {}
    for j, c in x.items():
        out = axpy(out, c, columns[j])
    return out


def compose_zero(first: Sequence[Vec], second: Sequence[Vec]) -> List[Tuple[int, Vec]]:
    """Columns j where ``second o first`` is nonzero, with the offending image."""
    bad = []
    for j, col in enumerate(first):
        img = apply(second, col)
        if img:
            bad.append((j, img))
    return bad


class Quotient:
    """The quotient ``span(cocycles) / span(boundaries)`` with chosen representatives."""

    def __init__(self, cocycles: Sequence[Vec], boundaries: Sequence[Vec]):
        self.boundaries = Echelon()
        for b in boundaries:
            self.boundaries.add(b)
        self._full = Echelon(track=True)
        # boundaries first so that representatives are complements to them
        for b in boundaries:
            self._full.add(b)
        self._offset = self._full.count
        self.representatives: List[Vec] = []
        self._rep_ids: List[int] = []
        for z in cocycles:
            raised, _ = self._full.add(z)
            if raised:
                self.representatives.append(dict(z))
                self._rep_ids.append(self._full.count - 1)

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def is_trivial(self, v: Vec) -> bool:
        return self.boundaries.contains(v)

    def coordinates(self, v: Vec) -> Optional[List[Fraction]]:
        """Class of ``v`` in the representative basis (None if ``v`` is not in the span)."""
        coeffs = self._full.express(v)
        if coeffs is None:
            return None
        return [coeffs.get(i, Fraction(0)) for i in self._rep_ids]
