"""Linear (pointwise) classification of subspaces of Poisson vector spaces.

Vectors and covectors are tuples of Fractions in the standard basis;
``pi`` is the skew matrix with ``pi_sharp(alpha)_j = sum_i alpha_i pi[i][j]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]


def _matrix(rows) -> Matrix:
    return tuple(tuple(Fraction(c) for c in row) for row in rows)


def _sparse(v: Sequence[Fraction]) -> linalg.Vec:
    return {i: Fraction(c) for i, c in enumerate(v) if c}


def _dense(v: linalg.Vec, n: int) -> Vector:
    return tuple(v.get(i, Fraction(0)) for i in range(n))


def _is_skew(m: Matrix) -> bool:
    n = len(m)
    return all(m[i][j] == -m[j][i] for i in range(n) for j in range(n))


def invert(m: Matrix) -> Optional[Matrix]:
    n = len(m)
    cols = [_sparse([m[i][j] for i in range(n)]) for j in range(n)]
    e = linalg.Echelon(track=True)
    for c in cols:
        e.add(c)
    if e.rank < n:
        return None
    inv_cols = [e.express({k: Fraction(1)}) for k in range(n)]
    return tuple(tuple(inv_cols[j].get(i, Fraction(0)) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
                       for j in range(len(b[0]))) for i in range(len(a)))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


@dataclass(frozen=True)
class BilinearData:
    """A Poisson vector space, optionally with the symplectic form ``omega``."""
    dim: int
    pi: Matrix
    omega: Optional[Matrix] = None

    @classmethod
    def from_pi(cls, pi) -> "BilinearData":
        pi = _matrix(pi)
        return cls(len(pi), pi, invert(pi))

    @classmethod
    def from_omega(cls, omega) -> "BilinearData":
        omega = _matrix(omega)
        inv = invert(omega)
        if inv is None:
            raise ValueError("omega is degenerate")
        return cls(len(omega), inv, omega)

    def __post_init__(self):
        if not _is_skew(self.pi):
            raise ValueError("pi is not skew")
        if self.omega is not None:
            if not _is_skew(self.omega):
                raise ValueError("omega is not skew")
            n = self.dim
            ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
            # pi_sharp o omega_sharp = id in the row convention used by sharp()
            if matmul(self.omega, self.pi) != ident:
                raise ValueError("pi is not the inverse of omega")

    def sharp(self, alpha: Sequence[Fraction]) -> Vector:
        n = self.dim
        return tuple(sum((Fraction(alpha[i]) * self.pi[i][j] for i in range(n)), Fraction(0))
                     for j in range(n))

    @property
    def symplectic(self) -> bool:
        return self.omega is not None


@dataclass(frozen=True)
class Subspace:
    basis: Tuple[Vector, ...]
    dim_ambient: int

    @classmethod
    def span(cls, vectors, n: Optional[int] = None) -> "Subspace":
        """Independent spanning subset of ``vectors`` (first-come order)."""
        vectors = [tuple(Fraction(c) for c in v) for v in vectors]
        if n is None:
            if not vectors:
                raise ValueError("ambient dimension needed for an empty span")
            n = len(vectors[0])
        e = linalg.Echelon()
        keep = []
        for v in vectors:
            if e.add(_sparse(v))[0]:
                keep.append(v)
        return cls(tuple(keep), n)

    def __post_init__(self):
        if linalg.rank(_sparse(v) for v in self.basis) != len(self.basis):
            raise ValueError("basis vectors are dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def echelon(self) -> linalg.Echelon:
        e = linalg.Echelon()
        for v in self.basis:
            e.add(_sparse(v))
        return e

    def contains(self, v) -> bool:
        return self.echelon().contains(_sparse(v))

    def contains_space(self, other: "Subspace") -> bool:
        e = self.echelon()
        return all(e.contains(_sparse(v)) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.dim_ambient)


def standard_basis(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


def annihilator(W: Subspace) -> Subspace:
    """Covectors vanishing on W."""
    n = W.dim_ambient
    cols = [{j: Fraction(w[i]) for j, w in enumerate(W.basis) if w[i]} for i in range(n)]
    return Subspace(tuple(_dense(k, n) for k in linalg.kernel(cols)), n)


def sharp_image(data: BilinearData, W0: Subspace) -> Subspace:
    return Subspace.span([data.sharp(a) for a in W0.basis], data.dim)


def intersect(U: Subspace, V: Subspace) -> Subspace:
    n = U.dim_ambient
    cols = [_sparse(u) for u in U.basis] + [_sparse(tuple(-c for c in v)) for v in V.basis]
    out = []
    for k in linalg.kernel(cols):
        vec = [Fraction(0)] * n
        for j, c in k.items():
            if j < U.dim:
                for i in range(n):
                    vec[i] += c * U.basis[j][i]
        out.append(tuple(vec))
    return Subspace.span(out, n) if out else Subspace((), n)


def symplectic_orthogonal(data: BilinearData, W: Subspace) -> Subspace:
    return sharp_image(data, annihilator(W))


@dataclass(frozen=True)
class SubspaceReport:
    symplectic: bool
    cosymplectic: bool
    coisotropic: bool
    pre_poisson: bool
    rank_phi: int
    rank_sum: int
    characteristic_basis: Tuple[Vector, ...]
    ac_basis: Tuple[Vector, ...]
    codim: int

    def flags(self):
        return {"symplectic": self.symplectic, "cosymplectic": self.cosymplectic,
                "coisotropic": self.coisotropic, "pre_poisson": self.pre_poisson}


def classify(data: BilinearData, W: Subspace) -> SubspaceReport:
    n = data.dim
    W0 = annihilator(W)
    S = sharp_image(data, W0)
    total = W + S
    coiso = W.contains_space(S)
    cosym = total.dim == n and W.dim + S.dim == n
    if data.omega is not None:
        gram = [_sparse([sum((u[i] * data.omega[i][j] * v[j] for i in range(n) for j in range(n)),
                             Fraction(0)) for v in W.basis]) for u in W.basis]
        sympl = linalg.rank(gram) == W.dim
    else:
        sympl = False
    char = intersect(W, S)
    # A C: covectors in W0 whose sharp lands in W
    wech = W.echelon()
    reduced = [wech.reduce(_sparse(data.sharp(a))) for a in W0.basis]
    ac = []
    for k in linalg.kernel(reduced):
        alpha = [Fraction(0)] * n
        for j, c in k.items():
            for i in range(n):
                alpha[i] += c * W0.basis[j][i]
        ac.append(tuple(alpha))
    return SubspaceReport(
        symplectic=sympl, cosymplectic=cosym, coisotropic=coiso, pre_poisson=True,
        rank_phi=total.dim - W.dim, rank_sum=total.dim,
        characteristic_basis=char.basis, ac_basis=tuple(ac), codim=n - W.dim,
    )


def coordinate_complement(U: Subspace) -> List[Vector]:
    """Lexicographically first coordinate vectors completing U to the whole space."""
    n = U.dim_ambient
    e = U.echelon()
    out = []
    for i in range(n):
        v = standard_basis(n, i)
        if e.add(_sparse(v))[0]:
            out.append(v)
    return out


def coisotropic_extension(data: BilinearData, W: Subspace) -> Subspace:
    """W' = W + (coordinate complement of W + pi_sharp(W0)).

    W' is cosymplectic (symplectic when omega is present) and contains W as a
    coisotropic subspace; see :func:`restrict_cosymplectic`.
    """
    S = sharp_image(data, annihilator(W))
    K = coordinate_complement(W + S)
    return Subspace(W.basis + tuple(K), data.dim)


def restrict_cosymplectic(data: BilinearData, Wp: Subspace) -> BilinearData:
    """Induced Poisson structure on a cosymplectic subspace, in W'-coordinates.

    pi is projected onto W' along pi_sharp(W'^0).  When omega is present the
    restriction of omega is attached and the inverse relation re-checked on
    construction.
    """
    n = data.dim
    U = sharp_image(data, annihilator(Wp))
    basis = list(Wp.basis) + list(U.basis)
    if len(basis) != n or linalg.rank(_sparse(v) for v in basis) != n:
        raise ValueError("subspace is not cosymplectic")
    B = tuple(tuple(basis[j][i] for j in range(n)) for i in range(n))  # columns = basis
    Binv = invert(B)
    k = Wp.dim
    P = Binv[:k]  # coordinates along W'
    pi_new = matmul(matmul(P, data.pi), transpose(P))
    omega_new = None
    if data.omega is not None:
        Wm = tuple(tuple(Wp.basis[j][i] for j in range(k)) for i in range(n))
        omega_new = matmul(matmul(transpose(Wm), data.omega), Wm)
    return BilinearData(k, pi_new, omega_new)


def coordinates_in(Wp: Subspace, W: Subspace) -> Subspace:
    """Express the basis of W (contained in W') in W'-coordinates."""
    e = linalg.Echelon(track=True)
    for v in Wp.basis:
        e.add(_sparse(v))
    out = []
    for w in W.basis:
        c = e.express(_sparse(w))
        if c is None:
            raise ValueError("W is not contained in W'")
        out.append(_dense(c, Wp.dim))
    return Subspace(tuple(out), Wp.dim)


def graph_subspace(dphi) -> Subspace:
    dphi = _matrix(dphi)
    rows_n = len(dphi)
    cols_m = len(dphi[0]) if rows_n else 0
    basis = []
    for i in range(cols_m):
        v = [Fraction(int(k == i)) for k in range(cols_m)] + [dphi[r][i] for r in range(rows_n)]
        basis.append(tuple(v))
    return Subspace(tuple(basis), cols_m + rows_n)


def graph_coisotropy_check(piM: BilinearData, piN: BilinearData, dphi) -> SubspaceReport:
    """Classify Graph(dphi) inside M-bar x N, i.e. with pi = (-piM) + piN."""
    dphi = _matrix(dphi)
    m, n = piM.dim, piN.dim
    if len(dphi) != n or any(len(r) != m for r in dphi):
        raise ValueError(f"dphi must be {n}x{m}")
    size = m + n
    pi = [[Fraction(0)] * size for _ in range(size)]
    for i in range(m):
        for j in range(m):
            pi[i][j] = -piM.pi[i][j]
    for i in range(n):
        for j in range(n):
            pi[m + i][m + j] = piN.pi[i][j]
    return classify(BilinearData.from_pi(pi), graph_subspace(dphi))
