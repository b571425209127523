"""Finite-dimensional Lie algebras over Q given by structure constants."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import numkit as nk
from .numkit import Backend, Mat, SubspaceBasis

Vec = tuple[Fraction, ...]


class JacobiError(ValueError):
    pass


class LieAlgebraTable:
    """Structure constants ``C[i][j][k]``: [e_i, e_j] = Σ_k C[i][j][k] e_k."""

    __slots__ = ("dim", "C", "labels")

    def __init__(self, dim: int, C, labels: Sequence[str] | None = None, check: bool = True):
        self.dim = dim
        z = Fraction(0)
        full = [[[z] * dim for _ in range(dim)] for _ in range(dim)]
        if isinstance(C, dict):
            for (i, j), vec in C.items():
                items = vec.items() if isinstance(vec, dict) else enumerate(vec)
                for k, c in items:
                    full[i][j][k] = Fraction(c)
                    full[j][i][k] = -Fraction(c)
        else:
            for i in range(dim):
                for j in range(dim):
                    for k in range(dim):
                        full[i][j][k] = Fraction(C[i][j][k])
        for i in range(dim):
            if any(full[i][i]):
                raise ValueError("structure constants must vanish on the diagonal")
            for j in range(i + 1, dim):
                if any(a != -b for a, b in zip(full[i][j], full[j][i])):
                    raise ValueError("structure constants must be antisymmetric")
        self.C = tuple(tuple(tuple(r) for r in row) for row in full)
        self.labels = tuple(labels) if labels else tuple(f"e{i + 1}" for i in range(dim))
        if check and jacobi_check(self) != 0:
            raise JacobiError("Jacobi identity fails")

    def bracket(self, x: Sequence, y: Sequence) -> Vec:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.C[i][j]):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    def basis_vector(self, i: int) -> Vec:
        return tuple(Fraction(int(i == j)) for j in range(self.dim))

    def ad(self, x: Sequence) -> Mat:
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return Mat([[cols[j][i] for j in range(self.dim)] for i in range(self.dim)])

    def ad_basis(self, i: int) -> Mat:
        return Mat([[self.C[i][j][k] for j in range(self.dim)] for k in range(self.dim)])

    @classmethod
    def from_matrices(cls, mats: Sequence[Mat], labels=None) -> "LieAlgebraTable":
        """Table of a matrix Lie algebra on the given (linearly independent, bracket-closed) basis."""
        if not mats:
            return cls(0, [], check=False)
        sp = nk.matrix_span(mats)
        if sp.dim != len(mats):
            raise ValueError("basis matrices are linearly dependent")
        # coordinates relative to the given basis: solve via the echelon span
        B = [sp.coordinates(M) for M in mats]
        Binv = nk.mat_inverse(Mat(B).T)
        d = len(mats)
        C = {}
        for i in range(d):
            for j in range(i + 1, d):
                c = nk.commutator(mats[i], mats[j])
                if not sp.contains(c):
                    raise ValueError("basis is not closed under the bracket")
                C[(i, j)] = list(Binv.apply(sp.coordinates(c)))
        return cls(d, C, labels)

    def change_basis(self, P: Mat) -> "LieAlgebraTable":
        """Table in the basis f_j = Σ_i P[i][j] e_i."""
        Pinv = nk.mat_inverse(P)
        d = self.dim
        cols = [P.col(j) for j in range(d)]
        C = {}
        for i in range(d):
            for j in range(i + 1, d):
                C[(i, j)] = list(Pinv.apply(self.bracket(cols[i], cols[j])))
        return LieAlgebraTable(d, C)

    def to_json(self) -> str:
        consts = [[i, j, k, str(c)] for i in range(self.dim) for j in range(i + 1, self.dim)
                  for k, c in enumerate(self.C[i][j]) if c]
        return json.dumps({"dim": self.dim, "labels": list(self.labels), "constants": consts}, sort_keys=True)

    @classmethod
    def from_json(cls, src: str) -> "LieAlgebraTable":
        data = json.loads(src)
        C: dict = {}
        for i, j, k, c in data["constants"]:
            C.setdefault((i, j), {})[k] = Fraction(c)
        return cls(data["dim"], C, data.get("labels"))

    def __repr__(self):
        return f"LieAlgebraTable(dim={self.dim})"


def jacobi_check(L: LieAlgebraTable) -> Fraction:
    """Largest |component| of [[e_i,e_j],e_k] + cyclic over basis triples."""
    worst = Fraction(0)
    d = L.dim
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                ei, ej, ek = L.basis_vector(i), L.basis_vector(j), L.basis_vector(k)
                s = [a + b + c for a, b, c in zip(L.bracket(L.C[i][j], ek), L.bracket(L.C[j][k], ei),
                                                  L.bracket(L.C[k][i], ej))]
                worst = max([worst] + [abs(x) for x in s])
    return worst


def killing_form(L: LieAlgebraTable) -> Mat:
    ads = [L.ad_basis(i) for i in range(L.dim)]
    return Mat([[(ads[i] @ ads[j]).trace() for j in range(L.dim)] for i in range(L.dim)])


def _bracket_span(L: LieAlgebraTable, A: SubspaceBasis, B: SubspaceBasis) -> SubspaceBasis:
    vecs = [L.bracket(a, b) for a in A.vectors for b in B.vectors]
    return nk.span(vecs, L.dim, Backend.RATIONAL)


def _whole(L: LieAlgebraTable) -> SubspaceBasis:
    return nk.span([L.basis_vector(i) for i in range(L.dim)], L.dim, Backend.RATIONAL)


def derived_series(L: LieAlgebraTable) -> tuple[int, ...]:
    cur = _whole(L)
    dims = [cur.dim]
    while cur.dim:
        nxt = _bracket_span(L, cur, cur)
        if nxt.dim == cur.dim:
            break
        cur = nxt
        dims.append(cur.dim)
    return tuple(dims)


def center(L: LieAlgebraTable) -> SubspaceBasis:
    d = L.dim
    if d == 0:
        return _whole(L)
    # x central iff ad(e_j) x = 0 for all j
    rows = []
    for j in range(d):
        A = L.ad_basis(j)
        rows.extend(A.entries)
    _, ns = nk.rank_nullspace(Mat(rows))
    return ns


def radical(L: LieAlgebraTable) -> SubspaceBasis:
    """Maximal solvable ideal, computed as the Killing-orthogonal complement of [g, g]."""
    d = L.dim
    if d == 0:
        return _whole(L)
    D = _bracket_span(L, _whole(L), _whole(L))
    B = killing_form(L)
    if D.dim == 0:
        return _whole(L)
    rows = [list(B.apply(v)) for v in D.vectors]
    _, ns = nk.rank_nullspace(Mat(rows))
    return ns


@dataclass(frozen=True)
class LieFingerprint:
    dim: int
    signature: tuple[int, int, int]
    derived_series: tuple[int, ...]
    center_dim: int
    radical_dim: int
    semisimple: bool

    def as_dict(self) -> dict:
        return {"dim": self.dim, "killing_signature": list(self.signature),
                "derived_series": list(self.derived_series), "center_dim": self.center_dim,
                "radical_dim": self.radical_dim, "semisimple": self.semisimple}


def killing_fingerprint(L: LieAlgebraTable) -> LieFingerprint:
    B = killing_form(L)
    sig = nk.inertia(B) if L.dim else (0, 0, 0)
    return LieFingerprint(L.dim, sig, derived_series(L), center(L).dim, radical(L).dim, sig[1] == 0)


def subalgebra_closure(L: LieAlgebraTable, generators: Sequence[Sequence]) -> tuple[SubspaceBasis, LieAlgebraTable]:
    """Smallest subalgebra containing ``generators`` and its table on the echelon basis."""
    cur = nk.span([tuple(Fraction(x) for x in g) for g in generators], L.dim, Backend.RATIONAL)
    while True:
        nxt = cur + _bracket_span(L, cur, cur) if cur.dim else cur
        if nxt.dim == cur.dim:
            break
        cur = nxt
    basis = cur.vectors
    C = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            C[(i, j)] = cur.coordinates(L.bracket(basis[i], basis[j]))
    return cur, LieAlgebraTable(len(basis), C)


def random_basis_change(L: LieAlgebraTable, seed: int = 0) -> LieAlgebraTable:
    rng = random.Random(seed)
    d = L.dim
    while True:
        P = Mat([[Fraction(rng.randint(-3, 3)) for _ in range(d)] for _ in range(d)])
        if nk.determinant(P) != 0:
            return L.change_basis(P)


# ---------------------------------------------------------------- builders

def abelian(d: int) -> LieAlgebraTable:
    return LieAlgebraTable(d, {}, check=False)


def so3() -> LieAlgebraTable:
    return LieAlgebraTable(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}, ["L1", "L2", "L3"])


def _eta(p: int, q: int) -> Mat:
    n = p + q
    return Mat([[Fraction(-1 if i < p else 1) if i == j else Fraction(0) for j in range(n)] for i in range(n)])


def so_pq_matrices(p: int, q: int) -> list[Mat]:
    """Basis of so(p,q) = {X : Xᵀη + ηX = 0}, η = diag(−1^p, +1^q)."""
    n = p + q
    eta = _eta(p, q)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            X = [[Fraction(0)] * n for _ in range(n)]
            # X e_j = e_i, X e_i = −η_ii η_jj e_j
            X[i][j] = Fraction(1)
            X[j][i] = -eta[i, i] * eta[j, j]
            out.append(Mat(X))
    return out


def so_pq(p: int, q: int) -> LieAlgebraTable:
    return LieAlgebraTable.from_matrices(so_pq_matrices(p, q))


def semidirect_so_pq(p: int, q: int) -> LieAlgebraTable:
    """so(p,q) ⋉ R^{p,q} realized as affine matrices [[A, v], [0, 0]]."""
    n = p + q
    mats = []
    for A in so_pq_matrices(p, q):
        mats.append(Mat([list(A.row(i)) + [Fraction(0)] for i in range(n)] + [[Fraction(0)] * (n + 1)]))
    for i in range(n):
        X = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
        X[i][n] = Fraction(1)
        mats.append(Mat(X))
    return LieAlgebraTable.from_matrices(mats)


def heisenberg(m: int) -> LieAlgebraTable:
    """h^{2m+1}: [x_i, y_i] = z."""
    d = 2 * m + 1
    return LieAlgebraTable(d, {(i, m + i): {d - 1: 1} for i in range(m)},
                           [f"x{i + 1}" for i in range(m)] + [f"y{i + 1}" for i in range(m)] + ["z"])


# ---------------------------------------------------------------- zoo matching

ZOO_TARGETS = ("SO_M_PLUS_2", "SO_2_M", "SO_1_M_PLUS_1", "EUCLIDEAN_MOTION", "LORENTZ_MOTION", "HEISENBERG")


@lru_cache(maxsize=None)
def zoo_fingerprints(m: int) -> dict[str, LieFingerprint]:
    return {
        "SO_M_PLUS_2": killing_fingerprint(so_pq(0, m + 2)),
        "SO_2_M": killing_fingerprint(so_pq(2, m)),
        "SO_1_M_PLUS_1": killing_fingerprint(so_pq(1, m + 1)),
        "EUCLIDEAN_MOTION": killing_fingerprint(semidirect_so_pq(0, m + 1)),
        "LORENTZ_MOTION": killing_fingerprint(semidirect_so_pq(1, m)),
        "HEISENBERG": killing_fingerprint(heisenberg(m)),
    }


@dataclass(frozen=True)
class ZooMatch:
    label: str
    matches: tuple[str, ...]


def _key(fp: LieFingerprint):
    return (fp.dim, fp.signature, fp.radical_dim, fp.derived_series, fp.center_dim)


def match_zoo(fp: LieFingerprint, m: int) -> ZooMatch:
    hits = tuple(name for name, t in zoo_fingerprints(m).items() if _key(t) == _key(fp))
    if len(hits) == 1:
        return ZooMatch(hits[0], hits)
    return ZooMatch("AMBIGUOUS" if hits else "UNMATCHED", hits)
