"""Holonomy algebras of contact connections, loop transport and subalgebra classification.

Holonomy algebras are computed infinitesimally: curvature sections and their iterated
covariant derivatives are evaluated at the base point and bracket-closed.  For models with
polynomial or rational data (real-analytic) this is the restricted holonomy algebra.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import flint
import numpy as np

from . import numkit as nk
from .contactgeo import (ContactModel, FrameConnection, adapted_connection, is_codazzi,
                         schouten_connection)
from .numkit import Backend, Mat, NoFixpointError, SubspaceBasis
from .polycalc import PoleAtPointError, RatFunc, RatMat

ANALYTICITY_NOTE = ("infinitesimal holonomy (curvature and covariant derivatives at the base point); "
                    "equals the restricted holonomy for real-analytic data")


class Mode(str, Enum):
    HORIZONTAL = "HORIZONTAL"
    FULL = "FULL"


class Label(str, Enum):
    TRIVIAL = "TRIVIAL"
    SO_M_LAGRANGIAN = "SO_M_LAGRANGIAN"
    SO_M_PLUS_U1 = "SO_M_PLUS_U1"
    SU_M = "SU_M"
    U_M = "U_M"
    OTHER = "OTHER"


def label_dimension(label: Label, m: int) -> int | None:
    return {
        Label.TRIVIAL: 0,
        Label.SO_M_LAGRANGIAN: m * (m - 1) // 2,
        Label.SO_M_PLUS_U1: m * (m - 1) // 2 + 1,
        Label.SU_M: m * m - 1,
        Label.U_M: m * m,
    }.get(label)


class TheoremViolation(RuntimeError):
    code = "THEOREM_VIOLATION"


class PoleOnPathError(ValueError):
    code = "POLE_ON_PATH"


class SplitIncomplete(RuntimeError):
    code = "SPLIT_INCOMPLETE"

    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    commutant_dim: int
    has_invariant_J: bool
    invariant_subspace_dims: tuple[int, ...]
    trace_free_on_J: bool | None = None
    lagrangian_certificate: bool = False

    def as_dict(self) -> dict:
        return {"dim": self.dim, "commutant_dim": self.commutant_dim, "has_invariant_J": self.has_invariant_J,
                "invariant_subspace_dims": list(self.invariant_subspace_dims),
                "trace_free_on_J": self.trace_free_on_J, "lagrangian_certificate": self.lagrangian_certificate}


@dataclass(frozen=True)
class Classification:
    label: Label
    fingerprint: Fingerprint
    J: Mat | None = None


@dataclass(frozen=True)
class HolonomyReport:
    algebra: SubspaceBasis
    depth_used: int
    stabilized: bool
    classification: Classification
    tag: str
    mode: Mode
    dims_by_depth: tuple[int, ...]
    note: str = ANALYTICITY_NOTE

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def label(self) -> Label:
        return self.classification.label


# ---------------------------------------------------------------- holonomy generation

MAX_DEPTH = 4


def _nonzero(mats):
    return [M for M in mats if not M.is_zero()]


def _horizontal_sections(model: ContactModel, p) -> list[RatMat]:
    """Sections whose values span R(ker dθ) at every point where W_rs ≠ 0."""
    geo = model.geo
    k = geo.k
    W0 = geo.W.evaluate(p)
    r, s = next((a, b) for a in range(k) for b in range(a + 1, k) if W0[a, b] != 0)
    R = geo.R
    out = []
    for a in range(k):
        for b in range(a + 1, k):
            if (a, b) == (r, s):
                continue
            out.append(R[a][b].scale(geo.W[r, s]) - R[r][s].scale(geo.W[a, b]))
    return out


def _full_sections(conn: FrameConnection) -> list[RatMat]:
    k = conn.geo.k
    out = [conn.R_hor[a][b] for a in range(k) for b in range(a + 1, k)]
    out += list(conn.R_xi)
    return out


def infinitesimal_holonomy(model: ContactModel, conn: FrameConnection, mode: Mode | str = Mode.HORIZONTAL,
                           depth: int = 2, p=None, max_rounds: int = 20) -> HolonomyReport:
    mode = Mode(mode)
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must lie in 0..{MAX_DEPTH}")
    p = tuple(Fraction(x) for x in (p if p is not None else model.base_point))
    geo = model.geo
    k = geo.k
    full_dim = k * (k - 1) // 2
    if mode is Mode.HORIZONTAL:
        sections = _horizontal_sections(model, p)
        directions = list(range(k))
        cov = (lambda c, S: geo.derive(c, S) + conn.Gamma[c].comm(S))
    else:
        if not conn.extended:
            raise ValueError("FULL holonomy needs an extended connection")
        sections = _full_sections(conn)
        directions = list(range(k)) + [None]
        cov = conn.cov_endo
    sections = _nonzero(sections)
    try:
        values = [S.evaluate(p) for S in sections]
    except PoleAtPointError as exc:
        raise PoleOnPathError(str(exc)) from None
    alg = nk.bracket_closure(values, max_rounds, n=k, backend=Backend.RATIONAL) if values else \
        nk.matrix_span([], k, Backend.RATIONAL)
    dims = [alg.dim]
    level = sections
    for _ in range(depth):
        if alg.dim == full_dim:
            break
        nxt = []
        for S in level:
            for c in directions:
                D = cov(c, S)
                if not D.is_zero():
                    nxt.append(D)
        level = nxt
        new_vals = [S.evaluate(p) for S in level]
        fresh = [v for v in new_vals if not alg.contains(v)]
        if fresh:
            alg = nk.bracket_closure(alg.matrices() + fresh, max_rounds)
        dims.append(alg.dim)
    stabilized = alg.dim == full_dim or (len(dims) >= 2 and dims[-1] == dims[-2])
    g0 = geo.g.evaluate(p)
    J0 = model.J.evaluate(p) if model.J is not None else None
    cls = classify_subalgebra(alg, g0, J0)
    return HolonomyReport(alg, len(dims) - 1, stabilized, cls, conn.tag, mode, tuple(dims))


# ---------------------------------------------------------------- classification

def _lagrangian_certificate(h: Sequence[Mat], comm: SubspaceBasis, g: Mat, J: Mat) -> Mat | None:
    """A g-symmetric S in the commutant with SJ = −JS and S² = c·I, c > 0."""
    n = g.rows
    if comm.dim == 0:
        return None
    basis = comm.matrices()
    # linear conditions on coefficients: gS symmetric, SJ + JS = 0
    rows = []
    for i in range(n):
        for j in range(n):
            rows.append([(g @ B)[i, j] - (g @ B)[j, i] for B in basis])
            rows.append([(B @ J + J @ B)[i, j] for B in basis])
    _, ns = nk.rank_nullspace(Mat(rows))
    if ns.dim == 0:
        return None
    cands = []
    for coeffs in ns.vectors:
        cands.append(sum((B.scale(c) for B, c in zip(basis, coeffs) if c), Mat.zeros(n)))
    rng = random.Random(0)
    for _ in range(6):
        co = [rng.randint(-3, 3) for _ in cands]
        cands.append(sum((C.scale(c) for C, c in zip(cands[: ns.dim], co) if c), Mat.zeros(n)))
    ident = Mat.identity(n)
    for S in cands:
        if S.is_zero():
            continue
        S2 = S @ S
        c = S2[0, 0]
        if c > 0 and S2 == ident.scale(c):
            return S
    return None


def _trace_orthogonal(h: SubspaceBasis, X: Mat) -> SubspaceBasis:
    """Elements Y of h with tr(XY) = 0."""
    mats = h.matrices()
    if not mats:
        return h
    row = [(X @ Y).trace() for Y in mats]
    _, ns = nk.rank_nullspace(Mat([row]))
    vecs = []
    for coeffs in ns.vectors:
        acc = Mat.zeros(X.rows)
        for c, Y in zip(coeffs, mats):
            if c:
                acc = acc + Y.scale(c)
        vecs.append(acc)
    return nk.matrix_span(vecs, X.rows, Backend.RATIONAL)


def _is_so_lagrangian(h: SubspaceBasis, g: Mat, J: Mat, m: int) -> tuple[bool, Mat | None]:
    if h.dim != m * (m - 1) // 2:
        return False, None
    mats = h.matrices()
    comm = nk.commutant(mats, g.rows, Backend.RATIONAL)
    if mats and not all(J @ X == X @ J for X in mats):
        return False, None
    S = _lagrangian_certificate(mats, comm, g, J)
    if S is None:
        return False, None
    # so(m) is the full stabilizer of the splitting: dimension already matches, and h ⊆ u(m) ∩ {[S,·]=0}
    return True, S


def classify_subalgebra(h: SubspaceBasis, g: Mat, J: Mat | None = None) -> Classification:
    n = g.rows
    m = n // 2
    mats = h.matrices() if h.dim else []
    if h.backend is not Backend.RATIONAL:
        raise ValueError("classification works on exact rational algebras")
    comm = nk.commutant(mats, n, Backend.RATIONAL) if mats else None
    comm_dim = comm.dim if comm is not None else n * n
    sub_dims = invariant_subspace_dims(h, g) if mats else (n,)
    if h.dim == 0:
        return Classification(Label.TRIVIAL, Fingerprint(0, n * n, True, (n,)), J)

    Js = []
    if J is not None and all(J @ X == X @ J for X in mats):
        Js.append(J)
    Js += [K for K in nk.invariant_complex_structures(mats, g) if K.backend is Backend.RATIONAL]
    has_J = bool(Js)
    fp_base = dict(dim=h.dim, commutant_dim=comm_dim, has_invariant_J=has_J, invariant_subspace_dims=sub_dims)
    for K in Js:
        tf = all((K @ X).trace() == 0 for X in mats)
        if h.dim == m * m:
            return Classification(Label.U_M, Fingerprint(**fp_base, trace_free_on_J=tf), K)
        if h.dim == m * m - 1 and tf:
            return Classification(Label.SU_M, Fingerprint(**fp_base, trace_free_on_J=tf), K)
        ok, _ = _is_so_lagrangian(h, g, K, m)
        if ok:
            return Classification(Label.SO_M_LAGRANGIAN,
                                   Fingerprint(**fp_base, trace_free_on_J=tf, lagrangian_certificate=True), K)
        if h.dim == m * (m - 1) // 2 + 1 and h.contains(K):
            ok, _ = _is_so_lagrangian(_trace_orthogonal(h, K), g, K, m)
            if ok:
                return Classification(Label.SO_M_PLUS_U1,
                                      Fingerprint(**fp_base, trace_free_on_J=tf, lagrangian_certificate=True), K)
    tf = all((Js[0] @ X).trace() == 0 for X in mats) if Js else None
    return Classification(Label.OTHER, Fingerprint(**fp_base, trace_free_on_J=tf), Js[0] if Js else None)


def invariant_subspace_dims(h: SubspaceBasis, g: Mat) -> tuple[int, ...]:
    """Dimensions of irreducible blocks (then the common kernel); float route if exact splitting stalls."""
    try:
        dec = isotypic_decomposition(h, g)
        dims = sorted((b.space.dim for b in dec.blocks), reverse=True)
        return tuple(dims) + ((dec.kernel.dim,) if dec.kernel.dim else ())
    except SplitIncomplete:
        return _float_block_dims(h, g)


def _float_block_dims(h: SubspaceBasis, g: Mat) -> tuple[int, ...]:
    n = g.rows
    mats = [X.to_float() for X in h.matrices()]
    G = g.to_float()
    comm = nk.commutant(h.matrices(), n, Backend.RATIONAL).matrices()
    rng = np.random.default_rng(0)
    C = sum(rng.standard_normal() * M.to_float() for M in comm)
    Ginv = np.linalg.inv(G)
    S = (C + Ginv @ C.T @ G) / 2
    # g-self-adjoint: diagonalize via the Cholesky frame
    L = np.linalg.cholesky(G)
    Ssym = L.T @ S @ np.linalg.inv(L.T)
    vals = np.sort(np.linalg.eigvalsh((Ssym + Ssym.T) / 2))
    groups, start = [], 0
    for i in range(1, n + 1):
        if i == n or abs(vals[i] - vals[i - 1]) > 1e-8:
            groups.append(i - start)
            start = i
    kern = n - np.linalg.matrix_rank(np.vstack(mats), tol=1e-9) if mats else n
    dims = sorted(groups, reverse=True)
    return tuple(dims) + ((kern,) if kern else ())


def cayley_orthogonal(g: Mat, seed: int = 0, spread: int = 3) -> Mat:
    """A rational g-orthogonal matrix (I − A)^{-1}(I + A) from a random g-skew A."""
    rng = random.Random(seed)
    n = g.rows
    skew = nk.skew_subspace(g).matrices()
    A = Mat.zeros(n)
    for B in skew:
        A = A + B.scale(Fraction(rng.randint(-spread, spread), rng.randint(1, spread)))
    ident = Mat.identity(n)
    return nk.mat_inverse(ident - A) @ (ident + A)


def conjugate(h: SubspaceBasis, Q: Mat) -> SubspaceBasis:
    Qi = nk.mat_inverse(Q)
    return nk.matrix_span([Q @ X @ Qi for X in h.matrices()], Q.rows, h.backend)


# ---------------------------------------------------------------- invariant subspaces

@dataclass(frozen=True)
class Block:
    space: SubspaceBasis
    algebra: SubspaceBasis
    commutant_dim: int


@dataclass(frozen=True)
class Decomposition:
    kernel: SubspaceBasis
    blocks: tuple[Block, ...]


def _basis_matrix(V: SubspaceBasis) -> Mat:
    return Mat([[v[i] for v in V.vectors] for i in range(V.ambient)])


def _restrict(X: Mat, V: SubspaceBasis) -> Mat:
    """Matrix of X on the invariant subspace V in the basis V.vectors."""
    cols = [V.coordinates(X.apply(v)) for v in V.vectors]
    d = V.dim
    return Mat([[cols[j][i] for j in range(d)] for i in range(d)])


def _poly_of(coeffs, S: Mat) -> Mat:
    """Σ c_i S^i."""
    n = S.rows
    acc = Mat.zeros(n)
    P = Mat.identity(n)
    for c in coeffs:
        if c:
            acc = acc + P.scale(c)
        P = P @ S
    return acc


def _split_by(S: Mat) -> list[list[list[Fraction]]] | None:
    """Generalized eigenspaces ker f(S)^e for the distinct rational irreducible factors f."""
    cp = nk.char_poly(S)
    poly = flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in cp])
    _, facs = poly.factor()
    if len(facs) < 2:
        return None
    out = []
    for f, mult in facs:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in (f ** int(mult)).coeffs()]
        _, ker = nk.rank_nullspace(_poly_of(coeffs, S))
        out.append([list(v) for v in ker.vectors])
    return out


def _combo(mats: Sequence[Mat], rng: random.Random, d: int) -> Mat:
    return sum((S.scale(rng.randint(-4, 4)) for S in mats), Mat.zeros(d))


def isotypic_decomposition(h: SubspaceBasis, g: Mat | None = None, seed: int = 0,
                           attempts: int = 200) -> Decomposition:
    """Split R^n into the common kernel and h-irreducible blocks (exact arithmetic)."""
    mats = h.matrices() if h.dim else []
    n = h.shape[0] if h.shape else (g.rows if g is not None else 0)
    g = g if g is not None else Mat.identity(n)
    kernel = nk.common_kernel(mats, n, Backend.RATIONAL)
    # g-orthogonal complement of the kernel
    rows = [list((Mat([list(v)]) @ g).row(0)) for v in kernel.vectors]
    if rows:
        _, comp = nk.rank_nullspace(Mat(rows))
    else:
        comp = nk.span([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], n, Backend.RATIONAL)
    rng = random.Random(seed)
    pending = [comp] if comp.dim else []
    done: list[Block] = []
    while pending:
        V = pending.pop()
        hv = [_restrict(X, V) for X in mats]
        B = _basis_matrix(V)
        gv = B.T @ g @ B
        d = V.dim
        comm = nk.commutant(hv, d, Backend.RATIONAL) if hv else None
        cm = comm.matrices() if comm is not None else \
            [Mat.from_vector([Fraction(int(i == j)) for i in range(d * d)], d, d, Backend.RATIONAL)
             for j in range(d * d)]
        # self-adjoint part of the commutant
        sym = [C for C in ((C + nk.mat_inverse(gv) @ C.T @ gv).scale(Fraction(1, 2)) for C in cm)]
        sym_span = nk.matrix_span(sym, d, Backend.RATIONAL)
        ident = Mat.identity(d)
        non_scalar = [S for S in sym_span.matrices() if not nk.matrix_span([ident], d).contains(S)]
        if not non_scalar:
            alg = nk.matrix_span(hv, d, Backend.RATIONAL)
            done.append(Block(V, alg, len(cm)))
            continue
        # self-adjoint elements split orthogonally; any commutant element with a rational
        # factorization still yields invariant generalized eigenspaces
        pieces = _split_by(non_scalar[0])
        pools = (non_scalar, cm)
        for pool in pools:
            for _ in range(attempts // 2):
                if pieces:
                    break
                pieces = _split_by(_combo(pool, rng, d))
        if not pieces:
            raise SplitIncomplete("no rational splitting element found", Decomposition(kernel, tuple(done)))
        for coords in pieces:
            vecs = [[sum((c * v[i] for c, v in zip(cv, V.vectors)), Fraction(0)) for i in range(n)] for cv in coords]
            pending.append(nk.span(vecs, n, Backend.RATIONAL))
    done.sort(key=lambda b: (-b.space.dim, b.space.pivots))
    return Decomposition(kernel, tuple(done))


# ---------------------------------------------------------------- loops and transport

@dataclass(frozen=True)
class LoopPath:
    """Piecewise polynomial path; each segment maps [0,1] → R^n, coefficients lowest degree first."""

    segments: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        segs = tuple(tuple(tuple(Fraction(c) for c in comp) for comp in seg) for seg in self.segments)
        object.__setattr__(self, "segments", segs)
        for a, b in zip(segs, segs[1:]):
            if self._end(a) != self._start(b):
                raise ValueError("consecutive path segments do not meet")

    @staticmethod
    def _start(seg):
        return tuple(comp[0] for comp in seg)

    @staticmethod
    def _end(seg):
        return tuple(sum(comp, Fraction(0)) for comp in seg)

    @property
    def start(self):
        return self._start(self.segments[0])

    @property
    def end(self):
        return self._end(self.segments[-1])

    @property
    def closed(self) -> bool:
        return self.start == self.end

    @classmethod
    def polygon(cls, points: Sequence[Sequence]) -> "LoopPath":
        pts = [tuple(Fraction(x) for x in p) for p in points]
        segs = [tuple((a, b - a) for a, b in zip(p, q)) for p, q in zip(pts, pts[1:])]
        return cls(tuple(segs))

    @classmethod
    def coordinate_square(cls, base: Sequence, i: int, j: int, side, reverse: bool = False) -> "LoopPath":
        """Square base → base+side·e_i → +side·e_j → … → base (counter-clockwise in (x_i, x_j))."""
        b = [Fraction(x) for x in base]
        s = Fraction(side)

        def pt(di, dj):
            q = list(b)
            q[i] += di
            q[j] += dj
            return q
        pts = [pt(0, 0), pt(s, 0), pt(s, s), pt(0, s), pt(0, 0)]
        return cls.polygon(pts[::-1] if reverse else pts)

    def reversed(self) -> "LoopPath":
        segs = []
        for seg in reversed(self.segments):
            comps = []
            for comp in seg:
                # c(1 − t)
                poly = flint.fmpq_poly([flint.fmpq(x.numerator, x.denominator) for x in comp])
                rp = poly(flint.fmpq_poly([1, -1]))
                comps.append(tuple(Fraction(int(c.p), int(c.q)) for c in rp.coeffs()) or (Fraction(0),))
            segs.append(tuple(comps))
        return LoopPath(tuple(segs))


class _CompiledMatrices:
    """Float evaluation of a list of RatMat via a shared monomial table."""

    def __init__(self, mats: Sequence[RatMat]):
        self.count = len(mats)
        self.shape = (mats[0].rows, mats[0].cols) if mats else (0, 0)
        monos: dict[tuple, int] = {}
        num_entries, den_entries = [], []
        for M in mats:
            for r in range(M.rows):
                for c in range(M.cols):
                    f: RatFunc = M[r, c]
                    nt, dt = f.terms()
                    num_entries.append([(monos.setdefault(tuple(e), len(monos)), float(Fraction(int(q.p), int(q.q))))
                                        for e, q in nt])
                    den_entries.append([(monos.setdefault(tuple(e), len(monos)), float(Fraction(int(q.p), int(q.q))))
                                        for e, q in dt])
        self.exps = np.array(list(monos.keys()), dtype=float) if monos else np.zeros((0, 0))
        E = len(num_entries)
        self.Cn = np.zeros((E, len(monos)))
        self.Cd = np.zeros((E, len(monos)))
        for row, terms in enumerate(num_entries):
            for idx, c in terms:
                self.Cn[row, idx] += c
        for row, terms in enumerate(den_entries):
            for idx, c in terms:
                self.Cd[row, idx] += c

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if not len(self.exps):
            return np.zeros((self.count,) + self.shape)
        mono = np.prod(np.power(x[None, :], self.exps), axis=1)
        den = self.Cd @ mono
        if np.any(den == 0):
            raise PoleOnPathError(f"denominator vanishes at {x.tolist()}")
        return ((self.Cn @ mono) / den).reshape((self.count,) + self.shape)


def _segment_evaluators(seg):
    polys = [np.polynomial.Polynomial([float(c) for c in comp]) for comp in seg]
    derivs = [p.deriv() for p in polys]
    return (lambda t: np.array([p(t) for p in polys])), (lambda t: np.array([d(t) for d in derivs]))


@dataclass(frozen=True)
class TransportResult:
    matrix: np.ndarray
    steps: int
    orthogonality_defect: float


def parallel_transport(model: ContactModel, conn: FrameConnection, path: LoopPath, steps: int = 200,
                       horizontal_tol: float = 1e-12) -> TransportResult:
    """Transport matrix in frame components, classical RK4 with ``steps`` uniform steps per segment."""
    geo = model.geo
    k = geo.k
    mats = list(conn.Gamma) + [conn.Omega if conn.extended else RatMat.zeros(geo.ring, k)]
    comp = _CompiledMatrices(mats)
    finv = _CompiledMatrices([geo.Finv])
    Y = np.eye(k)

    def rhs(t, Y, pos, vel):
        x = pos(t)
        A = comp(x)
        v = finv(x)[0] @ vel(t)
        if not conn.extended and abs(v[k]) > horizontal_tol:
            raise ValueError("the bare partial connection only transports along horizontal paths")
        M = np.tensordot(v, A, axes=1)
        return -M @ Y

    for seg in path.segments:
        pos, vel = _segment_evaluators(seg)
        hstep = 1.0 / steps
        for i in range(steps):
            t = i * hstep
            k1 = rhs(t, Y, pos, vel)
            k2 = rhs(t + hstep / 2, Y + hstep / 2 * k1, pos, vel)
            k3 = rhs(t + hstep / 2, Y + hstep / 2 * k2, pos, vel)
            k4 = rhs(t + hstep, Y + hstep * k3, pos, vel)
            Y = Y + hstep / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    g_start = model.g.evaluate(path.start).to_float()
    g_end = model.g.evaluate(path.end).to_float()
    defect = float(np.max(np.abs(Y.T @ g_end @ Y - g_start)))
    return TransportResult(Y, steps, defect)


def curvature_on_coordinates(model: ContactModel, conn: FrameConnection, i: int, j: int, p=None) -> Mat:
    """R^N(∂_i, ∂_j) at p, expanding the coordinate fields in the frame."""
    geo = model.geo
    p = p if p is not None else model.base_point
    Finv = geo.Finv.evaluate(p)
    ci, cj = Finv.col(i), Finv.col(j)
    k = geo.k
    Rh = [[conn.R_hor[a][b].evaluate(p) for b in range(k)] for a in range(k)]
    Rx = [M.evaluate(p) for M in conn.R_xi] if conn.extended else None
    acc = Mat.zeros(k)
    for a in range(k + 1):
        for b in range(k + 1):
            c = ci[a] * cj[b]
            if not c or a == b:
                continue
            if a < k and b < k:
                acc = acc + Rh[a][b].scale(c)
            elif a == k:
                acc = acc + Rx[b].scale(c)
            else:
                acc = acc - Rx[a].scale(c)
    return acc


@dataclass(frozen=True)
class ThetaTransport:
    exact_integral: Fraction | None
    quadrature_integral: float
    factor: float
    quadrature_factor: float


def _pullback_poly(model: ContactModel, seg) -> flint.fmpq_poly | None:
    """θ(c(t))·c'(t) as an exact polynomial in t, or None if θ is not polynomial."""
    cs = [flint.fmpq_poly([flint.fmpq(x.numerator, x.denominator) for x in comp]) for comp in seg]
    total = flint.fmpq_poly([])
    for i, coeff in enumerate(model.theta.comps):
        if coeff.is_zero():
            continue
        if not coeff.is_polynomial():
            return None
        nt, dt = coeff.terms()
        (_, dq), = dt
        poly = flint.fmpq_poly([])
        for exps, q in nt:
            term = flint.fmpq_poly([q])
            for c, e in zip(cs, exps):
                if e:
                    term = term * c ** e
            poly = poly + term
        poly = poly / dq
        total = total + poly * cs[i].derivative()
    return total


def theta_transport(model: ContactModel, path: LoopPath, order: int = 10) -> ThetaTransport:
    """exp(−∮θ) along a closed path: exact route when θ is polynomial, Gauss–Legendre route always."""
    if not path.closed:
        raise ValueError("θ-transport needs a closed path")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    ts, ws = (nodes + 1) / 2, weights / 2
    quad = 0.0
    exact: Fraction | None = Fraction(0)
    for seg in path.segments:
        pos, vel = _segment_evaluators(seg)
        for t, w in zip(ts, ws):
            x, v = pos(t), vel(t)
            quad += w * sum(c.evaluate_float(x) * vi for c, vi in zip(model.theta.comps, v) if vi and not c.is_zero())
        if exact is not None:
            poly = _pullback_poly(model, seg)
            if poly is None:
                exact = None
            else:
                prim = poly.integral()
                val = prim(1) - prim(0)
                exact += Fraction(int(val.p), int(val.q))
    factor = math.exp(-float(exact)) if exact is not None else math.exp(-quad)
    return ThetaTransport(exact, float(quad), factor, math.exp(-quad))


# ---------------------------------------------------------------- dichotomy

@dataclass(frozen=True)
class DichotomyReport:
    codazzi: bool
    horizontal: HolonomyReport
    adapted: HolonomyReport
    difference: int
    note: str = ""


def dichotomy_report(model: ContactModel, depth: int = 2, horizontal: HolonomyReport | None = None,
                     adapted: HolonomyReport | None = None, codazzi: bool | None = None) -> DichotomyReport:
    hor = horizontal or infinitesimal_holonomy(model, schouten_connection(model), Mode.HORIZONTAL, depth)
    ad = adapted or infinitesimal_holonomy(model, adapted_connection(model), Mode.FULL, depth)
    cod = is_codazzi(model) if codazzi is None else codazzi
    d = ad.dim - hor.dim
    note = ""
    if not ad.algebra.contains_subspace(hor.algebra):
        raise TheoremViolation("horizontal holonomy is not contained in the adapted holonomy")
    if cod and d not in (0, 1):
        raise TheoremViolation(f"Codazzi model with dim hol(∇^τ) − dim hol(∇) = {d}")
    if not cod:
        try:
            dec = isotypic_decomposition(ad.algebra, model.g.evaluate(model.base_point))
            if len(dec.blocks) == 1 and dec.kernel.dim == 0:
                note = "adapted holonomy irreducible; candidates include sp(k) ⊕ u(1) type algebras"
        except SplitIncomplete:
            note = "isotypic splitting incomplete"
    return DichotomyReport(cod, hor, ad, d, note)
