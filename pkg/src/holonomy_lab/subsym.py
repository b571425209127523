"""Sub-symmetric quadruples (g, s, k, B), their holonomy pairs and the model zoo.

Every quadruple stores its Lie algebra on an ordered basis ``p ⊕ k ⊕ ξ``:
indices ``0..2m-1`` span p, the next ``dim k`` span k, and the last index is ξ.
The involution s is −1 on p and +1 on h = k ⊕ ⟨ξ⟩.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Sequence

from . import numkit as nk
from .holonomy import Classification, Label, classify_subalgebra
from .liealg import (JacobiError, LieAlgebraTable, LieFingerprint, ZooMatch, jacobi_check,
                     killing_fingerprint, match_zoo)
from .numkit import Backend, Mat, SubspaceBasis


class SubsymError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


F0 = Fraction(0)


# ---------------------------------------------------------------- quadruples

@dataclass(frozen=True, eq=False)
class SubSymQuadruple:
    L: LieAlgebraTable
    m: int
    dim_k: int
    B: Mat
    name: str = ""

    @property
    def dim_p(self) -> int:
        return 2 * self.m

    @property
    def xi_index(self) -> int:
        return self.L.dim - 1

    @property
    def p_indices(self) -> range:
        return range(self.dim_p)

    @property
    def k_indices(self) -> range:
        return range(self.dim_p, self.dim_p + self.dim_k)

    @property
    def h_indices(self) -> range:
        return range(self.dim_p, self.L.dim)

    @property
    def s(self) -> Mat:
        d = self.L.dim
        return Mat([[Fraction(-1 if i < self.dim_p else 1) if i == j else F0 for j in range(d)] for i in range(d)])

    @property
    def k_basis(self) -> list[tuple]:
        return [self.L.basis_vector(i) for i in self.k_indices]

    def action_on_p(self, i: int) -> Mat:
        """Matrix of ad(e_i) restricted to p (i in h)."""
        P = self.dim_p
        return Mat([[self.L.C[i][j][r] for j in range(P)] for r in range(P)])

    def theta(self) -> Mat:
        """Θ(X,Y): ξ-component of [X,Y] for X, Y in p."""
        P, x = self.dim_p, self.xi_index
        return Mat([[self.L.C[i][j][x] for j in range(P)] for i in range(P)])


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    witness: str = ""


@dataclass(frozen=True)
class QuadrupleReport:
    checks: tuple[Check, ...]
    transvection: bool
    sub_torsion_free: bool

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def _largest_ideal_inside(L: LieAlgebraTable, sub: SubspaceBasis) -> SubspaceBasis:
    cur = sub
    while cur.dim:
        # keep x in cur with [e_j, x] in cur for every basis e_j
        rows = []
        basis = cur.vectors
        for j in range(L.dim):
            ej = L.basis_vector(j)
            imgs = [L.bracket(ej, v) for v in basis]
            # condition: Σ c_b [e_j, v_b] ∈ cur  ⇔  reduce(Σ c_b [e_j,v_b]) = 0
            reds = [cur.reduce(im) for im in imgs]
            for r in range(L.dim):
                rows.append([red[r] for red in reds])
        _, ns = nk.rank_nullspace(Mat(rows))
        vecs = [[sum((c * v[i] for c, v in zip(co, basis)), F0) for i in range(L.dim)] for co in ns.vectors]
        nxt = nk.span(vecs, L.dim, Backend.RATIONAL)
        if nxt.dim == cur.dim:
            return cur
        cur = nxt
    return cur


def validate_quadruple(q: SubSymQuadruple) -> QuadrupleReport:
    L, P = q.L, q.dim_p
    checks = []
    p_set, h_set = set(q.p_indices), set(q.h_indices)

    def in_part(vec, part):
        return all(not c for i, c in enumerate(vec) if i not in part)

    # s automorphism ⇔ grading rules
    bad = None
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            both_p = i in p_set and j in p_set
            mixed = (i in p_set) != (j in p_set)
            target = h_set if both_p else (p_set if mixed else h_set)
            if not in_part(L.C[i][j], target):
                bad = (i, j)
                break
        if bad:
            break
    checks.append(Check("involution_is_automorphism", bad is None, f"[e{bad[0]}, e{bad[1]}]" if bad else ""))
    # k subalgebra
    kset = set(q.k_indices)
    badk = next(((a, b) for a in q.k_indices for b in q.k_indices if a < b and not in_part(L.C[a][b], kset)), None)
    checks.append(Check("k_is_subalgebra", badk is None, f"[k{badk[0]}, k{badk[1]}]" if badk else ""))
    # effectiveness
    ksp = nk.span(q.k_basis, L.dim, Backend.RATIONAL) if q.dim_k else nk.span([], L.dim, Backend.RATIONAL)
    ideal = _largest_ideal_inside(L, ksp) if q.dim_k else ksp
    checks.append(Check("k_contains_no_ideal", ideal.dim == 0, f"ideal of dim {ideal.dim}" if ideal.dim else ""))
    # B symmetric positive definite and ad_k invariant
    checks.append(Check("B_positive_definite", q.B == q.B.T and nk.is_positive_definite(q.B)))
    badB = None
    for a in q.k_indices:
        A = q.action_on_p(a)
        M = q.B @ A
        if not (M + M.T).is_zero():
            badB = a
            break
    checks.append(Check("B_ad_k_invariant", badB is None, f"k index {badB}" if badB is not None else ""))
    Th = q.theta()
    checks.append(Check("theta_nontrivial", not Th.is_zero()))
    checks.append(Check("jacobi", jacobi_check(L) == 0))
    # transvection: [p,p] spans h
    pp = nk.span([L.C[i][j] for i in range(P) for j in range(i + 1, P)], L.dim, Backend.RATIONAL)
    transvection = pp.dim == len(h_set)
    Mx = q.B @ q.action_on_p(q.xi_index)
    return QuadrupleReport(tuple(checks), transvection, (Mx + Mx.T).is_zero())


def _table_on_layout(L: LieAlgebraTable, p_vecs, k_vecs, xi_vec) -> LieAlgebraTable:
    vecs = list(p_vecs) + list(k_vecs) + [xi_vec]
    P = Mat([[v[i] for v in vecs] for i in range(L.dim)]) if len(vecs) == L.dim else None
    if P is not None:
        return L.change_basis(P)
    sp = nk.span(vecs, L.dim, Backend.RATIONAL)
    M = Mat([sp.coordinates(v) for v in vecs]).T
    Minv = nk.mat_inverse(M)
    C = {}
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            C[(i, j)] = list(Minv.apply(sp.coordinates(L.bracket(vecs[i], vecs[j]))))
    return LieAlgebraTable(len(vecs), C)


def transvection_restrict(q: SubSymQuadruple) -> SubSymQuadruple:
    """Restrict to p ⊕ ĥ with ĥ = [p, p]."""
    rep = validate_quadruple(q)
    if not rep.ok:
        raise SubsymError("INVALID_INPUT", f"quadruple fails {[c.name for c in rep.failures()]}")
    if rep.transvection:
        return q
    L, P = q.L, q.dim_p
    hhat = nk.span([L.C[i][j] for i in range(P) for j in range(i + 1, P)], L.dim, Backend.RATIONAL)
    ksp = nk.span(q.k_basis, L.dim, Backend.RATIONAL)
    khat = hhat.intersect(ksp)
    # ξ̂: an element of ĥ outside k̂ with ξ-coordinate 1
    xi = q.xi_index
    xi_hat = next(v for v in hhat.vectors if v[xi])
    xi_hat = tuple(c / xi_hat[xi] for c in xi_hat)
    p_vecs = [L.basis_vector(i) for i in range(P)]
    T = _table_on_layout(L, p_vecs, khat.vectors, xi_hat)
    out = SubSymQuadruple(T, q.m, khat.dim, q.B, q.name + "/transvection")
    rep2 = validate_quadruple(out)
    if not rep2.ok:
        raise SubsymError("INVALID_INPUT", "restricted quadruple fails validation")
    return out


def from_local_data(dim_p: int, R_W: Callable[[int, int], Mat], Theta: Mat, N_W: Mat,
                    k_span: Sequence[Mat], B: Mat | None = None, name: str = "") -> SubSymQuadruple:
    """Lie algebra on p ⊕ k ⊕ ⟨ξ⟩ with [X,Y] = −R^W(X,Y) + Θ(X,Y)ξ, [ξ,X] = N^W X, [A,X] = AX."""
    if dim_p % 2:
        raise SubsymError("INVALID_INPUT", "dim p must be even")
    if nk.determinant(Theta) == 0:
        raise SubsymError("DEGENERATE_THETA", "Θ must be nondegenerate")
    P = dim_p
    kb = nk.matrix_span(list(k_span), P, Backend.RATIONAL) if k_span else None
    kmats = list(k_span)
    dk = len(kmats)
    if kb is not None and kb.dim != dk:
        raise SubsymError("INVALID_INPUT", "k_span matrices are linearly dependent")
    # coordinates of a matrix in the given k basis
    if dk:
        Kc = Mat([kb.coordinates(A) for A in kmats]).T
        Kinv = nk.mat_inverse(Kc)

    def kcoords(M: Mat, what: str) -> list:
        if M.is_zero():
            return [F0] * dk
        if not dk or not kb.contains(M):
            raise SubsymError("INVALID_INPUT", f"{what} does not lie in k")
        return list(Kinv.apply(kb.coordinates(M)))

    D = P + dk + 1
    xi = D - 1
    C: dict = {}
    for i in range(P):
        for j in range(i + 1, P):
            vec = [F0] * D
            kc = kcoords(R_W(i, j), f"R_W({i},{j})")
            for a, c in enumerate(kc):
                vec[P + a] = -c
            vec[xi] = Fraction(Theta[i, j])
            C[(i, j)] = vec
    for a, A in enumerate(kmats):
        for j in range(P):
            vec = [F0] * D
            for r in range(P):
                vec[r] = A[r, j]
            C[(P + a, j)] = vec
        for b in range(a + 1, dk):
            vec = [F0] * D
            for c_, c in enumerate(kcoords(nk.commutator(A, kmats[b]), "[k,k]")):
                vec[P + c_] = c
            C[(P + a, P + b)] = vec
        # [ξ, k_a] = [N_W, k_a] must lie in k
        vec = [F0] * D
        for c_, c in enumerate(kcoords(nk.commutator(N_W, A), "[N_W, k]")):
            vec[P + c_] = c
        C[(xi, P + a)] = vec
    for j in range(P):
        vec = [F0] * D
        for r in range(P):
            vec[r] = N_W[r, j]
        C[(xi, j)] = vec
    L = LieAlgebraTable(D, C, check=False)
    if jacobi_check(L) != 0:
        raise SubsymError("JACOBI_FAIL", f"Jacobi identity fails at {_jacobi_witness(L)}")
    q = SubSymQuadruple(L, P // 2, dk, B if B is not None else Mat.identity(P), name)
    rep = validate_quadruple(q)
    if not rep.ok:
        raise SubsymError("VALIDATION_FAIL", f"{[(c.name, c.witness) for c in rep.failures()]}")
    return q


def _jacobi_witness(L: LieAlgebraTable):
    d = L.dim
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                ei, ej, ek = L.basis_vector(i), L.basis_vector(j), L.basis_vector(k)
                s = [a + b + c for a, b, c in zip(L.bracket(L.C[i][j], ek), L.bracket(L.C[j][k], ei),
                                                  L.bracket(L.C[k][i], ej))]
                if any(s):
                    return (i, j, k)
    return None


# ---------------------------------------------------------------- holonomy pair

@dataclass(frozen=True)
class HolonomyPair:
    horizontal: SubspaceBasis
    adapted: SubspaceBasis
    tau_star: Mat
    A_xi: Mat
    ad_xi: Mat
    horizontal_class: Classification
    adapted_class: Classification

    @property
    def dims(self) -> tuple[int, int]:
        return self.horizontal.dim, self.adapted.dim


def holonomy_pair(q: SubSymQuadruple) -> HolonomyPair:
    P = q.dim_p
    B = q.B
    Binv = nk.mat_inverse(B)
    ad_k = [q.action_on_p(a) for a in q.k_indices]
    ad_xi = q.action_on_p(q.xi_index)
    M = B @ ad_xi
    tau_star_form = (M + M.T).scale(Fraction(-1, 2))
    tau_star = Binv @ tau_star_form
    A_xi = ad_xi + tau_star
    hor = nk.matrix_span(ad_k, P, Backend.RATIONAL)
    ad = nk.matrix_span(ad_k + [A_xi], P, Backend.RATIONAL)
    d = ad.dim - hor.dim
    if d not in (0, 1):
        raise SubsymError("THEOREM_VIOLATION", f"holonomy dimensions differ by {d}")
    return HolonomyPair(hor, ad, tau_star, A_xi, ad_xi, classify_subalgebra(hor, B), classify_subalgebra(ad, B))


def adapted_curvature(q: SubSymQuadruple, pair: HolonomyPair | None = None) -> list[list[Mat]]:
    """R^τ(X,Y) = −ad([X,Y])|_p + Θ(X,Y)τ on basis pairs of p, with τ = −τ*."""
    P, L = q.dim_p, q.L
    pair = pair or holonomy_pair(q)
    tau = -pair.tau_star
    Th = q.theta()
    out = [[Mat.zeros(P)] * P for _ in range(P)]
    for i in range(P):
        for j in range(P):
            if i == j:
                continue
            br = L.C[i][j]
            acc = Mat.zeros(P)
            for h in q.h_indices:
                if br[h]:
                    acc = acc - q.action_on_p(h).scale(br[h])
            out[i][j] = acc + tau.scale(Th[i, j])
    return out


def scalar_curvature(q: SubSymQuadruple, pair: HolonomyPair | None = None) -> Fraction:
    """Trace of Ric(X,Y) = tr(Z ↦ R^τ(Z,X)Y) with respect to B."""
    R = adapted_curvature(q, pair)
    P = q.dim_p
    Binv = nk.mat_inverse(q.B)
    ric = [[sum((R[j][a][j, b] for j in range(P)), F0) for b in range(P)] for a in range(P)]
    return sum((Binv[a, b] * ric[a][b] for a in range(P) for b in range(P)), F0)


# ---------------------------------------------------------------- zoo

@dataclass(frozen=True)
class ZooResult:
    kind: str
    params: dict
    quadruple: SubSymQuadruple
    report: QuadrupleReport
    pair: HolonomyPair
    fingerprint: LieFingerprint
    match: ZooMatch
    scal_tau: Fraction
    row_id: str
    expected_label: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def tau_star(self) -> Mat:
        return self.pair.tau_star

    @property
    def A_xi(self) -> Mat:
        return self.pair.A_xi

    @property
    def tau_zero(self) -> bool:
        return self.pair.tau_star.is_zero()


def _E(n, i, j) -> list[list[Fraction]]:
    M = [[F0] * n for _ in range(n)]
    M[i][j] = Fraction(1)
    return M


def _wedge_rm(m: int, i: int, j: int) -> Mat:
    """e_i∧e_j on R^m: e_i ↦ e_j, e_j ↦ −e_i."""
    M = [[F0] * m for _ in range(m)]
    M[j][i] = Fraction(1)
    M[i][j] = Fraction(-1)
    return Mat(M)


def _diag2(A: Mat) -> Mat:
    Z = Mat.zeros(A.rows)
    return Mat.block([[A, Z], [Z, A]])


def standard_theta(m: int) -> Mat:
    Z, I = Mat.zeros(m), Mat.identity(m)
    return Mat.block([[Z, I], [-I, Z]])


def heisenberg_quadruple(m: int) -> SubSymQuadruple:
    P = 2 * m
    return from_local_data(P, lambda i, j: Mat.zeros(P), standard_theta(m), Mat.zeros(P), [], name=f"heisenberg({m})")


def heisenberg_with_rotation(m: int) -> SubSymQuadruple:
    """Heisenberg quadruple with the complex structure adjoined to k (not a transvection quadruple)."""
    P = 2 * m
    J = standard_theta(m).T  # J X_i = Y_i
    return from_local_data(P, lambda i, j: Mat.zeros(P), standard_theta(m), Mat.zeros(P), [J],
                           name=f"heisenberg({m})+J")


def torsion_family_data(m: int, lam, mu):
    lam, mu = Fraction(lam), Fraction(mu)
    P = 2 * m
    I, Z = Mat.identity(m), Mat.zeros(m)
    N_W = Mat.block([[I.scale(lam), I.scale(-mu)], [I.scale(mu), I.scale(-lam)]])
    k_span = [_diag2(_wedge_rm(m, i, j)) for i in range(m) for j in range(i + 1, m)]

    def R_W(a: int, b: int) -> Mat:
        ia, fa = a % m, a // m
        ib, fb = b % m, b // m
        if ia == ib:
            return Mat.zeros(P)
        w = _diag2(_wedge_rm(m, ia, ib))
        return w.scale(-mu) if fa == fb else w.scale(lam)
    return R_W, standard_theta(m), N_W, k_span


def torsion_family(m: int, lam, mu) -> SubSymQuadruple:
    if Fraction(lam) <= 0:
        raise SubsymError("PARAM_DOMAIN", "λ must be positive")
    if m < 2:
        raise SubsymError("PARAM_DOMAIN", "m must be at least 2")
    R_W, Th, N_W, ks = torsion_family_data(m, lam, mu)
    return from_local_data(2 * m, R_W, Th, N_W, ks, name=f"torsion_family({m},{lam},{mu})")


def torsion_family_expected(lam, mu) -> str:
    lam, mu = Fraction(lam), Fraction(mu)
    if mu == 0:
        return "SO_1_M_PLUS_1"
    if mu == lam:
        return "EUCLIDEAN_MOTION"
    if mu == -lam:
        return "LORENTZ_MOTION"
    if abs(mu) < lam:
        return "SO_1_M_PLUS_1"
    return "SO_M_PLUS_2" if mu > 0 else "SO_2_M"


@dataclass(frozen=True)
class HRSSFactor:
    """Real matrix realization of a Hermitian symmetric pair f = h ⊕ p with u(1)-center z of h."""

    p_mats: tuple[Mat, ...]
    h_mats: tuple[Mat, ...]
    center: Mat


def _complex_to_real(re: list[list[Fraction]], im: list[list[Fraction]]) -> Mat:
    n = len(re)
    out = [[F0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = re[i][j]
            out[n + i][n + j] = re[i][j]
            out[i][n + j] = -im[i][j]
            out[n + i][j] = im[i][j]
    return Mat(out)


def cpn_factor(m: int) -> HRSSFactor:
    """su(m+1) = s(u(m) ⊕ u(1)) ⊕ C^m."""
    n = m + 1
    zero = [[F0] * n for _ in range(n)]

    def add(a, b, s=1):
        return [[x + s * y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]
    p = []
    for j in range(m):
        # real and imaginary directions of the last row/column
        p.append(_complex_to_real(add(_E(n, j, m), _E(n, m, j), -1), zero))
    for j in range(m):
        p.append(_complex_to_real(zero, add(_E(n, j, m), _E(n, m, j))))
    h = []
    for i in range(m):
        for j in range(i + 1, m):
            h.append(_complex_to_real(add(_E(n, i, j), _E(n, j, i), -1), zero))
            h.append(_complex_to_real(zero, add(_E(n, i, j), _E(n, j, i))))
    for i in range(m - 1):
        h.append(_complex_to_real(zero, add(_E(n, i, i), _E(n, i + 1, i + 1), -1)))
    z = [[F0] * n for _ in range(n)]
    for i in range(m):
        z[i][i] = Fraction(1)
    z[m][m] = Fraction(-m)
    center = _complex_to_real(zero, z)
    h.append(center)
    return HRSSFactor(tuple(p), tuple(h), center)


def _block_diag(mats: Sequence[Mat]) -> Mat:
    n = sum(M.rows for M in mats)
    out = [[F0] * n for _ in range(n)]
    off = 0
    for M in mats:
        for i in range(M.rows):
            for j in range(M.cols):
                out[off + i][off + j] = M[i, j]
        off += M.rows
    return Mat(out)


def hrss_circle(factors: Sequence[HRSSFactor], weights: Sequence | None = None, name: str = "") -> SubSymQuadruple:
    """S¹-bundle over a product of HRSS: k is the kernel of Σ w_i·(z_i-coefficient) on h."""
    weights = [Fraction(1)] * len(factors) if weights is None else [Fraction(w) for w in weights]
    if any(w == 0 for w in weights):
        raise SubsymError("PARAM_DOMAIN", "weights must be nonzero")
    sizes = [f.center.rows for f in factors]

    def embed(idx: int, M: Mat) -> Mat:
        return _block_diag([M if i == idx else Mat.zeros(s) for i, s in enumerate(sizes)])
    p = [embed(i, X) for i, f in enumerate(factors) for X in f.p_mats]
    h_all = [embed(i, X) for i, f in enumerate(factors) for X in f.h_mats]
    zs = [embed(i, f.center) for i, f in enumerate(factors)]
    hsp = nk.matrix_span(h_all)
    # functional: weighted z-coefficients; decompose h = [h,h] ⊕ span(z_i)
    semis = nk.matrix_span([nk.commutator(a, b) for a in h_all for b in h_all if a is not b] or [],
                           h_all[0].rows, Backend.RATIONAL)
    comp = nk.span(list(semis.vectors) + [z.vector() for z in zs], hsp.ambient, Backend.RATIONAL)
    if comp.dim != hsp.dim:
        raise SubsymError("INVALID_INPUT", "h must be [h,h] plus the given centers")
    basis = list(semis.matrices()) + zs
    Bm = Mat([comp.coordinates(X) for X in basis]).T
    Binv = nk.mat_inverse(Bm)

    def phi(X: Mat) -> Fraction:
        c = Binv.apply(comp.coordinates(X))
        return sum((w * c[semis.dim + i] for i, w in enumerate(weights)), F0)
    xi = sum((z.scale(Fraction(1, len(zs)) / weights[i]) for i, z in enumerate(zs)), Mat.zeros(zs[0].rows))
    xi = xi.scale(1 / phi(xi))
    k = [X - xi.scale(phi(X)) for X in hsp.matrices()]
    ksp = nk.matrix_span([X for X in k if not X.is_zero()], xi.rows, Backend.RATIONAL)
    L = LieAlgebraTable.from_matrices(p + ksp.matrices() + [xi])
    P = len(p)
    # B = −¼ tr on p (positive on the compact-type realizations used here)
    Bp = Mat([[-(X @ Y).trace() / 4 for Y in p] for X in p])
    q = SubSymQuadruple(L, P // 2, ksp.dim, Bp, name or "hrss_circle")
    rep = validate_quadruple(q)
    if not rep.ok:
        raise SubsymError("VALIDATION_FAIL", f"{[(c.name, c.witness) for c in rep.failures()]}")
    return q


def cpn_sphere(m: int) -> SubSymQuadruple:
    return hrss_circle([cpn_factor(m)], name=f"cpn_sphere({m})")


def _finish(kind: str, params: dict, q: SubSymQuadruple, row_id: str, expected: str | None = None,
            extra: dict | None = None) -> ZooResult:
    rep = validate_quadruple(q)
    if not rep.ok:
        raise SubsymError("VALIDATION_FAIL", f"{[(c.name, c.witness) for c in rep.failures()]}")
    pair = holonomy_pair(q)
    fp = killing_fingerprint(q.L)
    return ZooResult(kind, params, q, rep, pair, fp, match_zoo(fp, q.m), scalar_curvature(q, pair), row_id, expected,
                     extra or {})


def zoo(kind: str, **params) -> ZooResult:
    kind = kind.upper().replace("-", "_")
    if kind == "HEISENBERG":
        m = int(params.get("m", 3))
        return _finish(kind, {"m": m}, heisenberg_quadruple(m), "heisenberg", "HEISENBERG")
    if kind == "TORSION_FAMILY":
        m = int(params.get("m", 3))
        lam, mu = Fraction(params["lam"]), Fraction(params["mu"])
        q = torsion_family(m, lam, mu)
        row = "so_quotient_scal_zero" if mu == 0 else "so_quotients_tau_nonzero"
        extra = {"expected_scal_tau": 2 * mu * m * m}
        return _finish(kind, {"m": m, "lambda": str(lam), "mu": str(mu)}, q, row,
                       torsion_family_expected(lam, mu), extra)
    if kind == "CPN_SPHERE":
        m = int(params.get("m", 3))
        q = cpn_sphere(m)
        return _finish(kind, {"m": m}, q, "circle_bundle_hrss", None, {"hol_base": hol_of_base(q)})
    if kind == "HRSS_CIRCLE":
        q = hrss_circle(params["factors"], params.get("weights"))
        return _finish(kind, {"factors": len(params["factors"])}, q, "circle_bundle_hrss", None,
                       {"hol_base": hol_of_base(q)})
    raise SubsymError("INVALID_INPUT", f"unknown zoo kind {kind!r}")


def hol_of_base(q: SubSymQuadruple) -> SubspaceBasis:
    """ad_h on p: holonomy of the base HRSS."""
    return nk.matrix_span([q.action_on_p(i) for i in q.h_indices], q.dim_p, Backend.RATIONAL)


# ---------------------------------------------------------------- reference table

def load_table1() -> dict:
    return json.loads(resources.files("holonomy_lab").joinpath("corpus/table1.json").read_text())


@dataclass(frozen=True)
class TableRow:
    row_id: str
    source: str
    tau: str
    space: str
    hol_horizontal: str
    hol_adapted: str
    dims: tuple[int, int]
    matches: bool
    diff: str = ""

    def as_dict(self) -> dict:
        return {"row": self.row_id, "source": self.source, "tau": self.tau, "space": self.space,
                "hol_horizontal": self.hol_horizontal, "hol_adapted": self.hol_adapted,
                "dims": list(self.dims), "matches": self.matches, "diff": self.diff}


class TableMismatch(AssertionError):
    code = "MISMATCH"


def _row_labels(r: ZooResult) -> tuple[str, str]:
    if r.row_id == "circle_bundle_hrss":
        base = r.extra["hol_base"]
        hor = "hol(N)/t" if (base.contains_subspace(r.pair.horizontal) and base.dim - r.pair.horizontal.dim == 1) \
            else r.pair.horizontal_class.label.value
        ad = "hol(N)" if (base.contains_subspace(r.pair.adapted) and r.pair.adapted.contains_subspace(base)) \
            else r.pair.adapted_class.label.value
        return hor, ad
    return r.pair.horizontal_class.label.value, r.pair.adapted_class.label.value


def table1_report(results: Sequence[ZooResult], strict: bool = False) -> list[TableRow]:
    fixture = {row["id"]: row for row in load_table1()["rows"]}
    rows = []
    for r in results:
        exp = fixture[r.row_id]
        hor, ad = _row_labels(r)
        tau = "zero" if r.tau_zero else "nonzero"
        diffs = []
        if tau != exp["tau"]:
            diffs.append(f"tau {tau} != {exp['tau']}")
        if hor != exp["hol_horizontal"]:
            diffs.append(f"hol(∇) {hor} != {exp['hol_horizontal']}")
        if ad != exp["hol_adapted"]:
            diffs.append(f"hol(∇^τ) {ad} != {exp['hol_adapted']}")
        space = r.match.label if r.kind == "TORSION_FAMILY" else exp["space"]
        if r.kind == "TORSION_FAMILY":
            if space not in exp["spaces"]:
                diffs.append(f"space {space} not in {exp['spaces']}")
            if r.scal_tau != r.extra["expected_scal_tau"]:
                diffs.append(f"scal {r.scal_tau} != {r.extra['expected_scal_tau']}")
        row = TableRow(r.row_id, f"{r.kind}{tuple(r.params.values())}", tau, space, hor, ad, r.pair.dims,
                       not diffs, "; ".join(diffs))
        rows.append(row)
    if strict and any(not row.matches for row in rows):
        raise TableMismatch("; ".join(f"{row.row_id}: {row.diff}" for row in rows if not row.matches))
    return rows
