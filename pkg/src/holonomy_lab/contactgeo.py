"""Contact sub-Riemannian structures on coordinate patches, computed in a horizontal frame.

Conventions
-----------
* ``dθ(X,Y) = Xθ(Y) − Yθ(X) − θ([X,Y])`` (no factor 1/2).
* Frame matrices act on column vectors of frame coefficients: ``M[f][c]`` is the
  ``E_f``-coefficient of ``M(E_c)``.
* ``Γ_a[f][c]`` is the ``E_f``-coefficient of ``∇_{E_a} E_c``.
* ``L[f][c]`` is the ``E_f``-coefficient of ``[ξ, E_c]``.
* Bivectors are antisymmetric coefficient matrices ``β^{ab}``; ``R(β) = Σ β^{ab} R(E_a,E_b)``
  and ``⟨ω, β⟩ = Σ ω(E_a,E_b) β^{ab}``.  The inverse of dθ is ``2·W^{-1}``.
* τ as an endomorphism is ``g^{-1}·τ_low``.
* ``(X∧Y)(Z) = g(X,Z)Y − g(Y,Z)X``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

from . import numkit as nk
from .numkit import Backend, Mat
from .polycalc import (DegreeOverflowError, OneForm, PoleAtPointError, RatFunc, RatMat, Ring,
                       VectorField, combine, exterior_d, lie_derivative, ratmat_det, ratmat_inverse,
                       vf_bracket)

PROVED = "PROVED"
SAMPLED = "SAMPLED"
FAILED = "FAILED"
UNDECIDED = "UNDECIDED"

CONVENTIONS = {
    "dtheta": "dθ(X,Y) = Xθ(Y) − Yθ(X) − θ([X,Y])",
    "bivector_pairing": "⟨ω,β⟩ = Σ_ab ω(E_a,E_b) β^ab ; dθ^{-1} = 2·W^{-1} ; R(X∧Y) = 2R(X,Y)",
    "wedge_endomorphism": "(X∧Y)(Z) = g(X,Z)Y − g(Y,Z)X",
    "tau_index": "τ^a_b = g^{ac} τ_cb",
    "clifford_sign": "γ(v)² = −|v|²",
    "spin_action": "ρ(e_a∧e_b) = ¼[γ_a,γ_b]; Kähler form acts by Σ_k γ(e_k)γ(Je_k) = 2ρ(J)",
    "ricci_trace": "Ric(X,Y) = tr(Z ↦ R(Z,X)Y)",
}


class ModelValidationError(ValueError):
    def __init__(self, code: str, message: str, path: str = ""):
        super().__init__(f"{code}: {message}" + (f" (at {path})" if path else ""))
        self.code = code
        self.path = path


class NotContactError(ModelValidationError):
    def __init__(self, message: str):
        super().__init__("NOT_CONTACT", message, "theta")


class NotAlmostComplexError(ModelValidationError):
    def __init__(self, message: str):
        super().__init__("NOT_ALMOST_COMPLEX", message, "J")


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    status: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status in (PROVED, SAMPLED)


# ---------------------------------------------------------------- the model

@dataclass(frozen=True, eq=False)
class ContactModel:
    """Contact form, horizontal frame and frame metric on a coordinate patch."""

    ring: Ring
    theta: OneForm
    frame: tuple[VectorField, ...]
    g: RatMat
    J: RatMat | None = None
    base_point: tuple[Fraction, ...] = ()
    name: str = "model"
    note: str = ""

    def __post_init__(self):
        n = self.ring.n
        if n % 2 != 1 or n < 3:
            raise ModelValidationError("BAD_DIMENSION", f"dimension {n} is not 2m+1 with m >= 1", "dimension")
        m = (n - 1) // 2
        if len(self.frame) != 2 * m:
            raise ModelValidationError("BAD_FRAME", f"need {2 * m} frame fields, got {len(self.frame)}", "frame")
        if not self.base_point:
            object.__setattr__(self, "base_point", tuple(Fraction(0) for _ in range(n)))
        object.__setattr__(self, "base_point", tuple(Fraction(x) for x in self.base_point))
        if len(self.base_point) != n:
            raise ModelValidationError("BAD_POINT", "base point has the wrong length", "base_point")
        for a, e in enumerate(self.frame):
            if not self.theta(e).is_zero():
                raise ModelValidationError("NOT_HORIZONTAL", f"θ(E_{a + 1}) is not identically zero",
                                           f"frame[{a}]")
        if self.g.rows != 2 * m or self.g.cols != 2 * m:
            raise ModelValidationError("BAD_METRIC", "metric must be 2m×2m on the frame", "metric")
        for i in range(2 * m):
            for j in range(i + 1, 2 * m):
                if self.g[i, j] != self.g[j, i]:
                    raise ModelValidationError("ASYMMETRIC_METRIC", f"g[{i}][{j}] != g[{j}][{i}]",
                                               f"metric[{i}][{j}]")
        try:
            g0 = self.g.evaluate(self.base_point)
        except PoleAtPointError as exc:
            raise ModelValidationError("POLE_AT_POINT", str(exc), "metric") from None
        if not nk.is_positive_definite(g0):
            raise ModelValidationError("NOT_POSITIVE", "metric is not positive definite at the base point",
                                       "metric")
        if self.J is not None and (self.J.rows != 2 * m or self.J.cols != 2 * m):
            raise ModelValidationError("BAD_J", "J must be 2m×2m on the frame", "J")
        # contact condition and unimodularity are checked while building the geometry
        _ = self.geo

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def m(self) -> int:
        return (self.ring.n - 1) // 2

    @cached_property
    def geo(self) -> "FrameGeometry":
        return FrameGeometry(self)

    def with_metric(self, g: RatMat, J: RatMat | None = None, name: str | None = None) -> "ContactModel":
        return ContactModel(self.ring, self.theta, self.frame, g, J if J is not None else self.J,
                            self.base_point, name or self.name, self.note)


def heisenberg_ring(m: int) -> Ring:
    names = tuple(f"x{i}" for i in range(1, m + 1)) + tuple(f"y{i}" for i in range(1, m + 1)) + ("z",)
    return Ring.get(names)


def heisenberg_model(m: int, g: Sequence[Sequence] | None = None, J: Sequence[Sequence] | None = None,
                     name: str | None = None, base_point=None) -> ContactModel:
    """θ = dz + Σ(x_i dy_i − y_i dx_i) with frame X_i = ∂x_i + y_i∂z, Y_i = ∂y_i − x_i∂z."""
    ring = heisenberg_ring(m)
    n = 2 * m + 1
    x = [ring.var(i) for i in range(m)]
    y = [ring.var(m + i) for i in range(m)]
    theta = [ring.zero] * n
    for i in range(m):
        theta[i] = -y[i]
        theta[m + i] = x[i]
    theta[n - 1] = ring.one
    frame = []
    for i in range(m):
        c = [ring.zero] * n
        c[i] = ring.one
        c[n - 1] = y[i]
        frame.append(VectorField(ring, tuple(c)))
    for i in range(m):
        c = [ring.zero] * n
        c[m + i] = ring.one
        c[n - 1] = -x[i]
        frame.append(VectorField(ring, tuple(c)))
    conv = (lambda e: ring.parse(e) if isinstance(e, str) else ring.const(e))
    gm = RatMat.identity(ring, 2 * m) if g is None else RatMat(ring, [[conv(e) for e in r] for r in g])
    Jm = None if J is None else RatMat(ring, [[conv(e) for e in r] for r in J])
    return ContactModel(ring, OneForm(ring, tuple(theta)), tuple(frame), gm, Jm,
                        tuple(base_point) if base_point else (), name or f"heisenberg{m}")


def conformal_model(m: int, factor: str, name: str | None = None,
                    base_point: Sequence | None = None) -> ContactModel:
    """Pseudo-Hermitian model with θ' = f·θ_H on the Heisenberg group.

    The first frame field is rescaled by f; J is the standard structure twisted so that
    g = dθ'(·, J·) stays symmetric. Non-constant f produces nonzero torsion.
    """
    ring = heisenberg_ring(m)
    f = ring.parse(factor)
    H = heisenberg_model(m)
    theta = OneForm(ring, tuple(f * c for c in H.theta.comps))
    frame = list(H.frame)
    frame[0] = frame[0].scale(f)
    J = [[ring.const(x) for x in row] for row in standard_J(m)]
    J[m][0] = f
    J[0][m] = -1 / f
    J = RatMat(ring, J)
    bp = tuple(base_point) if base_point is not None else ()
    probe = ContactModel(ring, theta, tuple(frame), RatMat.identity(ring, 2 * m), None, bp, "probe")
    return ContactModel(ring, theta, tuple(frame), probe.geo.W @ J, J, bp, name or f"conformal({factor})")


def standard_J(m: int) -> list[list[int]]:
    """J X_i = Y_i, J Y_i = −X_i in the frame (X_1..X_m, Y_1..Y_m)."""
    J = [[0] * (2 * m) for _ in range(2 * m)]
    for i in range(m):
        J[m + i][i] = 1
        J[i][m + i] = -1
    return J


# ---------------------------------------------------------------- frame geometry

class FrameGeometry:
    """All symbolic frame data of a model, computed lazily."""

    def __init__(self, model: ContactModel):
        self.model = model
        self.ring = model.ring
        self.m = model.m
        self.k = 2 * model.m
        ring, k, n = self.ring, self.k, model.n
        self.dtheta = exterior_d(model.theta)
        E = model.frame
        self.W = RatMat(ring, [[self.dtheta(E[a], E[b]) for b in range(k)] for a in range(k)])
        # Reeb field: θ(ξ) = 1 and dθ(ξ, E_a) = 0
        rows = [list(model.theta.comps)]
        for a in range(k):
            rows.append([sum((self.dtheta[i, j] * E[a].comps[j] for j in range(n) if E[a].comps[j]),
                             ring.zero) for i in range(n)])
        A = RatMat(ring, rows)
        try:
            detA = ratmat_det(A).evaluate(model.base_point)
        except PoleAtPointError as exc:
            raise NotContactError(str(exc)) from None
        if detA == 0:
            raise NotContactError("θ∧(dθ)^m vanishes at the base point (Reeb system singular)")
        Ainv = ratmat_inverse(A)
        self.xi = VectorField(ring, Ainv.col(0))
        self.F = RatMat(ring, [[E[a].comps[i] for a in range(k)] + [self.xi.comps[i]] for i in range(n)])
        detF = ratmat_det(self.F)
        if not detF.is_constant() or detF.is_zero():
            raise ModelValidationError("NOT_UNIMODULAR",
                                       f"det of (E_1..E_2m, ξ) must be a nonzero constant, got {detF}", "frame")
        self.Finv = ratmat_inverse(self.F)

    # -- decomposition of vector fields
    def coefficients(self, v: VectorField) -> tuple[RatFunc, ...]:
        """Frame coefficients (c_1..c_2m, c_ξ) of a vector field."""
        return self.Finv.apply(v.comps)

    def field(self, coeffs: Sequence[RatFunc]) -> VectorField:
        return combine(self.ring, coeffs, self.model.frame)

    def horizontal_field(self, col: Sequence[RatFunc]) -> VectorField:
        return combine(self.ring, col, self.model.frame)

    @cached_property
    def brackets(self) -> list[list[tuple[RatFunc, ...]]]:
        """brackets[a][b] = frame coefficients of [E_a, E_b] (horizontal part then ξ part)."""
        E = self.model.frame
        k = self.k
        out = [[None] * k for _ in range(k)]
        for a in range(k):
            out[a][a] = tuple([self.ring.zero] * (k + 1))
            for b in range(a + 1, k):
                c = self.coefficients(vf_bracket(E[a], E[b]))
                out[a][b] = c
                out[b][a] = tuple(-x for x in c)
        return out

    def c(self, a: int, b: int) -> tuple[RatFunc, ...]:
        return self.brackets[a][b][: self.k]

    @cached_property
    def L(self) -> RatMat:
        cols = []
        for e in self.model.frame:
            coeffs = self.coefficients(vf_bracket(self.xi, e))
            if not coeffs[self.k].is_zero():
                raise AssertionError("[ξ, E_a] has a vertical component")
            cols.append(coeffs[: self.k])
        return RatMat(self.ring, [[cols[c][f] for c in range(self.k)] for f in range(self.k)])

    @cached_property
    def g(self) -> RatMat:
        return self.model.g

    @cached_property
    def ginv(self) -> RatMat:
        return ratmat_inverse(self.model.g)

    @cached_property
    def tau_low(self) -> RatMat:
        g, L, k = self.g, self.L, self.k
        half = Fraction(1, 2)
        rows = []
        for a in range(k):
            row = []
            for b in range(k):
                acc = self.xi(g[a, b])
                for c in range(k):
                    if L[c, a]:
                        acc = acc - L[c, a] * g[c, b]
                    if L[c, b]:
                        acc = acc - L[c, b] * g[a, c]
                row.append(acc * half)
            rows.append(row)
        return RatMat(self.ring, rows)

    @cached_property
    def tau(self) -> RatMat:
        return self.ginv @ self.tau_low

    @cached_property
    def Gamma(self) -> list[RatMat]:
        """Schouten connection matrices from the Koszul formula."""
        E, g, k = self.model.frame, self.g, self.k
        dg = [[[E[a](g[b, c]) for c in range(k)] for b in range(k)] for a in range(k)]

        def gc(d_coeffs, c):  # g(Σ_d coeff_d E_d, E_c)
            acc = self.ring.zero
            for d in range(k):
                if d_coeffs[d]:
                    acc = acc + d_coeffs[d] * g[d, c]
            return acc

        K = [[[None] * k for _ in range(k)] for _ in range(k)]
        for a in range(k):
            for b in range(k):
                for c in range(k):
                    K[a][b][c] = (dg[a][b][c] + dg[b][c][a] - dg[c][a][b]
                                  + gc(self.c(a, b), c) - gc(self.c(b, c), a) - gc(self.c(a, c), b))
        half = Fraction(1, 2)
        out = []
        ginv = self.ginv
        for a in range(k):
            rows = []
            for f in range(k):
                row = []
                for b in range(k):
                    acc = self.ring.zero
                    for c in range(k):
                        if ginv[f, c] and K[a][b][c]:
                            acc = acc + ginv[f, c] * K[a][b][c]
                    row.append(acc * half)
                rows.append(row)
            out.append(RatMat(self.ring, rows))
        return out

    def derive(self, a: int | None, M: RatMat) -> RatMat:
        """Directional derivative of a frame matrix along E_a (``a=None`` means ξ)."""
        v = self.xi if a is None else self.model.frame[a]
        return M.derive(v)

    @cached_property
    def R(self) -> list[list[RatMat]]:
        """Schouten curvature R(E_a,E_b) (bare partial connection, ξ acting by Lie derivative)."""
        k = self.k
        G = self.Gamma
        zero = RatMat.zeros(self.ring, k)
        out = [[zero] * k for _ in range(k)]
        for a in range(k):
            for b in range(a + 1, k):
                M = self.derive(a, G[b]) - self.derive(b, G[a]) + G[a].comm(G[b])
                for d, cd in enumerate(self.c(a, b)):
                    if cd:
                        M = M - G[d].scale(cd)
                M = M + self.L.scale(self.W[a, b])
                out[a][b] = M
                out[b][a] = -M
        return out

    @cached_property
    def W_inv_bivector(self) -> RatMat:
        """dθ^{-1} as a bivector field: 2·W^{-1}."""
        return ratmat_inverse(self.W).scale(Fraction(2))

    def apply_bivector(self, curv: list[list[RatMat]], beta: RatMat) -> RatMat:
        k = self.k
        acc = RatMat.zeros(self.ring, k)
        for a in range(k):
            for b in range(k):
                if a != b and beta[a, b]:
                    acc = acc + curv[a][b].scale(beta[a, b])
        return acc


# ---------------------------------------------------------------- connections

@dataclass(eq=False)
class FrameConnection:
    """Horizontal Christoffel matrices plus an optional Nomizu endomorphism N."""

    model: ContactModel
    Gamma: list[RatMat]
    N: RatMat | None = None
    tag: str = "SCHOUTEN"
    metric_compatible: bool | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def geo(self) -> FrameGeometry:
        return self.model.geo

    @property
    def extended(self) -> bool:
        return self.N is not None

    def christoffel(self, a: int, b: int, c: int) -> RatFunc:
        """Γ^c_{ab}: E_c-coefficient of ∇_{E_a} E_b."""
        return self.Gamma[a][c, b]

    @property
    def Omega(self) -> RatMat:
        """Connection matrix in the ξ direction: L + N."""
        if "Omega" not in self._cache:
            geo = self.geo
            self._cache["Omega"] = geo.L + self.N if self.N is not None else geo.L
        return self._cache["Omega"]

    def conn_matrix(self, a: int | None) -> RatMat:
        return self.Omega if a is None else self.Gamma[a]

    def cov_endo(self, a: int | None, T: RatMat) -> RatMat:
        """Covariant derivative of an endomorphism field along E_a (``None`` = ξ)."""
        return self.geo.derive(a, T) + self.conn_matrix(a).comm(T)

    @property
    def R_hor(self) -> list[list[RatMat]]:
        if "R_hor" not in self._cache:
            geo = self.geo
            if self.N is None:
                self._cache["R_hor"] = geo.R
            else:
                k = geo.k
                out = [[None] * k for _ in range(k)]
                for a in range(k):
                    for b in range(k):
                        out[a][b] = geo.R[a][b] + self.N.scale(geo.W[a, b]) if a != b else geo.R[a][b]
                self._cache["R_hor"] = out
        return self._cache["R_hor"]

    @property
    def R_xi(self) -> list[RatMat]:
        """R^N(ξ, E_a)."""
        if self.N is None:
            raise ValueError("the bare partial connection has no ξ-curvature")
        if "R_xi" not in self._cache:
            geo = self.geo
            G, Om, L = self.Gamma, self.Omega, geo.L
            out = []
            for a in range(geo.k):
                M = geo.derive(None, G[a]) - geo.derive(a, Om) + Om.comm(G[a])
                for d in range(geo.k):
                    if L[d, a]:
                        M = M - G[d].scale(L[d, a])
                out.append(M)
            self._cache["R_xi"] = out
        return self._cache["R_xi"]


def reeb_field(model: ContactModel) -> VectorField:
    return model.geo.xi


def sub_torsion(model: ContactModel) -> tuple[RatMat, RatMat]:
    """(τ as bilinear form on the frame, τ as endomorphism)."""
    return model.geo.tau_low, model.geo.tau


def schouten_connection(model: ContactModel) -> FrameConnection:
    return FrameConnection(model, model.geo.Gamma, None, "SCHOUTEN", True)


def metric_extension_defect(model: ContactModel, N: RatMat) -> RatMat:
    """g(NX,Y) + g(X,NY) − 2τ(X,Y) on frame pairs."""
    geo = model.geo
    gN = geo.g @ N
    return gN + gN.T - geo.tau_low.scale(Fraction(2))


def extend_connection(model: ContactModel, conn: FrameConnection, N: RatMat, tag: str = "CUSTOM") -> FrameConnection:
    compatible = metric_extension_defect(model, N).is_zero()
    return FrameConnection(model, conn.Gamma, N, tag, compatible)


def adapted_connection(model: ContactModel) -> FrameConnection:
    return extend_connection(model, schouten_connection(model), model.geo.tau, "ADAPTED")


def wagner_endomorphism(model: ContactModel) -> RatMat:
    geo = model.geo
    return geo.apply_bivector(geo.R, geo.W_inv_bivector).scale(Fraction(1, 4 * model.m))


def wagner_connection(model: ContactModel) -> FrameConnection:
    return extend_connection(model, schouten_connection(model), wagner_endomorphism(model), "WAGNER")


def connection_by_tag(model: ContactModel, tag: str) -> FrameConnection:
    tag = tag.upper()
    if tag == "SCHOUTEN":
        return schouten_connection(model)
    if tag in ("ADAPTED", "TANAKA_WEBSTER"):
        return adapted_connection(model)
    if tag == "WAGNER":
        return wagner_connection(model)
    raise ValueError(f"unknown connection {tag!r}")


@dataclass(frozen=True)
class CurvatureAtPoint:
    R_hor: tuple[tuple[Mat, ...], ...]
    R_xi: tuple[Mat, ...] | None
    point: tuple[Fraction, ...]


def curvature(model: ContactModel, conn: FrameConnection, p=None) -> CurvatureAtPoint:
    p = tuple(Fraction(x) for x in (p if p is not None else model.base_point))
    k = model.geo.k
    Rh = tuple(tuple(conn.R_hor[a][b].evaluate(p) for b in range(k)) for a in range(k))
    Rx = tuple(M.evaluate(p) for M in conn.R_xi) if conn.extended else None
    return CurvatureAtPoint(Rh, Rx, p)


def dtheta_matrix(model: ContactModel, p=None) -> Mat:
    p = p if p is not None else model.base_point
    return model.geo.W.evaluate(p)


def dtheta_inverse_bivector(model: ContactModel, p=None) -> Mat:
    return nk.mat_inverse(dtheta_matrix(model, p)).scale(2)


def pairing(omega: Mat, beta: Mat):
    """⟨ω, β⟩ = Σ_ab ω_ab β^ab."""
    return sum((omega[a, b] * beta[a, b] for a in range(omega.rows) for b in range(omega.cols)),
               Fraction(0))


def j_bivector(model: ContactModel, p=None) -> Mat:
    """Coefficient matrix of Σ e_k∧Je_k for a unitary basis, expressed in the frame: −J g^{-1}."""
    p = p if p is not None else model.base_point
    if model.J is None:
        raise NotAlmostComplexError("model carries no J")
    J = model.J.evaluate(p)
    return -(J @ nk.mat_inverse(model.g.evaluate(p)))


def wedge(u: Sequence, v: Sequence, g: Mat) -> Mat:
    """(u∧v)(z) = g(u,z) v − g(v,z) u as a matrix."""
    k = g.rows
    gu = [sum((u[i] * g[i, j] for i in range(k)), Fraction(0)) for j in range(k)]
    gv = [sum((v[i] * g[i, j] for i in range(k)), Fraction(0)) for j in range(k)]
    return Mat([[v[r] * gu[c] - u[r] * gv[c] for c in range(k)] for r in range(k)])


# ---------------------------------------------------------------- identity checks

def _check(name: str, residuals: Callable[[], list[RatMat]]) -> IdentityCheck:
    try:
        res = residuals()
    except DegreeOverflowError as exc:
        return IdentityCheck(name, UNDECIDED, f"symbolic residual exceeded the degree guard: {exc}")
    bad = [i for i, r in enumerate(res) if not r.is_zero()]
    if bad:
        return IdentityCheck(name, FAILED, f"{len(bad)} nonzero residual component(s), first index {bad[0]}")
    return IdentityCheck(name, PROVED, f"{len(res)} residual block(s) vanish identically")


def _gmat(geo: FrameGeometry, M: RatMat) -> RatMat:
    """Lowered form: (g M)[v][u] = g(M u, v)."""
    return geo.g @ M


def check_schouten_metric(model: ContactModel) -> IdentityCheck:
    geo = model.geo

    def res():
        out = []
        for a in range(geo.k):
            dg = geo.derive(a, geo.g)
            gG = geo.g @ geo.Gamma[a]
            out.append(dg - gG - gG.T)
        return out
    return _check("schouten.metric_compatibility", res)


def check_schouten_torsion(model: ContactModel) -> IdentityCheck:
    geo = model.geo

    def res():
        out = []
        k = geo.k
        for a in range(k):
            for b in range(a + 1, k):
                ca = geo.c(a, b)
                col = [geo.Gamma[a][f, b] - geo.Gamma[b][f, a] - ca[f] for f in range(k)]
                out.append(RatMat(geo.ring, [col]))
        return out
    return _check("schouten.torsion", res)


def check_sct_symmetry(model: ContactModel) -> IdentityCheck:
    geo = model.geo

    def res():
        out = []
        for a in range(geo.k):
            for b in range(a + 1, geo.k):
                M = _gmat(geo, geo.R[a][b])
                out.append(M + M.T + geo.tau_low.scale(2 * geo.W[a, b]))
        return out
    return _check("curvature.sct_symmetry", res)


def _cyclic(curv, k: int, ring: Ring, extra=None) -> list[RatMat]:
    out = []
    for a in range(k):
        for b in range(a + 1, k):
            for c in range(b + 1, k):
                col = [curv[a][b][f, c] + curv[b][c][f, a] + curv[c][a][f, b] for f in range(k)]
                if extra is not None:
                    e = extra(a, b, c)
                    col = [x - y for x, y in zip(col, e)]
                out.append(RatMat(ring, [col]))
    return out


def check_bianchi(model: ContactModel) -> IdentityCheck:
    geo = model.geo
    return _check("curvature.bianchi", lambda: _cyclic(geo.R, geo.k, geo.ring))


def check_extended_bianchi(model: ContactModel) -> IdentityCheck:
    geo = model.geo
    conn = adapted_connection(model)

    def extra(a, b, c):
        t = geo.tau
        return [geo.W[a, b] * t[f, c] + geo.W[b, c] * t[f, a] + geo.W[c, a] * t[f, b] for f in range(geo.k)]
    return _check("adapted.bianchi", lambda: _cyclic(conn.R_hor, geo.k, geo.ring, extra))


def check_pairwise(model: ContactModel) -> IdentityCheck:
    geo = model.geo
    conn = adapted_connection(model)

    def res():
        k, W, tl = geo.k, geo.W, geo.tau_low
        Q = [[_gmat(geo, conn.R_hor[a][b]) for b in range(k)] for a in range(k)]

        def T(x, y, u, v):  # dθ(Y,U)τ(V,X) − dθ(X,U)τ(V,Y)
            return W[y, u] * tl[v, x] - W[x, u] * tl[v, y]
        out = []
        for x in range(k):
            for y in range(k):
                row = []
                for u in range(k):
                    for v in range(k):
                        lhs = Q[x][y][v, u] - Q[u][v][y, x]
                        rhs = T(x, y, u, v) - T(x, y, v, u)
                        row.append(lhs - rhs)
                out.append(RatMat(geo.ring, [row]))
        return out
    return _check("adapted.pairwise_defect", res)


def check_xi_lemma(model: ContactModel) -> IdentityCheck:
    """g(R^τ(ξ,X)Y,Z) = g((∇_Yτ)X,Z) − g((∇_Zτ)X,Y)."""
    geo = model.geo
    conn = adapted_connection(model)

    def res():
        k = geo.k
        Dt = [_gmat(geo, conn.cov_endo(a, geo.tau)) for a in range(k)]
        out = []
        for x in range(k):
            gR = _gmat(geo, conn.R_xi[x])
            row = []
            for y in range(k):
                for z in range(k):
                    row.append(gR[z, y] - Dt[y][z, x] + Dt[z][y, x])
            out.append(RatMat(geo.ring, [row]))
        return out
    return _check("adapted.xi_curvature_lemma", res)


def check_xi_swap(model: ContactModel, conn: FrameConnection) -> IdentityCheck:
    """R^N(ξ,X)Y − R^N(ξ,Y)X + (∇_X N)Y − (∇_Y N)X = 0."""
    geo = model.geo

    def res():
        k = geo.k
        DN = [conn.cov_endo(a, conn.N) for a in range(k)]
        out = []
        for x in range(k):
            for y in range(x + 1, k):
                col = [conn.R_xi[x][f, y] - conn.R_xi[y][f, x] + DN[x][f, y] - DN[y][f, x] for f in range(k)]
                out.append(RatMat(geo.ring, [col]))
        return out
    return _check(f"{conn.tag.lower()}.xi_swap", res)


def check_lie_derivative_form(model: ContactModel, conn: FrameConnection) -> IdentityCheck:
    """R^N(ξ,X) = (L_ξ∇)_X − ∇_X N, with (L_ξ∇)_X Y = [ξ,∇_X Y] − ∇_{[ξ,X]}Y − ∇_X[ξ,Y]."""
    geo = model.geo

    def res():
        out = []
        for a in range(geo.k):
            G = conn.Gamma
            Lxi = geo.derive(None, G[a]) - geo.derive(a, geo.L) + geo.L.comm(G[a])
            for d in range(geo.k):
                if geo.L[d, a]:
                    Lxi = Lxi - G[d].scale(geo.L[d, a])
            out.append(conn.R_xi[a] - Lxi + conn.cov_endo(a, conn.N))
        return out
    return _check(f"{conn.tag.lower()}.lie_derivative_form", res)


def check_wagner_kills_inverse(model: ContactModel) -> IdentityCheck:
    geo = model.geo
    conn = wagner_connection(model)
    return _check("wagner.kills_dtheta_inverse", lambda: [geo.apply_bivector(conn.R_hor, geo.W_inv_bivector)])


def check_wagner_symmetric_part(model: ContactModel) -> IdentityCheck:
    return _check("wagner.symmetric_part_is_tau",
                  lambda: [metric_extension_defect(model, wagner_endomorphism(model))])


def check_wagner_vs_adapted(model: ContactModel) -> IdentityCheck:
    """R^W(ξ,X) − R^τ(ξ,X) + ∇_X C = 0 with C = N^W − τ."""
    geo = model.geo
    wag = wagner_connection(model)
    ad = adapted_connection(model)

    def res():
        C = wag.N - geo.tau
        return [wag.R_xi[a] - ad.R_xi[a] + ad.cov_endo(a, C) for a in range(geo.k)]
    return _check("wagner.xi_curvature_vs_adapted", res)


def check_reeb(model: ContactModel) -> IdentityCheck:
    geo = model.geo

    def res():
        ring = geo.ring
        out = [RatMat(ring, [[model.theta(geo.xi) - 1]])]
        out.append(RatMat(ring, [[geo.dtheta(geo.xi, e) for e in model.frame]]))
        Ld = lie_derivative(geo.xi, geo.dtheta)
        out.append(RatMat(ring, Ld.matrix()))
        return out
    return _check("contact.reeb", res)


def check_vertical_brackets(model: ContactModel) -> IdentityCheck:
    """θ([E_a,E_b]) = −dθ(E_a,E_b)."""
    geo = model.geo

    def res():
        k = geo.k
        return [RatMat(geo.ring, [[geo.brackets[a][b][k] + geo.W[a, b] for b in range(k)] for a in range(k)])]
    return _check("contact.vertical_brackets", res)


def identity_checks(model: ContactModel) -> list[tuple[str, Callable[[], IdentityCheck]]]:
    """Named, lazily evaluated frame identities."""
    ad = lambda: adapted_connection(model)  # noqa: E731
    wg = lambda: wagner_connection(model)  # noqa: E731
    return [
        ("contact.reeb", lambda: check_reeb(model)),
        ("contact.vertical_brackets", lambda: check_vertical_brackets(model)),
        ("schouten.metric_compatibility", lambda: check_schouten_metric(model)),
        ("schouten.torsion", lambda: check_schouten_torsion(model)),
        ("curvature.sct_symmetry", lambda: check_sct_symmetry(model)),
        ("curvature.bianchi", lambda: check_bianchi(model)),
        ("adapted.bianchi", lambda: check_extended_bianchi(model)),
        ("adapted.pairwise_defect", lambda: check_pairwise(model)),
        ("adapted.xi_curvature_lemma", lambda: check_xi_lemma(model)),
        ("adapted.xi_swap", lambda: check_xi_swap(model, ad())),
        ("adapted.lie_derivative_form", lambda: check_lie_derivative_form(model, ad())),
        ("wagner.xi_swap", lambda: check_xi_swap(model, wg())),
        ("wagner.lie_derivative_form", lambda: check_lie_derivative_form(model, wg())),
        ("wagner.xi_curvature_vs_adapted", lambda: check_wagner_vs_adapted(model)),
        ("wagner.kills_dtheta_inverse", lambda: check_wagner_kills_inverse(model)),
        ("wagner.symmetric_part_is_tau", lambda: check_wagner_symmetric_part(model)),
    ]


def identity_suite(model: ContactModel) -> list[IdentityCheck]:
    """Every frame identity, each decided symbolically."""
    out = []
    for name, fn in identity_checks(model):
        c = fn()
        out.append(IdentityCheck(name, c.status, c.detail))
    return out


def sample_points(model: ContactModel, count: int = 5, seed: int = 0) -> list[tuple[Fraction, ...]]:
    """Deterministic pole-free rational points near the base point."""
    rng = random.Random(seed)
    pts = []
    geo = model.geo
    probes = [geo.ginv, geo.Finv]
    while len(pts) < count:
        p = tuple(b + Fraction(rng.randint(-6, 6), rng.randint(1, 7)) for b in model.base_point)
        try:
            for M in probes:
                M.evaluate(p)
        except PoleAtPointError:
            continue
        pts.append(p)
    return pts


# ---------------------------------------------------------------- τ-derived data

@dataclass(frozen=True)
class CodazziReport:
    codazzi: bool
    defect: tuple[tuple[tuple[Fraction, ...], ...], ...]
    R_tau_xi: tuple[Mat, ...]
    lemma_residual_zero: bool


def codazzi_defect(model: ContactModel, p=None) -> CodazziReport:
    geo = model.geo
    p = p if p is not None else model.base_point
    ad = adapted_connection(model)
    k = geo.k
    Dt = [ad.cov_endo(a, geo.tau) for a in range(k)]
    sym = [[RatMat(geo.ring, [[Dt[a][f, b] - Dt[b][f, a] for f in range(k)]]) for b in range(k)] for a in range(k)]
    codazzi = all(sym[a][b].is_zero() for a in range(k) for b in range(k))
    defect = tuple(tuple(tuple(sym[a][b].evaluate(p).row(0)) for b in range(k)) for a in range(k))
    lemma = check_xi_lemma(model).status == PROVED
    return CodazziReport(codazzi, defect, tuple(M.evaluate(p) for M in ad.R_xi), lemma)


def is_codazzi(model: ContactModel) -> bool:
    return all(M.is_zero() for M in adapted_connection(model).R_xi)


@dataclass(frozen=True)
class LocalSymmetryReport:
    """Horizontal Schouten derivatives of τ, dθ and R; None when the degree guard stops the computation."""

    tau_parallel: bool | None
    dtheta_parallel: bool | None
    curvature_parallel: bool | None

    @property
    def candidate(self) -> bool | None:
        flags = (self.tau_parallel, self.dtheta_parallel, self.curvature_parallel)
        if any(f is False for f in flags):
            return False
        return None if any(f is None for f in flags) else True


def local_symmetry_checks(model: ContactModel) -> LocalSymmetryReport:
    geo = model.geo
    k, G = geo.k, geo.Gamma

    def guarded(fn):
        try:
            return fn()
        except DegreeOverflowError:
            return None

    def tau_ok():
        return all((geo.derive(a, geo.tau) + G[a].comm(geo.tau)).is_zero() for a in range(k))

    def w_ok():
        W = geo.W
        return all((geo.derive(a, W) - G[a].T @ W - W @ G[a]).is_zero() for a in range(k))

    def r_ok():
        R = geo.R
        for a in range(k):
            for b in range(k):
                for c in range(b + 1, k):
                    M = geo.derive(a, R[b][c]) + G[a].comm(R[b][c])
                    for f in range(k):
                        if not G[a][f, b].is_zero():
                            M = M - R[f][c].scale(G[a][f, b])
                        if not G[a][f, c].is_zero():
                            M = M - R[b][f].scale(G[a][f, c])
                    if not M.is_zero():
                        return False
        return True
    return LocalSymmetryReport(guarded(tau_ok), guarded(w_ok), guarded(r_ok))


@dataclass(frozen=True)
class CRReport:
    almost_complex: bool
    nijenhuis_zero: bool
    g_matches_dtheta_J: bool
    tw_equals_adapted: bool
    webster_torsion_anticommutes_J: bool

    @property
    def pseudo_hermitian(self) -> bool:
        return (self.almost_complex and self.nijenhuis_zero and self.g_matches_dtheta_J
                and self.tw_equals_adapted and self.webster_torsion_anticommutes_J)


def cr_toolkit(model: ContactModel) -> CRReport:
    if model.J is None:
        raise NotAlmostComplexError("model carries no J")
    geo = model.geo
    ring, k = geo.ring, geo.k
    J = model.J
    if not (J @ J + RatMat.identity(ring, k)).is_zero():
        raise NotAlmostComplexError("J² != −I")
    E = model.frame
    JE = [geo.horizontal_field(J.col(a)) for a in range(k)]
    nij = True
    for a in range(k):
        for b in range(a + 1, k):
            v = (vf_bracket(E[a], E[b]) - vf_bracket(JE[a], JE[b]))
            w = vf_bracket(E[a], JE[b]) + vf_bracket(JE[a], E[b])
            wc = geo.coefficients(w)
            if not wc[k].is_zero():
                nij = False
                break
            Jw = geo.horizontal_field(J.apply(wc[:k]))
            if not (v + Jw).is_zero():
                nij = False
                break
        if not nij:
            break
    g_ok = (geo.W @ J - geo.g).is_zero()
    # N^TW = −½(L + J(ξ(J) + L J))
    ntw = (geo.L + J @ (geo.derive(None, J) + geo.L @ J)).scale(Fraction(-1, 2))
    tw_ok = (ntw - geo.tau).is_zero()
    anti = (geo.tau @ J + J @ geo.tau).is_zero()
    return CRReport(True, nij, g_ok, tw_ok, anti)


def ricci_contraction(R) -> list[list]:
    """Ric(X,Y) = tr(Z ↦ R(Z,X)Y) for a curvature given on frame pairs."""
    k = len(R)
    return [[sum((R[j][a][j, b] for j in range(k)), Fraction(0)) for b in range(k)] for a in range(k)]


@dataclass(frozen=True)
class RicciReport:
    rho: Mat
    scal: Fraction
    pseudo_einstein: bool
    ric: Mat
    ric_tw_residual_zero: bool


def ricci_suite(model: ContactModel, p=None) -> RicciReport:
    p = p if p is not None else model.base_point
    geo = model.geo
    k, m = geo.k, geo.m
    if model.J is None:
        raise NotAlmostComplexError("model carries no J")
    J = model.J.evaluate(p)
    g = geo.g.evaluate(p)
    ginv = geo.ginv.evaluate(p)
    tl = geo.tau_low.evaluate(p)
    ad = adapted_connection(model)
    R = [[ad.R_hor[a][b].evaluate(p) for b in range(k)] for a in range(k)]
    gR = [[g @ R[a][b] for b in range(k)] for a in range(k)]
    zero = Fraction(0)
    rho = [[zero] * k for _ in range(k)]
    for x in range(k):
        for y in range(k):
            acc = zero
            for i in range(k):
                for j in range(k):
                    if ginv[i, j]:
                        for c in range(k):
                            if J[c, i]:
                                acc += ginv[i, j] * J[c, i] * gR[c][j][y, x]
            rho[x][y] = acc / 2
    ric = ricci_contraction(R)
    scal = sum((ginv[a, b] * ric[a][b] for a in range(k) for b in range(k)), zero)
    W = geo.W.evaluate(p)
    h = scal / (2 * m)
    pe = all(rho[a][b] - h * W[a, b] == 0 for a in range(k) for b in range(k))
    resid = True
    for a in range(k):
        for b in range(k):
            rj = sum((J[c, b] * rho[a][c] for c in range(k)), zero)
            tj = sum((J[c, b] * tl[a, c] for c in range(k)), zero)
            if ric[a][b] - rj - (m - 1) * tj != 0:
                resid = False
    return RicciReport(Mat(rho), scal, pe, Mat(ric), resid)


@dataclass(frozen=True)
class TauSpectrum:
    eigenvalues: dict
    exact: bool
    injective: bool
    tau_squared_scalar: bool
    lagrangian: nk.SubspaceBasis | None


@dataclass(frozen=True)
class TorsionSplitReport:
    R_tau: tuple[tuple[Mat, ...], ...]
    R_0: tuple[tuple[Mat, ...], ...]
    r0_bianchi_zero: bool
    r0_J_invariant: bool
    r_tau_of_J_zero: bool
    spectrum: TauSpectrum


def tau_spectrum(tau: Mat) -> TauSpectrum:
    k = tau.rows
    cp = nk.char_poly(tau)
    roots = nk.rational_roots(cp)
    exact = sum(roots.values()) == k
    if exact:
        eig = {str(r): mult for r, mult in sorted(roots.items())}
    else:
        import numpy as np
        vals = np.linalg.eigvals(tau.to_float())
        eig = {f"{v.real:.12g}": 1 for v in sorted(vals.real)}
    injective = nk.rank_nullspace(tau)[0] == k
    t2 = tau @ tau
    scalar = (t2 - Mat.identity(k).scale(t2[0, 0])).is_zero()
    lag = None
    if injective and exact:
        vecs = []
        for r in roots:
            if r > 0:
                vecs += list(nk.eigenspace(tau, r).vectors)
        lag = nk.span(vecs, k, Backend.RATIONAL)
    return TauSpectrum(eig, exact, injective, scalar, lag)


def torsion_curvature_split(model: ContactModel, p=None) -> TorsionSplitReport:
    p = p if p is not None else model.base_point
    geo = model.geo
    k = geo.k
    if model.J is None:
        raise NotAlmostComplexError("model carries no J")
    J = model.J.evaluate(p)
    g = geo.g.evaluate(p)
    tau = geo.tau.evaluate(p)
    ad = adapted_connection(model)
    Rt = [[ad.R_hor[a][b].evaluate(p) for b in range(k)] for a in range(k)]
    basis = [[Fraction(int(i == j)) for i in range(k)] for j in range(k)]

    def Rtau(x, y):
        JX, JY = J.apply(x), J.apply(y)
        tX, tY = tau.apply(x), tau.apply(y)
        tJY, tJX = tau.apply(JY), tau.apply(JX)
        s = wedge(JX, tY, g) + wedge(tX, JY, g) + wedge(x, tJY, g) + wedge(tJX, y, g)
        return s.scale(Fraction(-1, 2))

    RT = [[Rtau(basis[a], basis[b]) for b in range(k)] for a in range(k)]
    R0 = [[Rt[a][b] - RT[a][b] for b in range(k)] for a in range(k)]
    bianchi = all(R0[a][b][f, c] + R0[b][c][f, a] + R0[c][a][f, b] == 0
                  for a in range(k) for b in range(k) for c in range(k) for f in range(k))

    def R0_of(u, v):
        acc = Mat.zeros(k)
        for a in range(k):
            for b in range(k):
                if u[a] and v[b]:
                    acc = acc + R0[a][b].scale(u[a] * v[b])
        return acc
    Jcols = [J.col(a) for a in range(k)]
    jinv = all(R0_of(Jcols[a], Jcols[b]) == R0[a][b] for a in range(k) for b in range(k))
    beta = j_bivector(model, p)
    RtJ = Mat.zeros(k)
    for a in range(k):
        for b in range(k):
            if beta[a, b]:
                RtJ = RtJ + RT[a][b].scale(beta[a, b])
    return TorsionSplitReport(tuple(map(tuple, RT)), tuple(map(tuple, R0)), bianchi, jinv, RtJ.is_zero(),
                          tau_spectrum(tau))


@dataclass(frozen=True)
class PsiReport:
    psi: Mat
    g_skew: bool
    candidate_J: Mat | None
    mu: object


def psi_endomorphism(model: ContactModel, p=None) -> PsiReport:
    """ψ with g(X,Y) = dθ(X, ψY), i.e. g = W ψ."""
    p = p if p is not None else model.base_point
    W = dtheta_matrix(model, p)
    g = model.g.evaluate(p)
    psi = nk.mat_inverse(W) @ g
    gp = g @ psi
    skew = (gp + gp.T).is_zero()
    p2 = psi @ psi
    k = psi.rows
    lam = -p2[0, 0]
    cand, mu = None, None
    if lam > 0 and (p2 + Mat.identity(k).scale(lam)).is_zero():
        root = nk._rational_sqrt(lam)
        if root is not None:
            mu, cand = root, psi.scale(1 / root)
        else:
            import math
            mu = math.sqrt(float(lam))
            cand = psi.astype(Backend.FLOAT64).scale(1.0 / mu)
    return PsiReport(psi, skew, cand, mu)
