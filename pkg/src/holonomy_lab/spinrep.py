"""Exact spin representation of so(2m) on the exterior algebra of C^m.

Basis vectors of the spinor module are subsets S ⊆ {0..m-1} (occupied modes),
ordered by size and then lexicographically, so each Λ^k C^m is a contiguous block.
The real vector basis is e_0..e_{m-1}, Je_0..Je_{m-1}; J = [[0,-I],[I,0]].
All arithmetic is over the Gaussian rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm
from typing import Sequence

from . import numkit as nk
from .holonomy import Label, cayley_orthogonal, conjugate
from .numkit import Backend, GaussRational, Mat, SubspaceBasis

G = Backend.GAUSS_RATIONAL
MAX_M = 7
ZERO = GaussRational(0)
ONE = GaussRational(1)
I_UNIT = GaussRational(0, 1)


class SpinError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class Sparse:
    """Square Gaussian-rational matrix: ``scale`` times integer pairs {(row, col): (re, im)}."""

    __slots__ = ("n", "d", "s")

    def __init__(self, n: int, d: dict | None = None, s: Fraction = Fraction(1)):
        self.n = n
        self.d = {k: v for k, v in (d or {}).items() if v[0] or v[1]}
        self.s = Fraction(s) if self.d else Fraction(1)

    @classmethod
    def from_gauss(cls, n: int, d: dict) -> "Sparse":
        den = 1
        for v in d.values():
            v = GaussRational.coerce(v)
            den = lcm(den, v.re.denominator, v.im.denominator)
        ints = {}
        for k, v in d.items():
            v = GaussRational.coerce(v)
            ints[k] = (int(v.re * den), int(v.im * den))
        return cls(n, ints, Fraction(1, den))

    def _rescaled(self, s: Fraction) -> dict:
        f = self.s / s
        if f.denominator != 1:
            raise ArithmeticError("rescale must be integral")
        f = f.numerator
        return {k: (a * f, b * f) for k, (a, b) in self.d.items()}

    def __add__(self, o: "Sparse") -> "Sparse":
        if not o.d:
            return self
        if not self.d:
            return o
        s = Fraction(gcd(self.s.numerator, o.s.numerator), lcm(self.s.denominator, o.s.denominator))
        d = self._rescaled(s)
        for k, (a, b) in o._rescaled(s).items():
            x, y = d.get(k, (0, 0))
            d[k] = (x + a, y + b)
        return Sparse(self.n, d, s)

    def __sub__(self, o: "Sparse") -> "Sparse":
        return self + o.scale(-1)

    def scale(self, c) -> "Sparse":
        c = GaussRational.coerce(c)
        den = lcm(c.re.denominator, c.im.denominator)
        p, q = int(c.re * den), int(c.im * den)
        d = {k: (a * p - b * q, a * q + b * p) for k, (a, b) in self.d.items()}
        return Sparse(self.n, d, self.s / den)

    def __matmul__(self, o: "Sparse") -> "Sparse":
        by_row: dict[int, list] = {}
        for (r, c), v in o.d.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict = {}
        for (r, k), (a, b) in self.d.items():
            for c, (x, y) in by_row.get(k, ()):
                u, w = out.get((r, c), (0, 0))
                out[(r, c)] = (u + a * x - b * y, w + a * y + b * x)
        return Sparse(self.n, out, self.s * o.s)

    def comm(self, o: "Sparse") -> "Sparse":
        return self @ o - o @ self

    def is_zero(self) -> bool:
        return not self.d

    def __eq__(self, o) -> bool:
        return isinstance(o, Sparse) and (self - o).is_zero()

    __hash__ = None

    def entry(self, r: int, c: int) -> GaussRational:
        a, b = self.d.get((r, c), (0, 0))
        return GaussRational(a * self.s, b * self.s)

    def to_mat(self) -> Mat:
        rows = [[ZERO] * self.n for _ in range(self.n)]
        for (r, c) in self.d:
            rows[r][c] = self.entry(r, c)
        return Mat(rows, G)

    def is_diagonal(self) -> bool:
        return all(r == c for r, c in self.d)


def spinor_basis(m: int) -> list[tuple[int, ...]]:
    return [S for k in range(m + 1) for S in combinations(range(m), k)]


def _level_ranges(m: int) -> list[range]:
    out, start = [], 0
    for k in range(m + 1):
        out.append(range(start, start + comb(m, k)))
        start += comb(m, k)
    return out


@dataclass(eq=False)
class SpinRep:
    m: int
    basis: tuple[tuple[int, ...], ...]
    gamma: tuple[Sparse, ...]

    @property
    def dim(self) -> int:
        return 2 ** self.m

    @property
    def n(self) -> int:
        return 2 * self.m

    @cached_property
    def _wedges(self) -> dict:
        return {(a, b): self.gamma[a].comm(self.gamma[b]).scale(Fraction(1, 4))
                for a in range(self.n) for b in range(a + 1, self.n)}

    def rho_wedge(self, a: int, b: int) -> Sparse:
        """ρ(e_a∧e_b) = ¼[γ_a, γ_b], where e_a∧e_b maps e_a ↦ e_b, e_b ↦ −e_a."""
        return self._wedges[(a, b)]

    def rho_sparse(self, A: Mat) -> Sparse:
        """ρ(A) = ¼ Σ A_ba γ_a γ_b for A ∈ so(2m)."""
        acc = Sparse(self.dim)
        for a in range(self.n):
            for b in range(a + 1, self.n):
                c = A[b, a]
                if c:
                    acc = acc + self.rho_wedge(a, b).scale(nk.convert(c, G))
        return acc

    def rho(self, A: Mat) -> Mat:
        return self.rho_sparse(A).to_mat()

    def gamma_of(self, v: Sequence) -> Sparse:
        acc = Sparse(self.dim)
        for c, g in zip(v, self.gamma):
            if c:
                acc = acc + g.scale(nk.convert(c, G))
        return acc

    def kahler_action(self) -> Sparse:
        """Clifford multiplication by the Kähler form Σ e_k·Je_k, equal to 2ρ(J)."""
        m = self.m
        acc = Sparse(self.dim)
        for k in range(m):
            acc = acc + self.gamma[k] @ self.gamma[m + k]
        return acc


def _oscillators(m: int, basis: list[tuple[int, ...]]):
    index = {S: i for i, S in enumerate(basis)}
    n = len(basis)
    create, annihilate = [], []
    for k in range(m):
        cd, ad = {}, {}
        for S, col in index.items():
            sign = (1, 0) if sum(1 for s in S if s < k) % 2 == 0 else (-1, 0)
            if k in S:
                T = tuple(s for s in S if s != k)
                ad[(index[T], col)] = sign
            else:
                T = tuple(sorted(S + (k,)))
                cd[(index[T], col)] = sign
        create.append(Sparse(n, cd))
        annihilate.append(Sparse(n, ad))
    return create, annihilate


def so_basis(n: int) -> list[tuple[int, int, Mat]]:
    """(a, b, E_ba − E_ab) for a < b."""
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            rows = [[Fraction(0)] * n for _ in range(n)]
            rows[b][a] = Fraction(1)
            rows[a][b] = Fraction(-1)
            out.append((a, b, Mat(rows)))
    return out


def build_spin_rep(m: int, verify: bool = True) -> SpinRep:
    if not 2 <= m <= MAX_M:
        raise SpinError("SIZE_GUARD", f"m must lie in [2, {MAX_M}], got {m}")
    basis = spinor_basis(m)
    cr, an = _oscillators(m, basis)
    gam = [an[k] - cr[k] for k in range(m)] + [(an[k] + cr[k]).scale(I_UNIT) for k in range(m)]
    rep = SpinRep(m, tuple(basis), tuple(gam))
    if verify:
        verify_spin_rep(rep)
    return rep


def verify_spin_rep(rep: SpinRep) -> None:
    n, dim = rep.n, rep.dim
    ident = Sparse(dim, {(i, i): (1, 0) for i in range(dim)})
    for a in range(n):
        for b in range(a, n):
            ac = rep.gamma[a] @ rep.gamma[b] + rep.gamma[b] @ rep.gamma[a]
            want = ident.scale(-2) if a == b else Sparse(dim)
            if not ac == want:
                raise AssertionError(f"Clifford relation fails for ({a},{b})")
    basis = so_basis(n)
    rho = {(a, b): rep.rho_wedge(a, b) for a, b, _ in basis}
    for a, b, A in basis:
        for c in range(n):
            v = [Fraction(int(i == c)) for i in range(n)]
            if not rho[(a, b)].comm(rep.gamma[c]) == rep.gamma_of(A.apply(v)):
                raise AssertionError(f"equivariance fails for e{a}∧e{b} on e{c}")
    for i, (a, b, A) in enumerate(basis):
        for c, d, B in basis[i + 1:]:
            lhs = rep.rho_sparse(nk.commutator(A, B))
            if not lhs == rho[(a, b)].comm(rho[(c, d)]):
                raise AssertionError(f"ρ fails to be a homomorphism on ({a},{b}),({c},{d})")


# ---------------------------------------------------------------- weights

@dataclass(frozen=True)
class WeightLevel:
    k: int
    rho_eigenvalue: GaussRational
    kahler_eigenvalue: GaussRational
    multiplicity: int
    indices: range


@dataclass(frozen=True)
class WeightDecomposition:
    levels: tuple[WeightLevel, ...]
    sigma: int


def weight_decomposition(rep: SpinRep) -> WeightDecomposition:
    """Eigen-decomposition of ρ(J); the Kähler action 2ρ(J) has eigenvalue σ(m−2k)i on Λ^k."""
    K = rep.kahler_action()
    if not K.is_diagonal():
        raise AssertionError("Kähler action is not diagonal in the occupation basis")
    levels = []
    sigma = None
    for k, rng in enumerate(_level_ranges(rep.m)):
        vals = {K.entry(i, i) for i in rng}
        if len(vals) != 1:
            raise AssertionError(f"level {k} is not an eigenspace")
        val = vals.pop()
        expected = GaussRational(0, rep.m - 2 * k)
        if rep.m != 2 * k:
            s = 1 if val == expected else (-1 if val == GaussRational(0, 2 * k - rep.m) else None)
            if s is None or (sigma is not None and s != sigma):
                raise AssertionError(f"unexpected Kähler eigenvalue {val} on level {k}")
            sigma = s
        levels.append(WeightLevel(k, val * GaussRational(Fraction(1, 2)), val, len(rng), rng))
    return WeightDecomposition(tuple(levels), sigma or 1)


def rho_J(rep: SpinRep) -> Mat:
    return rep.rho(standard_J(rep.m))


# ---------------------------------------------------------------- embeddings

EMBED_LABELS = ("U", "SU", "SO_LAGRANGIAN", "SO_PLUS_U1", "SP", "SP_PLUS_U1")


def standard_J(m: int) -> Mat:
    Z, I = Mat.zeros(m), Mat.identity(m)
    return Mat.block([[Z, -I], [I, Z]])


def quaternionic_K(m: int) -> Mat:
    """Orthogonal K with K² = −1 and KJ = −JK (m even)."""
    n = 2 * m
    rows = [[Fraction(0)] * n for _ in range(n)]
    for p in range(0, m, 2):
        rows[p + 1][p] = Fraction(1)        # e_p ↦ e_{p+1}
        rows[p][p + 1] = Fraction(-1)       # e_{p+1} ↦ −e_p
        rows[m + p + 1][m + p] = Fraction(-1)  # Je_p ↦ −Je_{p+1}
        rows[m + p][m + p + 1] = Fraction(1)   # Je_{p+1} ↦ Je_p
    return Mat(rows)


def _skew_basis(m: int) -> list[Mat]:
    return [A for _, _, A in so_basis(m)]


def _sym_basis(m: int) -> list[Mat]:
    out = []
    for i in range(m):
        for j in range(i, m):
            rows = [[Fraction(0)] * m for _ in range(m)]
            rows[i][j] = rows[j][i] = Fraction(1)
            out.append(Mat(rows))
    return out


def _uform(A: Mat, B: Mat) -> Mat:
    return Mat.block([[A, B], [-B, A]])


def embed_algebra(label: str | Label, m: int) -> list[Mat]:
    label = label.value if isinstance(label, Label) else str(label)
    label = {"U_M": "U", "SU_M": "SU", "SO_M_LAGRANGIAN": "SO_LAGRANGIAN", "SO_M_PLUS_U1": "SO_PLUS_U1"}.get(label, label)
    Zm = Mat.zeros(m)
    if label == "SO_LAGRANGIAN":
        return [_uform(A, Zm) for A in _skew_basis(m)]
    if label == "SO_PLUS_U1":
        return embed_algebra("SO_LAGRANGIAN", m) + [standard_J(m)]
    if label == "U":
        return [_uform(A, Zm) for A in _skew_basis(m)] + [_uform(Zm, B) for B in _sym_basis(m)]
    if label == "SU":
        syms = _sym_basis(m)
        traceless = [B for B in syms if B.trace() == 0]
        diag = [B for B in syms if B.trace() != 0]
        traceless += [diag[i] - diag[i + 1] for i in range(len(diag) - 1)]
        return [_uform(A, Zm) for A in _skew_basis(m)] + [_uform(Zm, B) for B in traceless]
    if label in ("SP", "SP_PLUS_U1"):
        if m % 2:
            raise SpinError("LABEL_DOMAIN", "sp(k) needs m = 2k even")
        n = 2 * m
        J, K = standard_J(m), quaternionic_K(m)
        comm = nk.commutant([J, K], n, Backend.RATIONAL)
        skew = nk.skew_subspace(Mat.identity(n))
        sp = comm.intersect(skew).matrices()
        k = m // 2
        if len(sp) != k * (2 * k + 1):
            raise AssertionError(f"sp({k}) has dimension {len(sp)}")
        return sp + ([J] if label == "SP_PLUS_U1" else [])
    raise SpinError("LABEL_DOMAIN", f"unknown label {label!r}")


# ---------------------------------------------------------------- annihilators

@dataclass(frozen=True)
class Annihilator:
    dim: int
    basis: SubspaceBasis
    profile: tuple[int, ...]

    @property
    def extremal_only(self) -> bool:
        return all(d == 0 for d in self.profile[1:-1])


def annihilator(rep: SpinRep, h: Sequence[Mat]) -> Annihilator:
    """Common kernel of ρ(H) over H in h; profile[k] is the dimension of its projection to Λ^k."""
    dim = rep.dim
    for H in h:
        if H.rows != rep.n or not (H + H.T).is_zero():
            raise ValueError("algebra elements must be skew 2m×2m matrices")
    mats = [rep.rho(H.astype(Backend.RATIONAL) if H.backend is not Backend.RATIONAL else H) for H in h]
    ker = nk.common_kernel(mats, dim, G) if mats else nk.span(
        [[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)], dim, G)
    profile = []
    for rng in _level_ranges(rep.m):
        proj = [[v[i] for i in rng] for v in ker.vectors]
        profile.append(nk.span(proj, len(rng), G).dim if proj else 0)
    return Annihilator(ker.dim, ker, tuple(profile))


def conjugated_annihilator_dim(rep: SpinRep, h: Sequence[Mat], seed: int = 0) -> int:
    Q = cayley_orthogonal(Mat.identity(rep.n), seed)
    return annihilator(rep, conjugate(nk.matrix_span(list(h)), Q).matrices()).dim


# ---------------------------------------------------------------- theorem cases

@dataclass(frozen=True)
class SpinorVerdict:
    case: str
    exists: bool | None
    expected_dim: int | None
    computed_dim: int | None
    profile: tuple[int, ...] | None
    note: str = ""

    @property
    def consistent(self) -> bool:
        if self.computed_dim is None:
            return True
        if self.exists is not None and self.exists != (self.computed_dim > 0):
            return False
        return self.expected_dim is None or self.expected_dim == self.computed_dim

    def as_dict(self) -> dict:
        return {"case": self.case, "exists": self.exists, "expected_dim": self.expected_dim,
                "computed_dim": self.computed_dim, "profile": list(self.profile) if self.profile else None,
                "consistent": self.consistent, "note": self.note}


def parallel_spinor_report(label: Label | str, m: int, tau_nonzero: bool, hol_equal: bool | None = None,
                           algebra: Sequence[Mat] | None = None, blocks: Sequence[str] | None = None,
                           rep: SpinRep | None = None) -> SpinorVerdict:
    """Map a classified horizontal holonomy through the parallel-spinor cases.

    ``algebra`` (skew for the identity metric) enables a direct annihilator cross-check.
    ``blocks`` lists the labels of irreducible factors in the torsion-free, equal-holonomy case.
    """
    label = label if isinstance(label, Label) else Label(label)
    computed = profile = None
    if algebra is not None and 2 <= m <= MAX_M:
        rep = rep or build_spin_rep(m, verify=False)
        ann = annihilator(rep, algebra)
        computed, profile = ann.dim, ann.profile
    if label is Label.TRIVIAL:
        return SpinorVerdict("trivial", True, 2 ** m, computed, profile, "zero algebra fixes every spinor")
    if tau_nonzero:
        if label in (Label.SU_M, Label.SO_M_LAGRANGIAN):
            return SpinorVerdict("torsion", True, 2, computed, profile)
        if label in (Label.U_M, Label.SO_M_PLUS_U1):
            return SpinorVerdict("torsion", False, 0, computed, profile)
    else:
        if hol_equal is False:
            if label is Label.SU_M:
                return SpinorVerdict("torsion_free_distinct", True, 2, computed, profile)
            if label is Label.U_M:
                return SpinorVerdict("torsion_free_distinct", None, None, computed, profile,
                                     "depends on a parallel complex structure other than J")
        if hol_equal:
            if blocks is not None:
                ok = all(b in ("SU", "SU_M", "SP", "TRIVIAL") for b in blocks)
                return SpinorVerdict("torsion_free_equal", ok, None, computed, profile,
                                     "dimension not asserted for sp factors")
            if label is Label.SU_M:
                return SpinorVerdict("torsion_free_equal", True, None, computed, profile)
            if label in (Label.U_M, Label.SO_M_PLUS_U1):
                return SpinorVerdict("torsion_free_equal", False, 0, computed, profile)
    if label is Label.OTHER and algebra is None:
        raise SpinError("UNSUPPORTED_LABEL", "label OTHER needs the algebra for a direct computation")
    return SpinorVerdict("direct", None if computed is None else computed > 0, None, computed, profile,
                         "no case of the classification applies; direct annihilator only")
