"""Exact and floating scalars plus the small dense linear-algebra kernels.

Three backends are supported:

* ``RATIONAL``: :class:`fractions.Fraction` entries,
* ``GAUSS_RATIONAL``: :class:`GaussRational` entries (``a + b i`` with rational parts),
* ``FLOAT64``: Python floats, always compared through :func:`is_zero` with a tolerance.

Matrices never mix backends; promotion is explicit via :meth:`Mat.astype`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_TOL = 1e-9


class Backend(str, Enum):
    RATIONAL = "rational"
    GAUSS_RATIONAL = "gauss_rational"
    FLOAT64 = "float64"

    @property
    def exact(self) -> bool:
        return self is not Backend.FLOAT64


class NumkitError(Exception):
    code = "NUMKIT"


class MixedBackendError(NumkitError):
    code = "MIXED_BACKEND"


class MissingToleranceError(NumkitError):
    code = "MISSING_TOLERANCE"


class SingularMatrixError(NumkitError):
    code = "SINGULAR"


class NoFixpointError(NumkitError):
    """Closure still growing when the round budget ran out."""

    code = "NO_FIXPOINT"

    def __init__(self, message: str, partial: "SubspaceBasis"):
        super().__init__(message)
        self.partial = partial


def is_zero(x, tol: float | None = None) -> bool:
    """The single comparator: exact test for exact scalars, ``|x| <= tol`` for floats."""
    if isinstance(x, float):
        if tol is None:
            raise MissingToleranceError("float comparison needs an explicit tolerance")
        return abs(x) <= tol
    if isinstance(x, complex):
        if tol is None:
            raise MissingToleranceError("float comparison needs an explicit tolerance")
        return abs(x) <= tol
    return x == 0


class GaussRational:
    """``re + im*i`` with :class:`Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @staticmethod
    def coerce(x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRational(x, 0)
        raise MixedBackendError(f"cannot treat {type(x).__name__} as a Gaussian rational")

    def __add__(self, o):
        if isinstance(o, GaussRational):
            return GaussRational(self.re + o.re, self.im + o.im)
        if isinstance(o, (int, Fraction)):
            return GaussRational(self.re + o, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, o):
        if isinstance(o, GaussRational):
            return GaussRational(self.re - o.re, self.im - o.im)
        if isinstance(o, (int, Fraction)):
            return GaussRational(self.re - o, self.im)
        return NotImplemented

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, GaussRational):
            return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        if isinstance(o, (int, Fraction)):
            return GaussRational(self.re * o, self.im * o)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            if o == 0:
                raise ZeroDivisionError("Gaussian rational division by zero")
            return GaussRational(self.re / o, self.im / o)
        if isinstance(o, GaussRational):
            n = o.re * o.re + o.im * o.im
            if n == 0:
                raise ZeroDivisionError("Gaussian rational division by zero")
            return GaussRational((self.re * o.re + self.im * o.im) / n,
                                 (self.im * o.re - self.re * o.im) / n)
        return NotImplemented

    def __rtruediv__(self, o):
        return GaussRational.coerce(o) / self

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, GaussRational):
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Fraction)):
            return self.im == 0 and self.re == o
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussRational(0, 1)


def _scalar_backend(x) -> Backend:
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Backend.RATIONAL
    if isinstance(x, GaussRational):
        return Backend.GAUSS_RATIONAL
    if isinstance(x, float):
        return Backend.FLOAT64
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def convert(x, backend: Backend):
    """Convert one scalar to ``backend`` (only widening conversions are allowed)."""
    if backend is Backend.RATIONAL:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, GaussRational) and x.im == 0:
            return x.re
        raise MixedBackendError(f"cannot convert {x!r} to rational")
    if backend is Backend.GAUSS_RATIONAL:
        return GaussRational.coerce(x)
    if isinstance(x, GaussRational):
        if x.im != 0:
            raise MixedBackendError("complex value cannot become a float")
        return float(x.re)
    return float(x)


def zero_of(backend: Backend):
    if backend is Backend.RATIONAL:
        return Fraction(0)
    if backend is Backend.GAUSS_RATIONAL:
        return GaussRational(0, 0)
    return 0.0


def one_of(backend: Backend):
    if backend is Backend.RATIONAL:
        return Fraction(1)
    if backend is Backend.GAUSS_RATIONAL:
        return GaussRational(1, 0)
    return 1.0


class Mat:
    """Immutable dense matrix whose entries share one backend."""

    __slots__ = ("rows", "cols", "backend", "_e")

    def __init__(self, entries: Sequence[Sequence], backend: Backend | None = None):
        grid = [list(r) for r in entries]
        rows = len(grid)
        cols = len(grid[0]) if rows else 0
        if any(len(r) != cols for r in grid):
            raise ValueError("ragged matrix")
        if backend is None:
            kinds = {_scalar_backend(x) for r in grid for x in r}
            if Backend.FLOAT64 in kinds and len(kinds) > 1:
                if not all(isinstance(x, (float, int)) for r in grid for x in r):
                    raise MixedBackendError("matrix mixes float and exact entries")
                kinds = {Backend.FLOAT64}
            if Backend.GAUSS_RATIONAL in kinds:
                backend = Backend.GAUSS_RATIONAL
            elif Backend.FLOAT64 in kinds:
                backend = Backend.FLOAT64
            else:
                backend = Backend.RATIONAL
        self.rows = rows
        self.cols = cols
        self.backend = backend
        self._e = tuple(tuple(convert(x, backend) for x in r) for r in grid)

    @classmethod
    def _raw(cls, e: tuple, backend: Backend) -> "Mat":
        m = object.__new__(cls)
        m._e = e
        m.rows = len(e)
        m.cols = len(e[0]) if e else 0
        m.backend = backend
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, backend: Backend = Backend.RATIONAL) -> "Mat":
        cols = rows if cols is None else cols
        z = zero_of(backend)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), backend)

    @classmethod
    def identity(cls, n: int, backend: Backend = Backend.RATIONAL) -> "Mat":
        z, o = zero_of(backend), one_of(backend)
        return cls._raw(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), backend)

    @classmethod
    def from_vector(cls, vec: Sequence, rows: int, cols: int, backend: Backend) -> "Mat":
        vec = tuple(vec)
        return cls._raw(tuple(vec[i * cols:(i + 1) * cols] for i in range(rows)), backend)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Mat"]]) -> "Mat":
        backend = blocks[0][0].backend
        out = []
        for brow in blocks:
            for b in brow:
                _same_backend(brow[0], b)
            for i in range(brow[0].rows):
                out.append(tuple(x for b in brow for x in b._e[i]))
        return cls._raw(tuple(out), backend)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[tuple, ...]:
        return self._e

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._e)

    def vector(self) -> tuple:
        return tuple(x for r in self._e for x in r)

    def astype(self, backend: Backend) -> "Mat":
        if backend is self.backend:
            return self
        return Mat._raw(tuple(tuple(convert(x, backend) for x in r) for r in self._e), backend)

    @property
    def T(self) -> "Mat":
        return Mat._raw(tuple(zip(*self._e)) if self._e else (), self.backend)

    def conj_T(self) -> "Mat":
        if self.backend is not Backend.GAUSS_RATIONAL:
            return self.T
        return Mat._raw(tuple(tuple(x.conjugate() for x in r) for r in zip(*self._e)), self.backend)

    def __add__(self, o: "Mat") -> "Mat":
        _same_backend(self, o)
        _same_shape(self, o)
        return Mat._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, o._e)), self.backend)

    def __sub__(self, o: "Mat") -> "Mat":
        _same_backend(self, o)
        _same_shape(self, o)
        return Mat._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, o._e)), self.backend)

    def __neg__(self) -> "Mat":
        return Mat._raw(tuple(tuple(-a for a in r) for r in self._e), self.backend)

    def scale(self, c) -> "Mat":
        c = convert(c, self.backend)
        return Mat._raw(tuple(tuple(c * a for a in r) for r in self._e), self.backend)

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            return self @ c
        return self.scale(c)

    __rmul__ = scale

    def __matmul__(self, o: "Mat") -> "Mat":
        _same_backend(self, o)
        if self.cols != o.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {o.shape}")
        z = zero_of(self.backend)
        ocols = o.cols
        orows = o._e
        out = []
        for r in self._e:
            acc = [z] * ocols
            for k, a in enumerate(r):
                if a:
                    brow = orows[k]
                    for j in range(ocols):
                        b = brow[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(tuple(acc))
        return Mat._raw(tuple(out), self.backend)

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum((a * b for a, b in zip(r, v)), zero_of(self.backend)) for r in self._e)

    def trace(self):
        return sum((self._e[i][i] for i in range(min(self.rows, self.cols))), zero_of(self.backend))

    def is_zero(self, tol: float | None = None) -> bool:
        if self.backend is Backend.FLOAT64 and tol is None:
            raise MissingToleranceError("float comparison needs an explicit tolerance")
        return all(is_zero(x, tol) for r in self._e for x in r)

    def max_abs(self) -> float:
        return max((abs(complex(x)) if isinstance(x, GaussRational) else abs(float(x))
                    for r in self._e for x in r), default=0.0)

    def __eq__(self, o):
        if not isinstance(o, Mat):
            return NotImplemented
        if self.backend is Backend.FLOAT64 or o.backend is Backend.FLOAT64:
            raise MissingToleranceError("use allclose for float matrices")
        return self.shape == o.shape and self._e == o._e

    def __hash__(self):
        return hash((self.shape, self._e))

    def allclose(self, o: "Mat", tol: float = DEFAULT_TOL) -> bool:
        _same_shape(self, o)
        return all(abs(complex(a) - complex(b)) <= tol for r, s in zip(self._e, o._e) for a, b in zip(r, s))

    def to_float(self):
        import numpy as np
        if self.backend is Backend.GAUSS_RATIONAL:
            return np.array([[complex(x) for x in r] for r in self._e], dtype=complex).reshape(self.rows, self.cols)
        return np.array([[float(x) for x in r] for r in self._e], dtype=float).reshape(self.rows, self.cols)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._e)
        return f"Mat[{self.backend.value}]({body})"


def _same_backend(a: Mat, b: Mat) -> None:
    if a.backend is not b.backend:
        raise MixedBackendError(f"{a.backend.value} vs {b.backend.value}")


def _same_shape(a: Mat, b: Mat) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def commutator(a: Mat, b: Mat) -> Mat:
    return a @ b - b @ a


# ---------------------------------------------------------------- elimination

def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _integral_rows(rows: list[list], backend: Backend) -> list[list]:
    """Scale each row by the lcm of its denominators so Bareiss runs over integers."""
    out = []
    for r in rows:
        d = 1
        if backend is Backend.RATIONAL:
            for x in r:
                d = _lcm(d, x.denominator)
            out.append([int(x * d) for x in r])
        else:
            for x in r:
                d = _lcm(_lcm(d, x.re.denominator), x.im.denominator)
            out.append([x * d for x in r])
    return out


def _bareiss_echelon(rows: list[list], backend: Backend) -> tuple[list[list], list[int]]:
    """Fraction-free row echelon form; returns (echelon rows, pivot columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    gauss = backend is Backend.GAUSS_RATIONAL
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            a = row[c]
            if gauss:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - a * prow[j]) / prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - a * prow[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _exact_rref(rows: list[list], backend: Backend) -> tuple[list[list], list[int]]:
    if not rows:
        return [], []
    ech, pivots = _bareiss_echelon(_integral_rows(rows, backend), backend)
    if backend is Backend.RATIONAL:
        ech = [[Fraction(x) for x in r] for r in ech]
    else:
        ech = [[GaussRational.coerce(x) for x in r] for r in ech]
    ncols = len(rows[0])
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / ech[k][c] if backend is Backend.RATIONAL else GaussRational(1) / ech[k][c]
        ech[k] = [x * inv for x in ech[k]]
        for i in range(k):
            f = ech[i][c]
            if f:
                ri, rk = ech[i], ech[k]
                for j in range(c, ncols):
                    if rk[j]:
                        ri[j] = ri[j] - f * rk[j]
    return ech, pivots


def _float_rref(rows: list[list], tol: float) -> tuple[list[list], list[int]]:
    m = [[float(x) for x in r] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= nrows:
            break
        p = max(range(r, nrows), key=lambda i: abs(m[i][c]))
        if is_zero(m[p][c], tol):
            for i in range(r, nrows):
                m[i][c] = 0.0
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0.0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(rows: Sequence[Sequence], backend: Backend, tol: float | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a list of equal-length rows."""
    rows = [list(r) for r in rows]
    if backend is Backend.FLOAT64:
        if tol is None:
            raise MissingToleranceError("float elimination needs a tolerance")
        return _float_rref(rows, tol)
    rows = [[convert(x, backend) for x in r] for r in rows]
    rows = [r for r in rows if any(r)]
    return _exact_rref(rows, backend)


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of ``ambient``-dimensional space, basis kept in reduced echelon form.

    ``shape`` is set when the vectors are flattened matrices.
    """

    ambient: int
    backend: Backend
    vectors: tuple[tuple, ...] = ()
    pivots: tuple[int, ...] = ()
    shape: tuple[int, int] | None = None
    tol: float | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def matrices(self) -> list[Mat]:
        if self.shape is None:
            raise ValueError("subspace is not matrix-valued")
        r, c = self.shape
        return [Mat.from_vector(v, r, c, self.backend) for v in self.vectors]

    def reduce(self, v: Sequence) -> list:
        """Remainder of ``v`` after eliminating the pivot coordinates."""
        v = [convert(x, self.backend) for x in v]
        for vec, p in zip(self.vectors, self.pivots):
            f = v[p]
            nonzero = (not is_zero(f, self.tol)) if self.backend is Backend.FLOAT64 else bool(f)
            if nonzero:
                v = [a - f * b for a, b in zip(v, vec)]
        return v

    def contains(self, v) -> bool:
        if isinstance(v, Mat):
            v = v.vector()
        rem = self.reduce(v)
        return all(is_zero(x, self.tol) for x in rem)

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        return all(self.contains(v) for v in other.vectors)

    def coordinates(self, v) -> list:
        """Coefficients of ``v`` in this basis (``v`` must lie in the span)."""
        if isinstance(v, Mat):
            v = v.vector()
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [convert(v[p], self.backend) for p in self.pivots]

    def __add__(self, other: "SubspaceBasis") -> "SubspaceBasis":
        return span(list(self.vectors) + list(other.vectors), self.ambient, self.backend,
                    tol=self.tol, shape=self.shape)

    def intersect(self, other: "SubspaceBasis") -> "SubspaceBasis":
        if self.dim == 0 or other.dim == 0:
            return span([], self.ambient, self.backend, tol=self.tol, shape=self.shape)
        # a·U = b·V  <=>  (a, -b) in the nullspace of [U; V]^T
        cols = list(self.vectors) + [tuple(-x for x in v) for v in other.vectors]
        mat = Mat([[c[i] for c in cols] for i in range(self.ambient)], self.backend)
        _, ns = rank_nullspace(mat, self.tol)
        vecs = []
        for coeffs in ns.vectors:
            acc = [zero_of(self.backend)] * self.ambient
            for a, u in zip(coeffs[:self.dim], self.vectors):
                if a:
                    acc = [x + a * y for x, y in zip(acc, u)]
            vecs.append(acc)
        return span(vecs, self.ambient, self.backend, tol=self.tol, shape=self.shape)

    def complement_coordinates(self) -> list[int]:
        return [i for i in range(self.ambient) if i not in self.pivots]


def span(vectors: Iterable[Sequence], ambient: int, backend: Backend,
         tol: float | None = None, shape: tuple[int, int] | None = None) -> SubspaceBasis:
    vecs = [list(v) for v in vectors]
    for v in vecs:
        if len(v) != ambient:
            raise ValueError("vector length does not match ambient dimension")
    if backend is Backend.FLOAT64 and tol is None:
        raise MissingToleranceError("float span needs a tolerance")
    red, piv = rref(vecs, backend, tol) if vecs else ([], [])
    return SubspaceBasis(ambient, backend, tuple(tuple(r) for r in red), tuple(piv), shape, tol)


def matrix_span(mats: Sequence[Mat], n: int | None = None, backend: Backend | None = None,
                tol: float | None = None) -> SubspaceBasis:
    if mats:
        n = mats[0].rows
        backend = mats[0].backend
        for m in mats:
            _same_backend(mats[0], m)
    if n is None or backend is None:
        raise ValueError("empty matrix span needs explicit size and backend")
    return span([m.vector() for m in mats], n * n, backend, tol, (n, n))


def rank_nullspace(m: Mat, tol: float | None = None) -> tuple[int, SubspaceBasis]:
    """Rank and a reduced-echelon nullspace basis of ``m``."""
    if m.backend is Backend.FLOAT64 and tol is None:
        raise MissingToleranceError("float elimination needs a tolerance")
    red, piv = rref(m.entries, m.backend, tol)
    cols = m.cols
    z, o = zero_of(m.backend), one_of(m.backend)
    free = [c for c in range(cols) if c not in piv]
    null = []
    for f in free:
        v = [z] * cols
        v[f] = o
        for row, p in zip(red, piv):
            v[p] = -row[f]
        null.append(v)
    return len(piv), span(null, cols, m.backend, tol)


def mat_inverse(m: Mat, tol: float | None = None) -> Mat:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    if m.backend is Backend.FLOAT64 and tol is None:
        tol = DEFAULT_TOL
    aug = [list(r) + list(e) for r, e in zip(m.entries, Mat.identity(n, m.backend).entries)]
    red, piv = rref(aug, m.backend, tol)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrixError("matrix is singular")
    return Mat([r[n:] for r in red[:n]], m.backend)


def determinant(m: Mat):
    """Exact determinant via Bareiss (float input uses partial pivoting)."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return one_of(m.backend)
    if m.backend is Backend.FLOAT64:
        import numpy as np
        return float(np.linalg.det(m.to_float()))
    a = [list(r) for r in m.entries]
    sign = 1
    prev = one_of(m.backend)
    for k in range(n - 1):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return zero_of(m.backend)
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def common_kernel(mats: Sequence[Mat], dim: int, backend: Backend, tol: float | None = None) -> SubspaceBasis:
    """``∩ ker M`` computed incrementally so each solve stays small."""
    z, o = zero_of(backend), one_of(backend)
    basis = [[o if i == j else z for j in range(dim)] for i in range(dim)]
    for m in mats:
        if not basis:
            break
        images = [m.apply(b) for b in basis]
        # columns = images; solve Σ c_k images_k = 0
        sys = Mat([[img[i] for img in images] for i in range(m.rows)], backend)
        _, ns = rank_nullspace(sys, tol)
        new = []
        for coeffs in ns.vectors:
            acc = [z] * dim
            for c, b in zip(coeffs, basis):
                if c:
                    acc = [x + c * y for x, y in zip(acc, b)]
            new.append(acc)
        basis = new
    return span(basis, dim, backend, tol)


# ---------------------------------------------------------------- Lie closures

def bracket_closure(generators: Sequence[Mat], max_rounds: int = 20, tol: float | None = None,
                    n: int | None = None, backend: Backend | None = None) -> SubspaceBasis:
    """Smallest matrix Lie algebra containing ``generators``."""
    if not generators:
        return matrix_span([], n or 0, backend or Backend.RATIONAL, tol)
    first = generators[0]
    for g in generators:
        _same_backend(first, g)
        if g.shape != first.shape or g.rows != g.cols:
            raise ValueError("generators must be square of equal size")
    cur = matrix_span(generators, tol=tol)
    old = []
    new = cur.matrices()
    for _ in range(max_rounds):
        brackets = []
        mats = old + new
        for i, a in enumerate(new):
            for b in mats[: len(old) + i]:
                c = commutator(a, b)
                if not c.is_zero(tol) and not cur.contains(c):
                    brackets.append(c)
        if not brackets:
            return cur
        nxt = matrix_span(cur.matrices() + brackets, tol=tol)
        old = cur.matrices()
        # new directions: basis vectors of nxt not already in cur
        new = [b for b in nxt.matrices() if not cur.contains(b)]
        cur = nxt
    raise NoFixpointError(f"closure still growing after {max_rounds} rounds (dim {cur.dim})", cur)


def commutant(h: Sequence[Mat], n: int | None = None, backend: Backend | None = None,
              tol: float | None = None) -> SubspaceBasis:
    """All X with XH = HX for every H in ``h``."""
    if h:
        n, backend = h[0].rows, h[0].backend
    if n is None or backend is None:
        raise ValueError("empty generator list needs explicit size and backend")
    z = zero_of(backend)
    rows = []
    for H in h:
        _same_backend(h[0], H)
        He = H.entries
        # (XH - HX)_{ij} = Σ_k X_ik H_kj - H_ik X_kj, X flattened row-major
        for i in range(n):
            for j in range(n):
                r = [z] * (n * n)
                for k in range(n):
                    if He[k][j]:
                        r[i * n + k] = r[i * n + k] + He[k][j]
                    if He[i][k]:
                        r[k * n + j] = r[k * n + j] - He[i][k]
                if any(not is_zero(x, tol) for x in r):
                    rows.append(r)
    if not rows:
        o = one_of(backend)
        full = [[o if a == b else z for b in range(n * n)] for a in range(n * n)]
        return span(full, n * n, backend, tol, (n, n))
    _, ns = rank_nullspace(Mat(rows, backend), tol)
    return SubspaceBasis(ns.ambient, backend, ns.vectors, ns.pivots, (n, n), tol)


def skew_subspace(g: Mat, tol: float | None = None) -> SubspaceBasis:
    """{X : gX + (gX)^T = 0}, the Lie algebra so(g)."""
    n = g.rows
    backend = g.backend
    z = zero_of(backend)
    rows = []
    ge = g.entries
    for i in range(n):
        for j in range(i, n):
            r = [z] * (n * n)
            for k in range(n):
                # (gX)_{ij} = Σ_k g_ik X_kj ; (gX)_{ji} = Σ_k g_jk X_ki
                r[k * n + j] = r[k * n + j] + ge[i][k]
                r[k * n + i] = r[k * n + i] + ge[j][k]
            rows.append(r)
    _, ns = rank_nullspace(Mat(rows, backend), tol)
    return SubspaceBasis(ns.ambient, backend, ns.vectors, ns.pivots, (n, n), tol)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def invariant_complex_structures(h: Sequence[Mat], g: Mat, tol: float | None = None,
                                 samples: int = 6, seed: int = 0) -> list[Mat]:
    """Heuristic search for g-orthogonal complex structures commuting with ``h``.

    An empty result means none was found by this strategy, not that none exists.
    """
    n = g.rows
    backend = g.backend
    comm = commutant(list(h), n, backend, tol)
    cand_space = comm.intersect(skew_subspace(g, tol))
    if cand_space.dim == 0:
        return []
    basis = cand_space.matrices()
    rng = random.Random(seed)
    candidates = list(basis)
    for _ in range(samples if len(basis) > 1 else 0):
        coeffs = [rng.randint(-3, 3) for _ in basis]
        acc = Mat.zeros(n, n, backend)
        for c, b in zip(coeffs, basis):
            if c:
                acc = acc + b.scale(c)
        if not acc.is_zero(tol):
            candidates.append(acc)
    found: list[Mat] = []
    ident = Mat.identity(n, backend)
    for K in candidates:
        K2 = K @ K
        lam = K2[0, 0]
        if not (K2 - ident.scale(lam)).is_zero(tol):
            continue
        if backend is Backend.FLOAT64:
            if lam >= -tol:
                continue
            root = math.sqrt(-lam)
            J = K.scale(1.0 / root)
        else:
            root = _rational_sqrt(-lam)
            if -lam <= 0:
                continue
            J = K.scale(1 / root) if root is not None else K.astype(Backend.FLOAT64).scale(1.0 / math.sqrt(float(-lam)))
        for S in (J, -J):
            if not any(_mat_close(S, F) for F in found):
                found.append(S)
    return found


def _mat_close(a: Mat, b: Mat) -> bool:
    if a.backend is Backend.FLOAT64 or b.backend is Backend.FLOAT64:
        return a.astype(Backend.FLOAT64).allclose(b.astype(Backend.FLOAT64))
    return a == b


# ---------------------------------------------------------------- small helpers

def char_poly(m: Mat) -> list:
    """Coefficients c_0..c_n of det(tI - m), lowest degree first (Faddeev-LeVerrier)."""
    n = m.rows
    backend = m.backend
    coeffs = [zero_of(backend)] * (n + 1)
    coeffs[n] = one_of(backend)
    M = Mat.zeros(n, n, backend)
    ident = Mat.identity(n, backend)
    for k in range(1, n + 1):
        M = m @ M + ident.scale(coeffs[n - k + 1])
        tr = (m @ M).trace()
        coeffs[n - k] = -tr / k if backend is not Backend.FLOAT64 else -tr / k
    return coeffs


def rational_roots(coeffs: Sequence[Fraction]) -> dict[Fraction, int]:
    """Rational roots (with multiplicity) of a rational polynomial, lowest degree first."""
    import flint
    poly = flint.fmpq_poly([flint.fmpq(int(Fraction(c).numerator), int(Fraction(c).denominator)) for c in coeffs])
    out: dict[Fraction, int] = {}
    if poly.degree() <= 0:
        return out
    _, factors = poly.factor()
    for f, mult in factors:
        if f.degree() == 1:
            a, b = f[1], f[0]
            root = -Fraction(int(b.p), int(b.q)) / Fraction(int(a.p), int(a.q))
            out[root] = out.get(root, 0) + mult
    return out


def eigenspace(m: Mat, value, tol: float | None = None) -> SubspaceBasis:
    n = m.rows
    return rank_nullspace(m - Mat.identity(n, m.backend).scale(value), tol)[1]


def is_symmetric(m: Mat, tol: float | None = None) -> bool:
    return (m - m.T).is_zero(tol)


def inertia(sym: Mat) -> tuple[int, int, int]:
    """(positive, zero, negative) counts of an exact symmetric matrix by symmetric pivoting."""
    if sym.backend is not Backend.RATIONAL:
        raise MixedBackendError("inertia needs a rational symmetric matrix")
    a = [list(r) for r in sym.entries]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i -> e_i + e_j makes the (i,i) entry 2 a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / d
            if f:
                for k in active:
                    a[i][k] -= f * a[piv][k]
        for i in active:
            a[i][piv] = a[piv][i] = Fraction(0)
    return pos, n - pos - neg, neg


def is_positive_definite(sym: Mat) -> bool:
    if sym.backend is Backend.FLOAT64:
        import numpy as np
        return bool(np.all(np.linalg.eigvalsh(sym.to_float()) > 0))
    p, _, _ = inertia(sym)
    return p == sym.rows
