"""Rational-function calculus on R^n: parsing, brackets, Lie derivatives, d, evaluation.

Polynomial arithmetic and multivariate gcd are delegated to python-flint's
``fmpq_mpoly`` (graded-lex order).  A :class:`RatFunc` is kept in canonical form:
numerator and denominator coprime, denominator monic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import flint

from .numkit import Backend, Mat

DEGREE_LIMIT = 64


class PolycalcError(Exception):
    code = "POLYCALC"


class ParseError(PolycalcError):
    code = "SYNTAX_ERROR"

    def __init__(self, message: str, pos: int | None = None, code: str | None = None):
        super().__init__(message if pos is None else f"{message} at position {pos}")
        self.pos = pos
        if code:
            self.code = code


class PoleAtPointError(PolycalcError):
    code = "POLE_AT_POINT"


class DegreeOverflowError(PolycalcError):
    code = "DEGREE_OVERFLOW"


def _fmpq(x) -> flint.fmpq:
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _frac(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


class Ring:
    """Coordinate ring Q(x_1..x_n) with fixed variable names."""

    __slots__ = ("names", "n", "ctx", "_zero", "_one", "_index")

    def __init__(self, names: tuple[str, ...]):
        self.names = names
        self.n = len(names)
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
        self._index = {nm: i for i, nm in enumerate(names)}
        self._zero = RatFunc._make(self, self.ctx.from_dict({}), self.ctx.constant(1))
        self._one = RatFunc._make(self, self.ctx.constant(1), self.ctx.constant(1))

    @staticmethod
    @lru_cache(maxsize=None)
    def get(names: tuple[str, ...]) -> "Ring":
        return Ring(tuple(names))

    @staticmethod
    def standard(n: int) -> "Ring":
        return Ring.get(tuple(f"x{i}" for i in range(1, n + 1)))

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def zero(self) -> "RatFunc":
        return self._zero

    @property
    def one(self) -> "RatFunc":
        return self._one

    def const(self, c) -> "RatFunc":
        if isinstance(c, RatFunc):
            return c
        return RatFunc._make(self, self.ctx.constant(_fmpq(c)), self.ctx.constant(1))

    def var(self, i: int) -> "RatFunc":
        return RatFunc._make(self, self.ctx.gens()[i], self.ctx.constant(1))

    def parse(self, src: str) -> "RatFunc":
        return parse_expr(src, self)

    def __eq__(self, o):
        return isinstance(o, Ring) and o.names == self.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"


class RatFunc:
    """Exact rational function num/den over Q."""

    __slots__ = ("ring", "num", "den")

    @classmethod
    def _make(cls, ring: Ring, num, den) -> "RatFunc":
        r = object.__new__(cls)
        r.ring, r.num, r.den = ring, num, den
        return r

    @classmethod
    def _normalized(cls, ring: Ring, num, den) -> "RatFunc":
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            return ring.zero
        if den.is_constant():
            c = den.leading_coefficient()
            if c != 1:
                num = num / c
            den = ring.ctx.constant(1)
        else:
            g = num.gcd(den)
            if not g.is_constant():
                num = num / g
                den = den / g
            c = den.leading_coefficient()
            if c != 1:
                num = num / c
                den = den / c
        if num.total_degree() > DEGREE_LIMIT or den.total_degree() > DEGREE_LIMIT:
            raise DegreeOverflowError(f"total degree exceeds {DEGREE_LIMIT}")
        return cls._make(ring, num, den)

    # -- arithmetic
    def _coerce(self, o) -> "RatFunc":
        if isinstance(o, RatFunc):
            if o.ring is not self.ring and o.ring != self.ring:
                raise ValueError("rational functions over different rings")
            return o
        if isinstance(o, (int, Fraction)):
            return self.ring.const(o)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            if self.den.is_constant():
                s = self.num + o.num
                return self.ring.zero if s.is_zero() else RatFunc._make(self.ring, s, self.den)
            return RatFunc._normalized(self.ring, self.num + o.num, self.den)
        return RatFunc._normalized(self.ring, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(self.ring, -self.num, self.den)

    def __sub__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        if self.num.is_zero() or o.num.is_zero():
            return self.ring.zero
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc._make(self.ring, self.num * o.num, self.den)
        return RatFunc._normalized(self.ring, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc._normalized(self.ring, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return self._coerce(o) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return RatFunc._normalized(self.ring, self.num ** k, self.den ** k)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = self.ring.const(o)
        if not isinstance(o, RatFunc):
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return _frac(self.num.leading_coefficient()) if not self.num.is_zero() else Fraction(0)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    @property
    def degree(self) -> int:
        return max(self.num.total_degree(), self.den.total_degree(), 0)

    # -- calculus
    def diff(self, i: int) -> "RatFunc":
        dn = self.num.derivative(i)
        if self.den.is_constant():
            return self.ring.zero if dn.is_zero() else RatFunc._make(self.ring, dn, self.den)
        dd = self.den.derivative(i)
        return RatFunc._normalized(self.ring, dn * self.den - self.num * dd, self.den * self.den)

    def __call__(self, *point) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        pt = [_fmpq(x) for x in point]
        d = self.den(*pt)
        if d == 0:
            raise PoleAtPointError(f"denominator {self.den} vanishes at {tuple(str(x) for x in point)}")
        return _frac(self.num(*pt) / d)

    def evaluate_float(self, point: Sequence[float]) -> float:
        return _horner_float(self.num, point) / _horner_float(self.den, point)

    def compose_univariate(self, polys: Sequence["flint.fmpq_mpoly"], ctx) -> tuple:
        return self.num.compose(*polys, ctx=ctx), self.den.compose(*polys, ctx=ctx)

    def terms(self) -> tuple[list, list]:
        return list(self.num.terms()), list(self.den.terms())

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def _horner_float(p, point) -> float:
    total = 0.0
    for exps, c in p.terms():
        t = float(_frac(c))
        for x, e in zip(point, exps):
            if e:
                t *= x ** int(e)
        total += t
    return total


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.)")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if m.group(1):
            out.append(("num", m.group(1), pos))
        elif m.group(2):
            out.append(("id", m.group(2), pos))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", pos)
            out.append(("op", ch, pos))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, ring: Ring):
        self.toks = _tokenize(src)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val: str):
        t = self.take()
        if t[1] != val:
            raise ParseError(f"expected {val!r}", t[2])

    def parse(self) -> RatFunc:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", t[2])
        return e

    def expr(self) -> RatFunc:
        acc = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> RatFunc:
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                acc = acc * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by an expression that expands to zero", tok[2],
                                     code="DIVIDE_BY_ZERO_POLY")
                acc = acc / rhs
        return acc

    def unary(self) -> RatFunc:
        t = self.peek()
        if t[0] == "op" and t[1] in ("+", "-"):
            self.take()
            v = self.unary()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "num":
                raise ParseError("exponent must be a nonnegative integer literal", t[2])
            return base ** int(t[1])
        return base

    def atom(self) -> RatFunc:
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return self.ring.const(int(val))
        if kind == "id":
            try:
                return self.ring.var(self.ring.index(val))
            except KeyError:
                raise ParseError(f"unknown variable {val!r}", pos, code="UNKNOWN_VARIABLE") from None
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", pos)


def parse_expr(src: str, ring: Ring | int) -> RatFunc:
    """Parse ``src``; ``ring`` is a :class:`Ring` or a dimension n (variables x1..xn)."""
    if isinstance(ring, int):
        ring = Ring.standard(ring)
    return _Parser(src, ring).parse()


# ---------------------------------------------------------------- tensor fields

def _check_ring(*objs) -> Ring:
    ring = objs[0].ring
    for o in objs[1:]:
        if o.ring != ring:
            raise ValueError("fields live on different coordinate rings")
    return ring


@dataclass(frozen=True)
class VectorField:
    ring: Ring
    comps: tuple[RatFunc, ...]

    def __post_init__(self):
        if len(self.comps) != self.ring.n:
            raise ValueError("component count must equal the ambient dimension")

    @classmethod
    def coordinate(cls, ring: Ring, i: int) -> "VectorField":
        return cls(ring, tuple(ring.one if j == i else ring.zero for j in range(ring.n)))

    def __call__(self, f: RatFunc) -> RatFunc:
        """Directional derivative V(f)."""
        acc = self.ring.zero
        for i, c in enumerate(self.comps):
            if c:
                d = f.diff(i)
                if d:
                    acc = acc + c * d
        return acc

    def __add__(self, o: "VectorField") -> "VectorField":
        return VectorField(self.ring, tuple(a + b for a, b in zip(self.comps, o.comps)))

    def __sub__(self, o: "VectorField") -> "VectorField":
        return VectorField(self.ring, tuple(a - b for a, b in zip(self.comps, o.comps)))

    def __neg__(self):
        return VectorField(self.ring, tuple(-a for a in self.comps))

    def scale(self, f) -> "VectorField":
        return VectorField(self.ring, tuple(f * a for a in self.comps))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def evaluate(self, p) -> tuple[Fraction, ...]:
        return tuple(c.evaluate(p) for c in self.comps)


def combine(ring: Ring, coeffs: Sequence[RatFunc], fields: Sequence[VectorField]) -> VectorField:
    acc = [ring.zero] * ring.n
    for c, v in zip(coeffs, fields):
        if c:
            acc = [a + c * b for a, b in zip(acc, v.comps)]
    return VectorField(ring, tuple(acc))


@dataclass(frozen=True)
class OneForm:
    ring: Ring
    comps: tuple[RatFunc, ...]

    def __post_init__(self):
        if len(self.comps) != self.ring.n:
            raise ValueError("component count must equal the ambient dimension")

    def __call__(self, v: VectorField) -> RatFunc:
        acc = self.ring.zero
        for a, b in zip(self.comps, v.comps):
            if a and b:
                acc = acc + a * b
        return acc

    def evaluate(self, p) -> tuple[Fraction, ...]:
        return tuple(c.evaluate(p) for c in self.comps)


class _TriangleTensor:
    """Shared storage for two-index tensors keeping only i <= j (or i < j)."""

    antisymmetric = False

    def __init__(self, ring: Ring, upper: dict[tuple[int, int], RatFunc]):
        self.ring = ring
        self.upper = {k: v for k, v in upper.items() if not v.is_zero()}
        for (i, j) in self.upper:
            if i > j or (self.antisymmetric and i == j):
                raise ValueError("only the upper triangle is stored")

    @classmethod
    def from_matrix(cls, ring: Ring, mat: Sequence[Sequence[RatFunc]]):
        n = len(mat)
        up = {}
        for i in range(n):
            for j in range(i + 1 if cls.antisymmetric else i, n):
                up[(i, j)] = mat[i][j]
        return cls(ring, up)

    def __getitem__(self, ij) -> RatFunc:
        i, j = ij
        if i <= j:
            if self.antisymmetric and i == j:
                return self.ring.zero
            return self.upper.get((i, j), self.ring.zero)
        v = self.upper.get((j, i), self.ring.zero)
        return -v if self.antisymmetric else v

    def __call__(self, u: VectorField, v: VectorField) -> RatFunc:
        acc = self.ring.zero
        n = self.ring.n
        for i in range(n):
            if not u.comps[i]:
                continue
            for j in range(n):
                if v.comps[j]:
                    c = self[i, j]
                    if c:
                        acc = acc + c * u.comps[i] * v.comps[j]
        return acc

    def matrix(self) -> list[list[RatFunc]]:
        n = self.ring.n
        return [[self[i, j] for j in range(n)] for i in range(n)]

    def evaluate(self, p) -> Mat:
        n = self.ring.n
        return Mat([[self[i, j].evaluate(p) for j in range(n)] for i in range(n)], Backend.RATIONAL)

    def is_zero(self) -> bool:
        return not self.upper

    def __eq__(self, o):
        return type(o) is type(self) and self.ring == o.ring and self.matrix() == o.matrix()


class TwoForm(_TriangleTensor):
    antisymmetric = True


class SymTensor(_TriangleTensor):
    antisymmetric = False


@dataclass(frozen=True)
class EndoField:
    """Endomorphism field: ``comps[i][j]`` is the i-th component of the image of the j-th basis vector."""

    ring: Ring
    comps: tuple[tuple[RatFunc, ...], ...]

    def evaluate(self, p) -> Mat:
        return Mat([[c.evaluate(p) for c in r] for r in self.comps], Backend.RATIONAL)


def vf_bracket(v: VectorField, w: VectorField) -> VectorField:
    ring = _check_ring(v, w)
    return VectorField(ring, tuple(v(wi) - w(vi) for vi, wi in zip(v.comps, w.comps)))


def exterior_d(omega: OneForm) -> TwoForm:
    ring = omega.ring
    n = ring.n
    up = {}
    for a in range(n):
        for b in range(a + 1, n):
            up[(a, b)] = omega.comps[b].diff(a) - omega.comps[a].diff(b)
    return TwoForm(ring, up)


def lie_derivative(v: VectorField, t):
    """L_V of a OneForm, TwoForm or SymTensor."""
    ring = _check_ring(v, t)
    n = ring.n
    dv = [[v.comps[k].diff(i) for k in range(n)] for i in range(n)]  # dv[i][k] = ∂_i V^k
    if isinstance(t, OneForm):
        out = []
        for i in range(n):
            acc = v(t.comps[i])
            for k in range(n):
                if t.comps[k] and dv[i][k]:
                    acc = acc + t.comps[k] * dv[i][k]
            out.append(acc)
        return OneForm(ring, tuple(out))
    if isinstance(t, _TriangleTensor):
        up = {}
        lo = 1 if t.antisymmetric else 0
        for i in range(n):
            for j in range(i + lo, n):
                acc = v(t[i, j])
                for k in range(n):
                    if dv[i][k]:
                        c = t[k, j]
                        if c:
                            acc = acc + c * dv[i][k]
                    if dv[j][k]:
                        c = t[i, k]
                        if c:
                            acc = acc + c * dv[j][k]
                up[(i, j)] = acc
        return type(t)(ring, up)
    raise TypeError(f"unsupported tensor type {type(t).__name__}")


def evaluate(field, p):
    """Exact value of a field at ``p``: Fraction, tuple or :class:`Mat`."""
    if isinstance(field, RatFunc):
        return field.evaluate(p)
    if isinstance(field, (VectorField, OneForm)):
        return field.evaluate(p)
    if isinstance(field, (_TriangleTensor, EndoField, RatMat)):
        return field.evaluate(p)
    raise TypeError(f"cannot evaluate {type(field).__name__}")


# ---------------------------------------------------------------- function matrices

class RatMat:
    """Small dense matrix of rational functions (frame-level tensors)."""

    __slots__ = ("ring", "rows", "cols", "e")

    def __init__(self, ring: Ring, entries: Sequence[Sequence]):
        self.ring = ring
        self.e = tuple(tuple(ring.const(x) if not isinstance(x, RatFunc) else x for x in r) for r in entries)
        self.rows = len(self.e)
        self.cols = len(self.e[0]) if self.e else 0

    @classmethod
    def zeros(cls, ring: Ring, r: int, c: int | None = None) -> "RatMat":
        c = r if c is None else c
        return cls(ring, [[ring.zero] * c for _ in range(r)])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "RatMat":
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> RatFunc:
        return self.e[ij[0]][ij[1]]

    def col(self, j: int) -> tuple[RatFunc, ...]:
        return tuple(r[j] for r in self.e)

    @property
    def T(self) -> "RatMat":
        return RatMat(self.ring, list(zip(*self.e)))

    def __add__(self, o: "RatMat") -> "RatMat":
        return RatMat(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.e, o.e)])

    def __sub__(self, o: "RatMat") -> "RatMat":
        return RatMat(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.e, o.e)])

    def __neg__(self) -> "RatMat":
        return RatMat(self.ring, [[-a for a in r] for r in self.e])

    def scale(self, f) -> "RatMat":
        if isinstance(f, (int, Fraction)) and f == 0 or isinstance(f, RatFunc) and f.is_zero():
            return RatMat.zeros(self.ring, self.rows, self.cols)
        return RatMat(self.ring, [[f * a if a else a for a in r] for r in self.e])

    def __matmul__(self, o: "RatMat") -> "RatMat":
        if self.cols != o.rows:
            raise ValueError("shape mismatch")
        z = self.ring.zero
        out = []
        for r in self.e:
            acc = [z] * o.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(o.e[k]):
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return RatMat(self.ring, out)

    def apply(self, v: Sequence[RatFunc]) -> tuple[RatFunc, ...]:
        out = []
        for r in self.e:
            acc = self.ring.zero
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def comm(self, o: "RatMat") -> "RatMat":
        return self @ o - o @ self

    def derive(self, v: VectorField) -> "RatMat":
        return RatMat(self.ring, [[v(a) if a else a for a in r] for r in self.e])

    def trace(self) -> RatFunc:
        acc = self.ring.zero
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.e[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.e for a in r)

    def evaluate(self, p) -> Mat:
        return Mat([[a.evaluate(p) for a in r] for r in self.e], Backend.RATIONAL)

    def max_degree(self) -> int:
        return max((a.degree for r in self.e for a in r), default=0)

    def __eq__(self, o):
        return isinstance(o, RatMat) and self.e == o.e

    def __hash__(self):
        return hash(self.e)

    def __repr__(self):
        return "RatMat[" + "; ".join(", ".join(str(a) for a in r) for r in self.e) + "]"


def ratmat_inverse(m: RatMat) -> RatMat:
    """Gauss-Jordan inverse over the rational-function field."""
    n = m.rows
    ring = m.ring
    a = [list(r) + [ring.one if i == j else ring.zero for j in range(n)] for i, r in enumerate(m.e)]
    for c in range(n):
        p = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if p is None:
            raise ZeroDivisionError("matrix of rational functions is singular")
        a[c], a[p] = a[p], a[c]
        inv = ring.one / a[c][c]
        a[c] = [x * inv if x else x for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[c])]
    return RatMat(ring, [r[n:] for r in a])


def ratmat_det(m: RatMat) -> RatFunc:
    n = m.rows
    ring = m.ring
    a = [list(r) for r in m.e]
    det = ring.one
    for c in range(n):
        p = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if p is None:
            return ring.zero
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = det * a[c][c]
        inv = ring.one / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[c])]
    return det
