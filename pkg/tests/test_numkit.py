from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from holonomy_lab import numkit as nk
from holonomy_lab.numkit import Backend, GaussRational, Mat

F = Fraction


def E(n, i, j):
    return Mat([[F(int((r, c) == (i, j))) for c in range(n)] for r in range(n)])


def leibniz_det(rows):
    n = len(rows)
    total = F(0)
    for perm in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = F(-1) ** inv
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def brute_rank(rows):
    """Largest k with a nonzero k×k minor."""
    from itertools import combinations
    r, c = len(rows), len(rows[0])
    for k in range(min(r, c), 0, -1):
        for ri in combinations(range(r), k):
            for ci in combinations(range(c), k):
                if leibniz_det([[rows[i][j] for j in ci] for i in ri]) != 0:
                    return k
    return 0


small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def u3_basis():
    m = 3
    Z = Mat.zeros(m)
    out = []
    for a in range(m):
        for b in range(a + 1, m):
            A = E(m, b, a) - E(m, a, b)
            out.append(Mat.block([[A, Z], [Z, A]]))
    for a in range(m):
        for b in range(a, m):
            B = E(m, a, b) + E(m, b, a) if a != b else E(m, a, a)
            out.append(Mat.block([[Z, B], [-B, Z]]))
    return out


def test_identity_rank_and_zero_nullspace():
    r, ns = nk.rank_nullspace(Mat.identity(2))
    assert r == 2 and ns.dim == 0


def test_zero_matrix_nullspace_is_everything():
    r, ns = nk.rank_nullspace(Mat.zeros(2))
    assert r == 0 and ns.dim == 2


def test_rank_two_example_with_known_kernel():
    M = Mat([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    r, ns = nk.rank_nullspace(M)
    assert r == 2 == brute_rank(M.entries)
    assert ns.dim == 1 and ns.contains((-1, -1, 1))


def test_float_rank_requires_tolerance():
    with pytest.raises(nk.MissingToleranceError):
        nk.rank_nullspace(Mat([[1.0, 2.0], [2.0, 4.0]], Backend.FLOAT64))
    r, _ = nk.rank_nullspace(Mat([[1.0, 2.0], [2.0, 4.0]], Backend.FLOAT64), tol=1e-9)
    assert r == 1


def test_mixed_backend_rejected():
    with pytest.raises(nk.MixedBackendError):
        Mat([[F(1), 0.5]])


def test_inverse_examples():
    assert nk.mat_inverse(Mat.identity(3)) == Mat.identity(3)
    assert nk.mat_inverse(Mat([[0, 1], [-1, 0]])) == Mat([[0, -1], [1, 0]])
    Z, I = Mat.zeros(3), Mat.identity(3)
    assert nk.mat_inverse(Mat.block([[Z, I], [-I, Z]])) == Mat.block([[Z, -I], [I, Z]])
    with pytest.raises(nk.SingularMatrixError):
        nk.mat_inverse(Mat([[1, 2], [2, 4]]))


@given(square(3))
def test_inverse_is_exact_when_full_rank(rows):
    M = Mat(rows)
    if leibniz_det(rows) == 0:
        return
    assert M @ nk.mat_inverse(M) == Mat.identity(3)


@given(square(3))
def test_determinant_matches_leibniz(rows):
    assert nk.determinant(Mat(rows)) == leibniz_det(rows)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=3, max_size=3))
def test_rank_matches_minor_scan_and_float_route(rows):
    M = Mat(rows)
    r, ns = nk.rank_nullspace(M)
    assert r == brute_rank(rows)
    assert r + ns.dim == 4
    for v in ns.vectors:
        assert all(x == 0 for x in M.apply(v))
    rf, _ = nk.rank_nullspace(M.astype(Backend.FLOAT64), tol=1e-9)
    assert rf == r


def test_bracket_closure_examples():
    assert nk.bracket_closure([], n=3, backend=Backend.RATIONAL).dim == 0
    gens = [E(3, 0, 1) - E(3, 1, 0), E(3, 0, 2) - E(3, 2, 0)]
    h = nk.bracket_closure(gens)
    assert h.dim == 3 and h.contains(E(3, 1, 2) - E(3, 2, 1))
    u3 = u3_basis()
    assert nk.bracket_closure(u3).dim == 9 == nk.matrix_span(u3).dim


def test_bracket_closure_reports_missing_fixpoint():
    gens = [E(4, 0, 1) - E(4, 1, 0), E(4, 1, 2) - E(4, 2, 1), E(4, 2, 3) - E(4, 3, 2)]
    with pytest.raises(nk.NoFixpointError) as info:
        nk.bracket_closure(gens, max_rounds=1)
    assert info.value.partial.dim >= 3


@given(st.lists(square(3), min_size=1, max_size=2))
def test_bracket_closure_is_closed(mats):
    gens = [Mat(r) - Mat(r).T for r in mats]
    h = nk.bracket_closure(gens, n=3, backend=Backend.RATIONAL)
    basis = h.matrices()
    for X in basis:
        for Y in basis:
            assert h.contains(nk.commutator(X, Y))


def test_commutant_examples():
    assert nk.commutant([Mat.zeros(3)]).dim == 9
    so3 = [E(3, b, a) - E(3, a, b) for a in range(3) for b in range(a + 1, 3)]
    c = nk.commutant(so3)
    assert c.dim == 1 and c.contains(Mat.identity(3))
    lag = [X for X in u3_basis()[:3]]
    assert nk.commutant(lag).dim == 4


@given(square(3))
def test_commutant_elements_commute(rows):
    H = Mat(rows)
    for X in nk.commutant([H]).matrices():
        assert (X @ H - H @ X).is_zero()


def test_invariant_complex_structures():
    Ks = nk.invariant_complex_structures([], Mat.identity(2))
    assert any(K == Mat([[0, -1], [1, 0]]) for K in Ks)
    J = Mat.block([[Mat.zeros(3), -Mat.identity(3)], [Mat.identity(3), Mat.zeros(3)]])
    u3 = u3_basis()
    # trace-free part of u(3): drop the identity of the symmetric block
    diag = [X for X in u3[3:] if X[0, 3] or X[1, 4] or X[2, 5]]
    offdiag = [X for X in u3[3:] if X not in diag]
    su3 = u3[:3] + offdiag + [diag[0] - diag[1], diag[1] - diag[2]]
    assert nk.bracket_closure(su3).dim == 8
    for h in (u3, su3):
        found = nk.invariant_complex_structures(h, Mat.identity(6))
        assert {K.entries for K in found} == {J.entries, (-J).entries}


def test_gauss_rationals_normalize():
    z = GaussRational(F(2, 4), F(-3, 6))
    assert z.re == F(1, 2) and z.im == F(-1, 2)
    assert (z * z.conjugate()).im == 0
    assert GaussRational(0, 1) * GaussRational(0, 1) == GaussRational(-1)


def test_inertia_counts():
    assert nk.inertia(Mat([[1, 0, 0], [0, -2, 0], [0, 0, 0]])) == (1, 1, 1)
    assert nk.is_positive_definite(Mat([[2, 1], [1, 2]]))
    assert not nk.is_positive_definite(Mat([[1, 2], [2, 1]]))
