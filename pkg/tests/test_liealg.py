from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from holonomy_lab import liealg as la
from holonomy_lab import numkit as nk
from holonomy_lab import subsym as ss


def flipped(L, pair):
    C = {(i, j): list(L.C[i][j]) for i in range(L.dim) for j in range(i + 1, L.dim)}
    C[pair] = [-x for x in C[pair]]
    return C


def test_jacobi_residuals():
    assert la.jacobi_check(la.abelian(4)) == 0
    assert la.jacobi_check(la.so3()) == 0
    so4 = la.so_pq(0, 4)
    pair = next((i, j) for i in range(6) for j in range(i + 1, 6) if any(so4.C[i][j]))
    assert la.jacobi_check(la.LieAlgebraTable(6, flipped(so4, pair), check=False)) != 0
    with pytest.raises(la.JacobiError):
        la.LieAlgebraTable(6, flipped(so4, pair))


def test_one_flip_in_dimension_three_changes_the_real_form():
    # every table [e1,e2]=a e3, [e2,e3]=b e1, [e3,e1]=c e2 is a Lie algebra
    L = la.LieAlgebraTable(3, flipped(la.so3(), (0, 1)))
    assert la.jacobi_check(L) == 0
    assert la.killing_fingerprint(L).signature == (2, 0, 1)


def test_structure_constants_antisymmetric():
    with pytest.raises(ValueError):
        la.LieAlgebraTable(2, [[[0, 0], [1, 0]], [[1, 0], [0, 0]]], check=False)
    L = la.so3()
    assert all(L.C[i][j][k] == -L.C[j][i][k] for i in range(3) for j in range(3) for k in range(3))


@pytest.mark.parametrize("table,dim,sig,semisimple", [
    (lambda: la.so_pq(0, 5), 10, (0, 0, 10), True),
    (lambda: la.so_pq(1, 4), 10, (4, 0, 6), True),
    (lambda: la.heisenberg(3), 7, (0, 7, 0), False),
])
def test_killing_fingerprints(table, dim, sig, semisimple):
    fp = la.killing_fingerprint(table())
    assert (fp.dim, fp.signature, fp.semisimple) == (dim, sig, semisimple)
    assert sum(fp.signature) == fp.dim


def test_heisenberg_is_two_step_nilpotent():
    L = la.heisenberg(3)
    assert la.killing_form(L).is_zero()
    assert la.derived_series(L) == (7, 1, 0)
    assert la.center(L).dim == 1 and la.radical(L).dim == 7


def test_subalgebra_closure_examples():
    L = la.so3()
    assert la.subalgebra_closure(L, [])[0].dim == 0
    assert la.subalgebra_closure(L, [(1, 0, 0), (0, 1, 0)])[0].dim == 3


def test_bracket_of_horizontal_part_in_torsion_family():
    q = ss.torsion_family(3, 1, 2)
    L = q.L
    p = [tuple(F(int(i == j)) for i in range(L.dim)) for j in q.p_indices]
    brackets = [L.bracket(x, y) for x in p for y in p]
    span = nk.span(brackets, L.dim, nk.Backend.RATIONAL)
    assert span.dim == 4
    assert la.subalgebra_closure(L, list(span.vectors))[0].dim == 4


@pytest.mark.parametrize("m", [3, 4])
def test_zoo_targets_are_separated(m):
    fps = la.zoo_fingerprints(m)
    for name, fp in fps.items():
        assert la.match_zoo(fp, m).label == name


def test_zoo_examples():
    assert la.match_zoo(la.killing_fingerprint(la.so_pq(0, 5)), 3).label == "SO_M_PLUS_2"
    euclid = la.killing_fingerprint(la.semidirect_so_pq(0, 4))
    assert euclid.radical_dim == 4 and la.match_zoo(euclid, 3).label == "EUCLIDEAN_MOTION"
    assert la.match_zoo(la.killing_fingerprint(la.heisenberg(3)), 3).label == "HEISENBERG"
    assert la.match_zoo(la.killing_fingerprint(la.abelian(2)), 3).label == "UNMATCHED"


TABLES = {
    "so3": la.so3,
    "so13": lambda: la.so_pq(1, 3),
    "euclid3": lambda: la.semidirect_so_pq(0, 3),
    "heis2": lambda: la.heisenberg(2),
}

vec = st.lists(st.integers(-3, 3), min_size=1, max_size=10)


@given(st.sampled_from(sorted(TABLES)), vec, vec, vec)
def test_killing_form_is_ad_invariant(name, x, y, z):
    L = TABLES[name]()
    d = L.dim
    x, y, z = [tuple(F(v[i % len(v)]) for i in range(d)) for v in (x, y, z)]
    B = la.killing_form(L)

    def b(u, v):
        return sum(u[i] * B[i, j] * v[j] for i in range(d) for j in range(d))
    assert b(L.bracket(x, y), z) + b(y, L.bracket(x, z)) == 0


@given(st.sampled_from(sorted(TABLES)), st.integers(0, 10 ** 6))
def test_fingerprint_is_basis_independent(name, seed):
    L = TABLES[name]()
    L2 = la.random_basis_change(L, seed)
    assert la.jacobi_check(L2) == 0
    assert la.killing_fingerprint(L2) == la.killing_fingerprint(L)


@pytest.mark.parametrize("name", ["so3", "so13"])
def test_semisimple_tables_are_perfect(name):
    L = TABLES[name]()
    # the series stops once it stabilises, so a perfect algebra yields a single entry
    assert la.derived_series(L) == (L.dim,)
