import random
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy_lab import numkit as nk
from holonomy_lab import spinrep as sp
from holonomy_lab.holonomy import Label
from holonomy_lab.numkit import GaussRational, Mat


@pytest.fixture(scope="module")
def reps():
    return {m: sp.build_spin_rep(m) for m in (2, 3, 4)}


def test_gamma_shapes_and_clifford(reps):
    rep = reps[2]
    assert len(rep.gamma) == 4 and all(g.n == 4 for g in rep.gamma)
    I = Mat.identity(4).astype(sp.G)
    for a in range(4):
        for b in range(4):
            ac = (rep.gamma[a] @ rep.gamma[b] + rep.gamma[b] @ rep.gamma[a]).to_mat()
            assert ac == (I.scale(GaussRational(-2)) if a == b else Mat.zeros(4, backend=sp.G))


def test_size_guard():
    for m in (1, 8, 9):
        with pytest.raises(sp.SpinError) as info:
            sp.build_spin_rep(m)
        assert info.value.code == "SIZE_GUARD"


def test_random_equivariance(reps):
    rep = reps[3]
    rng = random.Random(0)
    n = rep.n
    for _ in range(10):
        A = Mat.zeros(n)
        for a, b, E in sp.so_basis(n):
            A = A + E.scale(F(rng.randint(-3, 3), rng.randint(1, 3)))
        v = [F(rng.randint(-3, 3)) for _ in range(n)]
        assert rep.rho_sparse(A).comm(rep.gamma_of(v)) == rep.gamma_of(A.apply(v))


@given(st.integers(0, 14), st.integers(0, 14), st.integers(0, 5), st.integers(0, 5))
@settings(max_examples=15)
def test_rho_is_a_homomorphism(i, j, x, y):
    rep = sp.build_spin_rep(3, verify=False)
    basis = sp.so_basis(6)
    A = basis[i][2].scale(x + 1) + basis[(i + 3) % 15][2]
    B = basis[j][2].scale(y - 2)
    assert rep.rho_sparse(nk.commutator(A, B)) == rep.rho_sparse(A).comm(rep.rho_sparse(B))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_weight_levels(reps, m):
    dec = sp.weight_decomposition(reps[m])
    assert dec.sigma == 1
    for lvl in dec.levels:
        assert lvl.multiplicity == comb(m, lvl.k)
        assert lvl.kahler_eigenvalue == GaussRational(0, m - 2 * lvl.k)
        # ρ(J) is half the Kähler action under ρ(e_a∧e_b) = ¼[γ_a, γ_b]
        assert lvl.rho_eigenvalue == GaussRational(0, F(m - 2 * lvl.k, 2))


def test_kahler_action_is_twice_rho_J(reps):
    rep = reps[3]
    assert rep.kahler_action() == rep.rho_sparse(sp.standard_J(3)).scale(2)


# ---------------------------------------------------------------- embeddings

def test_embeddings_m3():
    J = sp.standard_J(3)
    so = sp.embed_algebra("SO_LAGRANGIAN", 3)
    assert len(so) == 3 and all(J @ X == X @ J for X in so)
    u = sp.embed_algebra("U", 3)
    assert len(u) == 9 and nk.bracket_closure(u).dim == 9
    su = sp.embed_algebra("SU", 3)
    assert len(su) == 8 and not nk.matrix_span(su).contains(J)


def test_sp_embedding():
    m = 4
    h = sp.embed_algebra("SP", m)
    J, K = sp.standard_J(m), sp.quaternionic_K(m)
    assert J @ K == -(K @ J)
    assert len(h) == 10 and nk.bracket_closure(h).dim == 10
    assert all(X @ J == J @ X and X @ K == K @ X for X in h)
    assert len(sp.embed_algebra("SP_PLUS_U1", m)) == 11


def test_embedding_label_errors():
    with pytest.raises(sp.SpinError) as info:
        sp.embed_algebra("SP", 3)
    assert info.value.code == "LABEL_DOMAIN"
    with pytest.raises(sp.SpinError):
        sp.embed_algebra("G2", 3)


# ---------------------------------------------------------------- annihilators

@pytest.mark.parametrize("m", [3, 4])
@pytest.mark.parametrize("label,dim", [("SU", 2), ("SO_LAGRANGIAN", 2), ("U", 0), ("SO_PLUS_U1", 0)])
def test_annihilator_dimensions(reps, m, label, dim):
    ann = sp.annihilator(reps[m], sp.embed_algebra(label, m))
    assert ann.dim == dim
    if dim:
        assert ann.profile == (1,) + (0,) * (m - 1) + (1,)
        assert ann.extremal_only


def test_trivial_algebra_fixes_everything(reps):
    assert sp.annihilator(reps[3], []).dim == 8


def test_sp_annihilators_reported(reps):
    rep = reps[4]
    assert sp.annihilator(rep, sp.embed_algebra("SP", 4)).profile == (1, 0, 1, 0, 1)
    assert sp.annihilator(rep, sp.embed_algebra("SP_PLUS_U1", 4)).profile == (0, 0, 1, 0, 0)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 1000), st.sampled_from(["SU", "SO_LAGRANGIAN", "U"]))
def test_annihilator_is_conjugation_invariant(seed, label):
    rep = sp.build_spin_rep(3, verify=False)
    h = sp.embed_algebra(label, 3)
    assert sp.conjugated_annihilator_dim(rep, h, seed) == sp.annihilator(rep, h).dim


def test_annihilator_rejects_non_skew(reps):
    with pytest.raises(ValueError):
        sp.annihilator(reps[2], [Mat.identity(4)])


# ---------------------------------------------------------------- verdicts

def test_parallel_spinor_cases(reps):
    rep = reps[3]
    v = sp.parallel_spinor_report(Label.SO_M_LAGRANGIAN, 3, True,
                                  algebra=sp.embed_algebra("SO_LAGRANGIAN", 3), rep=rep)
    assert v.case == "torsion" and v.exists and v.expected_dim == 2 == v.computed_dim and v.consistent
    v = sp.parallel_spinor_report(Label.U_M, 3, True, algebra=sp.embed_algebra("U", 3), rep=rep)
    assert v.exists is False and v.computed_dim == 0 and v.consistent
    v = sp.parallel_spinor_report(Label.TRIVIAL, 3, False, algebra=[], rep=rep)
    assert v.expected_dim == 8 == v.computed_dim
    v = sp.parallel_spinor_report(Label.SU_M, 3, False, hol_equal=False)
    assert v.case == "torsion_free_distinct" and v.exists and v.computed_dim is None


def test_other_label_needs_algebra():
    with pytest.raises(sp.SpinError) as info:
        sp.parallel_spinor_report(Label.OTHER, 3, True)
    assert info.value.code == "UNSUPPORTED_LABEL"
