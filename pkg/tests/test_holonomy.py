from fractions import Fraction as F

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from holonomy_lab import contactgeo as cg
from holonomy_lab import holonomy as hol
from holonomy_lab import numkit as nk
from holonomy_lab.holonomy import Label, LoopPath, Mode
from holonomy_lab.numkit import Mat

from conftest import CORPUS

MODELS = sorted(n for n in CORPUS if n != "table1")


def E(n, i, j):
    return Mat([[F(int((r, c) == (i, j))) for c in range(n)] for r in range(n)])


def lagrangian_so(m):
    Z = Mat.zeros(m)
    out = []
    for a in range(m):
        for b in range(a + 1, m):
            A = E(m, b, a) - E(m, a, b)
            out.append(Mat.block([[A, Z], [Z, A]]))
    return out


def unitary(m):
    Z = Mat.zeros(m)
    out = lagrangian_so(m)
    for a in range(m):
        for b in range(a, m):
            B = E(m, a, b) + E(m, b, a) if a != b else E(m, a, a)
            out.append(Mat.block([[Z, -B], [B, Z]]))
    return out


def special_unitary(m):
    Z = Mat.zeros(m)

    def herm(B):
        return Mat.block([[Z, -B], [B, Z]])
    out = lagrangian_so(m)
    out += [herm(E(m, a, b) + E(m, b, a)) for a in range(m) for b in range(a + 1, m)]
    out += [herm(E(m, a, a) - E(m, a + 1, a + 1)) for a in range(m - 1)]
    return out


def J_std(m):
    return Mat([[F(x) for x in r] for r in cg.standard_J(m)])


def span(mats):
    return nk.matrix_span(mats)


# ---------------------------------------------------------------- classification

@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("builder,label", [
    (unitary, Label.U_M), (special_unitary, Label.SU_M), (lagrangian_so, Label.SO_M_LAGRANGIAN),
])
def test_classify_embedded_algebras(m, builder, label):
    h = span(builder(m))
    cls = hol.classify_subalgebra(h, Mat.identity(2 * m))
    assert cls.label == label
    assert cls.fingerprint.dim == hol.label_dimension(label, m)


def test_so_plus_u1():
    m = 3
    h = span(lagrangian_so(m) + [J_std(m)])
    assert hol.classify_subalgebra(h, Mat.identity(2 * m)).label == Label.SO_M_PLUS_U1


def test_lagrangian_so_fingerprint_has_four_dim_commutant():
    cls = hol.classify_subalgebra(span(lagrangian_so(3)), Mat.identity(6))
    assert cls.fingerprint.commutant_dim == 4


def test_trivial_and_other():
    assert hol.classify_subalgebra(nk.matrix_span([], 4, nk.Backend.RATIONAL), Mat.identity(4)).label == Label.TRIVIAL
    # so(4) acting on R^4 has no invariant complex structure
    full = [E(4, b, a) - E(4, a, b) for a in range(4) for b in range(a + 1, 4)]
    cls = hol.classify_subalgebra(span(full), Mat.identity(4))
    assert cls.label == Label.OTHER and cls.fingerprint.dim == 6


@given(st.integers(0, 50), st.sampled_from(["u", "su", "so"]))
def test_classification_is_conjugation_stable(seed, which):
    m = 2
    builder = {"u": unitary, "su": special_unitary, "so": lagrangian_so}[which]
    h = span(builder(m))
    g = Mat.identity(2 * m)
    Q = hol.cayley_orthogonal(g, seed=seed)
    assert (Q.T @ g @ Q) == g
    assert hol.classify_subalgebra(hol.conjugate(h, Q), g).label == hol.classify_subalgebra(h, g).label


# ---------------------------------------------------------------- isotypic decomposition

def test_isotypic_examples():
    dec = hol.isotypic_decomposition(nk.matrix_span([], 4, nk.Backend.RATIONAL), Mat.identity(4))
    assert dec.kernel.dim == 4 and not dec.blocks
    so3 = [E(3, b, a) - E(3, a, b) for a in range(3) for b in range(a + 1, 3)]
    Z = Mat.zeros(3)
    twice = [Mat.block([[A, Z], [Z, Z]]) for A in so3] + [Mat.block([[Z, Z], [Z, A]]) for A in so3]
    dec = hol.isotypic_decomposition(span(twice), Mat.identity(6))
    assert sorted(b.space.dim for b in dec.blocks) == [3, 3] and dec.kernel.dim == 0
    dec = hol.isotypic_decomposition(span(unitary(3)), Mat.identity(6))
    assert [b.space.dim for b in dec.blocks] == [6] and dec.kernel.dim == 0


# ---------------------------------------------------------------- holonomy of models

def test_flat_heisenberg_is_trivial():
    H = cg.heisenberg_model(3)
    for conn, mode in ((cg.schouten_connection(H), Mode.HORIZONTAL), (cg.adapted_connection(H), Mode.FULL)):
        rep = hol.infinitesimal_holonomy(H, conn, mode)
        assert rep.label == Label.TRIVIAL and rep.dim == 0


@pytest.fixture(scope="module")
def reports(corpus_model):
    out = {}
    for name in MODELS:
        M, doc = corpus_model(name)
        out[name] = (M, doc,
                     hol.infinitesimal_holonomy(M, cg.schouten_connection(M), Mode.HORIZONTAL),
                     hol.infinitesimal_holonomy(M, cg.adapted_connection(M), Mode.FULL),
                     hol.infinitesimal_holonomy(M, cg.wagner_connection(M), Mode.FULL))
    return out


@pytest.mark.parametrize("name", MODELS)
def test_holonomy_on_corpus(name, reports):
    M, doc, hor, ad, wg = reports[name]
    assert ad.algebra.contains_subspace(hor.algebra)
    assert wg.algebra.contains_subspace(hor.algebra) and hor.algebra.contains_subspace(wg.algebra)
    g = M.g.evaluate(M.base_point)
    for rep in (hor, ad, wg):
        basis = rep.algebra.matrices()
        for X in basis:
            gX = g @ X
            assert (gX + gX.T).is_zero()
            for Y in basis:
                assert rep.algebra.contains(nk.commutator(X, Y))
        if rep.label != Label.OTHER:
            assert rep.dim == hol.label_dimension(rep.label, M.m)
    expect = doc["expect"]["holonomy"]
    for tag, rep in (("SCHOUTEN", hor), ("ADAPTED", ad), ("WAGNER", wg)):
        assert (rep.label.value, rep.dim) == (expect[tag]["label"], expect[tag]["dim"])


@pytest.mark.parametrize("name", MODELS)
def test_dichotomy_on_corpus(name, reports):
    M, _, hor, ad, _ = reports[name]
    rep = hol.dichotomy_report(M, horizontal=hor, adapted=ad)
    if rep.codazzi:
        assert rep.difference in (0, 1)
    if name.startswith("heisenberg") and "zmetric" not in name:
        assert rep.codazzi and rep.difference == 0


def test_depth_out_of_range():
    H = cg.heisenberg_model(1)
    with pytest.raises(ValueError):
        hol.infinitesimal_holonomy(H, cg.schouten_connection(H), depth=5)


# ---------------------------------------------------------------- transport

def test_loop_path_validation():
    with pytest.raises(ValueError):
        LoopPath((((0, 1), (0, 0)), ((5, 1), (0, 1))))
    sq = LoopPath.coordinate_square((0, 0, 0), 0, 1, F(1, 2))
    assert sq.closed and sq.reversed().closed


def test_flat_transport_is_identity():
    H = cg.heisenberg_model(2)
    sq = LoopPath.coordinate_square(H.base_point, 0, 2, 1)
    T = hol.parallel_transport(H, cg.adapted_connection(H), sq, steps=50).matrix
    assert np.max(np.abs(T - np.eye(4))) < 1e-12


def test_transport_matches_curvature_at_second_order(corpus_model):
    M, _ = corpus_model("heisenberg2_zmetric")
    conn = cg.adapted_connection(M)
    R = hol.curvature_on_coordinates(M, conn, 0, 1).to_float()

    def err(h):
        sq = LoopPath.coordinate_square(M.base_point, 0, 1, h)
        T = hol.parallel_transport(M, conn, sq, steps=200).matrix
        return np.max(np.abs(scipy.linalg.logm(T).real + float(h) ** 2 * R))
    e1, e2 = err(F(1, 10)), err(F(1, 20))
    assert e1 < 1e-2
    assert np.log2(e1 / e2) >= 2.7


@pytest.mark.parametrize("name", MODELS)
def test_metric_transport_is_orthogonal(name, corpus_model):
    M, _ = corpus_model(name)
    m = M.m
    sq = LoopPath.coordinate_square(M.base_point, 0, m, F(1, 4))
    res = hol.parallel_transport(M, cg.adapted_connection(M), sq, steps=1000)
    assert res.orthogonality_defect <= 1e-8


@given(st.fractions(F(1, 20), 2, max_denominator=20), st.booleans())
def test_theta_transport_green(s, reverse):
    H = cg.heisenberg_model(2)
    sq = LoopPath.coordinate_square(H.base_point, 0, 2, s, reverse=reverse)
    tt = hol.theta_transport(H, sq)
    assert tt.exact_integral == (-2 if reverse else 2) * s * s
    expected = np.exp((2 if reverse else -2) * float(s) ** 2)
    assert abs(tt.factor - expected) <= 1e-8 * expected
    assert abs(tt.quadrature_factor - expected) <= 1e-8 * expected
    back = hol.theta_transport(H, sq.reversed())
    assert abs(back.factor * tt.factor - 1) < 1e-12


def test_horizontal_polygon_has_unit_factor():
    H = cg.heisenberg_model(2)
    # x1 and x2 directions only: θ pulls back to zero along y = 0
    path = LoopPath.polygon([(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (1, 1, 0, 0, 0), (0, 0, 0, 0, 0)])
    assert hol.theta_transport(H, path).exact_integral == 0


def test_open_path_rejected():
    H = cg.heisenberg_model(1)
    with pytest.raises(ValueError):
        hol.theta_transport(H, LoopPath.polygon([(0, 0, 0), (1, 0, 0)]))
