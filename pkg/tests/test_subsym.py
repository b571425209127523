import dataclasses
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy_lab import liealg as la
from holonomy_lab import numkit as nk
from holonomy_lab import subsym as ss
from holonomy_lab.holonomy import Label
from holonomy_lab.numkit import Mat

FAMILY = [
    # (λ, μ, zoo label, horizontal label, adapted label, dims, scal)
    (1, 2, "SO_M_PLUS_2", Label.SO_M_LAGRANGIAN, Label.SO_M_PLUS_U1, (3, 4), 36),
    (1, -2, "SO_2_M", Label.SO_M_LAGRANGIAN, Label.SO_M_PLUS_U1, (3, 4), -36),
    (2, 1, "SO_1_M_PLUS_1", Label.SO_M_LAGRANGIAN, Label.SO_M_PLUS_U1, (3, 4), 18),
    (1, 0, "SO_1_M_PLUS_1", Label.SO_M_LAGRANGIAN, Label.SO_M_LAGRANGIAN, (3, 3), 0),
    (1, 1, "EUCLIDEAN_MOTION", Label.SO_M_LAGRANGIAN, Label.SO_M_PLUS_U1, (3, 4), 18),
    (1, -1, "LORENTZ_MOTION", Label.SO_M_LAGRANGIAN, Label.SO_M_PLUS_U1, (3, 4), -18),
]


@pytest.fixture(scope="module")
def family():
    return {(lam, mu): ss.zoo("TORSION_FAMILY", m=3, lam=lam, mu=mu) for lam, mu, *_ in FAMILY}


# ---------------------------------------------------------------- validation

def test_heisenberg_quadruple_validates():
    q = ss.heisenberg_quadruple(3)
    rep = ss.validate_quadruple(q)
    assert rep.ok and rep.sub_torsion_free and rep.transvection
    assert la.killing_fingerprint(q.L) == la.killing_fingerprint(la.heisenberg(3))


def test_torsion_family_validates_without_sub_torsion_freeness():
    rep = ss.validate_quadruple(ss.torsion_family(3, 1, 0))
    assert rep.ok and not rep.sub_torsion_free


def test_involution_and_eigenspace_rules():
    q = ss.torsion_family(3, 1, 2)
    L, s = q.L, q.s
    for i in range(L.dim):
        for j in range(L.dim):
            x, y = L.basis_vector(i), L.basis_vector(j)
            assert L.bracket(s.apply(x), s.apply(y)) == s.apply(L.bracket(x, y))


def test_non_invariant_B_is_reported():
    q = ss.torsion_family(3, 1, 2)
    B = Mat.identity(6)
    B = B + Mat([[F(int((i, j) in ((0, 0),))) for j in range(6)] for i in range(6)])
    rep = ss.validate_quadruple(dataclasses.replace(q, B=B))
    bad = [c for c in rep.failures() if c.name == "B_ad_k_invariant"]
    assert bad and bad[0].witness


def test_transvection_restriction():
    q = ss.heisenberg_with_rotation(2)
    assert not ss.validate_quadruple(q).transvection
    t = ss.transvection_restrict(q)
    assert t.dim_k == 0 and t.L.dim == 5
    assert ss.validate_quadruple(t).transvection
    assert ss.transvection_restrict(t) is t
    h = ss.heisenberg_quadruple(2)
    assert ss.transvection_restrict(h) is h


def test_jacobi_failure_on_corrupted_curvature():
    R_W, Th, N_W, ks = ss.torsion_family_data(3, 1, 2)

    def bad(a, b):
        M = R_W(a, b)
        return -M if (a, b) == (0, 1) else M
    with pytest.raises(ss.SubsymError) as info:
        ss.from_local_data(6, bad, Th, N_W, ks)
    assert info.value.code == "JACOBI_FAIL"


@pytest.mark.parametrize("kwargs,code", [
    (dict(m=3, lam=0, mu=1), "PARAM_DOMAIN"),
    (dict(m=3, lam=-1, mu=1), "PARAM_DOMAIN"),
    (dict(m=1, lam=1, mu=1), "PARAM_DOMAIN"),
])
def test_parameter_domain(kwargs, code):
    with pytest.raises(ss.SubsymError) as info:
        ss.torsion_family(**kwargs)
    assert info.value.code == code


def test_degenerate_theta_rejected():
    with pytest.raises(ss.SubsymError) as info:
        ss.from_local_data(2, lambda i, j: Mat.zeros(2), Mat.zeros(2), Mat.zeros(2), [])
    assert info.value.code == "DEGENERATE_THETA"


# ---------------------------------------------------------------- the zoo

def test_heisenberg_zoo_member():
    r = ss.zoo("HEISENBERG", m=3)
    assert r.match.label == "HEISENBERG"
    assert r.pair.dims == (0, 0)
    assert r.tau_zero


@pytest.mark.parametrize("lam,mu,label,hor,ad,dims,scal", FAMILY)
def test_torsion_family_members(family, lam, mu, label, hor, ad, dims, scal):
    r = family[(lam, mu)]
    assert r.match.label == label == r.expected_label
    assert r.pair.horizontal_class.label == hor
    assert r.pair.adapted_class.label == ad
    assert r.pair.dims == dims
    assert r.scal_tau == scal == 2 * mu * 9
    assert la.jacobi_check(r.quadruple.L) == 0
    I = Mat.identity(3)
    assert r.pair.ad_xi == Mat.block([[I.scale(lam), I.scale(-mu)], [I.scale(mu), I.scale(-lam)]])


def test_torsion_family_signatures(family):
    assert family[(1, 2)].fingerprint.signature == (0, 0, 10)
    assert family[(1, -2)].fingerprint.signature == la.killing_fingerprint(la.so_pq(2, 3)).signature
    assert family[(2, 1)].fingerprint.signature == la.killing_fingerprint(la.so_pq(1, 4)).signature


def test_tau_anticommutes_with_complex_structure(family):
    J = ss.standard_theta(3).T
    for r in family.values():
        assert (r.tau_star @ J + J @ r.tau_star).is_zero()


def test_cpn_sphere():
    r = ss.zoo("CPN_SPHERE", m=3)
    assert r.report.ok
    assert r.pair.dims == (8, 9)
    assert r.pair.horizontal_class.label == Label.SU_M
    assert r.pair.adapted_class.label == Label.U_M
    base = r.extra["hol_base"]
    assert base.dim == 9 and base.contains_subspace(r.pair.horizontal)
    assert r.scal_tau == 48


def test_table1(family):
    results = [ss.zoo("HEISENBERG", m=3), ss.zoo("CPN_SPHERE", m=3)] + list(family.values())
    rows = ss.table1_report(results, strict=True)
    assert all(r.matches for r in rows)
    assert {r.row_id for r in rows} == {"heisenberg", "circle_bundle_hrss", "so_quotients_tau_nonzero",
                                        "so_quotient_scal_zero"}
    last = next(r for r in rows if r.row_id == "so_quotient_scal_zero")
    assert (last.hol_horizontal, last.hol_adapted) == ("SO_M_LAGRANGIAN", "SO_M_LAGRANGIAN")


def test_table1_mismatch_is_raised(family):
    wrong = dataclasses.replace(family[(1, 2)], row_id="so_quotient_scal_zero")
    rows = ss.table1_report([wrong])
    assert not rows[0].matches and rows[0].diff
    with pytest.raises(ss.TableMismatch):
        ss.table1_report([wrong], strict=True)


def test_fixture_rows_are_well_formed():
    doc = ss.load_table1()
    for row in doc["rows"]:
        assert {"id", "tau", "space", "hol_horizontal", "hol_adapted"} <= set(row)


# ---------------------------------------------------------------- properties

params = st.tuples(st.fractions(F(1, 3), 3, max_denominator=3), st.fractions(-3, 3, max_denominator=3))


@settings(max_examples=6, deadline=None)
@given(params)
def test_family_label_follows_case_split(lm):
    lam, mu = lm
    r = ss.zoo("TORSION_FAMILY", m=3, lam=lam, mu=mu)
    assert r.match.label == ss.torsion_family_expected(lam, mu)
    assert r.scal_tau == 2 * mu * 9
    assert r.pair.dims[1] - r.pair.dims[0] in (0, 1)


@settings(max_examples=6, deadline=None)
@given(params, st.integers(0, 10 ** 6))
def test_family_label_survives_basis_change(lm, seed):
    lam, mu = lm
    q = ss.torsion_family(3, lam, mu)
    L2 = la.random_basis_change(q.L, seed)
    assert la.match_zoo(la.killing_fingerprint(L2), 3).label == ss.torsion_family_expected(lam, mu)


@settings(max_examples=10, deadline=None)
@given(params)
def test_small_family_is_consistent(lm):
    lam, mu = lm
    q = ss.torsion_family(2, lam, mu)
    assert la.jacobi_check(q.L) == 0
    assert ss.scalar_curvature(q) == 2 * mu * 4
    pair = ss.holonomy_pair(q)
    assert pair.dims[1] - pair.dims[0] in (0, 1)
    B = q.B
    for X in pair.adapted.matrices():
        assert (B @ X + (B @ X).T).is_zero()
    assert nk.matrix_span(pair.adapted.matrices()).dim == pair.adapted.dim
