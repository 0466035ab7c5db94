import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2lab.catalog import catalog
from g2lab.curvature import (SolitonCertificate, einstein_calibrated_residual,
                             einstein_residual, levi_civita, rank_one_extension,
                             ricci, ricci_operator, riemann, scal_from_torsion,
                             scalar_curvature, soliton_solve, star_einstein_residual,
                             star_ricci, star_scal)
from g2lab.exterior import KForm, Metric
from g2lab.g2core import metric_from_phi
from g2lab.liealg import jacobi_residual

from conftest import metric_strategy

N2 = catalog("n2").algebra
H2 = catalog("h2").algebra
S_EXT = catalog("s_ext_h2").algebra
I6 = Metric.identity(6)
I7 = Metric.identity(7)

CURVED_NAMES = ("n2", "n4", "n6", "n8", "n12", "n12_modified_basis", "s_ext_h2")


class TestLeviCivita:
    def test_abelian_is_flat(self):
        gamma = levi_civita(catalog("n1").algebra, I7)
        assert np.abs(gamma).max() == 0.0

    def test_n2_basis_value(self):
        gamma = levi_civita(N2, I7)
        expected = np.zeros(7)
        expected[4] = -0.5
        assert np.allclose(gamma[0, 1], expected)

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(CURVED_NAMES), metric_strategy(7))
    def test_compatible_and_torsion_free(self, name, g):
        algebra = catalog(name).algebra
        if algebra.dim != 7:
            return
        gamma = levi_civita(algebra, g)
        # metric compatibility: <nabla_i e_j, e_k> + <e_j, nabla_i e_k> = 0
        inner = np.einsum("ijm,mk->ijk", gamma, g.g)
        assert np.abs(inner + np.einsum("ikm,mj->ijk", gamma, g.g)).max() < 1e-11
        # torsion-free: nabla_i e_j - nabla_j e_i = [e_i, e_j]
        assert np.abs(gamma - np.transpose(gamma, (1, 0, 2))
                      - algebra.bracket).max() < 1e-11


class TestRicci:
    def test_n2_identity(self):
        expected = np.diag([-1.0, -0.5, -0.5, 0.0, 0.5, 0.5, 0.0])
        assert np.abs(ricci_operator(N2, I7) - expected).max() < 1e-13

    def test_h2_identity(self):
        expected = np.diag([-1.0, -1.0, -1.0, -1.0, 1.0, 1.0])
        assert np.abs(ricci_operator(H2, I6) - expected).max() < 1e-13

    def test_s_extension_einstein(self):
        ric = ricci(S_EXT, I7)
        assert np.abs(ric - (-3.0) * np.eye(7)).max() < 1e-12
        assert abs(scalar_curvature(S_EXT, I7) - (-21.0)) < 1e-12

    @settings(max_examples=15, deadline=None)
    @given(st.sampled_from(CURVED_NAMES), metric_strategy(7))
    def test_symmetry_and_trace(self, name, g):
        algebra = catalog(name).algebra
        ric = ricci(algebra, g)
        assert np.abs(ric - ric.T).max() < 1e-10
        assert abs(scalar_curvature(algebra, g)
                   - float(np.trace(g.inverse @ ric))) < 1e-10

    @settings(max_examples=10, deadline=None)
    @given(st.sampled_from(CURVED_NAMES), metric_strategy(7))
    def test_first_bianchi(self, name, g):
        algebra = catalog(name).algebra
        r = riemann(algebra, g)
        cyclic = r + np.einsum("jkil->ijkl", r) + np.einsum("kijl->ijkl", r)
        assert np.abs(cyclic).max() < 1e-10

    @settings(max_examples=10, deadline=None)
    @given(st.sampled_from(CURVED_NAMES), metric_strategy(7))
    def test_pair_symmetry(self, name, g):
        algebra = catalog(name).algebra
        r4 = np.einsum("ijkm,ml->ijkl", riemann(algebra, g), g.g)
        assert np.abs(r4 - np.einsum("klij->ijkl", r4)).max() < 1e-10


class TestScalFromTorsion:
    def test_torsion_free_is_zero(self):
        G = metric_from_phi(catalog("std_g2").algebra, catalog("std_g2").forms["phi"])
        assert abs(scal_from_torsion(G)) < 1e-12

    def test_calibrated_n2(self):
        entry = catalog("n2")
        G = metric_from_phi(entry.algebra, entry.forms["phi"])
        assert abs(scal_from_torsion(G) - (-1.0)) < 1e-12

    def test_lcc_extension(self):
        entry = catalog("s_ext_h2")
        G = metric_from_phi(entry.algebra, entry.forms["phi"])
        assert abs(scal_from_torsion(G) - (-21.0)) < 1e-12

    @pytest.mark.parametrize("name", ["std_g2", "n2", "n4", "n6",
                                      "n12_modified_basis", "s_ext_h2"])
    def test_agrees_with_curvature(self, name, catalog_structures):
        G = catalog_structures[name]
        assert abs(scal_from_torsion(G)
                   - scalar_curvature(G.algebra, G.metric)) < 1e-8


class TestSoliton:
    @pytest.mark.parametrize("name,lam,diag", [
        ("n2", -2.0, (1.0, 1.5, 1.5, 2.0, 2.5, 2.5, 2.0)),
        ("n4", -2.5, (1.0, 1.5, 2.5, 2.0, 2.0, 3.5, 3.0)),
        ("n6", -2.5, (0.5, 2.0, 2.0, 2.5, 2.5, 3.0, 3.0)),
        ("n12_modified_basis", -0.25,
         (0.125, 0.125, 0.125, 0.25, 0.25, 0.25, 0.375)),
    ])
    def test_catalog_certificates(self, name, lam, diag, catalog_structures):
        G = catalog_structures[name]
        cert = soliton_solve(G.algebra, G.metric)
        assert cert.residual < 1e-9
        assert abs(cert.lam - lam) < 1e-9
        assert np.abs(cert.derivation - np.diag(diag)).max() < 1e-9
        assert cert.classification == "expanding"

    def test_h2_nilsoliton(self):
        cert = soliton_solve(H2, I6)
        assert abs(cert.lam - (-3.0)) < 1e-10
        assert np.abs(cert.derivation - np.diag([2.0, 2.0, 2.0, 2.0, 4.0, 4.0])).max() < 1e-10

    def test_abelian_minimum_norm(self):
        cert = soliton_solve(catalog("n1").algebra, I7)
        assert cert.residual < 1e-14
        assert abs(cert.lam) < 1e-12
        assert cert.classification == "steady"

    def test_identity_on_n5_is_not_a_soliton(self):
        # identity on n5 is not the nilsoliton inner product; the residual
        # must be visibly nonzero rather than silently tiny
        cert = soliton_solve(catalog("n5").algebra, I7)
        assert isinstance(cert, SolitonCertificate)
        assert cert.residual > 1e-3


class TestEinstein:
    def test_flat_abelian(self):
        assert einstein_residual(catalog("n1").algebra, I7) < 1e-15

    def test_s_extension(self):
        assert einstein_residual(S_EXT, I7) < 1e-12

    def test_nilpotent_never_einstein(self):
        entry = catalog("n2")
        G = metric_from_phi(entry.algebra, entry.forms["phi"])
        assert einstein_residual(entry.algebra, G.metric) > 0.1

    def test_calibrated_condition_nonzero_on_n2(self):
        entry = catalog("n2")
        G = metric_from_phi(entry.algebra, entry.forms["phi"])
        assert einstein_calibrated_residual(G) > 0.1

    def test_calibrated_condition_zero_when_torsion_free(self):
        G = metric_from_phi(catalog("std_g2").algebra, catalog("std_g2").forms["phi"])
        assert einstein_calibrated_residual(G) < 1e-12

    def test_requires_calibrated(self):
        entry = catalog("s_ext_h2")
        G = metric_from_phi(entry.algebra, entry.forms["phi"])
        with pytest.raises(ValueError):
            einstein_calibrated_residual(G)

    def test_consistency_on_calibrated_catalog(self):
        # Einstein <=> the calibrated curvature condition, checked both ways:
        # all four nilsoliton structures are non-Einstein and non-flat
        for name in ("n2", "n4", "n6", "n12_modified_basis"):
            entry = catalog(name)
            G = metric_from_phi(entry.algebra, entry.forms["phi"])
            assert einstein_calibrated_residual(G) > 1e-3
            assert einstein_residual(entry.algebra, G.metric) > 1e-3


class TestStarRicci:
    def test_flat_is_zero(self):
        G = metric_from_phi(catalog("std_g2").algebra, catalog("std_g2").forms["phi"])
        assert np.abs(star_ricci(G)).max() < 1e-13
        assert abs(star_scal(G)) < 1e-13

    def test_n2_regression_snapshot(self):
        # frozen after the first verified run
        entry = catalog("n2")
        G = metric_from_phi(entry.algebra, entry.forms["phi"])
        expected = np.diag([2.0, 3.0, 3.0, -2.0, -1.0, -1.0, -2.0])
        assert np.abs(star_ricci(G) - expected).max() < 1e-10
        assert abs(star_scal(G) - 2.0) < 1e-10

    def test_symmetry_on_catalog(self, catalog_structures):
        for G in catalog_structures.values():
            m = star_ricci(G)
            assert np.abs(m - m.T).max() < 1e-10

    def test_star_einstein_residual_nonnegative(self, catalog_structures):
        G = catalog_structures["n2"]
        assert star_einstein_residual(G) > 0.1
        flat = catalog_structures["std_g2"]
        assert star_einstein_residual(flat) < 1e-12


class TestRankOneExtension:
    def test_reproduces_catalog_extension(self):
        D = np.diag([0.5, 0.5, 0.5, 0.5, 1.0, 1.0])
        ext = rank_one_extension(H2, D)
        expected = catalog("s_ext_h2").algebra
        for got, want in zip(ext.dual_differential, expected.dual_differential):
            assert got.allclose(want, tol=0)

    def test_zero_derivation_gives_product(self):
        ext = rank_one_extension(H2, np.zeros((6, 6)))
        assert ext.dual_differential[6].is_zero()
        for i in range(6):
            restricted = KForm(6, 2, {k: v for k, v in ext.dual_differential[i].items()})
            assert restricted.allclose(H2.dual_differential[i], tol=0)

    def test_jacobi_preserved(self):
        for D in (np.diag([0.5, 0.5, 0.5, 0.5, 1.0, 1.0]), np.zeros((6, 6))):
            assert jacobi_residual(rank_one_extension(H2, D)) < 1e-13

    def test_non_derivation_rejected(self):
        D = np.zeros((6, 6))
        D[0, 1] = 1.0
        with pytest.raises(ValueError):
            rank_one_extension(H2, D)
