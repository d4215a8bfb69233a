import unittest

import numpy as np

from kronrad.core import schur_power
from kronrad.radius import w
from kronrad.spectral import spectral_norm, is_normal
from kronrad.schurpower import (th10_chain, schur_radius_chain, cor2_search, schur_embedding, tref_check,
                                tref_direct, cref_check, eigenvector_structure, padded_eigenvector_check,
                                radial_generator, dp_plus_t, tforallm_scan, n2_normality_check,
                                ando_okubo_bound, is_psd)

V = np.array([1, 1]) / np.sqrt(2)
RANK_ONE = np.outer(V, V)


class TestSchurPowers(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(14)

    def test_symmetric_pair(self):
        a, b = .7, .4
        A = np.array([[a, b], [b, a]])
        for m in (1, 2, 3):
            self.assertAlmostEqual(w(schur_power(A, m)), a ** m + b ** m, places=10)

    def test_th10(self):
        rep = th10_chain([[0, 2], [0, 0]], 3)
        self.assertAlmostEqual(rep['w(A^om)'], 4., places=10)
        self.assertAlmostEqual(rep['w(A)||A||^(m-1)'], 4., places=10)
        self.assertAlmostEqual(rep['2^(m-1)w(A)^m'], 4., places=10)
        self.assertTrue(rep.ok())
        A = self.rng.standard_normal((3, 3)) + 1j * self.rng.standard_normal((3, 3))
        for m in (1, 2, 4):
            self.assertTrue(th10_chain(A, m).ok())
        # radial matrices get the sharper bound and the norm check on equality
        rep = th10_chain(np.diag([1, 1j]), 2)
        self.assertIn('w(A)^m', rep)
        self.assertEqual(len(rep.checks), 1)
        self.assertTrue(rep.ok())
        with self.assertRaises(ValueError):
            th10_chain(A, 0)

    def test_schur_chain(self):
        for n in (1, 2, 4):
            A = self.rng.standard_normal((n, n)) + 1j * self.rng.standard_normal((n, n))
            B = self.rng.standard_normal((n, n)) + 1j * self.rng.standard_normal((n, n))
            self.assertTrue(schur_radius_chain(A, B).ok())
        G = self.rng.standard_normal((3, 3)) + 1j * self.rng.standard_normal((3, 3))
        A = G @ G.conj().T
        B = self.rng.standard_normal((3, 3)) + 1j * self.rng.standard_normal((3, 3))
        self.assertTrue(is_psd(A))
        rep = schur_radius_chain(A, B)
        self.assertIn('ando-okubo', rep.anchors)
        self.assertTrue(rep.ok())
        self.assertAlmostEqual(rep['max(a_ii)w(B)'], ando_okubo_bound(A, B))
        with self.assertRaises(ValueError):
            ando_okubo_bound([[0, 1], [0, 0]], B[:2, :2])
        with self.assertRaises(ValueError):
            schur_radius_chain(np.eye(2), np.eye(3))

    def test_cor2_converse_fails(self):
        res = cor2_search(self.rng, trials=50)
        self.assertTrue(res.found)
        self.assertGreater(res.gap, 1e-6)
        self.assertAlmostEqual(w(res.B), spectral_norm(res.B), places=9)

    def test_embedding(self):
        A = self.rng.standard_normal((3, 3)) + 1j * self.rng.standard_normal((3, 3))
        K, E = schur_embedding(A, 3)
        self.assertEqual(K.shape, (27, 3))
        np.testing.assert_allclose(E.conj().T @ E, np.eye(3))
        np.testing.assert_allclose(E.conj().T @ K, schur_power(A, 3), atol=1e-12)


class TestEigenvectorCharacterization(unittest.TestCase):

    def test_witness(self):
        v = tref_check(np.diag([1, 1j]), 2)
        self.assertTrue(v.applicable and v.equality)
        self.assertIsNotNone(v.witness)
        self.assertAlmostEqual(abs(v.witness.eigenvalue), 1.)
        self.assertTrue(v.consistent and v.partial_diag and v.downward_ok)
        self.assertTrue(tref_direct(np.diag([1, 1j]), 2))
        d = v.to_dict()
        self.assertEqual(len(d['witness']['x']), 2)

    def test_no_witness(self):
        v = tref_check(RANK_ONE, 2)
        self.assertTrue(v.applicable)
        self.assertFalse(v.equality)
        self.assertIsNone(v.witness)
        self.assertTrue(v.consistent)
        self.assertAlmostEqual(v.power_radius, .5, places=10)
        self.assertFalse(tref_direct(RANK_ONE, 2))

    def test_not_radial(self):
        v = tref_check([[0, 1], [0, 0]], 2)
        self.assertFalse(v.applicable)
        self.assertTrue(v.consistent)
        self.assertIsNone(v.to_dict()['witness'])
        with self.assertRaises(ValueError):
            tref_check(np.eye(2), 0)

    def test_cref(self):
        self.assertTrue(cref_check(np.diag([1, 1j]), 2))
        self.assertTrue(cref_check(RANK_ONE, 2))
        with self.assertRaises(ValueError):
            cref_check([[0, 1], [0, 0]], 2)

    def test_radial_generator(self):
        A = radial_generator(3, 4, profile='jordan', k=2)
        self.assertAlmostEqual(w(A), 1., places=9)
        self.assertAlmostEqual(spectral_norm(A), 1., places=9)
        self.assertFalse(is_normal(A))
        for profile in ('normal', 'contraction'):
            A = radial_generator(4, 3, profile=profile, r=2.)
            self.assertAlmostEqual(w(A), 2., places=9)
            self.assertTrue(tref_check(A, 2).applicable)
        with self.assertRaises(ValueError):
            radial_generator(0, 3, profile='hermitian')

    def test_eigenvector_structure(self):
        res = eigenvector_structure(np.diag([1, 1j]), 2)
        self.assertTrue(res.applicable and res.ok)
        self.assertLess(res.outside, 1e-7)
        self.assertGreaterEqual(len(res.slices), 1)
        self.assertFalse(eigenvector_structure(RANK_ONE, 2).applicable)
        with self.assertRaises(ValueError):
            eigenvector_structure(np.eye(2), 1)

    def test_padded_eigenvector(self):
        res = padded_eigenvector_check(np.diag([1, .5]), 1)
        self.assertTrue(res.radius_equal and res.padded_exists and res.ok)
        res = padded_eigenvector_check(np.diag([.5, 1]), 1)
        self.assertFalse(res.radius_equal or res.padded_exists)
        self.assertTrue(res.ok)
        with self.assertRaises(ValueError):
            padded_eigenvector_check(np.eye(2), 0)


class TestAllPowers(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(15)

    def test_rank_one(self):
        scan = tforallm_scan(RANK_ONE, m_max=3)
        self.assertTrue(scan.radial and scan.rank_one)
        self.assertEqual(scan.equalities, [True, False, False])
        self.assertFalse(scan.member or scan.single_entry)
        self.assertTrue(scan.rank_one_ok)
        scan = tforallm_scan(np.diag([0, -2j]), m_max=3)
        self.assertTrue(scan.member and scan.single_entry and scan.rank_one_ok)

    def test_closure(self):
        A = dp_plus_t(self.rng, 2, size=1, rho=.5)
        self.assertAlmostEqual(spectral_norm(A), 1., places=12)
        scan = tforallm_scan(A, m_max=3, partner=dp_plus_t(self.rng, 1))
        self.assertTrue(scan.member)
        self.assertEqual(set(scan.closure.keys()), {'direct_sum', 'scaled', 'permuted', 'kron'})
        self.assertTrue(all(scan.closure.values()))
        with self.assertRaises(ValueError):
            tforallm_scan(A, m_max=0)

    def test_n2_normality(self):
        G = self.rng.standard_normal((2, 2)) + 1j * self.rng.standard_normal((2, 2))
        for A in (G + G.conj().T, [[0, 1], [0, 0]], G):
            res = n2_normality_check(A)
            self.assertTrue(res.ok)
        self.assertTrue(n2_normality_check(G + G.conj().T).radial)
        self.assertFalse(n2_normality_check([[0, 1], [0, 0]]).normal)
        with self.assertRaises(ValueError):
            n2_normality_check(np.eye(3))


if __name__ == "__main__":
    unittest.main(exit=False, verbosity=2)
