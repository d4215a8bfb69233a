import unittest

import numpy as np

from kronrad.core import random_unitary
from kronrad.spectral import (hermitian_eigs, eigenvalues, singular_values, spectral_norm,
                              spectral_radius, is_normal, max_modulus_structure, operator_abs,
                              numerical_rank, ClusterMember, SpectralData, ConvergenceError)


def _hermitian(rng, n):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (G + G.conj().T) / 2


class TestHermitian(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(2)

    def test_solvers_agree(self):
        H = _hermitian(self.rng, 6)
        mu_l, V_l = hermitian_eigs(H, method='lapack')
        mu_j, V_j = hermitian_eigs(H, method='jacobi')
        np.testing.assert_allclose(mu_j, mu_l, atol=1e-10)
        for mu, V in ((mu_l, V_l), (mu_j, V_j)):
            np.testing.assert_allclose(V.conj().T @ V, np.eye(6), atol=1e-10)
            np.testing.assert_allclose((V * mu) @ V.conj().T, H, atol=1e-10)

    def test_errors(self):
        with self.assertRaises(ValueError):
            hermitian_eigs([[0, 1], [0, 0]])
        with self.assertRaises(ValueError):
            hermitian_eigs(np.eye(2), method='magic')
        with self.assertRaises(ConvergenceError):
            hermitian_eigs(_hermitian(self.rng, 4), method='jacobi', max_sweeps=0)
        # numerical failures are LinAlgErrors
        self.assertTrue(issubclass(ConvergenceError, np.linalg.LinAlgError))


class TestEigenvalues(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_qr_against_lapack(self):
        for n in (1, 2, 5, 9):
            A = self.rng.standard_normal((n, n)) + 1j * self.rng.standard_normal((n, n))
            qr = eigenvalues(A)
            ref = np.linalg.eigvals(A)
            self.assertEqual(qr.size, n)
            for lam in ref:
                self.assertLess(np.abs(qr - lam).min(), 1e-8 * max(1, abs(lam)))

    def test_trace(self):
        for n in (1, 2, 5, 9):
            A = self.rng.standard_normal((n, n)) + 1j * self.rng.standard_normal((n, n))
            tol = 1e-8 * max(1, spectral_norm(A)) * n
            self.assertLess(abs(eigenvalues(A).sum() - np.trace(A)), tol)
            self.assertLess(abs(eigenvalues(A, method='lapack').sum() - np.trace(A)), tol)

    def test_norm_unitary_invariance(self):
        for n in (1, 3, 6):
            A = self.rng.standard_normal((n, n)) + 1j * self.rng.standard_normal((n, n))
            U, V = random_unitary(self.rng, n), random_unitary(self.rng, n)
            self.assertLess(abs(spectral_norm(U @ A @ V) - spectral_norm(A)), 1e-10)

    def test_ordering(self):
        np.testing.assert_allclose(eigenvalues([[0, -1], [1, 0]]), [1j, -1j])
        ev = eigenvalues(np.diag([1, -3, 2]))
        np.testing.assert_allclose(ev, [-3, 2, 1])

    def test_qr_cap(self):
        A = self.rng.standard_normal((4, 4)) + 1j * self.rng.standard_normal((4, 4))
        with self.assertRaises(ConvergenceError):
            eigenvalues(A, max_iter=0)
        with self.assertRaises(ValueError):
            eigenvalues(A, method='power')

    def test_norms(self):
        self.assertEqual(spectral_norm([[0, 1], [0, 0]]), 1.)
        A = self.rng.standard_normal((4, 3)) + 1j * self.rng.standard_normal((4, 3))
        np.testing.assert_allclose(singular_values(A), np.linalg.svd(A, compute_uv=False), atol=1e-10)
        np.testing.assert_allclose(singular_values(A, method='jacobi'), np.linalg.svd(A, compute_uv=False), atol=1e-10)
        self.assertAlmostEqual(spectral_radius(np.diag([1, -2j, .5])), 2.)
        self.assertEqual(numerical_rank(np.diag([1, 1e-3, 0]), 1e-2), 1)

    def test_is_normal(self):
        self.assertTrue(is_normal(_hermitian(self.rng, 3)))
        self.assertTrue(is_normal(np.diag([1j, 2, -3])))
        self.assertFalse(is_normal([[0, 1], [0, 0]]))

    def test_operator_abs(self):
        np.testing.assert_allclose(operator_abs([[0, 1], [0, 0]]), np.diag([0, 1]), atol=1e-12)
        B = self.rng.standard_normal((3, 3)) + 1j * self.rng.standard_normal((3, 3))
        absB = operator_abs(B)
        np.testing.assert_allclose(absB @ absB, B.conj().T @ B, atol=1e-10)


class TestMaxModulusStructure(unittest.TestCase):

    def test_jordan(self):
        self.assertFalse(max_modulus_structure([[0, 1], [0, 0]]).partial_diagonalizable)
        sd = max_modulus_structure([[1, 1], [0, 1]])
        self.assertEqual(sd.members[0].algebraic, 2)
        self.assertEqual(sd.members[0].geometric, 1)
        self.assertFalse(sd.partial_diagonalizable)

    def test_diagonalizable(self):
        sd = max_modulus_structure(np.diag([1, -1, .5]), with_singular_values=True)
        self.assertTrue(sd.partial_diagonalizable)
        self.assertEqual(len(sd.members), 2)
        self.assertAlmostEqual(sd.radius, 1.)
        np.testing.assert_allclose(sd.singular_values, [1, 1, .5])
        # a max-modulus block of size one next to a defective smaller block
        A = np.zeros((3, 3))
        A[0, 0], A[1, 2] = 2, 1
        self.assertTrue(max_modulus_structure(A).partial_diagonalizable)

    def test_inconsistent_multiplicities(self):
        with self.assertRaises(ValueError):
            SpectralData(eigenvalues=np.array([1.]), members=[ClusterMember(0, 1., algebraic=1, geometric=2)])


if __name__ == "__main__":
    unittest.main(exit=False, verbosity=2)
