import unittest

import numpy as np

from kronrad.core import circulant, circulant_ab, kron
from kronrad.radius import w
from kronrad.spectral import spectral_norm
from kronrad.pnorm import (LpExponent, block_pnorm, opnorm_exact, opnorm_lower, opnorm_upper_interp,
                           kron_pnorm_bounds, circ_norm2_closed, circ_norm2_real_split, tfinal_bounds,
                           kappa, kappa_upper_bound, gram_equicorrelated_norm)


class TestLpExponent(unittest.TestCase):

    def test_parse(self):
        p = LpExponent.parse('inf')
        self.assertTrue(p.infinite)
        self.assertEqual(p.reciprocal, 0.)
        self.assertEqual(str(p), 'inf')
        self.assertEqual(LpExponent.parse(np.inf), p)
        self.assertEqual(str(LpExponent.parse('1.50')), '1.5')
        self.assertEqual(LpExponent.parse(p), p)
        with self.assertRaises(ValueError):
            LpExponent.parse('.5')
        with self.assertRaises(ValueError):
            LpExponent.parse('abc')

    def test_conjugate(self):
        self.assertTrue(LpExponent.parse(1).conjugate().infinite)
        self.assertEqual(LpExponent.parse('inf').conjugate().value, 1.)
        self.assertAlmostEqual(LpExponent.parse(3).conjugate().value, 1.5)
        self.assertTrue(LpExponent.parse(2).is_exact)
        self.assertFalse(LpExponent.parse(3).is_exact)


class TestOperatorNorms(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(6)
        self.A = self.rng.standard_normal((4, 4)) + 1j * self.rng.standard_normal((4, 4))

    def test_block_pnorm(self):
        self.assertAlmostEqual(block_pnorm([3, 4], 2), 5.)
        self.assertAlmostEqual(block_pnorm([3, 4], 1), 7.)
        self.assertAlmostEqual(block_pnorm([3, 4, 0, 1], 1, block=2), 6.)
        self.assertAlmostEqual(block_pnorm([3, 4, 0, 1], 'inf', block=2), 5.)
        with self.assertRaises(ValueError):
            block_pnorm([1, 2, 3], 2, block=2)

    def test_exact(self):
        A = self.A
        self.assertAlmostEqual(opnorm_exact(A, 1), np.linalg.norm(A, 1))
        self.assertAlmostEqual(opnorm_exact(A, 'inf'), np.linalg.norm(A, np.inf))
        self.assertAlmostEqual(opnorm_exact(A, 2), np.linalg.norm(A, 2))
        with self.assertRaises(ValueError):
            opnorm_exact(A, 3)

    def test_lower(self):
        A = self.A
        # the candidates attain the column and row sum norms
        for p in (1, 'inf'):
            lower, x = opnorm_lower(A, p)
            self.assertAlmostEqual(lower, opnorm_exact(A, p), places=10)
            self.assertAlmostEqual(block_pnorm(x, p), 1.)
        lower, x = opnorm_lower(A, 2)
        self.assertLessEqual(lower, opnorm_exact(A, 2) + 1e-12)
        self.assertGreater(lower, .95 * opnorm_exact(A, 2))
        for p in (1.5, 3):
            lower, x = opnorm_lower(A, p)
            self.assertLessEqual(lower, opnorm_upper_interp(A, p) + 1e-12)
            self.assertAlmostEqual(block_pnorm(A @ x, p), lower, places=10)

    def test_upper_interp(self):
        A = self.A
        self.assertAlmostEqual(opnorm_upper_interp(A, 1), opnorm_exact(A, 1))
        self.assertAlmostEqual(opnorm_upper_interp(A, 'inf'), opnorm_exact(A, 'inf'))
        self.assertGreaterEqual(opnorm_upper_interp(A, 2), opnorm_exact(A, 2) - 1e-12)


class TestKroneckerNorms(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_bracket(self):
        A = self.rng.standard_normal((3, 3)) + 1j * self.rng.standard_normal((3, 3))
        B = self.rng.standard_normal((2, 2)) + 1j * self.rng.standard_normal((2, 2))
        for p in ('1', '1.5', '2', '3', 'inf'):
            b = kron_pnorm_bounds(A, B, p)
            self.assertTrue(b.ok())
            self.assertLessEqual(b.lower, b.upper + 1e-9)
            self.assertIsNone(b.exact)
        # at p = 2 the norm is multiplicative
        b = kron_pnorm_bounds(A, B, 2)
        self.assertLessEqual(b.lower, spectral_norm(A) * spectral_norm(B) + 1e-9)
        self.assertGreaterEqual(b.upper, spectral_norm(A) * spectral_norm(B) - 1e-9)

    def test_doubly_stochastic(self):
        A = 2 * np.array([[.25, .75], [.75, .25]])
        B = self.rng.standard_normal((3, 3)) + 1j * self.rng.standard_normal((3, 3))
        nb = spectral_norm(B)
        for p in ('1', '1.5', 'inf'):
            b = kron_pnorm_bounds(A, B, p)
            self.assertAlmostEqual(b.exact, 2 * nb)
            self.assertAlmostEqual(b.lower, 2 * nb)
            self.assertAlmostEqual(b.upper, 2 * nb)
        self.assertAlmostEqual(w(kron(A, B)), 2 * w(B), places=8)

    def test_budget_skip(self):
        A, B = np.eye(2), np.eye(2)
        with self.assertLogs('kronrad.pnorm', 'WARNING'):
            b = kron_pnorm_bounds(A, B, 3, budget=4)
        self.assertIsNone(b.witness)
        self.assertEqual(b.lower, 1.)


class TestCirculantNorms(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(8)

    def test_closed_form(self):
        for n in (2, 3, 6):
            a, b = complex(*self.rng.standard_normal(2)), complex(*self.rng.standard_normal(2))
            B = self.rng.standard_normal((2, 2)) + 1j * self.rng.standard_normal((2, 2))
            K = kron(circulant_ab(a, b, n), B)
            norm2, wr = circ_norm2_closed(a, b, n, B)
            self.assertAlmostEqual(norm2, spectral_norm(K), places=9)
            self.assertAlmostEqual(wr, w(K), places=8)
        with self.assertRaises(ValueError):
            circ_norm2_closed(1, 1, 1, np.eye(2))

    def test_real_split(self):
        self.assertEqual(circ_norm2_real_split(1, 1, 3), 2.)
        self.assertEqual(circ_norm2_real_split(1, 2, 5), 7.)
        for a, b, n in ((1, 1, 3), (1, 2, 5), (.3, .1, 8)):
            self.assertAlmostEqual(circ_norm2_real_split(a, b, n), spectral_norm(circulant_ab(a, b, n)))
        with self.assertRaises(ValueError):
            circ_norm2_real_split(-1, 1, 3)

    def test_tfinal(self):
        a, b, n = .7 - .2j, 1.1j, 5
        B = self.rng.standard_normal((2, 2)) + 1j * self.rng.standard_normal((2, 2))
        lower, upper = tfinal_bounds(a, b, n, B)
        self.assertLessEqual(lower, upper)
        A = circulant_ab(a, b, n)
        for p in ('1', '1.5', '2', 'inf'):
            bb = kron_pnorm_bounds(A, B, p)
            self.assertLessEqual(bb.lower, upper + 1e-9)
            self.assertLessEqual(lower, bb.upper + 1e-9)
        # the bracket is sharper than the kappa estimate
        for a, b, n in ((1., .5, 3), (.2, 1., 6)):
            self.assertLessEqual(tfinal_bounds(a, b, n)[1], kappa_upper_bound(a, b, n) + 1e-12)

    def test_kappa(self):
        self.assertAlmostEqual(kappa(2), 4 / np.pi, places=7)
        self.assertGreater(kappa(5), kappa(2))
        for n in range(2, 9):
            self.assertGreater(kappa(n), 1.)
            self.assertAlmostEqual(kappa(n), kappa(n, quad_points=1 << 17), places=6)
        with self.assertRaises(ValueError):
            kappa(1)

    def test_gram_equicorrelated(self):
        C = circulant(self.rng.standard_normal(3))
        B = self.rng.standard_normal((2, 3))
        self.assertAlmostEqual(gram_equicorrelated_norm(C, B), spectral_norm(kron(C, B)), places=9)
        with self.assertRaises(ValueError):
            gram_equicorrelated_norm(np.diag([1, 2]), B)


if __name__ == "__main__":
    unittest.main(exit=False, verbosity=2)
