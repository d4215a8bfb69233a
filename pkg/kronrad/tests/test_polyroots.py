import unittest

import numpy as np

from kronrad.core import Poly
from kronrad.polyroots import (fujii_kubo_bound, est_poly_bound, root_bound_report, decomposition_check,
                               remark_threshold, rank_one_row_radius, first_row_matrix, random_poly,
                               MAX_DEGREE)
from kronrad.radius import w


class TestRootBounds(unittest.TestCase):

    def test_tie(self):
        p = Poly.from_coefficients([1, 0, -2])
        rep = root_bound_report(p)
        self.assertAlmostEqual(rep.fujii_kubo, 1.5, places=12)
        self.assertAlmostEqual(rep.est_poly, 1.5, places=12)
        self.assertEqual(rep.winner, 'tie')
        self.assertAlmostEqual(rep.max_root_modulus, np.sqrt(2), places=10)

    def test_winners(self):
        rep = root_bound_report(Poly.from_coefficients([1, 0, 2]))
        self.assertAlmostEqual(rep.fujii_kubo, 1.5, places=12)
        self.assertAlmostEqual(rep.est_poly, 2.5, places=12)
        self.assertEqual(rep.winner, 'fujii_kubo')
        rep = root_bound_report(Poly.from_coefficients([1, 0, 0, -10]))
        self.assertAlmostEqual(rep.est_poly, 5.5, places=12)
        self.assertAlmostEqual(rep.fujii_kubo, np.cos(np.pi / 4) + 5, places=12)
        self.assertEqual(rep.winner, 'est_poly')
        self.assertAlmostEqual(rep.max_root_modulus, 10 ** (1 / 3), places=9)
        self.assertEqual(root_bound_report(Poly.from_coefficients([1, 0, 10])).winner, 'fujii_kubo')

    def test_random(self):
        rng = np.random.default_rng(16)
        for degree in (2, 5, 12):
            rep = root_bound_report(random_poly(rng, degree))
            self.assertTrue(rep.ok())
            self.assertEqual(rep.roots.size, degree)
            self.assertTrue(rep.to_bound_report().ok())
        # the coefficients a_0 .. a_{n-1} are accepted directly
        self.assertEqual(root_bound_report([-2, 0]).winner, 'tie')

    def test_degree_limit(self):
        with self.assertRaises(ValueError):
            root_bound_report(Poly(np.ones(MAX_DEGREE + 1)))

    def test_to_dict(self):
        d = root_bound_report(Poly.from_coefficients([1, 0, 2])).to_dict()
        self.assertEqual(d['degree'], 2)
        self.assertEqual(d['coeffs'], [[2., 0.], [0., 0.]])
        self.assertTrue(d['ok'])
        rep = root_bound_report(Poly.from_coefficients([1, 0, 2])).to_bound_report()
        self.assertEqual(rep.anchors, ['est-poly', 'fuji'])
        self.assertAlmostEqual(rep.min_slack, 1.5 - np.sqrt(2), places=10)


class TestDecomposition(unittest.TestCase):

    def test_split(self):
        rng = np.random.default_rng(17)
        for degree in (2, 4, 7):
            d = decomposition_check(random_poly(rng, degree))
            self.assertLess(d.residual, 1e-12)
            self.assertAlmostEqual(d.w_shift, 1., places=9)
            self.assertAlmostEqual(d.w_rank_one, d.w_rank_one_sweep, places=9)
            self.assertAlmostEqual(d.w_rank_one, d.w_rank_one_vectors, places=9)

    def test_rank_one_row(self):
        self.assertEqual(rank_one_row_radius([3, 4]), 4.)
        self.assertAlmostEqual(w(first_row_matrix([3, 4])), 4., places=10)
        self.assertAlmostEqual(rank_one_row_radius([1j]), 1.)
        with self.assertRaises(ValueError):
            rank_one_row_radius([])

    def test_bounds_are_upper_bounds(self):
        for coeffs in ([1, 3, -1], [1, 1j, 0, 2], [1, 0, 0, 0, 0, 1]):
            p = Poly.from_coefficients(coeffs)
            roots = np.roots(coeffs)
            self.assertLessEqual(np.abs(roots).max(), fujii_kubo_bound(p) + 1e-10)
            self.assertLessEqual(np.abs(roots).max(), est_poly_bound(p) + 1e-10)

    def test_threshold(self):
        self.assertEqual(remark_threshold(-10), 2)
        self.assertIsNone(remark_threshold(1))
        # z^n + a0 with |a0 + 1| < |a0| eventually favours the circulant split
        n0 = remark_threshold(-1.2)
        self.assertIsNotNone(n0)
        p = Poly(np.r_[-1.2, np.zeros(n0 - 1)])
        self.assertLessEqual(est_poly_bound(p), fujii_kubo_bound(p))
        with self.assertRaises(ValueError):
            remark_threshold(-10, n_max=1)


if __name__ == "__main__":
    unittest.main(exit=False, verbosity=2)
