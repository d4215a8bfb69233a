import unittest

import numpy as np

from kronrad.core import kron
from kronrad.radius import w
from kronrad.spectral import spectral_norm
from kronrad import bounds
from kronrad.bounds import BoundReport


def _random(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestBoundReport(unittest.TestCase):

    def test_ledger(self):
        rep = BoundReport(instance={'n': 2}, tol=1e-8)
        rep.add('a', 1., 'x')
        rep.add('b', 2., 'y')
        rep.add('c', 1.5, 'x')
        self.assertIn('a', rep)
        self.assertEqual(rep['b'], 2.)
        with self.assertRaises(KeyError):
            rep['d']
        with self.assertRaises(ValueError):
            rep.add('a', 3., 'x')
        self.assertEqual(rep.relate('a', 'b', 'y'), 1.)
        self.assertTrue(rep.ok())
        self.assertEqual(rep.min_slack, 1.)
        # a failing relation and a failing check
        rep.relate('b', 'c', 'z')
        rep.check('never', False, 'w')
        bad = rep.violations()
        self.assertEqual(len(bad), 2)
        self.assertFalse(rep.ok())
        self.assertEqual(rep.min_slack, -.5)
        self.assertEqual(rep.anchors, ['x', 'y', 'z', 'w'])

    def test_tolerance(self):
        rep = BoundReport(tol=1e-8)
        rep.add('lhs', 1e6 + 1e-3, 'x')
        rep.add('rhs', 1e6, 'x')
        rep.relate('lhs', 'rhs', 'x')
        # the slack is relative to max(1, |rhs|)
        self.assertTrue(rep.ok(tol=1e-8))
        self.assertFalse(rep.ok(tol=1e-10))

    def test_tables(self):
        rep = BoundReport()
        rep.add('a', 1, 'x')
        rep.add('b', 2, 'x')
        rep.relate('a', 'b', 'x')
        df = rep.to_df()
        self.assertEqual(list(df.columns), ['name', 'value', 'anchor'])
        self.assertEqual(df.shape[0], 2)
        self.assertEqual(list(rep.relations_df().columns), ['lhs', 'rhs', 'slack', 'anchor'])
        d = rep.to_dict()
        self.assertTrue(d['ok'])
        self.assertEqual(d['entries'][1], {'name': 'b', 'value': 2., 'anchor': 'x'})

    def test_merge(self):
        one, two = BoundReport(), BoundReport()
        one.add('a', 1, 'x')
        two.add('a', 1, 'x')
        two.add('b', 2, 'y')
        two.relate('a', 'b', 'y')
        one.merge(two)
        self.assertEqual([e.name for e in one.entries], ['a', 'b'])
        self.assertEqual(len(one.relations), 1)


class TestKroneckerChains(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(9)

    def test_p3_strict(self):
        rep = bounds.p3_chain(np.diag([1, 2]), [[0, 1], [0, 0]])
        self.assertAlmostEqual(rep['w(A(x)B)'], 1., places=10)
        self.assertAlmostEqual(rep['w(A)||B||'], 2., places=10)
        self.assertAlmostEqual(rep['w(A)w(B)'], 1., places=10)
        self.assertTrue(rep.ok())
        self.assertIn('E0-1', rep.anchors)

    def test_p3_random(self):
        for n, m in ((1, 3), (2, 2), (3, 2)):
            rep = bounds.p3_chain(_random(self.rng, n), _random(self.rng, m))
            self.assertTrue(rep.ok(), rep.relations_df())
        # radial B collapses the sandwich to an equality
        G = _random(self.rng, 3)
        rep = bounds.p3_chain(_random(self.rng, 2), G + G.conj().T)
        self.assertEqual(len(rep.checks), 1)
        self.assertTrue(rep.ok())

    def test_c_matrices(self):
        A1 = np.array([[0, 1 + 1j], [np.sqrt(2), 0]])
        B = np.array([[0, 2], [0, 0]])
        C, C_circ = bounds.c_matrices(A1, B)
        self.assertAlmostEqual(w(C), np.sqrt(2), places=9)
        np.testing.assert_allclose(C_circ, [[0, 2 * np.sqrt(2)], [2 * np.sqrt(2), 0]])
        rep = bounds.th4_chain(A1, B)
        self.assertAlmostEqual(rep['w(A(x)B)'], np.sqrt(2), places=9)
        self.assertTrue(rep.ok())

    def test_th4_nonnegative(self):
        A = self.rng.uniform(0, 1, (3, 3))
        B = _random(self.rng, 2)
        rep = bounds.th4_chain(A, B)
        self.assertTrue(rep.ok())
        self.assertIn('ECtilde', rep.anchors)
        self.assertLess(bounds.c_circ_identity(A, B), 1e-12)
        with self.assertRaises(ValueError):
            bounds.c_circ_identity(-A, B)

    def test_refined(self):
        for n in (2, 3):
            A, B = _random(self.rng, n), _random(self.rng, 2)
            rep = bounds.refined_bounds(A, B)
            self.assertTrue(rep.ok(), rep.relations_df())
        B = _random(self.rng, 2)
        self.assertLessEqual(bounds.hat_c_entry(1, 2, B), 1.5 * spectral_norm(B) + 1e-12)
        # for normal B, |B| = |B*| and the entry is (|a_ij| + |a_ji|) ||B|| / 2
        self.assertAlmostEqual(bounds.hat_c_entry(1, 2, np.diag([1, 3j])), 4.5)

    def test_cor1(self):
        G = _random(self.rng, 2)
        A = self.rng.uniform(0, 1, (3, 3)) + np.eye(3)
        c = bounds.cor1_equality_check(A, G + G.conj().T)
        self.assertTrue(c.forward_applicable and c.forward_ok)
        self.assertTrue(c.converse_applicable and c.equality and c.converse_ok)
        c = bounds.cor1_equality_check(A, [[0, 1], [0, 0]])
        self.assertFalse(c.forward_applicable)
        self.assertFalse(c.equality)
        self.assertTrue(c.converse_ok)
        self.assertAlmostEqual(c.holbrook, bounds.holbrook(A, [[0, 1], [0, 0]]))

    def test_e14(self):
        rep = bounds.e14_chain(_random(self.rng, 3), _random(self.rng, 2))
        self.assertTrue(rep.ok())
        self.assertEqual(rep.anchors, ['E14'])

    def test_commutes(self):
        A, B = _random(self.rng, 2), _random(self.rng, 3)
        self.assertLess(bounds.kron_commutes(A, B), 1e-9)
        self.assertAlmostEqual(w(kron(A, B)), w(kron(B, A)), places=9)


class TestBlockNorms(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(10)

    def test_hou_du(self):
        grid = [[_random(self.rng, 2) for _ in range(3)] for _ in range(3)]
        lhs, rhs = bounds.hou_du_gap(grid)
        self.assertLessEqual(lhs, rhs + 1e-12)
        with self.assertRaises(ValueError):
            bounds.hou_du_gap([[np.eye(2), np.eye(2)]])
        with self.assertRaises(ValueError):
            bounds.hou_du_gap([[np.eye(2), np.eye(2)], [np.eye(2), np.eye(3)]])

    def test_diagonal_scaling(self):
        A = _random(self.rng, 3) + np.eye(3)
        np.testing.assert_allclose(bounds.diagonal_scaled(A, 2).diagonal(), 2 * A.diagonal())
        scan = bounds.lemma_need_scan(A)
        self.assertTrue(scan.ok)
        self.assertEqual(scan.equal.sum(), 1)
        with self.assertRaises(ValueError):
            bounds.lemma_need_scan([[0, 1], [1, 1]])


if __name__ == "__main__":
    unittest.main(exit=False, verbosity=2)
