import os
import unittest
from unittest import mock

from kronrad import params


class TestParams(unittest.TestCase):

    def setUp(self):
        # isolate from a ~/.kronrad file and from the environment of the test machine
        self.patch_file = mock.patch('kronrad.params._from_file', return_value={})
        self.patch_file.start()
        self.patch_env = mock.patch.dict(os.environ, {}, clear=False)
        self.patch_env.start()
        os.environ.pop(params.ENV_BUDGET, None)

    def tearDown(self):
        self.patch_env.stop()
        self.patch_file.stop()

    def test_defaults(self):
        par = params.get()
        self.assertEqual(set(par.keys()), set(params.DEFAULTS.keys()))
        self.assertEqual(par.element_budget, 2 ** 24)
        self.assertEqual(par.grid, 1024)
        self.assertEqual(par.hermitian_solver, 'lapack')

    def test_overrides(self):
        self.assertEqual(params.get(grid=16).grid, 16)
        # None values leave the configured value untouched
        self.assertEqual(params.get(grid=None).grid, 1024)
        with self.assertRaises(ValueError):
            params.get(not_a_key=1)
        with self.assertRaises(ValueError):
            params.get(element_budget=0)

    def test_value(self):
        self.assertEqual(params.value('slack_tol'), 1e-8)
        self.assertEqual(params.value('slack_tol', 1e-3), 1e-3)

    def test_environment(self):
        os.environ[params.ENV_BUDGET] = '100'
        self.assertEqual(params.get().element_budget, 100)
        # keyword overrides come last
        self.assertEqual(params.get(element_budget=7).element_budget, 7)
        os.environ[params.ENV_BUDGET] = 'lots'
        with self.assertRaises(ValueError):
            params.get()

    def test_file_layer(self):
        with mock.patch('kronrad.params._from_file', return_value={'grid': 64}):
            self.assertEqual(params.get().grid, 64)
            self.assertEqual(params.get(grid=8).grid, 8)

    def test_setup(self):
        with mock.patch('kronrad.params.iopar.write') as write:
            par = params.setup(grid=2048)
            write.assert_called_once_with(params.PAR_ID_STR, {'grid': 2048})
        self.assertEqual(par.grid, 2048)
        with self.assertRaises(ValueError):
            params.setup(colour='red')


if __name__ == "__main__":
    unittest.main(exit=False, verbosity=2)
