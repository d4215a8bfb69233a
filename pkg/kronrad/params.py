"""
Tolerances, grid sizes and the element budget shared by all modules.

Values are layered: the package defaults below, then the optional JSON parameter file
~/.kronrad (read with iblutil.io.params), then the KRONRAD_BUDGET environment variable, then
keyword overrides given to `get`.

Examples
--------
Raise the element budget for a single call

>>> from kronrad import params
>>> params.get(element_budget=2 ** 26).element_budget
67108864

Persist a setting for subsequent sessions

>>> params.setup(grid=2048)  # doctest: +SKIP
"""
from pathlib import Path
import logging
import os

from iblutil.io import params as iopar
from iblutil.util import Bunch

_logger = logging.getLogger(__name__)

PAR_ID_STR = 'kronrad'
"""str: The name of the parameter file, ~/.kronrad on posix systems."""

ENV_BUDGET = 'KRONRAD_BUDGET'
"""str: Environment variable overriding the element budget."""

DEFAULTS = {
    'element_budget': 2 ** 24,  # entries of any materialized product
    'grid': 1024,  # angles of the numerical radius sweep
    'theta_tol': 1e-12,  # refinement interval in theta
    'cluster_tol': 1e-6,  # relative modulus gap of the max-modulus cluster
    'rank_tol': 1e-8,  # relative singular value cutoff of numerical ranks
    'slack_tol': 1e-8,  # admissible negative slack of a verified inequality
    'hermitian_tol': 1e-10,  # relative departure from Hermitian symmetry
    'adjoint_tol': 1e-9,  # relative size of the support-leaking block
    'support_cutoff': 1e-12,  # relative eigenvalue cutoff of the support of P
    'stochastic_tol': 1e-10,  # row and column sum agreement of scaled doubly stochastic matrices
    'hermitian_solver': 'lapack',  # 'lapack' or 'jacobi'
    'max_sweeps': 100,  # cyclic Jacobi sweeps before giving up
}
"""dict: The package defaults."""


def _from_file():
    # iblutil writes the file when a default is given, so only read an existing file
    if not Path(iopar.getfile(PAR_ID_STR)).exists():
        return {}
    par = iopar.as_dict(iopar.read(PAR_ID_STR)) or {}
    unknown = set(par) - set(DEFAULTS)
    if unknown:
        _logger.warning(f"Ignoring unknown keys {sorted(unknown)} in {iopar.getfile(PAR_ID_STR)}")
    return {k: v for k, v in par.items() if k in DEFAULTS}


def get(**overrides) -> Bunch:
    """
    Return the current parameters.

    Parameters
    ----------
    **overrides
        Any key of DEFAULTS. None values are ignored so that functions can forward their own
        optional arguments untouched.

    Returns
    -------
    iblutil.util.Bunch
        The parameters, with attribute access.

    Raises
    ------
    ValueError
        An override key is unknown or KRONRAD_BUDGET is not a positive integer.
    """
    par = Bunch(DEFAULTS)
    par.update(_from_file())
    budget = os.environ.get(ENV_BUDGET)
    if budget:
        try:
            par['element_budget'] = int(budget)
        except ValueError:
            raise ValueError(f"{ENV_BUDGET}={budget!r} is not an integer number of elements")
    unknown = set(overrides) - set(DEFAULTS)
    if unknown:
        raise ValueError(f"Unknown parameters {sorted(unknown)}, expected one of {sorted(DEFAULTS)}")
    par.update({k: v for k, v in overrides.items() if v is not None})
    if par['element_budget'] <= 0:
        raise ValueError(f"The element budget must be positive, got {par['element_budget']}")
    return par


def value(key, override=None):
    """Return `override` if given, otherwise the configured value of `key`."""
    if override is not None:
        return override
    return get()[key]


def setup(**kwargs):
    """
    Write parameters to ~/.kronrad, keeping the values already stored there.

    Parameters
    ----------
    **kwargs
        Keys of DEFAULTS to store.

    Returns
    -------
    iblutil.util.Bunch
        The stored parameters.
    """
    unknown = set(kwargs) - set(DEFAULTS)
    if unknown:
        raise ValueError(f"Unknown parameters {sorted(unknown)}")
    par = _from_file()
    par.update(kwargs)
    iopar.write(PAR_ID_STR, par)
    _logger.info(f"Parameters written to {iopar.getfile(PAR_ID_STR)}")
    return Bunch(par)
