"""
Numerical radius computations.

The numerical radius is computed from the rotation identity

    w(A) = max_theta lambda_max(Re(exp(i theta) A)),   Re(X) = (X + X*) / 2,

on a uniform grid of angles refined by bounded Brent (golden section with parabolic steps)
searches around the best grid cells. Closed forms cover entrywise non-negative matrices,
anti-diagonal matrices and rank-one matrices.
"""
from dataclasses import dataclass
import logging

import numpy as np
from scipy.optimize import minimize_scalar

from kronrad import params
from kronrad.core import as_cmatrix
from kronrad.spectral import (hermitian_eigs, spectral_norm, spectral_radius, ConvergenceError,
                              MAX_EIG_SIZE)

_logger = logging.getLogger(__name__)

CHUNK_ELEMENTS = 2 ** 22
"""int: Maximum number of entries of a batch of rotated matrices sent to LAPACK at once."""

N_REFINE = 3
"""int: Number of best grid cells refined by the bounded search."""

VERIFY_TOL = 1e-9
"""float: Maximum change of the radius when the grid is doubled in verify mode."""


@dataclass
class RadiusResult:
    """The numerical radius of a matrix with the angle and unit vector attaining it."""

    """float: The numerical radius w(A)."""
    value: float
    """float: The angle in [0, 2 pi) maximizing lambda_max(Re(exp(i theta) A))."""
    theta_star: float
    """numpy.array: A unit vector x with |<Ax, x>| = w(A)."""
    attaining_vector: np.ndarray
    """bool: w(A) = ||A|| within 1e-8 max(1, ||A||)."""
    is_radial: bool
    """bool: w(A) = r(A) within 1e-8 max(1, ||A||)."""
    is_spectral: bool
    """float: The spectral norm ||A||."""
    norm: float = np.nan
    """float: The spectral radius r(A)."""
    spectral_radius: float = np.nan
    """str: 'sweep' or 'nonnegative'."""
    method: str = 'sweep'

    def __float__(self):
        return float(self.value)


def rotated_real_part(A, theta):
    """Re(exp(i theta) A) = (exp(i theta) A + exp(-i theta) A*) / 2."""
    e = np.exp(1j * theta)
    return (e * A + np.conj(e) * A.conj().T) / 2


def sweep_profile(A, thetas, method=None):
    """
    The support function f(theta) = lambda_max(Re(exp(i theta) A)) on an array of angles.

    Parameters
    ----------
    A : array_like
        A square matrix.
    thetas : array_like
        Angles in radians.
    method : {'lapack', 'jacobi'}, optional
        Hermitian solver, defaults to the configured one. With 'lapack' the rotated matrices are
        sent in batches to numpy.linalg.eigvalsh.

    Returns
    -------
    numpy.array
        f evaluated at each angle.
    """
    A = as_cmatrix(A, square=True)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if params.value('hermitian_solver', method) == 'jacobi':
        return np.array([hermitian_eigs(rotated_real_part(A, t), method='jacobi')[0][-1] for t in thetas])
    n = A.shape[0]
    AH = A.conj().T
    f = np.empty(thetas.size)
    chunk = max(1, CHUNK_ELEMENTS // (n * n))
    for i0 in range(0, thetas.size, chunk):
        e = np.exp(1j * thetas[i0:i0 + chunk])[:, np.newaxis, np.newaxis]
        f[i0:i0 + chunk] = np.linalg.eigvalsh((e * A + np.conj(e) * AH) / 2)[:, -1]
    return f


def _sweep(A, grid, theta_tol, method=None):
    """Grid search then bounded refinement in the best cells; ties go to the smallest angle."""
    method = params.value('hermitian_solver', method)
    thetas = 2 * np.pi * np.arange(grid) / grid
    f = sweep_profile(A, thetas, method=method)
    h = 2 * np.pi / grid
    best = np.argsort(-f, kind='stable')[:N_REFINE]
    candidates = [(f[i], thetas[i]) for i in best]
    for i in best:
        res = minimize_scalar(lambda t: -sweep_profile(A, t, method=method)[0],
                              bounds=(thetas[i] - h, thetas[i] + h), method='bounded',
                              options={'xatol': theta_tol})
        candidates.append((-res.fun, res.x % (2 * np.pi)))
    value, theta = min(candidates, key=lambda c: (-c[0], c[1]))
    _logger.debug(f"Sweep on n={A.shape[0]}, grid={grid}: w={value:.15g} at theta={theta:.15g}")
    return float(value), float(theta)


def is_nonnegative(A):
    """True when every entry is real (zero imaginary part) and >= 0."""
    A = np.asarray(A)
    return bool(np.all(np.imag(A) == 0) and np.all(np.real(A) >= 0))


def numerical_radius(A, grid=None, tol=None, verify=False, method='auto'):
    """
    Compute the numerical radius w(A) = sup |<Ax, x>| over unit vectors x.

    Parameters
    ----------
    A : array_like
        A square matrix of size n <= 256.
    grid : int, optional
        Number of angles of the uniform sweep, defaults to the configured grid (1024).
    tol : float, optional
        Refinement interval in theta, defaults to the configured theta_tol (1e-12).
    verify : bool
        Recompute with twice the grid (and by the sweep when the non-negative shortcut applies)
        and raise if the value moves by more than 1e-9.
    method : {'auto', 'sweep'}
        'auto' uses w(A) = r(A + A*) / 2 when all entries are real and non-negative.

    Returns
    -------
    RadiusResult
        The radius, the attaining angle and vector and the radial and spectral predicates.

    Raises
    ------
    ConvergenceError
        In verify mode, when the doubled grid or the sweep disagree with the first value.

    Examples
    --------
    >>> round(numerical_radius([[1, 1], [-1, -1]]).value, 10)
    1.0
    """
    A = as_cmatrix(A, square=True)
    n = A.shape[0]
    if n > MAX_EIG_SIZE:
        raise ValueError(f"numerical_radius is limited to n <= {MAX_EIG_SIZE}, got n={n}")
    if method not in ('auto', 'sweep'):
        raise ValueError(f"Unknown method '{method}', use 'auto' or 'sweep'")
    par = params.get(grid=grid, theta_tol=tol)
    if method == 'auto' and is_nonnegative(A):
        value, theta, used = numerical_radius_nonneg(A), 0., 'nonnegative'
        if verify:
            check, _ = _sweep(A, par.grid, par.theta_tol)
            if abs(check - value) > VERIFY_TOL * max(1, value):
                raise ConvergenceError(f"Non-negative shortcut {value!r} disagrees with the sweep {check!r}")
    else:
        value, theta = _sweep(A, par.grid, par.theta_tol)
        used = 'sweep'
        if verify:
            check, _ = _sweep(A, 2 * par.grid, par.theta_tol)
            if abs(check - value) > VERIFY_TOL * max(1, value):
                raise ConvergenceError(f"Radius changed from {value!r} to {check!r} on doubling the grid")
    _, V = hermitian_eigs(rotated_real_part(A, theta))
    norm = spectral_norm(A)
    r = spectral_radius(A)
    atol = 1e-8 * max(1, norm)
    return RadiusResult(value=value, theta_star=theta, attaining_vector=V[:, -1],
                        is_radial=abs(norm - value) <= atol, is_spectral=abs(value - r) <= atol,
                        norm=norm, spectral_radius=r, method=used)


def w(A, **kwargs):
    """Shorthand for numerical_radius(A).value."""
    return numerical_radius(A, **kwargs).value


def numerical_radius_nonneg(A):
    """
    The numerical radius of an entrywise non-negative matrix, w(A) = r(A + A*) / 2.

    Raises
    ------
    ValueError
        An entry is complex or negative.
    """
    A = as_cmatrix(A, square=True)
    if not is_nonnegative(A):
        raise ValueError("numerical_radius_nonneg needs real non-negative entries")
    mu, _ = hermitian_eigs(A + A.conj().T)
    return float(np.abs(mu).max() / 2)


def radius_antidiagonal(lams):
    """
    Closed form numerical radius of the anti-diagonal matrix with entries lams.

    w(A) = max_{j <= ceil(n/2)} (|lambda_j| + |lambda_{n+1-j}|) / 2, the central entry of odd n
    contributing |lambda_c|.

    Examples
    --------
    >>> radius_antidiagonal([1, 2, 3, 4])
    2.5
    """
    a = np.abs(np.atleast_1d(np.asarray(lams, dtype=np.complex128)))
    if a.size == 0:
        raise ValueError("radius_antidiagonal needs at least one entry")
    half = (a.size + 1) // 2
    return float(np.max((a[:half] + a[::-1][:half]) / 2))


def rank_one_radius(u, v):
    """The numerical radius of the rank-one matrix u v*, (||u|| ||v|| + |<u, v>|) / 2."""
    u = np.asarray(u, dtype=np.complex128).ravel()
    v = np.asarray(v, dtype=np.complex128).ravel()
    if u.size != v.size:
        raise ValueError(f"u and v must have the same length, got {u.size} and {v.size}")
    return float((np.linalg.norm(u) * np.linalg.norm(v) + abs(np.vdot(v, u))) / 2)
