"""
l_p operator norms of matrices and of Kronecker products A (x) B.

Vectors of C^(n m) are split in n blocks of size m and normed by

    ||x||_p = (sum_j ||x_j||^p)^(1/p),

with ||x_j|| the Euclidean norm of a block, so that ||A (x) B||_p is the operator norm of the
finite realization of an operator matrix [a_ij B]. With blocks of size one this is the usual
l_p norm. Exact values are computed for p in {1, 2, inf}; for other p the module returns a
constructive lower bound and the interpolation upper bound.
"""
from dataclasses import dataclass
from itertools import combinations
import logging

import numpy as np
from scipy.integrate import trapezoid

from kronrad.core import as_cmatrix, kron, doubly_stochastic_scale, ElementBudgetError
from kronrad.spectral import spectral_norm, top_singular_vector, ConvergenceError
from kronrad.radius import numerical_radius

_logger = logging.getLogger(__name__)

MAX_PAIRS = 64
"""int: Above this dimension only adjacent two-coordinate candidates are tried."""


@dataclass(frozen=True)
class LpExponent:
    """An exponent p in [1, inf], with infinity as an explicit flag rather than a float sentinel."""

    """float: The finite value of p, ignored when `infinite` is True."""
    value: float = 2.
    """bool: True for p = inf."""
    infinite: bool = False

    def __post_init__(self):
        if not self.infinite and not (np.isfinite(self.value) and self.value >= 1):
            raise ValueError(f"The exponent p must lie in [1, inf], got {self.value}")

    @classmethod
    def parse(cls, p):
        """
        Build from a number, 'inf', numpy.inf or another LpExponent.

        Examples
        --------
        >>> LpExponent.parse('inf').conjugate()
        LpExponent(value=1.0, infinite=False)
        """
        if isinstance(p, LpExponent):
            return p
        if isinstance(p, str):
            if p.strip().lower() in ('inf', 'infinity', '∞'):
                return cls(value=np.inf, infinite=True)
            try:
                p = float(p)
            except ValueError:
                raise ValueError(f"Cannot read the exponent p from '{p}', use a number >= 1 or 'inf'")
        if np.isinf(p) and p > 0:
            return cls(value=np.inf, infinite=True)
        return cls(value=float(p))

    @property
    def reciprocal(self):
        """float: 1/p, exactly 0 at p = inf."""
        return 0. if self.infinite else 1 / self.value

    def conjugate(self):
        """The exponent q with 1/p + 1/q = 1, exact at the endpoints 1 and inf."""
        if self.infinite:
            return LpExponent(1.)
        if self.value == 1:
            return LpExponent(np.inf, infinite=True)
        return LpExponent(self.value / (self.value - 1))

    @property
    def is_exact(self):
        """bool: True for p in {1, 2, inf}, where the operator norm has a closed form."""
        return self.infinite or self.value in (1, 2)

    def __str__(self):
        return 'inf' if self.infinite else f'{self.value:g}'


def _blocks(block):
    return (block, block) if np.isscalar(block) else tuple(block)


def block_pnorm(x, p, block=1):
    """
    The l_p norm of the Euclidean norms of consecutive blocks of x.

    Parameters
    ----------
    x : array_like
        A vector whose length is a multiple of `block`.
    p : float, str or LpExponent
        The exponent.
    block : int
        Block size.

    Returns
    -------
    float
        (sum_j ||x_j||^p)^(1/p), or max_j ||x_j|| at p = inf.
    """
    p = LpExponent.parse(p)
    x = np.asarray(x, dtype=np.complex128).ravel()
    if x.size % block:
        raise ValueError(f"A vector of length {x.size} cannot be split in blocks of size {block}")
    norms = np.linalg.norm(x.reshape(-1, block), axis=1)
    return float(np.linalg.norm(norms, np.inf if p.infinite else p.value))


def _dual(y, p, block):
    """The unit dual vector z with <y, z> = ||y||_p and ||z||_q = 1, blockwise z_j ∝ ||y_j||^(p-1) y_j / ||y_j||."""
    yb = y.reshape(-1, block)
    norms = np.linalg.norm(yb, axis=1)
    total = np.linalg.norm(norms, p)
    if total == 0:
        return np.zeros_like(y)
    nz = norms > 0
    z = np.zeros_like(yb)
    z[nz] = (norms[nz] ** (p - 1) / norms[nz])[:, np.newaxis] * yb[nz]
    return (z / total ** (p - 1)).ravel()


def opnorm_exact(A, p):
    """
    Exact l_p operator norm for p in {1, 2, inf}.

    p = 1 is the maximum absolute column sum, p = inf the maximum absolute row sum and p = 2 the
    spectral norm.

    Raises
    ------
    ValueError
        p is not one of 1, 2, inf.
    """
    A = as_cmatrix(A)
    p = LpExponent.parse(p)
    if p.infinite:
        return float(np.abs(A).sum(axis=1).max())
    elif p.value == 1:
        return float(np.abs(A).sum(axis=0).max())
    elif p.value == 2:
        return spectral_norm(A)
    raise ValueError(f"No exact operator norm for p={p}; use opnorm_lower and opnorm_upper_interp")


def _scalar_candidates(n):
    """All-ones, standard basis and two-coordinate vectors e_i +- e_j of C^n."""
    yield np.ones(n)
    eye = np.eye(n)
    yield from eye
    pairs = combinations(range(n), 2) if n <= MAX_PAIRS else zip(range(n - 1), range(1, n))
    for i, j in pairs:
        yield eye[i] + eye[j]
        yield eye[i] - eye[j]


def opnorm_lower(A, p, iters=50, block=1, candidates=None):
    """
    A constructive lower bound of the l_p operator norm, with its witness.

    The bound is the best ratio ||Ax||_p / ||x||_p over the all-ones vector, the standard basis
    vectors (blockwise when block > 1), the two-coordinate vectors e_i +- e_j, the conjugate
    phase vectors of each row, any extra candidates given and the iterates of the dual power
    method started from the all-ones vector. The value never exceeds the true norm.

    Parameters
    ----------
    A : array_like
        The matrix.
    p : float, str or LpExponent
        The exponent in [1, inf].
    iters : int
        Maximum number of power iterations (default 50).
    block : int or (int, int)
        Block size of the (output, input) vectors. For A (x) B pass (rows(B), cols(B)).
    candidates : list of array_like, optional
        Additional input vectors.

    Returns
    -------
    float
        The lower bound.
    numpy.array
        The witness x, with ||x||_p = 1.
    """
    A = as_cmatrix(A)
    p = LpExponent.parse(p)
    bout, bin_ = _blocks(block)
    if A.shape[0] % bout or A.shape[1] % bin_:
        raise ValueError(f"A of shape {A.shape} does not split in blocks of shape {(bout, bin_)}")
    nblocks = A.shape[1] // bin_
    fill = np.ones(bin_) / np.sqrt(bin_)

    best, witness = -1., None

    def consider(x):
        nonlocal best, witness
        x = np.asarray(x, dtype=np.complex128).ravel()
        nx = block_pnorm(x, p, bin_)
        if nx == 0:
            return
        ratio = block_pnorm(A @ x, p, bout) / nx
        if ratio > best:
            best, witness = ratio, x / nx

    for v in _scalar_candidates(nblocks):
        consider(np.kron(v, fill))
    if bin_ == 1:
        for row in A:
            consider(np.where(row == 0, 1, np.conj(row) / np.maximum(np.abs(row), np.finfo(float).tiny)))
    for x in candidates or []:
        consider(x)
    if not p.infinite and p.value > 1:
        q = p.conjugate().value
        it = -1
        x = np.ones(A.shape[1], dtype=np.complex128)
        x /= block_pnorm(x, p, bin_)
        for it in range(iters):
            y = A @ x
            consider(x)
            z = A.conj().T @ _dual(y, p.value, bout)
            if block_pnorm(z, q, bin_) <= np.real(np.vdot(z, x)) * (1 + 1e-14) or not np.any(z):
                break
            x = _dual(z, q, bin_)
        consider(x)
        _logger.debug(f"Dual power method stopped after {it + 1} iterations, p={p}")
    return float(max(best, 0.)), witness


def opnorm_upper_interp(A, p):
    """
    The interpolation bound (max row abs sum)^(1/q) (max column abs sum)^(1/p), with x^0 = 1.

    At p = 1 and p = inf it is the exact column and row sum norm respectively.
    """
    A = as_cmatrix(A)
    p = LpExponent.parse(p)
    row = np.abs(A).sum(axis=1).max()
    col = np.abs(A).sum(axis=0).max()
    inv_p = p.reciprocal
    inv_q = 1 - inv_p
    return float((row ** inv_q if inv_q else 1.) * (col ** inv_p if inv_p else 1.))


@dataclass
class PNormBounds:
    """A certified bracket of ||A (x) B||_p."""

    """LpExponent: The exponent p."""
    p: LpExponent
    """float: A constructive lower bound."""
    lower: float
    """float: An upper bound."""
    upper: float
    """float: The exact value when a closed form applies, None otherwise."""
    exact: float = None
    """numpy.array: The input vector achieving `lower`, None when the lower bound comes from a formula."""
    witness: np.ndarray = None

    def ok(self, tol=1e-9):
        """True when lower <= exact <= upper, within tol."""
        if self.lower > self.upper + tol:
            return False
        if self.exact is not None:
            return self.lower <= self.exact + tol and self.exact <= self.upper + tol
        return True


def kron_pnorm_bounds(A, B, p, iters=50, budget=None):
    """
    Bracket the l_p operator norm of A (x) B.

    Parameters
    ----------
    A : array_like
        A square (n, n) matrix.
    B : array_like
        Any matrix.
    p : float, str or LpExponent
        The exponent in [1, inf].
    iters : int
        Power method iterations of the materialized lower candidate.
    budget : int, optional
        Element budget of A (x) B. Beyond it the materialized candidate is skipped.

    Returns
    -------
    PNormBounds
        lower = max(min_i |sum_j a_ij| ||B||, materialized lower bound), upper = the interpolation
        bound of A times ||B||, exact = k ||B|| when A is k times a doubly stochastic matrix.
    """
    A = as_cmatrix(A, square=True)
    B = as_cmatrix(B, name='B')
    p = LpExponent.parse(p)
    nb = spectral_norm(B)
    lower = float(np.abs(A.sum(axis=1)).min() * nb)
    witness = None
    try:
        K = kron(A, B, budget=budget)
    except ElementBudgetError as e:
        _logger.warning(f"Skipping the materialized lower bound: {e}")
    else:
        x_top = top_singular_vector(B)
        extra = [np.kron(v, x_top) for v in _scalar_candidates(A.shape[0])]
        value, x = opnorm_lower(K, p, iters=iters, block=B.shape, candidates=extra)
        if value >= lower:
            lower, witness = value, x
    upper = opnorm_upper_interp(A, p) * nb
    k = doubly_stochastic_scale(A)
    exact = None if k is None else k * nb
    return PNormBounds(p=p, lower=lower, upper=upper, exact=exact, witness=witness)


def circ_norm2_closed(a, b, n, B):
    """
    Closed forms for A = Circ(-a, b, ..., b) of size n.

    Returns
    -------
    float
        ||A (x) B||_2 = max(|a + b|, |(n - 1) b - a|) ||B||.
    float
        The same factor times w(B).
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    B = as_cmatrix(B, square=True, name='B')
    factor = max(abs(a + b), abs((n - 1) * b - a))
    return factor * spectral_norm(B), factor * numerical_radius(B).value


def circ_norm2_real_split(a, b, n):
    """
    ||Circ(-a, b, ..., b)||_2 for real a, b >= 0: a + b if (n - 2) b <= 2 a, else (n - 1) b - a.
    """
    if a < 0 or b < 0:
        raise ValueError(f"The real case split needs a, b >= 0, got a={a}, b={b}")
    return float(a + b) if (n - 2) * b <= 2 * a else float((n - 1) * b - a)


def tfinal_bounds(a, b, n, B=1.):
    """
    Bracket of ||Circ(-a, b, ..., b) (x) B||_p valid for every p in [1, inf].

    :return: (lower, upper) = max(|a+b|, |(n-1)b-a|) ||B||, min(|a+b| + n|b|, |a| + (n-1)|b|) ||B||
    """
    nb = spectral_norm(B)
    lower = max(abs(a + b), abs((n - 1) * b - a))
    upper = min(abs(a + b) + n * abs(b), abs(a) + (n - 1) * abs(b))
    return lower * nb, upper * nb


def kappa_upper_bound(a, b, n, kap=None):
    """The older upper estimate a + b + n b kappa of ||Circ(-a, b, ..., b)||_p for a, b >= 0."""
    kap = kappa(n) if kap is None else kap
    return a + b + n * b * kap


def gram_equicorrelated_norm(A, B, tol=1e-8):
    """
    ||A (x) B||_2 for A whose Gram matrix is A*A = (alpha - beta) I + beta 1_{n x n}.

    Parameters
    ----------
    A : array_like
        A square matrix whose columns satisfy c_i* c_i = alpha and c_i* c_j = beta, real.
    B : array_like
        Any matrix.
    tol : float
        Tolerance on the Gram structure, relative to max(1, |alpha|).

    Returns
    -------
    float
        max(sqrt|alpha - beta|, sqrt|alpha + (n - 1) beta|) ||B||.

    Raises
    ------
    ValueError
        The Gram matrix does not have the equicorrelated structure.
    """
    A = as_cmatrix(A, square=True)
    n = A.shape[0]
    G = A.conj().T @ A
    alpha = G.diagonal().real.mean()
    beta = G[~np.eye(n, dtype=bool)].real.mean() if n > 1 else 0.
    target = (alpha - beta) * np.eye(n) + beta * np.ones((n, n))
    gap = np.abs(G - target).max()
    if gap > tol * max(1, abs(alpha)):
        raise ValueError(f"A*A is not of the form (alpha - beta) I + beta 1 (deviation {gap:.3e})")
    factor = max(np.sqrt(abs(alpha - beta)), np.sqrt(abs(alpha + (n - 1) * beta)))
    return float(factor * spectral_norm(B))


def kappa(n, quad_points=1 << 16):
    """
    kappa = ||1 + z + ... + z^(n-1)||_{L^1} on the unit circle with normalized Haar measure.

    Trapezoidal quadrature on a grid that contains the zeros 2 pi k / n of the integrand, with
    at least `quad_points` intervals.

    Raises
    ------
    ValueError
        n < 2.
    ConvergenceError
        The quadrature does not exceed 1.

    Examples
    --------
    >>> round(kappa(2), 6)
    1.27324
    """
    if n < 2:
        raise ValueError(f"kappa needs n >= 2, got {n}")
    m = n * int(np.ceil(quad_points / n))
    theta = np.linspace(0, 2 * np.pi, m + 1)
    phi = np.abs(np.exp(1j * np.outer(theta, np.arange(n))).sum(axis=1))
    value = float(trapezoid(phi, theta) / (2 * np.pi))
    if not value > 1:
        raise ConvergenceError(f"The quadrature of kappa({n}) = {value} does not exceed 1")
    return value
