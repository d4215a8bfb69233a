"""
Numerical radius and operator seminorm induced by a positive semidefinite matrix P.

On C^m with <x, y>_P = <Px, y>, an operator B is P-adjointable when B* maps the support of P
into itself. Such a B has a reduced matrix M acting on the support, in the coordinates of the
eigenvectors of P scaled by the square roots of the eigenvalues, with

    w_P(B) = w(M),    ||B||_P = ||M||,

and the reduced matrix of A (x) B for the weight I_n (x) P is A (x) M. The Kronecker bounds of
`kronrad.bounds` then carry over with w_P and ||.||_P in place of w and ||.||.

Examples
--------
>>> ps = PSpace.from_matrix([[4, 0], [0, 1]])
>>> [round(v, 10) for v in p_radius_and_norm(ps, [[0, 1], [0, 0]])]
[1.0, 2.0]
"""
from dataclasses import dataclass
import logging

import numpy as np
from iblutil.util import Bunch

from kronrad import params
from kronrad.core import as_cmatrix, kron, random_complex, random_unitary
from kronrad.radius import w, is_nonnegative
from kronrad.spectral import hermitian_eigs, spectral_norm
from kronrad.bounds import BoundReport, c_matrices

_logger = logging.getLogger(__name__)


class AdjointabilityError(ValueError):
    """B* does not leave the support of P invariant."""


@dataclass(frozen=True)
class PSpace:
    """A positive semidefinite weight P with its eigendecomposition restricted to the support."""

    """numpy.array: The (m, m) Hermitian positive semidefinite matrix P."""
    P: np.ndarray
    """numpy.array: Unitary eigenvector matrix, columns sorted by descending eigenvalue."""
    U: np.ndarray
    """numpy.array: The eigenvalues of P in descending order, clamped at 0."""
    sigma: np.ndarray
    """int: Number of eigenvalues above the support cutoff."""
    rank: int

    @classmethod
    def from_matrix(cls, P, cutoff=None, tol=None):
        """
        Diagonalize P and split its support.

        A diagonal P is kept in its own coordinates (U is a permutation) so that the reduced
        matrix of a diagonal weight is read off directly. Other eigenvector columns are given a
        real positive largest component.

        Parameters
        ----------
        P : array_like
            A Hermitian positive semidefinite matrix.
        cutoff : float, optional
            Eigenvalues <= cutoff * max eigenvalue are treated as 0, defaults to the configured
            support_cutoff (1e-12).
        tol : float, optional
            Relative tolerance of the Hermitian and semidefinite tests, defaults to the configured
            hermitian_tol.

        Returns
        -------
        PSpace

        Raises
        ------
        ValueError
            P is not Hermitian, has a negative eigenvalue beyond tolerance or is zero.
        """
        P = as_cmatrix(P, square=True, name='P')
        par = params.get(support_cutoff=cutoff, hermitian_tol=tol)
        scale = max(1, float(np.abs(P).max()))
        if np.abs(P - P.conj().T).max() > par.hermitian_tol * scale:
            raise ValueError("P must be Hermitian")
        offdiag = P - np.diag(P.diagonal())
        if np.all(offdiag == 0):
            d = P.diagonal().real
            order = np.argsort(-d, kind='stable')
            sigma, U = d[order], np.eye(P.shape[0], dtype=np.complex128)[:, order]
        else:
            mu, V = hermitian_eigs((P + P.conj().T) / 2)
            sigma, U = mu[::-1], V[:, ::-1]
            big = U[np.argmax(np.abs(U), axis=0), np.arange(U.shape[1])]
            U = U * (np.abs(big) / big)[np.newaxis, :]
        if sigma[-1] < -par.hermitian_tol * max(1, abs(sigma[0])):
            raise ValueError(f"P must be positive semidefinite, smallest eigenvalue is {sigma[-1]:.3g}")
        if sigma[0] <= 0:
            raise ValueError("P must not be zero")
        sigma = np.maximum(sigma, 0)
        rank = int(np.sum(sigma > par.support_cutoff * sigma[0]))
        _logger.debug(f"PSpace of size {P.shape[0]} with support rank {rank}")
        return cls(P=P, U=U, sigma=sigma, rank=rank)

    @property
    def size(self):
        """int: The dimension m."""
        return self.P.shape[0]

    @property
    def support_basis(self):
        """numpy.array: The (m, rank) orthonormal basis U_S of the support."""
        return self.U[:, :self.rank]

    @property
    def projector(self):
        """numpy.array: The orthogonal projection onto the support of P."""
        US = self.support_basis
        return US @ US.conj().T

    @property
    def pinv(self):
        """numpy.array: The pseudo-inverse of P on its support."""
        US = self.support_basis
        return (US / self.sigma[:self.rank][np.newaxis, :]) @ US.conj().T

    def seminorm(self, x):
        """||x||_P = <Px, x>^(1/2)."""
        x = np.asarray(x, dtype=np.complex128).ravel()
        return float(np.sqrt(max(np.vdot(x, self.P @ x).real, 0)))

    def _check_shape(self, B):
        B = as_cmatrix(B, square=True, name='B')
        if B.shape[0] != self.size:
            raise ValueError(f"B has shape {B.shape} but P has size {self.size}")
        return B


def _leak(ps, B):
    proj = ps.projector
    return spectral_norm(proj @ B @ (np.eye(ps.size) - proj))


def is_p_adjointable(ps, B, tol=None):
    """
    True when ||Pi B (I - Pi)|| <= tol max(1, ||B||), Pi the projection onto the support of P.

    Examples
    --------
    >>> ps = PSpace.from_matrix([[1, 0], [0, 0]])
    >>> is_p_adjointable(ps, [[0, 0], [1, 0]]), is_p_adjointable(ps, [[0, 1], [0, 0]])
    (True, False)
    """
    B = ps._check_shape(B)
    tol = params.value('adjoint_tol', tol)
    return bool(_leak(ps, B) <= tol * max(1, spectral_norm(B)))


def reduced_matrix(ps, B, tol=None):
    """
    The reduced matrix M = S^(1/2) U_S* B U_S S^(-1/2) of a P-adjointable B.

    S is the diagonal of the support eigenvalues of P. M is additive and multiplicative in B,
    and lift(ps, M) P = P B.

    Raises
    ------
    AdjointabilityError
        B leaks the complement of the support into the support. B is never projected.
    """
    B = ps._check_shape(B)
    tol = params.value('adjoint_tol', tol)
    leak = _leak(ps, B)
    if leak > tol * max(1, spectral_norm(B)):
        raise AdjointabilityError(
            f"B is not P-adjointable: the support leaking block has norm {leak:.3g}")
    US = ps.support_basis
    s = np.sqrt(ps.sigma[:ps.rank])
    return (s[:, np.newaxis] * (US.conj().T @ B @ US)) / s[np.newaxis, :]


def lift(ps, M):
    """The intertwiner U_S S^(1/2) M S^(-1/2) U_S*, so that P B = lift(ps, reduced_matrix(ps, B)) P."""
    M = as_cmatrix(M, square=True, name='M')
    if M.shape[0] != ps.rank:
        raise ValueError(f"M must have the support rank {ps.rank}, got shape {M.shape}")
    US = ps.support_basis
    s = np.sqrt(ps.sigma[:ps.rank])
    return US @ ((s[:, np.newaxis] * M) / s[np.newaxis, :]) @ US.conj().T


def p_adjoint(ps, B):
    """The P-adjoint B# = P^+ B* P, whose reduced matrix is M*."""
    B = ps._check_shape(B)
    return ps.pinv @ B.conj().T @ ps.P


def p_radius_and_norm(ps, B, tol=None):
    """
    The P-numerical radius and the P-operator seminorm of B.

    Returns
    -------
    float
        w_P(B) = w(M).
    float
        ||B||_P = ||M||.
    """
    M = reduced_matrix(ps, B, tol=tol)
    return w(M), spectral_norm(M)


def p_kron_suite(ps, A, B, tol=None, budget=None):
    """
    The Kronecker bounds for the weight I_n (x) P, computed on A (x) M.

    Records the sandwich w(A) w_P(B) <= w_{I(x)P}(A (x) B) <= min(w(A) ||B||_P, w_P(B) ||A||),
    the bounds w(C) and w(bold C) of the C matrices built with w_P and ||.||_P, the bound
    w(bold C) <= w(A) ||B||_P for non-negative A and both directions of the equality statement.

    Returns
    -------
    BoundReport
    """
    A = as_cmatrix(A, square=True)
    M = reduced_matrix(ps, B, tol=tol)
    rep = BoundReport(instance={'A': list(A.shape), 'P': [ps.size, ps.size], 'rank': ps.rank})
    stol = rep.tol
    wa, na = rep.add('w(A)', w(A), 'p3-4'), rep.add('||A||', spectral_norm(A), 'p3-4')
    wpb, npb = rep.add('w_P(B)', w(M), 'lem2-4'), rep.add('||B||_P', spectral_norm(M), 'lem2-4')
    rep.add('w(A)w_P(B)', wa * wpb, 'p3-4')
    wk = rep.add('w_IP(A(x)B)', w(kron(A, M, budget=budget)), 'tilde2020')
    hb = rep.add('w(A)||B||_P', wa * npb, 'p3-4')
    rep.add('min(w(A)||B||_P,w_P(B)||A||)', min(wa * npb, wpb * na), 'p3-4')
    rep.chain(['w(A)w_P(B)', 'w_IP(A(x)B)', 'min(w(A)||B||_P,w_P(B)||A||)'], 'p3-4')
    C, C_bold = c_matrices(A, M)
    rep.add('w(C)', w(C), 'th4-4')
    rep.add('w(bold C)', w(C_bold), 'th1-')
    rep.relate('w_IP(A(x)B)', 'w(C)', 'th4-4')
    rep.relate('w_IP(A(x)B)', 'w(bold C)', 'th1-')
    if is_nonnegative(A):
        rep.relate('w(bold C)', 'w(A)||B||_P', 'final')
    radial = abs(wpb - npb) <= stol * max(1, npb)
    equal = abs(wk - hb) <= stol * max(1, hb)
    if radial:
        rep.check('w_P(B)=||B||_P implies equality', equal, 'cor1-4-')
    if is_nonnegative(A) and np.all(A.diagonal() != 0) and equal:
        rep.check('equality implies w_P(B)=||B||_P', radial, 'cor1-4-')
    return rep


def p_equality_check(ps, A, B, tol=None, budget=None):
    """
    Both directions of w_{I(x)P}(A (x) B) = w(A) ||B||_P <=> w_P(B) = ||B||_P.

    Returns
    -------
    iblutil.util.Bunch
        forward_applicable, forward_ok, converse_applicable and converse_ok, as
        `kronrad.bounds.cor1_equality_check` does for P = I.
    """
    A = as_cmatrix(A, square=True)
    stol = params.value('slack_tol', tol)
    M = reduced_matrix(ps, B)
    wpb, npb = w(M), spectral_norm(M)
    wk, hb = w(kron(A, M, budget=budget)), w(A) * npb
    radial = abs(wpb - npb) <= stol * max(1, npb)
    equal = abs(wk - hb) <= stol * max(1, hb)
    converse_applicable = is_nonnegative(A) and bool(np.all(A.diagonal() != 0))
    return Bunch(forward_applicable=radial, forward_ok=(not radial) or equal,
                 converse_applicable=converse_applicable,
                 converse_ok=(not converse_applicable) or (not equal) or radial,
                 equality=equal, w_kron=wk, holbrook=hb, w_P=wpb, norm_P=npb)


def random_psd(rng, m, rank=None):
    """
    A random positive semidefinite (m, m) matrix of the given rank.

    :param rng: numpy.random.Generator
    :param m: size
    :param rank: rank in [1, m], defaults to m
    :return: PSD complex128 array
    """
    rank = m if rank is None else rank
    if not 1 <= rank <= m:
        raise ValueError(f"rank must lie in [1, {m}], got {rank}")
    U = random_unitary(rng, m)[:, :rank]
    s = rng.uniform(.5, 2., rank)
    return (U * s[np.newaxis, :]) @ U.conj().T


def random_adjointable(rng, ps, scale=1.):
    """
    A random P-adjointable matrix U [[X, 0], [Y, Z]] U*, block lower triangular with respect to
    the split support / kernel of P.
    """
    G = scale * random_complex(rng, (ps.size, ps.size)) / np.sqrt(2)
    G[:ps.rank, ps.rank:] = 0
    return ps.U @ G @ ps.U.conj().T


def embed(ps, M):
    """
    The P-adjointable matrix U_S S^(-1/2) M S^(1/2) U_S*, whose reduced matrix is M.

    With M Hermitian, or normal, w_P = ||.||_P.
    """
    M = as_cmatrix(M, square=True, name='M')
    if M.shape[0] != ps.rank:
        raise ValueError(f"M must have the support rank {ps.rank}, got shape {M.shape}")
    US = ps.support_basis
    s = np.sqrt(ps.sigma[:ps.rank])
    return US @ ((M / s[:, np.newaxis]) * s[np.newaxis, :]) @ US.conj().T
