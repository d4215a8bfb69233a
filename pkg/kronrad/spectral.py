"""
Eigenvalue machinery: Hermitian eigendecomposition, eigenvalues of general complex matrices,
singular values, spectral radius and the Jordan structure of the maximum-modulus eigenvalues.

Two independent paths are kept for each decomposition. The Hermitian solver is either LAPACK
(numpy.linalg.eigh) or a cyclic complex Jacobi iteration; general eigenvalues come either from a
Hessenberg reduction followed by a Wilkinson-shifted complex QR iteration, or from LAPACK.
"""
from dataclasses import dataclass, field
import logging

import numpy as np
import scipy.linalg

from kronrad import params
from kronrad.core import as_cmatrix

_logger = logging.getLogger(__name__)

MAX_EIG_SIZE = 256
"""int: Largest matrix accepted by the QR eigenvalue iteration."""

MAX_STRUCTURE_SIZE = 64
"""int: Largest matrix accepted by the max-modulus Jordan structure probe."""

EPS = np.finfo(np.float64).eps


class ConvergenceError(np.linalg.LinAlgError):
    """An iterative eigensolver reached its iteration cap."""


@dataclass
class ClusterMember:
    """An eigenvalue of maximum modulus with its multiplicities."""

    """int: Position in the sorted eigenvalue list."""
    index: int
    """complex: The eigenvalue."""
    eigenvalue: complex
    """int: Number of computed eigenvalues in the same group."""
    algebraic: int
    """int: Dimension of the eigenspace, n - rank(A - lambda I)."""
    geometric: int


@dataclass
class SpectralData:
    """Eigenvalues, singular values and the maximum-modulus cluster of a square matrix."""

    """numpy.array: Eigenvalues sorted by descending modulus, then real part, then imaginary part."""
    eigenvalues: np.ndarray
    """numpy.array: Descending singular values, None if not computed."""
    singular_values: np.ndarray = None
    """float: The spectral radius r(A)."""
    radius: float = 0.
    """list of ClusterMember: The eigenvalues of modulus r(A) within the cluster tolerance."""
    members: list = field(default_factory=list)

    def __post_init__(self):
        for m in self.members:
            if not 1 <= m.geometric <= m.algebraic:
                raise ValueError(f"Inconsistent multiplicities for eigenvalue {m.eigenvalue}: "
                                 f"geometric {m.geometric}, algebraic {m.algebraic}")

    @property
    def partial_diagonalizable(self):
        """bool: True if every maximum-modulus Jordan block is 1 x 1."""
        return all(m.geometric == m.algebraic for m in self.members)


def sort_eigenvalues(ev):
    """Sort by descending modulus, ties broken by descending real then imaginary part."""
    ev = np.asarray(ev, dtype=np.complex128)
    return ev[np.lexsort((-ev.imag, -ev.real, -np.abs(ev)))]


def hermitian_eigs(H, tol=None, method=None, max_sweeps=None):
    """
    Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    H : array_like
        A square Hermitian matrix.
    tol : float, optional
        Accepted relative departure from symmetry, ||H - H*||_inf <= tol ||H||_inf, defaults to
        the configured hermitian_tol.
    method : {'lapack', 'jacobi'}, optional
        The solver, defaults to the configured hermitian_solver.
    max_sweeps : int, optional
        Cap on the number of cyclic Jacobi sweeps, defaults to the configured max_sweeps.

    Returns
    -------
    numpy.array
        The ascending real eigenvalues mu.
    numpy.array
        The unitary matrix V of eigenvectors, H = V diag(mu) V*.

    Raises
    ------
    ValueError
        H is not Hermitian within tolerance.
    ConvergenceError
        The Jacobi iteration did not converge within max_sweeps.
    """
    H = as_cmatrix(H, square=True, name='H')
    par = params.get(hermitian_tol=tol, hermitian_solver=method, max_sweeps=max_sweeps)
    asym = np.linalg.norm(H - H.conj().T, np.inf)
    if asym > par.hermitian_tol * np.linalg.norm(H, np.inf):
        raise ValueError(f"The matrix is not Hermitian: ||H - H*||_inf = {asym:.3e}")
    H = (H + H.conj().T) / 2
    if par.hermitian_solver == 'lapack':
        return np.linalg.eigh(H)
    elif par.hermitian_solver == 'jacobi':
        return _jacobi_eigh(H, par.max_sweeps)
    raise ValueError(f"Unknown Hermitian solver '{par.hermitian_solver}', use 'lapack' or 'jacobi'")


def _jacobi_eigh(H, max_sweeps):
    """Cyclic complex Jacobi: each rotation annihilates H[p, q] after a phase change of column q."""
    H = H.copy()
    n = H.shape[0]
    V = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(H)
    for sweep in range(max_sweeps + 1):
        off = np.linalg.norm(H - np.diag(np.diag(H)))
        if off <= EPS * scale:
            _logger.debug(f"Jacobi converged after {sweep} sweeps, n={n}")
            order = np.argsort(H.diagonal().real, kind='stable')
            return H.diagonal().real[order], V[:, order]
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = H[p, q]
                a = abs(g)
                if a <= EPS * 1e-3 * scale:
                    H[p, q] = H[q, p] = 0
                    continue
                e = g / a
                tau = (H[q, q].real - H[p, p].real) / (2 * a)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1 + tau ** 2)) if tau != 0 else 1.
                c = 1 / np.sqrt(1 + t ** 2)
                s = t * c
                G = np.array([[c, s], [-s * np.conj(e), c * np.conj(e)]])
                pq = [p, q]
                H[:, pq] = H[:, pq] @ G
                H[pq, :] = G.conj().T @ H[pq, :]
                V[:, pq] = V[:, pq] @ G
                H[p, q] = H[q, p] = 0
                H[p, p], H[q, q] = H[p, p].real, H[q, q].real
    raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                           f"(off-diagonal norm {off:.3e}, n={n})")


def _eig2(M):
    """Eigenvalues of a 2 x 2 block from the quadratic formula."""
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    half_tr = (a + d) / 2
    disc = np.sqrt(((a - d) / 2) ** 2 + b * c + 0j)
    return half_tr + disc, half_tr - disc


def _qr_step(W, mu):
    """One shifted QR step W - mu I = QR, W <- RQ + mu I on an upper Hessenberg block, via Givens rotations."""
    k = W.shape[0]
    W = W - mu * np.eye(k)
    rotations = []
    for j in range(k - 1):
        a, b = W[j, j], W[j + 1, j]
        r = np.hypot(abs(a), abs(b))
        c, s = (a / r, b / r) if r > 0 else (1., 0.)
        G = np.array([[np.conj(c), np.conj(s)], [-s, c]])
        W[j:j + 2, j:] = G @ W[j:j + 2, j:]
        W[j + 1, j] = 0
        rotations.append(G)
    for j, G in enumerate(rotations):
        W[:j + 2, j:j + 2] = W[:j + 2, j:j + 2] @ G.conj().T
    return W + mu * np.eye(k)


def _hessenberg_eigvals(A, max_iter):
    H = scipy.linalg.hessenberg(A).astype(np.complex128)
    n = H.shape[0]
    norm = max(np.abs(H).max(), np.finfo(np.float64).tiny)
    ev = np.zeros(n, dtype=np.complex128)
    hi, its, total = n - 1, 0, 0
    while hi >= 0:
        # deflate at the lowest negligible subdiagonal entry of the active window
        lo = hi
        while lo > 0:
            s = abs(H[lo, lo]) + abs(H[lo - 1, lo - 1])
            if abs(H[lo, lo - 1]) <= EPS * (s if s > 0 else norm):
                H[lo, lo - 1] = 0
                break
            lo -= 1
        if lo == hi:
            ev[hi] = H[hi, hi]
            hi, its = hi - 1, 0
            continue
        if lo == hi - 1:
            ev[hi - 1], ev[hi] = _eig2(H[hi - 1:hi + 1, hi - 1:hi + 1])
            hi, its = hi - 2, 0
            continue
        total += 1
        its += 1
        if total > max_iter:
            raise ConvergenceError(f"Shifted QR did not converge in {max_iter} iterations "
                                   f"({hi + 1} eigenvalues left, n={n})")
        if its % 10 == 0:
            # exceptional shift
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) + 0.5 * abs(H[hi - 1, hi - 2])
        else:
            l1, l2 = _eig2(H[hi - 1:hi + 1, hi - 1:hi + 1])
            mu = l1 if abs(l1 - H[hi, hi]) <= abs(l2 - H[hi, hi]) else l2
        H[lo:hi + 1, lo:hi + 1] = _qr_step(H[lo:hi + 1, lo:hi + 1], mu)
    _logger.debug(f"Shifted QR converged in {total} iterations, n={n}")
    return ev


def eigenvalues(A, method='qr', max_iter=None):
    """
    Eigenvalues of a square complex matrix.

    Parameters
    ----------
    A : array_like
        A square matrix of size n <= 256.
    method : {'qr', 'lapack'}
        'qr' reduces to Hessenberg form and runs a Wilkinson-shifted QR iteration with
        deflation; 'lapack' calls numpy.linalg.eigvals.
    max_iter : int, optional
        Cap on QR iterations, defaults to 30 n.

    Returns
    -------
    numpy.array
        The n eigenvalues sorted by descending modulus, then real part, then imaginary part.

    Raises
    ------
    ConvergenceError
        The QR iteration reached its cap.

    Examples
    --------
    >>> eigenvalues([[0, -1], [1, 0]])
    array([0.+1.j, 0.-1.j])
    """
    A = as_cmatrix(A, square=True)
    n = A.shape[0]
    if method == 'lapack':
        return sort_eigenvalues(np.linalg.eigvals(A))
    elif method != 'qr':
        raise ValueError(f"Unknown eigenvalue method '{method}', use 'qr' or 'lapack'")
    if n > MAX_EIG_SIZE:
        raise ValueError(f"The QR eigenvalue iteration is limited to n <= {MAX_EIG_SIZE}, got n={n}")
    max_iter = 30 * n if max_iter is None else max_iter
    return sort_eigenvalues(_hessenberg_eigvals(A, max_iter))


def _gram(A):
    """The smaller of A*A and AA*, which share their non zero eigenvalues."""
    return A.conj().T @ A if A.shape[1] <= A.shape[0] else A @ A.conj().T


def singular_values(A, method=None):
    """Descending singular values, square roots of the eigenvalues of A*A clamped at 0."""
    A = as_cmatrix(A)
    mu, _ = hermitian_eigs(_gram(A), method=method)
    return np.sqrt(np.maximum(mu[::-1], 0))


def spectral_norm(A, method=None):
    """
    The operator norm ||A|| = sqrt(lambda_max(A*A)).

    Examples
    --------
    >>> spectral_norm([[0, 1], [0, 0]])
    1.0
    """
    return float(singular_values(A, method=method)[0])


def top_singular_vector(A):
    """A unit right singular vector x of the largest singular value, ||Ax|| = ||A||."""
    A = as_cmatrix(A)
    _, V = hermitian_eigs(A.conj().T @ A)
    return V[:, -1]


def spectral_radius(A, method='qr'):
    """The largest eigenvalue modulus r(A)."""
    return float(np.abs(eigenvalues(A, method=method)).max())


def numerical_rank(A, tol):
    """Number of singular values above the absolute cutoff `tol`, from the SVD."""
    A = as_cmatrix(A)
    return int(np.sum(np.linalg.svd(A, compute_uv=False) > tol))


def is_normal(A, tol=1e-12):
    """True when ||A*A - AA*||_inf <= tol max(1, ||A||_inf^2)."""
    A = as_cmatrix(A, square=True)
    gap = np.linalg.norm(A.conj().T @ A - A @ A.conj().T, np.inf)
    return bool(gap <= tol * max(1, np.linalg.norm(A, np.inf) ** 2))


def max_modulus_structure(A, cluster_tol=None, rank_tol=None, with_singular_values=False):
    """
    Algebraic and geometric multiplicities of the maximum-modulus eigenvalues.

    Eigenvalues with ||lambda| - r(A)| <= cluster_tol max(1, r(A)) form the cluster. Within the
    cluster, eigenvalues closer than the same tolerance are grouped as one eigenvalue lambda, whose
    algebraic multiplicity is the group size and whose geometric multiplicity is
    n - rank(A - lambda I) at the singular value cutoff rank_tol ||A||.

    Parameters
    ----------
    A : array_like
        A square matrix of size n <= 64.
    cluster_tol : float, optional
        Defaults to the configured cluster_tol (1e-6).
    rank_tol : float, optional
        Defaults to the configured rank_tol (1e-8).
    with_singular_values : bool
        Also store the singular values.

    Returns
    -------
    SpectralData
        The flag `partial_diagonalizable` is True when geometric = algebraic for every member.

    Examples
    --------
    A Jordan block is defective

    >>> max_modulus_structure([[0, 1], [0, 0]]).partial_diagonalizable
    False
    """
    A = as_cmatrix(A, square=True)
    n = A.shape[0]
    if n > MAX_STRUCTURE_SIZE:
        raise ValueError(f"max_modulus_structure is limited to n <= {MAX_STRUCTURE_SIZE}, got n={n}")
    par = params.get(cluster_tol=cluster_tol, rank_tol=rank_tol)
    ev = eigenvalues(A)
    r = float(np.abs(ev).max())
    gap = par.cluster_tol * max(1, r)
    sv = np.linalg.svd(A, compute_uv=False)
    cutoff = par.rank_tol * sv[0]
    cluster = np.where(np.abs(r - np.abs(ev)) <= gap)[0]
    members, assigned = [], np.zeros(n, dtype=bool)
    for i in cluster:
        if assigned[i]:
            continue
        group = cluster[(np.abs(ev[cluster] - ev[i]) <= gap) & ~assigned[cluster]]
        assigned[group] = True
        lam = ev[group].mean()
        geometric = n - numerical_rank(A - lam * np.eye(n), cutoff)
        if geometric > group.size:
            _logger.debug(f"Clamping geometric multiplicity {geometric} of {lam} to {group.size}")
        geometric = min(max(geometric, 1), group.size)
        members.extend(ClusterMember(index=int(j), eigenvalue=complex(ev[j]), algebraic=int(group.size),
                                     geometric=int(geometric)) for j in group)
    members.sort(key=lambda m: m.index)
    return SpectralData(eigenvalues=ev, singular_values=sv if with_singular_values else None,
                        radius=r, members=members)


def operator_abs(B):
    """
    The operator absolute value |B| = (B*B)^(1/2).

    Computed from the Hermitian eigendecomposition of B*B with eigenvalues clamped at 0, since
    roundoff can leave tiny negative ones. |B*| is operator_abs(B.conj().T).
    """
    B = as_cmatrix(B)
    mu, V = hermitian_eigs(B.conj().T @ B)
    return (V * np.sqrt(np.maximum(mu, 0))[np.newaxis, :]) @ V.conj().T
