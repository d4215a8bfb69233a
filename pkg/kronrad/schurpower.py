"""
Numerical radius of Schur products and Schur powers.

The Schur product A o B is a principal submatrix of A (x) B, so every Kronecker bound of
`kronrad.bounds` bounds w(A o B) too. For Schur powers,

    w(A^{o m}) <= w(A) ||A||^(m-1) <= 2^(m-1) w(A)^m,

and for radial A (w(A) = ||A||) w(A^{o m}) <= w(A)^m. Equality holds exactly when
A^{(x) m} has an eigenvector of eigenvalue modulus ||A||^m in span{e_j^{(x) m}}. With
K = [(A e_1)^{(x) m} | ... ] and E = [e_1^{(x) m} | ... ] that eigenvector is E x with
K x = lambda E x, a test on n unknowns instead of n^m.

Anchors
-------
* lem4 - w(A o B) <= w(A (x) B).
* n-34 - w(A o B) <= min(w(A) ||B||, w(B) ||A||) <= 2 w(A) w(B).
* th5, th6, th2-- - w(A o B) <= w(C), w(C°), w(A') w(B).
* ando-okubo - w(A o B) <= max a_ii w(B) for positive semidefinite A.
* cor2 - for non-negative A with non zero diagonal, w(A o B) = w(A) ||B|| implies w(B) = ||B||.
* th10 - the Schur power chain above.
* Tref, Cref - the eigenvector characterization of w(A^{o m}) = w(A)^m and its form in the
  coordinates of U* A U = diag(a_1, ..., a_k) (+) A'.
* Tforallm - matrices with w(A^{o m}) = w(A)^m for all m.
"""
from dataclasses import dataclass
import logging

import numpy as np
import scipy.linalg
from iblutil.util import Bunch

from kronrad import params
from kronrad.core import (as_cmatrix, check_budget, direct_sum, kron, kron_power, schur_power,
                          schur_product, schur_embed_indices, random_complex, random_unitary)
from kronrad.radius import numerical_radius, w, is_nonnegative
from kronrad.spectral import (spectral_norm, eigenvalues, hermitian_eigs, is_normal, numerical_rank,
                              max_modulus_structure)
from kronrad.bounds import BoundReport, c_matrices

_logger = logging.getLogger(__name__)

ANGLE_TOL = 1e-6
"""float: Sine of the principal angle below which two subspaces are considered to intersect."""


def ando_okubo_bound(A, B, tol=None):
    """
    The bound max_i a_ii w(B) of w(A o B) for a positive semidefinite A.

    Raises
    ------
    ValueError
        A is not Hermitian positive semidefinite.
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    if not is_psd(A, tol=tol):
        raise ValueError("The Ando-Okubo bound needs a positive semidefinite A")
    return float(A.diagonal().real.max() * w(B))


def is_psd(A, tol=None):
    """True when A is Hermitian with eigenvalues >= -tol max(1, ||A||)."""
    A = as_cmatrix(A, square=True)
    tol = params.value('hermitian_tol', tol)
    scale = max(1, float(np.abs(A).max()))
    if np.abs(A - A.conj().T).max() > tol * scale:
        return False
    mu, _ = hermitian_eigs((A + A.conj().T) / 2)
    return bool(mu[0] >= -tol * scale)


def schur_radius_chain(A, B, budget=None):
    """
    Bounds of w(A o B) through the Kronecker product.

    Records w(A o B) <= w(A (x) B) <= w(C), w(C°), w(A') w(B), the classical bound n-34, the
    bound w(A) w(B) when A or B is radial, the Ando-Okubo bound when A is positive semidefinite
    and the one directional equality statement cor2.

    Parameters
    ----------
    A, B : array_like
        Square matrices of the same shape.
    budget : int, optional
        Element budget of A (x) B.

    Returns
    -------
    BoundReport
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    if A.shape != B.shape:
        raise ValueError(f"A and B must have the same shape, got {A.shape} and {B.shape}")
    rep = BoundReport(instance={'A': list(A.shape), 'B': list(B.shape)})
    tol = rep.tol
    wa, wb = rep.add('w(A)', w(A), 'n-34'), rep.add('w(B)', w(B), 'n-34')
    na, nb = rep.add('||A||', spectral_norm(A), 'n-34'), rep.add('||B||', spectral_norm(B), 'n-34')
    ws = rep.add('w(AoB)', w(schur_product(A, B)), 'lem4')
    rep.add('w(A(x)B)', w(kron(A, B, budget=budget)), 'lem4')
    rep.relate('w(AoB)', 'w(A(x)B)', 'lem4')
    C, C_circ = c_matrices(A, B)
    absA = np.abs(A)
    rep.add('w(C)', w(C), 'th5')
    rep.add('w(C°)', w(C_circ), 'th6')
    rep.add("w(A')w(B)", w(np.maximum(absA, absA.T)) * wb, 'th2--')
    for name in ('w(C)', 'w(C°)', "w(A')w(B)"):
        rep.relate('w(A(x)B)', name, 'lem4')
    rep.add('min(w(A)||B||,w(B)||A||)', min(wa * nb, wb * na), 'n-34')
    rep.add('2w(A)w(B)', 2 * wa * wb, 'n-34')
    rep.chain(['w(AoB)', 'min(w(A)||B||,w(B)||A||)', '2w(A)w(B)'], 'n-34')
    if abs(wa - na) <= tol * max(1, na) or abs(wb - nb) <= tol * max(1, nb):
        rep.add('w(A)w(B)', wa * wb, 'n-34')
        rep.relate('w(AoB)', 'w(A)w(B)', 'n-34')
    if is_psd(A):
        rep.add('max(a_ii)w(B)', A.diagonal().real.max() * wb, 'ando-okubo')
        rep.relate('w(AoB)', 'max(a_ii)w(B)', 'ando-okubo')
    if is_nonnegative(A) and np.all(A.diagonal() != 0) and abs(ws - wa * nb) <= tol * max(1, wa * nb):
        rep.check('w(AoB)=w(A)||B|| implies w(B)=||B||', abs(wb - nb) <= tol * max(1, nb), 'cor2')
    return rep


def cor2_search(rng, trials=100, n=2, tol=1e-6):
    """
    Search a counterexample to the converse of cor2: w(B) = ||B|| yet w(A o B) < w(A) ||B||.

    A is drawn entrywise positive and B Hermitian, so that w(B) = ||B|| always holds.

    Returns
    -------
    iblutil.util.Bunch
        found, trial (index of the first counterexample, -1 if none), A, B and gap
        w(A) ||B|| - w(A o B).
    """
    for trial in range(trials):
        A = rng.uniform(.1, 1., (n, n))
        G = random_complex(rng, (n, n))
        B = (G + G.conj().T) / 2
        gap = w(A) * spectral_norm(B) - w(schur_product(A, B))
        if gap > tol:
            _logger.debug(f"Converse of cor2 fails at trial {trial} with gap {gap:.3g}")
            return Bunch(found=True, trial=trial, A=as_cmatrix(A), B=B, gap=float(gap))
    return Bunch(found=False, trial=-1, A=None, B=None, gap=0.)


def th10_chain(A, m, tol=None):
    """
    w(A^{o m}) <= w(A) ||A||^(m-1) <= 2^(m-1) w(A)^m.

    For radial A the report adds w(A^{o m}) <= w(A)^m, and when this is an equality it checks
    ||A^{o m}|| = ||A||^m.

    Examples
    --------
    >>> rep = th10_chain([[0, 2], [0, 0]], 3)
    >>> round(rep['w(A^om)'], 10), round(rep['2^(m-1)w(A)^m'], 10)
    (4.0, 4.0)
    """
    A = as_cmatrix(A, square=True)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rep = BoundReport(instance={'A': list(A.shape), 'm': int(m)}, tol=tol)
    tol = rep.tol
    wa, na = rep.add('w(A)', w(A), 'th10'), rep.add('||A||', spectral_norm(A), 'th10')
    T = schur_power(A, m)
    wt = rep.add('w(A^om)', w(T), 'th10')
    rep.add('w(A)||A||^(m-1)', wa * na ** (m - 1), 'th10')
    rep.add('2^(m-1)w(A)^m', 2 ** (m - 1) * wa ** m, 'th10')
    rep.chain(['w(A^om)', 'w(A)||A||^(m-1)', '2^(m-1)w(A)^m'], 'th10')
    if abs(wa - na) <= tol * max(1, na):
        target = rep.add('w(A)^m', wa ** m, 'th10')
        rep.relate('w(A^om)', 'w(A)^m', 'th10')
        if abs(wt - target) <= tol * max(1, target):
            nt = spectral_norm(T)
            rep.check('||A^om||=||A||^m', abs(nt - na ** m) <= tol * max(1, na ** m), 'th10')
    return rep


def schur_embedding(A, m, budget=None):
    """
    The (n^m, n) matrices K = [(A e_j)^{(x) m}] and E = [e_j^{(x) m}].

    E has orthonormal columns and E* K = A^{o m} as a selection identity. K x = A^{(x) m} E x.
    """
    A = as_cmatrix(A, square=True)
    n = A.shape[0]
    check_budget((n ** m, n), budget, f'Schur embedding of power {m}')
    K = np.hstack([kron_power(A[:, [j]], m, budget=budget) for j in range(n)])
    E = np.zeros((n ** m, n), dtype=np.complex128)
    E[schur_embed_indices(n, n, m, budget=budget)[0] - 1, np.arange(n)] = 1
    return K, E


@dataclass
class TrefVerdict:
    """The eigenvector test of w(A^{o m}) = w(A)^m for a radial matrix."""

    """int: The Schur power."""
    m: int
    """bool: False when A is not radial and the test does not apply."""
    applicable: bool
    """bool: w(A) = ||A|| within tolerance."""
    radial: bool
    """float: w(A^{o m})."""
    power_radius: float
    """float: w(A)^m."""
    target: float
    """bool: |w(A^{o m}) - w(A)^m| <= tol max(1, w(A)^m)."""
    equality: bool
    """iblutil.util.Bunch: x (unit vector of C^n) and eigenvalue with K x = eigenvalue E x, or None."""
    witness: Bunch = None
    """bool: Every max-modulus Jordan block of A is 1 x 1."""
    partial_diag: bool = True
    """bool: Equality at m implies equality at every m' < m."""
    downward_ok: bool = True

    @property
    def consistent(self):
        """bool: The sweep equality and the existence of a witness agree."""
        return not self.applicable or self.equality == (self.witness is not None)

    def to_dict(self):
        d = {k: getattr(self, k) for k in ('m', 'applicable', 'radial', 'power_radius', 'target',
                                           'equality', 'partial_diag', 'downward_ok')}
        d['consistent'] = self.consistent
        d['witness'] = None if self.witness is None else {
            'x': [[float(z.real), float(z.imag)] for z in self.witness.x],
            'eigenvalue': [float(self.witness.eigenvalue.real), float(self.witness.eigenvalue.imag)]}
        return d


def _distinct(values, tol):
    out = []
    for v in values:
        if all(abs(v - u) > tol for u in out):
            out.append(v)
    return out


def _witness(K, E, candidates, scale, tol):
    """The first candidate lambda with a unit x such that ||K x - lambda E x|| <= tol scale."""
    for lam in candidates:
        _, s, vh = np.linalg.svd(K - lam * E)
        if s[-1] <= tol * max(1, scale):
            return Bunch(x=vh[-1].conj(), eigenvalue=complex(lam), residual=float(s[-1]))
    return None


def tref_check(A, m, tol=None, budget=None):
    """
    Decide w(A^{o m}) = w(A)^m by the eigenvector characterization.

    The candidates are the eigenvalues lambda of A^{o m} with ||lambda| - ||A||^m| <= tol ||A||^m.
    A witness is a unit x with ||K x - lambda E x|| <= tol max(1, ||A||^m), found as the smallest
    right singular vector of K - lambda E.

    Parameters
    ----------
    A : array_like
        A square matrix.
    m : int
        The Schur power, >= 1.
    tol : float, optional
        Defaults to the configured slack_tol (1e-8).
    budget : int, optional
        Element budget of K.

    Returns
    -------
    TrefVerdict
        With applicable False when A is not radial.
    """
    A = as_cmatrix(A, square=True)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    tol = params.value('slack_tol', tol)
    res = numerical_radius(A)
    wa, na = res.value, res.norm
    radial = abs(wa - na) <= tol * max(1, na)
    T = schur_power(A, m)
    wt = w(T)
    target = wa ** m
    equality = abs(wt - target) <= tol * max(1, target)
    if not radial:
        _logger.debug(f"tref_check: A is not radial, w={wa}, ||A||={na}")
        return TrefVerdict(m=m, applicable=False, radial=False, power_radius=wt, target=target,
                           equality=equality)
    K, E = schur_embedding(A, m, budget=budget)
    scale = na ** m
    ev = np.linalg.eigvals(T)
    candidates = _distinct([lam for lam in ev if abs(abs(lam) - scale) <= tol * max(1, scale)], tol * max(1, scale))
    witness = _witness(K, E, candidates, scale, tol)
    downward = True
    if equality:
        for mm in range(1, m):
            t = wa ** mm
            downward &= bool(abs(w(schur_power(A, mm)) - t) <= tol * max(1, t))
    partial = max_modulus_structure(A).partial_diagonalizable if A.shape[0] <= 64 else True
    verdict = TrefVerdict(m=m, applicable=True, radial=True, power_radius=wt, target=target,
                          equality=equality, witness=witness, partial_diag=partial, downward_ok=downward)
    if not verdict.consistent:
        _logger.warning(f"Sweep equality {equality} disagrees with the eigenvector test at m={m}")
    return verdict


def tref_direct(A, m, tol=None, budget=None):
    """
    The eigenvector characterization evaluated on A^{(x) m} itself.

    For every eigenvalue lambda of A^{(x) m} with |lambda| = ||A||^m, the null space of
    A^{(x) m} - lambda I is intersected with span{e_j^{(x) m}} through their smallest principal
    angle.

    Returns
    -------
    bool
        True when an eigenvector of modulus ||A||^m lies in span{e_j^{(x) m}}.
    """
    A = as_cmatrix(A, square=True)
    tol = params.value('slack_tol', tol)
    X = kron_power(A, m, budget=budget)
    check_budget(X.shape, budget, f'Kronecker power {m}')
    _, E = schur_embedding(A, m, budget=budget)
    scale = spectral_norm(A) ** m
    ev = np.linalg.eigvals(X)
    lams = _distinct([lam for lam in ev if abs(abs(lam) - scale) <= 1e-6 * max(1, scale)], 1e-6 * max(1, scale))
    for lam in lams:
        N = scipy.linalg.null_space(X - lam * np.eye(X.shape[0]), rcond=1e-7)
        if N.shape[1] == 0:
            continue
        cos = np.linalg.svd(E.conj().T @ N, compute_uv=False).max()
        if np.sqrt(max(0., 1 - cos ** 2)) <= ANGLE_TOL:
            return True
    return False


def max_modulus_basis(A, tol=None):
    """
    A unitary U with U* A U = diag(a_1, ..., a_k) (+) A' for a radial A.

    The first k columns are orthonormal eigenvectors of the maximum-modulus eigenvalues, grouped
    by eigenvalue, and the remaining columns complete them with scipy.linalg.null_space.

    Returns
    -------
    numpy.array
        U.
    int
        k.
    numpy.array
        The maximum-modulus eigenvalues a_1, ..., a_k.
    """
    A = as_cmatrix(A, square=True)
    n = A.shape[0]
    sd = max_modulus_structure(A, cluster_tol=tol)
    if not sd.partial_diagonalizable:
        raise ValueError("A has a defective maximum-modulus eigenvalue")
    cols, lams = [], []
    for lam in _distinct([mb.eigenvalue for mb in sd.members], params.value('cluster_tol') * max(1, sd.radius)):
        N = scipy.linalg.null_space(A - lam * np.eye(n), rcond=params.value('rank_tol'))
        cols.append(N)
        lams.extend([lam] * N.shape[1])
    Uk = np.hstack(cols)
    Uk, _ = np.linalg.qr(Uk)
    rest = scipy.linalg.null_space(Uk.conj().T)
    return np.hstack([Uk, rest]), Uk.shape[1], np.array(lams)


def cref_check(A, m, tol=None, budget=None):
    """
    The eigenvector test in the coordinates D = U* A U and its agreement with tref_check.

    In these coordinates, equality holds when D^{(x) m} F x = lambda F x for some x, with
    F = (U*)^{(x) m} E, F x inside V_k^{(x) m} and lambda one of the products a_j1 ... a_jm of
    maximum-modulus eigenvalues.

    Returns
    -------
    bool
        True when both formulations return the same verdict.

    Raises
    ------
    ValueError
        A is not radial.
    """
    A = as_cmatrix(A, square=True)
    tol = params.value('slack_tol', tol)
    verdict = tref_check(A, m, tol=tol, budget=budget)
    if not verdict.applicable:
        raise ValueError("cref_check needs a radial matrix, w(A) = ||A||")
    n = A.shape[0]
    U, k, lams = max_modulus_basis(A)
    D = U.conj().T @ A @ U
    _, E = schur_embedding(A, m, budget=budget)
    Dm = kron_power(D, m, budget=budget)
    F = kron_power(U.conj().T, m, budget=budget) @ E
    outside = np.ones((n,) * m, dtype=bool)
    outside[(slice(0, k),) * m] = False
    outside = outside.ravel()
    scale = spectral_norm(A) ** m
    products = np.array([1.])
    for _ in range(m):
        products = np.multiply.outer(products, lams).ravel()
    holds = False
    for lam in _distinct(products, tol * max(1, scale)):
        S = np.vstack([Dm @ F - lam * F, F[outside]])
        if np.linalg.svd(S, compute_uv=False)[-1] <= tol * max(1, scale):
            holds = True
            break
    if holds != (verdict.witness is not None):
        _logger.warning(f"cref_check: D coordinates give {holds}, tref_check gives {verdict.witness is not None}")
    return holds == (verdict.witness is not None)


def eigenvector_structure(A, m, tol=1e-7, budget=None):
    """
    Structure of the tensor eigenvector behind w(A^{o m}) = w(A)^m, in D = U* A U coordinates.

    With x the witness of tref_check, y = (U*)^{(x) m} E x vanishes outside the V_k^{(x) m} block
    and each non zero slice y_j, j < k, along the first tensor factor is an eigenvector of
    D^{(x) (m-1)} with eigenvalue of modulus w(A)^(m-1) supported on V_k^{(x) (m-1)}.

    Returns
    -------
    iblutil.util.Bunch
        applicable (an equality witness exists and m >= 2), outside (norm of y outside the
        block), slices (list of Bunch(j, norm, residual, eigenvalue)) and ok.
    """
    A = as_cmatrix(A, square=True)
    if m < 2:
        raise ValueError(f"eigenvector_structure needs m >= 2, got {m}")
    verdict = tref_check(A, m, budget=budget)
    if not (verdict.applicable and verdict.equality and verdict.witness is not None):
        return Bunch(applicable=False, outside=np.nan, slices=[], ok=True)
    n = A.shape[0]
    U, k, _ = max_modulus_basis(A)
    D = U.conj().T @ A @ U
    _, E = schur_embedding(A, m, budget=budget)
    y = kron_power(U.conj().T, m, budget=budget) @ (E @ verdict.witness.x)
    Y = y.reshape((n,) * m)
    mask = np.ones((n,) * m, dtype=bool)
    mask[(slice(0, k),) * m] = False
    outside = float(np.linalg.norm(Y[mask]))
    Dm1 = kron_power(D, m - 1, budget=budget)
    target = verdict.target ** ((m - 1) / m)
    slices, ok = [], outside <= tol
    for j in range(k):
        yj = Y[j].ravel()
        nj = np.linalg.norm(yj)
        if nj <= tol:
            continue
        mu = np.vdot(yj, Dm1 @ yj) / nj ** 2
        residual = float(np.linalg.norm(Dm1 @ yj - mu * yj) / nj)
        sub = np.ones((n,) * (m - 1), dtype=bool)
        sub[(slice(0, k),) * (m - 1)] = False
        leak = float(np.linalg.norm(Y[j][sub]) / nj)
        good = residual <= tol * max(1, target) and abs(abs(mu) - target) <= tol * max(1, target) and leak <= tol
        slices.append(Bunch(j=j, norm=float(nj), residual=residual, eigenvalue=complex(mu), leak=leak))
        ok &= good
    return Bunch(applicable=True, outside=outside, slices=slices, ok=bool(ok))


def padded_eigenvector_check(X, K, tol=1e-8):
    """
    Both sides of: w(T) = ||X|| for the leading K x K block T of X if and only if X has an
    eigenvector [y; 0] with eigenvalue of modulus ||X||.

    Returns
    -------
    iblutil.util.Bunch
        radius_equal, padded_exists and ok (the two sides agree).
    """
    X = as_cmatrix(X, square=True, name='X')
    N = X.shape[0]
    if not 1 <= K <= N:
        raise ValueError(f"K must lie in [1, {N}], got {K}")
    nx = spectral_norm(X)
    radius_equal = abs(w(X[:K, :K]) - nx) <= tol * max(1, nx)
    ev = eigenvalues(X)
    padded = False
    for lam in _distinct([lam for lam in ev if abs(abs(lam) - nx) <= tol * max(1, nx)], tol * max(1, nx)):
        shifted = (X - lam * np.eye(N))[:, :K]
        if np.linalg.svd(shifted, compute_uv=False)[-1] <= tol * max(1, nx):
            padded = True
            break
    return Bunch(radius_equal=bool(radius_equal), padded_exists=padded, ok=bool(radius_equal) == padded)


def radial_generator(seed, n, profile='contraction', k=None, r=1.):
    """
    A random radial matrix U (r diag(z_1, ..., z_k) (+) T) U* with |z_i| = 1 and ||T|| <= r.

    Parameters
    ----------
    seed : int or numpy.random.Generator
        Seed of the random draws.
    n : int
        Size of the matrix.
    profile : {'normal', 'jordan', 'contraction'}
        'normal' uses k = n. 'jordan' takes T = r J for the nilpotent Jordan block J, radial but
        not normal when n - k >= 2. 'contraction' takes T a random matrix of norm uniform in (0, r].
    k : int, optional
        Number of maximum-modulus eigenvalues, drawn in [1, n - 1] when omitted.
    r : float
        The norm of the matrix.

    Returns
    -------
    numpy.array
        An (n, n) matrix with w = ||.|| = r.
    """
    rng = np.random.default_rng(seed)
    if profile not in ('normal', 'jordan', 'contraction'):
        raise ValueError(f"Unknown profile '{profile}'")
    if profile == 'normal' or n == 1:
        k = n
    elif k is None:
        k = int(rng.integers(1, n))
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    top = r * np.exp(2j * np.pi * rng.uniform(size=k))
    blocks = [np.diag(top)]
    size = n - k
    if size > 0:
        if profile == 'jordan':
            T = r * np.eye(size, k=1)
        else:
            T = random_complex(rng, (size, size))
            T *= r * rng.uniform(1e-3, 1.) / spectral_norm(T)
        blocks.append(T)
    U = random_unitary(rng, n)
    return U @ direct_sum(*blocks) @ U.conj().T


def dp_plus_t(rng, k, size=0, rho=1.):
    """
    A matrix D P (+) T: D a unimodular diagonal, P a permutation and T a random matrix of norm rho.

    :param rng: numpy.random.Generator
    :param k: size of D P
    :param size: size of T, 0 for no T
    :param rho: norm of T, <= 1 for a contraction
    :return: (k + size, k + size) complex128 array
    """
    DP = np.diag(np.exp(2j * np.pi * rng.uniform(size=k)))[:, rng.permutation(k)]
    if size == 0:
        return as_cmatrix(DP)
    T = random_complex(rng, (size, size))
    return direct_sum(DP, rho * T / spectral_norm(T))


def tforallm_scan(A, m_max=3, tol=None, budget=None, partner=None, z=1.5 * np.exp(1j)):
    """
    Test w(A) = ||A|| and w(A^{o m}) = w(A)^m for m = 1 .. m_max.

    For rank one A also test the characterization: A is a member if and only if it is diagonal
    with one non zero entry. With a partner matrix, also scan the direct sum, the rescaling by z,
    the conjugation by the reversal permutation and the Kronecker product of A with the partner.

    Returns
    -------
    iblutil.util.Bunch
        radial, equalities (list of bools, index m - 1), member, rank_one, single_entry,
        rank_one_ok, and closure (Bunch of member flags) when a partner is given.
    """
    A = as_cmatrix(A, square=True)
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    tol = params.value('slack_tol', tol)
    n = A.shape[0]
    check_budget((n ** m_max, n), budget, f'Schur power {m_max} scan')
    res = numerical_radius(A)
    wa, na = res.value, res.norm
    radial = abs(wa - na) <= tol * max(1, na)
    equalities = [True]
    for m in range(2, m_max + 1):
        t = wa ** m
        equalities.append(bool(abs(w(schur_power(A, m)) - t) <= tol * max(1, t)))
    member = bool(radial and all(equalities))
    rank_one = na > 0 and numerical_rank(A, params.value('rank_tol') * na) == 1
    nz = np.argwhere(np.abs(A) > params.value('rank_tol') * max(na, 1e-300))
    single_entry = len(nz) == 1 and nz[0][0] == nz[0][1]
    out = Bunch(radial=bool(radial), equalities=equalities, member=member, rank_one=bool(rank_one),
                single_entry=bool(single_entry),
                rank_one_ok=bool(not rank_one or m_max < 2 or member == single_entry))
    if partner is not None:
        B = as_cmatrix(partner, square=True, name='partner')
        perm = np.eye(n)[::-1]
        scan = lambda X: tforallm_scan(X, m_max=m_max, tol=tol, budget=budget).member
        out.closure = Bunch(
            direct_sum=scan(direct_sum(A, B)),
            scaled=scan(z * A),
            permuted=scan(perm @ A @ perm.T),
            kron=scan(kron(A, B, budget=budget)),
        )
    return out


def n2_normality_check(A, tol=None):
    """
    For a 2 x 2 matrix, w(A) = ||A|| if and only if A is normal.

    Returns
    -------
    iblutil.util.Bunch
        radial, normal and ok (the two agree).
    """
    A = as_cmatrix(A, square=True)
    if A.shape != (2, 2):
        raise ValueError(f"n2_normality_check needs a 2 x 2 matrix, got {A.shape}")
    tol = params.value('slack_tol', tol)
    res = numerical_radius(A)
    radial = abs(res.value - res.norm) <= tol * max(1, res.norm)
    # the norm gap of a near normal matrix is quadratic in its departure from normality
    normal = is_normal(A, tol=2 * np.sqrt(tol))
    return Bunch(radial=bool(radial), normal=bool(normal), ok=bool(radial) == bool(normal))
