"""
Upper bounds of the root moduli of a monic polynomial p(z) = z^n + a_{n-1} z^{n-1} + ... + a_0.

The roots are the eigenvalues of the companion matrix C(p), so any numerical radius bound of
C(p) bounds them. Writing C(p) = Circ(0, ..., 0, 1) + D with D the rank one matrix of first row
-(a_{n-1}, ..., a_1, a_0 + 1) gives

    |lambda| <= w(Circ(0, ..., 0, 1)) + w(D) = 1 + (|a_{n-1}| + sqrt(|a_0 + 1|^2 + sum_{k>=1} |a_k|^2)) / 2,

to compare with the Fujii-Kubo bound cos(pi / (n + 1)) + (|a_{n-1}| + sqrt(sum_k |a_k|^2)) / 2.

Examples
--------
>>> from kronrad.core import Poly
>>> rep = root_bound_report(Poly.from_coefficients([1, 0, 10]))
>>> rep.winner
'fujii_kubo'
"""
from dataclasses import dataclass
import logging

import numpy as np
from iblutil.util import Bunch

from kronrad.core import Poly, companion, cyclic_shift
from kronrad.bounds import BoundReport
from kronrad.radius import w, rank_one_radius
from kronrad.spectral import eigenvalues, ConvergenceError

_logger = logging.getLogger(__name__)

MAX_DEGREE = 64
"""int: Largest degree handled by root_bound_report."""

TIE_TOL = 1e-12
"""float: Relative difference below which both bounds are reported as a tie."""


def _as_poly(p):
    return p if isinstance(p, Poly) else Poly(p)


def fujii_kubo_bound(p):
    """
    cos(pi / (n + 1)) + (|a_{n-1}| + sqrt(|a_0|^2 + ... + |a_{n-1}|^2)) / 2.

    Examples
    --------
    >>> round(fujii_kubo_bound(Poly.from_coefficients([1, 0, -2])), 12)
    1.5
    """
    p = _as_poly(p)
    a = p.coeffs
    return float(np.cos(np.pi / (p.degree + 1)) + (abs(a[-1]) + np.linalg.norm(a)) / 2)


def est_poly_bound(p):
    """
    1 + (|a_{n-1}| + sqrt(|a_0 + 1|^2 + |a_1|^2 + ... + |a_{n-1}|^2)) / 2.

    Examples
    --------
    >>> est_poly_bound(Poly.from_coefficients([1, 0, -2]))
    1.5
    """
    p = _as_poly(p)
    a = p.coeffs.copy()
    a[0] += 1
    return float(1 + (abs(a[-1]) + np.linalg.norm(a)) / 2)


def rank_one_row_radius(a):
    """
    The numerical radius of the matrix whose first row is a and other rows are 0,
    (|a_1| + ||a||) / 2.

    Examples
    --------
    >>> rank_one_row_radius([3, 4])
    4.0
    """
    a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
    if a.ndim != 1 or a.size < 1:
        raise ValueError("rank_one_row_radius needs a non empty 1D sequence")
    return float((abs(a[0]) + np.linalg.norm(a)) / 2)


def first_row_matrix(a):
    """The (n, n) matrix with first row a and zeros elsewhere."""
    a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
    D = np.zeros((a.size, a.size), dtype=np.complex128)
    D[0] = a
    return D


@dataclass
class RootBoundReport:
    """Both root bounds of a monic polynomial against the moduli of its companion eigenvalues."""

    """Poly: The polynomial."""
    poly: Poly
    """numpy.array: The roots, as eigenvalues of the companion matrix."""
    roots: np.ndarray
    """float: The Fujii-Kubo bound."""
    fujii_kubo: float
    """float: The circulant plus rank one bound."""
    est_poly: float
    """float: The largest root modulus."""
    max_root_modulus: float
    """str: 'fujii_kubo', 'est_poly' or 'tie', the smaller bound."""
    winner: str

    def ok(self, tol=1e-8):
        """True when the largest root modulus is below both bounds within tol."""
        return self.max_root_modulus <= min(self.fujii_kubo, self.est_poly) + tol

    def to_bound_report(self, tol=None):
        """The bounds as a BoundReport with both relations max |root| <= bound."""
        rep = BoundReport(instance={'degree': self.poly.degree}, tol=tol)
        rep.add('max |root|', self.max_root_modulus, 'est-poly')
        rep.add('fujii_kubo', self.fujii_kubo, 'fuji')
        rep.add('est_poly', self.est_poly, 'est-poly')
        rep.relate('max |root|', 'fujii_kubo', 'fuji')
        rep.relate('max |root|', 'est_poly', 'est-poly')
        return rep

    def to_dict(self):
        return {
            'degree': self.poly.degree,
            'coeffs': [[float(c.real), float(c.imag)] for c in self.poly.coeffs],
            'fujii_kubo': self.fujii_kubo,
            'est_poly': self.est_poly,
            'max_root_modulus': self.max_root_modulus,
            'winner': self.winner,
            'ok': self.ok(),
        }


def root_bound_report(p, tol=1e-8):
    """
    Compute both bounds and the companion eigenvalues of p.

    Parameters
    ----------
    p : Poly or array_like
        A monic polynomial of degree 2 .. 64, or its coefficients a_0 .. a_{n-1}.
    tol : float
        Admissible excess of the largest root modulus over the smallest bound.

    Returns
    -------
    RootBoundReport

    Raises
    ------
    ConvergenceError
        A root exceeds a bound, which only roundoff in the eigensolver can cause.
    """
    p = _as_poly(p)
    if p.degree > MAX_DEGREE:
        raise ValueError(f"root_bound_report is limited to degree <= {MAX_DEGREE}, got {p.degree}")
    roots = eigenvalues(companion(p))
    fk, ep = fujii_kubo_bound(p), est_poly_bound(p)
    if abs(fk - ep) <= TIE_TOL * max(1, fk, ep):
        winner = 'tie'
    else:
        winner = 'fujii_kubo' if fk < ep else 'est_poly'
    rep = RootBoundReport(poly=p, roots=roots, fujii_kubo=fk, est_poly=ep,
                          max_root_modulus=float(np.abs(roots).max()), winner=winner)
    if not rep.ok(tol):
        raise ConvergenceError(
            f"Root modulus {rep.max_root_modulus!r} exceeds the bounds {fk!r}, {ep!r} for degree {p.degree}")
    _logger.debug(f"Degree {p.degree}: max root {rep.max_root_modulus:.6g}, fujii_kubo {fk:.6g}, est_poly {ep:.6g}")
    return rep


def decomposition_check(p):
    """
    Recompute the circulant plus rank one split of C(p) with the radius sweep.

    Returns
    -------
    iblutil.util.Bunch
        w_shift (swept w(Circ(0, ..., 0, 1)), 1 in exact arithmetic), w_rank_one (closed form),
        w_rank_one_sweep, w_rank_one_vectors (the u v* formula) and residual, the largest
        entry of |C(p) - Circ(0, ..., 0, 1) - D|.
    """
    p = _as_poly(p)
    row = -np.r_[p.coeffs[::-1][:-1], p.coeffs[0] + 1]
    D = first_row_matrix(row)
    S = cyclic_shift(p.degree)
    e1 = np.zeros(p.degree)
    e1[0] = 1
    return Bunch(
        w_shift=w(S, method='sweep'),
        w_rank_one=rank_one_row_radius(row),
        w_rank_one_sweep=w(D, method='sweep'),
        w_rank_one_vectors=rank_one_radius(e1, row.conj()),
        residual=float(np.abs(companion(p) - S - D).max()),
    )


def remark_threshold(a0, n_max=64):
    """
    The smallest N0 such that est_poly <= fujii_kubo for z^n + a0 at every n in [N0, n_max].

    For this family the comparison reads 1 - cos(pi / (n + 1)) <= (|a0| - |a0 + 1|) / 2, which
    holds for all large n exactly when |a0 + 1| < |a0|.

    Returns
    -------
    int or None
        N0, or None when the inequality fails at n_max.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    N0 = None
    for n in range(n_max, 1, -1):
        p = Poly(np.r_[complex(a0), np.zeros(n - 1)])
        if est_poly_bound(p) > fujii_kubo_bound(p):
            break
        N0 = n
    return N0


def random_poly(rng, degree):
    """A monic polynomial with standard complex Gaussian coefficients."""
    return Poly(rng.standard_normal(degree) + 1j * rng.standard_normal(degree))
