"""
Dense complex matrix constructors: Kronecker and Schur products, circulant, companion and
anti-diagonal matrices, doubly stochastic detection and the Schur embedding indices.

All matrices are numpy arrays of dtype complex128. Constructors validate finiteness, and every
operation that materializes a product checks the element budget first.
"""
from dataclasses import dataclass
import logging

import numpy as np
import scipy.linalg

from kronrad import params

_logger = logging.getLogger(__name__)


class ElementBudgetError(ValueError):
    """A materialized matrix would exceed the configured element budget."""


def as_cmatrix(A, square=False, name='A'):
    """
    Validate and convert to a 2D complex128 array.

    Parameters
    ----------
    A : array_like
        A scalar or a 2D array of numbers.
    square : bool
        If True, require a square matrix.
    name : str
        The name used in error messages.

    Returns
    -------
    numpy.array
        A (rows, cols) complex128 array.

    Raises
    ------
    ValueError
        The input is empty, not 2D, not square when required, or has NaN/Inf entries.
    """
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise ValueError(f"{name} must be a 2D matrix, got an array of shape {M.shape}")
    if M.size == 0:
        raise ValueError(f"{name} must have at least one row and one column")
    if square and M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        i, j = np.argwhere(~np.isfinite(M))[0]
        raise ValueError(f"{name} has a non finite entry at row {i + 1}, column {j + 1}")
    return M


def check_budget(shape, budget=None, what='product'):
    """
    Raise an ElementBudgetError when a matrix of `shape` exceeds the element budget.

    :param shape: tuple of ints, the shape to be materialized
    :param budget: maximum number of entries, defaults to the configured element_budget
    :param what: name of the quantity, used in the error message
    :return: number of elements
    """
    budget = params.value('element_budget', budget)
    size = int(np.prod([int(s) for s in shape], dtype=object))
    if size > budget:
        raise ElementBudgetError(
            f"The {what} has {size} entries {tuple(shape)} which exceeds the element budget of "
            f"{budget}; set KRONRAD_BUDGET to raise it")
    return size


@dataclass
class Poly:
    """A monic polynomial z^n + a_{n-1} z^{n-1} + ... + a_1 z + a_0, stored as (a_0, ..., a_{n-1})."""

    """numpy.array: The complex coefficients a_0 .. a_{n-1}; the leading 1 is implicit."""
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128))
        if self.coeffs.ndim != 1 or self.coeffs.size < 2:
            raise ValueError(f"A monic polynomial needs degree >= 2, got {self.coeffs.size} coefficients")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("Polynomial coefficients must be finite")

    @property
    def degree(self):
        """int: The degree n, equal to the number of stored coefficients."""
        return self.coeffs.size

    @classmethod
    def from_coefficients(cls, coefficients):
        """
        Build from the full coefficient list, highest degree first, as numpy.polyval expects.

        The leading coefficient must be exactly 1: non monic input is rejected rather than
        normalized, since dividing through changes the coefficients the root bounds consume.

        Examples
        --------
        >>> Poly.from_coefficients([1, 0, -2]).coeffs
        array([-2.+0.j,  0.+0.j])
        """
        c = np.atleast_1d(np.asarray(coefficients, dtype=np.complex128))
        if c.size < 3:
            raise ValueError(f"A monic polynomial needs degree >= 2, got {c.size} coefficients")
        if c[0] != 1:
            raise ValueError(f"The polynomial is not monic: leading coefficient is {c[0]}")
        return cls(coeffs=c[1:][::-1])

    def __call__(self, z):
        return np.polyval(np.r_[1, self.coeffs[::-1]], z)


def kron(A, B, budget=None):
    """
    The Kronecker product A (x) B = [a_ij B].

    Raises
    ------
    ElementBudgetError
        The product has more entries than the element budget.
    """
    A, B = as_cmatrix(A, name='A'), as_cmatrix(B, name='B')
    check_budget((A.shape[0] * B.shape[0], A.shape[1] * B.shape[1]), budget, 'Kronecker product')
    return np.kron(A, B)


def kron_power(A, m, budget=None):
    """The m-fold Kronecker power A (x) ... (x) A, with kron_power(A, 1) = A."""
    A = as_cmatrix(A)
    if m < 1:
        raise ValueError(f"The Kronecker power must be >= 1, got {m}")
    check_budget((A.shape[0] ** m, A.shape[1] ** m), budget, f'Kronecker power {m}')
    K = A
    for _ in range(m - 1):
        K = np.kron(K, A)
    return K


def schur_product(A, B):
    """The Schur (entrywise) product of two matrices of the same shape."""
    A, B = as_cmatrix(A, name='A'), as_cmatrix(B, name='B')
    if A.shape != B.shape:
        raise ValueError(f"Schur product needs equal shapes, got {A.shape} and {B.shape}")
    return A * B


def schur_power(A, m):
    """
    The Schur power A^{o m}, defined recursively with A^{o 1} = A.

    Examples
    --------
    >>> schur_power([[1, 2], [2, 1]], 3).real
    array([[1., 8.],
           [8., 1.]])
    """
    A = as_cmatrix(A)
    if m < 1:
        raise ValueError(f"The Schur power must be >= 1, got {m}")
    P = A
    for _ in range(m - 1):
        P = schur_product(P, A)
    return P


def circulant(a):
    """
    The circulant matrix Circ(a_1, ..., a_n).

    The first row is `a` and row i is the cyclic right shift of row i - 1, so that entry (i, j)
    is a[(j - i) mod n].

    Examples
    --------
    >>> circulant([1, 2, 3]).real
    array([[1., 2., 3.],
           [3., 1., 2.],
           [2., 3., 1.]])
    """
    a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
    if a.ndim != 1 or a.size < 1:
        raise ValueError("A circulant needs a non empty 1D sequence of entries")
    n = a.size
    idx = (np.arange(n)[np.newaxis, :] - np.arange(n)[:, np.newaxis]) % n
    return as_cmatrix(a[idx])


def circulant_ab(a, b, n):
    """Circ(-a, b, b, ..., b) = -(a + b) I_n + b 1_{n x n}."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return circulant(np.r_[-complex(a), np.full(n - 1, complex(b))])


def cyclic_shift(n):
    """The unitary permutation Circ(0, ..., 0, 1)."""
    return circulant(np.r_[np.zeros(n - 1), 1])


def all_ones(n):
    """The all ones matrix 1_{n x n} = Circ(1, ..., 1)."""
    return np.ones((n, n), dtype=np.complex128)


def companion(p):
    """
    The Frobenius companion matrix C(p).

    The first row is (-a_{n-1}, ..., -a_1, -a_0) and the subdiagonal holds the identity I_{n-1}.
    The eigenvalues of C(p) are the roots of p.

    Parameters
    ----------
    p : Poly
        A monic polynomial of degree n >= 2.

    Returns
    -------
    numpy.array
        The (n, n) companion matrix.
    """
    if not isinstance(p, Poly):
        p = Poly(p)
    n = p.degree
    C = np.zeros((n, n), dtype=np.complex128)
    C[0, :] = -p.coeffs[::-1]
    C[1:, :-1] = np.eye(n - 1)
    return C


def anti_diagonal(lams):
    """The matrix with entry (i, n - 1 - i) equal to lams[i] and zeros elsewhere."""
    lams = np.atleast_1d(np.asarray(lams, dtype=np.complex128))
    n = lams.size
    if n < 1:
        raise ValueError("anti_diagonal needs at least one entry")
    A = np.zeros((n, n), dtype=np.complex128)
    A[np.arange(n), n - 1 - np.arange(n)] = lams
    return as_cmatrix(A)


def direct_sum(*blocks):
    """The block diagonal matrix X_1 (+) X_2 (+) ... of the given blocks."""
    if len(blocks) == 0:
        raise ValueError("direct_sum needs at least one block")
    return scipy.linalg.block_diag(*[as_cmatrix(b, name=f'block {i}') for i, b in enumerate(blocks)])


def doubly_stochastic_scale(A, tol=None):
    """
    Detect a scaled doubly stochastic matrix.

    Parameters
    ----------
    A : array_like
        A square matrix.
    tol : float, optional
        Absolute tolerance on the imaginary parts, the negativity and the row/column sums,
        defaults to the configured stochastic_tol.

    Returns
    -------
    float or None
        k >= 0 such that A is k times a doubly stochastic matrix, None otherwise.

    Examples
    --------
    >>> doubly_stochastic_scale([[.5, .5], [.5, .5]])
    1.0
    >>> doubly_stochastic_scale([[1, 0], [0, 2]]) is None
    True
    """
    A = as_cmatrix(A, square=True)
    tol = params.value('stochastic_tol', tol)
    if np.any(np.abs(A.imag) > tol) or np.any(A.real < -tol):
        return None
    rows, cols = A.real.sum(axis=1), A.real.sum(axis=0)
    k = rows.mean()
    if np.any(np.abs(rows - k) > tol) or np.any(np.abs(cols - k) > tol):
        return None
    return float(max(k, 0.))


def schur_embed_indices(p, q, m, budget=None):
    """
    Positions of the Schur product of m (p, q) matrices inside their Kronecker product.

    Rows are {j (1 + p + ... + p^(m-1)) + 1 : 0 <= j < p} and columns are the same expression
    in q. The positions are 1-based; subtract one to index numpy arrays.

    Parameters
    ----------
    p, q : int
        Number of rows and columns of each factor.
    m : int
        Number of factors.
    budget : int, optional
        Maximum p^m and q^m, defaults to the element budget.

    Returns
    -------
    rows : numpy.array
        The p 1-based row positions.
    cols : numpy.array
        The q 1-based column positions.

    Examples
    --------
    >>> schur_embed_indices(3, 3, 2)[0]
    array([1, 5, 9])
    """
    if min(p, q, m) < 1:
        raise ValueError(f"p, q and m must be positive, got {p}, {q}, {m}")
    budget = params.value('element_budget', budget)
    for d in (p, q):
        if d ** m > budget:
            raise ElementBudgetError(f"{d}^{m} exceeds the element budget of {budget}")
    rstep = sum(p ** i for i in range(m))
    cstep = sum(q ** i for i in range(m))
    return np.arange(p) * rstep + 1, np.arange(q) * cstep + 1


def random_complex(rng, shape):
    """Standard complex Gaussian entries drawn from a numpy Generator."""
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    """A Haar distributed unitary matrix, from the QR factorization of a complex Gaussian matrix."""
    Q, R = np.linalg.qr(random_complex(rng, (n, n)))
    d = np.diag(R)
    return Q * np.where(d == 0, 1, d / np.abs(d))[np.newaxis, :]


def random_doubly_stochastic(rng, n, k=1., terms=None):
    """
    k times a random doubly stochastic matrix, as a convex combination of permutation matrices.

    :param rng: numpy.random.Generator
    :param n: size of the matrix
    :param k: scale, >= 0
    :param terms: number of permutations in the combination, defaults to n + 1
    :return: (n, n) complex128 array with real non negative entries
    """
    terms = n + 1 if terms is None else terms
    weights = rng.dirichlet(np.ones(terms))
    A = np.zeros((n, n))
    for w in weights:
        A[np.arange(n), rng.permutation(n)] += w
    return as_cmatrix(k * A)
