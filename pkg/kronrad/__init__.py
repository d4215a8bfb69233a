"""A package for numerical radius, Kronecker product and Schur power computations on dense complex matrices.

The package computes numerical radii, spectral quantities and l_p operator norms of small dense
complex matrices, evaluates every bound and equality characterization known for Kronecker
products, Schur products and Schur powers, and checks them against independent oracles with a
seeded verification harness.


Terminology
-----------
* **Numerical radius** - w(A), the supremum of |<Ax, x>| over unit vectors x. It is computed as
  the maximum over angles theta of the top eigenvalue of Re(exp(i theta) A) = (exp(i theta) A +
  exp(-i theta) A*) / 2.
* **Spectral norm** - ||A||, the largest singular value. Always w(A) <= ||A|| <= 2 w(A).
* **Spectral radius** - r(A), the largest eigenvalue modulus. Always r(A) <= w(A).
* **Radial matrix** - a matrix with w(A) = ||A||. Radial matrices also satisfy r(A) = ||A|| and every
  Jordan block of a maximum-modulus eigenvalue is 1 x 1.
* **Kronecker product** - A (x) B = [a_ij B], see `kronrad.core.kron`.
* **Schur product** - the entrywise product A o B; A^{o m} is a principal submatrix of A^{(x) m}.
* **Block l_p norm** - for x = (x_1, ..., x_n) with blocks x_j, ||x||_p = (sum ||x_j||^p)^(1/p) where
  ||x_j|| is the Euclidean norm of the block. ||A (x) B||_p is the operator norm for that norm.
* **Semi-Hilbertian space** - C^m equipped with the semi-inner product <x, y>_P = <Px, y> of a
  positive semidefinite P. Operators that leave the support of P invariant under the adjoint
  ("P-adjointable") reduce to a matrix on the support, see `kronrad.semihilbert`.
* **Companion matrix** - C(p) of a monic polynomial p, whose eigenvalues are the roots of p.


Conventions
-----------
* Matrices are 2D numpy arrays of dtype complex128, validated by `kronrad.core.as_cmatrix`.
* Indices are 0-based in the API; `kronrad.core.schur_embed_indices` reports 1-based positions.
* Tolerances and the element budget are read from `kronrad.params`; every function argument left
  to None falls back to the configured value.
* Every bound carries an anchor string naming the statement it checks, eg. 'th4' or 'E15'.


Examples
--------
>>> import numpy as np
>>> from kronrad.radius import numerical_radius
>>> round(numerical_radius(np.array([[0, 1], [0, 0]])).value, 10)
0.5

>>> from kronrad.bounds import p3_chain
>>> report = p3_chain(np.diag([1, 2]), np.array([[0, 1], [0, 0]]))
>>> report.ok()
True
"""
__version__ = '0.1.0'
