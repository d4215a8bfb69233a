"""
Numerical radius bounds for Kronecker products A (x) B.

Each chain is returned as a BoundReport: an ordered ledger of named values with the anchor of
the statement they come from, the verified inequalities between them with their measured slack,
and boolean checks of equality statements.

Anchors
-------
* E0-1 - Holbrook: w(A (x) B) <= w(A) ||B||.
* p3 - w(A) w(B) <= w(A (x) B) <= min(w(A) ||B||, w(B) ||A||).
* th4 - w(A (x) B) <= w(C) <= w(C°).
* ECtilde - for non-negative A, C° = A o ||B|| 1 - (||B|| - w(B)) A o I and w(C°) <= w(A) ||B||.
* th2 - w(A (x) B) <= w(A') w(B) and w(A (x) B) <= w(Ĉ).
* cor1 - w(B) = ||B|| implies w(A (x) B) = w(A) ||B||, and conversely for non-negative A with
  non zero diagonal.
* E14 - w(A) w(B) <= w(A (x) B) <= ||A|| w(B) <= (max row sum)^(1/2) (max col sum)^(1/2) w(B).
* lem2 - the Hou-Du block norm inequality ||[P_ij]|| <= ||[||P_ij||]||.
* need - the diagonal-scaled matrix has norm ||A|| only at scale 1.
"""
from dataclasses import dataclass, field
import logging

import numpy as np
import pandas as pd
from iblutil.util import Bunch

from kronrad import params
from kronrad.core import as_cmatrix, kron
from kronrad.radius import w, is_nonnegative
from kronrad.spectral import spectral_norm, operator_abs

_logger = logging.getLogger(__name__)


@dataclass
class BoundReport:
    """A named-bound ledger for one instance."""

    """dict: Description of the instance, eg. shapes and seed."""
    instance: dict = field(default_factory=dict)
    """list of Bunch: Ordered entries with keys name, value, anchor."""
    entries: list = field(default_factory=list)
    """list of Bunch: Verified inequalities lhs <= rhs with keys lhs, rhs, slack, anchor."""
    relations: list = field(default_factory=list)
    """list of Bunch: Boolean checks with keys name, passed, anchor."""
    checks: list = field(default_factory=list)
    """float: Admissible negative slack, relative to max(1, |rhs|)."""
    tol: float = None

    def __post_init__(self):
        self.tol = params.value('slack_tol', self.tol)

    def add(self, name, value, anchor):
        """Append an entry and return its value."""
        if name in self:
            raise ValueError(f"Duplicate entry '{name}' in report")
        self.entries.append(Bunch(name=name, value=float(value), anchor=anchor))
        return float(value)

    def __contains__(self, name):
        return any(e.name == name for e in self.entries)

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e.value
        raise KeyError(name)

    def relate(self, lhs, rhs, anchor):
        """Record lhs <= rhs between two entries; returns the slack rhs - lhs."""
        slack = self[rhs] - self[lhs]
        self.relations.append(Bunch(lhs=lhs, rhs=rhs, slack=float(slack), anchor=anchor))
        return slack

    def chain(self, names, anchor):
        """Record names[0] <= names[1] <= ... ."""
        for lhs, rhs in zip(names[:-1], names[1:]):
            self.relate(lhs, rhs, anchor)

    def check(self, name, passed, anchor):
        """Record a boolean check."""
        self.checks.append(Bunch(name=name, passed=bool(passed), anchor=anchor))
        return bool(passed)

    def violations(self, tol=None):
        """The relations with slack < -tol max(1, |rhs|) and the failed checks."""
        tol = self.tol if tol is None else tol
        bad = [r for r in self.relations if r.slack < -tol * max(1, abs(self[r.rhs]))]
        return bad + [c for c in self.checks if not c.passed]

    def ok(self, tol=None):
        """True when every relation holds within tolerance and every check passed."""
        return len(self.violations(tol)) == 0

    @property
    def min_slack(self):
        """float: The smallest slack over all relations, inf if there is none."""
        return min([r.slack for r in self.relations], default=np.inf)

    @property
    def anchors(self):
        """list of str: The distinct anchors in order of first appearance."""
        seen = [e.anchor for e in self.entries] + [r.anchor for r in self.relations] + \
            [c.anchor for c in self.checks]
        return list(dict.fromkeys(seen))

    def merge(self, other):
        """Append the entries, relations and checks of another report, skipping known entries."""
        for e in other.entries:
            if e.name not in self:
                self.entries.append(e)
        self.relations.extend(other.relations)
        self.checks.extend(other.checks)
        return self

    def to_df(self):
        """
        Return the entries as a pandas DataFrame.

        Returns
        -------
        pandas.DataFrame
            Columns name, value and anchor, one row per entry.
        """
        return pd.DataFrame([dict(e) for e in self.entries], columns=['name', 'value', 'anchor'])

    def relations_df(self):
        """Return the relations as a pandas DataFrame with columns lhs, rhs, slack, anchor."""
        return pd.DataFrame([dict(r) for r in self.relations], columns=['lhs', 'rhs', 'slack', 'anchor'])

    def to_dict(self):
        """A JSON serializable dictionary of the report."""
        return {
            'instance': self.instance,
            'entries': [dict(e) for e in self.entries],
            'relations': [dict(r) for r in self.relations],
            'checks': [dict(c) for c in self.checks],
            'ok': self.ok(),
        }


def _describe(**mats):
    return {k: list(np.shape(v)) for k, v in mats.items()}


def holbrook(A, B):
    """Holbrook's upper bound w(A) ||B|| of w(A (x) B)."""
    return w(A) * spectral_norm(B)


def p3_chain(A, B, budget=None, tol=None):
    """
    The sandwich w(A) w(B) <= w(A (x) B) <= min(w(A) ||B||, w(B) ||A||).

    When A or B is radial (w = ||.||) the sandwich collapses and the report checks that
    w(A (x) B) = w(A) w(B).

    Parameters
    ----------
    A, B : array_like
        Square matrices.
    budget : int, optional
        Element budget of A (x) B.
    tol : float, optional
        Tolerance of the radial test and of the equality check, defaults to slack_tol.

    Returns
    -------
    BoundReport
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    tol = params.value('slack_tol', tol)
    rep = BoundReport(instance=_describe(A=A, B=B))
    wa, wb = rep.add('w(A)', w(A), 'p3'), rep.add('w(B)', w(B), 'p3')
    na, nb = rep.add('||A||', spectral_norm(A), 'p3'), rep.add('||B||', spectral_norm(B), 'p3')
    rep.add('w(A)w(B)', wa * wb, 'p3')
    mid = rep.add('w(A(x)B)', w(kron(A, B, budget=budget)), 'p3')
    rep.add('w(A)||B||', wa * nb, 'E0-1')
    rep.add('w(B)||A||', wb * na, 'p3')
    rep.add('min(w(A)||B||,w(B)||A||)', min(wa * nb, wb * na), 'p3')
    rep.chain(['w(A)w(B)', 'w(A(x)B)', 'min(w(A)||B||,w(B)||A||)'], 'p3')
    if abs(wb - nb) <= tol * max(1, nb) or abs(wa - na) <= tol * max(1, na):
        rep.check('sandwich equality w(A(x)B)=w(A)w(B)', abs(mid - wa * wb) <= tol * max(1, mid), 'p3')
    return rep


def c_matrices(A, B):
    """
    The matrices C and C° bounding w(A (x) B).

    Both have diagonal |a_ii| w(B). Off the diagonal C has c_ij = w([[0, a_ij], [a_ji, 0]] (x) B),
    computed by the radius sweep on the (2m, 2m) matrix, and C° has |a_ij| ||B||.

    Returns
    -------
    numpy.array
        C, real non-negative.
    numpy.array
        C°, real non-negative.
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    n = A.shape[0]
    wb, nb = w(B), spectral_norm(B)
    C = np.diag(np.abs(A.diagonal()) * wb)
    for i in range(n):
        for j in range(i + 1, n):
            pair = np.array([[0, A[i, j]], [A[j, i], 0]])
            C[i, j] = C[j, i] = w(np.kron(pair, B))
    C_circ = np.abs(A) * nb
    np.fill_diagonal(C_circ, np.abs(A.diagonal()) * wb)
    return C, C_circ


def c_circ_identity(A, B):
    """
    For non-negative A, the deviation max |C° - (A o ||B|| 1 - (||B|| - w(B)) A o I)|.
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    if not is_nonnegative(A):
        raise ValueError("The C° identity needs a real non-negative A")
    wb, nb = w(B), spectral_norm(B)
    n = A.shape[0]
    _, C_circ = c_matrices(A, B)
    rebuilt = (A * nb * np.ones((n, n)) - (nb - wb) * A * np.eye(n)).real
    return float(np.abs(C_circ - rebuilt).max())


def th4_chain(A, B, budget=None):
    """
    w(A) w(B) <= w(A (x) B) <= w(C) <= w(C°), completed by w(C°) <= w(A) ||B|| when A >= 0.

    Returns
    -------
    BoundReport
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    rep = BoundReport(instance=_describe(A=A, B=B))
    wa, wb, nb = w(A), w(B), spectral_norm(B)
    C, C_circ = c_matrices(A, B)
    rep.add('w(A)w(B)', wa * wb, 'p3')
    rep.add('w(A(x)B)', w(kron(A, B, budget=budget)), 'th4')
    rep.add('w(C)', w(C), 'th4')
    rep.add('w(C°)', w(C_circ), 'th4')
    rep.chain(['w(A)w(B)', 'w(A(x)B)', 'w(C)', 'w(C°)'], 'th4')
    if is_nonnegative(A):
        rep.add('w(A)||B||', wa * nb, 'E0-1')
        rep.relate('w(C°)', 'w(A)||B||', 'ECtilde')
    return rep


def hat_c_entry(aij, aji, B, abs_pair=None):
    """
    (1/2) || |a_ij| |B| + |a_ji| |B*| ||^(1/2) || |a_ji| |B| + |a_ij| |B*| ||^(1/2).

    :param aij: complex scalar a_ij
    :param aji: complex scalar a_ji
    :param B: square matrix
    :param abs_pair: optional precomputed (|B|, |B*|)
    :return: float
    """
    a, b = abs(aij), abs(aji)
    if abs_pair is None:
        B = as_cmatrix(B, square=True, name='B')
        abs_pair = operator_abs(B), operator_abs(B.conj().T)
    absB, absBH = abs_pair
    return float(.5 * np.sqrt(spectral_norm(a * absB + b * absBH)) * np.sqrt(spectral_norm(b * absB + a * absBH)))


def refined_bounds(A, B, budget=None):
    """
    The bounds w(A') w(B) and w(Ĉ) of w(A (x) B).

    A' has entries max(|a_ij|, |a_ji|). Ĉ has diagonal |a_ii| w(B) and off-diagonal entries
    (1/2) || |a_ij| |B| + |a_ji| |B*| ||^(1/2) || |a_ji| |B| + |a_ij| |B*| ||^(1/2), where
    |B| = (B*B)^(1/2). The report also checks ĉ_ij <= (|a_ij| + |a_ji|) ||B|| / 2 entrywise.

    Returns
    -------
    BoundReport
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    n = A.shape[0]
    rep = BoundReport(instance=_describe(A=A, B=B))
    wb, nb = w(B), spectral_norm(B)
    absA = np.abs(A)
    A_prime = np.maximum(absA, absA.T)
    absB, absBH = operator_abs(B), operator_abs(B.conj().T)
    C_hat = np.diag(absA.diagonal() * wb)
    for i in range(n):
        for j in range(i + 1, n):
            C_hat[i, j] = C_hat[j, i] = hat_c_entry(absA[i, j], absA[j, i], B, abs_pair=(absB, absBH))
    rep.add('w(A(x)B)', w(kron(A, B, budget=budget)), 'th2')
    rep.add("w(A')w(B)", w(A_prime) * wb, 'th2')
    rep.add('w(Ĉ)', w(C_hat), 'th2')
    rep.relate('w(A(x)B)', "w(A')w(B)", 'th2')
    rep.relate('w(A(x)B)', 'w(Ĉ)', 'th2')
    off = ~np.eye(n, dtype=bool)
    cap = (absA + absA.T) / 2 * nb
    excess = float(np.max(C_hat[off] - cap[off], initial=0.))
    rep.check('ĉ_ij <= (|a_ij|+|a_ji|)||B||/2', excess <= rep.tol * max(1, nb), 'th2')
    return rep


def cor1_equality_check(A, B, tol=None, budget=None):
    """
    Both directions of the equality statement w(A (x) B) = w(A) ||B|| <=> w(B) = ||B||.

    Parameters
    ----------
    A, B : array_like
        Square matrices.
    tol : float, optional
        Equality tolerance, relative to max(1, value), defaults to slack_tol.

    Returns
    -------
    iblutil.util.Bunch
        forward_applicable : w(B) = ||B|| within tol
        forward_ok : not applicable, or w(A (x) B) = w(A) ||B|| within tol
        converse_applicable : all a_ij >= 0 and all a_ii != 0
        converse_ok : not applicable, or w(A (x) B) != w(A) ||B||, or w(B) = ||B|| within tol
        plus the values w_kron, holbrook, w_B and norm_B
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    tol = params.value('slack_tol', tol)
    wb, nb = w(B), spectral_norm(B)
    wk = w(kron(A, B, budget=budget))
    hb = w(A) * nb
    radial_b = abs(wb - nb) <= tol * max(1, nb)
    equal = abs(wk - hb) <= tol * max(1, hb)
    converse_applicable = is_nonnegative(A) and bool(np.all(A.diagonal() != 0))
    return Bunch(
        forward_applicable=radial_b,
        forward_ok=(not radial_b) or equal,
        converse_applicable=converse_applicable,
        converse_ok=(not converse_applicable) or (not equal) or radial_b,
        equality=equal,
        w_kron=wk, holbrook=hb, w_B=wb, norm_B=nb,
    )


def e14_chain(A, B, budget=None):
    """
    w(A) w(B) <= w(A (x) B) <= ||A|| w(B) <= (max_i sum_j |a_ij|)^(1/2) (max_j sum_i |a_ij|)^(1/2) w(B).

    Returns
    -------
    BoundReport
    """
    A, B = as_cmatrix(A, square=True), as_cmatrix(B, square=True, name='B')
    rep = BoundReport(instance=_describe(A=A, B=B))
    wb = w(B)
    row, col = np.abs(A).sum(axis=1).max(), np.abs(A).sum(axis=0).max()
    rep.add('w(A)w(B)', w(A) * wb, 'E14')
    rep.add('w(A(x)B)', w(kron(A, B, budget=budget)), 'E14')
    rep.add('||A||w(B)', spectral_norm(A) * wb, 'E14')
    rep.add('sqrt(row*col)w(B)', np.sqrt(row * col) * wb, 'E14')
    rep.chain(['w(A)w(B)', 'w(A(x)B)', '||A||w(B)', 'sqrt(row*col)w(B)'], 'E14')
    return rep


def hou_du_gap(blocks):
    """
    The two sides of the block norm inequality ||[P_ij]|| <= ||[||P_ij||]||.

    Parameters
    ----------
    blocks : list of list of array_like
        An n x n grid of matrices of identical shape.

    Returns
    -------
    float
        lhs, the spectral norm of the assembled block matrix.
    float
        rhs, the spectral norm of the n x n matrix of block norms.
    """
    grid = [[as_cmatrix(b, name=f'block ({i + 1}, {j + 1})') for j, b in enumerate(row)]
            for i, row in enumerate(blocks)]
    n = len(grid)
    if n == 0 or any(len(row) != n for row in grid):
        raise ValueError("hou_du_gap needs a square grid of blocks")
    shapes = {b.shape for row in grid for b in row}
    if len(shapes) != 1:
        raise ValueError(f"All blocks must share one shape, got {sorted(shapes)}")
    lhs = spectral_norm(np.block(grid))
    rhs = spectral_norm(np.array([[spectral_norm(b) for b in row] for row in grid]))
    if lhs > rhs + 1e-9:
        _logger.warning(f"Block norm inequality violated: {lhs} > {rhs}")
    return lhs, rhs


def diagonal_scaled(A, lam):
    """A with its diagonal multiplied by lam."""
    A = as_cmatrix(A, square=True).copy()
    np.fill_diagonal(A, lam * A.diagonal())
    return A


def lemma_need_scan(A, lams=None, tol=1e-9):
    """
    Scan ||diagonal_scaled(A, lam)|| against ||A|| over a grid of scales.

    Parameters
    ----------
    A : array_like
        A square matrix with non zero diagonal.
    lams : array_like, optional
        The scales, defaults to {0, 0.25, ..., 2}.
    tol : float
        Equality tolerance.

    Returns
    -------
    iblutil.util.Bunch
        lams, norms, equal (boolean per scale) and ok, True when equality happens at lam = 1 only.
    """
    A = as_cmatrix(A, square=True)
    if np.any(A.diagonal() == 0):
        raise ValueError("lemma_need_scan needs a non zero diagonal")
    lams = np.arange(0, 2.25, .25) if lams is None else np.asarray(lams)
    na = spectral_norm(A)
    norms = np.array([spectral_norm(diagonal_scaled(A, lam)) for lam in lams])
    equal = np.abs(norms - na) <= tol * max(1, na)
    return Bunch(lams=lams, norms=norms, equal=equal, ok=bool(np.all(equal == (lams == 1))))


def kron_commutes(A, B, budget=None):
    """|w(A (x) B) - w(B (x) A)|."""
    return abs(w(kron(A, B, budget=budget)) - w(kron(B, A, budget=budget)))
