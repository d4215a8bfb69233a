"""
Seeded randomized verification of the numerical radius and norm bounds.

Every suite draws random instances, evaluates one family of bounds and returns a BoundReport
per trial. Trial t of suite s uses its own counter based Philox stream, spawned from
SeedSequence([seed, index of s]), so that the records only depend on the configuration and
never on the number of workers.

The output is a stream of JSON records, one per line: a header per suite with its anchors,
one record per trial and a final summary.

Examples
--------
>>> from kronrad.verify import VerifyConfig, run
>>> records = list(run(VerifyConfig(seed=42, trials=2, suites=('p2x2',))))
>>> records[-1]['ok']
True
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from functools import lru_cache
import json
import logging

import numpy as np

from kronrad.core import (anti_diagonal, circulant, circulant_ab, kron, random_complex,
                          random_doubly_stochastic)
from kronrad.spectral import spectral_norm
from kronrad.radius import w, radius_antidiagonal
from kronrad import bounds, pnorm, polyroots, schurpower, semihilbert

_logger = logging.getLogger(__name__)

P_SET = ('1', '1.5', '2', '3', 'inf')
"""tuple: The default exponents of the l_p suites."""


@dataclass
class VerifyConfig:
    """The configuration of a verification run; equal configurations give identical reports."""

    """int: The root seed."""
    seed: int = 42
    """int: Number of trials per suite."""
    trials: int = 20
    """int: Largest size of the left factor A."""
    n_max: int = 4
    """int: Largest size of the right factor B, and largest Schur power."""
    m_max: int = 3
    """tuple of str: Exponents of the l_p suites."""
    p_set: tuple = P_SET
    """float: Admissible negative slack, relative to max(1, |rhs|)."""
    tol: float = 1e-8
    """tuple of str: The suites to run, in order."""
    suites: tuple = None
    """int: Number of threads running trials."""
    workers: int = 1

    def __post_init__(self):
        self.suites = tuple(SUITES) if self.suites is None else tuple(self.suites)
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"Unknown suites {unknown}, choose among {list(SUITES)}")
        if self.trials < 1 or self.n_max < 1 or self.m_max < 1 or self.workers < 1:
            raise ValueError("trials, n_max, m_max and workers must be positive")
        self.p_set = tuple(str(pnorm.LpExponent.parse(p)) for p in self.p_set)


def _sizes(rng, cfg, n_min=1, m_min=1):
    return int(rng.integers(n_min, max(n_min, cfg.n_max) + 1)), int(rng.integers(m_min, max(m_min, cfg.m_max) + 1))


def _hermitian(rng, m):
    G = random_complex(rng, (m, m))
    return (G + G.conj().T) / 2


def _close(a, b, tol):
    return abs(a - b) <= tol * max(1, abs(a), abs(b))


def suite_p3(rng, cfg):
    n, m = _sizes(rng, cfg)
    A, B = random_complex(rng, (n, n)), random_complex(rng, (m, m))
    rep = bounds.p3_chain(A, B, tol=cfg.tol)
    rep.check('w(A(x)B)=w(B(x)A)', bounds.kron_commutes(A, B) <= 1e-9 * max(1, rep['w(A(x)B)']), 'p3')
    return rep


def suite_th4(rng, cfg):
    n, m = _sizes(rng, cfg)
    A, B = rng.uniform(0, 1, (n, n)), random_complex(rng, (m, m))
    rep = bounds.th4_chain(A, B)
    rep.check('C° = A o ||B|| 1 - (||B|| - w(B)) A o I', bounds.c_circ_identity(A, B) <= 1e-12, 'ECtilde')
    return rep


def suite_cor1(rng, cfg):
    n, m = _sizes(rng, cfg, m_min=2)
    rep = bounds.BoundReport(instance={'n': n, 'm': m}, tol=cfg.tol)
    kind = int(rng.integers(3))
    if kind == 0:
        c = bounds.cor1_equality_check(random_complex(rng, (n, n)), _hermitian(rng, m), tol=cfg.tol)
        rep.check('w(B)=||B|| implies w(A(x)B)=w(A)||B||', c.forward_applicable and c.forward_ok, 'cor1')
    elif kind == 1:
        A = rng.uniform(0, 1, (n, n)) + np.eye(n)
        c = bounds.cor1_equality_check(A, _hermitian(rng, m), tol=cfg.tol)
        rep.check('converse applies', c.converse_applicable and c.equality, 'cor1')
        rep.check('w(A(x)B)=w(A)||B|| implies w(B)=||B||', c.converse_ok, 'cor1')
    else:
        A = rng.uniform(0, 1, (n, n)) + np.eye(n)
        B = random_complex(rng, (m, m))
        c = bounds.cor1_equality_check(A, B, tol=1e-6)
        if c.w_B < c.norm_B - .1:
            rep.check('w(B)<||B|| excludes equality', not c.equality, 'cor1')
    scan = bounds.lemma_need_scan(random_complex(rng, (n, n)) + np.eye(n))
    rep.check('diagonal scaling keeps the norm only at 1', scan.ok, 'need')
    return rep


def suite_thm4_1(rng, cfg):
    n, m = _sizes(rng, cfg)
    A, B = random_complex(rng, (n, n)), random_complex(rng, (m, m))
    rep = bounds.e14_chain(A, B)
    for p in cfg.p_set:
        b = pnorm.kron_pnorm_bounds(A, B, p)
        rep.add(f'lower_{p}', b.lower, 'E15')
        rep.add(f'upper_{p}', b.upper, 'E15')
        rep.relate(f'lower_{p}', f'upper_{p}', 'E15')
    return rep


def suite_copnorm(rng, cfg):
    n, m = _sizes(rng, cfg)
    k = float(rng.choice([.5, 1., 3.]))
    A, B = random_doubly_stochastic(rng, n, k=k), random_complex(rng, (m, m))
    rep = bounds.BoundReport(instance={'n': n, 'm': m, 'k': k}, tol=cfg.tol)
    knb = rep.add('k||B||', k * spectral_norm(B), 'Copnorm')
    for p in cfg.p_set:
        b = pnorm.kron_pnorm_bounds(A, B, p)
        rep.check(f'lower_{p}=k||B||', _close(b.lower, knb, cfg.tol), 'Copnorm')
        rep.check(f'upper_{p}=k||B||', _close(b.upper, knb, cfg.tol), 'Copnorm')
        rep.check(f'exact_{p}=k||B||', b.exact is not None and _close(b.exact, knb, cfg.tol), 'Copnorm')
    rep.check('w(A(x)B)=k w(B)', _close(w(kron(A, B)), k * w(B), cfg.tol), 'Copnorm')
    return rep


def suite_thm4_2(rng, cfg):
    n = int(rng.integers(2, 9))
    m = int(rng.integers(1, cfg.m_max + 1))
    a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    B = random_complex(rng, (m, m))
    A = circulant_ab(a, b, n)
    rep = bounds.BoundReport(instance={'n': n, 'm': m}, tol=cfg.tol)
    norm2, wr = pnorm.circ_norm2_closed(a, b, n, B)
    K = kron(A, B)
    rep.check('||A(x)B||_2 closed form', _close(norm2, spectral_norm(K), 1e-9), 'thm4-2')
    rep.check('w(A(x)B) closed form', _close(wr, w(K), 1e-9), 'thm4-2')
    ar, br = abs(a), abs(b)
    rep.check('real case split', _close(pnorm.circ_norm2_real_split(ar, br, n), spectral_norm(circulant_ab(ar, br, n)), 1e-9), '--2')
    c = rng.standard_normal(3)
    C = circulant(c)
    rep.check('equicorrelated Gram norm', _close(pnorm.gram_equicorrelated_norm(C, B), spectral_norm(kron(C, B)), 1e-9), 'corr2')
    return rep


@lru_cache(maxsize=None)
def _kappa(n):
    return pnorm.kappa(n)


def suite_tfinal(rng, cfg):
    n = int(rng.integers(2, 9))
    m = int(rng.integers(1, cfg.m_max + 1))
    a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    B = random_complex(rng, (m, m))
    A = circulant_ab(a, b, n)
    rep = bounds.BoundReport(instance={'n': n, 'm': m}, tol=cfg.tol)
    lo, up = pnorm.tfinal_bounds(a, b, n, B)
    rep.add('Tfinal lower', lo, 'Tfinal')
    rep.add('Tfinal upper', up, 'Tfinal')
    rep.relate('Tfinal lower', 'Tfinal upper', 'Tfinal')
    for p in cfg.p_set:
        bb = pnorm.kron_pnorm_bounds(A, B, p)
        rep.add(f'lower_{p}', bb.lower, 'E15')
        rep.relate(f'lower_{p}', 'Tfinal upper', 'Tfinal')
    ar, br = rng.uniform(0, 2, 2)
    rep.add('Tfinal upper (a, b >= 0)', pnorm.tfinal_bounds(ar, br, n)[1], 'Tfinal')
    rep.add('a+b+nb kappa', pnorm.kappa_upper_bound(ar, br, n, kap=_kappa(n)), '--3')
    rep.relate('Tfinal upper (a, b >= 0)', 'a+b+nb kappa', '--3')
    return rep


def suite_semihilbert(rng, cfg):
    size = int(rng.integers(2, cfg.m_max + 2))
    rank = max(1, size - int(rng.integers(1, 3)))
    n = int(rng.integers(1, cfg.n_max + 1))
    ps = semihilbert.PSpace.from_matrix(semihilbert.random_psd(rng, size, rank))
    B, B2 = semihilbert.random_adjointable(rng, ps), semihilbert.random_adjointable(rng, ps)
    rep = semihilbert.p_kron_suite(ps, rng.uniform(0, 1, (n, n)), B)
    rep.tol = cfg.tol
    M, M2 = semihilbert.reduced_matrix(ps, B), semihilbert.reduced_matrix(ps, B2)
    scale = max(1, spectral_norm(B), spectral_norm(B2))
    resid = spectral_norm(ps.P @ B - semihilbert.lift(ps, M) @ ps.P)
    rep.check('P B = lift(M) P', resid <= 1e-9 * scale * max(1, ps.sigma[0]), 'lem1-4')
    hom = max(spectral_norm(semihilbert.reduced_matrix(ps, B + B2) - M - M2),
              spectral_norm(semihilbert.reduced_matrix(ps, B @ B2) - M @ M2))
    rep.check('reduction is additive and multiplicative', hom <= 1e-9 * scale ** 2, 'lem-4')
    sharp = spectral_norm(semihilbert.reduced_matrix(ps, semihilbert.p_adjoint(ps, B)) - M.conj().T)
    rep.check('reduction of B# is M*', sharp <= 1e-9 * scale, 'lem1-4')
    return rep


def suite_schur(rng, cfg):
    n = int(rng.integers(1, cfg.n_max + 1))
    A, B = random_complex(rng, (n, n)), random_complex(rng, (n, n))
    rep = schurpower.schur_radius_chain(A, B)
    for m in range(1, cfg.m_max + 1):
        th10 = schurpower.th10_chain(A, m)
        for r in th10.relations:
            r.lhs, r.rhs = f'{r.lhs} m={m}', f'{r.rhs} m={m}'
        for e in th10.entries:
            e.name = f'{e.name} m={m}'
        rep.merge(th10)
    return rep


PROFILES = ('normal', 'jordan', 'contraction')


def suite_tref(rng, cfg):
    n = int(rng.integers(1, min(cfg.n_max, 3) + 1))
    profile = PROFILES[int(rng.integers(len(PROFILES)))]
    A = schurpower.radial_generator(rng, n, profile=profile)
    rep = bounds.BoundReport(instance={'n': n, 'profile': profile}, tol=cfg.tol)
    for m in range(1, min(cfg.m_max, 3) + 1):
        v = schurpower.tref_check(A, m, tol=cfg.tol)
        rep.check(f'radial m={m}', v.applicable, 'Tref')
        rep.check(f'partial diagonalizability m={m}', v.partial_diag, 'Tref')
        rep.check(f'equality iff witness m={m}', v.consistent, 'Tref')
        rep.check(f'downward closure m={m}', v.downward_ok, 'Tref')
        rep.check(f'witness agrees with A^(x)m m={m}', (v.witness is not None) == schurpower.tref_direct(A, m, tol=cfg.tol), 'Tref')
        rep.check(f'D coordinates agree m={m}', schurpower.cref_check(A, m, tol=cfg.tol), 'Cref')
    return rep


def suite_tforallm(rng, cfg):
    k = int(rng.integers(1, max(1, cfg.n_max - 1) + 1))
    size = int(rng.integers(0, 2))
    A = schurpower.dp_plus_t(rng, k, size, rho=rng.uniform(.1, 1.))
    partner = schurpower.dp_plus_t(rng, 1, int(rng.integers(0, 2)), rho=rng.uniform(.1, 1.))
    m_max = min(cfg.m_max, 3)
    scan = schurpower.tforallm_scan(A, m_max=m_max, tol=cfg.tol, partner=partner)
    rep = bounds.BoundReport(instance={'k': k, 'T': size}, tol=cfg.tol)
    rep.check('D P (+) T is a member', scan.member, 'Tforallm')
    for name, flag in scan.closure.items():
        rep.check(f'closed under {name}', flag, 'Tforallm')
    n = int(rng.integers(1, cfg.n_max + 1))
    v = random_complex(rng, n)
    if rng.uniform() < .5:
        v = np.eye(n)[int(rng.integers(n))] * v[0]
    rank_one = schurpower.tforallm_scan(np.outer(v, v.conj()) * complex(*rng.standard_normal(2)), m_max=max(2, m_max), tol=cfg.tol)
    rep.check('rank one members are single entry diagonals', rank_one.rank_one_ok, 'Tforallm')
    return rep


def suite_polyroots(rng, cfg):
    p = polyroots.random_poly(rng, int(rng.integers(2, 13)))
    rep = polyroots.root_bound_report(p, tol=cfg.tol).to_bound_report(tol=cfg.tol)
    d = polyroots.decomposition_check(p)
    rep.check('C(p) = Circ(0, ..., 0, 1) + D', d.residual == 0, 'est-poly')
    rep.check('w(Circ(0, ..., 0, 1)) = 1', _close(d.w_shift, 1., 1e-10), 'est-poly')
    rep.check('rank one radius closed form', _close(d.w_rank_one, d.w_rank_one_sweep, 1e-10), 'lemma-rank1')
    return rep


def suite_hou_du(rng, cfg):
    n, m = _sizes(rng, cfg)
    grid = [[random_complex(rng, (m, m)) for _ in range(n)] for _ in range(n)]
    lhs, rhs = bounds.hou_du_gap(grid)
    rep = bounds.BoundReport(instance={'n': n, 'm': m}, tol=cfg.tol)
    rep.add('||[P_ij]||', lhs, 'lem2')
    rep.add('||[||P_ij||]||', rhs, 'lem2')
    rep.relate('||[P_ij]||', '||[||P_ij||]||', 'lem2')
    return rep


def suite_p2x2(rng, cfg):
    n = int(rng.integers(1, 8))
    lams = random_complex(rng, n)
    rep = bounds.BoundReport(instance={'n': n}, tol=cfg.tol)
    sweep = w(anti_diagonal(lams), method='sweep')
    rep.add('w(A) sweep', sweep, 'P2x2')
    rep.add('w(A) closed form', radius_antidiagonal(lams), 'P2x2')
    rep.check('sweep = closed form', abs(sweep - rep['w(A) closed form']) <= 1e-9, 'P2x2')
    return rep


SUITES = {
    'p3': (suite_p3, ('p3', 'E0-1')),
    'th4': (suite_th4, ('th4', 'ECtilde')),
    'cor1': (suite_cor1, ('cor1', 'need')),
    'thm4_1': (suite_thm4_1, ('E14', 'E15')),
    'copnorm': (suite_copnorm, ('Copnorm',)),
    'thm4_2': (suite_thm4_2, ('thm4-2', '--2', 'corr2')),
    'tfinal': (suite_tfinal, ('Tfinal', '--3')),
    'semihilbert': (suite_semihilbert, ('p3-4', 'th4-4', 'th1-', 'final', 'cor1-4-', 'lem1-4', 'lem-4')),
    'schur': (suite_schur, ('lem4', 'n-34', 'th5', 'th6', 'th2--', 'cor2', 'th10')),
    'tref': (suite_tref, ('Tref', 'Cref')),
    'tforallm': (suite_tforallm, ('Tforallm',)),
    'polyroots': (suite_polyroots, ('fuji', 'est-poly', 'lemma-rank1')),
    'hou_du': (suite_hou_du, ('lem2',)),
    'p2x2': (suite_p2x2, ('P2x2',)),
}
"""dict: Suite name -> (trial function, anchors printed in the suite header)."""


def trial_rngs(cfg, suite):
    """One Philox generator per trial, spawned from SeedSequence([seed, suite index])."""
    root = np.random.SeedSequence([cfg.seed, list(SUITES).index(suite)])
    return [np.random.Generator(np.random.Philox(child)) for child in root.spawn(cfg.trials)]


def _record(suite, trial, rep, tol):
    bad = rep.violations(tol)
    return {
        'suite': suite,
        'trial': trial,
        'ok': not bad,
        'min_slack': None if not rep.relations else rep.min_slack,
        'violations': [dict(b) for b in bad],
        'anchors': rep.anchors,
    }


def run(cfg):
    """
    Run the configured suites.

    Yields
    ------
    dict
        A header {'suite', 'anchors', 'trials', 'seed'} per suite, a record per trial in trial
        order and a final {'summary', 'ok'} record.
    """
    summary = {}
    with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
        for suite in cfg.suites:
            fcn, anchors = SUITES[suite]
            _logger.info(f"Running suite {suite} with {cfg.trials} trials")
            yield {'suite': suite, 'anchors': list(anchors), 'trials': cfg.trials, 'seed': cfg.seed}
            rngs = trial_rngs(cfg, suite)
            failed = 0
            for trial, rep in enumerate(executor.map(lambda rng: fcn(rng, cfg), rngs)):
                rec = _record(suite, trial, rep, cfg.tol)
                failed += not rec['ok']
                yield rec
            summary[suite] = {'trials': cfg.trials, 'failed': failed}
    config = {k: v for k, v in asdict(cfg).items() if k != 'workers'}
    yield {'summary': summary, 'config': config, 'ok': all(s['failed'] == 0 for s in summary.values())}


def dumps(record):
    """The canonical single line JSON form of a record."""
    return json.dumps(record, sort_keys=True, separators=(',', ':'), ensure_ascii=False, default=_default)


def _default(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (tuple, set)):
        return list(obj)
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")
