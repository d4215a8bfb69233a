"""
The kronrad command line: matrix and polynomial files, per bound reports and the verification
harness.

Matrices are read from files (or '-' for standard input) in either of two forms

    {"rows": 2, "cols": 2, "data": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}
    0+0i 1+0i / 0+0i 0+0i

The structured form stores each entry as a [re, im] pair and is the only output form; the
shorthand separates rows with '/' or new lines and entries with white space.

Every command prints a table of the named bounds with their anchors followed by the JSON report,
or only the JSON report with --json. The exit code is 0 when every relation holds, 1 on a
violation, 2 on a usage, file or budget error and 3 on a numerical failure.

Examples
--------
    kronrad radius A.json
    kronrad pnorm --p inf A.json B.json
    kronrad kron-bounds A.json B.json
    kronrad schur-chain --m 3 A.json B.json
    kronrad tref --m 2 A.json
    kronrad semihilbert --P P.json A.json B.json
    kronrad poly-bounds --coeffs p.txt
    kronrad verify --seed 42 --trials 200 --suites p3,th4
"""
import argparse
import json
import logging
from pathlib import Path
import re
import sys

import numpy as np
import pandas as pd
from iblutil.util import setup_logger

import kronrad
from kronrad import bounds, pnorm, polyroots, schurpower, semihilbert, verify
from kronrad.core import Poly, as_cmatrix
from kronrad.radius import numerical_radius

_logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

_TOKEN = re.compile(r'[0-9eE.+\-]+[ij]?')


class MatrixParseError(ValueError):
    """
    Malformed matrix or coefficient text.

    Attributes
    ----------
    row, col : int or None
        1-based row and column of the offending entry.
    position : int or None
        1-based character position in the text.
    """

    def __init__(self, message, row=None, col=None, position=None):
        where = [f"{k} {v}" for k, v in (('row', row), ('column', col), ('character', position)) if v is not None]
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.row, self.col, self.position = row, col, position


def _scalar(token, row=None, col=None, position=None):
    if not _TOKEN.fullmatch(token):
        raise MatrixParseError(f"Non numeric token '{token}'", row, col, position)
    try:
        z = complex(token[:-1] + 'j' if token[-1] in 'ij' else token)
    except ValueError:
        raise MatrixParseError(f"Non numeric token '{token}'", row, col, position)
    return z


def _parse_pair(pair, row, col):
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise MatrixParseError(f"Expected a [re, im] pair, got {pair!r}", row, col)
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair):
        raise MatrixParseError(f"Non numeric pair {pair!r}", row, col)
    z = complex(float(pair[0]), float(pair[1]))
    if not np.isfinite(z):
        raise MatrixParseError("Non finite entry", row, col)
    return z


def _parse_structured(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixParseError(f"Invalid JSON: {e.msg}", position=e.pos + 1)
    if not isinstance(doc, dict) or not {'rows', 'cols', 'data'} <= set(doc):
        raise MatrixParseError("Expected an object with keys rows, cols and data")
    rows, cols, data = doc['rows'], doc['cols'], doc['data']
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise MatrixParseError(f"rows and cols must be positive integers, got {rows!r}, {cols!r}")
    if not isinstance(data, list) or len(data) != rows:
        raise MatrixParseError(f"Expected {rows} rows of data, got {len(data) if isinstance(data, list) else data!r}")
    M = np.zeros((rows, cols), dtype=np.complex128)
    for i, line in enumerate(data):
        if not isinstance(line, list) or len(line) != cols:
            raise MatrixParseError(f"Expected {cols} entries", row=i + 1)
        for j, pair in enumerate(line):
            M[i, j] = _parse_pair(pair, i + 1, j + 1)
    return M


def _parse_shorthand(text):
    lines, cursor = [], 0
    for chunk in re.split(r'(/|\n)', text):
        if chunk not in ('/', '\n'):
            tokens = [(m.group(), cursor + m.start() + 1) for m in re.finditer(r'\S+', chunk)]
            if tokens:
                lines.append(tokens)
        cursor += len(chunk)
    if not lines:
        raise MatrixParseError("Empty matrix")
    cols = len(lines[0])
    rows = []
    for i, tokens in enumerate(lines):
        if len(tokens) != cols:
            raise MatrixParseError(f"Expected {cols} entries, got {len(tokens)}", row=i + 1, position=tokens[0][1])
        row = [_scalar(tok, i + 1, j + 1, pos) for j, (tok, pos) in enumerate(tokens)]
        for j, (z, (_, pos)) in enumerate(zip(row, tokens)):
            if not np.isfinite(z):
                raise MatrixParseError("Non finite entry", i + 1, j + 1, pos)
        rows.append(row)
    return np.array(rows, dtype=np.complex128)


def parse_matrix(text):
    """
    Parse a matrix in the structured JSON form or in the 'a+bi' shorthand.

    Parameters
    ----------
    text : str
        The matrix text.

    Returns
    -------
    numpy.array
        The (rows, cols) complex128 matrix.

    Raises
    ------
    MatrixParseError
        Shape mismatch, non numeric token or non finite entry, with the 1-based position.

    Examples
    --------
    >>> parse_matrix('0+0i 1+0i / 0+0i 0+0i').real
    array([[0., 1.],
           [0., 0.]])
    """
    if text.lstrip().startswith('{'):
        return as_cmatrix(_parse_structured(text))
    return as_cmatrix(_parse_shorthand(text))


def emit_matrix(M):
    """
    The structured form of M; parse_matrix(emit_matrix(M)) reproduces M bit for bit.

    Examples
    --------
    >>> emit_matrix([[1j]])
    '{"rows":1,"cols":1,"data":[[[0.0,1.0]]]}'
    """
    M = as_cmatrix(M)
    data = [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return json.dumps({'rows': M.shape[0], 'cols': M.shape[1], 'data': data}, separators=(',', ':'))


def read_text(path):
    """The content of a file, or of standard input when path is '-'."""
    if str(path) == '-':
        return sys.stdin.read()
    return Path(path).read_text()


def read_matrix(path):
    """Read and parse a matrix file."""
    return parse_matrix(read_text(path))


def parse_coefficients(text):
    """
    Parse polynomial coefficients, highest degree first, into a monic Poly.

    The text is either a JSON list of numbers and [re, im] pairs or white space / comma
    separated shorthand tokens.

    Examples
    --------
    >>> parse_coefficients('1 0 -2').coeffs.real
    array([-2.,  0.])
    """
    if text.lstrip().startswith('['):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise MatrixParseError(f"Invalid JSON: {e.msg}", position=e.pos + 1)
        if not isinstance(doc, list):
            raise MatrixParseError("Expected a list of coefficients")
        coeffs = [_parse_pair(c, None, k + 1) if isinstance(c, list) else _parse_pair([c, 0], None, k + 1)
                  for k, c in enumerate(doc)]
    else:
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r'[^\s,]+', text)]
        coeffs = [_scalar(tok, col=k + 1, position=pos) for k, (tok, pos) in enumerate(tokens)]
    return Poly.from_coefficients(coeffs)


def radius_report(A):
    """The numerical radius of A with its classical bounds r(A) <= w(A) <= ||A|| <= 2 w(A)."""
    res = numerical_radius(A)
    rep = bounds.BoundReport(instance={
        'A': list(np.shape(A)), 'theta_star': res.theta_star, 'is_radial': res.is_radial,
        'is_spectral': res.is_spectral, 'method': res.method})
    rep.add('r(A)', res.spectral_radius, 'E0-1')
    rep.add('||A||/2', res.norm / 2, 'E0-1')
    rep.add('w(A)', res.value, 'E0-1')
    rep.add('||A||', res.norm, 'E0-1')
    rep.relate('r(A)', 'w(A)', 'E0-1')
    rep.relate('||A||/2', 'w(A)', 'E0-1')
    rep.relate('w(A)', '||A||', 'E0-1')
    return rep


def pnorm_report(A, B, p):
    """The bracket of ||A (x) B||_p."""
    b = pnorm.kron_pnorm_bounds(A, B, p)
    rep = bounds.BoundReport(instance={'A': list(np.shape(A)), 'B': list(np.shape(B)), 'p': str(b.p)})
    rep.add('lower', b.lower, 'E15')
    rep.add('upper', b.upper, 'E15')
    rep.relate('lower', 'upper', 'E15')
    if b.exact is not None:
        rep.add('k||B||', b.exact, 'Copnorm')
        rep.relate('lower', 'k||B||', 'Copnorm')
        rep.relate('k||B||', 'upper', 'Copnorm')
    return rep


def kron_report(A, B):
    """All upper and lower bounds of w(A (x) B) and the cor1 equality statement."""
    rep = bounds.p3_chain(A, B)
    for other in (bounds.th4_chain(A, B), bounds.refined_bounds(A, B), bounds.e14_chain(A, B)):
        rep.merge(other)
    c = bounds.cor1_equality_check(A, B)
    rep.check('w(B)=||B|| implies w(A(x)B)=w(A)||B||', c.forward_ok, 'cor1')
    rep.check('w(A(x)B)=w(A)||B|| implies w(B)=||B||', c.converse_ok, 'cor1')
    return rep


def schur_report(A, m, B=None):
    """The Schur power chain of A, and the Schur product chain of A and B when B is given."""
    rep = schurpower.th10_chain(A, m)
    if B is not None:
        rep.merge(schurpower.schur_radius_chain(A, B))
    return rep


def tref_report(A, m):
    """The eigenvector test of w(A^{o m}) = w(A)^m."""
    v = schurpower.tref_check(A, m)
    if not v.applicable:
        _logger.warning("A is not radial: the eigenvector test does not apply")
    rep = bounds.BoundReport(instance=v.to_dict())
    rep.add('w(A^om)', v.power_radius, 'Tref')
    rep.add('w(A)^m', v.target, 'Tref')
    if v.applicable:
        rep.relate('w(A^om)', 'w(A)^m', 'Tref')
        rep.check('equality iff witness', v.consistent, 'Tref')
        rep.check('partial diagonalizability', v.partial_diag, 'Tref')
        rep.check('downward closure', v.downward_ok, 'Tref')
    return rep


def print_report(rep, as_json=False, file=None):
    """Print the tables of a BoundReport and its JSON form."""
    file = sys.stdout if file is None else file
    if not as_json:
        with pd.option_context('display.precision', 12, 'display.width', 160):
            print(rep.to_df().to_string(index=False), file=file)
            if rep.relations:
                print(file=file)
                print(rep.relations_df().to_string(index=False), file=file)
            if rep.checks:
                print(file=file)
                print(pd.DataFrame([dict(c) for c in rep.checks]).to_string(index=False), file=file)
            print(file=file)
    print(verify.dumps(rep.to_dict()), file=file)


def _cmd_radius(args):
    return radius_report(read_matrix(args.A))


def _cmd_pnorm(args):
    return pnorm_report(read_matrix(args.A), read_matrix(args.B), args.p)


def _cmd_kron_bounds(args):
    return kron_report(read_matrix(args.A), read_matrix(args.B))


def _cmd_schur_chain(args):
    return schur_report(read_matrix(args.A), args.m, None if args.B is None else read_matrix(args.B))


def _cmd_tref(args):
    return tref_report(read_matrix(args.A), args.m)


def _cmd_semihilbert(args):
    ps = semihilbert.PSpace.from_matrix(read_matrix(args.P))
    return semihilbert.p_kron_suite(ps, read_matrix(args.A), read_matrix(args.B))


def _cmd_poly_bounds(args):
    return polyroots.root_bound_report(parse_coefficients(read_text(args.coeffs))).to_bound_report()


def _cmd_verify(args):
    cfg = verify.VerifyConfig(
        seed=args.seed, trials=args.trials, n_max=args.n_max, m_max=args.m_max, tol=args.tol,
        p_set=tuple(args.p_set.split(',')), workers=args.workers,
        suites=None if args.suites is None else tuple(s.strip() for s in args.suites.split(',')))
    last = None
    for rec in verify.run(cfg):
        print(verify.dumps(rec))
        last = rec
    if not args.json:
        table = pd.DataFrame([{'suite': k, **v} for k, v in last['summary'].items()])
        print(table.to_string(index=False), file=sys.stderr)
    return EXIT_OK if last['ok'] else EXIT_VIOLATION


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog='kronrad', description="Numerical radius and norm bounds of Kronecker and Schur products.")
    parser.add_argument('--version', action='version', version=f'%(prog)s {kronrad.__version__}')
    parser.add_argument('--json', action='store_true', help="Print only the line delimited JSON report.")
    parser.add_argument('--verbose', action='store_true', help="Log debug messages to standard error.")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('radius', help="Numerical radius of a matrix.")
    p.add_argument('A', help="Matrix file, '-' for standard input.")
    p.set_defaults(fcn=_cmd_radius)

    p = sub.add_parser('pnorm', help="Bracket of the l_p norm of A (x) B.")
    p.add_argument('--p', required=True, help="Exponent in [1, inf], eg. 1.5 or inf.")
    p.add_argument('A')
    p.add_argument('B')
    p.set_defaults(fcn=_cmd_pnorm)

    p = sub.add_parser('kron-bounds', help="Bounds of w(A (x) B).")
    p.add_argument('A')
    p.add_argument('B')
    p.set_defaults(fcn=_cmd_kron_bounds)

    p = sub.add_parser('schur-chain', help="Bounds of w(A^{o m}), and of w(A o B) when B is given.")
    p.add_argument('--m', type=_positive_int, required=True)
    p.add_argument('A')
    p.add_argument('B', nargs='?')
    p.set_defaults(fcn=_cmd_schur_chain)

    p = sub.add_parser('tref', help="Eigenvector test of w(A^{o m}) = w(A)^m.")
    p.add_argument('--m', type=_positive_int, required=True)
    p.add_argument('A')
    p.set_defaults(fcn=_cmd_tref)

    p = sub.add_parser('semihilbert', help="Kronecker bounds in the semi-Hilbert space of P.")
    p.add_argument('--P', required=True, help="Positive semidefinite matrix file.")
    p.add_argument('A')
    p.add_argument('B')
    p.set_defaults(fcn=_cmd_semihilbert)

    p = sub.add_parser('poly-bounds', help="Root modulus bounds of a monic polynomial.")
    p.add_argument('--coeffs', required=True, help="Coefficient file, highest degree first.")
    p.set_defaults(fcn=_cmd_poly_bounds)

    p = sub.add_parser('verify', help="Seeded randomized verification of all bounds.")
    p.add_argument('--seed', type=int, default=42)
    p.add_argument('--trials', type=_positive_int, default=20)
    p.add_argument('--suites', default=None, help=f"Comma separated subset of {','.join(verify.SUITES)}.")
    p.add_argument('--n-max', type=_positive_int, default=4, dest='n_max')
    p.add_argument('--m-max', type=_positive_int, default=3, dest='m_max')
    p.add_argument('--p-set', default=','.join(verify.P_SET), dest='p_set')
    p.add_argument('--tol', type=float, default=1e-8)
    p.add_argument('--workers', type=_positive_int, default=1)
    p.set_defaults(fcn=_cmd_verify)
    return parser


def main(argv=None):
    """
    Run the command line and return the exit code.

    :param argv: list of arguments, defaults to sys.argv[1:]
    :return: 0 pass, 1 violation, 2 usage error, 3 numerical failure
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    setup_logger('kronrad', level='DEBUG' if args.verbose else 'WARNING')
    try:
        out = args.fcn(args)
    except np.linalg.LinAlgError as e:
        _logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except (ValueError, OSError) as e:
        _logger.error(str(e))
        return EXIT_USAGE
    if isinstance(out, int):
        return out
    print_report(out, as_json=args.json)
    return EXIT_OK if out.ok() else EXIT_VIOLATION


if __name__ == '__main__':
    sys.exit(main())
