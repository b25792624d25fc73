"""Dimension witnesses from the ranks of prepare-and-measure and Bell behaviours.

Behaviours, strategies and reports are plain dicts in the JSON file format.
"""

import json as _json

from . import _dimwit
from ._dimwit import ConstraintError, DimwitError, PreconditionError, StructuralError

__version__ = _dimwit.version()


def _dump(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def validate(behaviour, tol=1e-12):
    return _json.loads(_dimwit.validate(_dump(behaviour), tol))


def rank(behaviour, matrix="auto", force_float=False, tol=None):
    return _json.loads(_dimwit.rank(_dump(behaviour), matrix, force_float, tol))


def witness(behaviour, force_float=False, tol=None):
    return _json.loads(_dimwit.witness(_dump(behaviour), force_float, tol))


def simulate(strategy):
    return _json.loads(_dimwit.simulate(_dump(strategy)))


def robustness(behaviour, etas=("1/100", "1/2", "9/10")):
    return _json.loads(_dimwit.robustness(_dump(behaviour), [str(e) for e in etas]))


def p_k(m, k):
    return _json.loads(_dimwit.p_k(m, k))


def d_zero(m, k):
    return _json.loads(_dimwit.d_zero(m, k))


def d_block(m, k, i, j):
    return _json.loads(_dimwit.d_block(m, k, i, j))


def l_star(m, n):
    return _json.loads(_dimwit.l_star(m, n))


def separation(k, m=None):
    return _json.loads(_dimwit.separation(k, k + 1 if m is None else m))


def negligibility(bell=False, x=4, y=3, m=2, n=2, samples=1000, seed=0, threads=0):
    return _json.loads(_dimwit.negligibility(bell, x, y, m, n, samples, seed, threads))


def nonconvexity(m, n):
    return _json.loads(_dimwit.nonconvexity(m, n))


def run(*args):
    """Runs the command-line tool in-process; returns (exit_code, stdout, stderr)."""
    return _dimwit.run(list(args))
