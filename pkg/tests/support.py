"""Shared helpers: solving the built-in fixtures and fitting free constants."""
from functools import lru_cache

import numpy as np

from cliffrbvp.clifford_rbvp import solve
from cliffrbvp.config import ProblemConfig
from cliffrbvp.fixtures import EXAMPLES


@lru_cache(maxsize=None)
def solved(name, nodes=512):
    cfg = ProblemConfig.from_dict(EXAMPLES[name])
    p, maps = cfg.build(nodes)
    sol = solve(p, family_count=cfg.family_count, family_mode=cfg.family_mode, maps=maps)
    return p, sol


def coeffs(x):
    return x.as_array().reshape(-1, 4)


def max_component_error(got, want):
    return float(np.max(np.abs(coeffs(got) - coeffs(want))))


def fit_constants(sol, target, points):
    """Real least squares for the free constants.

    Phi is real-linear in each complex constant (U0 picks up conjugates), so
    each constant contributes two real directions: unit real and unit imaginary.
    """
    n = sol.free_constant_count
    base = coeffs(sol.evaluate_phi(points, [0] * n))
    cols = []
    for k in range(n):
        for unit in (1.0, 1j):
            consts = [0j] * n
            consts[k] = unit
            cols.append((coeffs(sol.evaluate_phi(points, consts)) - base).ravel())
    A = np.stack(cols, axis=1)
    rhs = (coeffs(target) - base).ravel()
    x, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    constants = [complex(x[2 * k], x[2 * k + 1]) for k in range(n)]
    return constants, float(np.max(np.abs(A @ x - rhs)))
