"""Built-in example problems with their closed-form solutions in R(0,2).

Closed forms are written directly in the algebra (inverses, products with
e1) rather than through the complex reduction, so comparing them with solver
output checks the reduction as well as the numerics.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .clifford02 import E1, E2, CliffordElement, alpha, inverse

G0_EXAMPLE1 = "conj(t)/(conj(t)^2-1)"

EXAMPLES: dict[str, dict] = {
    "1a": {
        "contour": {"kind": "circle", "center": [0.0, 0.0], "radius": 0.5},
        "G": {"g0_expr": G0_EXAMPLE1, "g1_expr": "0"},
        "g": {"g0_expr": "1/(conj(t)-1)", "g1_expr": "1/(t+1)"},
        "vanish_at_infinity": True,
    },
    "1b": {
        "contour": {"kind": "circle", "center": [0.5, 0.0], "radius": 1.0},
        "G": {"g0_expr": G0_EXAMPLE1, "g1_expr": "0"},
        "g": {"g0_expr": "1/(conj(t)-1)", "g1_expr": "1/(t+1)"},
        "vanish_at_infinity": True,
    },
    "1c": {
        "contour": {"kind": "circle", "center": [-1.0, 0.0], "radius": 0.5},
        "G": {"g0_expr": G0_EXAMPLE1, "g1_expr": "0"},
        "g": {"g0_expr": "1/(conj(t)-1)", "g1_expr": "1/(t+1)"},
        "vanish_at_infinity": True,
    },
    "1d": {
        "contour": {"kind": "circle", "center": [-1.0, 0.0], "radius": 0.5},
        "G": {"g0_expr": G0_EXAMPLE1, "g1_expr": "0"},
        "g": {"g0_expr": "1/(conj(t)-1)", "g1_expr": "1/t"},
        "vanish_at_infinity": True,
    },
    "2": {
        "contour": {"kind": "circle", "center": [0.0, 0.0], "radius": 1.0},
        "G_const": {"a": [1.0, 0.0], "b": [-1.0, 0.0]},
        "g": {"g0_expr": "1/t", "g1_expr": "1/(t-2)"},
        "vanish_at_infinity": True,
    },
    "3": {
        "contour": {"kind": "circle", "center": [0.0, 0.0], "radius": 1.0},
        "G_const": {"a": [0.0, 0.0], "b": [1.0, 0.0]},
        "g": {"g0_expr": "0", "g1_expr": "0"},
        "vanish_at_infinity": True,
        "family_mode": "exterior",
    },
}


def e1x(z) -> CliffordElement:
    """-e1 x for x = alpha(z)."""
    return -(E1 * alpha(z))


def xe1(z) -> CliffordElement:
    """-x e1 for x = alpha(z)."""
    return -(alpha(z) * E1)


def _zero(z) -> CliffordElement:
    zero = np.zeros(np.shape(z))
    return CliffordElement(zero, zero, zero, zero)


def example_1a(z, inside: bool, params=(0.0, 0.0, 0.0, 0.0)) -> CliffordElement:
    """params = (c1^0, c1^1, c2^0, c2^1), the real parts of the two free constants."""
    p10, p11, p20, p21 = params
    k1 = CliffordElement(p10, 0.0, 0.0, p11)
    k2 = E1 * p20 - E2 * p21
    if inside:
        return (inverse(e1x(z) - 1) + k1 * inverse(e1x(z) ** 2 - 1)
                + E1 * inverse(xe1(z) + 1) + k2 * inverse(xe1(z) ** 2 - 1))
    return k1 * inverse(e1x(z)) + k2 * inverse(xe1(z))


def example_1b(z, inside: bool) -> CliffordElement:
    if inside:
        return inverse(e1x(z) + 1) + E1 * inverse(xe1(z) + 1)
    return -2 * inverse(e1x(z))


def example_1d(z, inside: bool) -> CliffordElement:
    if inside:
        return inverse(e1x(z) - 1) + E1 * inverse(xe1(z))
    return _zero(z)


def example_2(z, inside: bool) -> CliffordElement:
    if inside:
        return e1x(z) + E1 * inverse(xe1(z) - 2)
    return _zero(z)


def example_3(z, inside: bool, m: int = 1) -> CliffordElement:
    if inside:
        return e1x(z) ** m
    return -(E1 * inverse(xe1(z) ** m))


CLOSED_FORMS: dict[str, Optional[Callable]] = {
    "1a": example_1a,
    "1b": example_1b,
    "1c": None,
    "1d": example_1d,
    "2": example_2,
    "3": example_3,
}


def probes(name: str, count: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """(interior, exterior) probe points kept away from the contour and from poles."""
    spec = EXAMPLES[name]["contour"]
    center = complex(*spec["center"])
    r = spec["radius"]
    ang = 2 * np.pi * (np.arange(count) + 0.25) / count
    return center + 0.5 * r * np.exp(1j * ang), center + 2.0 * r * np.exp(1j * (ang + 0.1))


__all__ = ["CLOSED_FORMS", "EXAMPLES", "e1x", "probes", "xe1"]
