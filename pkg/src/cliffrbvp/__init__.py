"""Riemann boundary value problems for monogenic functions with values in R(0,2)."""
from .clifford02 import CliffordElement, EvenElement, alpha, alpha_inv, beta, beta_inv
from .clifford_rbvp import CliffordRbvp, CliffordSolution, reduce, solve
from .contour import Contour, circle, from_fourier
from .errors import RbvpError

__all__ = [
    "CliffordElement",
    "CliffordRbvp",
    "CliffordSolution",
    "Contour",
    "EvenElement",
    "RbvpError",
    "alpha",
    "alpha_inv",
    "beta",
    "beta_inv",
    "circle",
    "from_fourier",
    "reduce",
    "solve",
]
