"""Scalar Riemann problem Phi+ = C Phi- + f on a closed contour.

The solution follows the classical route: index from the winding of C,
canonical function X from the Cauchy transform of an unwrapped logarithm,
particular solution X * C[f/X+], free polynomial directions X * (z - z0)^j
and moment conditions when the index is too large.  Every returned
sectional function is stored by its jump density and value at infinity, so
boundary values are recomputed through Plemelj rather than copied.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .cauchy import BoundaryFunction, DensitySectional, SectionalFunction
from .contour import INSIDE, Contour, classify, winding_number_and_residual
from .errors import BranchClosureError, ContourError, ReductionError

UNIQUE = "unique"
FAMILY = "family"
UNSOLVABLE = "unsolvable"

CLOSURE_TOL = 1e-6 * 2 * np.pi
CONDITION_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class ScalarRbvp:
    """Find sectionally holomorphic Phi with Phi+ = coefficient * Phi- + rhs on the contour."""

    contour: Contour
    coefficient: BoundaryFunction
    rhs: BoundaryFunction
    vanish_at_infinity: bool = True

    def __post_init__(self):
        if np.any(np.abs(self.coefficient.values) == 0.0):
            raise ReductionError("coefficient vanishes at a contour node")

    def residual(self, f: SectionalFunction) -> float:
        """max |Phi+ - C Phi- - rhs| over the nodes."""
        return float(np.max(np.abs(f.plus - self.coefficient.values * f.minus - self.rhs.values)))


def jump_solve(g: BoundaryFunction) -> DensitySectional:
    """Phi+ - Phi- = g with Phi-(inf) = 0."""
    return DensitySectional(g.contour, np.asarray(g.values, dtype=complex), 0.0)


def index(coefficient: BoundaryFunction) -> int:
    # the effective coefficient is conj(G0^), whose winding is minus the index
    return -winding_number_and_residual(coefficient.values)[0]


def default_reference_point(c: Contour) -> complex:
    z0 = c.centroid
    if classify(c, [z0])[0] != INSIDE:
        raise ContourError("node average is not an interior point; pass z0 explicitly")
    return z0


def unwrapped_log(values: np.ndarray) -> np.ndarray:
    """Continuous logarithm along the nodes, starting from the principal branch.

    The branch must close on itself after one loop; otherwise the samples
    carry residual winding and no single-valued logarithm exists.
    """
    values = np.asarray(values, dtype=complex)
    steps = np.angle(np.roll(values, -1) / values)
    closure = float(np.sum(steps))
    if abs(closure) > CLOSURE_TOL:
        raise BranchClosureError(f"logarithm does not close (phase drift {closure:.3g}); index or resolution failure")
    phase = np.angle(values[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    return np.log(np.abs(values)) + 1j * phase


@dataclass(frozen=True, eq=False)
class CanonicalFunction(SectionalFunction):
    """X+ = exp(Gamma) inside, X- = (z - z0)^index exp(Gamma) outside."""

    contour: Contour
    aleph: int
    z0: complex
    gamma: DensitySectional

    @cached_property
    def _boundary(self):
        shift = (self.contour.gamma - self.z0) ** self.aleph
        return np.exp(self.gamma.plus), shift * np.exp(self.gamma.minus)

    @property
    def plus(self) -> np.ndarray:
        return self._boundary[0]

    @property
    def minus(self) -> np.ndarray:
        return self._boundary[1]

    @property
    def at_infinity(self) -> complex:
        # X-(z) ~ (z - z0)^index
        if self.aleph > 0:
            return complex(np.inf)
        return 1.0 + 0j if self.aleph == 0 else 0j

    def evaluate_inside(self, z):
        return np.exp(self.gamma.evaluate_inside(z))

    def evaluate_outside(self, z):
        return (z - self.z0) ** self.aleph * np.exp(self.gamma.evaluate_outside(z))


def canonical_function(coefficient: BoundaryFunction, aleph: Optional[int] = None,
                       z0: Optional[complex] = None) -> CanonicalFunction:
    c = coefficient.contour
    if aleph is None:
        aleph = index(coefficient)
    if z0 is None:
        z0 = default_reference_point(c)
    log_density = unwrapped_log((c.gamma - z0) ** aleph * coefficient.values)
    return CanonicalFunction(c, int(aleph), complex(z0), DensitySectional(c, log_density, 0.0))


def particular(X: CanonicalFunction, g: BoundaryFunction) -> DensitySectional:
    """Psi = C[g / X+]."""
    return DensitySectional(X.contour, np.asarray(g.values, dtype=complex) / X.plus, 0.0)


def condition_count(aleph: int, vanish_at_infinity: bool) -> int:
    return max(0, aleph if vanish_at_infinity else aleph - 1)


def free_constant_count(aleph: int, vanish_at_infinity: bool) -> int:
    return max(0, -aleph if vanish_at_infinity else 1 - aleph)


def moments(X: CanonicalFunction, g: BoundaryFunction, count: int) -> list[complex]:
    """closed-int (g/X+)(tau) (tau - z0)^(k-1) dtau for k = 1..count."""
    c = X.contour
    q = np.asarray(g.values, dtype=complex) / X.plus
    shift = c.gamma - X.z0
    return [c.integrate(q * shift ** (k - 1)) for k in range(1, count + 1)]


def solvability(X: CanonicalFunction, g: BoundaryFunction, aleph: int, vanish_at_infinity: bool) -> list[complex]:
    return moments(X, g, condition_count(aleph, vanish_at_infinity))


def condition_tolerance(X: CanonicalFunction, g: BoundaryFunction, rtol: float = CONDITION_RTOL) -> float:
    q = np.asarray(g.values, dtype=complex) / X.plus
    return rtol * (1.0 + float(np.max(np.abs(q))) * X.contour.length)


@dataclass(frozen=True, eq=False)
class ScalarSolution:
    status: str
    index: int
    particular: Optional[DensitySectional]
    basis: list[DensitySectional]
    conditions: list[complex]
    tolerance: float
    canonical: CanonicalFunction
    vanish_at_infinity: bool = True
    problem: Optional[ScalarRbvp] = field(default=None, repr=False)

    @property
    def solvable(self) -> bool:
        return self.status != UNSOLVABLE

    @property
    def free_constant_count(self) -> int:
        return len(self.basis)

    @property
    def max_condition(self) -> float:
        return max((abs(m) for m in self.conditions), default=0.0)

    def combine(self, constants=()) -> DensitySectional:
        """particular + sum_j constants[j] * basis[j]."""
        if self.particular is None:
            raise ReductionError("problem is unsolvable; no solution to evaluate")
        constants = list(constants)
        if len(constants) != len(self.basis):
            raise ValueError(f"expected {len(self.basis)} free constants, got {len(constants)}")
        density = self.particular.density.copy()
        offset = self.particular.offset
        for cst, b in zip(constants, self.basis):
            density = density + cst * b.density
            offset = offset + cst * b.offset
        return DensitySectional(self.canonical.contour, density, offset)


def _from_boundary(X: CanonicalFunction, psi_plus, psi_minus, at_infinity) -> DensitySectional:
    return DensitySectional.from_boundary_values(X.contour, X.plus * psi_plus, X.minus * psi_minus, at_infinity)


def solve(p: ScalarRbvp, z0: Optional[complex] = None, rtol: float = CONDITION_RTOL) -> ScalarSolution:
    aleph = index(p.coefficient)
    X = canonical_function(p.coefficient, aleph, z0)
    vanish = p.vanish_at_infinity
    conditions = solvability(X, p.rhs, aleph, vanish)
    tol = condition_tolerance(X, p.rhs, rtol)

    shift = X.contour.gamma - X.z0
    basis = [
        _from_boundary(X, shift ** j, shift ** j, 1.0 if j == -aleph else 0.0)
        for j in range(free_constant_count(aleph, vanish))
    ]

    if any(abs(m) > tol for m in conditions):
        return ScalarSolution(UNSOLVABLE, aleph, None, basis, conditions, tol, X, vanish, p)

    psi = particular(X, p.rhs)
    if vanish or aleph <= 0:
        at_inf = 0.0
    else:
        # X- Psi -> -m_aleph / (2 pi i) once the lower moments vanish
        at_inf = -moments(X, p.rhs, aleph)[-1] / (2j * np.pi)
    part = _from_boundary(X, psi.plus, psi.minus, at_inf)
    status = FAMILY if basis else UNIQUE
    return ScalarSolution(status, aleph, part, basis, conditions, tol, X, vanish, p)


__all__ = [
    "CanonicalFunction",
    "FAMILY",
    "ScalarRbvp",
    "ScalarSolution",
    "UNIQUE",
    "UNSOLVABLE",
    "canonical_function",
    "index",
    "jump_solve",
    "particular",
    "solvability",
    "solve",
]
