"""Cauchy-type integrals on a discretized contour.

All integrals are in the complex form (1/2 pi i) closed-int phi(tau)/(tau - z) dtau,
the n = 2 specialization of the Clifford Cauchy kernel after the alpha/beta
identifications.  The singular integral on the curve is computed from its
subtraction form, which leaves a bounded integrand for the trapezoid rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .contour import INSIDE, NEAR_BOUNDARY, OUTSIDE, Contour, classify, fourier_eval, spectral_derivative
from .errors import NearBoundaryError


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Complex samples at the contour nodes, optionally backed by a callable."""

    contour: Contour
    values: np.ndarray
    func: Optional[Callable] = None

    @classmethod
    def from_callable(cls, contour: Contour, func: Callable) -> BoundaryFunction:
        return cls(contour, contour.evaluate(func), func)

    @classmethod
    def constant(cls, contour: Contour, value: complex) -> BoundaryFunction:
        value = complex(value)
        return cls(contour, np.full(contour.N, value), lambda t: value * np.ones_like(np.asarray(t, dtype=complex)))

    @property
    def is_zero(self) -> bool:
        return bool(getattr(self.func, "is_zero", False)) or not np.any(self.values)


def _samples(density) -> tuple[Contour, np.ndarray]:
    return density.contour, np.asarray(density.values, dtype=complex)


def _refuse_near(c: Contour, z: np.ndarray) -> np.ndarray:
    tags = classify(c, z)
    if np.any(tags == NEAR_BOUNDARY):
        raise NearBoundaryError("evaluation point lies inside the refusal band around the contour")
    return tags


def cauchy_transform(density: BoundaryFunction, z, *, check: bool = True):
    """Plain trapezoid approximation of (1/2 pi i) closed-int phi/(tau - z) dtau."""
    c, phi = _samples(density)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if check:
        _refuse_near(c, zz)
    flat = zz.ravel()
    out = np.empty(flat.shape, dtype=complex)
    wphi = c.weights * phi
    for start in range(0, flat.size, 256):
        out[start:start + 256] = (1.0 / (c.gamma[None, :] - flat[start:start + 256, None])) @ wphi
    out = (out / (2j * np.pi)).reshape(zz.shape)
    return out if np.ndim(z) else complex(out[0])


def singular_integral(density: BoundaryFunction, *, diagonal: str = "spectral") -> np.ndarray:
    """S phi at every node: (1/pi i) closed-int (phi(tau) - phi(t))/(tau - t) dtau + phi(t).

    The removable diagonal term is the limit phi'(theta)/gamma'(theta) times the
    node weight; ``diagonal='drop'`` omits it (first-order accurate, for rough data).
    """
    c, phi = _samples(density)
    K, rowsum = c.pv_kernel
    acc = K @ phi - rowsum * phi
    if diagonal == "spectral":
        acc = acc + spectral_derivative(phi) * (2 * np.pi / c.N)
    elif diagonal != "drop":
        raise ValueError(f"unknown diagonal mode {diagonal!r}")
    return acc / (1j * np.pi) + phi


def singular_pv(density: BoundaryFunction, k: int, *, diagonal: str = "spectral") -> complex:
    return complex(singular_integral(density, diagonal=diagonal)[k])


def plemelj(density: BoundaryFunction) -> tuple[BoundaryFunction, BoundaryFunction]:
    """Boundary values (plus, minus) = (1/2)(S + I) phi, (1/2)(S - I) phi.

    ``minus`` is formed as ``plus - phi`` so the jump is reproduced exactly.
    """
    c, phi = _samples(density)
    plus = 0.5 * (singular_integral(density) + phi)
    return BoundaryFunction(c, plus), BoundaryFunction(c, plus - phi)


class SectionalFunction:
    """Piecewise holomorphic function on the plane minus the contour.

    Subclasses provide boundary values from each side, the value at
    infinity and field evaluation away from the refusal band.
    """

    contour: Contour

    @property
    def plus(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def minus(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def at_infinity(self) -> complex:
        raise NotImplementedError

    def evaluate_inside(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def evaluate_outside(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, z):
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        tags = _refuse_near(self.contour, zz)
        out = np.empty(zz.shape, dtype=complex)
        inside = tags == INSIDE
        if np.any(inside):
            out[inside] = self.evaluate_inside(zz[inside])
        if np.any(~inside):
            out[~inside] = self.evaluate_outside(zz[~inside])
        return out if np.ndim(z) else complex(out[0])

    def boundary_at(self, theta, side: str) -> np.ndarray:
        """Side boundary values at arbitrary parameters by trigonometric interpolation."""
        return fourier_eval(self.plus if side == "+" else self.minus, theta)


@dataclass(frozen=True, eq=False)
class DensitySectional(SectionalFunction):
    """f = C[density] + offset, with boundary values from the Plemelj formulas.

    Field evaluation uses the barycentric (Helsing-Ojala) forms of the Cauchy
    formula written with the Plemelj boundary values; they agree with the plain
    Cauchy sum away from the curve and stay accurate close to it.
    """

    contour: Contour
    density: np.ndarray
    offset: complex = 0.0

    @cached_property
    def _plemelj(self) -> tuple[np.ndarray, np.ndarray]:
        plus, minus = plemelj(BoundaryFunction(self.contour, self.density))
        return plus.values + self.offset, minus.values + self.offset

    @property
    def plus(self) -> np.ndarray:
        return self._plemelj[0]

    @property
    def minus(self) -> np.ndarray:
        return self._plemelj[1]

    @property
    def at_infinity(self) -> complex:
        return complex(self.offset)

    def _sums(self, z, values):
        c = self.contour
        num = np.empty(z.shape, dtype=complex)
        den = np.empty(z.shape, dtype=complex)
        for start in range(0, z.size, 256):
            zz = z[start:start + 256]
            r = c.weights[None, :] / (c.gamma[None, :] - zz[:, None])
            num[start:start + 256] = r @ values
            den[start:start + 256] = r.sum(axis=1)
        return num, den

    def evaluate_inside(self, z):
        num, den = self._sums(z, self.plus)
        return num / den

    def evaluate_outside(self, z):
        num, den = self._sums(z, self.minus)
        two_pi_i = 2j * np.pi
        return (num - two_pi_i * self.offset) / (den - two_pi_i)

    @classmethod
    def from_boundary_values(cls, contour, plus, minus, at_infinity=0.0) -> DensitySectional:
        return cls(contour, np.asarray(plus, dtype=complex) - np.asarray(minus, dtype=complex), complex(at_infinity))

    def scaled(self, factor: complex) -> DensitySectional:
        return DensitySectional(self.contour, factor * self.density, factor * self.offset)


@dataclass(frozen=True, eq=False)
class ClosedFormSectional(SectionalFunction):
    """Sectional function given by explicit callables for each region."""

    contour: Contour
    inside: Callable
    outside: Callable
    infinity: complex = 0.0

    @property
    def plus(self) -> np.ndarray:
        return np.asarray(self.inside(self.contour.gamma), dtype=complex) * np.ones(self.contour.N)

    @property
    def minus(self) -> np.ndarray:
        return np.asarray(self.outside(self.contour.gamma), dtype=complex) * np.ones(self.contour.N)

    @property
    def at_infinity(self) -> complex:
        return complex(self.infinity)

    def evaluate_inside(self, z):
        return np.asarray(self.inside(z), dtype=complex) * np.ones(z.shape)

    def evaluate_outside(self, z):
        return np.asarray(self.outside(z), dtype=complex) * np.ones(z.shape)


def eval_sectional(f: SectionalFunction, z):
    return f(z)


def jump_solution(g: BoundaryFunction) -> DensitySectional:
    """Sectional function with jump g across the contour and zero at infinity."""
    return DensitySectional(g.contour, np.asarray(g.values, dtype=complex), 0.0)


__all__ = [
    "BoundaryFunction",
    "ClosedFormSectional",
    "DensitySectional",
    "INSIDE",
    "OUTSIDE",
    "SectionalFunction",
    "cauchy_transform",
    "eval_sectional",
    "jump_solution",
    "plemelj",
    "singular_integral",
    "singular_pv",
]
