"""Riemann problems Phi+ - G Phi- = g for R(0,2)-valued monogenic Phi.

Writing Phi = beta_inv(conj U0) + e1 beta_inv(U1) with U0, U1 sectionally
holomorphic turns the Clifford problem into a coupled pair of complex
problems for (U0, U1):

    conj(U0+) - G0 conj(U0-) + conj(G1) U1- = g0
    U1+       - G1 conj(U0-) - conj(G0) U1- = g1

where (G0, G1) and (g0, g1) are the hat images of G and g.  Two regimes
decouple it: a vanishing odd part G1 (two scalar problems with coefficient
conj(G0)) and constant coefficients on the unit circle, where the inversion
z -> 1/conj(z) turns conj(U0) into a holomorphic unknown.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np

from . import complex_rbvp
from .cauchy import BoundaryFunction, DensitySectional, SectionalFunction, plemelj
from .clifford02 import CliffordElement, alpha, alpha_inv, assemble, hat_transform
from .contour import Contour, circle
from .errors import ReductionError, TransportError
from .exprlang import CompiledExpr, compile_expr

NULL_ODD = "null_odd"
CONSTANT = "constant"
GENERAL = "general"

REGIME_TOL = 1e-10
EXTENSION_RTOL = 1e-6
FAMILY_MODES = ("paired", "exterior", "interior")

DataSpec = Union[str, CompiledExpr, Callable, complex, float, np.ndarray, BoundaryFunction]


def as_boundary(contour: Contour, spec: DataSpec) -> BoundaryFunction:
    """Sample a data spec at the nodes, keeping a callable when one is available."""
    if isinstance(spec, BoundaryFunction):
        return spec
    if isinstance(spec, str):
        spec = compile_expr(spec)
    if callable(spec):
        return BoundaryFunction.from_callable(contour, spec)
    if np.ndim(spec) == 0:
        return BoundaryFunction.constant(contour, complex(spec))
    values = np.asarray(spec, dtype=complex)
    if values.shape != (contour.N,):
        raise ValueError(f"sample array has shape {values.shape}, expected ({contour.N},)")
    return BoundaryFunction(contour, values)


@dataclass(frozen=True, eq=False)
class CliffordRbvp:
    """Problem data stored through its hat images on the contour."""

    contour: Contour
    G0: BoundaryFunction
    G1: BoundaryFunction
    g0: BoundaryFunction
    g1: BoundaryFunction
    vanish_at_infinity: bool = True

    def __post_init__(self):
        size = np.sqrt(np.abs(self.G0.values) ** 2 + np.abs(self.G1.values) ** 2)
        if np.any(size == 0.0) or not np.all(np.isfinite(size)):
            raise ReductionError("coefficient G vanishes (or is not finite) at a contour node")

    @classmethod
    def from_hat(cls, contour: Contour, G0: DataSpec, G1: DataSpec, g0: DataSpec, g1: DataSpec,
                 vanish_at_infinity: bool = True) -> CliffordRbvp:
        return cls(contour, *(as_boundary(contour, s) for s in (G0, G1, g0, g1)), vanish_at_infinity)

    @classmethod
    def from_clifford(cls, contour: Contour, G, g, vanish_at_infinity: bool = True) -> CliffordRbvp:
        """G and g are CliffordElements or callables of a vector CliffordElement."""

        def hat_part(F, k):
            if isinstance(F, CliffordElement):
                return complex(hat_transform(F)[k])
            return lambda t: hat_transform(F(alpha(t)))[k]

        return cls.from_hat(contour, hat_part(G, 0), hat_part(G, 1), hat_part(g, 0), hat_part(g, 1),
                            vanish_at_infinity)

    def G_samples(self) -> CliffordElement:
        return assemble(self.G0.values, self.G1.values)

    def g_samples(self) -> CliffordElement:
        return assemble(self.g0.values, self.g1.values)


@dataclass(frozen=True, eq=False)
class ReducedSystem:
    contour: Contour
    G0: BoundaryFunction
    G1: BoundaryFunction
    g0: BoundaryFunction
    g1: BoundaryFunction
    regime: str

    @property
    def constants(self) -> tuple[complex, complex]:
        return complex(np.mean(self.G0.values)), complex(np.mean(self.G1.values))


def classify_regime(G0: BoundaryFunction, G1: BoundaryFunction, tol: float = REGIME_TOL) -> str:
    scale = max(float(np.max(np.abs(G0.values))), float(np.max(np.abs(G1.values))))
    if G1.is_zero or np.max(np.abs(G1.values)) <= tol * np.max(np.abs(G0.values)):
        return NULL_ODD
    variation = max(float(np.max(np.abs(G.values - G.values[0]))) for G in (G0, G1))
    return CONSTANT if variation <= tol * scale else GENERAL


def reduce(p: CliffordRbvp, tol: float = REGIME_TOL) -> ReducedSystem:
    return ReducedSystem(p.contour, p.G0, p.G1, p.g0, p.g1, classify_regime(p.G0, p.G1, tol))


@dataclass(frozen=True, eq=False)
class BasisDirection:
    """A homogeneous solution (U0, U1); None stands for the zero function.

    A complex constant c scales U1 by c and U0 by conj(c) when
    ``conjugate_upsilon0`` is set (the inversion conjugates values).
    """

    upsilon0: Optional[SectionalFunction]
    upsilon1: Optional[SectionalFunction]
    conjugate_upsilon0: bool = False
    label: str = ""


@dataclass(frozen=True, eq=False)
class CliffordSolution:
    contour: Contour
    regime: str
    status: str
    upsilon0: Optional[SectionalFunction]
    upsilon1: Optional[SectionalFunction]
    basis: tuple = ()
    index: Optional[int] = None
    report: dict = field(default_factory=dict)
    vanish_at_infinity: bool = True
    scalar: tuple = (None, None)

    @property
    def solvable(self) -> bool:
        return self.status != complex_rbvp.UNSOLVABLE

    @property
    def free_constant_count(self) -> int:
        return len(self.basis)

    def _weights(self, constants):
        constants = [complex(c) for c in constants]
        if len(constants) != len(self.basis):
            raise ValueError(f"expected {len(self.basis)} free constants, got {len(constants)}")
        if not self.solvable:
            raise ReductionError("problem is unsolvable; no solution to evaluate")
        return constants

    def _combine(self, getter, constants):
        constants = self._weights(constants)
        u0 = getter(self.upsilon0)
        u1 = getter(self.upsilon1)
        for c, d in zip(constants, self.basis):
            c0 = np.conj(c) if d.conjugate_upsilon0 else c
            if d.upsilon0 is not None and c0 != 0:
                u0 = u0 + c0 * getter(d.upsilon0)
            if d.upsilon1 is not None and c != 0:
                u1 = u1 + c * getter(d.upsilon1)
        return u0, u1

    def upsilon_at(self, z, constants=()):
        """(U0(z), U1(z)) off the contour."""
        z = np.asarray(z, dtype=complex)
        zero = np.zeros(z.shape, dtype=complex)
        return self._combine(lambda f: zero if f is None else f(z), constants)

    def boundary_upsilon(self, side: str, constants=()):
        zero = np.zeros(self.contour.N, dtype=complex)
        if side not in "+-" or len(side) != 1:
            raise ValueError("side must be '+' or '-'")
        return self._combine(lambda f: zero if f is None else (f.plus if side == "+" else f.minus), constants)

    def evaluate_phi(self, x, constants=()) -> CliffordElement:
        """Phi at vector points x (CliffordElement) or complex points."""
        z = alpha_inv(x, atol=1e-15) if isinstance(x, CliffordElement) else np.asarray(x, dtype=complex)
        u0, u1 = self.upsilon_at(z, constants)
        return assemble(np.conj(u0), u1)

    def boundary_phi(self, side: str, constants=()) -> CliffordElement:
        u0, u1 = self.boundary_upsilon(side, constants)
        return assemble(np.conj(u0), u1)

    def member(self, k: int) -> list[complex]:
        """Constants selecting the k-th basis direction alone (1-based)."""
        out = [0j] * len(self.basis)
        out[k - 1] = 1.0 + 0j
        return out


def _scalar_report(s: complex_rbvp.ScalarSolution) -> dict:
    return {
        "status": s.status,
        "index": s.index,
        "conditions": [complex(m) for m in s.conditions],
        "tolerance": s.tolerance,
        "free_constants": s.free_constant_count,
        "solvable": s.solvable,
    }


def solve_null_odd(r: ReducedSystem, vanish_at_infinity: bool = True, z0: Optional[complex] = None,
                   rtol: float = complex_rbvp.CONDITION_RTOL) -> CliffordSolution:
    """Two independent scalar problems sharing the coefficient conj(G0)."""
    if r.regime != NULL_ODD:
        raise ReductionError(f"regime is {r.regime!r}, expected {NULL_ODD!r}")
    c = r.contour
    coeff = BoundaryFunction(c, np.conj(r.G0.values))
    p0 = complex_rbvp.ScalarRbvp(c, coeff, BoundaryFunction(c, np.conj(r.g0.values)), vanish_at_infinity)
    p1 = complex_rbvp.ScalarRbvp(c, coeff, BoundaryFunction(c, np.asarray(r.g1.values, dtype=complex)),
                                 vanish_at_infinity)
    s0 = complex_rbvp.solve(p0, z0, rtol)
    s1 = complex_rbvp.solve(p1, z0, rtol)
    report = {"upsilon0": _scalar_report(s0), "upsilon1": _scalar_report(s1)}
    basis = tuple(BasisDirection(b, None, False, f"upsilon0[{j}]") for j, b in enumerate(s0.basis))
    basis += tuple(BasisDirection(None, b, False, f"upsilon1[{j}]") for j, b in enumerate(s1.basis))
    if not (s0.solvable and s1.solvable):
        status = complex_rbvp.UNSOLVABLE
        u0 = u1 = None
    else:
        status = complex_rbvp.FAMILY if basis else complex_rbvp.UNIQUE
        u0, u1 = s0.combine([0] * len(s0.basis)), s1.combine([0] * len(s1.basis))
    return CliffordSolution(c, NULL_ODD, status, u0, u1, basis, s0.index, report, vanish_at_infinity, (s0, s1))


def _require_unit_circle(c: Contour) -> None:
    if not c.is_unit_circle(1e-10):
        raise ReductionError("operation requires the unit circle centered at the origin")


def inversion_transport(f: SectionalFunction) -> DensitySectional:
    """Lambda(z) = conj(f(1/conj(z))): swaps the sides of the unit circle.

    On the circle 1/conj(t) = t, so only values are conjugated:
    Lambda+ = conj(f-), Lambda- = conj(f+), Lambda(inf) = conj(f(0)).
    """
    _require_unit_circle(f.contour)
    return DensitySectional.from_boundary_values(
        f.contour, np.conj(f.minus), np.conj(f.plus), np.conj(f.evaluate_inside(np.zeros(1, dtype=complex))[0]))


def _extension_conditions(g0: BoundaryFunction, g1: BoundaryFunction, rtol: float):
    # pointwise: g0 extends outside (vanishing at infinity), g1 extends inside
    r0 = np.abs(plemelj(g0)[0].values)
    r1 = np.abs(plemelj(g1)[1].values)
    t0 = rtol * (1.0 + float(np.max(np.abs(g0.values))))
    t1 = rtol * (1.0 + float(np.max(np.abs(g1.values))))
    return float(np.max(r0)), float(np.max(r1)), t0, t1


def _lambda_direction(t: np.ndarray, n: int, mode: str) -> tuple[np.ndarray, np.ndarray]:
    zero = np.zeros_like(t)
    if mode == "paired":
        return t ** n, t ** (-n)
    if mode == "exterior":
        return zero, t ** (-n)
    if mode == "interior":
        return t ** n, zero
    raise ValueError(f"unknown family mode {mode!r}; choose from {FAMILY_MODES}")


def solve_constant(a: complex, b: complex, g0: BoundaryFunction, g1: BoundaryFunction,
                   family_count: int = 3, family_mode: str = "paired",
                   rtol: float = EXTENSION_RTOL) -> CliffordSolution:
    """Constant coefficients G = beta_inv(a) + e1 beta_inv(b) on the unit circle.

    Unknowns are Lambda(z) = conj(U0(1/conj z)) and U1, normalized by
    Lambda+(0) = 0 and U1-(inf) = 0, so that Phi vanishes at infinity.
    """
    c = g0.contour
    _require_unit_circle(c)
    a, b = complex(a), complex(b)
    if a == 0 and b == 0:
        raise ReductionError("coefficient G = 0 is not admissible")
    t = c.gamma
    G0v = np.asarray(g0.values, dtype=complex)
    G1v = np.asarray(g1.values, dtype=complex)

    if a != 0:
        h = BoundaryFunction(c, -G0v / a)
        hp, hm = plemelj(h)
        k = complex(DensitySectional(c, h.values).evaluate_inside(np.zeros(1, dtype=complex))[0])
        psi0_plus, psi0_minus = hp.values - k, hm.values - k
        psi1 = DensitySectional(c, G1v + b * psi0_plus)
        lam = DensitySectional.from_boundary_values(
            c, psi0_plus, a * psi0_minus - (np.conj(b) / np.conj(a)) * psi1.minus, -a * k)
        u1 = DensitySectional.from_boundary_values(c, psi1.plus, psi1.minus / np.conj(a), 0.0)
        u0 = inversion_transport(lam)
        report = {"case": "a" if b != 0 else "b", "a": a, "b": b}
        return CliffordSolution(c, CONSTANT, complex_rbvp.UNIQUE, u0, u1, (), None, report, True)

    r0, r1, t0, t1 = _extension_conditions(g0, g1, rtol)
    report = {
        "case": "c", "a": a, "b": b,
        "extension_conditions": {"g0_plus_max": r0, "g1_minus_max": r1, "g0_tol": t0, "g1_tol": t1,
                     "passed": bool(r0 <= t0 and r1 <= t1)},
        "family_mode": family_mode,
    }
    if not report["extension_conditions"]["passed"]:
        return CliffordSolution(c, CONSTANT, complex_rbvp.UNSOLVABLE, None, None, (), None, report, True)
    if family_mode not in FAMILY_MODES:
        raise ValueError(f"unknown family mode {family_mode!r}; choose from {FAMILY_MODES}")

    # with Lambda = 0: b U1- = ... reduces to U1+ = C[g1]+, U1- = -(1/conj b) C[g0]-
    p1, _ = plemelj(g1)
    _, m0 = plemelj(g0)
    u1 = DensitySectional.from_boundary_values(c, p1.values, -m0.values / np.conj(b), 0.0)
    u0 = DensitySectional(c, np.zeros(c.N, dtype=complex), 0.0)
    basis = []
    for n in range(1, family_count + 1):
        lp, lm = _lambda_direction(t, n, family_mode)
        lam = DensitySectional.from_boundary_values(c, lp, lm, 0.0)
        d1 = DensitySectional.from_boundary_values(c, b * lp, -lm / np.conj(b), 0.0)
        basis.append(BasisDirection(inversion_transport(lam), d1, True, f"{family_mode}[{n}]"))
    return CliffordSolution(c, CONSTANT, complex_rbvp.FAMILY, u0, u1, tuple(basis), None, report, True)


# --- conformal transport -------------------------------------------------------------------------

MapSpec = Union[str, CompiledExpr, Callable]


def _as_map(spec: MapSpec) -> Callable:
    if isinstance(spec, str):
        spec = compile_expr(spec)
    if not callable(spec):
        raise TransportError("conformal maps must be expressions or callables")
    return spec


@dataclass(frozen=True)
class ConformalMaps:
    """chi+ : interior -> unit disk, chi- : exterior -> its complement; phi+- are the inverses."""

    chi_plus: Callable
    chi_minus: Callable
    phi_plus: Callable
    phi_minus: Callable

    @classmethod
    def from_specs(cls, chi_plus: MapSpec, chi_minus: MapSpec, phi_plus: MapSpec, phi_minus: MapSpec) -> ConformalMaps:
        return cls(*(_as_map(s) for s in (chi_plus, chi_minus, phi_plus, phi_minus)))


def circle_maps(center: complex, radius: float) -> ConformalMaps:
    center, radius = complex(center), float(radius)
    forward = lambda z: (np.asarray(z, dtype=complex) - center) / radius  # noqa: E731
    backward = lambda w: center + radius * np.asarray(w, dtype=complex)  # noqa: E731
    return ConformalMaps(forward, forward, backward, backward)


def mobius_maps(c: complex) -> ConformalMaps:
    """Disk automorphism w = (z - c)/(1 - conj(c) z) and its inverse, |c| < 1."""
    c = complex(c)
    if not abs(c) < 1:
        raise TransportError("Mobius parameter must satisfy |c| < 1")
    forward = lambda z: (np.asarray(z, dtype=complex) - c) / (1 - np.conj(c) * np.asarray(z, dtype=complex))  # noqa: E731
    backward = lambda w: (np.asarray(w, dtype=complex) + c) / (1 + np.conj(c) * np.asarray(w, dtype=complex))  # noqa: E731
    return ConformalMaps(forward, forward, backward, backward)


def check_maps(contour: Contour, maps: ConformalMaps, tol: float = 1e-10) -> dict:
    """Round trips and boundary correspondence at 32 nodes, plus one interior sanity point."""
    t = contour.gamma[:: max(1, contour.N // 32)][:32]
    scale = 1.0 + np.abs(t)
    with np.errstate(all="ignore"):
        wp, wm = maps.chi_plus(t), maps.chi_minus(t)
        checks = {
            "round_trip_plus": float(np.max(np.abs(maps.phi_plus(wp) - t) / scale)),
            "round_trip_minus": float(np.max(np.abs(maps.phi_minus(wm) - t) / scale)),
            "on_unit_circle": float(max(np.max(np.abs(np.abs(wp) - 1)), np.max(np.abs(np.abs(wm) - 1)))),
            "sides_agree": float(np.max(np.abs(wp - wm))),
        }
        inner = complex(maps.chi_plus(np.array([contour.centroid]))[0])
    bad = {k: v for k, v in checks.items() if not v < tol}
    if bad or not abs(inner) < 1:
        raise TransportError(f"conformal maps fail consistency checks: {bad or {'interior_image': abs(inner)}}")
    return checks


@dataclass(frozen=True, eq=False)
class TransportedSectional(SectionalFunction):
    """f(z) = inner(chi+-(z)) for an inner sectional function on the unit circle."""

    contour: Contour
    inner: SectionalFunction
    maps: ConformalMaps

    @cached_property
    def _boundary(self):
        t = self.contour.gamma
        th_p = np.angle(self.maps.chi_plus(t))
        th_m = np.angle(self.maps.chi_minus(t))
        return self.inner.boundary_at(th_p, "+"), self.inner.boundary_at(th_m, "-")

    @property
    def plus(self):
        return self._boundary[0]

    @property
    def minus(self):
        return self._boundary[1]

    @cached_property
    def at_infinity(self) -> complex:
        big = np.array([1e15 * (1.0 + self.contour.circumradius)], dtype=complex)
        with np.errstate(all="ignore"):
            w = complex(self.maps.chi_minus(big)[0])
        if not np.isfinite(w) or abs(w) > 1e8:
            return self.inner.at_infinity
        return complex(self.inner.evaluate_outside(np.array([w]))[0])

    def evaluate_inside(self, z):
        return self.inner.evaluate_inside(np.asarray(self.maps.chi_plus(z), dtype=complex))

    def evaluate_outside(self, z):
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.asarray(self.maps.chi_minus(z), dtype=complex)
        out = np.empty(w.shape, dtype=complex)
        far = ~np.isfinite(w) | (np.abs(w) > 1e12)
        out[far] = self.inner.at_infinity
        if np.any(~far):
            out[~far] = self.inner.evaluate_outside(w[~far])
        return out


def conformal_transport(p: CliffordRbvp, maps: ConformalMaps):
    """Constant-coefficient problem on the unit circle plus a back-map for its solutions."""
    check_maps(p.contour, maps)
    for name in ("g0", "g1"):
        if getattr(p, name).func is None:
            raise TransportError(f"data {name} must be an expression or callable to be transported")
    unit = circle(0.0, 1.0, p.contour.N)
    a, b = complex(np.mean(p.G0.values)), complex(np.mean(p.G1.values))
    f0, f1 = p.g0.func, p.g1.func
    moved = CliffordRbvp.from_hat(unit, a, b, lambda w: f0(maps.phi_minus(w)), lambda w: f1(maps.phi_minus(w)),
                                  p.vanish_at_infinity)

    def back(sol: CliffordSolution) -> CliffordSolution:
        lift = lambda f: None if f is None else TransportedSectional(p.contour, f, maps)  # noqa: E731
        basis = tuple(BasisDirection(lift(d.upsilon0), lift(d.upsilon1), d.conjugate_upsilon0, d.label)
                      for d in sol.basis)
        report = dict(sol.report, transported=True)
        return CliffordSolution(p.contour, sol.regime, sol.status, lift(sol.upsilon0), lift(sol.upsilon1),
                                basis, sol.index, report, sol.vanish_at_infinity)

    return moved, back


def solve(p: CliffordRbvp, *, family_count: int = 3, family_mode: str = "paired",
          maps: Optional[ConformalMaps] = None, z0: Optional[complex] = None,
          rtol: float = complex_rbvp.CONDITION_RTOL) -> CliffordSolution:
    """Reduce, dispatch on the regime and solve."""
    r = reduce(p)
    if r.regime == NULL_ODD:
        return solve_null_odd(r, p.vanish_at_infinity, z0, rtol)
    if r.regime == GENERAL:
        raise ReductionError("variable coefficient with nonzero odd part: not covered by this theory")
    if not p.vanish_at_infinity:
        warnings.warn("constant-coefficient solver returns the solution normalized to vanish at infinity",
                      stacklevel=2)
    a, b = r.constants
    c = p.contour
    if maps is None and c.is_unit_circle(1e-10):
        return solve_constant(a, b, p.g0, p.g1, family_count, family_mode)
    if maps is None:
        if c.kind != "circle":
            raise ReductionError("constant coefficients off the unit circle need conformal maps")
        cx, cy = c.params["center"]
        maps = circle_maps(complex(cx, cy), c.params["radius"])
    moved, back = conformal_transport(p, maps)
    return back(solve_constant(a, b, moved.g0, moved.g1, family_count, family_mode))


__all__ = [
    "BasisDirection",
    "CONSTANT",
    "CliffordRbvp",
    "CliffordSolution",
    "ConformalMaps",
    "GENERAL",
    "NULL_ODD",
    "ReducedSystem",
    "TransportedSectional",
    "check_maps",
    "circle_maps",
    "conformal_transport",
    "inversion_transport",
    "mobius_maps",
    "reduce",
    "solve",
    "solve_constant",
    "solve_null_odd",
]
