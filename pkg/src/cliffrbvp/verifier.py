"""Independent checks on computed solutions: Dirac residual, boundary residual, decay."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .clifford02 import E1, E2, CliffordElement
from .contour import INSIDE, OUTSIDE, Contour, classify, distance_estimate
from .errors import NearBoundaryError

BOUNDARY_TOL = 1e-6
DIRAC_TOL = 1e-5
DECAY_TOL = 1e-2
DEFAULT_H = 1e-3
DECAY_RADII = (1e3, 1e4)

Field = Callable[[np.ndarray], CliffordElement]


def dirac_image(phi: Field, z: np.ndarray, h: float) -> CliffordElement:
    """Central-difference e1 d/dx1 Phi + e2 d/dx2 Phi at complex points z."""
    z = np.asarray(z, dtype=complex)
    d1 = (phi(z + h) - phi(z - h)) / (2 * h)
    d2 = (phi(z + 1j * h) - phi(z - 1j * h)) / (2 * h)
    return E1 * d1 + E2 * d2


def dirac_residual(phi: Field, points, h: float = DEFAULT_H, contour: Optional[Contour] = None) -> float:
    """Max R(0,2) norm of the discrete Dirac image over the points.

    With a contour, every stencil must stay 2h clear of it and of the refusal band.
    """
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    if contour is not None:
        clearance = distance_estimate(contour, z)
        if np.any(clearance < 2 * h) or np.any(clearance < contour.band + h):
            raise NearBoundaryError("Dirac stencil reaches into the refusal band")
    return float(np.max(dirac_image(phi, z, h).norm()))


def boundary_residual(sol, p, constants=()) -> float:
    """Max node-wise norm of Phi+ - G Phi- - g with Phi+- from Plemelj boundary values."""
    plus = sol.boundary_phi("+", constants)
    minus = sol.boundary_phi("-", constants)
    res = plus - p.G_samples() * minus - p.g_samples()
    return float(np.max(res.norm()))


def decay_check(phi: Field, radii: Sequence[float] = DECAY_RADII, directions: int = 16,
                center: complex = 0.0) -> list[tuple[float, float]]:
    angles = 2 * np.pi * np.arange(directions) / directions
    out = []
    for r in radii:
        z = center + r * np.exp(1j * angles)
        out.append((float(r), float(np.max(phi(z).norm()))))
    return out


def probe_points(contour: Contour, region: str, per_circle: int = 16,
                 scales: Optional[Sequence[float]] = None) -> np.ndarray:
    """Points on two scaled copies of the contour about its centroid, filtered by region."""
    if scales is None:
        scales = (0.3, 0.55) if region == INSIDE else (1.6, 2.4)
    c0 = contour.centroid
    idx = (np.arange(per_circle) * contour.N) // per_circle
    # small rotation keeps probes off symmetry axes, where closed forms tend to have poles
    spokes = (contour.gamma[idx] - c0) * np.exp(0.05j)
    pts = np.concatenate([c0 + s * spokes for s in scales])
    return pts[classify(contour, pts) == region]


@dataclass
class VerificationReport:
    dirac_residual_max: float
    dirac_h: float
    dirac_points: int
    boundary_residual_max: float
    decay_values: list
    thresholds: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)

    @classmethod
    def build(cls, dirac: float, h: float, npts: int, boundary: float, decay: list,
              thresholds: Optional[dict] = None, check_decay: bool = True) -> VerificationReport:
        th = {"boundary": BOUNDARY_TOL, "dirac": DIRAC_TOL, "decay": DECAY_TOL, **(thresholds or {})}
        passed = {
            "boundary": boundary < th["boundary"],
            "dirac": dirac < th["dirac"],
            "decay": (decay[-1][1] < th["decay"]) if (check_decay and decay) else None,
        }
        return cls(dirac, h, npts, boundary, decay, th, passed)

    @property
    def ok(self) -> bool:
        return all(v for v in self.passed.values() if v is not None)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["decay_values"] = [list(v) for v in self.decay_values]
        return d


def verify(sol, p, constants=(), h: float = DEFAULT_H, thresholds: Optional[dict] = None) -> VerificationReport:
    """Run all three checks on a solved problem with the given free constants."""
    c = sol.contour
    phi = lambda z: sol.evaluate_phi(z, constants)  # noqa: E731
    pts = np.concatenate([probe_points(c, INSIDE), probe_points(c, OUTSIDE)])
    clearance = distance_estimate(c, pts)
    pts = pts[(clearance >= 2 * h) & (clearance >= c.band + h)]
    dirac = dirac_residual(phi, pts, h, c)
    boundary = boundary_residual(sol, p, constants)
    reach = c.circumradius + abs(c.centroid)
    radii = [r if r > 2 * reach else 10 * r * reach for r in DECAY_RADII]
    decay = decay_check(phi, radii)
    return VerificationReport.build(dirac, h, len(pts), boundary, decay, thresholds, sol.vanish_at_infinity)


__all__ = [
    "VerificationReport",
    "boundary_residual",
    "decay_check",
    "dirac_image",
    "dirac_residual",
    "probe_points",
    "verify",
]
