"""Discretized smooth closed curves with periodic trapezoidal quadrature."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .errors import ContourError, WindingError

INSIDE = "inside"
OUTSIDE = "outside"
NEAR_BOUNDARY = "near_boundary"

_WINDING_TOL = 0.05
_UPSAMPLE = 4


@dataclass(frozen=True)
class PointLocation:
    tag: str
    distance_estimate: float


@dataclass(frozen=True, eq=False)
class Contour:
    """Closed, positively oriented curve sampled at N uniform parameters.

    ``gamma`` holds node positions and ``dgamma`` the parametric derivative.
    ``kind``/``params`` record how the curve was built so it can be serialized
    and so circle-specific shortcuts (conformal maps, inversion) can check it.
    """

    theta: np.ndarray
    gamma: np.ndarray
    dgamma: np.ndarray
    kind: str = "samples"
    params: dict = field(default_factory=dict)
    band_factor: float = 1e-3

    @property
    def N(self) -> int:
        return len(self.gamma)

    @property
    def orientation(self) -> int:
        return 1

    @cached_property
    def weights(self) -> np.ndarray:
        """Complex trapezoid weights so that sum(w*f) ~ closed integral of f(tau) dtau."""
        return self.dgamma * (2 * np.pi / self.N)

    @cached_property
    def speed(self) -> np.ndarray:
        return np.abs(self.dgamma)

    @cached_property
    def length(self) -> float:
        return float(np.sum(self.speed) * 2 * np.pi / self.N)

    @cached_property
    def normal(self) -> np.ndarray:
        """Outward unit normal as a complex number."""
        return -1j * self.dgamma / self.speed

    @cached_property
    def centroid(self) -> complex:
        return complex(np.mean(self.gamma))

    @cached_property
    def diameter(self) -> float:
        g = self.gamma
        best = 0.0
        for start in range(0, len(g), 256):
            best = max(best, float(np.max(np.abs(g[start:start + 256, None] - g[None, :]))))
        return best

    @property
    def band(self) -> float:
        """Half-width of the refusal band around the curve."""
        return self.band_factor * self.diameter

    @cached_property
    def dense(self) -> np.ndarray:
        """Curve resampled at _UPSAMPLE*N points by trigonometric interpolation."""
        return fourier_resample(self.gamma, _UPSAMPLE * self.N)

    @cached_property
    def pv_kernel(self) -> tuple[np.ndarray, np.ndarray]:
        """Off-diagonal matrix w_k / (tau_k - t_j) and its row sums."""
        diff = self.gamma[None, :] - self.gamma[:, None]
        np.fill_diagonal(diff, 1.0)
        K = self.weights[None, :] / diff
        np.fill_diagonal(K, 0.0)
        return K, K.sum(axis=1)

    @cached_property
    def circumradius(self) -> float:
        return float(np.max(np.abs(self.gamma - self.centroid)))

    def is_unit_circle(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(np.abs(self.gamma) - 1.0)) < tol and abs(self.centroid) < 1e-9)

    def integrate(self, f) -> complex:
        return integrate(self, f)

    def evaluate(self, func) -> np.ndarray:
        """Sample a callable of the boundary point at the nodes."""
        return np.asarray(func(self.gamma), dtype=complex) * np.ones(self.N)

    def locate(self, z):
        return locate(z, self)

    def to_spec(self) -> dict:
        out = {"kind": self.kind, **self.params, "nodes": self.N}
        return out


def _check_nodes(N: int) -> None:
    if N < 16 or N & (N - 1):
        raise ContourError(f"node count must be a power of two >= 16, got {N}")


def _build(theta, gamma, dgamma, kind, params) -> Contour:
    speed = np.abs(dgamma)
    if np.any(speed < 1e-8 * np.max(speed)):
        raise ContourError("degenerate parametrization: derivative vanishes at a node")
    # signed area via the shoelace form of (1/2) Im closed-integral conj(z) dz
    area = 0.5 * np.imag(np.sum(np.conj(gamma) * dgamma)) * 2 * np.pi / len(gamma)
    if area < 0:
        warnings.warn("negatively oriented contour reversed to positive orientation", stacklevel=3)
        idx = (-np.arange(len(gamma))) % len(gamma)
        gamma, dgamma = gamma[idx], -dgamma[idx]
    return Contour(theta=theta, gamma=gamma, dgamma=dgamma, kind=kind, params=params)


def circle(center: complex = 0.0, radius: float = 1.0, N: int = 512) -> Contour:
    if not radius > 0:
        raise ContourError(f"radius must be positive, got {radius}")
    _check_nodes(N)
    theta = 2 * np.pi * np.arange(N) / N
    e = np.exp(1j * theta)
    center = complex(center)
    return _build(theta, center + radius * e, 1j * radius * e, "circle",
                  {"center": [center.real, center.imag], "radius": float(radius)})


def from_fourier(coeffs: Mapping[int, complex], N: int = 512) -> Contour:
    """Curve gamma(theta) = sum_m c_m exp(i m theta)."""
    _check_nodes(N)
    theta = 2 * np.pi * np.arange(N) / N
    gamma = np.zeros(N, dtype=complex)
    dgamma = np.zeros(N, dtype=complex)
    for m, c in coeffs.items():
        m = int(m)
        e = np.exp(1j * m * theta)
        gamma += complex(c) * e
        dgamma += 1j * m * complex(c) * e
    params = {"modes": {str(int(m)): [complex(c).real, complex(c).imag] for m, c in coeffs.items()}}
    return _build(theta, gamma, dgamma, "fourier", params)


def from_spec(spec: Mapping, N: int | None = None) -> Contour:
    """Build a contour from its config-file description."""
    kind = spec.get("kind")
    nodes = int(N if N is not None else spec.get("nodes", 512))
    if kind == "circle":
        cx, cy = spec.get("center", [0.0, 0.0])
        return circle(complex(cx, cy), float(spec["radius"]), nodes)
    if kind == "fourier":
        modes = {int(m): complex(v[0], v[1]) for m, v in spec["modes"].items()}
        return from_fourier(modes, nodes)
    raise ContourError(f"unknown contour kind {kind!r}")


def fourier_coefficients(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (modes, coefficients) of the trigonometric interpolant, Nyquist split evenly."""
    N = len(samples)
    c = np.fft.fft(samples) / N
    m = np.fft.fftfreq(N, d=1.0 / N)
    if N % 2 == 0:
        nyq = N // 2
        c = np.concatenate([c, [c[nyq] / 2]])
        c[nyq] /= 2
        m = np.concatenate([m, [nyq]])
    return m, c


def fourier_eval(samples: np.ndarray, theta) -> np.ndarray:
    """Evaluate the trigonometric interpolant of periodic samples at arbitrary angles."""
    m, c = fourier_coefficients(np.asarray(samples, dtype=complex))
    theta = np.asarray(theta, dtype=float)
    return np.exp(1j * np.multiply.outer(theta, m)) @ c


def fourier_resample(samples: np.ndarray, M: int) -> np.ndarray:
    return fourier_eval(samples, 2 * np.pi * np.arange(M) / M)


def spectral_derivative(samples: np.ndarray) -> np.ndarray:
    """d/dtheta of periodic samples via the discrete Fourier representation."""
    N = len(samples)
    k = np.fft.fftfreq(N, d=1.0 / N)
    if N % 2 == 0:
        k[N // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(samples))


def integrate(c: Contour, f) -> complex:
    """Periodic trapezoid approximation of the closed integral of f(tau) dtau."""
    f = np.asarray(f, dtype=complex)
    return complex(np.sum(f * c.weights))


def winding_number_and_residual(f) -> tuple[int, float]:
    """Winding of nonvanishing periodic samples about 0, with its rounding residual.

    Phase increments between consecutive samples are summed; any increment of
    at least pi/2 means the samples do not resolve the phase and raises.
    """
    f = np.asarray(f, dtype=complex)
    if np.any(f == 0) or np.any(~np.isfinite(f)):
        raise WindingError("samples vanish or are not finite; winding undefined")
    steps = np.angle(np.roll(f, -1) / f)
    if np.max(np.abs(steps)) >= np.pi / 2:
        raise WindingError("phase step >= pi/2 between nodes; increase the node count")
    total = float(np.sum(steps)) / (2 * np.pi)
    n = int(round(total))
    residual = abs(total - n)
    if residual > _WINDING_TOL:
        raise WindingError(f"winding residual {residual:.3g} too large; increase the node count")
    return n, residual


def winding_number(f) -> int:
    return winding_number_and_residual(f)[0]


def _polygon_winding(poly: np.ndarray, z: np.ndarray) -> np.ndarray:
    # exact winding of the closed polygon about each z; each edge angle is in (-pi, pi)
    out = np.zeros(z.shape, dtype=float)
    for start in range(0, z.size, 512):
        zz = z.ravel()[start:start + 512, None]
        d = poly[None, :] - zz
        out.ravel()[start:start + 512] = np.sum(np.angle(np.roll(d, -1, axis=1) / d), axis=1)
    return np.rint(out / (2 * np.pi)).astype(int)


def distance_estimate(c: Contour, z) -> np.ndarray:
    """Distance to the polygon through the upsampled curve (segments, not just vertices)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    a = c.dense
    edge = np.roll(a, -1) - a
    edge_len2 = np.abs(edge) ** 2
    flat = z.ravel()
    res = np.empty(flat.shape, dtype=float)
    for start in range(0, flat.size, 256):
        rel = flat[start:start + 256, None] - a[None, :]
        s = np.clip((rel * np.conj(edge)).real / edge_len2, 0.0, 1.0)
        res[start:start + 256] = np.min(np.abs(rel - s * edge), axis=1)
    return res.reshape(z.shape)


def classify(c: Contour, z) -> np.ndarray:
    """Vectorized region tags ('inside', 'outside', 'near_boundary') for points z."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    dist = distance_estimate(c, z)
    tags = np.where(_polygon_winding(c.dense, z) == 1, INSIDE, OUTSIDE).astype(object)
    tags[dist < c.band] = NEAR_BOUNDARY
    return tags


def locate(z: complex, c: Contour) -> PointLocation:
    tag = classify(c, [z])[0]
    return PointLocation(str(tag), float(distance_estimate(c, [z])[0]))
