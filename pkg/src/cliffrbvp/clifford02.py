"""Arithmetic in the Clifford algebra R(0,2) and its identifications with C.

Elements are stored as four real coefficients on the basis (1, e1, e2, e12).
Coefficients may be Python floats or numpy arrays of a common shape, in which
case every operation acts elementwise; this is how boundary samples and field
grids are pushed through the algebra without Python loops.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# (i, j) -> (sign, k) meaning basis[i] * basis[j] = sign * basis[k]
# basis order: 0 -> 1, 1 -> e1, 2 -> e2, 3 -> e12
MUL_TABLE: dict[tuple[int, int], tuple[int, int]] = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}

BASIS_NAMES = ("1", "e1", "e2", "e12")


class DomainError(ValueError):
    """Raised when an identification map is applied outside its domain."""


@dataclass(frozen=True, eq=False)
class CliffordElement:
    c0: float | np.ndarray = 0.0
    c1: float | np.ndarray = 0.0
    c2: float | np.ndarray = 0.0
    c12: float | np.ndarray = 0.0

    @classmethod
    def from_coeffs(cls, coeffs) -> CliffordElement:
        """Build from a sequence or an array whose last axis has length 4."""
        arr = np.asarray(coeffs, dtype=float)
        return cls(arr[..., 0], arr[..., 1], arr[..., 2], arr[..., 3])

    def coeffs(self) -> tuple:
        return (self.c0, self.c1, self.c2, self.c12)

    def as_array(self) -> np.ndarray:
        """Coefficients stacked on a trailing axis of length 4."""
        return np.stack(np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in self.coeffs())), axis=-1)

    def __add__(self, other):
        other = _coerce(other)
        return CliffordElement(*(a + b for a, b in zip(self.coeffs(), other.coeffs())))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return CliffordElement(*(a - b for a, b in zip(self.coeffs(), other.coeffs())))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return CliffordElement(*(-a for a in self.coeffs()))

    def __mul__(self, other):
        if isinstance(other, (CliffordElement, EvenElement)):
            return mul(self, _coerce(other))
        return CliffordElement(*(a * other for a in self.coeffs()))

    def __rmul__(self, other):
        if isinstance(other, EvenElement):
            return mul(other.to_clifford(), self)
        return CliffordElement(*(other * a for a in self.coeffs()))

    def __truediv__(self, other):
        if isinstance(other, (CliffordElement, EvenElement)):
            return mul(self, inverse(_coerce(other)))
        return CliffordElement(*(a / other for a in self.coeffs()))

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("only integer powers are defined")
        base = self if n >= 0 else inverse(self)
        out = _coerce(1.0)
        for _ in range(abs(int(n))):
            out = mul(out, base)
        return out

    def norm(self):
        return np.sqrt(self.c0**2 + self.c1**2 + self.c2**2 + self.c12**2)

    def __repr__(self) -> str:
        return f"CliffordElement(c0={self.c0!r}, c1={self.c1!r}, c2={self.c2!r}, c12={self.c12!r})"


@dataclass(frozen=True, eq=False)
class EvenElement:
    """Element s + p*e12 of the even subalgebra."""

    s: float | np.ndarray = 0.0
    p: float | np.ndarray = 0.0

    def to_clifford(self) -> CliffordElement:
        zero = 0.0 * np.asarray(self.s) if np.ndim(self.s) else 0.0
        return CliffordElement(self.s, zero, zero, self.p)

    def __mul__(self, other):
        if isinstance(other, EvenElement):
            # closed: (s + p e12)(s' + p' e12) with e12^2 = -1
            return EvenElement(self.s * other.s - self.p * other.p, self.s * other.p + self.p * other.s)
        if isinstance(other, CliffordElement):
            return mul(self.to_clifford(), other)
        return EvenElement(self.s * other, self.p * other)

    def __add__(self, other):
        return EvenElement(self.s + other.s, self.p + other.p)

    def __sub__(self, other):
        return EvenElement(self.s - other.s, self.p - other.p)


E0 = CliffordElement(1.0, 0.0, 0.0, 0.0)
E1 = CliffordElement(0.0, 1.0, 0.0, 0.0)
E2 = CliffordElement(0.0, 0.0, 1.0, 0.0)
E12 = CliffordElement(0.0, 0.0, 0.0, 1.0)


def _coerce(x) -> CliffordElement:
    if isinstance(x, CliffordElement):
        return x
    if isinstance(x, EvenElement):
        return x.to_clifford()
    if np.iscomplexobj(x):
        raise TypeError("complex numbers must go through alpha/beta_inv explicitly")
    return CliffordElement(x, 0.0, 0.0, 0.0)


def mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Geometric product via the signed permutation table."""
    ca, cb = a.coeffs(), b.coeffs()
    out = [0.0, 0.0, 0.0, 0.0]
    for (i, j), (sign, k) in MUL_TABLE.items():
        out[k] = out[k] + sign * (ca[i] * cb[j])
    return CliffordElement(*out)


def conj(a: CliffordElement) -> CliffordElement:
    """Clifford conjugation: reverses products and flips each generator."""
    return CliffordElement(a.c0, -a.c1, -a.c2, -a.c12)


def norm2(a: CliffordElement):
    # a * conj(a) is the scalar sum of squares (R(0,2) is the quaternions)
    return a.c0**2 + a.c1**2 + a.c2**2 + a.c12**2


def inverse(a: CliffordElement) -> CliffordElement:
    n2 = norm2(a)
    if np.any(np.asarray(n2) == 0.0):
        raise ZeroDivisionError("zero element of R(0,2) has no inverse")
    return conj(a) / n2


def even_odd_split(a: CliffordElement) -> tuple[EvenElement, EvenElement]:
    """Return (a0, a1) with a = a0 + e1*a1 and a0, a1 even.

    e1*(s + p e12) = s e1 - p e2, so a1 = c1 - c2 e12.
    """
    return EvenElement(a.c0, a.c12), EvenElement(a.c1, -a.c2)


def rebuild(a0: EvenElement, a1: EvenElement) -> CliffordElement:
    """Inverse of even_odd_split; only sign flips, hence exact."""
    return CliffordElement(a0.s, a1.s, -a1.p, a0.p)


def alpha(z) -> CliffordElement:
    """x1 + i x2  ->  x1 e1 + x2 e2."""
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    zero = 0.0 * np.real(z)
    return CliffordElement(zero, np.real(z), np.imag(z), zero)


def alpha_inv(x: CliffordElement, atol: float = 0.0):
    if np.any(np.abs(np.asarray(x.c0)) > atol) or np.any(np.abs(np.asarray(x.c12)) > atol):
        raise DomainError("alpha_inv expects a pure vector (zero scalar and e12 parts)")
    return np.asarray(x.c1) + 1j * np.asarray(x.c2) if np.ndim(x.c1) else complex(x.c1, x.c2)


def beta(a: EvenElement):
    """s + p e12  ->  s + i p."""
    if np.ndim(a.s) or np.ndim(a.p):
        return np.asarray(a.s) + 1j * np.asarray(a.p)
    return complex(a.s, a.p)


def beta_inv(z) -> EvenElement:
    if np.ndim(z):
        z = np.asarray(z, dtype=complex)
        return EvenElement(z.real, z.imag)
    z = complex(z)
    return EvenElement(z.real, z.imag)


def assemble(even_hat, odd_hat) -> CliffordElement:
    """beta_inv(even_hat) + e1 * beta_inv(odd_hat)."""
    return rebuild(beta_inv(even_hat), beta_inv(odd_hat))


def hat_transform(F: CliffordElement):
    """Complex pair (F0^, F1^) with F = beta_inv(F0^) + e1 beta_inv(F1^)."""
    f0, f1 = even_odd_split(F)
    return beta(f0), beta(f1)


def star(a: EvenElement) -> EvenElement:
    """a* = -e1 a e1; for even a this is s - p e12."""
    out = -(E1 * a.to_clifford() * E1)
    star_even, _ = even_odd_split(out)
    return star_even


def hat_transform_with_star(F: CliffordElement):
    """Hat pair plus the starred pair (G0*^, G1*^) used in the coupled system.

    In R(0,2) the starred hat equals the complex conjugate of the hat; that
    identity is asserted here instead of being assumed downstream.
    """
    f0, f1 = even_odd_split(F)
    h0, h1 = beta(f0), beta(f1)
    s0, s1 = beta(star(f0)), beta(star(f1))
    if __debug__:
        assert np.allclose(s0, np.conj(h0), rtol=0, atol=1e-12 * (1 + np.max(np.abs(h0))))
        assert np.allclose(s1, np.conj(h1), rtol=0, atol=1e-12 * (1 + np.max(np.abs(h1))))
    return h0, h1, s0, s1
