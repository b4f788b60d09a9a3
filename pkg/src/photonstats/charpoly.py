"""Characteristic-polynomial route to low-order counting cumulants.

The slow eigenvalue of a dressed Liouvillian is the root of its
characteristic polynomial that vanishes at zero counting fields.  Truncating
the polynomial at first or second order in that root gives closed-form
expressions whose counting-field derivatives yield the flux and the noise
without any eigenvalue tracking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numdiff import StencilResult, central_derivative

__all__ = [
    "CharPolyCoeffs",
    "CoefficientDerivatives",
    "DegenerateRootError",
    "char_poly",
    "truncated_root",
    "coefficient_derivatives",
    "first_cumulant_rate",
    "second_cumulant_rate",
]

_MAX_DIM = 64
_A1_THRESHOLD = 1e-12


class DegenerateRootError(ValueError):
    """The stationary root is not simple; use the perturbation module."""


@dataclass(frozen=True)
class CharPolyCoeffs:
    """Monic characteristic polynomial, coefficients ascending in power.

    ``coefficients[j]`` multiplies z**j; ``coefficients[-1] == 1``.
    """

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coefficients, dtype=complex)
        object.__setattr__(self, "coefficients", c)
        if abs(c[-1] - 1.0) > 1e-12:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z: complex) -> complex:
        return complex(np.polyval(self.coefficients[::-1], z))

    def roots(self) -> np.ndarray:
        return np.roots(self.coefficients[::-1])


def char_poly(a: np.ndarray) -> CharPolyCoeffs:
    """Monic characteristic polynomial of a dense matrix (dimension <= 64).

    Uses the Faddeev-LeVerrier trace recursion on a spectral-norm-rescaled
    copy; the rescaling is undone on the coefficients, guarding against
    overflow for ill-scaled generators.
    """
    a = np.asarray(a, dtype=complex)
    d = a.shape[0]
    if a.shape != (d, d):
        raise ValueError("matrix must be square")
    if d > _MAX_DIM:
        raise ValueError(f"dimension {d} exceeds supported maximum {_MAX_DIM}")
    scale = float(np.linalg.norm(a, 2))
    if scale == 0.0:
        coeffs = np.zeros(d + 1, dtype=complex)
        coeffs[-1] = 1.0
        return CharPolyCoeffs(coeffs)
    b = a / scale
    coeffs = np.zeros(d + 1, dtype=complex)
    coeffs[d] = 1.0
    m = np.eye(d, dtype=complex)
    for k in range(1, d + 1):
        bm = b @ m
        c = -np.trace(bm) / k
        coeffs[d - k] = c
        m = bm + c * np.eye(d)
    # undo the rescaling: a_j(A) = a_j(A/s) * s^(d-j)
    powers = scale ** np.arange(d, -1, -1, dtype=float)
    return CharPolyCoeffs(coeffs * powers)


def truncated_root(coeffs: CharPolyCoeffs, order: int) -> complex:
    """Root of the order-R truncated polynomial continuous with 0 at a0=0.

    R=1: lambda = -a0/a1.  R=2: the quadratic root of a2 z^2 + a1 z + a0
    on the branch that vanishes with a0, evaluated in the numerically
    stable product form.
    """
    a = coeffs.coefficients
    if abs(a[1]) < _A1_THRESHOLD * max(1.0, float(np.max(np.abs(a)))):
        raise DegenerateRootError(
            "linear coefficient a1 vanishes: stationary root is not simple; "
            "use the perturbation module instead"
        )
    if order == 1:
        return complex(-a[0] / a[1])
    if order == 2:
        a0, a1, a2 = a[0], a[1], a[2]
        disc = np.sqrt(a1 * a1 - 4.0 * a0 * a2)
        # align the square root with a1 so the sum below never cancels
        if (np.conj(a1) * disc).real < 0.0:
            disc = -disc
        q = -0.5 * (a1 + disc)
        # root pair is q/a2 and a0/q; the latter -> -a0/a1 as a0 -> 0
        return complex(a0 / q)
    raise ValueError("truncation order must be 1 or 2")


def discriminant_diagnostic(coeffs: CharPolyCoeffs) -> float:
    """|a1^2 - 4 a0 a2| relative to |a1|^2; near zero flags branch ambiguity."""
    a = coeffs.coefficients
    if abs(a[1]) == 0.0:
        return 0.0
    return float(abs(a[1] ** 2 - 4.0 * a[0] * a[2]) / abs(a[1]) ** 2)


@dataclass(frozen=True)
class CoefficientDerivatives:
    """Field-derivatives at zero of the two lowest coefficients.

    ``rel_error`` is the relative weight of Fourier harmonics beyond the
    trigonometric degree of the coefficients, a pure roundoff/aliasing
    diagnostic.
    """

    da0: complex
    d2a0: complex
    da1: complex
    at_zero: CharPolyCoeffs
    rel_error: float
    n_samples: int


def coefficient_derivatives(
    matrix_fn: Callable[[float], np.ndarray],
    n: int | None = None,
) -> CoefficientDerivatives:
    """Exact coefficient derivatives by trigonometric interpolation.

    The characteristic-polynomial coefficients of a counting-field-dressed
    generator are trigonometric polynomials in the field, of degree at most
    the matrix dimension (each matrix entry carries at most one e^{+-i x}
    factor).  Sampling one full period and differentiating the Fourier
    series is therefore exact up to roundoff, with no step-size trade-off.
    a0 is evaluated as the determinant, which is far more accurate than the
    trace recursion near its zero at vanishing field.
    """
    m0 = np.asarray(matrix_fn(0.0), dtype=complex)
    d = m0.shape[0]
    if n is None:
        n = 1 << (2 * d + 1).bit_length()
    sign = -1.0 if d % 2 else 1.0
    a0 = np.empty(n, dtype=complex)
    a1 = np.empty(n, dtype=complex)
    at_zero = char_poly(m0)
    for j in range(n):
        m = m0 if j == 0 else np.asarray(matrix_fn(2.0 * np.pi * j / n), dtype=complex)
        a0[j] = sign * np.linalg.det(m)
        a1[j] = (at_zero if j == 0 else char_poly(m)).coefficients[1]
    c0 = np.fft.fft(a0) / n
    c1 = np.fft.fft(a1) / n
    k = np.fft.fftfreq(n, 1.0 / n)
    k[n // 2] = 0.0  # Nyquist bin carries no derivative information
    da0 = complex(np.sum(1j * k * c0))
    d2a0 = complex(np.sum(-(k**2) * c0))
    da1 = complex(np.sum(1j * k * c1))
    hi = np.abs(k) > d
    rel = 0.0
    for c in (c0, c1):
        scale = float(np.abs(c).max())
        if scale > 0.0 and np.any(hi):
            rel = max(rel, float(np.abs(c[hi]).max()) / scale)
    return CoefficientDerivatives(da0, d2a0, da1, at_zero, rel, n)


def first_cumulant_rate(
    coeff_fn: Callable[[float], CharPolyCoeffs],
    h: float = 1e-3,
) -> tuple[float, StencilResult]:
    """Flux from the first-order truncated root.

    ``coeff_fn(x)`` must return the coefficients with the selected counting
    field set to x and all others zero.  The rate is
    -Re[i (da0/dchi) / a1] at zero fields (the derivative with respect to
    -i chi of the root -a0/a1, using a0(0)=0).
    """
    at_zero = coeff_fn(0.0)
    a = at_zero.coefficients
    if abs(a[1]) < _A1_THRESHOLD * max(1.0, float(np.max(np.abs(a)))):
        raise DegenerateRootError(
            "a1(0) vanishes: degenerate stationary root; "
            "use the perturbation module instead"
        )
    da0 = central_derivative(lambda x: coeff_fn(x).coefficients[0], 1, h)
    # I = Re[i dlambda/dchi] with dlambda/dchi = -a0'/a1 at a0(0)=0
    value = float((-1j * da0.value / a[1]).real)
    return value, da0


def second_cumulant_rate(
    coeff_fn: Callable[[float], CharPolyCoeffs],
    h: float = 1e-3,
) -> tuple[float, StencilResult]:
    """Noise rate Re[-d^2 lambda/dchi^2] by implicit differentiation.

    Differentiating sum_j a_j(chi) lambda^j = 0 twice at chi = 0, where
    lambda(0) = 0, gives a0'' + 2 a1' lambda' + a1 lambda'' + 2 a2 lambda'^2
    = 0 with lambda' = -a0'/a1.  Only the coefficients are stenciled; they
    are entire in the counting field, so no step-versus-gap trade-off and no
    truncation-order error arise.
    """
    at_zero = coeff_fn(0.0)
    # raises DegenerateRootError at zero fields if a1 vanishes
    truncated_root(at_zero, 2)
    a1 = at_zero.coefficients[1]
    a2 = at_zero.coefficients[2]
    da0 = central_derivative(lambda x: coeff_fn(x).coefficients[0], 1, h)
    da1 = central_derivative(lambda x: coeff_fn(x).coefficients[1], 1, h)
    d2a0 = central_derivative(lambda x: coeff_fn(x).coefficients[0], 2, h)
    dlam = -da0.value / a1
    d2lam = -(d2a0.value + 2.0 * da1.value * dlam + 2.0 * a2 * dlam * dlam) / a1
    worst = max((da0, da1, d2a0), key=lambda s: s.rel_error)
    return float(-d2lam.real), worst
