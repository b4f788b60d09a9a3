"""Dense complex linear-algebra substrate for open-system photon counting.

Provides vectorization of (generalized) density matrices, Lindblad
superoperator assembly, non-Hermitian spectral decomposition with
biorthonormal left/right eigenvectors, propagation, and one-period
(monodromy) propagators for time-periodic generators.

All matrices are small (D <= ~100) and dense; everything is double
precision complex.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

__all__ = [
    "Basis",
    "SpectralDecomposition",
    "PropagationResult",
    "DefectiveMatrixError",
    "DegenerateStationaryStateError",
    "StepConvergenceError",
    "PAULI",
    "vectorize",
    "devectorize",
    "trace_form",
    "hamiltonian_superop",
    "dissipator_superop",
    "lindblad_liouvillian",
    "check_trace_conserving",
    "spectral_decompose",
    "stationary_state",
    "propagate",
    "one_period_propagator",
    "effective_liouvillian",
]


class Basis(enum.Enum):
    """Vectorization basis for density matrices."""

    ELEMENT = "element"
    PAULI = "pauli"


class DefectiveMatrixError(ValueError):
    """Raised when an eigenvector matrix is numerically singular."""

    def __init__(self, cond: float, threshold: float):
        self.cond = cond
        self.threshold = threshold
        super().__init__(
            f"eigenvector matrix condition number {cond:.3e} exceeds "
            f"threshold {threshold:.3e}; matrix is (numerically) defective"
        )


class DegenerateStationaryStateError(ValueError):
    """Raised when more than one eigenvalue sits inside the stationarity tolerance."""

    def __init__(self, eigenvalues):
        self.eigenvalues = list(eigenvalues)
        super().__init__(
            "degenerate stationary subspace; eigenvalues within tolerance: "
            + ", ".join(f"{ev:.6e}" for ev in self.eigenvalues)
        )


class StepConvergenceError(RuntimeError):
    """Raised when step doubling does not converge for the monodromy integrator."""

    def __init__(self, coarse, fine, rel_change: float, tol: float):
        self.coarse = coarse
        self.fine = fine
        self.rel_change = rel_change
        super().__init__(
            f"one-period propagator not converged: relative change {rel_change:.3e} "
            f"between step-doubled estimates exceeds tolerance {tol:.3e}"
        )


# Pauli matrices, sigma_0 = identity.
PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)


def vectorize(rho: np.ndarray, basis: Basis = Basis.ELEMENT) -> np.ndarray:
    """Flatten a (generalized) density matrix into a coefficient vector.

    ELEMENT stacks the rows (row-major).  PAULI is only defined for d=2 and
    returns (rho_0, rho_x, rho_y, rho_z) with rho_alpha = tr[rho sigma_alpha];
    the first component carries the trace.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    if basis is Basis.ELEMENT:
        return rho.reshape(-1).copy()
    if rho.shape != (2, 2):
        raise ValueError("Pauli basis requires a 2x2 matrix")
    return np.array([np.trace(rho @ s) for s in PAULI], dtype=complex)


def devectorize(vec: np.ndarray, basis: Basis = Basis.ELEMENT) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    vec = np.asarray(vec, dtype=complex)
    if basis is Basis.ELEMENT:
        d = math.isqrt(vec.size)
        if d * d != vec.size:
            raise ValueError(f"vector length {vec.size} is not a perfect square")
        return vec.reshape(d, d).copy()
    if vec.size != 4:
        raise ValueError("Pauli basis requires a length-4 vector")
    return sum(v * s for v, s in zip(vec, PAULI)) / 2.0


def trace_form(dim: int, basis: Basis = Basis.ELEMENT) -> np.ndarray:
    """Row functional t such that t @ vectorize(rho) = tr[rho]."""
    if basis is Basis.PAULI:
        if dim != 2:
            raise ValueError("Pauli basis requires dim=2")
        t = np.zeros(4, dtype=complex)
        t[0] = 1.0
        return t
    return np.eye(dim, dtype=complex).reshape(-1)


def hamiltonian_superop(h_left: np.ndarray, h_right: np.ndarray | None = None) -> np.ndarray:
    """Coherent part -i(H_L rho) + i(rho H_R) as a matrix on row-major vec(rho).

    For physical evolution ``h_right`` defaults to ``h_left``; generalized
    (counting-field-dressed) evolution uses different left/right Hamiltonians.
    """
    h_left = np.asarray(h_left, dtype=complex)
    if h_right is None:
        h_right = h_left
    h_right = np.asarray(h_right, dtype=complex)
    d = h_left.shape[0]
    eye = np.eye(d, dtype=complex)
    return -1.0j * np.kron(h_left, eye) + 1.0j * np.kron(eye, h_right.T)


def dissipator_superop(c: np.ndarray, rate: float = 1.0, xi: float = 0.0) -> np.ndarray:
    """Lindblad dissipator with an optional bath counting field.

    Returns the matrix of rate * (e^{-i xi} c rho c^dag - {c^dag c, rho}/2)
    acting on row-major vec(rho).  At xi=0 this is the standard dissipator.
    """
    c = np.asarray(c, dtype=complex)
    d = c.shape[0]
    eye = np.eye(d, dtype=complex)
    cdc = c.conj().T @ c
    jump = np.exp(-1.0j * xi) * np.kron(c, c.conj())
    anti = 0.5 * (np.kron(cdc, eye) + np.kron(eye, cdc.T))
    return rate * (jump - anti)


def lindblad_liouvillian(
    h: np.ndarray,
    jumps: list[np.ndarray] | None = None,
    rates: list[float] | None = None,
    xis: list[float] | None = None,
) -> np.ndarray:
    """Assemble a dense Lindblad generator in the element basis."""
    liouv = hamiltonian_superop(h)
    jumps = jumps or []
    rates = rates if rates is not None else [1.0] * len(jumps)
    xis = xis if xis is not None else [0.0] * len(jumps)
    for c, g, xi in zip(jumps, rates, xis):
        liouv = liouv + dissipator_superop(c, g, xi)
    return liouv


def check_trace_conserving(
    liouv: np.ndarray, t_form: np.ndarray, rtol: float = 1e-12
) -> bool:
    """True when the trace functional annihilates the generator."""
    scale = np.abs(liouv).max()
    if scale == 0.0:
        return True
    return bool(np.abs(t_form @ liouv).max() <= rtol * scale)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Biorthonormal eigensystem of a (generally non-Hermitian) matrix.

    ``right`` holds right eigenvectors as columns, ``left`` holds left
    eigenvectors as rows, normalized so that left @ right = identity.
    Eigenvalues are sorted by descending real part (ties by descending
    imaginary part) so the slow/stationary branch comes first.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    cond: float

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        return (self.right * self.eigenvalues) @ self.left

    def gap(self, mu: int) -> float:
        """Distance from eigenvalue mu to the rest of the spectrum."""
        others = np.delete(self.eigenvalues, mu)
        return float(np.abs(others - self.eigenvalues[mu]).min())


def spectral_decompose(
    a: np.ndarray, defective_threshold: float = 1e12
) -> SpectralDecomposition:
    """Eigen-decompose with left vectors from inversion of the right matrix.

    Raises :class:`DefectiveMatrixError` when the right-eigenvector matrix
    condition number exceeds ``defective_threshold``.
    """
    a = np.asarray(a, dtype=complex)
    evals, right = la.eig(a)
    order = np.lexsort((-evals.imag, -evals.real))
    evals = evals[order]
    right = right[:, order]
    cond = float(np.linalg.cond(right))
    if not np.isfinite(cond) or cond > defective_threshold:
        raise DefectiveMatrixError(cond, defective_threshold)
    left = np.linalg.inv(right)
    return SpectralDecomposition(eigenvalues=evals, right=right, left=left, cond=cond)


def stationary_state(
    a: np.ndarray,
    basis: Basis = Basis.ELEMENT,
    stationarity_tol: float = 1e-10,
) -> np.ndarray:
    """Stationary density matrix of a zero-counting-field Liouvillian.

    Returns the right null vector devectorized and normalized to unit trace.
    The stationarity tolerance is relative to the spectral (2-)norm of ``a``.
    """
    a = np.asarray(a, dtype=complex)
    dec = spectral_decompose(a)
    scale = np.linalg.norm(a, 2)
    tol = stationarity_tol * max(scale, 1.0)
    idx = np.flatnonzero(np.abs(dec.eigenvalues) <= tol)
    if idx.size == 0:
        raise ValueError(
            f"no stationary eigenvalue within {tol:.3e}; "
            f"slowest is {dec.eigenvalues[0]:.6e}"
        )
    if idx.size > 1:
        raise DegenerateStationaryStateError(dec.eigenvalues[idx])
    v = dec.right[:, idx[0]]
    if basis is Basis.PAULI:
        d = 2
    else:
        d = math.isqrt(v.size)
    tr = trace_form(d, basis) @ v
    rho = devectorize(v / tr, basis)
    if basis is Basis.ELEMENT:
        # the physical state is Hermitian; symmetrize away roundoff
        rho = 0.5 * (rho + rho.conj().T)
    return rho


@dataclass(frozen=True)
class PropagationResult:
    """Propagated vector plus provenance of the evaluation path."""

    vector: np.ndarray
    method: str
    fallback: bool = False


def propagate(
    a: np.ndarray,
    v0: np.ndarray,
    t: float,
    method: str = "auto",
    defective_threshold: float = 1e12,
) -> PropagationResult:
    """Evaluate exp(a t) v0.

    ``method`` is one of "auto", "spectral", "series".  The default tries the
    spectral route and silently falls back to scaling-and-squaring when the
    decomposition is ill-conditioned (flagged in the result).
    """
    if t < 0:
        raise ValueError("propagation time must be nonnegative")
    a = np.asarray(a, dtype=complex)
    v0 = np.asarray(v0, dtype=complex)
    if method not in ("auto", "spectral", "series"):
        raise ValueError(f"unknown propagation method {method!r}")
    if method in ("auto", "spectral"):
        try:
            dec = spectral_decompose(a, defective_threshold)
        except DefectiveMatrixError:
            if method == "spectral":
                raise
        else:
            v = dec.right @ (np.exp(dec.eigenvalues * t) * (dec.left @ v0))
            return PropagationResult(vector=v, method="spectral")
    v = la.expm(a * t) @ v0
    return PropagationResult(vector=v, method="series", fallback=(method == "auto"))


def _rk4_monodromy(l_of_t, period: float, steps: int) -> np.ndarray:
    h = period / steps
    u = np.eye(np.asarray(l_of_t(0.0)).shape[0], dtype=complex)
    for n in range(steps):
        t = n * h
        k1 = l_of_t(t) @ u
        k2 = l_of_t(t + 0.5 * h) @ (u + 0.5 * h * k1)
        k3 = l_of_t(t + 0.5 * h) @ (u + 0.5 * h * k2)
        k4 = l_of_t(t + h) @ (u + h * k3)
        u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return u


def one_period_propagator(
    l_of_t,
    period: float,
    steps: int = 256,
    check_tol: float | None = 1e-6,
) -> np.ndarray:
    """Monodromy matrix U(period) of dU/dt = L(t) U by fixed-step RK4.

    When ``check_tol`` is set, the integration is repeated with doubled step
    count; the finer estimate is returned and a :class:`StepConvergenceError`
    carrying both estimates is raised if they disagree beyond tolerance.
    """
    if steps < 64:
        raise ValueError("steps must be at least 64")
    if period <= 0:
        raise ValueError("period must be positive")
    coarse = _rk4_monodromy(l_of_t, period, steps)
    if check_tol is None:
        return coarse
    fine = _rk4_monodromy(l_of_t, period, 2 * steps)
    denom = max(np.abs(fine).max(), 1.0)
    rel = float(np.abs(fine - coarse).max() / denom)
    if rel > check_tol:
        raise StepConvergenceError(coarse, fine, rel, check_tol)
    return fine


@dataclass(frozen=True)
class EffectiveLiouvillian:
    """Stroboscopic generator log(U)/period with branch-cut diagnostics."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    branch_cut_flags: np.ndarray = field(repr=False)


def effective_liouvillian(
    u: np.ndarray, period: float, cut_tol: float = 1e-6
) -> EffectiveLiouvillian:
    """Principal-branch matrix logarithm of a one-period propagator, / period.

    Every Floquet exponent satisfies |Im lambda| < pi/period; exponents whose
    imaginary part lies within ``cut_tol``/period of the branch cut are
    flagged, since their branch assignment is not trustworthy.
    """
    dec = spectral_decompose(np.asarray(u, dtype=complex))
    logs = np.log(dec.eigenvalues)
    flags = (np.pi - np.abs(logs.imag)) < cut_tol
    leff = (dec.right * logs) @ dec.left / period
    return EffectiveLiouvillian(
        matrix=leff, eigenvalues=logs / period, branch_cut_flags=flags
    )
