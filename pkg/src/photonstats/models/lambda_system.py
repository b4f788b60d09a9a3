"""Three-level lambda system with an amplitude-modulated pump.

Levels a, b, c: the two signal modes couple c <-> a (and, for odd resonance
order r, b <-> a through pump sidebands), the pump couples b <-> c with Rabi
amplitude Omega_p(t) = Omega_p0 + (Omega_p1/2) cos(omega_d t), and the excited
state b/c manifold relaxes into |a> through a monitored bath (both decay
channels share one bath counting field xi).

Two frames are provided:

* ``LambdaPeriodicModel``: the rotating frame in which |c> rotates at
  omega_1 and |b> at omega_1 - omega_p; every residual time dependence has
  period 2 pi / omega_d, so the stroboscopic generator comes from a
  monodromy matrix (the non-perturbative numerical route).
* ``LambdaModel``: the time-independent generator after the rotating-wave
  approximation, with pump sidebands folded into Bessel-renormalized
  effective couplings.

Counting conventions follow the two-mode emitter model: absorption from a
drive mode carries exp(+i chi_k) on the raising operator (so the raising
amplitudes are dressed as exp[i(phi_k + chi_k)]), and the bath field enters
the recycling terms as exp(-i xi).  With these orientations the photon
ledger closes: I_1 + I_2 + I_bath = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..bessel import bessel_j
from ..superop import (
    Basis,
    dissipator_superop,
    effective_liouvillian,
    hamiltonian_superop,
    one_period_propagator,
)

__all__ = [
    "LambdaParams",
    "EffectiveCouplings",
    "effective_couplings",
    "LambdaModel",
    "LambdaPeriodicModel",
    "lambda_lambda0_pt2",
]

_A, _B, _C = 0, 1, 2


@dataclass(frozen=True)
class LambdaParams:
    """Level energies, drive frequencies and amplitudes of the lambda system.

    Default units: the dc pump amplitude omega_p0 is the frequency unit.
    The second signal frequency is omega_2 = omega_1 + r * omega_d.
    """

    eps_a: float = 0.0
    eps_b: float = 0.0
    eps_c: float = 30.0
    omega_p: float = 30.0
    omega_1: float = 30.0
    omega_d: float = 40.0
    r: int = 1
    omega_s: float = 0.02
    omega_p0: float = 1.0
    omega_p1: float = 80.0
    gamma: float = 0.2
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma < 0 or self.omega_s < 0:
            raise ValueError("gamma and omega_s must be nonnegative")
        if self.omega_d <= 0:
            raise ValueError("omega_d must be positive")
        if self.r < 0 or self.r != int(self.r):
            raise ValueError("r must be a nonnegative integer")

    @property
    def eps_b_delta(self) -> float:
        """Rotating-frame energy of |b>."""
        return self.eps_b + self.omega_p - self.omega_1

    @property
    def eps_c_delta(self) -> float:
        """Rotating-frame energy of |c> (the detuning omega_Delta on resonance)."""
        return self.eps_c - self.omega_1

    @property
    def pump_resonant(self) -> bool:
        return abs(self.eps_c - self.eps_b - self.omega_p) <= 1e-9 * max(
            abs(self.omega_p), 1.0
        )

    @property
    def rwa_advisory_ok(self) -> bool:
        """Heuristic regime check for the rotating-wave approximation."""
        scale = self.omega_d
        return (
            self.gamma <= 0.25 * scale
            and self.omega_s <= 0.25 * scale
            and abs(self.omega_p0) <= 0.25 * scale
            and max(abs(self.eps_b_delta), abs(self.eps_c_delta)) <= 0.25 * scale
        )

    def with_detuning(self, omega_delta: float) -> "LambdaParams":
        """Same parameters with omega_1 set so that eps_c - omega_1 = omega_delta."""
        return replace(self, omega_1=self.eps_c - omega_delta)


@dataclass(frozen=True)
class EffectiveCouplings:
    """Dressed-basis signal couplings and energies at given counting fields."""

    omega_b: complex
    omega_c: complex
    theta: float
    eps_tilde_b: float
    eps_tilde_c: float


def _signal_amplitudes(p: LambdaParams, chi: tuple[float, float]) -> tuple[complex, complex]:
    """Bare signal couplings (v_b, v_c) onto |b><a| and |c><a|.

    The pump sidebands renormalize the signal by J_0 and J_r of
    Omega_p1 / (2 omega_d); for even r both signal modes address |c>, for
    odd r the second mode addresses |b> instead.
    """
    arg = p.omega_p1 / (2.0 * p.omega_d)
    j0 = bessel_j(0, arg)
    jr = bessel_j(p.r, arg)
    e1 = p.omega_s * j0 * np.exp(1j * (p.phi1 + chi[0]))
    e2 = p.omega_s * jr * np.exp(1j * (p.phi2 + chi[1]))
    if p.r % 2 == 0:
        return (0.0 + 0.0j, e1 + e2)
    return (e2, e1)


def effective_couplings(
    p: LambdaParams, chi: tuple[float, float] = (0.0, 0.0)
) -> EffectiveCouplings:
    """Couplings and energies in the pump-dressed basis.

    The b/c block of the effective Hamiltonian is
    [[ave + delta, Omega_p0], [Omega_p0, ave - delta]] with the bare
    splitting renormalized by J_0(Omega_p1/omega_d); its eigenstates define
    the mixing angle theta = atan2(Omega_p0, delta) and the dressed energies
    eps_tilde = ave -/+ sqrt(delta^2 + Omega_p0^2).
    """
    ave = 0.5 * (p.eps_b_delta + p.eps_c_delta)
    delta = 0.5 * bessel_j(0, p.omega_p1 / p.omega_d) * (
        p.eps_b_delta - p.eps_c_delta
    )
    split = math.hypot(delta, p.omega_p0)
    theta = math.atan2(p.omega_p0, delta)
    vb, vc = _signal_amplitudes(p, chi)
    half = 0.5 * theta
    omega_b = -math.sin(half) * vb + math.cos(half) * vc
    omega_c = math.cos(half) * vb + math.sin(half) * vc
    return EffectiveCouplings(
        omega_b=complex(omega_b),
        omega_c=complex(omega_c),
        theta=theta,
        eps_tilde_b=ave - split,
        eps_tilde_c=ave + split,
    )


def _h_static(p: LambdaParams) -> np.ndarray:
    """Signal-free part of the RWA Hamiltonian in the (a, b, c) basis."""
    ave = 0.5 * (p.eps_b_delta + p.eps_c_delta)
    delta = 0.5 * bessel_j(0, p.omega_p1 / p.omega_d) * (
        p.eps_b_delta - p.eps_c_delta
    )
    h = np.zeros((3, 3), dtype=complex)
    h[_A, _A] = p.eps_a
    h[_B, _B] = ave + delta
    h[_C, _C] = ave - delta
    h[_B, _C] = h[_C, _B] = p.omega_p0
    return h


def _h_signal(p: LambdaParams, chi: tuple[float, float]) -> np.ndarray:
    """Signal part of the RWA Hamiltonian with dressed phases phi_k + chi_k."""
    vb, vc = _signal_amplitudes(p, chi)
    h = np.zeros((3, 3), dtype=complex)
    h[_B, _A] = vb
    h[_C, _A] = vc
    h[_A, _B] = np.conj(vb)
    h[_A, _C] = np.conj(vc)
    return h


def _dissipators(p: LambdaParams, xi: float) -> np.ndarray:
    out = np.zeros((9, 9), dtype=complex)
    for upper in (_B, _C):
        c = np.zeros((3, 3), dtype=complex)
        c[_A, upper] = 1.0
        out += dissipator_superop(c, rate=2.0 * p.gamma, xi=xi)
    return out


class LambdaModel:
    """Counting-engine adapter for the RWA effective generator (9x9)."""

    n_modes = 2
    n_baths = 1
    dim = 9
    basis = Basis.ELEMENT
    matrix_dim = 3

    def __init__(self, params: LambdaParams, require_rwa: bool = False):
        if require_rwa and not params.rwa_advisory_ok:
            raise ValueError(
                "parameters are outside the rotating-wave regime; "
                "use the periodic-frame model or pass require_rwa=False"
            )
        self.params = params

    def tagged_terms(
        self, chi: tuple[float, float], xi: float
    ) -> list[tuple[int, np.ndarray]]:
        """Liouvillian as (perturbative order, matrix) terms.

        Order 0 is the signal-free generator; order 1 collects everything
        linear in the signal amplitude Omega_s.
        """
        p = self.params
        h0 = _h_static(p)
        l0 = hamiltonian_superop(h0, h0) + _dissipators(p, xi)
        l1 = hamiltonian_superop(_h_signal(p, chi), _h_signal(p, (0.0, 0.0)))
        return [(0, l0), (1, l1)]

    def dressed_liouvillian(self, chi, xi) -> np.ndarray:
        chi = tuple(float(c) for c in chi)
        xi = tuple(float(x) for x in xi)
        if len(chi) != 2 or len(xi) != 1:
            raise ValueError("model counts two drive modes and one bath")
        terms = self.tagged_terms((chi[0], chi[1]), xi[0])
        return sum(m for _, m in terms)

    def trace_vector(self) -> np.ndarray:
        t = np.zeros(9, dtype=complex)
        t[[0, 4, 8]] = 1.0
        return t

    def stationary_vector(self) -> np.ndarray:
        """Unperturbed stationary state: all population relaxed into |a>."""
        v = np.zeros(9, dtype=complex)
        v[0] = 1.0
        return v


class LambdaPeriodicModel:
    """Stroboscopic generator from the rotating-frame periodic Liouvillian.

    The one-period propagator is integrated by fixed-step RK4 from
    precomputed harmonic components of L(t), then converted to a generator
    through the principal matrix logarithm.
    """

    n_modes = 2
    n_baths = 1
    dim = 9
    basis = Basis.ELEMENT
    matrix_dim = 3

    def __init__(self, params: LambdaParams, steps: int = 2048,
                 check_tol: float | None = None):
        self.params = params
        self.steps = steps
        self.check_tol = check_tol

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.params.omega_d

    def _harmonics(self, chi: tuple[float, float], xi: float):
        """L(t) = l_const + cos(w t) l_cos + e^{-i r w t} l_m + e^{+i r w t} l_p."""
        p = self.params
        h_levels = np.diag(
            np.array([p.eps_a, p.eps_b_delta, p.eps_c_delta], dtype=complex)
        )
        pump = np.zeros((3, 3), dtype=complex)
        pump[_B, _C] = pump[_C, _B] = 1.0
        sig1 = np.zeros((3, 3), dtype=complex)
        sig1[_C, _A] = p.omega_s * np.exp(1j * (p.phi1 + chi[0]))
        sig1[_A, _C] = np.conj(sig1[_C, _A])
        # mode-2 coupling splits into co-/counter-rotating halves
        amp2 = p.omega_s * np.exp(1j * (p.phi2 + chi[1]))
        amp2_0 = p.omega_s * np.exp(1j * p.phi2)
        lower = np.zeros((3, 3), dtype=complex)
        lower[_C, _A] = 1.0
        raise_ = lower.T.copy()

        h0_left = h_levels + p.omega_p0 * pump + sig1
        h0_right = h_levels + p.omega_p0 * pump + np.zeros((3, 3))
        sig1_0 = np.zeros((3, 3), dtype=complex)
        sig1_0[_C, _A] = p.omega_s * np.exp(1j * p.phi1)
        sig1_0[_A, _C] = np.conj(sig1_0[_C, _A])
        h0_right = h0_right + sig1_0

        l_const = hamiltonian_superop(h0_left, h0_right) + _dissipators(p, xi)
        l_cos = hamiltonian_superop(
            0.5 * p.omega_p1 * pump, 0.5 * p.omega_p1 * pump
        )
        # e^{-i r w t}: |c><a| part of mode 2 on both sides
        l_m = hamiltonian_superop(amp2 * lower, amp2_0 * lower)
        # e^{+i r w t}: |a><c| part
        l_p = hamiltonian_superop(
            np.conj(amp2) * raise_, np.conj(amp2_0) * raise_
        )
        return l_const, l_cos, l_m, l_p

    def liouvillian_of_t(self, chi, xi):
        """Periodic callback t -> L(t) for the monodromy integrator."""
        chi = tuple(float(c) for c in chi)
        xi = tuple(float(x) for x in xi)
        l_const, l_cos, l_m, l_p = self._harmonics((chi[0], chi[1]), xi[0])
        w = self.params.omega_d
        r = self.params.r

        def l_of_t(t: float) -> np.ndarray:
            phase = np.exp(-1j * r * w * t)
            return (
                l_const
                + math.cos(w * t) * l_cos
                + phase * l_m
                + np.conj(phase) * l_p
            )

        return l_of_t

    def dressed_liouvillian(self, chi, xi) -> np.ndarray:
        u = one_period_propagator(
            self.liouvillian_of_t(chi, xi),
            self.period,
            steps=self.steps,
            check_tol=self.check_tol,
        )
        return effective_liouvillian(u, self.period).matrix

    def trace_vector(self) -> np.ndarray:
        t = np.zeros(9, dtype=complex)
        t[[0, 4, 8]] = 1.0
        return t

    def stationary_vector(self) -> np.ndarray:
        v = np.zeros(9, dtype=complex)
        v[0] = 1.0
        return v


def lambda_lambda0_pt2(p: LambdaParams, chi: tuple[float, float]) -> complex:
    """Second-order slow eigenvalue of the RWA generator, in closed form.

    lambda_0 = sum_alpha Omega_{alpha,chi} (Omega*_{alpha,0} - Omega*_{alpha,chi})
               / (i eps~_alpha + gamma)
             + sum_alpha Omega*_{alpha,0} (Omega_{alpha,chi} - Omega_{alpha,0})
               / (-i eps~_alpha + gamma),
    with the dressed couplings/energies of :func:`effective_couplings`
    (energies measured from the a level).  The denominators are the negated
    eigenvalues of the unperturbed coherences |alpha><a| and |a><alpha|,
    which decay at exactly gamma.  Requires the resonant pump
    eps_c - eps_b = omega_p.
    """
    if not p.pump_resonant:
        raise ValueError(
            "closed-form slow eigenvalue requires the resonant pump "
            "eps_c - eps_b = omega_p; use the numeric route instead"
        )
    at_chi = effective_couplings(p, chi)
    at_zero = effective_couplings(p, (0.0, 0.0))
    g = p.gamma
    total = 0.0 + 0.0j
    for o_chi, o_zero, eps in (
        (at_chi.omega_b, at_zero.omega_b, at_chi.eps_tilde_b - p.eps_a),
        (at_chi.omega_c, at_zero.omega_c, at_chi.eps_tilde_c - p.eps_a),
    ):
        total += o_chi * (np.conj(o_zero) - np.conj(o_chi)) / (1j * eps + g)
        total += np.conj(o_zero) * (o_chi - o_zero) / (-1j * eps + g)
    return complex(total)
