"""Counting engine: generating functions and cumulants from dressed generators.

A model exposes ``dressed_liouvillian(chi, xi)``; this module turns that into
moment-generating functions, the slow eigenvalue lambda_0(xi, chi), and flux /
noise reports by numerical differentiation at zero counting fields.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .charpoly import (
    char_poly,
    coefficient_derivatives,
    first_cumulant_rate,
    second_cumulant_rate,
    truncated_root,
)
from .numdiff import central_derivative
from .superop import propagate, spectral_decompose

__all__ = [
    "Method",
    "CountingFields",
    "MgfValue",
    "CumulantReport",
    "ConservationReport",
    "ValidityWindow",
    "BranchCollisionError",
    "evolve_generalized",
    "dynamical_mgf",
    "asymptotic_mgf",
    "initial_mgf",
    "gaussian_initial_mgf",
    "lambda0_nearest",
    "track_lambda0",
    "spectral_gap",
    "default_step",
    "cumulants",
    "cumulants_spectral",
    "cumulants_charpoly",
    "cumulants_oracle",
    "conservation_check",
    "semiclassical_flux",
    "validity_window",
]

_STENCIL_FLAG_RTOL = 1e-6


class Method(enum.Enum):
    SPECTRAL_FD = "SpectralFD"
    CHARPOLY = "CharPoly"
    ANALYTIC_ORACLE = "AnalyticOracle"
    PERTURBATION = "PerturbationTheory"
    PERIODIC_NUMERIC = "PeriodicNumeric"


class BranchCollisionError(RuntimeError):
    """Eigenvalue continuation became ambiguous; use the charpoly route."""


@dataclass(frozen=True)
class CountingFields:
    """One drive counting angle per coherent mode, one per monitored bath."""

    chi: tuple[float, ...]
    xi: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        chi = tuple(float(c) for c in self.chi)
        xi = tuple(float(x) for x in self.xi)
        if not all(math.isfinite(v) for v in chi + xi):
            raise ValueError("counting fields must be finite")
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "xi", xi)

    def negated_chi(self) -> "CountingFields":
        return CountingFields(tuple(-c for c in self.chi), self.xi)

    @staticmethod
    def zero(n_modes: int, n_baths: int) -> "CountingFields":
        return CountingFields((0.0,) * n_modes, (0.0,) * n_baths)


@dataclass(frozen=True)
class MgfValue:
    """Moment-generating-function sample with its two-branch decomposition."""

    value: complex
    time: float
    decomposition: tuple[complex, complex] | None = None


@dataclass(frozen=True)
class CumulantReport:
    """Flux and noise rate of one counted channel."""

    mode: int | str
    flux: float
    noise: float
    method: Method
    h: float
    stencil_error: float
    flagged: bool = False

    @property
    def snr(self) -> float:
        if self.noise > 0.0:
            return self.flux / math.sqrt(self.noise)
        return 0.0 if self.flux == 0.0 else math.inf * math.copysign(1.0, self.flux)


@dataclass(frozen=True)
class ConservationReport:
    """Drive vs bath ledger comparison in the long-time limit."""

    drive: CumulantReport
    bath: CumulantReport
    flux_residual: float
    noise_residual: float
    flux_tol: float
    noise_tol: float

    @property
    def passed(self) -> bool:
        return (
            abs(self.flux_residual) <= self.flux_tol
            and abs(self.noise_residual) <= self.noise_tol
        )


# ---------------------------------------------------------------------------
# generating functions


def evolve_generalized(model, fields: CountingFields, rho0_vec, t: float):
    """Generalized density matrix rho_L(t) (vectorized in the model basis)."""
    liouv = model.dressed_liouvillian(fields.chi, fields.xi)
    return propagate(liouv, np.asarray(rho0_vec, dtype=complex), t).vector


def dynamical_mgf(model, fields: CountingFields, rho0_vec, t: float) -> MgfValue:
    """Two-branch dynamical MGF tr[rho_L(xi,chi)]/2 + conj(tr[rho_L(xi,-chi)])/2."""
    trace = model.trace_vector()
    left = complex(trace @ evolve_generalized(model, fields, rho0_vec, t)) / 2.0
    right = (
        np.conj(
            complex(trace @ evolve_generalized(model, fields.negated_chi(), rho0_vec, t))
        )
        / 2.0
    )
    return MgfValue(value=left + right, time=t, decomposition=(left, right))


def asymptotic_mgf(model, fields: CountingFields, t: float) -> MgfValue:
    """Long-time MGF [e^{lambda0(xi,chi) t} + e^{conj(lambda0(xi,-chi)) t}]/2."""
    lam_p = track_lambda0(model, fields)
    lam_m = track_lambda0(model, fields.negated_chi())
    left = np.exp(lam_p * t) / 2.0
    right = np.exp(np.conj(lam_m) * t) / 2.0
    return MgfValue(value=complex(left + right), time=t, decomposition=(left, right))


def initial_mgf(alphas: Sequence[float], chi: Sequence[float]) -> complex:
    """Coherent-state (Poissonian) initial MGF, prod_k exp[a_k^2 (e^{-i chi_k}-1)]."""
    total = 0.0 + 0.0j
    for a, c in zip(alphas, chi, strict=True):
        if a < 0:
            raise ValueError("coherent amplitudes must be nonnegative")
        total += a * a * (np.exp(-1j * c) - 1.0)
    return complex(np.exp(total))


def gaussian_initial_mgf(
    nbar: Sequence[float], sigma2: Sequence[float], chi: Sequence[float]
) -> complex:
    """Gaussian initial MGF, prod_k exp[-i nbar_k chi_k - sigma_k^2 chi_k^2 / 2].

    The angle is wrapped to (-pi, pi] before evaluation: photon numbers live
    on the integer lattice, so their MGF must be 2 pi periodic, and the
    wrapped Gaussian is the dominant term of the exact periodization (the
    neglected images carry weight exp(-sigma^2 pi^2 / 2)).
    """
    total = 0.0 + 0.0j
    for n, s2, c in zip(nbar, sigma2, chi, strict=True):
        c = math.remainder(c, 2.0 * math.pi)
        total += -1j * n * c - 0.5 * s2 * c * c
    return complex(np.exp(total))


# ---------------------------------------------------------------------------
# the slow eigenvalue


def _newton_polish(liouv: np.ndarray, lam: complex, steps: int = 2) -> complex:
    """Refine an eigenvalue by Newton iteration on the determinant.

    The update lam -> lam - 1/tr[(lam I - L)^{-1}] drives det(lam I - L) to
    zero; determinants carry far less roundoff than a full eigensolve, which
    matters when eigenvalue derivatives are later amplified by 1/h^2.
    """
    eye = np.eye(liouv.shape[0], dtype=complex)
    for _ in range(steps):
        try:
            inv = np.linalg.inv(lam * eye - liouv)
        except np.linalg.LinAlgError:
            break
        trace = np.trace(inv)
        if trace == 0.0:
            break
        lam = lam - 1.0 / trace
    return complex(lam)


def lambda0_nearest(model, fields: CountingFields) -> complex:
    """Eigenvalue of the dressed generator nearest zero, Newton-refined.

    Safe for the small fields used in derivative stencils; for large fields
    use :func:`track_lambda0`.
    """
    liouv = model.dressed_liouvillian(fields.chi, fields.xi)
    evals = np.linalg.eigvals(liouv)
    lam = complex(evals[np.argmin(np.abs(evals))])
    return _newton_polish(liouv, lam)


def spectral_gap(model) -> float:
    """Distance from the stationary eigenvalue to the rest of the spectrum.

    Measured as the smallest nonzero decay rate |Re lambda| at zero fields,
    which is the scale that bounds safe counting-field steps.
    """
    zero = CountingFields.zero(model.n_modes, model.n_baths)
    liouv = model.dressed_liouvillian(zero.chi, zero.xi)
    evals = np.linalg.eigvals(liouv)
    scale = max(float(np.abs(evals).max()), 1e-300)
    rates = np.abs(evals.real)
    nonzero = rates[rates > 1e-12 * scale]
    return float(nonzero.min()) if nonzero.size else 0.0


def track_lambda0(
    model,
    fields: CountingFields,
    gap_fraction: float = 0.25,
    collision_rtol: float = 1e-3,
    max_halvings: int = 14,
) -> complex:
    """lambda_0 at finite fields by continuation of the branch through zero.

    Walks a straight line in field space, bounding each eigenvalue move by a
    fraction of the local spectral gap and selecting the eigenvalue nearest
    the previous one.  Raises :class:`BranchCollisionError` when a second
    eigenvalue comes within ``collision_rtol`` x gap of the tracked branch.
    """
    target = np.array(fields.chi + fields.xi, dtype=float)
    n_chi = len(fields.chi)
    if not np.any(target):
        return lambda0_nearest(model, fields)
    gap0 = spectral_gap(model)
    if gap0 == 0.0:
        raise BranchCollisionError("zero spectral gap; branch undefined")
    s = 0.0
    ds = 1.0
    lam_prev = 0.0 + 0.0j
    halvings = 0
    while s < 1.0:
        s_try = min(1.0, s + ds)
        point = s_try * target
        liouv = model.dressed_liouvillian(
            tuple(point[:n_chi]), tuple(point[n_chi:])
        )
        evals = np.linalg.eigvals(liouv)
        dists = np.abs(evals - lam_prev)
        order = np.argsort(dists)
        nearest = evals[order[0]]
        if abs(nearest - lam_prev) > gap_fraction * gap0 and s_try - s > 1e-6:
            ds *= 0.5
            halvings += 1
            if halvings > max_halvings:
                raise BranchCollisionError(
                    "step control failed to bound the branch motion"
                )
            continue
        if len(evals) > 1 and dists[order[1]] <= collision_rtol * gap0:
            raise BranchCollisionError(
                f"second eigenvalue within {dists[order[1]]:.3e} of the tracked "
                "branch; fall back to the characteristic-polynomial route"
            )
        lam_prev = complex(nearest)
        s = s_try
    return lam_prev


def default_step(model, h: float = 1e-3, gap_divisor: float = 20.0) -> float:
    """Stencil step bounded by the spectral gap (keeps lambda_0 on its branch)."""
    gap = spectral_gap(model)
    if gap == 0.0:
        return h
    return min(h, gap / gap_divisor)


# ---------------------------------------------------------------------------
# cumulants

Selector = int | str


def _fields_for(model, selector: Selector, x: float) -> CountingFields:
    chi = [0.0] * model.n_modes
    xi = [0.0] * model.n_baths
    if isinstance(selector, int):
        if not 1 <= selector <= model.n_modes:
            raise ValueError(f"mode {selector} out of range")
        chi[selector - 1] = x
    elif selector == "drive":
        chi = [x] * model.n_modes
    elif selector == "bath":
        xi = [x] * model.n_baths
    else:
        raise ValueError(f"unknown counting selector {selector!r}")
    return CountingFields(tuple(chi), tuple(xi))


def _check_order(order: int) -> None:
    if order not in (1, 2):
        raise ValueError(
            "only the first and second cumulants are linear in time in the "
            "long-time limit; higher orders are refused rather than reported "
            "as misleading rates"
        )


def _report_from_lambda0(
    f: Callable[[float], complex],
    selector: Selector,
    method: Method,
    h: float,
) -> CumulantReport:
    cache: dict[float, complex] = {}

    def fc(x: float) -> complex:
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    d1 = central_derivative(fc, 1, h)
    d2 = central_derivative(fc, 2, h)
    flux = float((1j * d1.value).real)
    noise = float((-d2.value).real)
    err = max(d1.rel_error, d2.rel_error)
    return CumulantReport(
        mode=selector,
        flux=flux,
        noise=noise,
        method=method,
        h=h,
        stencil_error=err,
        flagged=err > _STENCIL_FLAG_RTOL,
    )


def cumulants_spectral(
    model, selector: Selector, order: int = 2, h: float | None = None
) -> CumulantReport:
    """Flux and noise from stencil derivatives of the tracked slow eigenvalue.

    When no step is given, the stencil is evaluated on a small ladder of
    candidate steps and the report with the smallest Richardson disagreement
    is returned.  The optimal step varies by orders of magnitude across
    parameter space (the branch radius of lambda_0 shrinks with the spectral
    gap while roundoff amplification grows as 1/h^2), and the Richardson
    estimate tracks the true error well once the eigenvalues are
    Newton-refined.
    """
    _check_order(order)

    def f(x: float) -> complex:
        return lambda0_nearest(model, _fields_for(model, selector, x))

    if h is not None:
        return _report_from_lambda0(f, selector, Method.SPECTRAL_FD, h)
    ladder = [1e-3, 3e-4, 1e-4, 3e-5, 1e-5]
    h0 = default_step(model)
    if h0 not in ladder:
        ladder.append(h0)
    best: CumulantReport | None = None
    for step in ladder:
        report = _report_from_lambda0(f, selector, Method.SPECTRAL_FD, step)
        if best is None or report.stencil_error < best.stencil_error:
            best = report
    return best


def cumulants_charpoly(
    model, selector: Selector, order: int = 2, h: float | None = None
) -> CumulantReport:
    """Flux and noise by implicit differentiation of the char-poly root.

    Differentiating sum_j a_j(chi) lambda^j = 0 at the stationary root
    lambda(0) = 0 needs only the field-derivatives of a0 and a1, which are
    obtained exactly (up to roundoff) by trigonometric interpolation over
    one field period.  An explicit ``h`` instead selects the stencil route
    of :func:`~photonstats.charpoly.second_cumulant_rate` (useful for
    step-size studies).
    """
    _check_order(order)

    def matrix_fn(x: float):
        fields = _fields_for(model, selector, x)
        return model.dressed_liouvillian(fields.chi, fields.xi)

    if h is not None:
        flux, d1 = first_cumulant_rate(lambda x: char_poly(matrix_fn(x)), h)
        noise, d2 = second_cumulant_rate(lambda x: char_poly(matrix_fn(x)), h)
        err = max(d1.rel_error, d2.rel_error)
    else:
        derivs = coefficient_derivatives(matrix_fn)
        # degeneracy guard: raises if a1(0) vanishes
        truncated_root(derivs.at_zero, 2)
        a1 = derivs.at_zero.coefficients[1]
        a2 = derivs.at_zero.coefficients[2]
        dlam = -derivs.da0 / a1
        d2lam = -(derivs.d2a0 + 2.0 * derivs.da1 * dlam + 2.0 * a2 * dlam * dlam) / a1
        flux = float((1j * dlam).real)
        noise = float((-d2lam).real)
        err = derivs.rel_error
        h = 2.0 * math.pi / derivs.n_samples
    return CumulantReport(
        mode=selector,
        flux=flux,
        noise=noise,
        method=Method.CHARPOLY,
        h=h,
        stencil_error=err,
        flagged=err > _STENCIL_FLAG_RTOL,
    )


def cumulants_oracle(model, selector: Selector, order: int = 2) -> CumulantReport:
    """Closed-form (or closed-form-derived) cumulants where the model has them."""
    _check_order(order)
    # imported here to keep the engine free of model dependencies at import
    from .models.jc import JaynesCummingsModel, jc_exact_cumulants
    from .models.lambda_system import LambdaModel, lambda_lambda0_pt2

    if isinstance(model, JaynesCummingsModel):
        field_name = {1: "mode1", 2: "mode2", "drive": "drive", "bath": "bath"}[
            selector
        ]
        flux, noise = jc_exact_cumulants(model.params, field_name)
        return CumulantReport(
            mode=selector,
            flux=flux,
            noise=noise,
            method=Method.ANALYTIC_ORACLE,
            h=0.0,
            stencil_error=0.0,
        )
    if isinstance(model, LambdaModel):
        if selector == "bath":
            raise ValueError(
                "the closed-form slow eigenvalue counts drive photons only"
            )
        h = default_step(model)

        def f(x: float) -> complex:
            fields = _fields_for(model, selector, x)
            return lambda_lambda0_pt2(model.params, fields.chi)

        return _report_from_lambda0(f, selector, Method.ANALYTIC_ORACLE, h)
    raise NotImplementedError(f"no analytic oracle for {type(model).__name__}")


def cumulants_perturbation(
    model, selector: Selector, order: int = 2, h: float | None = None
) -> CumulantReport:
    """Flux and noise from the second-order eigenvalue of a tagged split."""
    _check_order(order)
    from .perturbation import PerturbationSplit, nhpt_eigenvalue

    if not hasattr(model, "tagged_terms"):
        raise NotImplementedError(
            f"{type(model).__name__} does not expose a perturbative split"
        )
    if h is None:
        h = default_step(model)

    def f(x: float) -> complex:
        fields = _fields_for(model, selector, x)
        terms = model.tagged_terms(fields.chi, fields.xi[0])
        l0 = sum(m for o, m in terms if o == 0)
        l1 = sum(m for o, m in terms if o > 0)
        split = PerturbationSplit(l0=l0, l1=l1)
        mu = int(np.argmin(np.abs(spectral_decompose(l0).eigenvalues)))
        return nhpt_eigenvalue(split, mu, order=2)

    return _report_from_lambda0(f, selector, Method.PERTURBATION, h)


_DISPATCH = {
    Method.SPECTRAL_FD: cumulants_spectral,
    Method.CHARPOLY: cumulants_charpoly,
    Method.PERIODIC_NUMERIC: cumulants_spectral,
}


def cumulants(
    model,
    selector: Selector,
    method: Method = Method.SPECTRAL_FD,
    order: int = 2,
    h: float | None = None,
) -> CumulantReport:
    """Dispatch a cumulant computation to the requested method."""
    if method is Method.ANALYTIC_ORACLE:
        return cumulants_oracle(model, selector, order)
    if method is Method.PERTURBATION:
        return cumulants_perturbation(model, selector, order, h)
    fn = _DISPATCH[method]
    report = fn(model, selector, order, h)
    if method is Method.PERIODIC_NUMERIC:
        report = CumulantReport(
            mode=report.mode,
            flux=report.flux,
            noise=report.noise,
            method=Method.PERIODIC_NUMERIC,
            h=report.h,
            stencil_error=report.stencil_error,
            flagged=report.flagged,
        )
    return report


def conservation_check(
    model,
    method: Method = Method.SPECTRAL_FD,
    h: float | None = None,
    flux_tol: float = 1e-8,
    noise_tol: float = 1e-6,
) -> ConservationReport:
    """Compare the total-drive ledger against the bath ledger.

    In the long-time limit the total number of drive photons and bath
    photons can only be exchanged with each other (up to the bounded matter
    occupation), so I_drive = -I_bath and the noise rates coincide.
    """
    drive = cumulants(model, "drive", method=method, h=h)
    bath = cumulants(model, "bath", method=method, h=h)
    return ConservationReport(
        drive=drive,
        bath=bath,
        flux_residual=drive.flux + bath.flux,
        noise_residual=drive.noise - bath.noise,
        flux_tol=flux_tol,
        noise_tol=noise_tol,
    )


def semiclassical_flux(model, mode: int) -> float:
    """Stationary-state flux from the phase derivative of the drive energy."""
    if not hasattr(model, "semiclassical_flux"):
        raise NotImplementedError(
            f"{type(model).__name__} has no semiclassical stationary state"
        )
    return model.semiclassical_flux(mode)


# ---------------------------------------------------------------------------
# validity advisory


@dataclass(frozen=True)
class ValidityWindow:
    """Largest time for which the semiclassical factorization error stays small."""

    bound: float
    ok: bool
    reason: str = ""


def validity_window(
    g: float, gamma: float, nbar: float, sigma: float, eps: float
) -> ValidityWindow:
    """Time bound from max{g t / sigma^2, sigma / nbar, g t / nbar, gamma t / nbar} <= eps."""
    if nbar <= 0 or sigma <= 0:
        raise ValueError("nbar and sigma must be positive")
    if sigma / nbar > eps:
        return ValidityWindow(
            bound=0.0,
            ok=False,
            reason=(
                f"time-independent term sigma/nbar = {sigma / nbar:.3e} "
                f"already exceeds eps = {eps:.3e}"
            ),
        )
    bounds = []
    if g > 0:
        bounds.append(eps * sigma * sigma / g)
        bounds.append(eps * nbar / g)
    if gamma > 0:
        bounds.append(eps * nbar / gamma)
    if not bounds:
        return ValidityWindow(bound=math.inf, ok=True, reason="no decaying terms")
    return ValidityWindow(bound=min(bounds), ok=True)
