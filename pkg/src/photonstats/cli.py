"""Command-line interface: scenario runs and figure-data reproduction.

All commands emit deterministic CSV (17 significant digits, fixed column
order); repeated runs of the same scenario are byte-identical.  Exit codes:
0 success, 1 partial per-point failure, 2 invalid configuration.
"""

from __future__ import annotations

import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import click
import numpy as np

from .config import (
    Scenario,
    ScenarioError,
    Task,
    apply_sweep_value,
    load_scenario,
    parse_scenario,
)
from .counting import (
    CountingFields,
    Method,
    conservation_check,
    cumulants,
    dynamical_mgf,
)
from .distributions import GaussianLaw, PoissonLaw, closed_mgf, reconstruct, reconstruct_from_mgf
from .models.jc import JaynesCummingsModel, JcParams, jc_closed_statistics
from .models.lambda_system import LambdaModel, LambdaParams, LambdaPeriodicModel

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.16e}"
    return str(x)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def build_model(kind: str, params, method: Method, steps: int = 2048):
    if kind == "jc":
        return JaynesCummingsModel(params)
    if method is Method.PERIODIC_NUMERIC:
        return LambdaPeriodicModel(params, steps=steps)
    return LambdaModel(params)


def _scan_point(payload):
    """Worker: cumulant reports for both drive modes at one grid point."""
    kind, params, method, h, steps = payload
    model = build_model(kind, params, method, steps)
    try:
        reports = [cumulants(model, k, method=method, h=h) for k in (1, 2)]
    except Exception as exc:  # recorded per-point, scan continues
        return (math.nan,) * 6 + (math.nan, f"{type(exc).__name__}: {exc}")
    values = []
    for rep in reports:
        values.extend([rep.flux, rep.noise, rep.snr])
    err = max(rep.stencil_error for rep in reports)
    return tuple(values) + (err, "")


def _run_sweep(scenario: Scenario, sweep, threads: int):
    """Rows for one sweep spec; returns (header, rows, had_errors)."""
    method = scenario.method
    repeats = sweep.repeat_values or (None,)
    payloads = []
    keys = []
    for rv in repeats:
        base = scenario.model_params
        if rv is not None:
            base = apply_sweep_value(base, sweep.repeat_param, rv)
        for x in sweep.grid():
            params = apply_sweep_value(base, sweep.variable, x)
            payloads.append(
                (
                    scenario.model_kind,
                    params,
                    method,
                    scenario.numerics.h,
                    scenario.numerics.steps,
                )
            )
            keys.append((rv, x))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_scan_point, payloads, chunksize=8))
    else:
        results = [_scan_point(p) for p in payloads]
    header = ["sweep_value"]
    if sweep.repeat_param:
        header.append(sweep.repeat_param)
    header += [
        "I_1",
        "sigma2_1",
        "snr_1",
        "I_2",
        "sigma2_2",
        "snr_2",
        "method",
        "stencil_error",
        "error",
    ]
    rows = []
    had_errors = False
    for (rv, x), res in zip(keys, results):
        row = [x]
        if sweep.repeat_param:
            row.append(rv)
        row += list(res[:6]) + [method.value, res[6], res[7]]
        if res[7]:
            had_errors = True
        rows.append(row)
    return header, rows, had_errors


def _sweep_output_path(scenario: Scenario, sweep, out_override: str | None,
                       prefix: str = "scan") -> str:
    base = out_override or scenario.output or "."
    if base.endswith(".csv") and len(scenario.sweeps) <= 1:
        return base
    root = base[:-4] if base.endswith(".csv") else os.path.join(base, prefix)
    return f"{root}_{sweep.name}.csv"


def _single_output_path(
    out_override: str | None, scenario_output: str | None, default_name: str
) -> str | None:
    """Resolve one CSV path; a directory target gets the default file name."""
    base = out_override or scenario_output
    if base is None:
        return None
    if os.path.isdir(base) or not base.endswith(".csv"):
        return os.path.join(base, default_name)
    return base


def _load(config: str | None, default_resource: str | None = None) -> Scenario:
    if config:
        return load_scenario(config)
    if default_resource:
        text = (
            resources.files("photonstats.scenarios")
            .joinpath(default_resource)
            .read_text(encoding="utf-8")
        )
        return parse_scenario(text)
    raise click.UsageError("--config is required for this command")


def _overrides(scenario: Scenario, method: str | None, threads: int | None):
    if method:
        names = {m.value: m for m in Method}
        if method not in names:
            raise ScenarioError(
                [f"method: expected one of {sorted(names)}, got {method!r}"]
            )
        object.__setattr__(scenario, "method", names[method])
    if threads:
        object.__setattr__(scenario.numerics, "threads", threads)
    return scenario


_SHARED = [
    click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None),
    click.option("--out", type=click.Path(), default=None),
    click.option("--threads", type=int, default=None),
    click.option("--method", type=str, default=None),
]


def shared_options(fn):
    for opt in reversed(_SHARED):
        fn = opt(fn)
    return fn


@click.group()
def main() -> None:
    """Photon counting statistics of driven dissipative quantum systems."""


def _guard(fn):
    """Run fn, mapping configuration errors to exit code 2."""
    try:
        return fn()
    except (ScenarioError, click.UsageError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_CONFIG)


@main.command("cumulants")
@shared_options
def cumulants_cmd(config, out, threads, method):
    """Flux and noise of one counted channel."""
    def run():
        scenario = _overrides(_load(config), method, threads)
        model = build_model(
            scenario.model_kind, scenario.model_params, scenario.method,
            scenario.numerics.steps,
        )
        rep = cumulants(
            model, scenario.mode, method=scenario.method, h=scenario.numerics.h
        )
        header = ["mode", "I", "sigma2", "snr", "method", "h", "stencil_error"]
        row = [rep.mode, rep.flux, rep.noise, rep.snr, rep.method.value, rep.h,
               rep.stencil_error]
        path = _single_output_path(out, scenario.output, "cumulants.csv")
        if path:
            _write_csv(path, header, [row])
        click.echo(
            f"mode={rep.mode} I={_fmt(rep.flux)} sigma2={_fmt(rep.noise)} "
            f"snr={_fmt(rep.snr)} method={rep.method.value}"
        )
        sys.exit(EXIT_PARTIAL if rep.flagged else EXIT_OK)

    _guard(run)


@main.command()
@shared_options
def scan(config, out, threads, method):
    """Cumulant reports over a parameter sweep."""
    def run():
        scenario = _overrides(_load(config), method, threads)
        if not scenario.sweeps:
            raise ScenarioError(["sweep: a Scan task requires a sweep specification"])
        nthreads = scenario.numerics.threads
        had_errors = False
        for sweep in scenario.sweeps:
            header, rows, errs = _run_sweep(scenario, sweep, nthreads)
            path = _sweep_output_path(scenario, sweep, out)
            _write_csv(path, header, rows)
            click.echo(f"wrote {path} ({len(rows)} rows)")
            had_errors = had_errors or errs
        sys.exit(EXIT_PARTIAL if had_errors else EXIT_OK)

    _guard(run)


@main.command()
@shared_options
def distribution(config, out, threads, method):
    """Photon-number distribution of the resolved drive modes."""
    def run():
        scenario = _overrides(_load(config), method, threads)
        model = build_model(
            scenario.model_kind, scenario.model_params, scenario.method,
            scenario.numerics.steps,
        )
        spec = scenario.distribution
        if spec.law == "poisson":
            law = PoissonLaw(spec.alphas[: len(spec.modes)])
        else:
            law = GaussianLaw(
                spec.nbar[: len(spec.modes)], spec.sigma2[: len(spec.modes)]
            )
        dist = reconstruct(
            model,
            model.stationary_vector(),
            law,
            spec.time,
            spec.modes,
            scenario.numerics.n_fft,
        )
        path = _single_output_path(out, scenario.output, "distribution.csv") or "distribution.csv"
        if dist.n_modes == 1:
            header = ["n_1", "probability"]
            rows = [
                [int(n), float(p)]
                for n, p in zip(dist.offsets[0], dist.probabilities)
            ]
        else:
            header = ["n_1", "n_2", "probability"]
            rows = [
                [int(n1), int(n2), float(dist.probabilities[i, j])]
                for i, n1 in enumerate(dist.offsets[0])
                for j, n2 in enumerate(dist.offsets[1])
            ]
        _write_csv(path, header, rows)
        with open(path + ".json", "w", encoding="utf-8") as fh:
            json.dump(dist.metadata, fh, indent=2, sort_keys=True, default=str)
        click.echo(f"wrote {path} ({len(rows)} rows)")
        sys.exit(EXIT_OK)

    _guard(run)


@main.command()
@shared_options
def closed(config, out, threads, method):
    """Closed-system (lossless) photon statistics from quasienergy branches."""
    def run():
        scenario = _overrides(_load(config), method, threads)
        if scenario.model_kind != "jc":
            raise ScenarioError(["model.kind: closed statistics require 'jc'"])
        p: JcParams = scenario.model_params
        spec = scenario.closed
        mean, variance = jc_closed_statistics(p, spec.weights, spec.mode, spec.time)
        dist = reconstruct_from_mgf(
            lambda chi: closed_mgf(
                p,
                spec.weights,
                (chi[0], 0.0) if spec.mode == 1 else (0.0, chi[0]),
                spec.time,
            ),
            1,
            scenario.numerics.n_fft,
            signed=True,
        )
        header = [
            "time", "mode", "mean", "variance", "fft_mean", "fft_variance",
            "clipped_mass",
        ]
        row = [
            spec.time, spec.mode, mean, variance,
            dist.mean(0), dist.variance(0),
            float(dist.metadata["clipped_mass"]),
        ]
        path = _single_output_path(out, scenario.output, "closed.csv")
        if path:
            _write_csv(path, header, [row])
        click.echo(
            f"mean={_fmt(mean)} variance={_fmt(variance)} "
            f"fft_mean={_fmt(dist.mean(0))} fft_variance={_fmt(dist.variance(0))}"
        )
        sys.exit(EXIT_OK)

    _guard(run)


@main.command()
@shared_options
def conserve(config, out, threads, method):
    """Drive-vs-bath photon-ledger consistency check."""
    def run():
        scenario = _overrides(_load(config), method, threads)
        model = build_model(
            scenario.model_kind, scenario.model_params, scenario.method,
            scenario.numerics.steps,
        )
        rep = conservation_check(model, method=scenario.method, h=scenario.numerics.h)
        status = "PASS" if rep.passed else "FAIL"
        worst = max(abs(rep.flux_residual), abs(rep.noise_residual))
        line = (
            f"{status} max_violation={_fmt(worst)} "
            f"flux_residual={_fmt(rep.flux_residual)} "
            f"noise_residual={_fmt(rep.noise_residual)}"
        )
        click.echo(line)
        path = _single_output_path(out, scenario.output, "conserve.csv")
        if path:
            _write_csv(
                path,
                ["status", "flux_residual", "noise_residual", "I_drive", "I_bath",
                 "sigma2_drive", "sigma2_bath"],
                [[status, rep.flux_residual, rep.noise_residual, rep.drive.flux,
                  rep.bath.flux, rep.drive.noise, rep.bath.noise]],
            )
        sys.exit(EXIT_OK if rep.passed else EXIT_PARTIAL)

    _guard(run)


@main.command()
@shared_options
def fig2(config, out, threads, method):
    """Probe-flux/noise sweeps (detuning, amplitude, gamma) x three phases."""
    def run():
        scenario = _overrides(_load(config, "fig2.yaml"), method, threads)
        had_errors = False
        for sweep in scenario.sweeps:
            header, rows, errs = _run_sweep(scenario, sweep, scenario.numerics.threads)
            path = _sweep_output_path(scenario, sweep, out, prefix="fig2")
            _write_csv(path, header, rows)
            click.echo(f"wrote {path} ({len(rows)} rows)")
            had_errors = had_errors or errs
        sys.exit(EXIT_PARTIAL if had_errors else EXIT_OK)

    _guard(run)


@main.command()
@shared_options
def fig3(config, out, threads, method):
    """Photon-number distributions of the probe mode and the joint pair."""
    def run():
        scenario = _overrides(_load(config, "fig3.yaml"), method, threads)
        out_dir = out or scenario.output or "."
        os.makedirs(out_dir, exist_ok=True)
        spec = scenario.distribution
        law1 = GaussianLaw((spec.nbar[0],), (spec.sigma2[0],))
        base: JcParams = scenario.model_params
        had_errors = False
        # (b): single-mode marginal at phi = 0, strong dissipation
        p_b = apply_sweep_value(apply_sweep_value(base, "phi2", 0.0), "gamma", 0.1)
        model_b = JaynesCummingsModel(p_b)
        rows = []
        for t in (0.0, 25.0, 50.0):
            dist = reconstruct(
                model_b, model_b.stationary_vector(), law1, t, (1,),
                scenario.numerics.n_fft,
            )
            for n, prob in zip(dist.offsets[0], dist.probabilities):
                rows.append([t, int(n), float(prob)])
        path = os.path.join(out_dir, "fig3_marginal.csv")
        _write_csv(path, ["time", "n_1", "probability"], rows)
        click.echo(f"wrote {path} ({len(rows)} rows)")
        # (c): joint distribution at phi = pi/2, weak dissipation
        p_c = apply_sweep_value(
            apply_sweep_value(base, "phi2", math.pi / 2), "gamma", 0.001
        )
        model_c = JaynesCummingsModel(p_c)
        law2 = GaussianLaw(
            (spec.nbar[0], spec.nbar[0]), (spec.sigma2[0], spec.sigma2[0])
        )
        n_joint = scenario.numerics.n_fft
        nthreads = scenario.numerics.threads

        def joint_sampler(grid):
            row_chunks = np.array_split(np.arange(len(grid)), max(nthreads * 4, 1))
            payloads = [
                (p_c, spec.nbar[0], spec.sigma2[0], 50.0, grid, chunk)
                for chunk in row_chunks
                if len(chunk)
            ]
            if nthreads > 1:
                with ProcessPoolExecutor(max_workers=nthreads) as pool:
                    results = list(pool.map(_joint_rows, payloads))
            else:
                results = [_joint_rows(pl) for pl in payloads]
            samples = np.empty((len(grid), len(grid)), dtype=complex)
            for rows_idx, values in results:
                samples[rows_idx, :] = values
            return samples

        dist = reconstruct(
            model_c, model_c.stationary_vector(), law2, 50.0, (1, 2), n_joint,
            sampler=joint_sampler,
        )
        rows = [
            [int(n1), int(n2), float(dist.probabilities[i, j])]
            for i, n1 in enumerate(dist.offsets[0])
            for j, n2 in enumerate(dist.offsets[1])
        ]
        path = os.path.join(out_dir, "fig3_joint.csv")
        _write_csv(path, ["n_1", "n_2", "probability"], rows)
        click.echo(f"wrote {path} ({len(rows)} rows)")
        sys.exit(EXIT_PARTIAL if had_errors else EXIT_OK)

    _guard(run)


@main.command()
@shared_options
def fig4(config, out, threads, method):
    """Signal-mode flux vs detuning: closed-form PT next to periodic numerics."""
    def run():
        scenario = _overrides(_load(config, "fig4.yaml"), method, threads)
        sweep = scenario.sweeps[0]
        header = [
            "omega_delta", "r",
            "I_2_pt2", "sigma2_2_pt2", "snr_2_pt2",
            "I_2_numeric", "sigma2_2_numeric", "snr_2_numeric",
            "error",
        ]
        payloads = []
        keys = []
        for rv in sweep.repeat_values or (scenario.model_params.r,):
            base = apply_sweep_value(scenario.model_params, "r", rv)
            for x in sweep.grid():
                params = apply_sweep_value(base, sweep.variable, x)
                payloads.append((params, scenario.numerics.steps))
                keys.append((x, int(round(rv))))
        nthreads = scenario.numerics.threads
        if nthreads > 1:
            with ProcessPoolExecutor(max_workers=nthreads) as pool:
                results = list(pool.map(_fig4_point, payloads, chunksize=2))
        else:
            results = [_fig4_point(p) for p in payloads]
        rows = []
        had_errors = False
        for (x, rv), res in zip(keys, results):
            rows.append([x, rv] + list(res[:6]) + [res[6]])
            had_errors = had_errors or bool(res[6])
        path = out or scenario.output or "fig4.csv"
        if os.path.isdir(path):
            path = os.path.join(path, "fig4.csv")
        _write_csv(path, header, rows)
        click.echo(f"wrote {path} ({len(rows)} rows)")
        sys.exit(EXIT_PARTIAL if had_errors else EXIT_OK)

    _guard(run)


def _joint_rows(payload):
    """One block of rows of the two-mode MGF sample grid (worker-side)."""
    params, nbar, sigma2, t, grid, rows_idx = payload
    model = JaynesCummingsModel(params)
    rho0 = model.stationary_vector()
    law = GaussianLaw((nbar, nbar), (sigma2, sigma2))
    values = np.empty((len(rows_idx), len(grid)), dtype=complex)
    for i, ridx in enumerate(rows_idx):
        x1 = grid[ridx]
        for j, x2 in enumerate(grid):
            fields = CountingFields((x1, x2), (0.0,))
            dyn = dynamical_mgf(model, fields, rho0, t).value
            values[i, j] = dyn * law.mgf((x1, x2))
    return rows_idx, values


def _fig4_point(payload):
    params, steps = payload
    try:
        pt = cumulants(LambdaModel(params), 2, method=Method.ANALYTIC_ORACLE)
        num = cumulants(
            LambdaPeriodicModel(params, steps=steps), 2,
            method=Method.PERIODIC_NUMERIC,
        )
        return (pt.flux, pt.noise, pt.snr, num.flux, num.noise, num.snr, "")
    except Exception as exc:
        return (math.nan,) * 6 + (f"{type(exc).__name__}: {exc}",)


@main.command()
@shared_options
def fig5(config, out, threads, method):
    """Signal-mode statistics vs pump-modulation amplitude."""
    def run():
        scenario = _overrides(_load(config, "fig5.yaml"), method, threads)
        had_errors = False
        for sweep in scenario.sweeps:
            header, rows, errs = _run_sweep(scenario, sweep, scenario.numerics.threads)
            path = _sweep_output_path(scenario, sweep, out, prefix="fig5")
            _write_csv(path, header, rows)
            click.echo(f"wrote {path} ({len(rows)} rows)")
            had_errors = had_errors or errs
        sys.exit(EXIT_PARTIAL if had_errors else EXIT_OK)

    _guard(run)


if __name__ == "__main__":
    main()
