"""Configuration parsing, deterministic export, and the ``triad-lab`` CLI.

Configs are flat JSON documents validated strictly: unknown keys are
errors, because a silently ignored typo in a coupling or seed amplitude
would corrupt an adjudication run.  All floating-point output is written
with 17 significant digits so files round-trip exactly and identical
configs produce byte-identical artifacts.

Commands
--------
closed-form
    Sample the closed-form |f_j|^2 over a time window to CSV.
integrate
    Run the adaptive ODE oracle and export the trajectory.
simulate
    Split-step spectral run from carrier initial data; snapshot CSVs
    plus a manifest.
verify
    The adjudication protocol: closed form vs oracle, period
    measurement, conservation drifts, one pass/fail JSON report.
acoustic-gravity
    Map ocean parameters to the triad and sample the closed form.
convergence
    Temporal self-convergence study of the simulator.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import oracle, pde, physics, triad
from .errors import ConfigError, TriadLabError
from .triad import FormulaVariant

__all__ = [
    "COMMANDS",
    "RunConfig",
    "parse_config",
    "serialize_config",
    "run",
    "main",
]

COMMANDS = (
    "closed-form",
    "integrate",
    "simulate",
    "verify",
    "acoustic-gravity",
    "convergence",
)

_FLOAT_KEYS = (
    "gamma1", "gamma2", "gamma3",
    "alpha1", "alpha2", "alpha3",
    "delta1",
    "psi02_re", "psi02_im", "psi03_re", "psi03_im",
    "t_end", "tol", "length", "dt",
    "c", "omega", "h", "g",
    "phi0_g1", "phi0_g2",
)
_INT_KEYS = ("n", "snapshot_every", "sample_count", "seed")
_STR_KEYS = ("variant",)
_ALL_KEYS = ("command",) + _FLOAT_KEYS + _INT_KEYS + _STR_KEYS

_VARIANTS = ("as-printed", "oracle-consistent")

# Pass/fail tolerances of the verify report, pinned once here.
VERIFY_AMPLITUDE_RTOL = 1e-8
VERIFY_PERIOD_RTOL = 1e-6
VERIFY_HAMILTONIAN_RTOL = 1e-9
VERIFY_MANLEY_ROWE_RTOL = 1e-8


@dataclass(frozen=True)
class RunConfig:
    """Validated run description (one command plus its parameters)."""

    command: str
    gamma1: float = None
    gamma2: float = None
    gamma3: float = None
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0
    delta1: float = None
    psi02_re: float = None
    psi02_im: float = 0.0
    psi03_re: float = None
    psi03_im: float = 0.0
    t_end: float = None
    tol: float = None
    length: float = None
    dt: float = None
    c: float = None
    omega: float = None
    h: float = None
    g: float = None
    phi0_g1: float = None
    phi0_g2: float = None
    n: int = None
    snapshot_every: int = 0
    sample_count: int = None
    seed: int = 0
    variant: str = None


_REQUIRED = {
    "closed-form": ("gamma1", "gamma2", "gamma3", "delta1", "psi02_re",
                     "psi03_re", "variant"),
    "integrate": ("gamma1", "gamma2", "gamma3", "psi02_re", "psi03_re", "t_end"),
    "simulate": ("gamma1", "gamma2", "gamma3", "alpha1", "alpha2", "alpha3",
                  "delta1", "psi02_re", "psi03_re", "n", "length", "dt", "t_end"),
    "verify": ("gamma1", "gamma2", "gamma3", "psi02_re", "psi03_re"),
    "acoustic-gravity": ("h", "phi0_g1", "phi0_g2"),
    "convergence": ("gamma1", "gamma2", "gamma3", "delta1", "psi02_re",
                     "psi03_re", "n", "length", "dt", "t_end"),
}


def parse_config(text: str, command: str = None) -> RunConfig:
    """Parse and validate a flat JSON config document.

    ``command`` (from the CLI) must agree with a ``command`` key in the
    document when both are present.  Unknown keys, type mismatches and
    missing required keys all raise ConfigError naming the key.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config parse error at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")

    for key in doc:
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown config key {key!r}")

    doc_command = doc.get("command")
    if doc_command is not None and command is not None and doc_command != command:
        raise ConfigError(
            f"config command mismatch: document says {doc_command!r}, "
            f"CLI says {command!r}"
        )
    resolved_command = command if command is not None else doc_command
    if resolved_command is None:
        raise ConfigError("missing required key 'command'")
    if resolved_command not in COMMANDS:
        raise ConfigError(
            f"unknown command {resolved_command!r}; expected one of {COMMANDS}"
        )

    values = {"command": resolved_command}
    for key in _FLOAT_KEYS:
        if key in doc:
            value = doc[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"key {key!r} must be a number, got {value!r}")
            if not math.isfinite(float(value)):
                raise ConfigError(f"key {key!r} must be finite, got {value!r}")
            values[key] = float(value)
    for key in _INT_KEYS:
        if key in doc:
            value = doc[key]
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"key {key!r} must be an integer, got {value!r}")
            values[key] = int(value)
    for key in _STR_KEYS:
        if key in doc:
            value = doc[key]
            if not isinstance(value, str):
                raise ConfigError(f"key {key!r} must be a string, got {value!r}")
            values[key] = value

    if "variant" in values and values["variant"] not in _VARIANTS:
        raise ConfigError(
            f"variant must be one of {_VARIANTS}, got {values['variant']!r}"
        )

    for key in _REQUIRED[resolved_command]:
        if key not in values:
            raise ConfigError(
                f"command {resolved_command!r} requires config key {key!r}"
            )
    return RunConfig(**values)


def serialize_config(config: RunConfig) -> str:
    """Deterministic JSON text that re-parses to an equal RunConfig."""
    doc = {}
    for field in fields(RunConfig):
        value = getattr(config, field.name)
        if value is not None:
            doc[field.name] = value
    return dumps_deterministic(doc) + "\n"


# ---------------------------------------------------------------------------
# Deterministic writers
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    """17-significant-digit decimal form; round-trips exactly."""
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return "null"
    return format(value, ".17g")


def dumps_deterministic(obj, _indent=0) -> str:
    """JSON text with sorted keys and 17-digit floats (byte-stable)."""
    pad = "  " * _indent
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{pad}  {json.dumps(str(key))}: {dumps_deterministic(value, _indent + 1)}"
            for key, value in sorted(obj.items())
        ]
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        parts = [f"{pad}  {dumps_deterministic(v, _indent + 1)}" for v in items]
        return "[\n" + ",\n".join(parts) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _write_json(path, obj):
    with open(path, "w") as handle:
        handle.write(dumps_deterministic(obj) + "\n")


def _write_csv(path, header, rows):
    with open(path, "w") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_cell(v) for v in row) + "\n")


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return _fmt(value)


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------


def _params_from(config: RunConfig, default_delta1=None) -> triad.TriadParameters:
    delta1 = config.delta1 if config.delta1 is not None else default_delta1
    if delta1 is None:
        raise ConfigError("delta1 is required for this command")
    return triad.build_parameters(
        alpha=(config.alpha1, config.alpha2, config.alpha3),
        delta1=delta1,
        gamma=(config.gamma1, config.gamma2, config.gamma3),
    )


def _init_from(config: RunConfig) -> triad.InitialAmplitudes:
    return triad.InitialAmplitudes(
        (
            0.0,
            complex(config.psi02_re, config.psi02_im),
            complex(config.psi03_re, config.psi03_im),
        )
    )


def _variant_from(config: RunConfig, default="oracle-consistent") -> FormulaVariant:
    return FormulaVariant(config.variant if config.variant else default)


def _closed_form_rows(sol, times):
    times = np.asarray(times, dtype=float)
    values, flags = triad.amplitude_squared_array(sol, times)
    z = np.array([triad.z_of_t(sol, float(t)) for t in times])
    for i, t in enumerate(times):
        yield (
            t, z[i],
            values[0, i], values[1, i], values[2, i],
            bool(flags[0, i]), bool(flags[1, i]), bool(flags[2, i]),
        )


def _run_closed_form(config: RunConfig, prefix: str):
    params = _params_from(config)
    init = _init_from(config)
    variant = _variant_from(config)
    sol = triad.build_closed_form(params, init, variant)
    t_end = config.t_end if config.t_end is not None else sol.period
    count = config.sample_count if config.sample_count is not None else 256
    times = np.linspace(0.0, t_end, count) if count > 0 else np.empty(0)

    _write_csv(
        f"{prefix}_closed_form.csv",
        ("t", "z", "f1_sq", "f2_sq", "f3_sq", "nonphys1", "nonphys2", "nonphys3"),
        _closed_form_rows(sol, times),
    )
    report = {
        "command": "closed-form",
        "variant": variant.value,
        "k": sol.k,
        "u_rate": sol.u_rate,
        "quarter_period": sol.quarter_period,
        "period": sol.period,
        "sample_count": int(count),
        "t_end": float(t_end),
        "seed": config.seed,
        "pass": True,
    }
    _write_json(f"{prefix}_closed_form.json", report)
    return report


def _run_integrate(config: RunConfig, prefix: str):
    _params_from(config, default_delta1=1.0)  # validates resonance and signs
    init = _init_from(config)
    gamma = (config.gamma1, config.gamma2, config.gamma3)
    tol = config.tol if config.tol is not None else oracle.DEFAULT_TOL
    count = config.sample_count if config.sample_count is not None else 1024
    traj = oracle.integrate(init, gamma, config.t_end, tol=tol, samples=count)

    rows = (
        (
            traj.times[i],
            traj.amplitudes[i, 0].real, traj.amplitudes[i, 0].imag,
            traj.amplitudes[i, 1].real, traj.amplitudes[i, 1].imag,
            traj.amplitudes[i, 2].real, traj.amplitudes[i, 2].imag,
            traj.hamiltonian_re[i], traj.hamiltonian_im[i],
        )
        for i in range(len(traj))
    )
    _write_csv(
        f"{prefix}_trajectory.csv",
        ("t", "re_f1", "im_f1", "re_f2", "im_f2", "re_f3", "im_f3", "H_re", "H_im"),
        rows,
    )
    mr = oracle.manley_rowe_invariants(traj)
    report = {
        "command": "integrate",
        "t_end": config.t_end,
        "tol": tol,
        "sample_count": int(count),
        "hamiltonian_im_drift": traj.hamiltonian_im_drift,
        "manley_rowe_drift": mr.max_drift,
        "seed": config.seed,
        "pass": True,
    }
    _write_json(f"{prefix}_integrate.json", report)
    return report


def _carrier_initial_state(params, init, x):
    env = triad.product_envelope(1.0, 0.0, 1.0, 0.0)
    profile = triad.envelope_profile(env, params, x)
    return pde.FieldState(profile * np.asarray(init.psi0)[:, None], 0.0)


def _run_simulate(config: RunConfig, prefix: str):
    params = _params_from(config)
    init = _init_from(config)
    spec = pde.GridSpec(
        n=config.n,
        length=config.length,
        dt=config.dt,
        t_end=config.t_end,
        snapshot_every=config.snapshot_every,
    )
    x = spec.grid()
    snapshots = pde.simulate(_carrier_initial_state(params, init, x), params, spec)

    manifest_entries = []
    for index, snap in enumerate(snapshots):
        name = f"{prefix}_snapshot_{index:04d}.csv"
        rows = (
            (
                x[j],
                snap.psi[0, j].real, snap.psi[0, j].imag,
                snap.psi[1, j].real, snap.psi[1, j].imag,
                snap.psi[2, j].real, snap.psi[2, j].imag,
            )
            for j in range(spec.n)
        )
        _write_csv(
            name,
            ("x", "re_psi1", "im_psi1", "re_psi2", "im_psi2", "re_psi3", "im_psi3"),
            rows,
        )
        manifest_entries.append({"file": name, "t": snap.t})
    report = {
        "command": "simulate",
        "n": spec.n,
        "length": spec.length,
        "dt": spec.dt,
        "t_end": spec.t_end,
        "snapshot_every": spec.snapshot_every,
        "snapshots": manifest_entries,
        "seed": config.seed,
        "pass": True,
    }
    _write_json(f"{prefix}_manifest.json", report)
    return report


def _run_verify(config: RunConfig, prefix: str):
    params = _params_from(config, default_delta1=1.0)
    init = _init_from(config)
    variant = _variant_from(config)
    gamma = params.gamma
    tol = config.tol if config.tol is not None else oracle.DEFAULT_TOL
    count = config.sample_count if config.sample_count is not None else 200

    sol = triad.build_closed_form(params, init, variant)
    sol_ap = triad.build_closed_form(params, init, FormulaVariant.AS_PRINTED)
    sol_oc = triad.build_closed_form(params, init, FormulaVariant.ORACLE_CONSISTENT)

    # Closed form vs oracle over one period of the chosen variant.
    times = np.linspace(0.0, sol.period, count)
    traj = oracle.integrate(init, gamma, float(times[-1]), tol=tol, samples=times)
    cf_values, _ = triad.amplitude_squared_array(sol, times)
    oracle_values = traj.magnitudes_sq.T
    scale = np.max(oracle_values, axis=1)
    per_wave = np.max(np.abs(cf_values - oracle_values), axis=1) / scale
    max_rel_amp_err = float(np.max(per_wave))

    # Period measurement over >= 3 oscillations, plus conservation drifts.
    span = 3.25 * sol_oc.period
    long_samples = max(2048, 16 * count)
    long_traj = oracle.integrate(init, gamma, span, tol=tol, samples=long_samples)
    estimate = oracle.measure_period(long_traj)
    mr = oracle.manley_rowe_invariants(long_traj)
    amp_scale = float(np.max(np.abs(long_traj.amplitudes)))
    hamiltonian_scale = max(amp_scale**3, 1e-300)
    mr_scale = mr.scale

    period_ok = (
        abs(estimate.period - sol.period) <= VERIFY_PERIOD_RTOL * sol.period
    )
    amp_ok = max_rel_amp_err <= VERIFY_AMPLITUDE_RTOL
    ham_ok = (
        long_traj.hamiltonian_im_drift <= VERIFY_HAMILTONIAN_RTOL * hamiltonian_scale
    )
    mr_ok = mr.max_drift <= VERIFY_MANLEY_ROWE_RTOL * mr_scale
    passed = bool(amp_ok and period_ok and ham_ok and mr_ok)

    report = {
        "command": "verify",
        "variant": variant.value,
        "sample_count": int(count),
        "tol": tol,
        "max_rel_amp_err": max_rel_amp_err,
        "max_rel_amp_err_per_wave": [float(v) for v in per_wave],
        "measured_period": estimate.period,
        "measured_period_uncertainty": estimate.relative_uncertainty,
        "predicted_period_as_printed": sol_ap.period,
        "predicted_period_oracle_consistent": sol_oc.period,
        "period_ratio": estimate.period / sol_ap.period,
        "hamiltonian_drift": long_traj.hamiltonian_im_drift,
        "manley_rowe_drift": mr.max_drift,
        "tolerances": {
            "amplitude_rtol": VERIFY_AMPLITUDE_RTOL,
            "period_rtol": VERIFY_PERIOD_RTOL,
            "hamiltonian_rtol": VERIFY_HAMILTONIAN_RTOL,
            "manley_rowe_rtol": VERIFY_MANLEY_ROWE_RTOL,
        },
        "checks": {
            "amplitude": bool(amp_ok),
            "period": bool(period_ok),
            "hamiltonian": bool(ham_ok),
            "manley_rowe": bool(mr_ok),
        },
        "seed": config.seed,
        "pass": passed,
    }
    _write_json(f"{prefix}_verify.json", report)
    return report


def _run_acoustic_gravity(config: RunConfig, prefix: str):
    omega = config.omega
    g = config.g if config.g is not None else physics.DEFAULT_GRAVITY
    c = config.c if config.c is not None else physics.DEFAULT_SOUND_SPEED
    if omega is None:
        omega = physics.resonant_frequency(config.h, g)
    ocean = physics.OceanParameters(omega=omega, h=config.h, c=c, g=g)
    variant = _variant_from(config)
    app = physics.application_solution(ocean, config.phi0_g1, config.phi0_g2, variant)
    sol = app.solution

    t_end = config.t_end if config.t_end is not None else sol.period
    count = config.sample_count if config.sample_count is not None else 256
    times = np.linspace(0.0, t_end, count) if count > 0 else np.empty(0)
    _write_csv(
        f"{prefix}_closed_form.csv",
        ("t", "z", "f1_sq", "f2_sq", "f3_sq", "nonphys1", "nonphys2", "nonphys3"),
        _closed_form_rows(sol, times),
    )
    prefactors = physics.acoustic_prefactor_report(app.mapping, config.phi0_g2)
    report = {
        "command": "acoustic-gravity",
        "variant": variant.value,
        "omega": ocean.omega,
        "h": ocean.h,
        "c": ocean.c,
        "g": ocean.g,
        "delta": list(app.mapping.params.delta),
        "alpha": list(app.mapping.params.alpha),
        "gamma": list(app.mapping.params.gamma),
        "gamma_raw": list(app.mapping.gamma_raw),
        "resonance_residual": app.mapping.residual,
        "resonance_adjustment": app.mapping.adjustment,
        "k": sol.k,
        "u_rate": sol.u_rate,
        "period": sol.period,
        "published_rate_coefficient": app.published_rate_coefficient,
        "constructed_rate_coefficient": app.constructed_rate_coefficient,
        "acoustic_prefactors": prefactors,
        "sample_count": int(count),
        "t_end": float(t_end),
        "seed": config.seed,
        "pass": True,
    }
    _write_json(f"{prefix}_acoustic_gravity.json", report)
    return report


def _run_convergence(config: RunConfig, prefix: str):
    params = _params_from(config)
    init = _init_from(config)
    refinements = config.sample_count if config.sample_count is not None else 4
    spec = pde.GridSpec(
        n=config.n, length=config.length, dt=config.dt, t_end=config.t_end
    )
    x = spec.grid()
    # Multimode modulation so the study exercises the splitting error
    # rather than the carrier manifold, where the linear step is exact.
    two_pi = 2.0 * np.pi
    modulation = np.array(
        [
            1.0 + 0.2 * np.cos(two_pi * x / spec.length),
            1.0 + 0.15 * np.cos(two_pi * x / spec.length),
            1.0 + 0.1 * np.sin(two_pi * x / spec.length),
        ]
    )
    base = _carrier_initial_state(params, init, x).psi
    seeded = base * modulation
    seeded[0] += 0.2 * np.abs(np.asarray(init.psi0)[1]) * np.exp(
        1j * params.delta[0] * x
    )
    initial = pde.FieldState(seeded, 0.0)
    report_data = pde.convergence_study(initial, params, spec, refinements)
    report = {
        "command": "convergence",
        "dts": list(report_data.dts),
        "errors": list(report_data.errors),
        "orders": list(report_data.orders),
        "order_estimate": report_data.order_estimate,
        "monotone": report_data.monotone,
        "refinements": int(refinements),
        "seed": config.seed,
        "pass": bool(report_data.monotone),
    }
    _write_json(f"{prefix}_convergence.json", report)
    return report


_RUNNERS = {
    "closed-form": _run_closed_form,
    "integrate": _run_integrate,
    "simulate": _run_simulate,
    "verify": _run_verify,
    "acoustic-gravity": _run_acoustic_gravity,
    "convergence": _run_convergence,
}


def run(config: RunConfig, out_prefix: str = "out/run"):
    """Execute one command; returns (exit_status, report dict).

    Module errors are serialized into ``<prefix>_error.json`` and turn
    into a nonzero exit status instead of a traceback.
    """
    directory = os.path.dirname(out_prefix)
    if directory:
        os.makedirs(directory, exist_ok=True)
    try:
        report = _RUNNERS[config.command](config, out_prefix)
    except (TriadLabError, ValueError) as exc:
        report = {
            "command": config.command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
            "pass": False,
        }
        _write_json(f"{out_prefix}_error.json", report)
        return 1, report
    return (0 if report.get("pass", True) else 1), report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="triad-lab",
        description="Resonant three-wave triad laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to a JSON config")
        cmd.add_argument("--out", default="out/run", help="output path prefix")
        cmd.add_argument(
            "--variant",
            choices=_VARIANTS,
            default=None,
            help="override the config's closed-form variant",
        )
    args = parser.parse_args(argv)

    try:
        with open(args.config) as handle:
            text = handle.read()
        config = parse_config(text, command=args.command)
        if args.variant is not None:
            config = RunConfig(
                **{**{f.name: getattr(config, f.name) for f in fields(RunConfig)},
                   "variant": args.variant}
            )
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    status, report = run(config, out_prefix=args.out)
    if "error" in report:
        print(f"error: {report['error']['message']}", file=sys.stderr)
    elif config.command == "verify":
        print(f"verify: {'PASS' if report['pass'] else 'FAIL'} "
              f"(max_rel_amp_err={report['max_rel_amp_err']:.3e}, "
              f"period_ratio={report['period_ratio']:.9f})")
    return status


if __name__ == "__main__":
    sys.exit(main())
