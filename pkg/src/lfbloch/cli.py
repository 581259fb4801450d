"""Command-line front end: factor, compare, simulate, verify, sweep.

Exit codes: 0 success, 2 validation failure (bad arguments or config),
3 integrator failure (partial CSV flushed with a failure marker),
4 verification-check failure.  All numeric output uses 12 significant
digits, and identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from lfbloch import __version__
from lfbloch.config import (
    ConfigError,
    ScenarioConfig,
    SweepSpec,
    load_scenario,
    load_sweep,
    parse_scenario,
)
from lfbloch.dynamics import (
    DriveEnvelope,
    EffectiveParams,
    EmitterParams,
    MicroscopicParams,
    SystemState,
    Trajectory,
    integrate,
)
from lfbloch.medium import (
    HostSpecies,
    SingularHostError,
    level_shift,
    local_field_factor,
    rate_comparison,
)
from lfbloch.ode import StepSizeUnderflowError
from lfbloch.verify import (
    FitWindowError,
    SamplingTooCoarseError,
    default_fit_window,
    fit_decay,
    fit_frequency,
    predicted_slow_eigenvalue,
    run_battery,
    slow_eigenvalue,
    weak_excitation_trajectory,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INTEGRATION = 3
EXIT_VERIFY = 4

TRAJECTORY_HEADER = ["t", "re_s", "im_s", "w", "re_beta", "im_beta"]
SWEEP_HEADER = ["value", "re_ell", "im_ell", "gamma_fit", "shift", "error"]


def _fmt(x: float) -> str:
    """12 significant digits, compact."""
    return f"{x:.12g}"


def _fmt_complex(z: complex) -> str:
    return f"{_fmt(z.real)} {'+' if z.imag >= 0 else '-'} {_fmt(abs(z.imag))}i"


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_VALIDATION


# ---------------------------------------------------------------------------
# factor
# ---------------------------------------------------------------------------

def cmd_factor(args) -> int:
    try:
        try:
            host = HostSpecies(delta_b=args.delta_b, eps_b=args.eps_b,
                               gamma_b=args.gamma_b)
        except SingularHostError:
            if args.eps_b == 0.0:
                # no host at all: the vacuum limit is well defined
                host = None
            else:
                raise
        if args.gamma_a <= 0.0:
            raise ValueError(f"gamma_a must be positive, "
                             f"got {args.gamma_a!r}")
    except ValueError as exc:
        return _fail(str(exc))

    if host is None:
        ell, index = 1.0 + 0j, 1.0 + 0j
    else:
        factor = local_field_factor(host)
        ell, index = factor.ell, factor.refractive_index
    shift = abs(ell.imag) * args.gamma_a / 2.0

    if args.json:
        print(json.dumps({
            "ell": [ell.real, ell.imag],
            "refractive_index": [index.real, index.imag],
            "re_ell": ell.real,
            "im_ell": ell.imag,
            "level_shift": shift,
            "gamma_a": args.gamma_a,
        }, indent=2))
        return EXIT_OK

    print(f"ell              = {_fmt_complex(ell)}")
    print(f"refractive index = {_fmt_complex(index)}")
    print(f"Re(ell)          = {_fmt(ell.real)}")
    print(f"Im(ell)          = {_fmt(ell.imag)}")
    print(f"level shift      = {_fmt(shift)}  "
          f"(|Im(ell)|*gamma_a/2 at gamma_a = {_fmt(args.gamma_a)})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def cmd_compare(args) -> int:
    if args.step <= 0.0:
        return _fail(f"--step must be positive, got {args.step!r}")
    if args.n_max < args.n_min:
        return _fail(f"--n-max must be >= --n-min, got "
                     f"{args.n_max!r} < {args.n_min!r}")
    grid = []
    k = 0
    while True:
        n = args.n_min + k * args.step
        if n > args.n_max + 1e-9:
            break
        grid.append(n)
        k += 1
    try:
        rows = [rate_comparison(n) for n in grid]
    except ValueError as exc:
        return _fail(str(exc))

    lines = ["n,re_ell,virtual_cavity,onsager"]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in
                              (row.n, row.re_ell, row.virtual_cavity,
                               row.onsager)))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _write_trajectory_csv(path: str, traj: Trajectory | None,
                          failure: str | None = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        if traj is not None:
            has_beta = traj.beta is not None
            for i in range(len(traj.times)):
                row = [_fmt(traj.times[i]), _fmt(traj.s[i].real),
                       _fmt(traj.s[i].imag), _fmt(traj.w[i])]
                if has_beta:
                    row += [_fmt(traj.beta[i].real),
                            _fmt(traj.beta[i].imag)]
                else:
                    row += ["", ""]
                writer.writerow(row)
        if failure is not None:
            fh.write(f"# INTEGRATION FAILED: {failure}\n")


def _model_paths(base: str, models: list[str]) -> dict[str, str]:
    if len(models) == 1:
        return {models[0]: base}
    stem, ext = os.path.splitext(base)
    ext = ext or ".csv"
    return {m: f"{stem}_{m}{ext}" for m in models}


def _build_params(cfg: ScenarioConfig, model: str):
    if model == "A":
        return EffectiveParams(emitter=cfg.emitter, ell=cfg.resolved_ell())
    return MicroscopicParams(emitter=cfg.emitter, host=cfg.host)


def _initial_for(cfg: ScenarioConfig, model: str) -> SystemState:
    if model == "A":
        return SystemState(s=cfg.initial.s, w=cfg.initial.w)
    return cfg.initial


def _fit_summary(cfg: ScenarioConfig, model: str, traj: Trajectory) -> dict:
    """Fit the configured observable and compare to the predictions."""
    ell = cfg.resolved_ell()
    gamma_a = cfg.emitter.gamma_a
    lam_pred = predicted_slow_eigenvalue(ell, cfg.emitter)
    out: dict = {
        "predictions": {
            "ell": [ell.real, ell.imag],
            "population_rate": ell.real * gamma_a,
            "coherence_decay": -lam_pred.real,
            "frequency": lam_pred.imag,
        }
    }
    if model == "B":
        lam = slow_eigenvalue(_build_params(cfg, "B"))
        out["predictions"]["slow_eigenvalue"] = [lam.real, lam.imag]

    observable = cfg.fit.observable
    target = (ell.real * gamma_a if observable == "w_plus_1"
              else -lam_pred.real)
    window = cfg.fit.window
    try:
        if window is None:
            window = default_fit_window(target)
        fit = fit_decay(traj, observable=observable, window=window)
    except (FitWindowError, ValueError) as exc:
        out["fit"] = {"error": str(exc)}
        return out
    out["fit"] = {
        "observable": observable,
        "window": [window[0], window[1]],
        "rate": fit.rate,
        "residual": fit.residual,
    }
    errors = {}
    if target > 0:
        errors["rate_vs_prediction"] = abs(fit.rate - target) / target
    if model == "B" and observable == "abs_s":
        exact = -out["predictions"]["slow_eigenvalue"][0]
        if exact > 0:
            errors["rate_vs_eigenvalue"] = abs(fit.rate - exact) / exact
    out["relative_errors"] = errors
    try:
        freq = fit_frequency(traj, window=window)
        out["fit"]["frequency"] = freq.frequency
        out["fit"]["frequency_residual"] = freq.residual
    except (FitWindowError, SamplingTooCoarseError):
        pass
    return out


def _print_run_summary(model: str, path: str, traj: Trajectory,
                       summary: dict) -> None:
    print(f"model {model}: {len(traj.times)} samples -> {path}")
    print(f"  integrator: {traj.n_accepted} accepted, "
          f"{traj.n_rejected} rejected, {traj.n_rhs} rhs evaluations")
    pred = summary["predictions"]
    print(f"  ell = {_fmt_complex(complex(*pred['ell']))}; predicted "
          f"population rate {_fmt(pred['population_rate'])}, coherence "
          f"decay {_fmt(pred['coherence_decay'])}, frequency "
          f"{_fmt(pred['frequency'])}")
    if "slow_eigenvalue" in pred:
        print(f"  slow eigenvalue (exact) = "
              f"{_fmt_complex(complex(*pred['slow_eigenvalue']))}")
    fit = summary["fit"]
    if "error" in fit:
        print(f"  fit skipped: {fit['error']}")
        return
    print(f"  fit ({fit['observable']} on [{_fmt(fit['window'][0])}, "
          f"{_fmt(fit['window'][1])}]): Gamma_fit = {_fmt(fit['rate'])}")
    for name, value in summary.get("relative_errors", {}).items():
        print(f"    {name.replace('_', ' ')}: {_fmt(value)}")
    if "frequency" in fit:
        print(f"  fitted frequency = {_fmt(fit['frequency'])}")


def cmd_simulate(args) -> int:
    try:
        cfg = load_scenario(args.config)
    except (ConfigError, OSError) as exc:
        return _fail(str(exc))

    models = ["A", "B"] if cfg.model == "both" else [cfg.model]
    base_path = args.output or cfg.output.trajectory or "trajectory.csv"
    paths = _model_paths(base_path, models)

    try:
        runs = {m: (_build_params(cfg, m), _initial_for(cfg, m))
                for m in models}
    except ValueError as exc:
        return _fail(str(exc))

    trajectories: dict[str, Trajectory] = {}
    for m in models:
        params, initial = runs[m]
        try:
            traj = integrate(m, params, initial, span=cfg.integration.span,
                             tol=cfg.integration.tol,
                             n_points=cfg.integration.points)
        except StepSizeUnderflowError as exc:
            _write_trajectory_csv(paths[m], None, failure=str(exc))
            print(f"error: model {m} integration failed: {exc}",
                  file=sys.stderr)
            return EXIT_INTEGRATION
        except ValueError as exc:
            return _fail(str(exc))
        trajectories[m] = traj
        _write_trajectory_csv(paths[m], traj)

    summaries = {m: _fit_summary(cfg, m, trajectories[m]) for m in models}
    report: dict = {"model": cfg.model, "runs": {}}
    for m in models:
        traj = trajectories[m]
        report["runs"][m] = {
            "csv": paths[m],
            "samples": len(traj.times),
            "n_accepted": traj.n_accepted,
            "n_rejected": traj.n_rejected,
            "n_rhs": traj.n_rhs,
            **summaries[m],
        }
    if len(models) == 2:
        ta, tb = trajectories["A"], trajectories["B"]
        report["cross_model"] = {
            "max_coherence_deviation": float(max(abs(a - b) for a, b
                                                 in zip(ta.s, tb.s))),
            "max_inversion_deviation": float(max(abs(a - b) for a, b
                                                 in zip(ta.w, tb.w))),
        }

    if args.json:
        print(json.dumps(report, indent=2))
        return EXIT_OK
    for m in models:
        _print_run_summary(m, paths[m], trajectories[m], summaries[m])
    if "cross_model" in report:
        cross = report["cross_model"]
        print(f"cross-model deviation: max |s_A - s_B| = "
              f"{_fmt(cross['max_coherence_deviation'])}, max |w_A - w_B| "
              f"= {_fmt(cross['max_inversion_deviation'])}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    checks = run_battery()
    all_passed = all(c.passed for c in checks)
    if args.json:
        print(json.dumps({
            "passed": all_passed,
            "checks": [{
                "name": c.name,
                "passed": c.passed,
                "value": None if math.isnan(c.value) else c.value,
                "threshold": c.threshold,
                "detail": c.detail,
            } for c in checks],
        }, indent=2))
    else:
        for c in checks:
            status = " ok " if c.passed else "FAIL"
            value = "nan" if math.isnan(c.value) else _fmt(c.value)
            print(f"[{status}] {c.name}: value {value} vs threshold "
                  f"{_fmt(c.threshold)} - {c.detail}")
        print("all checks passed" if all_passed
              else "verification FAILED")
    return EXIT_OK if all_passed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _sweep_point(spec: SweepSpec, index: int) -> list[str]:
    value = spec.values[index]
    value_str = _fmt(value) if not isinstance(value, complex) \
        else _fmt_complex(value)
    try:
        cfg = parse_scenario(spec.point_raw(index),
                             source=f"point[{index}]")
        ell = cfg.resolved_ell()
        tol = cfg.integration.tol
        if spec.reduction == "population_rate_model_a":
            emitter = EmitterParams(delta_a=cfg.emitter.delta_a,
                                    eps_a=cfg.emitter.eps_a,
                                    gamma_a=cfg.emitter.gamma_a,
                                    drive=DriveEnvelope())
            params = EffectiveParams(emitter=emitter, ell=ell)
            rate_guess = ell.real * emitter.gamma_a
            window = default_fit_window(rate_guess)
            traj = integrate("A", params, SystemState(s=0j, w=1.0),
                             span=6.5 / rate_guess, tol=tol,
                             n_points=cfg.integration.points)
            gamma_fit = fit_decay(traj, observable="w_plus_1",
                                  window=window).rate
            shift = level_shift(ell, emitter.gamma_a)
        else:  # coherence_rate_model_b
            params = MicroscopicParams(emitter=cfg.emitter, host=cfg.host)
            traj = weak_excitation_trajectory(params, tol=tol)
            lam_pred = predicted_slow_eigenvalue(ell, cfg.emitter)
            window = default_fit_window(-lam_pred.real)
            gamma_fit = 2.0 * fit_decay(traj, observable="abs_s",
                                        window=window).rate
            shift = (fit_frequency(traj, window=window).frequency
                     - cfg.emitter.delta_a)
        return [value_str, _fmt(ell.real), _fmt(ell.imag),
                _fmt(gamma_fit), _fmt(shift), ""]
    except Exception as exc:  # noqa: BLE001 - recorded per point, run continues
        return [value_str, "", "", "", "", f"{type(exc).__name__}: {exc}"]


def cmd_sweep(args) -> int:
    try:
        spec = load_sweep(args.sweep)
    except (ConfigError, OSError) as exc:
        return _fail(str(exc))
    if args.workers < 1:
        return _fail(f"--workers must be >= 1, got {args.workers!r}")

    indices = range(len(spec.values))
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(lambda i: _sweep_point(spec, i), indices))
    else:
        rows = [_sweep_point(spec, i) for i in indices]

    if args.output:
        fh = open(args.output, "w", newline="", encoding="utf-8")
    else:
        fh = sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        writer.writerows(rows)
    finally:
        if args.output:
            fh.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfbloch",
        description="Local-field-corrected spontaneous emission: "
                    "factor algebra, Bloch-model simulation, and "
                    "verification of host elimination.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor",
                       help="local-field factor of a host species")
    p.add_argument("--delta-b", type=float, default=0.0,
                   help="host detuning (gamma_a units)")
    p.add_argument("--eps-b", type=float, required=True,
                   help="host NDD coupling strength (gamma_a units)")
    p.add_argument("--gamma-b", type=float, default=0.0,
                   help="host radiative rate (gamma_a units)")
    p.add_argument("--gamma-a", type=float, default=1.0,
                   help="emitter rate used for the level shift")
    p.add_argument("--json", action="store_true",
                   help="machine-readable output")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("compare",
                       help="rate-comparison table over real indices n")
    p.add_argument("--n-min", type=float, default=1.0)
    p.add_argument("--n-max", type=float, default=2.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate",
                       help="integrate a scenario file to a trajectory CSV")
    p.add_argument("config", help="scenario JSON file")
    p.add_argument("--output",
                   help="trajectory CSV path (overrides the config)")
    p.add_argument("--json", action="store_true",
                   help="JSON summary instead of text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify",
                       help="run the built-in verification battery")
    p.add_argument("--json", action="store_true",
                   help="machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep",
                       help="sweep one parameter and reduce each point")
    p.add_argument("sweep", help="sweep JSON file")
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel evaluation (default 1, deterministic "
                        "row order either way)")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_VALIDATION
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
