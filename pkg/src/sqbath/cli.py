"""Command-line front end: simulations, sweeps, boundary and criterion scans.

Subcommands: evolve, boundary, criterion, purity, fullmodel, sweep.  Each one
writes a CSV report ('#' metadata lines, then bare rows at 12 significant
digits) or, with --json, a single JSON document, and by default renders a PNG
figure next to the data file.

Configuration: flat key = value text file via --config, overridden by flags.
Exit codes: 0 success, 2 config error, 3 unphysical parameters, 4 truncation
overflow.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, bloch, boundary, cavity, criterion, metrics
from . import integrate, plotting, reporting
from .params import (
    BathParams,
    NegativeParam,
    SystemRates,
    TruncationOverflow,
    Unphysical,
    effective_bath,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNPHYSICAL = 3
EXIT_TRUNCATION = 4


class ConfigError(Exception):
    """Bad flag value, config entry, or grid specification."""


def _parse_grid(spec: str) -> np.ndarray:
    """Grid syntax: 'start:stop:count' (inclusive linspace) or 'a,b,c'."""
    spec = spec.strip()
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:count")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError("count must be >= 1")
            return np.linspace(start, stop, count)
        return np.array([float(tok) for tok in spec.split(",") if tok.strip()])
    except ValueError as exc:
        raise ConfigError(f"bad grid {spec!r}: {exc}") from exc


def _load_config(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


_CASTS = {
    "initial": str,
    "preset": str,
    "n": float,
    "m": float,
    "gamma_atomic": float,
    "omega": float,
    "kappa": float,
    "kappa_over_omega": float,
    "tau_max": float,
    "tau_points": int,
    "n_grid": str,
    "m_frac_grid": str,
    "theta": float,
    "phi": float,
    "n_max": int,
    "workers": int,
    "steady": lambda s: s.lower() in ("1", "true", "yes"),
    "tol": float,
}


def _overlay_config(args: argparse.Namespace) -> None:
    """Fill in flag values that are still None from the config file."""
    if not args.config:
        return
    config = _load_config(args.config)
    for key, raw in config.items():
        if not hasattr(args, key):
            raise ConfigError(f"unknown config key {key!r} for this command")
        if getattr(args, key) is None:
            cast = _CASTS.get(key, str)
            try:
                setattr(args, key, cast(raw))
            except ValueError as exc:
                raise ConfigError(f"config key {key!r}: {exc}") from exc


def _default(args: argparse.Namespace, **defaults) -> None:
    for key, value in defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, value)


def _out_path(args: argparse.Namespace, command: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(f"{command}.{'json' if args.json else 'csv'}")


def _integrator_metadata(args: argparse.Namespace) -> dict:
    if args.seedless_deterministic:
        return {"integrator": "fixed-rk4", "fixed_step": integrate.FIXED_STEP}
    return {"integrator": "adaptive-rk45",
            "rtol": args.tol if args.tol is not None else integrate.REL_TOL,
            "atol": integrate.ABS_TOL}


def _base_metadata(args: argparse.Namespace, command: str, **extra) -> dict:
    meta = {"generator": f"sqbath {__version__}", "command": command}
    meta.update(_integrator_metadata(args))
    meta.update(extra)
    return meta


def _bloch_evolve(args, v0, bath, tau_grid):
    method = "fixed" if args.seedless_deterministic else "adaptive"
    rtol = args.tol if args.tol is not None else integrate.REL_TOL
    return bloch.evolve(v0, bath, tau_grid, method=method, rtol=rtol)


def _tau_grid(args) -> np.ndarray:
    return np.linspace(0.0, args.tau_max, args.tau_points)


def _time_scale(args, gamma_eff: float | None = None) -> tuple[str, float]:
    """Column name and divisor converting scaled time to the output axis."""
    if not getattr(args, "physical_time", False):
        return "tau", 1.0
    if args.omega is None or args.kappa is None:
        raise ConfigError("--physical-time requires --omega and --kappa")
    if gamma_eff is None:
        gamma_eff = SystemRates(args.omega, args.kappa).gamma
    return "t", gamma_eff


def _maybe_plot(args, render) -> None:
    if not args.no_plot:
        render()


def _write_table(args, path: Path, columns, rows, metadata,
                 footer: dict | None = None) -> None:
    if args.json:
        reporting.write_json(path, reporting.rows_payload(
            columns, rows, metadata, footer))
    else:
        reporting.write_csv(path, columns, rows, metadata, footer)
    print(path)


EVOLVE_PRESETS = {
    "fig1a": {"initial": "gg", "n": 0.7, "m_values": (0.79, 0.902, 1.09)},
    "fig1b": {"initial": "ee", "n": 0.7, "m_values": (0.79, 0.902, 1.09)},
}


def cmd_evolve(args: argparse.Namespace) -> int:
    _overlay_config(args)
    _default(args, tau_max=15.0, tau_points=301, gamma_atomic=0.0)
    if args.preset:
        preset = EVOLVE_PRESETS.get(args.preset)
        if preset is None:
            raise ConfigError(f"unknown evolve preset {args.preset!r}")
        _default(args, initial=preset["initial"], n=preset["n"])
        m_values = preset["m_values"]
    else:
        _default(args, initial="gg")
        if args.n is None or args.m is None:
            raise ConfigError("evolve needs --n and --m (or --preset)")
        m_values = (args.m,)
    if args.initial not in bloch.INITIAL_STATES:
        raise ConfigError(f"unknown initial state {args.initial!r}")

    rates = None
    if args.gamma_atomic > 0.0:
        if args.omega is None or args.kappa is None:
            raise ConfigError("nonzero gamma-atomic needs --omega and --kappa")
        rates = SystemRates(args.omega, args.kappa, args.gamma_atomic)
    gamma_eff = rates.gamma + rates.atomic_gamma if rates else None
    time_name, divisor = _time_scale(args, gamma_eff)

    tau = _tau_grid(args)
    runs = []
    for m in m_values:
        bath = BathParams(args.n, m)
        work_bath = effective_bath(bath, rates) if rates else bath
        traj = _bloch_evolve(args, bloch.INITIAL_STATES[args.initial],
                             work_bath, tau)
        rows = []
        for i, t in enumerate(tau):
            v = traj.vector(i)
            rows.append((
                t / divisor if time_name == "t" else t,
                metrics.x_state_negativity(v.p_ee, v.p_eg, v.p_ge, v.p_gg, v.coh),
                metrics.x_state_linear_entropy(v.p_ee, v.p_eg, v.p_ge, v.p_gg, v.coh),
                v.p_ee, v.p_eg, v.p_ge, v.coh,
            ))
        runs.append((m, rows))

    columns = [time_name, "e_npt", "s_l", "p_ee", "p_eg", "p_ge", "coh"]
    out = _out_path(args, "evolve")
    meta_common = dict(initial=args.initial, n=args.n,
                       gamma_atomic=args.gamma_atomic)
    if args.json:
        payload = {
            "metadata": {k: str(v) for k, v in
                         _base_metadata(args, "evolve", **meta_common).items()},
            "runs": [dict(m=m, **reporting.rows_payload(columns, rows, {"m": m}))
                     for m, rows in runs],
        }
        reporting.write_json(out, payload)
        print(out)
    else:
        for m, rows in runs:
            path = out if len(runs) == 1 else out.with_name(
                f"{out.stem}_m{m:g}{out.suffix}")
            meta = _base_metadata(args, "evolve", **meta_common, m=m)
            _write_table(args, path, columns, rows, meta)

    def render():
        png = out.with_suffix(".png")
        series = {f"m = {m:g}": np.array([r[1] for r in rows])
                  for m, rows in runs}
        x = [r[0] for r in runs[0][1]]
        plotting.line_plot(png, x, series,
                           "t" if time_name == "t" else "gamma t",
                           "negativity")
        print(png)

    _maybe_plot(args, render)
    return EXIT_OK


def cmd_boundary(args: argparse.Namespace) -> int:
    _overlay_config(args)
    _default(args, n_grid="0:2:21")
    n_values = _parse_grid(args.n_grid)
    if n_values.size == 0 or np.any(n_values < 0.0):
        raise ConfigError("boundary needs a nonempty, nonnegative n grid")
    columns = ["n", "boundary_numeric", "closed_form",
               "closed_form_reading_1", "closed_form_reading_2",
               "sqrt_physical_max"]
    rows = []
    for n in n_values:
        readings = boundary.boundary_closed_form_readings(n)
        rows.append((
            n,
            boundary.boundary_numeric(n),
            boundary.boundary_closed_form(n),
            readings["reading_1"],
            readings["reading_2"],
            math.sqrt(n * (n + 1.0)),
        ))
    out = _out_path(args, "boundary")
    _write_table(args, out, columns, rows,
                 _base_metadata(args, "boundary", n_grid=args.n_grid))

    def render():
        png = out.with_suffix(".png")
        x = [r[0] for r in rows]
        plotting.line_plot(png, x, {
            "numeric": np.array([r[1] for r in rows]),
            "closed form": np.array([r[2] for r in rows]),
            "physical ceiling": np.array([r[5] for r in rows]),
        }, "n", "threshold m")
        print(png)

    _maybe_plot(args, render)
    return EXIT_OK


def cmd_criterion(args: argparse.Namespace) -> int:
    _overlay_config(args)
    _default(args, n_grid="0.05:2:20", m_frac_grid="0:1:21",
             theta=math.pi / 2.0, phi=math.pi / 2.0)
    n_values = _parse_grid(args.n_grid)
    fracs = _parse_grid(args.m_frac_grid)
    if n_values.size == 0 or fracs.size == 0:
        raise ConfigError("criterion needs nonempty n and m-fraction grids")
    if np.any(n_values < 0.0) or np.any(fracs < 0.0) or np.any(fracs > 1.0):
        raise ConfigError("criterion grids must be nonnegative, fractions <= 1")
    angles = criterion.InitialAngles(args.theta, args.phi)
    columns = ["n", "m", "theta", "phi", "lhs", "rhs", "generates"]
    rows = []
    for n in n_values:
        ceiling = math.sqrt(n * (n + 1.0))
        for frac in fracs:
            m = frac * ceiling
            blocks = criterion.build_blocks(BathParams(n, m))
            res = criterion.entanglement_condition(blocks, angles)
            rows.append((n, m, args.theta, args.phi, res.lhs, res.rhs,
                         res.generates))
    out = _out_path(args, "criterion")
    _write_table(args, out, columns, rows,
                 _base_metadata(args, "criterion", n_grid=args.n_grid,
                                m_frac_grid=args.m_frac_grid,
                                theta=args.theta, phi=args.phi))

    def render():
        png = out.with_suffix(".png")
        plotting.region_plot(png, [r[0] for r in rows], [r[1] for r in rows],
                             [r[6] for r in rows], "n", "m", "generates")
        print(png)

    _maybe_plot(args, render)
    return EXIT_OK


def _steady_purity_rows(n_values, fracs):
    rows = []
    for n in n_values:
        ceiling = math.sqrt(n * (n + 1.0))
        for frac in fracs:
            m = frac * ceiling
            v = bloch.steady_state(BathParams(n, m))
            rows.append((n, m, metrics.x_state_linear_entropy(
                v.p_ee, v.p_eg, v.p_ge, v.p_gg, v.coh)))
    return rows


def cmd_purity(args: argparse.Namespace) -> int:
    _overlay_config(args)
    _default(args, tau_max=15.0, tau_points=301, initial="gg", steady=False)
    out = _out_path(args, "purity")

    if args.preset == "fig2a" or (not args.preset and not args.steady):
        if args.preset == "fig2a":
            n = 0.7
            m_values = (math.sqrt(n * (n + 1.0)), 1.05, 0.8)
        else:
            if args.n is None or args.m is None:
                raise ConfigError("purity needs --n and --m (or --preset)")
            n, m_values = args.n, (args.m,)
        tau = _tau_grid(args)
        time_name, divisor = _time_scale(args)
        series = []
        for m in m_values:
            traj = _bloch_evolve(args, bloch.INITIAL_STATES[args.initial],
                                 BathParams(n, m), tau)
            entropies = []
            for i in range(tau.size):
                v = traj.vector(i)
                entropies.append(metrics.x_state_linear_entropy(
                    v.p_ee, v.p_eg, v.p_ge, v.p_gg, v.coh))
            series.append(entropies)
        columns = [time_name] + [f"s_l_{i + 1}" for i in range(len(m_values))]
        rows = [(tau[i] / divisor if time_name == "t" else tau[i],
                 *[s[i] for s in series]) for i in range(tau.size)]
        meta = _base_metadata(args, "purity", mode="transient", n=n,
                              initial=args.initial,
                              m_values=",".join(f"{m:.12g}" for m in m_values))
        _write_table(args, out, columns, rows, meta)

        def render():
            png = out.with_suffix(".png")
            plotting.line_plot(
                png, [r[0] for r in rows],
                {f"m = {m:g}": np.array(s) for m, s in zip(m_values, series)},
                "t" if time_name == "t" else "gamma t", "linear entropy")
            print(png)

        _maybe_plot(args, render)
        return EXIT_OK

    if args.preset == "fig2b":
        n_values = np.array([0.7, 0.9])
        fracs = _parse_grid(args.m_frac_grid or "0:1:41")
    elif args.preset:
        raise ConfigError(f"unknown purity preset {args.preset!r}")
    else:
        if args.n is None:
            raise ConfigError("steady purity needs --n")
        n_values = np.array([args.n])
        fracs = _parse_grid(args.m_frac_grid or "0:1:41")
    if np.any(fracs < 0.0) or np.any(fracs > 1.0):
        raise ConfigError("m fractions must lie in [0, 1]")
    rows = _steady_purity_rows(n_values, fracs)
    columns = ["n", "m", "s_l_steady"]
    meta = _base_metadata(args, "purity", mode="steady",
                          n_values=",".join(f"{n:g}" for n in n_values))
    _write_table(args, out, columns, rows, meta)

    def render():
        png = out.with_suffix(".png")
        series = {
            f"n = {n:g}": np.array([r[2] for r in rows if r[0] == n])
            for n in n_values
        }
        plotting.line_plot(png, fracs, series, "m / sqrt(n(n+1))",
                           "steady linear entropy")
        print(png)

    _maybe_plot(args, render)
    return EXIT_OK


def cmd_fullmodel(args: argparse.Namespace) -> int:
    _overlay_config(args)
    _default(args, n=0.3, omega=1.0, kappa_over_omega=20.0, n_max=4,
             initial="gg", tau_max=5.0, tau_points=26)
    if args.m is None:
        args.m = math.sqrt(args.n * (args.n + 1.0))
    kappa = args.kappa if args.kappa is not None \
        else args.kappa_over_omega * args.omega
    rates = SystemRates(args.omega, kappa)
    bath = BathParams(args.n, args.m)
    tau = _tau_grid(args)
    method = "fixed" if args.seedless_deterministic else "adaptive"
    comparison = cavity.compare_with_reduced(rates, bath, args.n_max, tau,
                                             initial=args.initial,
                                             method=method)
    time_name, divisor = _time_scale(args, rates.gamma)
    columns = [time_name, "trace_distance_between_models", "e_npt_full",
               "e_npt_reduced"]
    rows = [(tau[i] / divisor if time_name == "t" else tau[i],
             comparison.trace_distances[i],
             comparison.negativity_full[i],
             comparison.negativity_reduced[i]) for i in range(tau.size)]
    out = _out_path(args, "fullmodel")
    meta = _base_metadata(args, "fullmodel", n=args.n, m=args.m,
                          omega=args.omega, kappa=kappa, n_max=args.n_max,
                          initial=args.initial)
    _write_table(args, out, columns, rows, meta,
                 footer={"max_trace_distance": comparison.max_trace_distance})

    def render():
        png = out.with_suffix(".png")
        plotting.line_plot(png, [r[0] for r in rows], {
            "trace distance": comparison.trace_distances,
            "negativity (composite)": comparison.negativity_full,
            "negativity (reduced)": comparison.negativity_reduced,
        }, "t" if time_name == "t" else "gamma t", "")
        print(png)

    _maybe_plot(args, render)
    return EXIT_OK


def _sweep_point(point: tuple[float, float]):
    n, m = point
    v = bloch.steady_state(BathParams(n, m))
    neg = metrics.x_state_negativity(v.p_ee, v.p_eg, v.p_ge, v.p_gg, v.coh)
    s_l = metrics.x_state_linear_entropy(v.p_ee, v.p_eg, v.p_ge, v.p_gg, v.coh)
    return (n, m, neg, s_l, neg > 1e-12)


def cmd_sweep(args: argparse.Namespace) -> int:
    _overlay_config(args)
    _default(args, n_grid="0.05:2:20", m_frac_grid="0:1:21", workers=1)
    n_values = _parse_grid(args.n_grid)
    fracs = _parse_grid(args.m_frac_grid)
    if n_values.size == 0 or fracs.size == 0:
        raise ConfigError("sweep needs nonempty n and m-fraction grids")
    if np.any(n_values < 0.0) or np.any(fracs < 0.0) or np.any(fracs > 1.0):
        raise ConfigError("sweep grids must be nonnegative, fractions <= 1")
    points = [(float(n), float(frac) * math.sqrt(n * (n + 1.0)))
              for n in n_values for frac in fracs]
    if args.workers and args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_point, points, chunksize=8))
    else:
        rows = [_sweep_point(p) for p in points]
    columns = ["n", "m", "negativity_ss", "linear_entropy_ss", "entangled"]
    out = _out_path(args, "sweep")
    _write_table(args, out, columns, rows,
                 _base_metadata(args, "sweep", n_grid=args.n_grid,
                                m_frac_grid=args.m_frac_grid,
                                workers=args.workers))

    def render():
        png = out.with_suffix(".png")
        plotting.region_plot(png, [r[0] for r in rows], [r[1] for r in rows],
                             [r[4] for r in rows], "n", "m", "entangled")
        print(png)

    _maybe_plot(args, render)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--out", help="output file path")
    common.add_argument("--json", action="store_true",
                        help="write a JSON document instead of CSV")
    common.add_argument("--seedless-deterministic", action="store_true",
                        help="fixed-step integration, bit-identical reruns")
    common.add_argument("--tol", type=float, default=None,
                        help="relative tolerance of the adaptive integrator")
    common.add_argument("--no-plot", action="store_true",
                        help="skip the PNG figure")

    parser = argparse.ArgumentParser(
        prog="sqbath",
        description="Two qubits in a broadband squeezed field: simulation "
                    "and analysis reports.")
    parser.add_argument("--version", action="version",
                        version=f"sqbath {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", parents=[common],
                       help="reduced-model trajectory with entanglement "
                            "and purity columns")
    p.add_argument("--initial", choices=sorted(bloch.INITIAL_STATES))
    p.add_argument("--n", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--gamma-atomic", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--tau-max", type=float)
    p.add_argument("--tau-points", type=int)
    p.add_argument("--preset", choices=sorted(EVOLVE_PRESETS))
    p.add_argument("--physical-time", action="store_true")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("boundary", parents=[common],
                       help="steady-state entanglement threshold versus n")
    p.add_argument("--n-grid")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("criterion", parents=[common],
                       help="short-time generation inequality over a grid")
    p.add_argument("--n-grid")
    p.add_argument("--m-frac-grid")
    p.add_argument("--theta", type=float)
    p.add_argument("--phi", type=float)
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("purity", parents=[common],
                       help="linear entropy, transient or steady-state")
    p.add_argument("--preset", choices=["fig2a", "fig2b"])
    p.add_argument("--initial", choices=sorted(bloch.INITIAL_STATES))
    p.add_argument("--n", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--steady", action="store_true", default=None)
    p.add_argument("--m-frac-grid")
    p.add_argument("--tau-max", type=float)
    p.add_argument("--tau-points", type=int)
    p.add_argument("--omega", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--physical-time", action="store_true")
    p.set_defaults(func=cmd_purity)

    p = sub.add_parser("fullmodel", parents=[common],
                       help="composite-model run compared against the "
                            "reduced model")
    p.add_argument("--n", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--kappa-over-omega", type=float)
    p.add_argument("--n-max", type=int)
    p.add_argument("--initial", choices=sorted(bloch.INITIAL_STATES))
    p.add_argument("--tau-max", type=float)
    p.add_argument("--tau-points", type=int)
    p.add_argument("--physical-time", action="store_true")
    p.set_defaults(func=cmd_fullmodel)

    p = sub.add_parser("sweep", parents=[common],
                       help="steady-state entanglement and purity over an "
                            "(n, m) grid")
    p.add_argument("--n-grid")
    p.add_argument("--m-frac-grid")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NegativeParam, Unphysical) as exc:
        print(f"unphysical parameters: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except TruncationOverflow as exc:
        print(f"truncation overflow: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION


if __name__ == "__main__":
    sys.exit(main())
