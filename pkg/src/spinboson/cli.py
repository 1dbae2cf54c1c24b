"""Command-line front end: ``spinboson {dynamics,regime,sweep,validate}``.

Exit codes: 0 success, 1 numerical failure (``error.json`` written to the
output directory), 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import io
from .dynamics import QuadratureConfig, bloch_trajectory, markov_trajectory
from .entropy import entropy_trajectory, equilibrium_entropy
from .errors import NumericalError, ParameterError, SpinBosonError
from .model import ModelParams, solve_renormalization
from .oracles import DiscretizedBath, ed_simulate, volterra_solve
from .oracles.volterra import MAX_DT
from .self_energy import SelfEnergyEvaluator, find_pole, locate_alpha_c, locate_alpha_star
from .validation import LEVELS, run_suite, plan

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2
CLI_METHODS = ("full", "markov", "volterra", "ed")
TIME_AXES = ("omega_c", "delta_r")


class UsageError(SpinBosonError):
    pass


@dataclass(frozen=True)
class RunConfig:
    alphas: Tuple[float, ...] = (0.2,)
    delta: float = 0.1
    deltas: Tuple[float, ...] = ()
    omega_c: float = 1.0
    t_max: float = 100.0
    dt: float = 0.1
    methods: Tuple[str, ...] = ("full",)
    time_axis: str = "omega_c"
    out_dir: str = "out"
    jobs: int = 1
    level: str = "quick"
    ed_modes: int = 6
    ed_nmax: int = 3
    svg: bool = False
    abs_tol: float = QuadratureConfig.abs_tol
    rel_tol: float = QuadratureConfig.rel_tol
    peak_refinement: int = QuadratureConfig.peak_refinement
    oscillation_panel_factor: float = QuadratureConfig.oscillation_panel_factor
    alphas_given: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.dt > 0 or not math.isfinite(self.dt):
            raise UsageError("dt must be positive")
        if not self.t_max >= 0 or not math.isfinite(self.t_max):
            raise UsageError("tmax must be non-negative")
        if self.time_axis not in TIME_AXES:
            raise UsageError(f"time axis must be one of {TIME_AXES}")
        bad = [m for m in self.methods if m not in CLI_METHODS]
        if bad or not self.methods:
            raise UsageError(f"unknown method(s) {bad}; choose from {CLI_METHODS}")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")
        if self.level not in LEVELS:
            raise UsageError(f"level must be one of {LEVELS}")
        for a in self.alphas:
            for d in self.deltas or (self.delta,):
                try:
                    ModelParams(a, d, self.omega_c)
                except ParameterError as exc:
                    raise UsageError(str(exc)) from exc

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(abs_tol=self.abs_tol, rel_tol=self.rel_tol,
                                peak_refinement=self.peak_refinement,
                                oscillation_panel_factor=self.oscillation_panel_factor)

    def params(self, alpha: float, delta: Optional[float] = None) -> ModelParams:
        return ModelParams(alpha, self.delta if delta is None else delta, self.omega_c)


def _parse_range(text: str) -> Tuple[float, ...]:
    parts = [float(p) for p in text.split(":")]
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise UsageError(f"bad range {text!r}; expected start:stop:step with step > 0")
    start, stop, step = parts
    n = int(math.floor((stop - start) / step + 1e-9))
    return tuple(float(round(start + k * step, 12)) for k in range(n + 1))


def parse_grid(text: str) -> Tuple[float, ...]:
    """Comma list whose items are values or inclusive 'start:stop:step' ranges."""
    out: List[float] = []
    try:
        for item in str(text).split(","):
            item = item.strip()
            if not item:
                continue
            out.extend(_parse_range(item) if ":" in item else (float(item),))
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc
    return tuple(out)


def read_config_file(path) -> Dict[str, str]:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_KEY_ALIASES = {"alpha": "alphas", "tmax": "t_max", "delta_over_omega_c": "delta"}


def _coerce(key: str, value):
    kinds = {f.name: f.type for f in fields(RunConfig)}
    if key in ("alphas", "deltas"):
        return parse_grid(value)
    if key == "delta":
        return str(value)  # resolved once the subcommand is known
    if key == "methods":
        return tuple(m.strip() for m in str(value).split(",") if m.strip())
    kind = kinds[key]
    try:
        if kind == "bool":
            return str(value).lower() in ("1", "true", "yes", "on")
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc
    return str(value)


def build_config(args: argparse.Namespace, defaults: Optional[dict] = None) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    values: Dict[str, object] = dict(defaults or {})
    known = {f.name for f in fields(RunConfig)}
    if getattr(args, "config", None):
        for k, v in read_config_file(args.config).items():
            k = _KEY_ALIASES.get(k, k)
            if k not in known:
                raise UsageError(f"unknown config key {k!r}")
            values[k] = _coerce(k, v)
    flag_map = {"alpha": "alphas", "delta": "delta", "tmax": "t_max", "dt": "dt",
                "methods": "methods", "time_axis": "time_axis", "jobs": "jobs",
                "out_dir": "out_dir", "level": "level", "ed_modes": "ed_modes",
                "ed_nmax": "ed_nmax", "svg": "svg", "abs_tol": "abs_tol", "rel_tol": "rel_tol",
                "peak_refinement": "peak_refinement",
                "panel_factor": "oscillation_panel_factor"}
    for flag, key in flag_map.items():
        v = getattr(args, flag, None)
        if v is not None and v is not False:
            values[key] = _coerce(key, v)
    if "alphas" in values:
        values["alphas_given"] = True
    if "delta" in values:
        grid = parse_grid(values["delta"])
        if len(grid) != 1 and getattr(args, "command", "") != "sweep":
            raise UsageError("delta takes a single value here")
        if not grid:
            raise UsageError("empty delta")
        values["delta"] = grid[0]
        if getattr(args, "command", "") == "sweep":
            values["deltas"] = grid
    return RunConfig(**values)


def _tag(alpha: float, delta: float) -> str:
    return f"a{alpha:g}_d{delta:g}"


# ---------------------------------------------------------------- dynamics

def _time_grid(cfg: RunConfig, delta_r: float):
    """Returns (times in 1/omega_c, factor converting them to the output axis)."""
    scale = 1.0 if cfg.time_axis == "omega_c" else 1.0 / delta_r
    n = int(math.floor(cfg.t_max / cfg.dt + 1e-9))
    times = np.arange(n + 1) * cfg.dt * scale
    return times, 1.0 / scale


def _volterra_on(times, model):
    dt = times[1] - times[0] if len(times) > 1 else MAX_DT
    sub = max(1, int(math.ceil(dt * model.omega_c / MAX_DT - 1e-9)))
    fine = np.arange((len(times) - 1) * sub + 1) * (dt / sub)
    traj = volterra_solve(fine, model)
    pick = slice(None, None, sub)
    return replace(traj, times=times, sx=traj.sx[pick], sy=traj.sy[pick], sz=traj.sz[pick])


def _one_dynamics(cfg: RunConfig, alpha: float, method: str):
    params = cfg.params(alpha)
    model = solve_renormalization(params)
    times, to_axis = _time_grid(cfg, model.delta_r)
    if method == "full":
        traj = bloch_trajectory(times, SelfEnergyEvaluator(model), cfg.quadrature())
    elif method == "markov":
        traj = markov_trajectory(times, model, find_pole(SelfEnergyEvaluator(model)))
    elif method == "volterra":
        traj = _volterra_on(times, model)
    else:
        bath = DiscretizedBath.logarithmic(params, cfg.ed_modes, cfg.ed_nmax)
        traj = ed_simulate(times, params, bath)
    ent = entropy_trajectory(traj, model)
    out = Path(cfg.out_dir)
    stem = f"{_tag(alpha, cfg.delta)}_{method}"
    io.write_trajectory_csv(out / f"trajectory_{stem}.csv", traj, to_axis)
    io.write_entropy_csv(out / f"entropy_{stem}.csv", ent, to_axis)
    summary = ent.summary()
    summary["t_of_max"] *= to_axis
    io.write_json(out / f"summary_{stem}.json", {
        **summary, "alpha": alpha, "delta": cfg.delta, "method": method,
        "eta": model.eta, "delta_r": model.delta_r, "time_axis": cfg.time_axis})
    return alpha, method, traj, ent, to_axis


def _task_dynamics(args):
    cfg, alpha, method = args
    try:
        alpha, method, traj, ent, to_axis = _one_dynamics(cfg, alpha, method)
        return {"alpha": alpha, "method": method, "t": traj.times * to_axis,
                "s": ent.s_values, "s_eq": ent.s_eq}
    except NumericalError as exc:
        return {"alpha": alpha, "method": method, "error": f"{type(exc).__name__}: {exc}"}


def _pool_map(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def cmd_dynamics(cfg: RunConfig) -> int:
    tasks = [(cfg, a, m) for a in cfg.alphas for m in cfg.methods]
    results = _pool_map(_task_dynamics, tasks, cfg.jobs)
    failures = [r for r in results if "error" in r]
    out = Path(cfg.out_dir)
    if cfg.svg:
        good = [r for r in results if "error" not in r]
        if good:
            series = [(f"a={r['alpha']:g} {r['method']}", r["t"], r["s"]) for r in good]
            axis = "omega_c t" if cfg.time_axis == "omega_c" else "delta_r t"
            io.write_svg(out / f"entropy_d{cfg.delta:g}.svg", series,
                         title=f"entanglement entropy, delta = {cfg.delta:g}",
                         xlabel=axis, ylabel="S (bits)")
    for r in results:
        status = r.get("error", "ok")
        print(f"alpha={r['alpha']:g} method={r['method']}: {status}")
    if failures:
        io.write_json(out / "error.json", {"command": "dynamics", "failures": failures})
        return EXIT_NUMERICAL
    return EXIT_OK


# ---------------------------------------------------------------- regime

def _regime_point(args):
    alpha, delta, omega_c = args
    row = {"alpha": alpha, "delta": delta}
    try:
        model = solve_renormalization(ModelParams(alpha, delta, omega_c))
        row.update({"eta": model.eta, "delta_r": model.delta_r})
        row.update(find_pole(SelfEnergyEvaluator(model)).to_dict())
    except NumericalError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_regime(cfg: RunConfig) -> int:
    alphas = cfg.alphas if cfg.alphas_given else parse_grid("0:0.9:0.05")
    rows = _pool_map(_regime_point, [(a, cfg.delta, cfg.omega_c) for a in alphas], cfg.jobs)
    rows.sort(key=lambda r: r["alpha"])
    boundaries = {}
    try:
        ac = locate_alpha_c(cfg.delta, cfg.omega_c)
        boundaries["alpha_c"] = ac
        boundaries["alpha_star"] = locate_alpha_star(cfg.delta, cfg.omega_c, alpha_c=ac)
    except NumericalError as exc:
        boundaries["error"] = f"{type(exc).__name__}: {exc}"
    path = io.write_json(Path(cfg.out_dir) / f"regime_d{cfg.delta:g}.json",
                         {"delta": cfg.delta, "omega_c": cfg.omega_c, "points": rows,
                          "boundaries": boundaries})
    for r in rows:
        print(f"alpha={r['alpha']:g}: {r.get('label', r.get('error'))}")
    for k, v in boundaries.items():
        print(f"{k} = {v}")
    print(f"wrote {path}")
    return EXIT_OK


# ---------------------------------------------------------------- sweep

SWEEP_HEADER = ("delta", "alpha", "eta", "delta_r", "s_eq", "localized", "omega0",
                "gamma_at_pole", "label", "alpha_c", "error")


def _sweep_point(args):
    alpha, delta, omega_c = args
    row = dict.fromkeys(SWEEP_HEADER, None)
    row.update(delta=delta, alpha=alpha, error="")
    try:
        model = solve_renormalization(ModelParams(alpha, delta, omega_c))
        row.update(eta=model.eta, delta_r=model.delta_r, s_eq=equilibrium_entropy(model),
                   localized=model.localized, alpha_c=model.alpha_c)
        if not model.localized:
            rep = find_pole(SelfEnergyEvaluator(model))
            row.update(omega0=rep.omega0, gamma_at_pole=rep.gamma_at_pole, label=rep.label)
        else:
            row["label"] = "localized"
    except NumericalError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}".replace(",", ";")
    return row


def cmd_sweep(cfg: RunConfig) -> int:
    alphas = cfg.alphas if cfg.alphas_given else parse_grid("0:0.9:0.05")
    deltas = cfg.deltas or (cfg.delta,)
    tasks = [(a, d, cfg.omega_c) for d in deltas for a in alphas]
    rows = sorted(_pool_map(_sweep_point, tasks, cfg.jobs), key=lambda r: (r["delta"], r["alpha"]))
    out = Path(cfg.out_dir)
    path = io.write_csv(out / "sweep.csv", SWEEP_HEADER, ([r[k] for k in SWEEP_HEADER] for r in rows))
    if cfg.svg:
        series = []
        for d in deltas:
            sel = [r for r in rows if r["delta"] == d and r["s_eq"] is not None]
            series.append((f"delta={d:g}", [r["alpha"] for r in sel], [r["s_eq"] for r in sel]))
        io.write_svg(out / "sweep_s_eq.svg", series, title="equilibrium entropy",
                     xlabel="alpha", ylabel="S_eq (bits)")
    n_err = sum(1 for r in rows if r["error"])
    print(f"wrote {path} ({len(rows)} points, {n_err} with errors)")
    return EXIT_OK


# ---------------------------------------------------------------- validate

def _validate_task(args):
    suite, alpha, delta, level = args
    return run_suite(suite, alpha, delta, level).to_dict()


def cmd_validate(cfg: RunConfig) -> int:
    tasks = plan(cfg.level, cfg.alphas if cfg.alphas_given else None)
    results = _pool_map(_validate_task, [(s, a, cfg.delta, cfg.level) for s, a in tasks], cfg.jobs)
    all_pass = all(r["passed"] for r in results)
    path = io.write_json(Path(cfg.out_dir) / f"validation_{cfg.level}.json",
                         {"level": cfg.level, "delta": cfg.delta, "passed": all_pass,
                          "suites": results})
    for r in results:
        flag = "PASS" if r["passed"] else "FAIL"
        extra = f" ({r['details']['error']})" if "error" in r["details"] else ""
        print(f"{flag} {r['suite']:<9} alpha={r['alpha']:g} measured={r['measured']:.3e} "
              f"bound={r['bound']:.1e}{extra}")
    print(f"wrote {path}")
    return EXIT_OK if all_pass else EXIT_NUMERICAL


# ---------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser, *, methods=False, dyn=False):
    p.add_argument("--alpha", help="value, comma list, or start:stop:step")
    p.add_argument("--delta", help="tunneling delta in units of omega_c")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("--out-dir", dest="out_dir", help="output directory")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--svg", action="store_true", default=None, help="also write an SVG plot")
    if dyn:
        p.add_argument("--tmax", type=float, help="final time on the chosen axis")
        p.add_argument("--dt", type=float, help="sampling step on the chosen axis")
        p.add_argument("--time-axis", dest="time_axis", choices=TIME_AXES,
                       help="interpret tmax/dt in units of 1/omega_c or 1/delta_r")
        p.add_argument("--ed-modes", dest="ed_modes", type=int)
        p.add_argument("--ed-nmax", dest="ed_nmax", type=int)
        p.add_argument("--abs-tol", dest="abs_tol", type=float)
        p.add_argument("--rel-tol", dest="rel_tol", type=float)
        p.add_argument("--peak-refinement", dest="peak_refinement", type=int)
        p.add_argument("--panel-factor", dest="panel_factor", type=float)
    if methods:
        p.add_argument("--methods", help=f"comma list from {','.join(CLI_METHODS)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinboson",
                                     description="Ohmic spin-boson dynamics at zero temperature")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("dynamics", help="Bloch trajectories and entropy"), methods=True, dyn=True)
    _common(sub.add_parser("regime", help="pole, regime labels and critical couplings"))
    _common(sub.add_parser("sweep", help="equilibrium entropy over an (alpha, delta) grid"))
    p = sub.add_parser("validate", help="oracle agreement suites")
    _common(p)
    p.add_argument("--level", choices=LEVELS)
    return parser


COMMANDS = {"dynamics": cmd_dynamics, "regime": cmd_regime, "sweep": cmd_sweep,
            "validate": cmd_validate}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except (UsageError, ParameterError) as exc:
        print(f"spinboson: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](cfg)
    except NumericalError as exc:
        io.write_json(Path(cfg.out_dir) / "error.json",
                      {"command": args.command, "error": type(exc).__name__, "message": str(exc),
                       "config": asdict(cfg)})
        print(f"spinboson: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
