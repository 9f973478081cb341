"""Command-line driver: point estimates, y-grid sweeps, figure data.

Subcommands:
  estimate  -- all requested methods at a single observation y
  sweep     -- a grid of y values written as CSV (plus a rendered PNG)
  figures   -- regenerate the data behind the five comparison figures
"""

import argparse
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .estimators import (
    EstimateResult,
    congdon_coupled_ex2,
    congdon_estimate,
    gibbs_corrected,
    scott_estimate,
)
from .models import (
    ExampleConfig,
    ModelSet,
    build_example,
    exact_posterior_probs,
)
from .samplers import RandomStream, sample_within_model_posteriors

CSV_SCHEMA = "sweep-v1"
METHOD_ORDER = ("exact", "scott", "congdon", "gibbs", "coupled")
DEFAULT_FIGURE_SEED = 20080214

# y ranges chosen to cover the qualitative behavior of each suite; the
# binomial suites sweep their full integer observation space.
DEFAULT_GRIDS = {
    "ex1": (0.05, 3.0, 60),
    "ex2": (-3.0, 8.0, 56),
    "ex4": (-3.0, 12.0, 61),
}


class UsageError(ValueError):
    """Invalid configuration; maps to exit status 2."""


@dataclass
class RunConfig:
    example: ExampleConfig
    methods: tuple
    y_grid: np.ndarray
    T: int = 10_000
    seed: int = 0
    burn_in: int = 0
    output_path: Optional[str] = None

    def __post_init__(self):
        if not self.methods:
            raise UsageError("at least one method is required")
        for m in self.methods:
            if m not in METHOD_ORDER:
                raise UsageError(f"unknown method {m!r}; choose from {METHOD_ORDER}")
        if "coupled" in self.methods and self.example.example_id != "ex2":
            raise UsageError("the coupled method is only defined for ex2")
        if self.T < 1:
            raise UsageError(f"T must be >= 1, got {self.T}")
        if self.burn_in < 0:
            raise UsageError(f"burn-in must be >= 0, got {self.burn_in}")
        grid = np.asarray(self.y_grid, dtype=float)
        if grid.size < 1 or np.any(np.diff(grid) <= 0):
            raise UsageError("y grid must be non-empty and strictly increasing")
        self.y_grid = grid
        self.methods = tuple(sorted(set(self.methods), key=METHOD_ORDER.index))


@dataclass
class SweepTable:
    """Per-y results for the requested methods, ready for CSV and plots."""

    example_id: str
    parameters: dict
    methods: tuple
    T: int
    seed: int
    burn_in: int
    y_values: np.ndarray
    probs: dict = field(default_factory=dict)      # method -> array of P(M=1|y)
    stderrs: dict = field(default_factory=dict)    # method -> array (exact absent)

    def column(self, method):
        return self.probs[method]

    def stderr_column(self, method):
        return self.stderrs[method]


def _estimate_point(model_set: ModelSet, y: float, method: str, T: int,
                    burn_in: int, rng: RandomStream) -> EstimateResult:
    if method == "exact":
        probs = exact_posterior_probs(model_set, y)
        return EstimateResult(probs=probs, stderrs=np.zeros(model_set.D),
                              method="Exact", T=0, seed=rng.seed)
    if method == "scott":
        samples = sample_within_model_posteriors(model_set, y, T, rng)
        return scott_estimate(model_set, samples)
    if method == "congdon":
        samples = sample_within_model_posteriors(model_set, y, T, rng)
        return congdon_estimate(model_set, samples)
    if method == "gibbs":
        return gibbs_corrected(model_set, y, T, rng, burn_in=burn_in)
    if method == "coupled":
        return congdon_coupled_ex2(y, T, rng)
    raise UsageError(f"unknown method {method!r}")


def run_sweep(config: RunConfig) -> SweepTable:
    """Evaluate every requested method over the y grid.

    Each (grid point, method) pair gets its own substream derived from
    the master seed, so refining the grid or dropping a method never
    perturbs the remaining cells.
    """
    model_set = build_example(config.example)
    _validate_grid_for_example(config.example, config.y_grid)
    master = RandomStream(config.seed)
    table = SweepTable(
        example_id=config.example.example_id,
        parameters=dict(config.example.parameters),
        methods=config.methods,
        T=config.T, seed=config.seed, burn_in=config.burn_in,
        y_values=config.y_grid,
    )
    n = config.y_grid.size
    for method in config.methods:
        table.probs[method] = np.empty(n)
        if method != "exact":
            table.stderrs[method] = np.empty(n)
    for i, y in enumerate(config.y_grid):
        point_stream = master.substream(i)
        for method in config.methods:
            rng = point_stream.substream(METHOD_ORDER.index(method))
            res = _estimate_point(model_set, float(y), method, config.T,
                                  config.burn_in, rng)
            table.probs[method][i] = res.probs[0]
            if method != "exact":
                table.stderrs[method][i] = res.stderrs[0]
    return table


def _validate_grid_for_example(example: ExampleConfig, grid) -> None:
    ex = example.example_id
    if ex.startswith("ex3"):
        n = example.parameters["n"]
        for y in np.asarray(grid):
            if not float(y).is_integer() or not 0 <= y <= n:
                raise UsageError(
                    f"{ex} observations must be integers in [0, {n}], got {y}"
                )
    elif ex == "ex1":
        if np.any(np.asarray(grid) <= 0):
            raise UsageError("ex1 observations must be positive")


def _fmt(x: float) -> str:
    return "%.17g" % x


def write_sweep_csv(table: SweepTable, stream) -> None:
    params = " ".join(f"{k}={v:g}" for k, v in sorted(table.parameters.items())) or "-"
    stream.write(f"# schema: {CSV_SCHEMA}\n")
    stream.write(f"# tool: modelprobs {__version__}\n")
    stream.write(f"# example: {table.example_id}\n")
    stream.write(f"# parameters: {params}\n")
    stream.write(f"# methods: {','.join(table.methods)}\n")
    stream.write(f"# T: {table.T}\n")
    stream.write(f"# seed: {table.seed}\n")
    stream.write(f"# burn_in: {table.burn_in}\n")
    cols = ["y"]
    for m in table.methods:
        cols.append(m)
        if m != "exact":
            cols.append(f"{m}_se")
    stream.write(",".join(cols) + "\n")
    for i, y in enumerate(table.y_values):
        cells = [_fmt(y)]
        for m in table.methods:
            cells.append(_fmt(table.probs[m][i]))
            if m != "exact":
                cells.append(_fmt(table.stderrs[m][i]))
        stream.write(",".join(cells) + "\n")


def save_sweep(table: SweepTable, csv_path, plot: bool = True, title=None):
    import os

    with open(csv_path, "w", newline="") as fh:
        write_sweep_csv(table, fh)
    if plot:
        from .plotting import render_sweep_figure

        png_path = os.path.splitext(str(csv_path))[0] + ".png"
        render_sweep_figure(table, png_path, title=title)
    return csv_path


# ---------------------------------------------------------------------------
# figures: the five comparison-figure datasets
# ---------------------------------------------------------------------------

def figure_specs():
    """(filename stem, example config, methods, T, grid) per figure panel."""
    lin = np.linspace
    specs = [
        ("fig1", ExampleConfig("ex1"),
         ("exact", "scott", "congdon", "gibbs"), 1_000_000,
         lin(*DEFAULT_GRIDS["ex1"][:2], DEFAULT_GRIDS["ex1"][2])),
        ("fig2", ExampleConfig("ex2"),
         ("exact", "scott", "congdon", "coupled"), 10_000,
         lin(*DEFAULT_GRIDS["ex2"][:2], DEFAULT_GRIDS["ex2"][2])),
        # the caption and body text disagree on m; ship both
        ("fig3_m510", ExampleConfig("ex3-2model", {"n": 15, "m": 510.0}),
         ("exact", "congdon"), 10_000, np.arange(16.0)),
        ("fig3_m100", ExampleConfig("ex3-2model", {"n": 15, "m": 100.0}),
         ("exact", "congdon"), 10_000, np.arange(16.0)),
    ]
    three_model = [
        (17, 2.5, 12.5, 501.5, 500.0),
        (25, 1.5, 4.0, 540.0, 200.0),
        (13, 0.5, 100.5, 20.0, 10.0),
        (12, 0.3, 1.8, 200.0, 200.0),
    ]
    for i, (n, a, b, c, d) in enumerate(three_model, start=1):
        specs.append((
            f"fig4_panel{i}",
            ExampleConfig("ex3-3model", {"n": n, "a": a, "b": b, "c": c, "d": d}),
            ("exact", "congdon"), 10_000, np.arange(float(n + 1)),
        ))
    ex4_panels = [(0.24, 8.9), (0.56, 0.7), (4.1, 0.46), (0.98, 0.081)]
    for i, (a, b) in enumerate(ex4_panels, start=1):
        specs.append((
            f"fig5_panel{i}", ExampleConfig("ex4", {"a": a, "b": b}),
            ("exact", "congdon"), 10_000,
            lin(*DEFAULT_GRIDS["ex4"][:2], DEFAULT_GRIDS["ex4"][2]),
        ))
    return specs


def cmd_figures(output_dir, seed: int = DEFAULT_FIGURE_SEED,
                T_override: Optional[int] = None, plot: bool = True,
                only: Optional[Sequence[str]] = None, verbose: bool = True):
    """Write one CSV (and PNG) per figure panel into `output_dir`."""
    import os

    os.makedirs(output_dir, exist_ok=True)
    written = []
    for stem, example, methods, T, grid in figure_specs():
        if only is not None and stem not in only:
            continue
        config = RunConfig(example=example, methods=methods, y_grid=grid,
                           T=T_override or T, seed=seed)
        table = run_sweep(config)
        path = os.path.join(output_dir, stem + ".csv")
        save_sweep(table, path, plot=plot, title=stem)
        written.append(path)
        if verbose:
            print(f"wrote {path}")
    return written


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parse_params(args) -> dict:
    params = {}
    for name in ("n", "m", "a", "b"):
        val = getattr(args, name, None)
        if val is not None:
            params[name] = val
    if getattr(args, "params", None):
        for item in args.params.split(","):
            if "=" not in item:
                raise UsageError(f"--params entries must be key=value, got {item!r}")
            key, val = item.split("=", 1)
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise UsageError(f"--params value for {key!r} is not a number: {val!r}")
    if "n" in params:
        if not float(params["n"]).is_integer():
            raise UsageError(f"n must be an integer, got {params['n']!r}")
        params["n"] = int(params["n"])
    return params


def _example_config(args) -> ExampleConfig:
    name = args.example.lower()
    if name == "ex3":
        name = "ex3-2model"
    try:
        return ExampleConfig(name, _parse_params(args))
    except UsageError:
        raise


def _parse_grid(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid must be min:max:count, got {spec!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"could not parse --grid {spec!r}")
    if count < 2 or hi <= lo:
        raise UsageError("--grid needs max > min and count >= 2")
    return np.linspace(lo, hi, count)


def _default_grid(example: ExampleConfig) -> np.ndarray:
    ex = example.example_id
    if ex.startswith("ex3"):
        if "n" not in example.parameters:
            raise UsageError(f"{ex} needs --n to build its default grid")
        return np.arange(float(example.parameters["n"] + 1))
    lo, hi, count = DEFAULT_GRIDS[ex]
    return np.linspace(lo, hi, count)


def _add_common(p):
    p.add_argument("--example", required=True,
                   help="ex1 | ex2 | ex3 | ex3-3model | ex4")
    p.add_argument("--methods", default="exact",
                   help="comma-separated subset of exact,scott,congdon,gibbs,coupled")
    p.add_argument("--T", type=int, default=10_000, help="draws per estimator")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=0, dest="burn_in")
    p.add_argument("--n", type=float, default=None)
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--params", default=None,
                   help="extra parameters as key=value[,key=value]")
    p.add_argument("--out", default=None, help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modelprobs",
        description="Compare Monte Carlo estimators of posterior model "
                    "probabilities against exact closed-form answers.",
    )
    parser.add_argument("--version", action="version",
                        version=f"modelprobs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="all methods at a single y")
    _add_common(p_est)
    p_est.add_argument("--y", type=float, required=True)

    p_sweep = sub.add_parser("sweep", help="evaluate methods over a y grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--grid", default=None, help="y grid as min:max:count")
    p_sweep.add_argument("--no-plot", action="store_true",
                         help="skip the PNG next to the CSV")

    p_fig = sub.add_parser("figures", help="regenerate the five figure datasets")
    p_fig.add_argument("--out", required=True, help="output directory")
    p_fig.add_argument("--seed", type=int, default=DEFAULT_FIGURE_SEED)
    p_fig.add_argument("--T", type=int, default=None,
                       help="override every panel's draw count")
    p_fig.add_argument("--only", default=None,
                       help="comma-separated panel stems, e.g. fig2,fig5_panel4")
    p_fig.add_argument("--no-plot", action="store_true")
    return parser


def cmd_estimate(args) -> int:
    example = _example_config(args)
    model_set = build_example(example)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    config = RunConfig(example=example, methods=methods,
                       y_grid=np.array([args.y]), T=args.T, seed=args.seed,
                       burn_in=args.burn_in, output_path=args.out)
    _validate_grid_for_example(example, config.y_grid)
    exact = exact_posterior_probs(model_set, args.y)
    master = RandomStream(config.seed).substream(0)
    print(f"example {example.example_id}  y={args.y:g}  T={config.T}  "
          f"seed={config.seed}")
    print(f"exact P(M=k|y): {np.array2string(exact, precision=6)}")
    table = SweepTable(example_id=example.example_id,
                       parameters=dict(example.parameters),
                       methods=config.methods, T=config.T, seed=config.seed,
                       burn_in=config.burn_in, y_values=config.y_grid)
    for method in config.methods:
        rng = master.substream(METHOD_ORDER.index(method))
        res = _estimate_point(model_set, args.y, method, config.T,
                              config.burn_in, rng)
        table.probs[method] = np.array([res.probs[0]])
        if method != "exact":
            table.stderrs[method] = np.array([res.stderrs[0]])
        gap = float(np.max(np.abs(res.probs - exact)))
        print(f"{method:>8s}: probs={np.array2string(res.probs, precision=6)}  "
              f"stderr={np.array2string(res.stderrs, formatter={'float_kind': lambda v: format(v, '.2e')})}  "
              f"max|probs-exact|={gap:.6f}")
    if args.out:
        save_sweep(table, args.out, plot=False)
        print(f"wrote {args.out}")
    return 0


def cmd_sweep(args) -> int:
    example = _example_config(args)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    grid = _parse_grid(args.grid) if args.grid else _default_grid(example)
    config = RunConfig(example=example, methods=methods, y_grid=grid,
                       T=args.T, seed=args.seed, burn_in=args.burn_in,
                       output_path=args.out)
    table = run_sweep(config)
    if args.out:
        save_sweep(table, args.out, plot=not args.no_plot)
        print(f"wrote {args.out}")
    else:
        write_sweep_csv(table, sys.stdout)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "estimate":
            return cmd_estimate(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "figures":
            only = args.only.split(",") if args.only else None
            cmd_figures(args.out, seed=args.seed, T_override=args.T,
                        plot=not args.no_plot, only=only)
            return 0
        parser.error(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
