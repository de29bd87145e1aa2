"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import berry_phase, oscillator_params, propagator, verification, wavefunction
from .oscillator_params import InitialData

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
COMMANDS = ("params", "wavefunction", "verify", "phase", "figure1", "propagate")
DATA_KEYS = ("mu0", "alpha0", "beta0", "gamma0", "delta0", "eps0", "kappa0")
FIGURE1_STEP = math.pi / 200

# per-command (t_end, t_step) defaults
TIME_DEFAULTS = {
    "params": (2 * math.pi, math.pi / 100),
    "wavefunction": (1.0, 1.0),
    "verify": (2 * math.pi, 0.01),
    "phase": (2 * math.pi, 0.01),
    "figure1": (2 * math.pi, FIGURE1_STEP),
    "propagate": (1.0, 5e-4),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    data: InitialData
    n_list: list
    t_end: float
    t_step: float
    grid: wavefunction.Grid = None
    output_path: str = "-"
    corrupt_delta0: float = 0.0

    def times(self):
        count = int(math.floor(self.t_end / self.t_step + 1e-9))
        t = self.t_step * np.arange(count + 1)
        if self.t_end - t[-1] > 1e-9 * self.t_step:
            t = np.append(t, self.t_end)
        return t


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser():
    p = _Parser(prog="oscillator-berry", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    for key in DATA_KEYS:
        p.add_argument(f"--{key}", type=float, default=None)
    p.add_argument("--n", type=int, action="append", default=None,
                   help="quantum number; repeat for several")
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--t-step", type=float, default=None)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--x-points", type=int, default=None)
    p.add_argument("--out", default=None, help="output file, '-' for stdout")
    p.add_argument("--config", default=None, help="key=value file; flags override it")
    p.add_argument("--corrupt-delta0", type=float, default=0.0, help=argparse.SUPPRESS)
    return p


def read_config(path):
    """Parse a ``key=value`` file; ``#`` starts a comment, ``n`` may be comma separated."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            entries[key.replace("-", "_")] = value
    return entries


def _merge_config(args, entries):
    known = set(DATA_KEYS) | {"n", "t_end", "t_step", "x_min", "x_max", "x_points", "out"}
    for key, value in entries.items():
        if key not in known:
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) is not None:
            continue
        try:
            if key == "n":
                parsed = [int(v) for v in value.split(",")]
            elif key == "x_points":
                parsed = int(value)
            elif key == "out":
                parsed = value
            else:
                parsed = float(value)
        except ValueError:
            raise UsageError(f"bad value for {key!r}: {value!r}") from None
        setattr(args, key, parsed)


def parse_args(argv):
    """Turn ``argv`` into a :class:`RunConfig`; raises :class:`UsageError`."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        try:
            entries = read_config(args.config)
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
        _merge_config(args, entries)

    values = {key: getattr(args, key) for key in DATA_KEYS}
    if args.command == "figure1":
        preset = InitialData.figure1()
        for key in DATA_KEYS:
            if values[key] is None and key != "mu0":
                values[key] = getattr(preset, key)
    values = {k: (0.0 if v is None else v) for k, v in values.items()}
    if getattr(args, "beta0") is None and args.command != "figure1":
        values["beta0"] = 1.0
    if values["beta0"] == 0.0:
        raise UsageError("--beta0 must be non-zero")
    if getattr(args, "mu0") is None:
        values["mu0"] = 1.0 / abs(values["beta0"])
    if not values["mu0"] > 0:
        raise UsageError("--mu0 must be positive")
    data = InitialData(**values)

    n_list = args.n if args.n is not None else ([0, 1] if args.command == "figure1" else [0])
    if any(n < 0 for n in n_list):
        raise UsageError("--n must be non-negative")

    t_end_default, t_step_default = TIME_DEFAULTS[args.command]
    t_end = t_end_default if args.t_end is None else args.t_end
    t_step = t_step_default if args.t_step is None else args.t_step
    if args.command == "figure1":
        t_end, t_step = 2 * math.pi, FIGURE1_STEP
    if not t_end > 0 or not t_step > 0:
        raise UsageError("--t-end and --t-step must be positive")
    if args.command in ("phase", "verify") and t_step > berry_phase.MAX_TIME_STEP:
        raise UsageError(f"--t-step must not exceed {berry_phase.MAX_TIME_STEP} for {args.command}")

    grid = None
    grid_flags = (args.x_min, args.x_max, args.x_points)
    if any(v is not None for v in grid_flags):
        if any(v is None for v in grid_flags):
            raise UsageError("--x-min, --x-max and --x-points go together")
        try:
            grid = wavefunction.Grid(*grid_flags)
        except wavefunction.GridError as exc:
            raise UsageError(str(exc)) from None

    return RunConfig(
        command=args.command,
        data=data,
        n_list=n_list,
        t_end=t_end,
        t_step=t_step,
        grid=grid,
        output_path=args.out or "-",
        corrupt_delta0=args.corrupt_delta0,
    )


def fmt(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return "%.15g" % value


def _map(fn, items):
    threads = int(os.environ.get("BERRY_THREADS", "1") or 1)
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _params_rows(config):
    p = oscillator_params.evaluate(config.data, config.times())
    header = ["t", "mu", "alpha", "beta", "gamma", "delta", "eps", "kappa"]
    cols = [np.atleast_1d(getattr(p, name)) for name in header]
    return header, list(zip(*cols))


def _wavefunction_rows(config):
    header = ["n", "t", "x", "re_psi", "im_psi", "abs_psi2"]
    rows = []
    times = config.times()
    for n in config.n_list:
        grid = config.grid or wavefunction.adequate_grid(config.data, n, times)
        for t in times:
            values = wavefunction.sample(config.data, n, grid, t).values
            for x, v in zip(grid.x, values):
                rows.append((n, t, x, v.real, v.imag, abs(v) ** 2))
    return header, rows


def _phase_rows(config):
    header = ["n", "t", "theta_ode", "theta_closed", "theta_gamma", "max_pairwise_diff"]
    times = config.times()

    def one(n):
        r = berry_phase.compare_routes(config.data, n, times)
        return [
            (n, t, a, b, c, d)
            for t, a, b, c, d in zip(
                times, r["ode"], r["closed_form"], r["gamma_route"], r["max_pairwise_diff"]
            )
        ]

    return header, [row for rows in _map(one, config.n_list) for row in rows]


def _figure1_rows(config):
    times = config.times()
    cols = [berry_phase.closed_form_phase(config.data, n, times) for n in config.n_list]
    header = ["t"] + [f"theta_n{n}" for n in config.n_list]
    return header, list(zip(times, *cols))


def _propagate_rows(config):
    header = ["n", "t", "max_error", "norm2", "invariant"]
    rows = []
    for n in config.n_list:
        grid = config.grid or wavefunction.adequate_grid(
            config.data, n, np.linspace(0, config.t_end, 64), dx=0.01
        )
        cfg = propagator.PropagationConfig(grid, config.t_step, config.t_end)
        for row in propagator.propagate(config.data, n, cfg, checkpoints=10):
            rows.append((n, row["t"], row["max_error"], row["norm2"], row["invariant"]))
    return header, rows


def _verify(config):
    header = ["check", "n", "t", "value", "target", "tolerance", "quadrature_error_estimate", "passed"]
    times = config.times()
    probe = np.linspace(0.0, config.t_end, 5)

    def one(n):
        return verification.grid_checks(
            config.data, n, probe, config.grid, config.corrupt_delta0
        ) + verification.phase_checks(config.data, n, times, config.corrupt_delta0)

    results = [r for rs in _map(one, config.n_list) for r in rs]
    rows = [
        (r.check, r.n, r.t, r.value, r.target, r.tolerance, r.quadrature_error_estimate,
         "pass" if r.passed else "FAIL")
        for r in results
    ]
    return header, rows, results


def print_table(results, stream):
    stream.write(f"{'check':<24}{'n':>3}{'t':>10}{'error':>12}{'tol':>10}  status\n")
    for r in results:
        status = "pass" if r.passed else "FAIL"
        stream.write(
            f"{r.check:<24}{r.n:>3}{r.t:>10.4f}{r.error:>12.3e}{r.tolerance:>10.1e}  {status}\n"
        )
    failed = sum(not r.passed for r in results)
    stream.write(f"{len(results) - failed}/{len(results)} checks passed\n")


def render_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_output(text, path):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(config):
    """Execute ``config`` and return the process exit code."""
    builders = {
        "params": _params_rows,
        "wavefunction": _wavefunction_rows,
        "phase": _phase_rows,
        "figure1": _figure1_rows,
        "propagate": _propagate_rows,
    }
    status = EXIT_OK
    try:
        if config.command == "verify":
            header, rows, results = _verify(config)
            print_table(results, sys.stderr)
            if not all(r.passed for r in results):
                status = EXIT_FAILED
        else:
            header, rows = builders[config.command](config)
    except (wavefunction.GridError, propagator.BoundaryLeakError, ValueError) as exc:
        print(f"oscillator-berry: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        write_output(render_csv(header, rows), config.output_path)
    except OSError as exc:
        print(f"oscillator-berry: cannot write {config.output_path}: {exc.strerror}",
              file=sys.stderr)
        return EXIT_IO
    return status


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"oscillator-berry: {exc}", file=sys.stderr)
        return EXIT_IO
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
