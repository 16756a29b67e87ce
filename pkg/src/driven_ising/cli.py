"""Command-line front end.

Every scenario writes one table: comma-separated values behind a ``#``
metadata header, or a JSON document carrying the same table plus a short
summary. All energies on the command line are ratios to the drive frequency.

    driven-ising spectrum --j 0.01 --g0 0.505 --g1 1.0 --m 2
    driven-ising dynamics --j 0.01 --g0 0.510 --g1 1.0 --m 2 --t-max 200 --n-spins 100
"""

from __future__ import annotations

import argparse
import concurrent.futures
import contextlib
import dataclasses
import json
import logging
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, observables, rwa
from .dynamics import monodromy_many
from .errors import DomainError, EvaluationError, IntegrationError
from .model import ModelParams, excitation_energy, resonance_wavevector
from .observables import Quantity

log = logging.getLogger("driven_ising")

SCENARIOS = ("spectrum", "phase-diagram", "dynamics", "floquet", "averages", "sweep")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
THREADS_ENV = "DRIVEN_ISING_THREADS"

_QUANTITY_ALIASES = {
    "energy": Quantity.AVERAGED_ENERGY_MINUS,
    "magnetization": Quantity.AVERAGED_MAGNETIZATION_MINUS,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str
    j: float | None = None
    g0: float | None = None
    g1: float | None = None
    m: int | None = None
    nk: int = 256
    n_spins: int | None = None
    t_max: float = 200.0
    samples: int = 2001
    variable: str = "g1"
    min: float | None = None
    max: float | None = None
    points: int | None = None
    quantity: str = "energy"
    resolution: int = 201
    output: str | None = None
    format: str = "csv"
    strict_rwa: bool = False

    def params(self, **overrides) -> ModelParams:
        values = {"j": self.j, "g0": self.g0, "g1": self.g1, "m": self.m}
        values.update(overrides)
        return ModelParams(values["j"], values["g0"], values["g1"], 1.0, values["m"])


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}
_INT_FIELDS = {"m", "nk", "n_spins", "samples", "points", "resolution"}
_FLOAT_FIELDS = {"j", "g0", "g1", "t_max", "min", "max"}
_BOOL_FIELDS = {"strict_rwa"}


def _convert(key: str, raw, where: str):
    try:
        if key in _INT_FIELDS:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if key in _FLOAT_FIELDS:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
            return value
        if key in _BOOL_FIELDS:
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip().lower()
            if text in ("1", "true", "yes", "on"):
                return True
            if text in ("0", "false", "no", "off"):
                return False
            raise ValueError
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {key} = {raw!r}") from None
    return str(raw)


def read_config_file(path) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES or key == "scenario":
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw, f"{path}:{lineno}")
    return values


_REQUIRED = {
    "spectrum": ("j", "g0", "g1", "m"),
    "phase-diagram": ("j", "m"),
    "dynamics": ("j", "g0", "g1", "m"),
    "floquet": ("j", "g0", "g1", "m"),
    "averages": ("j", "g0", "m"),
    "sweep": ("j", "g0", "g1", "m"),
}


def load_config(scenario: str, path=None, flags: dict | None = None) -> RunConfig:
    """Build a validated :class:`RunConfig`; flags override file values."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    values = read_config_file(path) if path else {}
    for key, raw in (flags or {}).items():
        if raw is None:
            continue
        values[key] = _convert(key, raw, f"--{key.replace('_', '-')}")
    cfg = RunConfig(scenario=scenario, **values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    required = list(_REQUIRED[cfg.scenario])
    if cfg.scenario == "sweep":
        required.remove(cfg.variable if cfg.variable in ("g0", "g1") else "g1")
    missing = [k for k in required if getattr(cfg, k) is None]
    if missing:
        raise ConfigError("missing required value(s): " + ", ".join(missing))
    for key in ("nk", "samples", "resolution", "t_max"):
        if getattr(cfg, key) <= 0:
            raise ConfigError(f"{key} must be positive")
    if cfg.samples < 2:
        raise ConfigError("samples must be at least 2")
    if cfg.n_spins is not None and (cfg.n_spins < 2 or cfg.n_spins % 2):
        raise ConfigError("n_spins must be an even integer >= 2")
    if cfg.points is not None and cfg.points < 5:
        raise ConfigError("points must be at least 5")
    if cfg.variable not in ("g0", "g1"):
        raise ConfigError(f"variable must be g0 or g1, not {cfg.variable!r}")
    if cfg.quantity not in _QUANTITY_ALIASES:
        raise ConfigError(f"quantity must be one of {sorted(_QUANTITY_ALIASES)}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if cfg.scenario == "sweep" and (cfg.min is None or cfg.max is None):
        raise ConfigError("sweep needs --min and --max")
    if cfg.min is not None and cfg.max is not None and not cfg.max > cfg.min:
        raise ConfigError(f"empty sweep range [{cfg.min}, {cfg.max}]")
    try:
        if cfg.scenario == "phase-diagram":
            cfg.params(g0=cfg.m / 4.0 + 1.0, g1=0.0)
        else:
            _rwa_points(cfg)  # constructing the parameters validates them
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


@dataclass
class ResultTable:
    columns: list[str]
    rows: np.ndarray
    metadata: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float).reshape(-1, len(self.columns))
        if not np.all(np.isfinite(self.rows)):
            raise EvaluationError("result table contains non-finite values")

    def to_csv(self) -> str:
        lines = [f"# {key}: {json.dumps(value, sort_keys=True)}" for key, value in self.metadata.items()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(format(float(x), ".17g") for x in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "summary": self.summary,
            "columns": self.columns,
            "rows": self.rows.tolist(),
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        metadata = {}
        body = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                metadata[key] = json.loads(value)
            elif line.strip():
                body.append(line)
        columns = body[0].split(",")
        rows = [[float(x) for x in line.split(",")] for line in body[1:]]
        return cls(columns, np.array(rows, dtype=float).reshape(-1, len(columns)), metadata)

    @classmethod
    def from_json(cls, text: str) -> "ResultTable":
        doc = json.loads(text)
        rows = np.array(doc["rows"], dtype=float).reshape(-1, len(doc["columns"]))
        return cls(doc["columns"], rows, doc["metadata"], doc["summary"])


def write_atomic(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be at least 1")
    return n


def _circular_distance(a, b, period=1.0):
    d = np.abs(np.asarray(a) - np.asarray(b)) % period
    return np.minimum(d, period - d)


def match_quasienergies(exact, approx):
    """Pair two quasienergy doublets on the circle; returns reordered ``approx`` and error."""
    exact = np.asarray(exact)
    approx = np.asarray(approx)
    straight = np.max(_circular_distance(exact, approx))
    swapped = np.max(_circular_distance(exact, approx[::-1]))
    if swapped < straight:
        return approx[::-1], swapped
    return approx, straight


# scenarios ---------------------------------------------------------------


def run_spectrum(cfg: RunConfig, pool) -> ResultTable:
    p = cfg.params()
    k = np.linspace(0.0, math.pi, cfg.nk)
    eps = excitation_energy(p, k)
    omega_k = 2.0 * p.j * np.cos(k)
    plus, minus = -omega_k + eps, -omega_k - eps
    rwa_plus, rwa_minus = rwa.quasienergy_branches(p, k)
    rows = np.column_stack(
        [k, plus, minus, rwa.fold(plus), rwa.fold(minus), rwa_plus, rwa_minus]
    )
    summary = {"resonance_k0": resonance_wavevector(p) if p.g0 != 0.0 else None}
    columns = ["k", "eps_plus", "eps_minus", "folded_plus", "folded_minus", "rwa_plus", "rwa_minus"]
    return ResultTable(columns, rows, summary=summary)


def run_phase_diagram(cfg: RunConfig, pool) -> ResultTable:
    n = cfg.resolution
    g1s = np.linspace(0.0, 3.0, n)
    g0s = np.linspace(cfg.m / 4.0 - 0.015, cfg.m / 4.0 + 0.015, n)

    def column(g1):
        return [rwa.classify_phase(cfg.params(g0=float(g0), g1=float(g1))).code for g0 in g0s]

    codes = np.array(list(pool.map(column, g1s)), dtype=float)
    G1, G0 = np.meshgrid(g1s, g0s, indexing="ij")
    rows = np.column_stack([G1.ravel(), G0.ravel(), codes.ravel()])
    counts = {label.value: int(np.sum(codes == label.code)) for label in rwa.PhaseLabel}
    legend = {str(label.code): label.value for label in rwa.PhaseLabel}
    return ResultTable(
        ["g1_over_omega", "g0_over_omega", "phase_label"],
        rows,
        metadata={"phase_codes": legend},
        summary={"phase_counts": counts},
    )


def run_dynamics(cfg: RunConfig, pool) -> ResultTable:
    p = cfg.params()
    times = np.linspace(0.0, cfg.t_max * p.period, cfg.samples)
    grid = observables.adapted_grid(p, cfg.nk)
    columns = ["t_over_T", "mx_rwa"]
    data = [times / p.period, observables.magnetization_rwa_series(p, times, grid)]
    summary = {}
    if cfg.n_spins:
        finite = observables.magnetization_finite(p, cfg.n_spins, times).values
        columns.append(f"mx_finite_{cfg.n_spins}")
        data.append(finite)
        summary["rms_finite_vs_rwa"] = float(np.sqrt(np.mean((finite - data[1]) ** 2)))
    return ResultTable(columns, np.column_stack(data), summary=summary)


def run_floquet(cfg: RunConfig, pool) -> ResultTable:
    p = cfg.params()
    k = np.linspace(0.0, math.pi, cfg.nk)
    chunks = [c for c in np.array_split(k, worker_count()) if c.size]
    results = [r for part in pool.map(lambda c: monodromy_many(p, c), chunks) for r in part]
    rw_plus, rw_minus = rwa.quasienergy_branches(p, k)
    rows = []
    for i, res in enumerate(results):
        approx, err = match_quasienergies(res.quasienergies, [rw_plus[i], rw_minus[i]])
        # report the exact level that pairs with each RWA branch
        exact_plus, exact_minus = (
            res.quasienergies if approx[0] == rw_plus[i] else res.quasienergies[::-1]
        )
        rows.append([k[i], exact_plus, exact_minus, rw_plus[i], rw_minus[i], err])
    rows = np.array(rows)
    columns = [
        "k",
        "quasienergy_monodromy_plus",
        "quasienergy_monodromy_minus",
        "quasienergy_rwa_plus",
        "quasienergy_rwa_minus",
        "abs_error",
    ]
    summary = {"max_abs_error": float(rows[:, -1].max()), "rms_abs_error": float(np.sqrt(np.mean(rows[:, -1] ** 2)))}
    return ResultTable(columns, rows, summary=summary)


def _sweep_table(cfg: RunConfig, pool, variable, lo, hi, n_points) -> ResultTable:
    template = cfg.params(**{variable: lo})
    record = observables.sweep_with_curvature(
        template, variable, lo, hi, n_points, _QUANTITY_ALIASES[cfg.quantity], cfg.nk, pool
    )
    inner = slice(1, -1)
    rows = np.column_stack([record.x[inner], record.values[inner], record.second_derivative[inner]])
    summary = {
        "quantity": record.quantity,
        "min": float(record.values.min()),
        "max": float(record.values.max()),
        "max_abs_second_derivative_at": float(record.x[inner][np.argmax(np.abs(rows[:, 2]))]),
    }
    if variable == "g1" and abs(template.detuning) <= observables.RESONANCE_TOL:
        closed = [observables.averaged_energy_resonant(cfg.params(**{variable: float(x)}))[1] for x in record.x]
        if record.quantity == Quantity.AVERAGED_ENERGY_MINUS.value:
            summary["max_error_vs_closed_form"] = float(np.max(np.abs(np.array(closed) - record.values)))
    return ResultTable(
        ["x", "value", "second_derivative"],
        rows,
        metadata={"sweep_variable": record.sweep_variable},
        summary=summary,
    )


def run_averages(cfg: RunConfig, pool) -> ResultTable:
    lo = 0.0 if cfg.min is None else cfg.min
    hi = 3.0 if cfg.max is None else cfg.max
    return _sweep_table(cfg, pool, "g1", lo, hi, cfg.points or 601)


def run_sweep(cfg: RunConfig, pool) -> ResultTable:
    return _sweep_table(cfg, pool, cfg.variable, cfg.min, cfg.max, cfg.points or 201)


_RUNNERS = {
    "spectrum": run_spectrum,
    "phase-diagram": run_phase_diagram,
    "dynamics": run_dynamics,
    "floquet": run_floquet,
    "averages": run_averages,
    "sweep": run_sweep,
}


def _rwa_points(cfg: RunConfig):
    if cfg.scenario == "phase-diagram":
        return []
    if cfg.scenario in ("averages", "sweep"):
        variable = "g1" if cfg.scenario == "averages" else cfg.variable
        lo = cfg.min if cfg.min is not None else 0.0
        hi = cfg.max if cfg.max is not None else 3.0
        return [cfg.params(**{variable: float(x)}) for x in np.linspace(lo, hi, 7)]
    return [cfg.params()]


def check_rwa(cfg: RunConfig):
    """Raise :class:`ConfigError` in strict mode, otherwise log a warning."""
    for p in _rwa_points(cfg):
        ratio, ok = rwa.rwa_validity(p)
        if not ok:
            msg = (
                f"rotating-wave approximation not valid at g0={p.g0}, g1={p.g1}: "
                f"max(|delta|, J|J_m|)/omega = {ratio:.3g} > {rwa.DEFAULT_VALIDITY_THRESHOLD}"
            )
            if cfg.strict_rwa:
                raise ConfigError(msg)
            log.warning(msg)
            return


def run(cfg: RunConfig) -> ResultTable:
    """Execute one scenario and write its table; returns the table."""
    check_rwa(cfg)
    start = time.perf_counter()
    with concurrent.futures.ThreadPoolExecutor(max_workers=worker_count()) as pool:
        table = _RUNNERS[cfg.scenario](cfg, pool)
    elapsed = time.perf_counter() - start
    skip = ("scenario", "output", "format")
    echo = {k: v for k, v in dataclasses.asdict(cfg).items() if k not in skip}
    table.metadata = {
        "tool": f"driven-ising {__version__}",
        "scenario": cfg.scenario,
        "config": echo,
        **table.metadata,
        "wall_clock_seconds": round(elapsed, 3),
    }
    text = table.to_json() if cfg.format == "json" else table.to_csv()
    if cfg.output:
        write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)
    return table


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    add = shared.add_argument
    add("--config", metavar="PATH", help="flat 'key = value' file; flags override it")
    add("--j", type=str, help="coupling J/omega")
    add("--g0", type=str, help="static field g0/omega")
    add("--g1", type=str, help="drive amplitude g1/omega")
    add("--m", type=str, help="resonance order")
    add("--nk", type=str, help="k points (spectrum, floquet) or quadrature nodes per panel")
    add("--t-max", dest="t_max", type=str, help="time horizon in drive periods")
    add("--samples", type=str, help="number of time samples")
    add("--n-spins", dest="n_spins", type=str, help="even chain length for exact dynamics")
    add("--variable", type=str, help="swept parameter: g0 or g1")
    add("--min", type=str, help="sweep start")
    add("--max", type=str, help="sweep end")
    add("--points", type=str, help="sweep points")
    add("--quantity", type=str, help="energy or magnetization")
    add("--resolution", type=str, help="phase-diagram points per axis")
    add("--output", type=str, help="output file (default: stdout)")
    add("--format", type=str, help="csv or json")
    add("--strict-rwa", dest="strict_rwa", action="store_const", const=True,
        help="treat RWA-validity violations as errors")
    parser = argparse.ArgumentParser(prog="driven-ising", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        sub.add_parser(name, parents=[shared])
    return parser


def main(argv=None) -> int:
    logging.basicConfig(format="driven-ising: %(levelname)s: %(message)s", level=logging.INFO)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    flags = {k: v for k, v in vars(args).items() if k not in ("scenario", "config")}
    try:
        cfg = load_config(args.scenario, args.config, flags)
        run(cfg)
    except ConfigError as exc:
        print(f"driven-ising: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, EvaluationError, DomainError, ArithmeticError) as exc:
        print(f"driven-ising: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
