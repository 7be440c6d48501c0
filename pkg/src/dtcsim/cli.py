"""Command-line workflows: config ingestion, runs, sweeps, invariant reports.

Config files are flat ``key = value`` text with ``#`` comments. Frequencies
are given in kHz (converted to rad/ms on ingest), times in ms, and angles
either as plain radians or with a ``pi`` suffix (``1.04pi``). Outputs are
deterministic CSV or JSON: no timestamps, config echoed as metadata, values
printed at 12 significant digits.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytics, liouville, spinops
from .analytics import ObservableGroup, ReducedState4, SpinLockParams
from .protocol import ProtocolConfig, SamplePoint, run_protocol, stroboscopic_mx

KHZ_TO_RAD_PER_MS = 2.0 * math.pi


class ConfigError(ValueError):
    """Config-file problem, with line-anchored messages where possible."""


class Mode(enum.Enum):
    TIMESERIES = "timeseries"
    SPECTRUM = "spectrum"
    SWEEP2D = "sweep2d"
    TAUC_SWEEP = "tauc_sweep"
    INVARIANTS = "invariants"


REQUIRED_KEYS = (
    "omega_1_khz",
    "omega_2_khz",
    "omega_d0_khz",
    "tau_c_ms",
    "omega_2_tau_2",
    "n_cycles",
)

AXIS_PARAMS = (
    "omega_1_khz",
    "omega_2_khz",
    "omega_d0_khz",
    "tau_c_ms",
    "tau_1_ms",
    "omega_1_tau_1",
    "omega_2_tau_2",
    "cycle",
)

_SWEEP_KEYS = tuple(
    f"axis{i}_{suffix}" for i in (1, 2) for suffix in ("param", "min", "max", "steps")
)
_TAUC_KEYS = ("tau_c_min_ms", "tau_c_max_ms", "tau_c_steps")
KNOWN_KEYS = frozenset(
    REQUIRED_KEYS + ("tau_1_ms", "omega_1_tau_1") + _SWEEP_KEYS + _TAUC_KEYS
)


def parse_scalar(text: str) -> float:
    """Parse a numeric literal, allowing a trailing ``pi`` multiplier."""
    text = text.strip()
    factor = 1.0
    if text.endswith("pi"):
        text = text[:-2].strip()
        factor = math.pi
        if not text:
            return factor
    try:
        return float(text) * factor
    except ValueError:
        raise ValueError(f"not a number: {text!r}") from None


@dataclass(frozen=True)
class SweepAxis:
    """One sweep dimension: a parameter name plus endpoint/step grid."""

    param: str
    minimum: float
    maximum: float
    steps: int
    log: bool = False

    def grid(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.minimum])
        if self.log:
            return np.geomspace(self.minimum, self.maximum, self.steps)
        return np.linspace(self.minimum, self.maximum, self.steps)


@dataclass(frozen=True)
class RunSpec:
    """Validated run request: base protocol config, mode, optional sweep axes."""

    config: ProtocolConfig
    mode: Mode
    echo: tuple[tuple[str, float], ...]
    axis1: SweepAxis | None = None
    axis2: SweepAxis | None = None

    def echo_dict(self) -> dict[str, str]:
        return {
            key: value if isinstance(value, str) else _fmt(value)
            for key, value in self.echo
        }


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _needs_even_cycles(mode: Mode, axis2: SweepAxis | None) -> bool:
    if mode in (Mode.SPECTRUM, Mode.TAUC_SWEEP):
        return True
    # f sweeps take spectra per cell; cycle maps record M_x directly
    return mode is Mode.SWEEP2D and (axis2 is None or axis2.param != "cycle")


def parse_config(text: str, mode: Mode = Mode.TIMESERIES) -> RunSpec:
    """Parse and validate a flat key-value config for the given mode."""
    errors: list[str] = []
    raw: dict[str, float] = {}
    raw_lines: dict[str, int] = {}
    order: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            errors.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in raw:
            errors.append(f"line {lineno}: duplicate key {key!r}")
            continue
        if key.endswith("_param"):
            if value not in AXIS_PARAMS:
                errors.append(
                    f"line {lineno}: {key} must be one of {', '.join(AXIS_PARAMS)}"
                )
                continue
            raw[key] = value  # type: ignore[assignment]
        else:
            try:
                raw[key] = parse_scalar(value)
            except ValueError as exc:
                errors.append(f"line {lineno}: {key}: {exc}")
                continue
        raw_lines[key] = lineno
        order.append(key)

    for key in REQUIRED_KEYS:
        if key not in raw:
            errors.append(f"missing required key: {key}")
    if "tau_1_ms" not in raw and "omega_1_tau_1" not in raw:
        errors.append("missing required key: tau_1_ms (or omega_1_tau_1)")
    if "tau_1_ms" in raw and "omega_1_tau_1" in raw:
        errors.append(
            f"line {raw_lines['omega_1_tau_1']}: give tau_1_ms or omega_1_tau_1, not both"
        )
    if errors:
        raise ConfigError("\n".join(errors))

    omega_1 = raw["omega_1_khz"] * KHZ_TO_RAD_PER_MS
    omega_2 = raw["omega_2_khz"] * KHZ_TO_RAD_PER_MS
    omega_d0 = raw["omega_d0_khz"] * KHZ_TO_RAD_PER_MS
    theta = raw["omega_2_tau_2"]

    if "tau_1_ms" in raw:
        tau_1 = raw["tau_1_ms"]
    else:
        if omega_1 == 0:
            errors.append("omega_1_tau_1 needs a nonzero omega_1_khz")
            tau_1 = 0.0
        else:
            tau_1 = raw["omega_1_tau_1"] / omega_1
    if theta == 0.0:
        tau_2 = 0.0
    elif omega_2 == 0:
        errors.append("omega_2_tau_2 is nonzero but omega_2_khz is zero")
        tau_2 = 0.0
    else:
        # negative angles rotate the other way: flip the drive, keep tau_2 >= 0
        tau_2 = abs(theta) / omega_2
        omega_2 = math.copysign(omega_2, theta)

    n_cycles = raw["n_cycles"]
    if n_cycles != int(n_cycles) or int(n_cycles) < 1:
        errors.append(
            f"line {raw_lines['n_cycles']}: n_cycles must be a positive integer, "
            f"got {n_cycles:g}"
        )
        n_cycles = 2
    n_cycles = int(n_cycles)

    axis1 = axis2 = None
    if mode is Mode.SWEEP2D:
        axis1 = _build_axis(raw, raw_lines, 1, errors, n_cycles)
        axis2 = _build_axis(raw, raw_lines, 2, errors, n_cycles)
    elif mode is Mode.TAUC_SWEEP:
        axis1 = _build_tauc_axis(raw, raw_lines, errors)

    if _needs_even_cycles(mode, axis2) and n_cycles % 2 != 0:
        errors.append(
            f"line {raw_lines['n_cycles']}: n_cycles must be even in {mode.value} mode "
            f"so the half harmonic nu = 0.5 lies on the frequency grid"
        )
    if errors:
        raise ConfigError("\n".join(errors))

    try:
        config = ProtocolConfig(
            omega_1=omega_1,
            omega_2=omega_2,
            omega_d0=omega_d0,
            tau_c=raw["tau_c_ms"],
            tau_1=tau_1,
            tau_2=tau_2,
            n_cycles=n_cycles,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    echo = tuple((key, raw[key]) for key in order if not key.endswith("_param"))
    echo += tuple(
        (key, raw[key]) for key in order if key.endswith("_param")
    )  # type: ignore[arg-type]
    return RunSpec(config=config, mode=mode, echo=echo, axis1=axis1, axis2=axis2)


def _build_axis(raw, raw_lines, index, errors, n_cycles) -> SweepAxis | None:
    prefix = f"axis{index}_"
    missing = [
        prefix + suffix for suffix in ("param", "min", "max", "steps")
        if prefix + suffix not in raw
    ]
    param = raw.get(prefix + "param")
    if param == "cycle":
        if index == 1:
            errors.append("cycle may only be the second sweep axis")
            return None
        return SweepAxis(param="cycle", minimum=1.0, maximum=float(n_cycles), steps=n_cycles)
    if missing:
        errors.extend(f"missing required key: {key}" for key in missing)
        return None
    steps = raw[prefix + "steps"]
    if steps != int(steps) or int(steps) < 2:
        errors.append(
            f"line {raw_lines[prefix + 'steps']}: {prefix}steps must be an integer >= 2"
        )
        return None
    return SweepAxis(
        param=param,
        minimum=raw[prefix + "min"],
        maximum=raw[prefix + "max"],
        steps=int(steps),
    )


def _build_tauc_axis(raw, raw_lines, errors) -> SweepAxis | None:
    missing = [key for key in _TAUC_KEYS if key not in raw]
    if missing:
        errors.extend(f"missing required key: {key}" for key in missing)
        return None
    steps = raw["tau_c_steps"]
    if steps != int(steps) or int(steps) < 1:
        errors.append(
            f"line {raw_lines['tau_c_steps']}: tau_c_steps must be an integer >= 1"
        )
        return None
    steps = int(steps)
    lo, hi = raw["tau_c_min_ms"], raw["tau_c_max_ms"]
    if steps == 1:
        if lo != hi:
            errors.append("tau_c_steps = 1 needs tau_c_min_ms == tau_c_max_ms")
            return None
        # single point; zero is fine (pure unitary limit)
        return SweepAxis(param="tau_c_ms", minimum=lo, maximum=hi, steps=1, log=True)
    if lo <= 0 or hi <= 0:
        errors.append(
            f"line {raw_lines['tau_c_min_ms']}: logarithmic tau_c axis needs positive "
            f"endpoints (use tau_c_steps = 1 for a single point, including 0)"
        )
        return None
    return SweepAxis(param="tau_c_ms", minimum=lo, maximum=hi, steps=steps, log=True)


def apply_axis_value(cfg: ProtocolConfig, param: str, value: float) -> ProtocolConfig:
    """Rebuild a protocol config with one swept parameter replaced."""
    if param == "omega_1_khz":
        return dataclasses.replace(cfg, omega_1=value * KHZ_TO_RAD_PER_MS)
    if param == "omega_2_khz":
        return dataclasses.replace(cfg, omega_2=value * KHZ_TO_RAD_PER_MS)
    if param == "omega_d0_khz":
        return dataclasses.replace(cfg, omega_d0=value * KHZ_TO_RAD_PER_MS)
    if param == "tau_c_ms":
        return dataclasses.replace(cfg, tau_c=value)
    if param == "tau_1_ms":
        return dataclasses.replace(cfg, tau_1=value)
    if param == "omega_1_tau_1":
        if cfg.omega_1 == 0:
            raise ValueError("cannot sweep omega_1_tau_1 with omega_1 = 0")
        return dataclasses.replace(cfg, tau_1=value / cfg.omega_1)
    if param == "omega_2_tau_2":
        if value == 0.0:
            return dataclasses.replace(cfg, tau_2=0.0)
        if cfg.omega_2 == 0:
            raise ValueError("cannot sweep omega_2_tau_2 with omega_2 = 0")
        # negative angles rotate the other way: flip the drive, keep tau_2 >= 0
        magnitude = abs(cfg.omega_2)
        return dataclasses.replace(
            cfg, omega_2=math.copysign(magnitude, value), tau_2=abs(value) / magnitude
        )
    raise ValueError(f"unknown sweep parameter {param!r}")


def _map_ordered(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class GridResult:
    """Sweep output: axis grids, one value per cell, and the config echo."""

    axis1: SweepAxis
    axis2: SweepAxis
    axis1_values: np.ndarray
    axis2_values: np.ndarray
    cells: np.ndarray
    value_label: str
    echo: dict[str, str]

    def __post_init__(self):
        expected = (self.axis1_values.size, self.axis2_values.size)
        if self.cells.shape != expected:
            raise ValueError(f"cell grid {self.cells.shape} != axes {expected}")
        if not np.all(np.isfinite(self.cells)):
            raise ValueError("sweep produced non-finite cells")


def run_sweep2d(spec: RunSpec, threads: int = 1) -> GridResult:
    """Evaluate the 2D sweep: crystalline fraction, or M_x per cycle maps."""
    axis1, axis2 = spec.axis1, spec.axis2
    vals1 = axis1.grid()
    mx_map = axis2.param == "cycle"

    def row(v1: float) -> np.ndarray:
        try:
            cfg = apply_axis_value(spec.config, axis1.param, float(v1))
            if mx_map:
                return stroboscopic_mx(cfg)
            vals2 = axis2.grid()
            out = np.empty(vals2.size)
            for j, v2 in enumerate(vals2):
                cell_cfg = apply_axis_value(cfg, axis2.param, float(v2))
                out[j] = analytics.spectrum(
                    stroboscopic_mx(cell_cfg)
                ).crystalline_fraction
            return out
        except Exception as exc:
            raise RuntimeError(f"sweep cell at {axis1.param}={v1:g} failed: {exc}") from exc

    cells = np.stack(_map_ordered(row, vals1, threads))
    return GridResult(
        axis1=axis1,
        axis2=axis2,
        axis1_values=vals1,
        axis2_values=axis2.grid(),
        cells=cells,
        value_label="Mx" if mx_map else "f",
        echo=spec.echo_dict(),
    )


def run_tauc_sweep(spec: RunSpec, threads: int = 1):
    """Spectrum and crystalline fraction for each tau_c on the log grid."""
    values = spec.axis1.grid()

    def one(tau_c: float):
        try:
            cfg = dataclasses.replace(spec.config, tau_c=float(tau_c))
            return analytics.spectrum(stroboscopic_mx(cfg))
        except Exception as exc:
            raise RuntimeError(f"sweep cell at tau_c={tau_c:g} failed: {exc}") from exc

    return list(zip(values.tolist(), _map_ordered(one, values, threads)))


# --- output writers -------------------------------------------------------

TIMESERIES_COLUMNS = ("cycle", "Mx", "My", "Mz", "Mxx", "Myy", "Mzz", "Mxy", "Myz", "Mxz")


def _write_text(out, text: str):
    if hasattr(out, "write"):
        out.write(text)
        return
    try:
        with open(out, "w", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(f"cannot write output file {out}: {exc}") from exc


def _csv_document(echo, columns, rows, tail_comments=()) -> str:
    buf = io.StringIO()
    for key, value in echo.items():
        buf.write(f"# {key} = {value}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(str(c) if isinstance(c, (int, np.integer)) else _fmt(c) for c in row))
        buf.write("\n")
    for comment in tail_comments:
        buf.write(f"# {comment}\n")
    return buf.getvalue()


def _json_document(mode, echo, columns, rows, extra=None) -> str:
    payload = {
        "mode": mode.value,
        "config": echo,
        "columns": list(columns),
        "rows": [
            [int(c) if isinstance(c, (int, np.integer)) else float(_fmt(c)) for c in row]
            for row in rows
        ],
    }
    if extra:
        payload.update(extra)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def cmd_timeseries(spec: RunSpec, out, fmt: str = "csv") -> None:
    """Stroboscopic observables, one row per cycle."""
    series = run_protocol(spec.config, sample_point=SamplePoint.AFTER_ROTATION)
    rows = [
        (k, *series.values[k]) for k in range(1, spec.config.n_cycles + 1)
    ]
    echo = spec.echo_dict()
    if fmt == "json":
        _write_text(out, _json_document(spec.mode, echo, TIMESERIES_COLUMNS, rows))
    else:
        _write_text(out, _csv_document(echo, TIMESERIES_COLUMNS, rows))


def cmd_spectrum(spec: RunSpec, out, fmt: str = "csv") -> None:
    """DFT power of stroboscopic M_x plus the crystalline fraction."""
    result = analytics.spectrum(stroboscopic_mx(spec.config))
    rows = list(zip(result.frequencies, result.omega_rad, result.power))
    echo = spec.echo_dict()
    fraction = _fmt(result.crystalline_fraction)
    if fmt == "json":
        _write_text(
            out,
            _json_document(
                spec.mode,
                echo,
                ("nu", "omega_rad", "power"),
                rows,
                extra={"crystalline_fraction": float(fraction)},
            ),
        )
    else:
        _write_text(
            out,
            _csv_document(
                echo,
                ("nu", "omega_rad", "power"),
                rows,
                tail_comments=(f"crystalline_fraction = {fraction}",),
            ),
        )


def cmd_sweep2d(spec: RunSpec, out, fmt: str = "csv", threads: int = 1) -> None:
    """Long-form grid output: axis1, axis2, value."""
    grid = run_sweep2d(spec, threads=threads)
    columns = (grid.axis1.param, grid.axis2.param, grid.value_label)
    rows = []
    for i, v1 in enumerate(grid.axis1_values):
        for j, v2 in enumerate(grid.axis2_values):
            if grid.axis2.param == "cycle":
                rows.append((float(v1), int(j + 1), grid.cells[i, j]))
            else:
                rows.append((float(v1), float(v2), grid.cells[i, j]))
    if fmt == "json":
        _write_text(out, _json_document(spec.mode, grid.echo, columns, rows))
    else:
        _write_text(out, _csv_document(grid.echo, columns, rows))


def cmd_tauc_sweep(spec: RunSpec, out, fmt: str = "csv", threads: int = 1) -> None:
    """Full spectrum per tau_c plus a tau_c,f summary."""
    results = run_tauc_sweep(spec, threads=threads)
    rows = []
    summary = []
    for tau_c, result in results:
        summary.append((tau_c, result.crystalline_fraction))
        for nu, power in zip(result.frequencies, result.power):
            rows.append((tau_c, float(nu), float(power)))
    echo = spec.echo_dict()
    if fmt == "json":
        _write_text(
            out,
            _json_document(
                spec.mode,
                echo,
                ("tau_c", "nu", "power"),
                rows,
                extra={"summary": [[float(_fmt(t)), float(_fmt(f))] for t, f in summary]},
            ),
        )
    else:
        tail = ["summary: tau_c,f"] + [f"{_fmt(t)},{_fmt(f)}" for t, f in summary]
        _write_text(out, _csv_document(echo, ("tau_c", "nu", "power"), rows, tail))


# --- invariant report -----------------------------------------------------

@dataclass(frozen=True)
class InvariantCheck:
    name: str
    value: float
    threshold: float
    comparison: str  # "max" (value <= threshold) or "min" (value >= threshold)

    @property
    def passed(self) -> bool:
        if self.comparison == "max":
            return self.value <= self.threshold
        return self.value >= self.threshold

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": float(_fmt(self.value)),
            "threshold": self.threshold,
            "comparison": self.comparison,
            "pass": self.passed,
        }


def run_invariant_checks(cfg: ProtocolConfig, corruption: str | None = None):
    """CPTP, conserved-quantity, purity, and oracle-equivalence checks.

    ``corruption`` is a test hook: "hermiticity" perturbs the spin-lock
    propagator so the propagated states stop being Hermitian and the report
    goes red (negative control for the checker itself).
    """
    substeps = 4
    sub = np.array(
        liouville.spinlock_propagator(
            cfg.omega_1, cfg.omega_d0, cfg.tau_c, cfg.tau_1 / substeps
        )
    )
    rot = liouville.rotation_propagator(cfg.omega_2, cfg.tau_2)
    if corruption == "hermiticity":
        sub[0, 1] += 1e-6
    elif corruption is not None:
        raise ValueError(f"unknown corruption hook {corruption!r}")

    names = spinops.ObservableSet.NAMES
    i_x, i_zz, i_yy, i_xx = (names.index(k) for k in ("m_x", "m_zz", "m_yy", "m_xx"))

    v = liouville.vectorize(spinops.initial_state_plus_x())
    max_trace = 0.0
    max_herm = 0.0
    min_eig = 1.0
    max_drift = [0.0, 0.0, 0.0]
    max_purity_gain = -1.0
    max_purity_change = 0.0

    def conserved(vec):
        obs = spinops.observables_from_states(liouville.unvectorize(vec)[None])[0]
        return np.array(
            [
                3.0 * cfg.omega_d0 * obs[i_zz] + cfg.omega_1 * obs[i_x],
                obs[i_yy] + obs[i_zz],
                obs[i_xx],
            ]
        )

    def purity(vec):
        rho = liouville.unvectorize(vec)
        return float(np.trace(rho @ rho).real)

    def cptp(vec):
        nonlocal max_trace, max_herm, min_eig
        rho = liouville.unvectorize(vec)
        max_trace = max(max_trace, abs(complex(np.trace(rho)) - 1.0))
        max_herm = max(max_herm, float(np.max(np.abs(rho - rho.conj().T))))
        min_eig = min(min_eig, float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()))

    for _ in range(cfg.n_cycles):
        seg_start = conserved(v)
        purity_start = purity(v)
        for _ in range(substeps):
            v = sub @ v
            cptp(v)
            drift = np.abs(conserved(v) - seg_start)
            for j in range(3):
                max_drift[j] = max(max_drift[j], float(drift[j]))
        max_purity_gain = max(max_purity_gain, purity(v) - purity_start)
        max_purity_change = max(max_purity_change, abs(purity(v) - purity_start))
        v = rot @ v
        cptp(v)

    checks = [
        InvariantCheck("trace_preservation", max_trace, 1e-12, "max"),
        InvariantCheck("hermiticity_preservation", max_herm, 1e-12, "max"),
        InvariantCheck("positivity_min_eigenvalue", min_eig, -1e-10, "min"),
        InvariantCheck("conserved_drive_dipole_drift", max_drift[0], 1e-10, "max"),
        InvariantCheck("conserved_yy_plus_zz_drift", max_drift[1], 1e-10, "max"),
        InvariantCheck("conserved_xx_drift", max_drift[2], 1e-10, "max"),
        InvariantCheck("purity_nonincreasing_spinlock", max_purity_gain, 1e-12, "max"),
    ]
    if cfg.tau_c == 0.0:
        checks.append(
            InvariantCheck("purity_conserved_unitary_limit", max_purity_change, 1e-10, "max")
        )

    params = SpinLockParams(cfg.omega_1, cfg.omega_d0, cfg.tau_c)
    kappa = analytics.kappa_1(cfg.omega_1, cfg.omega_d0)
    if kappa > 0:
        horizon = 20.0 / kappa
        times = np.linspace(0.0, horizon, 33)[1:]
        gen = liouville.secular_liouvillian(cfg.omega_1, cfg.omega_d0, cfg.tau_c)
        for group, rho0, start in (
            (ObservableGroup.GROUP1, spinops.initial_state_plus_x(), [1.0, 0, 0, 0]),
            (
                ObservableGroup.GROUP2,
                np.diag([0.15, 0.25, 0.25, 0.35]).astype(complex),
                [-0.2, 0, 0, 0],
            ),
        ):
            reduced = analytics.integrate_reduced_trajectory(
                ReducedState4(np.array(start, dtype=float), group),
                params,
                times,
                dt=0.005 / kappa,
            )
            cols = [names.index(k) for k in group.components]
            err = 0.0
            for t, expected in zip(times, reduced):
                rho = liouville.apply_superop(liouville.matrix_exponential(gen, t), rho0)
                obs = spinops.observables_from_states(rho[None])[0]
                err = max(err, float(np.max(np.abs(obs[cols] - expected))))
            checks.append(
                InvariantCheck(
                    f"{group.name.lower()}_oracle_equivalence", err, 1e-8, "max"
                )
            )
    return checks


def cmd_invariants(spec: RunSpec, out, corruption: str | None = None) -> bool:
    """Run the invariant suite; JSON report; True when everything passed."""
    checks = run_invariant_checks(spec.config, corruption=corruption)
    all_pass = all(check.passed for check in checks)
    report = {
        "mode": spec.mode.value,
        "config": spec.echo_dict(),
        "checks": [check.as_dict() for check in checks],
        "pass": all_pass,
    }
    _write_text(out, json.dumps(report, sort_keys=True, indent=2) + "\n")
    return all_pass


# --- entry point ----------------------------------------------------------

_COMMAND_MODES = {
    "timeseries": Mode.TIMESERIES,
    "spectrum": Mode.SPECTRUM,
    "sweep2d": Mode.SWEEP2D,
    "tauc-sweep": Mode.TAUC_SWEEP,
    "invariants": Mode.INVARIANTS,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtcsim",
        description="Two-pulse Floquet protocol simulator for a dissipative "
        "dipolar-coupled spin pair",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMAND_MODES:
        p = sub.add_parser(name, help=f"run the {name} workflow")
        p.add_argument("--config", required=True, help="path to the config file")
        p.add_argument(
            "--out",
            default=None,
            help="output path (default: stdout)",
        )
        p.add_argument(
            "--format", choices=("csv", "json"), default="csv", dest="fmt",
            help="output format (invariants reports are always JSON)",
        )
        p.add_argument(
            "--threads", type=int, default=1, help="worker threads for sweep cells"
        )
        if name == "invariants":
            p.add_argument("--inject-defect", default=None, help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    mode = _COMMAND_MODES[args.command]
    try:
        with open(args.config) as handle:
            text = handle.read()
    except OSError as exc:
        print(f"cannot read config file {args.config}: {exc}", file=sys.stderr)
        return 2
    try:
        spec = parse_config(text, mode)
    except ConfigError as exc:
        print(f"config error in {args.config}:\n{exc}", file=sys.stderr)
        return 2
    out = args.out if args.out is not None else sys.stdout
    try:
        if mode is Mode.TIMESERIES:
            cmd_timeseries(spec, out, args.fmt)
        elif mode is Mode.SPECTRUM:
            cmd_spectrum(spec, out, args.fmt)
        elif mode is Mode.SWEEP2D:
            cmd_sweep2d(spec, out, args.fmt, threads=args.threads)
        elif mode is Mode.TAUC_SWEEP:
            cmd_tauc_sweep(spec, out, args.fmt, threads=args.threads)
        else:
            ok = cmd_invariants(spec, out, corruption=args.inject_defect)
            return 0 if ok else 1
    except (OSError, RuntimeError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
