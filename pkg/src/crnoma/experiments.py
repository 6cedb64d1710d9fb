"""Sweep definitions, figure presets, and tabular CSV/JSON persistence.

A sweep walks one axis (secondary transmit SNR in dB, or the secondary target
rate) and evaluates a grid of scheme x metric cells with the analytic
expressions, the Monte Carlo estimator, or both. The named presets are the
standard comparison layouts for this system (outage vs SNR under two power
couplings, conditional outage vs SNR and vs target rate, throughput vs SNR)
at desk scale; grids and sample counts are configurable.

Output rows are ordered deterministically (axis-major, then scheme, metric,
engine in the order requested) and floats are serialized with shortest
round-trip precision, so a fixed seed yields byte-identical files regardless
of the parallelism degree underneath.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import analytic
from .channel import SamplerConfig
from .errors import UnknownSchemeError
from .estimator import Metric, estimate_from_tally, simulate_tally
from .params import SystemParams, db_to_linear
from .strategy import SchemeId

AXES = ("P1_DB", "TARGET_RATE_R1")
COUPLINGS = ("EQUAL", "RATIO")
ENGINES = ("ANALYTIC", "MONTE_CARLO", "BOTH")

# schemes with closed forms; CSI-SIC is simulation-only
_ANALYTIC_SCHEMES = frozenset({SchemeId.RS, SchemeId.NH_SIC, SchemeId.QOS_SIC})


@dataclass(frozen=True)
class SweepSpec:
    """One experiment axis with everything needed to reproduce it."""

    axis: str
    axis_values: tuple[float, ...]
    fixed: dict
    schemes: tuple[SchemeId, ...]
    metrics: tuple[Metric, ...]
    engine: str = "BOTH"
    coupling: str = "EQUAL"
    ratio: float = 1.0
    n_samples: int = 1_000_000
    seed: int = 2024
    stream_count: int = 16

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.coupling not in COUPLINGS:
            raise ValueError(f"coupling must be one of {COUPLINGS}, got {self.coupling!r}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if not self.axis_values or any(b <= a for a, b in zip(self.axis_values, self.axis_values[1:])):
            raise ValueError("axis_values must be nonempty and strictly increasing")
        if self.ratio <= 0.0:
            raise ValueError("coupling ratio must be positive")
        if not self.schemes or not self.metrics:
            raise ValueError("schemes and metrics must be nonempty")

    def params_at(self, axis_value: float) -> SystemParams:
        if self.axis == "P1_DB":
            p1 = db_to_linear(axis_value)
            p0 = p1 if self.coupling == "EQUAL" else self.ratio * p1
            return SystemParams(p0=p0, p1=p1, r0_hat=self.fixed["r0"], r1_hat=self.fixed["r1"])
        p0 = db_to_linear(self.fixed["p0_db"])
        p1 = db_to_linear(self.fixed["p1_db"])
        return SystemParams(p0=p0, p1=p1, r0_hat=self.fixed["r0"], r1_hat=axis_value)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["axis_values"] = list(self.axis_values)
        d["schemes"] = [s.value for s in self.schemes]
        d["metrics"] = [m.value for m in self.metrics]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        d = dict(d)
        d["axis_values"] = tuple(float(v) for v in d["axis_values"])
        d["schemes"] = tuple(SchemeId(s) for s in d["schemes"])
        d["metrics"] = tuple(Metric(m) for m in d["metrics"])
        return cls(**d)


def save_spec(spec: SweepSpec, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(spec.to_dict(), indent=2) + "\n")
    return path


def load_spec(path: str | Path) -> SweepSpec:
    return SweepSpec.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    scheme: SchemeId
    metric: Metric
    engine: str
    value: float
    std_error: float | None = None


@dataclass(frozen=True)
class CellFailure:
    axis_value: float
    scheme: SchemeId
    metric: Metric
    engine: str
    message: str


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow] = field(default_factory=list)
    failures: list[CellFailure] = field(default_factory=list)


def _analytic_value(scheme: SchemeId, metric: Metric, params: SystemParams) -> float:
    if metric is Metric.PRIMARY_OUTAGE:
        return analytic.primary_outage_probability(params)
    if metric is Metric.ADMISSION:
        return analytic.admission_probability(params)
    if scheme not in _ANALYTIC_SCHEMES:
        raise UnknownSchemeError(f"{scheme.value} has no closed form")
    if metric is Metric.OUTAGE_TOTAL:
        return analytic.total_outage(scheme, params)
    if metric is Metric.OUTAGE_CASE_I:
        return analytic.rs_case_i_outage(params)
    if metric is Metric.OUTAGE_CASE_II:
        return analytic.case_ii_outage(scheme, params)
    if metric is Metric.OUTAGE_CASE_III:
        return analytic.rs_case_iii_outage(params)
    if metric is Metric.OUTAGE_CASE_II_CONDITIONAL:
        return analytic.conditional_case_ii_outage(scheme, params)
    if metric is Metric.THROUGHPUT_DELAY_LIMITED:
        return analytic.delay_limited_throughput(scheme, params)
    raise UnknownSchemeError(f"no analytic expression for metric {metric.value}")


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate every requested cell; failed cells are recorded, not fatal.

    With engine BOTH, analytic rows are emitted only for cells that have a
    closed form (CSI-SIC and the ergodic throughput are simulation-only);
    requesting engine ANALYTIC for such a cell records a failure instead.
    """
    result = SweepResult(spec=spec)
    want_analytic = spec.engine in ("ANALYTIC", "BOTH")
    want_mc = spec.engine in ("MONTE_CARLO", "BOTH")
    sampler = SamplerConfig(seed=spec.seed, stream_count=spec.stream_count)

    for axis_value in spec.axis_values:
        try:
            params = spec.params_at(axis_value)
        except Exception as exc:  # a bad cell must not kill the sweep
            for scheme in spec.schemes:
                for metric in spec.metrics:
                    result.failures.append(CellFailure(axis_value, scheme, metric, spec.engine, str(exc)))
            continue

        if want_analytic:
            for scheme in spec.schemes:
                for metric in spec.metrics:
                    try:
                        value = _analytic_value(scheme, metric, params)
                    except UnknownSchemeError as exc:
                        if spec.engine == "ANALYTIC":
                            result.failures.append(
                                CellFailure(axis_value, scheme, metric, "ANALYTIC", str(exc)))
                        continue
                    except Exception as exc:
                        result.failures.append(
                            CellFailure(axis_value, scheme, metric, "ANALYTIC", str(exc)))
                        continue
                    result.rows.append(SweepRow(axis_value, scheme, metric, "ANALYTIC", value))

        if want_mc:
            need_rates = Metric.THROUGHPUT_ERGODIC in spec.metrics
            try:
                tally = simulate_tally(params, sampler, spec.n_samples, tuple(spec.schemes),
                                       with_rates=need_rates, workers=workers)
            except Exception as exc:
                for scheme in spec.schemes:
                    for metric in spec.metrics:
                        result.failures.append(
                            CellFailure(axis_value, scheme, metric, "MONTE_CARLO", str(exc)))
                continue
            for scheme in spec.schemes:
                for metric in spec.metrics:
                    try:
                        est = estimate_from_tally(scheme, metric, params, tally)
                    except Exception as exc:
                        result.failures.append(
                            CellFailure(axis_value, scheme, metric, "MONTE_CARLO", str(exc)))
                        continue
                    result.rows.append(SweepRow(axis_value, est.scheme, est.metric,
                                                "MONTE_CARLO", est.mean, est.std_error))
    return result


_COLUMNS = ("axis_value", "scheme", "metric", "engine", "value", "std_error")


def _row_record(row: SweepRow) -> dict:
    return {
        "axis_value": row.axis_value,
        "scheme": row.scheme.value,
        "metric": row.metric.value,
        "engine": row.engine,
        "value": row.value,
        "std_error": row.std_error,
    }


def render(result: SweepResult, fmt: str) -> str:
    """Serialize result rows to CSV or JSON text with round-trip-exact floats."""
    if not result.rows:
        raise ValueError("refusing to emit an empty sweep result")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_COLUMNS)
        for row in result.rows:
            rec = _row_record(row)
            writer.writerow([
                repr(rec["axis_value"]), rec["scheme"], rec["metric"], rec["engine"],
                repr(rec["value"]), "" if rec["std_error"] is None else repr(rec["std_error"]),
            ])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([_row_record(r) for r in result.rows], indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


def emit(result: SweepResult, fmt: str, path: str | Path) -> Path:
    """Write the rendered result to path; nothing is created on error."""
    text = render(result, fmt)  # raises before the file exists
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"could not write sweep result to {path}: {exc}") from exc
    return path


def parse_csv(text: str) -> list[dict]:
    """Inverse of render(..., 'csv'): floats recovered exactly."""
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for rec in reader:
        out.append({
            "axis_value": float(rec["axis_value"]),
            "scheme": rec["scheme"],
            "metric": rec["metric"],
            "engine": rec["engine"],
            "value": float(rec["value"]),
            "std_error": None if rec["std_error"] == "" else float(rec["std_error"]),
        })
    return out


def _snr_axis() -> tuple[float, ...]:
    return tuple(float(v) for v in range(0, 41, 2))


def _rate_axis() -> tuple[float, ...]:
    return tuple(round(0.2 * k, 10) for k in range(1, 21))


_ALL_SECONDARY = (SchemeId.RS, SchemeId.NH_SIC, SchemeId.QOS_SIC, SchemeId.CSI_SIC)

# Figure presets. The outage and conditional-outage presets use target rates
# with eps0*eps1 > 1 so the QoS-SIC/CSI-SIC outage floors are visible; the
# throughput preset keeps the 1 BPCU default, and the target-rate preset pins
# r0 = 1, p0 = 15 dB, p1 = 20 dB.
_PRESET_BUILDERS = {
    "fig1a": lambda: SweepSpec(axis="P1_DB", axis_values=_snr_axis(),
                               fixed={"r0": 1.5, "r1": 1.5}, coupling="EQUAL",
                               schemes=_ALL_SECONDARY, metrics=(Metric.OUTAGE_TOTAL,)),
    "fig1b": lambda: SweepSpec(axis="P1_DB", axis_values=_snr_axis(),
                               fixed={"r0": 1.5, "r1": 1.5}, coupling="RATIO", ratio=0.1,
                               schemes=_ALL_SECONDARY, metrics=(Metric.OUTAGE_TOTAL,)),
    # conditional sweep starts at 10 dB: with p0 = p1/10, the case-II event is
    # too rare below that for a desk-scale conditional estimate
    "fig2a": lambda: SweepSpec(axis="P1_DB", axis_values=tuple(float(v) for v in range(10, 41, 2)),
                               fixed={"r0": 1.5, "r1": 1.5}, coupling="RATIO", ratio=0.1,
                               schemes=_ALL_SECONDARY,
                               metrics=(Metric.OUTAGE_CASE_II_CONDITIONAL,)),
    "fig2b": lambda: SweepSpec(axis="TARGET_RATE_R1", axis_values=_rate_axis(),
                               fixed={"r0": 1.0, "p0_db": 15.0, "p1_db": 20.0},
                               schemes=_ALL_SECONDARY,
                               metrics=(Metric.OUTAGE_CASE_II_CONDITIONAL,)),
    "fig3": lambda: SweepSpec(axis="P1_DB", axis_values=_snr_axis(),
                              fixed={"r0": 1.0, "r1": 1.0}, coupling="RATIO", ratio=0.1,
                              schemes=_ALL_SECONDARY,
                              metrics=(Metric.THROUGHPUT_DELAY_LIMITED,)),
}

PRESET_NAMES = tuple(sorted(_PRESET_BUILDERS))


def figure_preset(name: str, n_samples: int | None = None, seed: int | None = None) -> SweepSpec:
    """A ready-to-run SweepSpec for one of the named figure layouts."""
    try:
        spec = _PRESET_BUILDERS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}") from None
    updates: dict = {}
    if n_samples is not None:
        updates["n_samples"] = int(n_samples)
    if seed is not None:
        updates["seed"] = int(seed)
    if updates:
        d = spec.to_dict()
        d.update(updates)
        spec = SweepSpec.from_dict(d)
    return spec
