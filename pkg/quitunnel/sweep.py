"""
Momentum sweeps over ``q``, their configuration and the CSV tables they produce.

Everything in this module speaks the user-facing units: momenta in m.u. and lengths in l.u.
"""

import configparser
import csv
import io
import logging
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from functools import partial

import numpy as np

from .barrier import BarrierSpec
from .consts import (
    QT_CSV_DIGITS,
    QT_DEFAULT_A,
    QT_DEFAULT_D,
    QT_DEFAULT_P,
    QT_DEFAULT_PBAR,
    QT_DEFAULT_Q_MAX,
    QT_DEFAULT_Q_MIN,
    QT_DEFAULT_QBAR,
    QT_DEFAULT_STEPS,
    QT_DEFAULT_WIDTH,
    QT_DERIVATIVE_RTOL,
    QT_FERMION_EPS,
    QT_IDENTITY_TOL,
    QT_LOGGER,
    QT_ODE_TOL,
    QT_ORACLE_TOL,
    QT_Q_UPPER_BOUND,
)
from .errors import EmptyTableError, SweepConfigError
from .helpers import format_optional, lu_to_base, mu_to_base, parse_optional
from .probabilities import ProbabilityReport, all_probabilities, build_context, evaluate
from .state_ops import ALL_SERIES, StateForm, Statistics, parse_series_name, series_name
from .states import ScenarioSpec

qtl = logging.getLogger(QT_LOGGER)
"""Our logger instance with the appropriate tag."""

_SECTION = "sweep"


class FigurePreset(Enum):
    """Named column sets of the four standard momentum-sweep charts."""

    FIG1: str = "fig1"
    """Distinguishable particles: product, mixture and superposition."""
    FIG2: str = "fig2"
    """Product states: distinguishable, bosons and fermions."""
    FIG3: str = "fig3"
    """Superpositions: distinguishable, bosons and fermions."""
    FIG4: str = "fig4"
    """Identical-particle mixture against superposition."""

    def columns(self, statistics: Statistics | None = None) -> tuple[str, ...]:
        """
        The series names of the preset.

        Args:
            statistics (Statistics | None): Restricts ``fig4`` to one identical statistics; both when omitted.

        Returns:
            (tuple[str, ...]): The series names in column order.
        """
        match self:
            case FigurePreset.FIG1:
                return ("P_dis_a", "P_dis_mix", "P_dis_sup")
            case FigurePreset.FIG2:
                return ("P_dis_a", "P_ide_a_boson", "P_ide_a_fermion")
            case FigurePreset.FIG3:
                return ("P_dis_sup", "P_ide_sup_boson", "P_ide_sup_fermion")
        chosen = [Statistics.BOSON, Statistics.FERMION]
        if statistics is not None and statistics.identical:
            chosen = [statistics]
        return tuple(
            series_name(stat, form) for stat in chosen for form in (StateForm.MIXTURE, StateForm.SUPERPOSITION)
        )


@dataclass(frozen=True)
class SweepConfig:  # pylint: disable=too-many-instance-attributes
    """A sweep over ``q`` with every other parameter fixed; momenta in m.u., lengths in l.u."""

    q_min: float = QT_DEFAULT_Q_MIN
    """Lower end of the sweep."""
    q_max: float = QT_DEFAULT_Q_MAX
    """Upper end of the sweep."""
    steps: int = QT_DEFAULT_STEPS
    """Number of grid intervals between ``q_min`` and ``q_max``."""
    p: float = QT_DEFAULT_P
    """Central momentum of ``psi``."""
    pbar: float = QT_DEFAULT_PBAR
    """Central momentum of ``varphi``."""
    qbar: float = QT_DEFAULT_QBAR
    """Central momentum of ``chi``."""
    big_p: float = QT_DEFAULT_WIDTH
    """The shared packet width ``P``."""
    d: float = QT_DEFAULT_D
    """The barrier width."""
    a: float = QT_DEFAULT_A
    """Coefficient of term ``a``; ``|b|`` follows from normalisation."""
    b_phase: float = 0.0
    """Relative phase of ``b`` in radians."""
    statistics: Statistics | None = None
    """Restricts the columns to one statistics."""
    form: StateForm | None = None
    """Restricts the columns to one state form."""
    preset: FigurePreset | None = None
    """A figure preset selecting the columns."""
    series: tuple[str, ...] = ()
    """Explicit series names, overriding the preset."""
    workers: int = 1
    """Threads evaluating rows."""
    identity_tol: float = QT_IDENTITY_TOL
    """Tolerance of the exact identities."""
    derivative_rtol: float = QT_DERIVATIVE_RTOL
    """Relative tolerance of the delay-time check."""
    fermion_eps: float = QT_FERMION_EPS
    """Fermion exclusion tolerance."""
    oracle_tol: float = QT_ORACLE_TOL
    """Relative tolerance of the model against the grid oracle."""
    ode_tol: float = QT_ODE_TOL
    """Absolute tolerance of ``|T|^2`` against the wave-equation oracle."""
    out: str | None = None
    """Output path."""

    def __post_init__(self):
        if not 0 < self.q_min < self.q_max < QT_Q_UPPER_BOUND:
            raise SweepConfigError(f"Need 0 < q_min < q_max < sqrt(2), got q_min={self.q_min}, q_max={self.q_max}")
        if self.steps < 1:
            raise SweepConfigError(f"steps must be positive, got: {self.steps}")
        for name in ("p", "pbar", "qbar", "big_p"):
            if not getattr(self, name) > 0:
                raise SweepConfigError(f"{name} must be positive, got: {getattr(self, name)}")
        if not self.d >= 0:
            raise SweepConfigError(f"d must be non-negative, got: {self.d}")
        if not 0 <= self.a <= 1:
            raise SweepConfigError(f"a must lie in [0, 1], got: {self.a}")
        if self.workers < 1:
            raise SweepConfigError(f"workers must be positive, got: {self.workers}")
        for name in ("identity_tol", "derivative_rtol", "fermion_eps", "oracle_tol", "ode_tol"):
            if not getattr(self, name) > 0:
                raise SweepConfigError(f"{name} must be positive, got: {getattr(self, name)}")
        unknown = [name for name in self.series if name not in ALL_SERIES]
        if unknown:
            raise SweepConfigError(f"Unknown probability series: {', '.join(unknown)}")

    def columns(self) -> tuple[str, ...]:
        """
        The series the sweep evaluates: explicit ``series`` first, then the preset, then every series matching
        the ``statistics`` and ``form`` filters.

        Returns:
            (tuple[str, ...]): The series names in column order.
        """
        if self.series:
            return self.series
        if self.preset is not None:
            return self.preset.columns(self.statistics)
        names = []
        for name in ALL_SERIES:
            statistics, form = parse_series_name(name)
            if self.statistics not in (None, statistics) or self.form not in (None, form):
                continue
            names.append(name)
        return tuple(names)

    def barrier(self) -> BarrierSpec:
        """The barrier in base units."""
        return BarrierSpec(d=lu_to_base(self.d))

    def scenario(self, q: float) -> ScenarioSpec:
        """
        The scenario at ``q`` in base units.

        Args:
            q (float): The central momentum of ``phi`` in m.u.

        Returns:
            (ScenarioSpec): The scenario.
        """
        return ScenarioSpec.from_momenta(
            mu_to_base(self.p),
            mu_to_base(q),
            mu_to_base(self.pbar),
            mu_to_base(self.qbar),
            mu_to_base(self.big_p),
            a=self.a,
            b_phase=self.b_phase,
            statistics=self.statistics or Statistics.DISTINGUISHABLE,
            form=self.form or StateForm.SUPERPOSITION,
        )


def _convert(name: str, raw: str):
    """Parse a config value into the type of the ``SweepConfig`` field ``name``."""
    raw = raw.strip()
    match name:
        case "steps" | "workers":
            return int(raw)
        case "statistics":
            return Statistics(raw)
        case "form":
            return StateForm(raw)
        case "preset":
            return FigurePreset(raw)
        case "series":
            return tuple(item.strip() for item in raw.split(",") if item.strip())
        case "out":
            return raw
    return float(raw)


def parse_config(text: str) -> dict:
    """
    Parse a flat ``key = value`` config; ``#`` comments and blank lines are ignored, unknown keys are rejected.

    Args:
        text (str): The config file contents.

    Returns:
        (dict): Typed values keyed by ``SweepConfig`` field name.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(f"[{_SECTION}]\n{text}")
    except configparser.Error as err:
        raise SweepConfigError(f"Malformed config: {err}") from err

    known = {f.name for f in fields(SweepConfig)}
    values = {}
    for key, raw in parser.items(_SECTION):
        if key not in known:
            raise SweepConfigError(f"Unknown config key: {key}")
        try:
            values[key] = _convert(key, raw)
        except ValueError as err:
            raise SweepConfigError(f"Invalid value for {key}: {raw!r}") from err
    return values


def load_config(path: str | None = None, **overrides) -> SweepConfig:
    """
    Build a config from an optional file and keyword overrides; overrides that are not ``None`` win.

    Args:
        path (str | None): The config file.
        **overrides: Field values, typically the parsed command-line flags.

    Returns:
        (SweepConfig): The validated config.
    """
    values = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf8") as cfg_file:
                values = parse_config(cfg_file.read())
        except OSError as err:
            raise SweepConfigError(f"Cannot read config {path}: {err}") from err
    values.update({key: value for key, value in overrides.items() if value is not None})
    qtl.debug("Sweep config values: %s", values)
    return SweepConfig(**values)


def q_grid(cfg: SweepConfig) -> np.ndarray:
    """
    The sweep points ``q = p + j h`` with ``h = (q_max - q_min) / steps``, kept within ``[q_min, q_max]`` and
    below ``sqrt(2)``. The grid is anchored at ``p`` so that ``q = p`` is always a point when ``p`` is in range.

    Args:
        cfg (SweepConfig): The sweep.

    Returns:
        (np.ndarray): The grid in m.u., ascending.
    """
    h = (cfg.q_max - cfg.q_min) / cfg.steps
    lo = math.ceil((cfg.q_min - cfg.p) / h - 1e-9)
    hi = math.floor((cfg.q_max - cfg.p) / h + 1e-9)
    grid = cfg.p + np.arange(lo, hi + 1) * h
    return grid[(grid > 0) & (grid < QT_Q_UPPER_BOUND)]


def point_reports(cfg: SweepConfig, q: float, names: tuple[str, ...] | None = None) -> dict[str, ProbabilityReport]:
    """
    Evaluate probabilities at a single ``q``.

    Args:
        cfg (SweepConfig): The sweep supplying every fixed parameter.
        q (float): The central momentum of ``phi`` in m.u.
        names (tuple[str, ...] | None): The series to evaluate; every series when omitted.

    Returns:
        (dict[str, ProbabilityReport]): The reports keyed by series name.
    """
    ctx = build_context(cfg.scenario(q), cfg.barrier(), cfg.fermion_eps)
    if names is None:
        return all_probabilities(ctx)
    return {name: evaluate(ctx, *parse_series_name(name)) for name in names}


def _row(cfg: SweepConfig, names: tuple[str, ...], q: float) -> tuple[float | None, ...]:
    reports = point_reports(cfg, float(q), names)
    return tuple(reports[name].value for name in names)


@dataclass(frozen=True)
class SweepTable:
    """The result of a sweep: one row per ``q``, one column per series; ``None`` marks undefined cells."""

    columns: tuple[str, ...]
    """The series names."""
    q: tuple[float, ...]
    """The sweep points in m.u."""
    rows: tuple[tuple[float | None, ...], ...] = field(default_factory=tuple)
    """The values, row by row."""

    def column(self, name: str) -> list[float | None]:
        """The values of one series."""
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def value_at(self, name: str, q: float) -> float | None:
        """The value of ``name`` at the grid point nearest ``q``."""
        index = int(np.argmin(np.abs(np.asarray(self.q) - q)))
        return self.rows[index][self.columns.index(name)]

    def to_csv(self) -> str:
        """
        Serialise the table; numbers carry 12 significant digits and undefined values are empty cells.

        Returns:
            (str): UTF-8 friendly, comma-separated, LF-terminated CSV text.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("q", *self.columns))
        for q, row in zip(self.q, self.rows):
            writer.writerow([format_optional(q, QT_CSV_DIGITS), *(format_optional(v, QT_CSV_DIGITS) for v in row)])
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        """
        Parse a table written by :meth:`to_csv`.

        Args:
            text (str): The CSV text.

        Returns:
            (SweepTable): The table.
        """
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if not header or header[0] != "q" or len(header) < 2:
            raise EmptyTableError("The table has no data columns")
        q_values, rows = [], []
        for record in reader:
            if not record:
                continue
            q_values.append(float(record[0]))
            rows.append(tuple(parse_optional(cell) for cell in record[1:]))
        if not rows:
            raise EmptyTableError("The table has no rows")
        return cls(columns=tuple(header[1:]), q=tuple(q_values), rows=tuple(rows))


def write_atomic(path: str, text: str):
    """
    Write ``text`` to ``path`` through a temporary file in the same directory, so no partial file is left.

    Args:
        path (str): The destination.
        text (str): The contents.
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".quitunnel-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf8", newline="") as tmp:
            tmp.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def run_sweep(cfg: SweepConfig) -> SweepTable:
    """
    Evaluate the configured series on the ``q`` grid. Rows are computed on ``workers`` threads and assembled in
    grid order, so the table does not depend on the parallelism.

    Args:
        cfg (SweepConfig): The sweep.

    Returns:
        (SweepTable): The table.
    """
    names = cfg.columns()
    if not names:
        raise SweepConfigError("No probability series selected")
    grid = q_grid(cfg)
    qtl.info("Sweeping %d points over [%s, %s] for %s", grid.size, cfg.q_min, cfg.q_max, ", ".join(names))
    evaluate_row = partial(_row, cfg, names)
    if cfg.workers == 1:
        rows = [evaluate_row(q) for q in grid]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(evaluate_row, grid))
    undefined = sum(value is None for row in rows for value in row)
    if undefined:
        qtl.warning("%d undefined cells in the sweep", undefined)
    return SweepTable(columns=names, q=tuple(float(q) for q in grid), rows=tuple(rows))


@dataclass(frozen=True)
class SeparationMetrics:
    """How far superpositions depart from mixtures and identical particles from distinguishable ones."""

    sup_mix: float | None
    """``max |P_sup - P_mix|`` relative to ``max P_sup`` over the matching column pairs."""
    ide_dis_ratio: float | None
    """The largest ``P_ide_sup / P_dis_sup`` ratio found."""
    ratio_q: float | None
    """Where that ratio occurs, in m.u."""


def _paired(xs: list, ys: list) -> list[tuple[float, float]]:
    return [(x, y) for x, y in zip(xs, ys) if x is not None and y is not None]


def separation_metrics(table: SweepTable) -> SeparationMetrics:
    """
    Summarise how far superpositions depart from mixtures and identical particles from distinguishable ones.

    Args:
        table (SweepTable): A sweep table.

    Returns:
        (SeparationMetrics): ``None`` for metrics whose columns are not in the table.
    """
    sup_mix = None
    for name in table.columns:
        if "_sup" not in name:
            continue
        mix_name = name.replace("_sup", "_mix")
        if mix_name not in table.columns:
            continue
        pairs = _paired(table.column(name), table.column(mix_name))
        peak = max((s for s, _ in pairs), default=0.0)
        if peak > 0:
            value = max(abs(s - m) for s, m in pairs) / peak
            sup_mix = value if sup_mix is None else max(sup_mix, value)

    ratio, ratio_q = None, None
    if "P_dis_sup" in table.columns:
        dis = table.column("P_dis_sup")
        for stat in (Statistics.BOSON, Statistics.FERMION):
            name = series_name(stat, StateForm.SUPERPOSITION)
            if name not in table.columns:
                continue
            for q, ide, base in zip(table.q, table.column(name), dis):
                if ide is None or base is None or base <= 0:
                    continue
                if ratio is None or ide / base > ratio:
                    ratio, ratio_q = ide / base, q
    return SeparationMetrics(sup_mix=sup_mix, ide_dis_ratio=ratio, ratio_q=ratio_q)


def with_overrides(cfg: SweepConfig, **changes) -> SweepConfig:
    """A copy of ``cfg`` with the non-``None`` ``changes`` applied."""
    return replace(cfg, **{key: value for key, value in changes.items() if value is not None})
