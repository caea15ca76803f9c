"""Checks of the closed-form model against the numerical oracles."""

import logging
from dataclasses import dataclass

import numpy as np

from .barrier import delay_time, transmission
from .consts import QT_LOGGER
from .helpers import mu_to_base
from .oracle import GridSpec, delay_fd, joint_transmission_grid, transmission_ode, with_form
from .probabilities import build_context, evaluate
from .state_ops import StateForm, Statistics
from .sweep import SweepConfig

qtl = logging.getLogger(QT_LOGGER)
"""Our logger instance with the appropriate tag."""

_SCAN_RANGE: tuple[float, float] = (0.3, 1.4)
_GRID_Q: tuple[float, ...] = (0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3)
_FERMION_MIN_SEPARATION = 0.1
_FLUX_TOL = 1e-8
_CONVERGENCE_STEPS: tuple[float, ...] = (0.02, 0.01, 0.005)


@dataclass(frozen=True)
class CheckResult:
    """The outcome of one validation criterion."""

    name: str
    """Short identifier of the check."""
    measured: float
    """The worst deviation observed."""
    tolerance: float
    """The bound it was held to."""
    passed: bool
    """Flag that indicates if the check passed."""
    detail: str = ""
    """Extra context for the report."""

    def line(self) -> str:
        """A one-line human readable summary."""
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{verdict} {self.name}: measured {self.measured:.3e}, tolerance {self.tolerance:.3e}{extra}"


@dataclass(frozen=True)
class ValidationReport:
    """The outcome of every check."""

    checks: tuple[CheckResult, ...]
    """The individual results, in the order they ran."""

    @property
    def passed(self) -> bool:
        """Flag that indicates if every check passed."""
        return all(check.passed for check in self.checks)

    def lines(self) -> list[str]:
        """One summary line per check."""
        return [check.line() for check in self.checks]


def _scan_momenta(count: int) -> np.ndarray:
    """``count`` momenta strictly inside the scan range, in base units."""
    lo, hi = _SCAN_RANGE
    return mu_to_base(np.linspace(lo, hi, count + 2)[1:-1])


def check_transmission(cfg: SweepConfig, count: int = 50) -> CheckResult:
    """
    Closed-form ``|T|^2`` against the wave-equation oracle, plus flux conservation of the oracle.

    Args:
        cfg (SweepConfig): Supplies the barrier and ``ode_tol``.
        count (int): Number of momenta scanned.

    Returns:
        (CheckResult): The result.
    """
    bar = cfg.barrier()
    worst, worst_flux = 0.0, 0.0
    for p in _scan_momenta(count):
        ode = transmission_ode(float(p), bar)
        worst = max(worst, abs(abs(transmission(float(p), bar)) ** 2 - ode.magnitude2))
        worst_flux = max(worst_flux, abs(ode.flux - 1))
    passed = worst <= cfg.ode_tol and worst_flux <= _FLUX_TOL
    return CheckResult("transmission-ode", worst, cfg.ode_tol, passed, f"flux error {worst_flux:.1e}")


def convergence_ratios(p: float, cfg: SweepConfig) -> list[float]:
    """
    Ratios of successive finite-difference errors as the energy step halves; second order gives about 4.

    Args:
        p (float): The momentum in base units.
        cfg (SweepConfig): Supplies the barrier.

    Returns:
        (list[float]): The ratios, empty when the errors vanish (no barrier).
    """
    bar = cfg.barrier()
    tau = delay_time(p, bar)
    errors = [abs(delay_fd(p, bar, GridSpec(energy_step=step)) - tau) for step in _CONVERGENCE_STEPS]
    if min(errors) < 1e-14:
        return []
    return [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]


def check_delay(cfg: SweepConfig, count: int = 100) -> CheckResult:
    """
    Analytic delay against the centred finite difference on an energy grid, plus second-order convergence at
    the configured ``p``.

    Args:
        cfg (SweepConfig): Supplies the barrier and ``derivative_rtol``.
        count (int): Number of energies scanned.

    Returns:
        (CheckResult): The result.
    """
    bar = cfg.barrier()
    lo, hi = (mu_to_base(v) ** 2 / (2 * bar.m) for v in _SCAN_RANGE)
    worst = 0.0
    for energy in np.linspace(lo, hi, count):
        p = float(np.sqrt(2 * bar.m * energy))
        tau = delay_time(p, bar)
        worst = max(worst, abs(delay_fd(p, bar) - tau) / max(abs(tau), 1e-12))
    ratios = convergence_ratios(mu_to_base(cfg.p), cfg)
    second_order = all(3.0 <= ratio <= 5.0 for ratio in ratios)
    detail = "convergence ratios " + ", ".join(f"{r:.2f}" for r in ratios) if ratios else "no barrier"
    return CheckResult("delay-fd", worst, cfg.derivative_rtol, worst <= cfg.derivative_rtol and second_order, detail)


def check_grid(cfg: SweepConfig, grid: GridSpec | None = None, q_values: tuple[float, ...] = _GRID_Q) -> CheckResult:
    """
    Model probabilities against the grid oracle for product and superposition forms of every statistics.

    Fermion products closer than 0.1 m.u. to ``q = p`` are skipped, the sharp-peak model does not resolve the
    exclusion zero there. Fermion superpositions are checked everywhere.

    Args:
        cfg (SweepConfig): Supplies every parameter and ``oracle_tol``.
        grid (GridSpec | None): The discretisation.
        q_values (tuple[float, ...]): Sweep points in m.u.

    Returns:
        (CheckResult): The result, with the worst relative deviation.
    """
    bar = cfg.barrier()
    worst, where = 0.0, ""
    for q in q_values:
        base = cfg.scenario(q)
        ctx = build_context(base, bar, cfg.fermion_eps)
        near_exclusion = abs(q - cfg.p) < _FERMION_MIN_SEPARATION
        for statistics in Statistics:
            for form in (StateForm.PRODUCT_A, StateForm.SUPERPOSITION):
                if near_exclusion and statistics is Statistics.FERMION and form is StateForm.PRODUCT_A:
                    continue
                model = evaluate(ctx, statistics, form)
                if not model.defined:
                    continue
                reference = joint_transmission_grid(with_form(base, statistics, form), bar, grid)
                deviation = abs(model.value - reference) / reference
                qtl.debug("Grid check q=%s %s: model %s oracle %s", q, model.name, model.value, reference)
                if deviation > worst:
                    worst, where = deviation, f"worst at q={q:g} {model.name}"
    return CheckResult("grid-oracle", worst, cfg.oracle_tol, worst <= cfg.oracle_tol, where)


def validate(cfg: SweepConfig, grid: GridSpec | None = None) -> ValidationReport:
    """
    Run the three checks.

    Args:
        cfg (SweepConfig): The parameters and tolerances.
        grid (GridSpec | None): The discretisation of the grid oracle.

    Returns:
        (ValidationReport): The report; callers decide what a failure means.
    """
    checks = []
    for check in (check_transmission(cfg), check_delay(cfg), check_grid(cfg, grid)):
        if check.passed:
            qtl.info("%s", check.line())
        else:
            qtl.error("%s", check.line())
        checks.append(check)
    return ValidationReport(checks=tuple(checks))
