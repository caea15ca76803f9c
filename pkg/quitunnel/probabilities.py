"""The double-transmission probabilities of every statistics and state form at one sweep point."""

import logging
from dataclasses import dataclass, field

from .barrier import BarrierSpec, ScatterResult, scatter
from .consts import QT_FERMION_EPS, QT_LOGGER
from .packets import OverlapSet, overlap_matrix
from .state_ops import PacketLabel, StateForm, Statistics, Term, series_name
from .states import (
    CHI,
    PHI,
    PSI,
    VARPHI,
    NormSet,
    ScenarioSpec,
    bracket_distinguishable,
    bracket_identical,
    norm_set,
    norm_T_distinguishable,
    norm_T_identical,
    term_bracket,
)

qtl = logging.getLogger(QT_LOGGER)
"""Our logger instance with the appropriate tag."""

_TERM_PAIRS: dict[Term, tuple[PacketLabel, PacketLabel]] = {Term.A: (PSI, PHI), Term.B: (VARPHI, CHI)}


@dataclass(frozen=True)
class ProbabilityContext:
    """Everything evaluated once per sweep point and shared by all probability series."""

    scenario: ScenarioSpec
    """The scenario."""
    barrier: BarrierSpec
    """The barrier."""
    scatters: dict
    """Scatter results keyed by :class:`PacketLabel`."""
    overlaps: OverlapSet
    """The twelve overlaps."""
    norms: NormSet
    """Normalisations for the scenario's own statistics."""
    fermion_eps: float = QT_FERMION_EPS
    """Fermion exclusion tolerance."""

    def weight(self, term: Term) -> float:
        """The mixture weight ``|a|^2`` or ``|b|^2`` of a term."""
        return abs(self.scenario.a if term is Term.A else self.scenario.b) ** 2

    def product_amplitude(self, term: Term) -> complex:
        """``T(x) T(y)`` for the two packets of a term."""
        x, y = _TERM_PAIRS[term]
        return self.scatters[x].amplitude * self.scatters[y].amplitude


@dataclass(frozen=True)
class ProbabilityReport:
    """An evaluated double-transmission probability."""

    value: float | None
    """The probability, ``None`` when undefined."""
    statistics: Statistics
    """The particle statistics."""
    form: StateForm
    """The state form."""
    diagnostics: dict = field(default_factory=dict)
    """Contributing ``|T|^2`` values, overlaps and normalisation brackets."""
    reason: str | None = None
    """Why the value is undefined, if it is."""

    @property
    def defined(self) -> bool:
        """Flag that indicates if the probability is defined."""
        return self.value is not None

    @property
    def kind(self) -> tuple[Statistics, StateForm]:
        """The (statistics, form) pair the report is for."""
        return self.statistics, self.form

    @property
    def name(self) -> str:
        """The series name of the report."""
        return series_name(self.statistics, self.form)


def build_context(scenario: ScenarioSpec, barrier: BarrierSpec, fermion_eps: float = QT_FERMION_EPS):
    """
    Scatter the four packets, compute their overlaps and normalisations.

    Args:
        scenario (ScenarioSpec): The scenario.
        barrier (BarrierSpec): The barrier.
        fermion_eps (float): Fermion exclusion tolerance.

    Returns:
        (ProbabilityContext): The context shared by all probabilities at this point.
    """
    cache: dict[float, ScatterResult] = {}
    scatters = {}
    for packet in scenario.packets:
        if packet.p_central not in cache:
            cache[packet.p_central] = scatter(packet.p_central, barrier)
        scatters[packet.label] = cache[packet.p_central]
    overlaps = overlap_matrix(scenario.packets, barrier)
    return ProbabilityContext(
        scenario=scenario,
        barrier=barrier,
        scatters=scatters,
        overlaps=overlaps,
        norms=norm_set(scenario, overlaps, scatters, fermion_eps),
        fermion_eps=fermion_eps,
    )


def _identical(ctx: ProbabilityContext, statistics: Statistics) -> ScenarioSpec:
    s = ctx.scenario
    return ScenarioSpec(a=s.a, b=s.b, packets=s.packets, statistics=statistics, form=s.form)


def _term_form(term: Term) -> StateForm:
    return StateForm.PRODUCT_A if term is Term.A else StateForm.PRODUCT_B


def p_dis_product(term: Term, ctx: ProbabilityContext) -> ProbabilityReport:
    """
    ``|T(p) T(q)|^2`` for term ``a`` or ``|T(pbar) T(qbar)|^2`` for term ``b``.

    Args:
        term (Term): The term.
        ctx (ProbabilityContext): The sweep-point context.

    Returns:
        (ProbabilityReport): The report.
    """
    x, y = _TERM_PAIRS[term]
    value = abs(ctx.product_amplitude(term)) ** 2
    diagnostics = {f"T2_{x.value}": ctx.scatters[x].magnitude2, f"T2_{y.value}": ctx.scatters[y].magnitude2}
    return ProbabilityReport(value, Statistics.DISTINGUISHABLE, _term_form(term), diagnostics)


def _mixture(a_report: ProbabilityReport, b_report: ProbabilityReport, ctx: ProbabilityContext, statistics):
    """Weight two product reports; an undefined term with a non-zero weight makes the mixture undefined."""
    w_a, w_b = ctx.weight(Term.A), ctx.weight(Term.B)
    diagnostics = {"P_a": a_report.value, "P_b": b_report.value, "w_a": w_a, "w_b": w_b}
    for weight, report in ((w_a, a_report), (w_b, b_report)):
        if weight > 0 and not report.defined:
            return ProbabilityReport(None, statistics, StateForm.MIXTURE, diagnostics, report.reason)
    value = (w_a * a_report.value if w_a > 0 else 0.0) + (w_b * b_report.value if w_b > 0 else 0.0)
    return ProbabilityReport(value, statistics, StateForm.MIXTURE, diagnostics)


def p_dis_mixture(ctx: ProbabilityContext) -> ProbabilityReport:
    """
    ``|a|^2 P_dis^a + |b|^2 P_dis^b``.

    Args:
        ctx (ProbabilityContext): The sweep-point context.

    Returns:
        (ProbabilityReport): The report.
    """
    return _mixture(p_dis_product(Term.A, ctx), p_dis_product(Term.B, ctx), ctx, Statistics.DISTINGUISHABLE)


def _ratio(numerator: float | None, denominator: float, statistics, diagnostics) -> ProbabilityReport:
    if numerator is None:
        return ProbabilityReport(
            None, statistics, StateForm.SUPERPOSITION, diagnostics, "undefined transmitted overlap"
        )
    if denominator <= 0:
        return ProbabilityReport(
            None, statistics, StateForm.SUPERPOSITION, diagnostics, "non-positive normalisation radicand"
        )
    return ProbabilityReport(numerator / denominator, statistics, StateForm.SUPERPOSITION, diagnostics)


def p_dis_superposition(ctx: ProbabilityContext) -> ProbabilityReport:
    """
    ``N^2 / N_T^2`` for the distinguishable superposition, evaluated as the ratio of the two brackets.

    Args:
        ctx (ProbabilityContext): The sweep-point context.

    Returns:
        (ProbabilityReport): The report.
    """
    s = ctx.scenario
    n_inv2 = bracket_distinguishable(s, ctx.overlaps)
    n_t_inv2 = norm_T_distinguishable(s, ctx.overlaps, ctx.scatters)
    diagnostics = {"N_inv2": n_inv2, "N_T_inv2": n_t_inv2}
    return _ratio(n_t_inv2, n_inv2, Statistics.DISTINGUISHABLE, diagnostics)


def p_ide_product(term: Term, statistics: Statistics, ctx: ProbabilityContext) -> ProbabilityReport:
    """
    ``(1 +- |<x_T|y_T>|^2) / (1 +- |<x|y>|^2) |T(x) T(y)|^2`` for one (anti)symmetrised term.

    A fermion term whose packets coincide (``1 - |<x|y>|^2 < eps``) is undefined: the ``0/0`` of the
    exclusion principle is reported, not resolved.

    Args:
        term (Term): The term.
        statistics (Statistics): Boson or fermion.
        ctx (ProbabilityContext): The sweep-point context.

    Returns:
        (ProbabilityReport): The report.
    """
    x, y = _TERM_PAIRS[term]
    form = _term_form(term)
    sign = statistics.sign
    initial = ctx.overlaps.get(x, y)
    transmitted = ctx.overlaps.get_transmitted(x, y)
    product = abs(ctx.product_amplitude(term)) ** 2
    diagnostics = {"overlap": initial, "overlap_T": transmitted, "T2T2": product}

    denominator = term_bracket(initial, sign, ctx.fermion_eps)
    if denominator is None:
        qtl.debug("Excluded fermion term %s at q=%s", term.value, ctx.scenario.packet(PHI).p_central)
        return ProbabilityReport(None, statistics, form, diagnostics, "Pauli exclusion (0/0)")
    if transmitted is None:
        return ProbabilityReport(None, statistics, form, diagnostics, "undefined transmitted overlap")
    numerator = 2 + 2 * sign * abs(transmitted) ** 2
    return ProbabilityReport(numerator / denominator * product, statistics, form, diagnostics)


def p_ide_mixture(statistics: Statistics, ctx: ProbabilityContext) -> ProbabilityReport:
    """
    The weighted sum of the two identical-particle product probabilities.

    Args:
        statistics (Statistics): Boson or fermion.
        ctx (ProbabilityContext): The sweep-point context.

    Returns:
        (ProbabilityReport): The report, undefined when a term with a non-zero weight is.
    """
    return _mixture(
        p_ide_product(Term.A, statistics, ctx), p_ide_product(Term.B, statistics, ctx), ctx, statistics
    )


def p_ide_superposition(statistics: Statistics, ctx: ProbabilityContext) -> ProbabilityReport:
    """
    The identical-particle superposition probability, the ratio of the transmitted-projection bracket to the
    input-state bracket. A Pauli-excluded term enters with zero weight and the value stays defined.

    Args:
        statistics (Statistics): Boson or fermion.
        ctx (ProbabilityContext): The sweep-point context.

    Returns:
        (ProbabilityReport): The report.
    """
    s = _identical(ctx, statistics)
    cal_n_inv2 = bracket_identical(s, ctx.overlaps, ctx.fermion_eps)
    cal_n_t_inv2 = norm_T_identical(s, ctx.overlaps, ctx.scatters, ctx.fermion_eps)
    diagnostics = {"calN_inv2": cal_n_inv2, "calN_T_inv2": cal_n_t_inv2}
    return _ratio(cal_n_t_inv2, cal_n_inv2, statistics, diagnostics)


def evaluate(ctx: ProbabilityContext, statistics: Statistics, form: StateForm) -> ProbabilityReport:
    """
    Dispatch to the probability of the given statistics and form.

    Args:
        ctx (ProbabilityContext): The sweep-point context.
        statistics (Statistics): The particle statistics.
        form (StateForm): The state form.

    Returns:
        (ProbabilityReport): The report.
    """
    if statistics is Statistics.DISTINGUISHABLE:
        match form:
            case StateForm.PRODUCT_A:
                return p_dis_product(Term.A, ctx)
            case StateForm.PRODUCT_B:
                return p_dis_product(Term.B, ctx)
            case StateForm.MIXTURE:
                return p_dis_mixture(ctx)
            case StateForm.SUPERPOSITION:
                return p_dis_superposition(ctx)
    match form:
        case StateForm.PRODUCT_A:
            return p_ide_product(Term.A, statistics, ctx)
        case StateForm.PRODUCT_B:
            return p_ide_product(Term.B, statistics, ctx)
        case StateForm.MIXTURE:
            return p_ide_mixture(statistics, ctx)
    return p_ide_superposition(statistics, ctx)


def all_probabilities(ctx: ProbabilityContext) -> dict[str, ProbabilityReport]:
    """
    Every series at this sweep point, keyed by series name in a stable order.

    Args:
        ctx (ProbabilityContext): The sweep-point context.

    Returns:
        (dict[str, ProbabilityReport]): The reports.
    """
    reports = {}
    for statistics in Statistics:
        for form in StateForm:
            report = evaluate(ctx, statistics, form)
            reports[report.name] = report
    return reports
