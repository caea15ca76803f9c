"""
Input scenarios and the normalisation constants of the input states and of the double-transmission projections.

Term ``a`` pairs ``psi`` with ``phi`` and term ``b`` pairs ``varphi`` with ``chi``. For identical particles each
term is (anti)symmetrised with the exchange sign of :class:`Statistics`. Normalisations are handled through
their inverse squares (the "brackets"), which are what the probabilities need; the constants themselves are
derived from them.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Mapping

from .barrier import ScatterResult
from .consts import QT_DEFAULT_A, QT_FERMION_EPS, QT_IDENTITY_TOL, QT_LOGGER
from .errors import PacketWidthMismatchError, ScenarioSpecError
from .packets import OverlapSet, PacketSpec
from .state_ops import PacketLabel, StateForm, Statistics

qtl = logging.getLogger(QT_LOGGER)
"""Our logger instance with the appropriate tag."""

PSI, PHI, VARPHI, CHI = PacketLabel.PSI, PacketLabel.PHI, PacketLabel.VARPHI, PacketLabel.CHI


@dataclass(frozen=True)
class ScenarioSpec:
    """A two-particle input state: two terms, their coefficients, the statistics and the state form."""

    a: complex
    """Coefficient of term ``a``."""
    b: complex
    """Coefficient of term ``b``."""
    packets: tuple[PacketSpec, PacketSpec, PacketSpec, PacketSpec]
    """The packets ``psi``, ``phi``, ``varphi`` and ``chi``, in that order."""
    statistics: Statistics = Statistics.DISTINGUISHABLE
    """The particle statistics."""
    form: StateForm = StateForm.SUPERPOSITION
    """The state form."""

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1) > QT_IDENTITY_TOL:
            raise ScenarioSpecError(f"Coefficients must satisfy |a|^2 + |b|^2 = 1, got {norm!r}")
        labels = tuple(packet.label for packet in self.packets)
        if labels != (PSI, PHI, VARPHI, CHI):
            raise ScenarioSpecError(f"Packets must be labelled psi, phi, varphi, chi in order, got {labels}")
        if len({packet.width for packet in self.packets}) != 1:
            raise PacketWidthMismatchError("All four packets must share a single width parameter")

    @classmethod
    def from_momenta(
        cls,
        p: float,
        q: float,
        pbar: float,
        qbar: float,
        width: float,
        a: complex = QT_DEFAULT_A,
        b: complex | None = None,
        b_phase: float = 0.0,
        statistics: Statistics = Statistics.DISTINGUISHABLE,
        form: StateForm = StateForm.SUPERPOSITION,
    ) -> "ScenarioSpec":
        """
        Build a scenario from the four central momenta and the shared width.

        When ``b`` is not given it is ``(1 - |a|^2)^(1/2) exp(i b_phase)``.

        Args:
            p (float): Central momentum of ``psi``.
            q (float): Central momentum of ``phi``.
            pbar (float): Central momentum of ``varphi``.
            qbar (float): Central momentum of ``chi``.
            width (float): The shared width parameter.
            a (complex): Coefficient of term ``a``.
            b (complex | None): Coefficient of term ``b``.
            b_phase (float): Relative phase of ``b`` when it is derived from ``a``.
            statistics (Statistics): The particle statistics.
            form (StateForm): The state form.

        Returns:
            (ScenarioSpec): The scenario.
        """
        if b is None:
            if abs(a) > 1 + QT_IDENTITY_TOL:
                raise ScenarioSpecError(f"|a| must not exceed 1, got {abs(a)}")
            b = math.sqrt(max(0.0, 1 - abs(a) ** 2)) * cmath.exp(1j * b_phase)
        packets = (
            PacketSpec(p, width, PSI),
            PacketSpec(q, width, PHI),
            PacketSpec(pbar, width, VARPHI),
            PacketSpec(qbar, width, CHI),
        )
        return cls(a=complex(a), b=complex(b), packets=packets, statistics=statistics, form=form)

    def packet(self, label: PacketLabel) -> PacketSpec:
        """The packet carrying ``label``."""
        return self.packets[(PSI, PHI, VARPHI, CHI).index(label)]

    def relabelled(self) -> "ScenarioSpec":
        """The same physical state with ``psi <-> phi`` and ``varphi <-> chi`` swapped."""
        psi, phi, varphi, chi = (packet.p_central for packet in self.packets)
        return ScenarioSpec.from_momenta(
            phi, psi, chi, varphi, self.packets[0].width, self.a, self.b, 0.0, self.statistics, self.form
        )


@dataclass(frozen=True)
class NormSet:
    """Normalisation constants of one scenario at one sweep point; ``None`` marks undefined entries."""

    n: float | None
    """Normalisation of the distinguishable superposition."""
    n_a: float | None
    """Normalisation of the identical-particle term ``a``."""
    n_b: float | None
    """Normalisation of the identical-particle term ``b``."""
    cal_n: float | None
    """Normalisation of the identical-particle superposition."""
    n_t_inv2: float | None
    """Inverse square normalisation of the distinguishable double-transmission projection."""
    cal_n_t_inv2: float | None
    """Inverse square normalisation of the identical-particle double-transmission projection."""


def _from_bracket(bracket: float | None, what: str) -> float | None:
    """Turn an inverse square normalisation into the normalisation constant."""
    if bracket is None:
        return None
    if bracket <= 0:
        qtl.warning("Normalisation %s undefined, non-positive radicand %s", what, bracket)
        return None
    return bracket**-0.5


def _cross(s: ScenarioSpec) -> complex:
    return s.a.conjugate() * s.b


def _require_identical(s: ScenarioSpec):
    if not s.statistics.identical:
        raise ScenarioSpecError("Identical-particle normalisations need boson or fermion statistics")


def term_bracket(overlap: float, sign: int, eps: float = QT_FERMION_EPS) -> float | None:
    """
    The inverse square normalisation ``2 +- 2|<x|y>|^2`` of a single (anti)symmetrised term.

    Args:
        overlap (float): The overlap of the two packets of the term.
        sign (int): The exchange sign.
        eps (float): Fermion exclusion tolerance.

    Returns:
        (float | None): The bracket, ``None`` for an excluded fermion term.
    """
    if sign < 0 and 1 - abs(overlap) ** 2 < eps:
        return None
    return 2 + 2 * sign * abs(overlap) ** 2


def bracket_distinguishable(s: ScenarioSpec, ov: OverlapSet) -> float:
    """The inverse square ``N^-2 = 1 + 2 Re(a* b <psi|varphi><phi|chi>)``."""
    return 1 + 2 * (_cross(s) * ov.get(PSI, VARPHI) * ov.get(PHI, CHI)).real


def bracket_identical(s: ScenarioSpec, ov: OverlapSet, eps: float = QT_FERMION_EPS) -> float:
    """
    The inverse square of the identical-particle superposition normalisation.

    An excluded fermion term contributes a zero weight here; the superposition stays defined.
    """
    _require_identical(s)
    sign = s.statistics.sign
    term_a = term_bracket(ov.get(PSI, PHI), sign, eps) or 0.0
    term_b = term_bracket(ov.get(VARPHI, CHI), sign, eps) or 0.0
    exchange = ov.get(PSI, VARPHI) * ov.get(PHI, CHI) + sign * ov.get(PSI, CHI) * ov.get(PHI, VARPHI)
    return abs(s.a) ** 2 * term_a + abs(s.b) ** 2 * term_b + 4 * (_cross(s) * exchange).real


def norm_distinguishable(s: ScenarioSpec, ov: OverlapSet) -> float | None:
    """
    The normalisation ``N`` of the distinguishable superposition.

    Args:
        s (ScenarioSpec): The scenario.
        ov (OverlapSet): The overlaps.

    Returns:
        (float | None): ``N``, ``None`` when the radicand is not positive.
    """
    return _from_bracket(bracket_distinguishable(s, ov), "N")


def norms_identical(
    s: ScenarioSpec, ov: OverlapSet, eps: float = QT_FERMION_EPS
) -> tuple[float | None, float | None, float | None]:
    """
    The normalisations of the two (anti)symmetrised terms and of their superposition.

    Args:
        s (ScenarioSpec): The scenario, with boson or fermion statistics.
        ov (OverlapSet): The overlaps.
        eps (float): Fermion exclusion tolerance.

    Returns:
        (tuple[float | None, float | None, float | None]): ``N_a``, ``N_b`` and the superposition
        normalisation; a coincident fermion term leaves its own constant undefined only.
    """
    _require_identical(s)
    sign = s.statistics.sign
    n_a = _from_bracket(term_bracket(ov.get(PSI, PHI), sign, eps), "N_a")
    n_b = _from_bracket(term_bracket(ov.get(VARPHI, CHI), sign, eps), "N_b")
    return n_a, n_b, _from_bracket(bracket_identical(s, ov, eps), "calN")


def _amplitude(scatters: Mapping[PacketLabel, ScatterResult], x: PacketLabel, y: PacketLabel) -> complex:
    return scatters[x].amplitude * scatters[y].amplitude


def norm_T_distinguishable(  # pylint: disable=invalid-name
    s: ScenarioSpec, ov_t: OverlapSet, scatters: Mapping[PacketLabel, ScatterResult]
) -> float | None:
    """
    The inverse square ``N_T^-2`` of the distinguishable double-transmission projection, interference term
    included with the complex amplitudes.

    Args:
        s (ScenarioSpec): The scenario.
        ov_t (OverlapSet): The overlaps; the transmitted ones are used.
        scatters (Mapping[PacketLabel, ScatterResult]): Scatter results per packet.

    Returns:
        (float | None): ``N_T^-2``, ``None`` if a transmitted overlap it needs is undefined.
    """
    amp_a = s.a * _amplitude(scatters, PSI, PHI)
    amp_b = s.b * _amplitude(scatters, VARPHI, CHI)
    value = abs(amp_a) ** 2 + abs(amp_b) ** 2
    if s.a == 0 or s.b == 0:
        return value
    o1, o2 = ov_t.get_transmitted(PSI, VARPHI), ov_t.get_transmitted(PHI, CHI)
    if o1 is None or o2 is None:
        return None
    return value + 2 * (amp_a.conjugate() * amp_b * o1 * o2).real


def norm_T_identical(  # pylint: disable=invalid-name
    s: ScenarioSpec, ov_t: OverlapSet, scatters: Mapping[PacketLabel, ScatterResult], eps: float = QT_FERMION_EPS
) -> float | None:
    """
    The inverse square of the identical-particle double-transmission projection, with both exchange orderings
    in the interference term.

    Args:
        s (ScenarioSpec): The scenario, with boson or fermion statistics.
        ov_t (OverlapSet): The overlaps; the transmitted ones are used.
        scatters (Mapping[PacketLabel, ScatterResult]): Scatter results per packet.
        eps (float): Fermion exclusion tolerance.

    Returns:
        (float | None): The bracket, ``None`` if a transmitted overlap it needs is undefined.
    """
    _require_identical(s)
    sign = s.statistics.sign
    amp_a = s.a * _amplitude(scatters, PSI, PHI)
    amp_b = s.b * _amplitude(scatters, VARPHI, CHI)

    value = 0.0
    for amp, pair in ((amp_a, (PSI, PHI)), (amp_b, (VARPHI, CHI))):
        if amp == 0:
            continue
        overlap = ov_t.get_transmitted(*pair)
        if overlap is None:
            return None
        value += abs(amp) ** 2 * (term_bracket(overlap, sign, eps) or 0.0)

    if s.a == 0 or s.b == 0:
        return value
    needed = [
        ov_t.get_transmitted(PSI, VARPHI),
        ov_t.get_transmitted(PHI, CHI),
        ov_t.get_transmitted(PSI, CHI),
        ov_t.get_transmitted(PHI, VARPHI),
    ]
    if any(overlap is None for overlap in needed):
        return None
    o_pv, o_fc, o_pc, o_fv = needed
    exchange = o_pv * o_fc + sign * o_pc * o_fv
    return value + 4 * (amp_a.conjugate() * amp_b * exchange).real


def norm_set(
    s: ScenarioSpec, ov: OverlapSet, scatters: Mapping[PacketLabel, ScatterResult], eps: float = QT_FERMION_EPS
) -> NormSet:
    """
    Batch every normalisation of a scenario at one sweep point.

    Identical-particle entries are evaluated with the scenario's statistics when it is identical and with
    boson statistics otherwise, so a distinguishable context still reports them for diagnostics.

    Args:
        s (ScenarioSpec): The scenario.
        ov (OverlapSet): The overlaps.
        scatters (Mapping[PacketLabel, ScatterResult]): Scatter results per packet.
        eps (float): Fermion exclusion tolerance.

    Returns:
        (NormSet): The normalisations.
    """
    ident = s if s.statistics.identical else _with_statistics(s, Statistics.BOSON)
    n_a, n_b, cal_n = norms_identical(ident, ov, eps)
    return NormSet(
        n=norm_distinguishable(s, ov),
        n_a=n_a,
        n_b=n_b,
        cal_n=cal_n,
        n_t_inv2=norm_T_distinguishable(s, ov, scatters),
        cal_n_t_inv2=norm_T_identical(ident, ov, scatters, eps),
    )


def _with_statistics(s: ScenarioSpec, statistics: Statistics) -> ScenarioSpec:
    return ScenarioSpec(a=s.a, b=s.b, packets=s.packets, statistics=statistics, form=s.form)
