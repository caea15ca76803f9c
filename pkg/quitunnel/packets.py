"""Gaussian momentum-space packets and their pairwise overlaps, before and after the barrier."""

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .barrier import BarrierSpec, effective_momentum
from .consts import QT_LOGGER
from .errors import PacketSpecError, PacketWidthMismatchError
from .state_ops import PacketLabel

qtl = logging.getLogger(QT_LOGGER)
"""Our logger instance with the appropriate tag."""


@dataclass(frozen=True)
class PacketSpec:
    """
    A one-particle packet with the Gaussian mode distribution
    ``f(p*) = (2/pi)^(1/4) P^(-1/2) exp(-(p* - p)^2 / P^2)``, normalised to unity.
    """

    p_central: float
    """The central momentum ``p``."""
    width: float
    """The width parameter ``P``."""
    label: PacketLabel
    """Which of the four packets this is."""

    def __post_init__(self):
        if not self.p_central > 0:
            raise PacketSpecError(f"Central momentum must be positive, got: {self.p_central}")
        if not self.width > 0:
            raise PacketSpecError(f"Width must be positive, got: {self.width}")


def mode_amplitude(packet: PacketSpec, p_star: np.ndarray) -> np.ndarray:
    """
    The mode distribution ``f(p*)`` of a packet.

    Args:
        packet (PacketSpec): The packet.
        p_star (np.ndarray): The momentum variable.

    Returns:
        (np.ndarray): The (real) amplitudes.
    """
    p_star = np.asarray(p_star, dtype=float)
    norm = (2 / math.pi) ** 0.25 / math.sqrt(packet.width)
    return norm * np.exp(-((p_star - packet.p_central) ** 2) / packet.width**2)


def _gaussian_overlap(p_a: float, p_b: float, width: float) -> float:
    return math.exp(-((p_a - p_b) ** 2) / (2 * width**2))


def _check_widths(a: PacketSpec, b: PacketSpec):
    if a.width != b.width:
        raise PacketWidthMismatchError(
            f"Packets {a.label.value} and {b.label.value} have different widths: {a.width} != {b.width}"
        )


def initial_overlap(a: PacketSpec, b: PacketSpec) -> float:
    """
    The scalar product ``exp(-(p_a - p_b)^2 / 2P^2)`` of two co-located packets.

    Args:
        a (PacketSpec): The first packet.
        b (PacketSpec): The second packet.

    Returns:
        (float): The overlap in ``(0, 1]``.
    """
    _check_widths(a, b)
    return _gaussian_overlap(a.p_central, b.p_central, a.width)


def transmitted_overlap(a: PacketSpec, b: PacketSpec, bar: BarrierSpec) -> float | None:
    """
    The scalar product of the transmitted packets, modelled as free packets of the same shape centred at the
    effective momenta.

    A barrier of zero width is the identity and returns the initial overlap.

    Args:
        a (PacketSpec): The first packet.
        b (PacketSpec): The second packet.
        bar (BarrierSpec): The barrier.

    Returns:
        (float | None): The overlap, ``None`` if either effective momentum is undefined.
    """
    _check_widths(a, b)
    if bar.d == 0:
        return initial_overlap(a, b)
    pe_a = effective_momentum(a.p_central, bar)
    pe_b = pe_a if b.p_central == a.p_central else effective_momentum(b.p_central, bar)
    if pe_a is None or pe_b is None:
        return None
    return _gaussian_overlap(pe_a, pe_b, a.width)


def _key(x: PacketLabel, y: PacketLabel) -> frozenset:
    return frozenset((x, y))


@dataclass(frozen=True)
class OverlapSet:
    """The six pairwise overlaps of the four packets, before and after the barrier."""

    initial: dict = field(default_factory=dict)
    """Initial overlaps keyed by the unordered label pair."""
    transmitted: dict = field(default_factory=dict)
    """Transmitted overlaps keyed by the unordered label pair; ``None`` marks undefined entries."""

    @classmethod
    def from_pairs(cls, initial: dict, transmitted: dict) -> "OverlapSet":
        """
        Build the set from dictionaries keyed by ``(label, label)`` tuples, which is handy in tests.

        Args:
            initial (dict): Initial overlaps keyed by label tuples.
            transmitted (dict): Transmitted overlaps keyed by label tuples.

        Returns:
            (OverlapSet): The overlap set.
        """
        return cls(
            initial={_key(*pair): value for pair, value in initial.items()},
            transmitted={_key(*pair): value for pair, value in transmitted.items()},
        )

    def get(self, x: PacketLabel, y: PacketLabel) -> float:
        """The initial overlap ``<x|y>``; the diagonal is 1."""
        if x is y:
            return 1.0
        return self.initial[_key(x, y)]

    def get_transmitted(self, x: PacketLabel, y: PacketLabel) -> float | None:
        """The transmitted overlap ``<x_T|y_T>``; the diagonal is 1."""
        if x is y:
            return 1.0
        return self.transmitted[_key(x, y)]

    @property
    def transmitted_defined(self) -> bool:
        """Flag that indicates if every transmitted overlap is defined."""
        return all(value is not None for value in self.transmitted.values())

    def max_overlap(self) -> float:
        """The largest of the twelve overlaps, undefined entries ignored."""
        values = [v for v in (*self.initial.values(), *self.transmitted.values()) if v is not None]
        return max(values, default=0.0)


def overlap_matrix(packets: tuple[PacketSpec, ...], bar: BarrierSpec) -> OverlapSet:
    """
    Compute all twelve overlaps of the four scenario packets once.

    Effective momenta are evaluated once per distinct central momentum.

    Args:
        packets (tuple[PacketSpec, ...]): The four packets.
        bar (BarrierSpec): The barrier.

    Returns:
        (OverlapSet): The initial and transmitted overlaps.
    """
    effective: dict[float, float | None] = {}
    if bar.d > 0:
        for packet in packets:
            if packet.p_central not in effective:
                effective[packet.p_central] = effective_momentum(packet.p_central, bar)

    initial: dict = {}
    transmitted: dict = {}
    for a, b in combinations(packets, 2):
        key = _key(a.label, b.label)
        initial[key] = initial_overlap(a, b)
        if bar.d == 0:
            transmitted[key] = initial[key]
            continue
        pe_a, pe_b = effective[a.p_central], effective[b.p_central]
        if pe_a is None or pe_b is None:
            qtl.warning("Transmitted overlap <%s|%s> undefined", a.label.value, b.label.value)
            transmitted[key] = None
        else:
            transmitted[key] = _gaussian_overlap(pe_a, pe_b, a.width)
    return OverlapSet(initial=initial, transmitted=transmitted)
