"""Module that includes helpers for unit conversion and undefined-value handling."""

import math

from .consts import QT_DEFAULT_HBAR, QT_DEFAULT_MASS, QT_DEFAULT_V0


def momentum_unit(m: float = QT_DEFAULT_MASS, v0: float = QT_DEFAULT_V0) -> float:
    """
    The momentum unit, m.u. = (2 m V0)^(1/2), expressed in base units.

    Args:
        m (float): The particle mass.
        v0 (float): The barrier height.

    Returns:
        (float): The size of one m.u. in base units.
    """
    return math.sqrt(2.0 * m * v0)


def length_unit(m: float = QT_DEFAULT_MASS, v0: float = QT_DEFAULT_V0, hbar: float = QT_DEFAULT_HBAR) -> float:
    """
    The length unit, l.u. = hbar / (m V0)^(1/2), expressed in base units.

    Args:
        m (float): The particle mass.
        v0 (float): The barrier height.
        hbar (float): The reduced Planck constant.

    Returns:
        (float): The size of one l.u. in base units.
    """
    return hbar / math.sqrt(m * v0)


def mu_to_base(value: float, m: float = QT_DEFAULT_MASS, v0: float = QT_DEFAULT_V0) -> float:
    """Convert a momentum in m.u. to base units."""
    return value * momentum_unit(m, v0)


def base_to_mu(value: float, m: float = QT_DEFAULT_MASS, v0: float = QT_DEFAULT_V0) -> float:
    """Convert a momentum in base units to m.u."""
    return value / momentum_unit(m, v0)


def lu_to_base(
    value: float, m: float = QT_DEFAULT_MASS, v0: float = QT_DEFAULT_V0, hbar: float = QT_DEFAULT_HBAR
) -> float:
    """Convert a length in l.u. to base units."""
    return value * length_unit(m, v0, hbar)


def base_to_lu(
    value: float, m: float = QT_DEFAULT_MASS, v0: float = QT_DEFAULT_V0, hbar: float = QT_DEFAULT_HBAR
) -> float:
    """Convert a length in base units to l.u."""
    return value / length_unit(m, v0, hbar)


def format_optional(value: float | None, digits: int) -> str:
    """
    Format a possibly undefined value for a CSV cell; undefined values become an empty cell.

    Args:
        value (float | None): The value to format.
        digits (int): Significant digits.

    Returns:
        (str): The formatted cell.
    """
    if value is None:
        return ""
    return f"{value:.{digits}g}"


def parse_optional(cell: str) -> float | None:
    """
    Inverse of :func:`format_optional`.

    Args:
        cell (str): The CSV cell.

    Returns:
        (float | None): The parsed value, ``None`` for an empty cell.
    """
    cell = cell.strip()
    return float(cell) if cell else None
