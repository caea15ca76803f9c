"""
Single-mode scattering through the rectangular barrier.

The barrier occupies ``0 <= x <= d`` with height ``V0``. For a plane wave of momentum ``p`` the transmitted
amplitude is::

    T = 2 k0 k1 exp(-i k0 d) / (2 k0 k1 cosh(k1 d) + i (k1^2 - k0^2) sinh(k1 d))

with ``k0 = p / hbar`` and ``k1 = (2 m (V0 - E))^(1/2) / hbar``. Dividing through by ``2 k0 k1`` gives::

    T = exp(-i k0 d) / G,    G = C + i A S,    A = (k1^2 - k0^2) / (2 k0)

where ``C = cosh(k1 d)`` and ``S = sinh(k1 d) / k1``. Both ``C`` and ``S`` are even in ``k1`` and hence
entire functions of ``u = k1^2``, which is real on both sides of the barrier top; evaluating them with a
complex ``k1`` (purely imaginary above the barrier) covers ``E < V0``, ``E = V0`` and ``E > V0`` with a single
code path. Near the top the power series in ``u d^2`` is used.

All quantities here are in base units.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .consts import QT_DEFAULT_D, QT_DEFAULT_HBAR, QT_DEFAULT_MASS, QT_DEFAULT_V0, QT_LOGGER, QT_SERIES_THRESHOLD
from .errors import BarrierSpecError, MomentumDomainError

qtl = logging.getLogger(QT_LOGGER)
"""Our logger instance with the appropriate tag."""


@dataclass(frozen=True)
class BarrierSpec:
    """The rectangular barrier and the units system it lives in."""

    v0: float = QT_DEFAULT_V0
    """The barrier height."""
    d: float = QT_DEFAULT_D
    """The barrier width."""
    m: float = QT_DEFAULT_MASS
    """The particle mass."""
    hbar: float = QT_DEFAULT_HBAR
    """The reduced Planck constant."""

    def __post_init__(self):
        if not self.v0 > 0:
            raise BarrierSpecError(f"Barrier height must be positive, got: {self.v0}")
        if not self.d >= 0:
            raise BarrierSpecError(f"Barrier width must be non-negative, got: {self.d}")
        if not self.m > 0:
            raise BarrierSpecError(f"Particle mass must be positive, got: {self.m}")
        if not self.hbar > 0:
            raise BarrierSpecError(f"hbar must be positive, got: {self.hbar}")

    @property
    def coupling(self) -> float:
        """The factor ``m / hbar^2`` relating energies to squared wavenumbers (``k^2 = 2 m E / hbar^2``)."""
        return self.m / self.hbar**2


@dataclass(frozen=True)
class ModeParams:
    """Wavenumbers and energy of a single plane-wave mode."""

    k0: float
    """The incident wavenumber."""
    k1: complex
    """The wavenumber inside the barrier; real below the top and purely imaginary above it."""
    energy: float
    """The kinetic energy of the mode."""


@dataclass(frozen=True)
class ScatterResult:
    """Everything the model needs from the barrier for a packet centred at ``p``."""

    p: float
    """The central momentum the result was evaluated at."""
    amplitude: complex
    """The complex transmission amplitude ``T``."""
    magnitude2: float
    """The transmission probability ``|T|^2``."""
    phase: float
    """The transmission phase, unwrapped against the caller's reference when one was given."""
    tau: float | None
    """The Wigner-Smith delay; ``None`` when undefined."""
    delta_t: float | None
    """The barrier crossing time ``d m / p + tau``; ``None`` when undefined."""
    p_eff: float | None
    """The effective momentum ``m d / delta_t``; ``None`` when undefined."""
    reason: str | None = None
    """Why ``p_eff`` is undefined, if it is."""

    @property
    def defined(self) -> bool:
        """Flag that indicates if the effective momentum is defined."""
        return self.p_eff is not None


def _check_momentum(p) -> np.ndarray:
    """Validate that every supplied momentum is strictly positive and return them as an array."""
    arr = np.asarray(p, dtype=float)
    if not np.all(arr > 0):
        raise MomentumDomainError(f"Momentum must be strictly positive, got: {p}")
    return arr


def _barrier_functions(u: np.ndarray, d: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Evaluate ``C = cosh(k1 d)``, ``S = sinh(k1 d) / k1`` and ``dS/du`` for ``u = k1^2``.

    Args:
        u (np.ndarray): Squared inner wavenumbers (complex, may be negative).
        d (float): The barrier width.

    Returns:
        (tuple[np.ndarray, np.ndarray, np.ndarray]): ``C``, ``S`` and ``dS/du``.
    """
    u = np.asarray(u, dtype=complex)
    k1 = np.sqrt(u)
    x = u * d**2
    small = np.abs(k1 * d) < QT_SERIES_THRESHOLD

    c_series = 1 + x / 2 + x**2 / 24 + x**3 / 720
    s_series = d * (1 + x / 6 + x**2 / 120 + x**3 / 5040)
    ds_series = d**3 * (1 / 6 + x / 60 + x**2 / 1680 + x**3 / 90720)

    with np.errstate(divide="ignore", invalid="ignore"):
        cosh = np.cosh(k1 * d)
        sinh_over_k1 = np.sinh(k1 * d) / k1
        ds_closed = (d * cosh - sinh_over_k1) / (2 * u)

    return (
        np.where(small, c_series, cosh),
        np.where(small, s_series, sinh_over_k1),
        np.where(small, ds_series, ds_closed),
    )


def _amplitude_terms(p: np.ndarray, b: BarrierSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    The shared intermediate terms of the amplitude and its energy derivative.

    Args:
        p (np.ndarray): Strictly positive momenta.
        b (BarrierSpec): The barrier.

    Returns:
        (tuple[np.ndarray, np.ndarray, np.ndarray]): ``T``, ``d ln T / dE`` and ``k0``.
    """
    c = b.coupling
    k0 = p / b.hbar
    energy = p**2 / (2 * b.m)
    u = 2 * c * (b.v0 - energy) + 0j

    cosh, sinh_over_k1, ds_du = _barrier_functions(u, b.d)

    a_term = (u - k0**2) / (2 * k0)
    g = cosh + 1j * a_term * sinh_over_k1

    # energy derivatives: du/dE = -2c, dk0/dE = c / k0
    da_de = -2 * c / k0 - a_term * c / k0**2
    dg_de = (b.d * sinh_over_k1 / 2) * (-2 * c) + 1j * (da_de * sinh_over_k1 + a_term * ds_du * (-2 * c))

    amplitude = np.exp(-1j * k0 * b.d) / g
    dlog_de = -1j * b.d * c / k0 - dg_de / g
    return amplitude, dlog_de, k0


def mode_params(p: float, b: BarrierSpec) -> ModeParams:
    """
    Wavenumbers and energy of the plane-wave mode with momentum ``p``.

    Args:
        p (float): The momentum, must be strictly positive.
        b (BarrierSpec): The barrier.

    Returns:
        (ModeParams): The mode parameters; ``k1`` is purely imaginary above the barrier top.
    """
    _check_momentum(p)
    energy = p**2 / (2 * b.m)
    k1 = complex(np.sqrt(complex(2 * b.m * (b.v0 - energy)))) / b.hbar
    return ModeParams(k0=p / b.hbar, k1=k1, energy=energy)


def transmission(p: float, b: BarrierSpec) -> complex:
    """
    The complex transmission amplitude of a single mode.

    Args:
        p (float): The momentum, must be strictly positive.
        b (BarrierSpec): The barrier.

    Returns:
        (complex): The amplitude ``T``, with ``|T|^2 <= 1``.
    """
    amplitude, _, _ = _amplitude_terms(_check_momentum(p), b)
    return complex(amplitude)


def transmission_array(p_star: np.ndarray, b: BarrierSpec) -> np.ndarray:
    """
    Vectorised transmission amplitude over a momentum grid.

    Modes with ``p* <= 0`` travel away from the barrier and are given a zero amplitude.

    Args:
        p_star (np.ndarray): The momentum grid.
        b (BarrierSpec): The barrier.

    Returns:
        (np.ndarray): Complex amplitudes, same shape as ``p_star``.
    """
    p_star = np.asarray(p_star, dtype=float)
    out = np.zeros(p_star.shape, dtype=complex)
    moving = p_star > 0
    if np.any(moving):
        amplitude, _, _ = _amplitude_terms(p_star[moving], b)
        out[moving] = amplitude
    return out


def transmission_derivative(p: float, b: BarrierSpec) -> complex:
    """
    The energy derivative ``dT/dE`` obtained by term-wise analytic differentiation.

    Args:
        p (float): The momentum, must be strictly positive.
        b (BarrierSpec): The barrier.

    Returns:
        (complex): ``dT/dE`` at the energy of ``p``.
    """
    amplitude, dlog_de, _ = _amplitude_terms(_check_momentum(p), b)
    return complex(amplitude * dlog_de)


def modulus_closed_form(p: float, b: BarrierSpec) -> float:
    """
    ``|T|^2 = 4 k0^2 k1^2 / (4 k0^2 k1^2 + (k0^2 + k1^2)^2 sinh^2(k1 d))``, written via ``S = sinh(k1 d) / k1``
    so it stays finite at the barrier top.

    Args:
        p (float): The momentum, must be strictly positive.
        b (BarrierSpec): The barrier.

    Returns:
        (float): The transmission probability.
    """
    _check_momentum(p)
    k0_sq = (p / b.hbar) ** 2
    u = 2 * b.coupling * (b.v0 - p**2 / (2 * b.m))
    _, sinh_over_k1, _ = _barrier_functions(np.asarray(u), b.d)
    value = 4 * k0_sq / (4 * k0_sq + (k0_sq + u) ** 2 * sinh_over_k1**2)
    return float(np.real(value))


def phase_unwrapped(p: float, b: BarrierSpec, reference: tuple[float, float] | None = None) -> float:
    """
    The transmission phase as the two-argument arctangent of ``T``.

    With a ``(p_ref, phase_ref)`` reference the result is shifted by a multiple of ``2 pi`` to lie within ``pi`` of
    ``phase_ref``, which keeps a monotone sequence of evaluations continuous.

    Args:
        p (float): The momentum, must be strictly positive.
        b (BarrierSpec): The barrier.
        reference (tuple[float, float] | None): The previous evaluation point and its phase.

    Returns:
        (float): The phase in radians.
    """
    amplitude = transmission(p, b)
    principal = math.atan2(amplitude.imag, amplitude.real)
    if reference is None:
        return principal
    _, ref_phase = reference
    return principal + 2 * math.pi * round((ref_phase - principal) / (2 * math.pi))


def phase_arctan(p: float, b: BarrierSpec) -> float:
    """
    The printed single-argument arctangent form of the phase, valid below the barrier top only.

    It agrees with :func:`phase_unwrapped` modulo ``pi``.

    Args:
        p (float): The momentum; its energy must lie below ``V0``.
        b (BarrierSpec): The barrier.

    Returns:
        (float): The phase in ``(-pi/2, pi/2)``.
    """
    mode = mode_params(p, b)
    if mode.energy >= b.v0:
        raise MomentumDomainError(f"The arctangent phase form needs E < V0, got E={mode.energy}")
    k0, k1, d = mode.k0, mode.k1.real, b.d
    diff = k1**2 - k0**2
    num = -diff * math.cos(k0 * d) * math.sinh(k1 * d) - 2 * k0 * k1 * math.sin(k0 * d) * math.cosh(k1 * d)
    den = 2 * k0 * k1 * math.cos(k0 * d) * math.cosh(k1 * d) - diff * math.sin(k0 * d) * math.sinh(k1 * d)
    if den == 0:
        return math.copysign(math.pi / 2, num)
    return math.atan(num / den)


def delay_time(p: float, b: BarrierSpec) -> float | None:
    """
    The Wigner-Smith delay ``tau = hbar dOmega/dE`` computed as ``hbar Im(T'(E) / T(E))``.

    Args:
        p (float): The momentum, must be strictly positive.
        b (BarrierSpec): The barrier.

    Returns:
        (float | None): The delay, ``None`` if it cannot be evaluated.
    """
    _, dlog_de, _ = _amplitude_terms(_check_momentum(p), b)
    tau = b.hbar * float(np.imag(dlog_de))
    if not math.isfinite(tau):
        qtl.warning("Delay time is undefined at p=%s", p)
        return None
    return tau


def _crossing(p: float, b: BarrierSpec, tau: float | None) -> tuple[float | None, float | None, str | None]:
    """Return the crossing time, the effective momentum and the reason they are undefined, if they are."""
    if b.d == 0:
        return None, None, "zero barrier width"
    if tau is None:
        return None, None, "undefined delay time"
    delta_t = b.d * b.m / p + tau
    if delta_t <= 0:
        return delta_t, None, f"non-positive crossing time {delta_t:.6g}"
    return delta_t, b.m * b.d / delta_t, None


def effective_momentum(p: float, b: BarrierSpec) -> float | None:
    """
    The momentum ``p_e = m d / delta_t`` of a free packet crossing the barrier width in the same time
    ``delta_t = d m / p + tau`` as the real particle.

    Args:
        p (float): The momentum, must be strictly positive.
        b (BarrierSpec): The barrier.

    Returns:
        (float | None): The effective momentum, ``None`` if ``d = 0`` or ``delta_t <= 0``.
    """
    _, p_eff, reason = _crossing(p, b, delay_time(p, b))
    if reason is not None:
        qtl.debug("Effective momentum undefined at p=%s: %s", p, reason)
    return p_eff


def scatter(p: float, b: BarrierSpec, reference: tuple[float, float] | None = None) -> ScatterResult:
    """
    Bundle the amplitude, its polar form, the delay and the effective momentum at ``p``.

    Args:
        p (float): The momentum, must be strictly positive.
        b (BarrierSpec): The barrier.
        reference (tuple[float, float] | None): Optional phase reference, see :func:`phase_unwrapped`.

    Returns:
        (ScatterResult): The bundled result; undefined parts are ``None`` and never abort the caller.
    """
    amplitude = transmission(p, b)
    tau = delay_time(p, b)
    delta_t, p_eff, reason = _crossing(p, b, tau)
    if reason is not None and b.d > 0:
        qtl.warning("Effective momentum undefined at p=%s: %s", p, reason)
    return ScatterResult(
        p=p,
        amplitude=amplitude,
        magnitude2=abs(amplitude) ** 2,
        phase=phase_unwrapped(p, b, reference),
        tau=tau,
        delta_t=delta_t,
        p_eff=p_eff,
        reason=reason,
    )
