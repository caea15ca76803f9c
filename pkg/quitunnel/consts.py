"""Module that contains the constants."""

import logging
import math

QT_LOGGER = "QT_LOGGER"
"""The logger name."""
QT_LOG_FORMAT = logging.Formatter("%(name)s - %(levelname)s - %(filename)s:%(funcName)s:%(lineno)d - %(message)s")
"""The logging format."""
QT_LOG_LEVEL = logging.INFO
"""The logging reporting level."""
QT_LOG_ENABLED: str = "QT_LOG_ENABLED"
"""Environment variable name that dictates if logging is enabled."""

# units system (base units are m = hbar = V0 = 1)

QT_DEFAULT_MASS: float = 1.0
"""Default particle mass."""
QT_DEFAULT_HBAR: float = 1.0
"""Default reduced Planck constant."""
QT_DEFAULT_V0: float = 1.0
"""Default barrier height."""

# sweep defaults, momenta in m.u. and lengths in l.u.

QT_DEFAULT_P: float = 0.95
"""Central momentum of the first packet of term ``a``."""
QT_DEFAULT_PBAR: float = 1.05
"""Central momentum of the first packet of term ``b``."""
QT_DEFAULT_QBAR: float = 1.00
"""Central momentum of the second packet of term ``b``."""
QT_DEFAULT_WIDTH: float = 0.05
"""Shared width parameter ``P`` of the Gaussian mode distribution."""
QT_DEFAULT_D: float = 0.7
"""Barrier width."""
QT_DEFAULT_A: float = 1 / math.sqrt(2)
"""Superposition coefficient of term ``a``."""
QT_DEFAULT_Q_MIN: float = 0.01
"""Lower end of the ``q`` sweep."""
QT_DEFAULT_Q_MAX: float = 1.40
"""Upper end of the ``q`` sweep, kept below the open end at sqrt(2) m.u."""
QT_DEFAULT_STEPS: int = 1000
"""Number of grid intervals of the ``q`` sweep."""
QT_Q_UPPER_BOUND: float = math.sqrt(2)
"""Open upper bound of ``q`` in m.u. (the barrier top for the default units)."""

# tolerances

QT_IDENTITY_TOL: float = 1e-12
"""Tolerance for algebraic identities."""
QT_DERIVATIVE_RTOL: float = 1e-5
"""Relative tolerance of derivative checks."""
QT_FERMION_EPS: float = 1e-12
"""A fermion term is excluded when ``1 - |overlap|^2`` drops below this value."""
QT_ORACLE_TOL: float = 0.05
"""Relative tolerance of closed-form vs momentum-grid probabilities."""
QT_ODE_TOL: float = 1e-6
"""Absolute tolerance of closed-form vs ODE ``|T|^2``."""
QT_SERIES_THRESHOLD: float = 1e-2
"""Below this ``|k1 d|`` the barrier functions are evaluated by their power series."""

# oracle defaults

QT_GRID_SPAN: float = 8.0
"""Multiples of ``P`` covered around each central momentum."""
QT_GRID_POINTS: int = 512
"""Grid points per packet."""
QT_GRID_ENERGY_STEP: float = 1e-6
"""Finite-difference energy step in base units."""
QT_GRID_MAX_REFINEMENTS: int = 3
"""Number of grid doublings attempted before giving up."""
QT_FD_MAX_HALVINGS: int = 20
"""Number of energy step halvings attempted by the finite-difference delay."""
QT_ODE_RTOL: float = 1e-11
"""Starting relative tolerance of the stationary-scattering integrator."""
QT_ODE_MAX_TIGHTENINGS: int = 4
"""Number of tolerance tightenings attempted by the stationary-scattering integrator."""
QT_ODE_AGREEMENT: float = 1e-8
"""Maximum disagreement between two successive integrator runs."""

# output

QT_CSV_DIGITS: int = 12
"""Significant digits written to the sweep CSV files."""
QT_SVG_WIDTH: int = 720
"""Width of the rendered charts in pixels."""
QT_SVG_HEIGHT: int = 480
"""Height of the rendered charts in pixels."""
