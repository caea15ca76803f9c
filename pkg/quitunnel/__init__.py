"""
Contains a rundown of the functionality exposed by :mod:`quitunnel`: single-mode scattering through a rectangular
barrier, Gaussian packets and their overlaps, two-particle states and their double-transmission probabilities,
the numerical oracles, and the sweep, plot and validation layers behind the ``quitunnel`` command.
"""

import logging
import os
from typing import TypeAlias

from .barrier import (
    BarrierSpec,
    ModeParams,
    ScatterResult,
    delay_time,
    effective_momentum,
    mode_params,
    phase_unwrapped,
    scatter,
    transmission,
)
from .consts import QT_LOG_ENABLED, QT_LOG_FORMAT, QT_LOG_LEVEL, QT_LOGGER
from .oracle import GridSpec, OdeScatterResult, delay_fd, joint_transmission_grid, transmission_ode
from .packets import OverlapSet, PacketSpec, initial_overlap, overlap_matrix, transmitted_overlap
from .plot import render_plot
from .probabilities import (
    ProbabilityContext,
    ProbabilityReport,
    all_probabilities,
    build_context,
    evaluate,
    p_dis_mixture,
    p_dis_product,
    p_dis_superposition,
    p_ide_mixture,
    p_ide_product,
    p_ide_superposition,
)
from .state_ops import PacketLabel, StateForm, Statistics, Term
from .states import (
    NormSet,
    ScenarioSpec,
    norm_distinguishable,
    norm_T_distinguishable,
    norm_T_identical,
    norms_identical,
)
from .sweep import FigurePreset, SweepConfig, SweepTable, load_config, run_sweep, separation_metrics
from .validate import ValidationReport, validate

# put the type alias for the logging type
HandlerType: TypeAlias = logging.StreamHandler | logging.NullHandler

__all__ = [
    "BarrierSpec",
    "ModeParams",
    "ScatterResult",
    "mode_params",
    "transmission",
    "phase_unwrapped",
    "delay_time",
    "effective_momentum",
    "scatter",
    "PacketSpec",
    "OverlapSet",
    "initial_overlap",
    "transmitted_overlap",
    "overlap_matrix",
    "ScenarioSpec",
    "NormSet",
    "norm_distinguishable",
    "norms_identical",
    "norm_T_distinguishable",
    "norm_T_identical",
    "ProbabilityContext",
    "ProbabilityReport",
    "build_context",
    "evaluate",
    "all_probabilities",
    "p_dis_product",
    "p_dis_mixture",
    "p_dis_superposition",
    "p_ide_product",
    "p_ide_mixture",
    "p_ide_superposition",
    "GridSpec",
    "OdeScatterResult",
    "transmission_ode",
    "delay_fd",
    "joint_transmission_grid",
    "Statistics",
    "StateForm",
    "Term",
    "PacketLabel",
    "FigurePreset",
    "SweepConfig",
    "SweepTable",
    "load_config",
    "run_sweep",
    "separation_metrics",
    "render_plot",
    "ValidationReport",
    "validate",
]

# enable logging, if we have the env flag up we report in stdout, otherwise
# we use `NullHandler`.
handler: HandlerType
if QT_LOG_ENABLED in os.environ:
    handler = logging.StreamHandler()
    # configure the target handler
    handler.setLevel(QT_LOG_LEVEL)
    handler.setFormatter(QT_LOG_FORMAT)
else:
    handler = logging.NullHandler()

# get a logger by the specified name and attach its handler
logging.getLogger(QT_LOGGER).addHandler(handler)
