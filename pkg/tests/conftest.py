"""Module that includes generic fixtures used for testing."""

import csv
import io
import json
import logging
import os

import pytest
from pyexpect import expect

from quitunnel import BarrierSpec, ScenarioSpec, SweepConfig
from quitunnel.consts import QT_LOGGER
from quitunnel.helpers import mu_to_base

GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")
GOLDEN_RTOL = 1e-9
GOLDEN_UPDATE = "QT_UPDATE_GOLDEN"


# pylint: disable=protected-access
def to_be_close_to(self: expect, value: float, tol: float):
    """
    Helper that expands `pyexpect` functionality to compare floats within an absolute tolerance.

    Args:
        self (expect): the `pyexpect` object instance.
        value (float): the expected value.
        tol (float): the absolute tolerance.
    """
    self._assert(abs(self._actual - value) <= tol, f"to be within {tol} of {value}")


# pylint: disable=protected-access
def to_be_between(self: expect, lower: float, upper: float):
    """
    Helper that expands `pyexpect` functionality to check a closed interval.

    Args:
        self (expect): the `pyexpect` object instance.
        lower (float): the lower bound.
        upper (float): the upper bound.
    """
    self._assert(lower <= self._actual <= upper, f"to be in [{lower}, {upper}]")


# pylint: disable=protected-access
def to_be_below(self: expect, bound: float):
    """
    Helper that expands `pyexpect` functionality to check a strict upper bound.

    Args:
        self (expect): the `pyexpect` object instance.
        bound (float): the bound.
    """
    self._assert(self._actual < bound, f"to be below {bound}")


# pylint: disable=protected-access
def to_be_above(self: expect, bound: float):
    """
    Helper that expands `pyexpect` functionality to check a strict lower bound.

    Args:
        self (expect): the `pyexpect` object instance.
        bound (float): the bound.
    """
    self._assert(self._actual > bound, f"to be above {bound}")


# assign them to the object, so they are discoverable by tests
expect.to_be_close_to = to_be_close_to
expect.to_be_between = to_be_between
expect.to_be_below = to_be_below
expect.to_be_above = to_be_above
expect.to_be_true = expect.is_true
expect.to_be_false = expect.is_false


@pytest.fixture
def barrier() -> BarrierSpec:
    """
    Fixture that returns the default barrier: ``V0 = 1``, ``d = 0.7`` in units with ``m = hbar = 1``.

    Returns:
        (BarrierSpec): The barrier.
    """
    return BarrierSpec()


@pytest.fixture
def default_config() -> SweepConfig:
    """
    Fixture that returns the default sweep configuration.

    Returns:
        (SweepConfig): The configuration.
    """
    return SweepConfig()


@pytest.fixture
def make_scenario():
    """
    Fixture that builds scenarios in m.u. with the default parameters unless overridden.

    Returns:
        (Callable[..., ScenarioSpec]): The builder.
    """

    def _make(q: float = 1.0, p: float = 0.95, pbar: float = 1.05, qbar: float = 1.0, width: float = 0.05, **kw):
        return ScenarioSpec.from_momenta(
            mu_to_base(p), mu_to_base(q), mu_to_base(pbar), mu_to_base(qbar), mu_to_base(width), **kw
        )

    return _make


@pytest.fixture
def qt_logger() -> logging.Logger:
    """
    Fixture that returns the logger for our package.

    Returns:
        (logging.Logger): The logger the for the package.
    """
    return logging.getLogger(QT_LOGGER)


def _numeric_cells(text: str) -> list[list[str]]:
    return list(csv.reader(io.StringIO(text)))


def _compare_cells(recorded: str, actual: str):
    if recorded == actual:
        return
    expected_rows, actual_rows = _numeric_cells(recorded), _numeric_cells(actual)
    expect(len(actual_rows)).to_equal(len(expected_rows))
    expect(actual_rows[0]).to_equal(expected_rows[0])
    for want_row, got_row in zip(expected_rows[1:], actual_rows[1:]):
        expect(len(got_row)).to_equal(len(want_row))
        for want, got in zip(want_row, got_row):
            if not want or not got:
                expect(got).to_equal(want)
                continue
            expect(float(got)).to_be_close_to(float(want), GOLDEN_RTOL * max(abs(float(want)), 1e-300))


@pytest.fixture
def golden():
    """
    Fixture comparing an output against a snapshot under ``tests/golden``. A missing snapshot fails the test; with
    ``QT_UPDATE_GOLDEN`` set it is recorded instead and the test skipped.

    Returns:
        (Callable[[str, str | dict], None]): The checker taking the snapshot name and CSV text or a dict of floats.
    """

    def _check(name: str, actual):
        path = os.path.join(GOLDEN_DIR, name)
        text = json.dumps(actual, indent=2, sort_keys=True) + "\n" if isinstance(actual, dict) else actual
        if not os.path.exists(path):
            if not os.environ.get(GOLDEN_UPDATE):
                pytest.fail(f"missing golden snapshot {name}, set {GOLDEN_UPDATE}=1 to record it")
            os.makedirs(GOLDEN_DIR, exist_ok=True)
            with open(path, "w", encoding="utf8", newline="") as snap:
                snap.write(text)
            pytest.skip(f"recorded golden snapshot {name}")
        with open(path, "r", encoding="utf8", newline="") as snap:
            recorded = snap.read()
        if isinstance(actual, dict):
            stored = json.loads(recorded)
            expect(sorted(stored)).to_equal(sorted(actual))
            for key, value in actual.items():
                expect(value).to_be_close_to(stored[key], GOLDEN_RTOL * max(abs(stored[key]), 1e-300))
        else:
            _compare_cells(recorded, text)

    return _check
