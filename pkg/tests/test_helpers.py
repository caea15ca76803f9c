"""Module that tests the unit and formatting helpers."""

import math

from pyexpect import expect

from quitunnel.helpers import (
    base_to_lu,
    base_to_mu,
    format_optional,
    length_unit,
    lu_to_base,
    momentum_unit,
    mu_to_base,
    parse_optional,
)


def test_units_in_base_system():
    """Tests the size of m.u. and l.u. when m = hbar = V0 = 1."""
    expect(momentum_unit()).to_equal(math.sqrt(2))
    expect(length_unit()).to_equal(1.0)
    expect(momentum_unit(m=2.0, v0=0.5)).to_equal(math.sqrt(2))
    expect(length_unit(hbar=2.0, m=4.0)).to_equal(1.0)


def test_unit_round_trip():
    """Tests that converting there and back is lossless to rounding."""
    for value in (1e-4, 0.01, 0.95, 1.3999, 12.5):
        expect(base_to_mu(mu_to_base(value))).to_be_close_to(value, 1e-14 * max(1.0, value))
        expect(base_to_lu(lu_to_base(value, m=3.0), m=3.0)).to_be_close_to(value, 1e-14 * max(1.0, value))


def test_optional_cells():
    """Tests formatting and parsing of possibly undefined values."""
    expect(format_optional(None, 12)).to_equal("")
    expect(format_optional(2 / 3, 4)).to_equal("0.6667")
    expect(format_optional(1.5e-7, 12)).to_equal("1.5e-07")
    expect(parse_optional("")).to_be_none()
    expect(parse_optional(" 0.25 ")).to_equal(0.25)
