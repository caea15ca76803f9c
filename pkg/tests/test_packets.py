"""Module that tests Gaussian packets and their overlaps."""

import math

import numpy as np
import pytest
from pyexpect import expect
from scipy.integrate import simpson

from quitunnel import BarrierSpec, OverlapSet, PacketLabel, PacketSpec, initial_overlap, overlap_matrix
from quitunnel import transmitted_overlap
from quitunnel.barrier import effective_momentum
from quitunnel.errors import PacketSpecError, PacketWidthMismatchError
from quitunnel.packets import mode_amplitude

PSI, PHI, VARPHI, CHI = PacketLabel.PSI, PacketLabel.PHI, PacketLabel.VARPHI, PacketLabel.CHI


def test_packet_spec_validation():
    """Tests that non-positive momenta and widths are rejected."""
    with pytest.raises(PacketSpecError):
        PacketSpec(0.0, 0.05, PSI)
    with pytest.raises(PacketSpecError):
        PacketSpec(1.0, 0.0, PSI)


def test_mode_amplitude_is_normalised():
    """Tests that the squared mode distribution integrates to one."""
    packet = PacketSpec(1.3, 0.07, PSI)
    grid = np.linspace(1.3 - 1.0, 1.3 + 1.0, 4001)
    expect(float(simpson(mode_amplitude(packet, grid) ** 2, x=grid))).to_be_close_to(1.0, 1e-10)


def test_initial_overlap_closed_form():
    """Tests the Gaussian overlap against its closed form and against quadrature."""
    a, b = PacketSpec(1.0, 0.05, PSI), PacketSpec(1.05, 0.05, PHI)
    expect(initial_overlap(a, b)).to_be_close_to(math.exp(-0.5), 1e-15)
    expect(initial_overlap(a, a)).to_equal(1.0)

    grid = np.linspace(0.5, 1.55, 8001)
    quadrature = float(simpson(mode_amplitude(a, grid) * mode_amplitude(b, grid), x=grid))
    expect(quadrature).to_be_close_to(initial_overlap(a, b), 1e-10)


def test_overlap_is_symmetric_and_bounded():
    """Tests symmetry and the (0, 1] range."""
    a, b = PacketSpec(0.7, 0.05, PSI), PacketSpec(0.9, 0.05, PHI)
    expect(initial_overlap(a, b)).to_equal(initial_overlap(b, a))
    expect(initial_overlap(a, b)).to_be_between(0.0, 1.0)


def test_width_mismatch_is_rejected(barrier):
    """Tests that packets of different widths cannot be combined."""
    a, b = PacketSpec(1.0, 0.05, PSI), PacketSpec(1.0, 0.06, PHI)
    with pytest.raises(PacketWidthMismatchError):
        initial_overlap(a, b)
    with pytest.raises(PacketWidthMismatchError):
        transmitted_overlap(a, b, barrier)


def test_transmitted_overlap_uses_effective_momenta(barrier):
    """Tests the transmitted overlap as a free-packet overlap at the effective momenta."""
    a, b = PacketSpec(1.3435, 0.0707, PSI), PacketSpec(1.4142, 0.0707, PHI)
    pe_a, pe_b = effective_momentum(1.3435, barrier), effective_momentum(1.4142, barrier)
    expected = math.exp(-((pe_a - pe_b) ** 2) / (2 * 0.0707**2))
    expect(transmitted_overlap(a, b, barrier)).to_be_close_to(expected, 1e-15)
    expect(transmitted_overlap(a, a, barrier)).to_equal(1.0)


def test_transmitted_overlap_without_barrier():
    """Tests that a zero-width barrier leaves overlaps unchanged."""
    a, b = PacketSpec(1.0, 0.05, PSI), PacketSpec(1.04, 0.05, PHI)
    expect(transmitted_overlap(a, b, BarrierSpec(d=0.0))).to_equal(initial_overlap(a, b))


def _packets(width: float = 0.0707) -> tuple[PacketSpec, ...]:
    return (
        PacketSpec(1.3435, width, PSI),
        PacketSpec(1.4142, width, PHI),
        PacketSpec(1.4849, width, VARPHI),
        PacketSpec(1.4142, width, CHI),
    )


def test_overlap_matrix(barrier):
    """Tests that the matrix holds six symmetric pairs that match the pairwise operations."""
    packets = _packets()
    overlaps = overlap_matrix(packets, barrier)
    expect(len(overlaps.initial)).to_equal(6)
    expect(len(overlaps.transmitted)).to_equal(6)
    expect(overlaps.transmitted_defined).to_be_true()
    for x in packets:
        for y in packets:
            expect(overlaps.get(x.label, y.label)).to_equal(overlaps.get(y.label, x.label))
            if x is not y:
                expect(overlaps.get(x.label, y.label)).to_be_close_to(initial_overlap(x, y), 1e-15)
                expect(overlaps.get_transmitted(x.label, y.label)).to_be_close_to(
                    transmitted_overlap(x, y, barrier), 1e-15
                )
    expect(overlaps.get(PHI, CHI)).to_equal(1.0)
    expect(overlaps.max_overlap()).to_equal(1.0)


def test_overlap_matrix_reports_undefined_entries(barrier, qt_logger, caplog, mocker):
    """Tests that an undefined effective momentum leaves the affected overlaps undefined and logs it."""
    mocker.patch("quitunnel.packets.effective_momentum", side_effect=lambda p, bar: None if p > 1.45 else p)
    with caplog.at_level("WARNING", logger=qt_logger.name):
        overlaps = overlap_matrix(_packets(), barrier)
    expect(overlaps.transmitted_defined).to_be_false()
    expect(overlaps.get_transmitted(PSI, VARPHI)).to_be_none()
    expect(overlaps.get_transmitted(PSI, PHI)).to_be_close_to(initial_overlap(*_packets()[:2]), 1e-15)
    expect(any("undefined" in record.getMessage() for record in caplog.records)).to_be_true()


def test_overlap_set_from_pairs():
    """Tests the tuple-keyed builder and the unordered lookup."""
    overlaps = OverlapSet.from_pairs({(PSI, PHI): 0.3}, {(PHI, PSI): None})
    expect(overlaps.get(PHI, PSI)).to_equal(0.3)
    expect(overlaps.get_transmitted(PSI, PHI)).to_be_none()
    expect(overlaps.get_transmitted(CHI, CHI)).to_equal(1.0)
