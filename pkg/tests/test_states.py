"""Module that tests scenarios and normalisation constants."""

import cmath
import math

import pytest
from pyexpect import expect

from quitunnel import (
    PacketLabel,
    ScenarioSpec,
    Statistics,
    build_context,
    norm_distinguishable,
    norm_T_distinguishable,
    norm_T_identical,
    norms_identical,
)
from quitunnel.errors import PacketWidthMismatchError, ScenarioSpecError
from quitunnel.packets import OverlapSet, PacketSpec
from quitunnel.states import bracket_identical, norm_set, term_bracket

PSI, PHI, VARPHI, CHI = PacketLabel.PSI, PacketLabel.PHI, PacketLabel.VARPHI, PacketLabel.CHI


def test_coefficients_must_be_normalised():
    """Tests that |a|^2 + |b|^2 = 1 is enforced."""
    packets = tuple(PacketSpec(1.0 + 0.1 * i, 0.05, label) for i, label in enumerate((PSI, PHI, VARPHI, CHI)))
    with pytest.raises(ScenarioSpecError):
        ScenarioSpec(a=0.8, b=0.8, packets=packets)
    with pytest.raises(ScenarioSpecError):
        ScenarioSpec(a=1.0, b=0.0, packets=tuple(reversed(packets)))


def test_shared_width_is_enforced():
    """Tests that all four packets must share one width."""
    packets = (
        PacketSpec(1.0, 0.05, PSI),
        PacketSpec(1.1, 0.05, PHI),
        PacketSpec(1.2, 0.06, VARPHI),
        PacketSpec(1.3, 0.05, CHI),
    )
    with pytest.raises(PacketWidthMismatchError):
        ScenarioSpec(a=1.0, b=0.0, packets=packets)


def test_from_momenta_derives_b(make_scenario):
    """Tests that b follows from a and the relative phase."""
    s = make_scenario(b_phase=math.pi / 3)
    expect(abs(s.b)).to_be_close_to(1 / math.sqrt(2), 1e-15)
    expect(cmath.phase(s.b)).to_be_close_to(math.pi / 3, 1e-15)
    expect(make_scenario(a=1.0).b).to_equal(0)
    with pytest.raises(ScenarioSpecError):
        make_scenario(a=1.5)


def test_relabelled_swaps_packets(make_scenario):
    """Tests the exchange relabelling of the four packets."""
    s = make_scenario(q=0.7)
    r = s.relabelled()
    expect(r.packet(PSI).p_central).to_equal(s.packet(PHI).p_central)
    expect(r.packet(PHI).p_central).to_equal(s.packet(PSI).p_central)
    expect(r.packet(VARPHI).p_central).to_equal(s.packet(CHI).p_central)
    expect(r.packet(CHI).p_central).to_equal(s.packet(VARPHI).p_central)
    expect(r.b).to_equal(s.b)


def _overlaps(psi_varphi=0.0, phi_chi=0.0, psi_chi=0.0, phi_varphi=0.0, psi_phi=0.0, varphi_chi=0.0):
    values = {
        (PSI, VARPHI): psi_varphi,
        (PHI, CHI): phi_chi,
        (PSI, CHI): psi_chi,
        (PHI, VARPHI): phi_varphi,
        (PSI, PHI): psi_phi,
        (VARPHI, CHI): varphi_chi,
    }
    return OverlapSet.from_pairs(values, values)


def test_norm_distinguishable(make_scenario):
    """Tests N for orthogonal, equal and cancelling terms."""
    s = make_scenario()
    expect(norm_distinguishable(s, _overlaps())).to_be_close_to(1.0, 1e-15)
    expect(norm_distinguishable(s, _overlaps(psi_varphi=1.0, phi_chi=1.0))).to_be_close_to(1 / math.sqrt(2), 1e-15)


def test_norm_distinguishable_undefined_radicand(make_scenario, qt_logger, caplog):
    """Tests that b = -a with identical terms has no normalisation and says so."""
    s = make_scenario(a=math.sqrt(0.5), b=-math.sqrt(0.5))
    with caplog.at_level("WARNING", logger=qt_logger.name):
        expect(norm_distinguishable(s, _overlaps(psi_varphi=1.0, phi_chi=1.0))).to_be_none()
    expect(any("non-positive radicand" in record.getMessage() for record in caplog.records)).to_be_true()


def test_norms_identical_need_identical_statistics(make_scenario):
    """Tests that identical-particle normalisations refuse distinguishable scenarios."""
    with pytest.raises(ScenarioSpecError):
        norms_identical(make_scenario(), _overlaps())


def test_norms_identical(make_scenario):
    """Tests the term and superposition normalisations for bosons and fermions."""
    ov = _overlaps(psi_phi=0.5)
    n_a, n_b, cal_n = norms_identical(make_scenario(statistics=Statistics.BOSON), ov)
    expect(n_a).to_be_close_to(2.5**-0.5, 1e-15)
    expect(n_b).to_be_close_to(0.5**0.5, 1e-15)
    expect(cal_n).to_be_close_to((0.5 * 2.5 + 0.5 * 2) ** -0.5, 1e-15)

    n_a, _, _ = norms_identical(make_scenario(statistics=Statistics.FERMION), ov)
    expect(n_a).to_be_close_to(1.5**-0.5, 1e-15)


def test_fermion_coincidence_excludes_only_the_term(make_scenario):
    """Tests that coincident fermion packets leave their own term undefined while the superposition survives."""
    s = make_scenario(statistics=Statistics.FERMION)
    n_a, n_b, cal_n = norms_identical(s, _overlaps(psi_phi=1.0))
    expect(n_a).to_be_none()
    expect(n_b).to_be_close_to(0.5**0.5, 1e-15)
    expect(cal_n).to_be_close_to(1.0, 1e-15)
    expect(term_bracket(1.0, -1)).to_be_none()
    expect(term_bracket(1.0, 1)).to_equal(4.0)


def test_exchange_term_sign(make_scenario):
    """Tests that bosons add and fermions subtract the exchanged overlap product."""
    ov = _overlaps(psi_varphi=0.5, phi_chi=0.4, psi_chi=0.2, phi_varphi=0.3)
    boson = bracket_identical(make_scenario(statistics=Statistics.BOSON), ov)
    fermion = bracket_identical(make_scenario(statistics=Statistics.FERMION), ov)
    # cross = Re(a* b) = 1/2
    expect(boson).to_be_close_to(2 + 4 * 0.5 * (0.2 + 0.06), 1e-15)
    expect(fermion).to_be_close_to(2 + 4 * 0.5 * (0.2 - 0.06), 1e-15)


def test_transmitted_norms(make_scenario, barrier):
    """Tests the double-transmission brackets against their defining sums."""
    s = make_scenario(q=1.0, statistics=Statistics.BOSON)
    ctx = build_context(s, barrier)
    t = {label: ctx.scatters[label].amplitude for label in (PSI, PHI, VARPHI, CHI)}
    amp_a, amp_b = s.a * t[PSI] * t[PHI], s.b * t[VARPHI] * t[CHI]
    ov = ctx.overlaps

    expected = abs(amp_a) ** 2 + abs(amp_b) ** 2
    expected += 2 * (amp_a.conjugate() * amp_b * ov.get_transmitted(PSI, VARPHI) * ov.get_transmitted(PHI, CHI)).real
    expect(norm_T_distinguishable(s, ov, ctx.scatters)).to_be_close_to(expected, 1e-14)

    exchange = ov.get_transmitted(PSI, VARPHI) * ov.get_transmitted(PHI, CHI) + ov.get_transmitted(
        PSI, CHI
    ) * ov.get_transmitted(PHI, VARPHI)
    expected = abs(amp_a) ** 2 * (2 + 2 * ov.get_transmitted(PSI, PHI) ** 2)
    expected += abs(amp_b) ** 2 * (2 + 2 * ov.get_transmitted(VARPHI, CHI) ** 2)
    expected += 4 * (amp_a.conjugate() * amp_b * exchange).real
    expect(norm_T_identical(s, ov, ctx.scatters)).to_be_close_to(expected, 1e-14)


def test_transmitted_norm_undefined_overlap(make_scenario, barrier):
    """Tests that an undefined transmitted overlap makes the bracket undefined."""
    s = make_scenario()
    ctx = build_context(s, barrier)
    holes = OverlapSet(initial=ctx.overlaps.initial, transmitted={k: None for k in ctx.overlaps.transmitted})
    expect(norm_T_distinguishable(s, holes, ctx.scatters)).to_be_none()
    # with a single term no cross overlap is needed
    single = make_scenario(a=1.0)
    expect(norm_T_distinguishable(single, holes, build_context(single, barrier).scatters)).to_be_above(0.0)


def test_norm_set(make_scenario, barrier):
    """Tests that the batch agrees with the individual operations."""
    s = make_scenario(statistics=Statistics.FERMION, q=0.9)
    ctx = build_context(s, barrier)
    norms = norm_set(s, ctx.overlaps, ctx.scatters)
    n_a, n_b, cal_n = norms_identical(s, ctx.overlaps)
    expect(norms.n).to_equal(norm_distinguishable(s, ctx.overlaps))
    expect((norms.n_a, norms.n_b, norms.cal_n)).to_equal((n_a, n_b, cal_n))
    expect(norms.cal_n_t_inv2).to_equal(norm_T_identical(s, ctx.overlaps, ctx.scatters))
    expect(ctx.norms).to_equal(norms)
