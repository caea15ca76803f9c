"""Module that tests the numerical oracles."""

import math

import numpy as np
import pytest
from pyexpect import expect
from scipy.integrate import simpson

from quitunnel import BarrierSpec, GridSpec, StateForm, Statistics, build_context, evaluate, transmission
from quitunnel import delay_fd, delay_time, joint_transmission_grid, transmission_ode
from quitunnel.barrier import transmission_array
from quitunnel.errors import GridSpecError, MomentumDomainError
from quitunnel.helpers import mu_to_base
from quitunnel.oracle import with_form
from quitunnel.packets import mode_amplitude


def test_grid_spec_validation():
    """Tests the discretisation bounds."""
    with pytest.raises(GridSpecError):
        GridSpec(points=32)
    with pytest.raises(GridSpecError):
        GridSpec(span=4)
    with pytest.raises(GridSpecError):
        GridSpec(energy_step=0.0)
    expect(GridSpec().refined().points).to_equal(1024)


def test_ode_without_barrier():
    """Tests that no barrier transmits everything."""
    result = transmission_ode(1.0, BarrierSpec(d=0.0))
    expect(result.magnitude2).to_equal(1.0)
    expect(result.reflection2).to_equal(0.0)


def test_ode_symmetric_point(barrier):
    """Tests the oracle at E = V0 / 2 against cosh^-2(0.7)."""
    expect(transmission_ode(1.0, barrier).magnitude2).to_be_close_to(1 / math.cosh(0.7) ** 2, 1e-6)


def test_ode_matches_closed_form(barrier):
    """Tests |T|^2 on 50 momenta in (0.3, 1.4) m.u., plus flux conservation and the amplitude itself."""
    for p in mu_to_base(np.linspace(0.3, 1.4, 52)[1:-1]):
        result = transmission_ode(float(p), barrier)
        closed = transmission(float(p), barrier)
        expect(result.magnitude2).to_be_close_to(abs(closed) ** 2, 1e-6)
        expect(result.flux).to_be_close_to(1.0, 1e-8)
        expect(abs(result.amplitude - closed)).to_be_below(1e-6)


def test_ode_rejects_non_positive_momentum(barrier):
    """Tests the momentum domain of the oracle."""
    with pytest.raises(MomentumDomainError):
        transmission_ode(0.0, barrier)


def test_delay_fd_without_barrier():
    """Tests that no barrier means no delay."""
    expect(delay_fd(1.0, BarrierSpec(d=0.0))).to_be_close_to(0.0, 1e-12)


def test_delay_fd_matches_analytic(barrier):
    """Tests the finite-difference delay at p = 0.95 m.u. and across the barrier top."""
    for p in (mu_to_base(0.95), math.sqrt(2), mu_to_base(1.3)):
        tau = delay_time(p, barrier)
        expect(abs(delay_fd(p, barrier) - tau) / abs(tau)).to_be_below(1e-5)


def test_delay_fd_is_second_order(barrier):
    """Tests that halving the energy step cuts the error about four times."""
    p = mu_to_base(0.95)
    tau = delay_time(p, barrier)
    errors = [abs(delay_fd(p, barrier, GridSpec(energy_step=step)) - tau) for step in (0.02, 0.01, 0.005)]
    for coarse, fine in zip(errors, errors[1:]):
        expect(coarse / fine).to_be_between(3.0, 5.0)


def test_delay_fd_shrinks_step_below_energy(barrier):
    """Tests that a step larger than the energy is halved until it fits below it."""
    # E = 0.02, so 0.5 halves five times down to 0.015625
    coarse = delay_fd(0.2, barrier, GridSpec(energy_step=0.5))
    expect(coarse).to_equal(delay_fd(0.2, barrier, GridSpec(energy_step=0.015625)))


def test_grid_product_without_barrier(make_scenario):
    """Tests that a free product state is fully transmitted."""
    s = with_form(make_scenario(q=1.0), Statistics.DISTINGUISHABLE, StateForm.PRODUCT_A)
    expect(joint_transmission_grid(s, BarrierSpec(d=0.0))).to_be_close_to(1.0, 1e-9)


def test_grid_product_factorises(make_scenario, barrier):
    """Tests the product-state grid value against the two one-particle quadratures and the model."""
    s = with_form(make_scenario(q=1.0), Statistics.DISTINGUISHABLE, StateForm.PRODUCT_A)
    grid_value = joint_transmission_grid(s, barrier)

    factors = []
    for packet in s.packets[:2]:
        axis = np.linspace(packet.p_central - 0.8, packet.p_central + 0.8, 4001)
        weights = mode_amplitude(packet, axis) ** 2 * np.abs(transmission_array(axis, barrier)) ** 2
        factors.append(float(simpson(weights, x=axis)))
    expect(grid_value).to_be_close_to(factors[0] * factors[1], 1e-6)

    model = evaluate(build_context(s, barrier), Statistics.DISTINGUISHABLE, StateForm.PRODUCT_A).value
    expect(abs(model - grid_value) / grid_value).to_be_below(0.05)


def test_grid_is_converged(make_scenario, barrier):
    """Tests that doubling the grid points moves the superposition value by less than 1e-6."""
    s = with_form(make_scenario(q=1.0), Statistics.DISTINGUISHABLE, StateForm.SUPERPOSITION)
    coarse = joint_transmission_grid(s, barrier, GridSpec(points=512))
    fine = joint_transmission_grid(s, barrier, GridSpec(points=1024))
    expect(abs(coarse - fine)).to_be_below(1e-6)


def test_grid_mixture_is_weighted_sum(make_scenario, barrier):
    """Tests that the grid mixture combines the two product values."""
    base = make_scenario(q=0.8, a=0.6)
    a_val = joint_transmission_grid(with_form(base, Statistics.BOSON, StateForm.PRODUCT_A), barrier)
    b_val = joint_transmission_grid(with_form(base, Statistics.BOSON, StateForm.PRODUCT_B), barrier)
    mix = joint_transmission_grid(with_form(base, Statistics.BOSON, StateForm.MIXTURE), barrier)
    expect(mix).to_be_close_to(0.36 * a_val + abs(base.b) ** 2 * b_val, 1e-12)


def test_grid_agrees_with_model_superposition(make_scenario, barrier):
    """Tests the distinguishable and bosonic superpositions against the grid across the sweep range."""
    for q in (0.5, 0.7, 0.9, 1.0, 1.1, 1.3):
        base = make_scenario(q=q)
        ctx = build_context(base, barrier)
        for statistics in (Statistics.DISTINGUISHABLE, Statistics.BOSON):
            model = evaluate(ctx, statistics, StateForm.SUPERPOSITION).value
            reference = joint_transmission_grid(with_form(base, statistics, StateForm.SUPERPOSITION), barrier)
            expect(abs(model - reference) / reference).to_be_below(0.05)
