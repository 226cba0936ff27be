import math

import numpy as np
import pytest

import mixedframe as mf


def test_version():
    assert mf.__version__ == "0.3.0"


def test_two_point_product_and_witness():
    tp = mf.mix([(0.5, mf.make_delta(0.0)), (0.5, mf.make_delta(2.5))])
    three = mf.mix([(0.5, mf.make_delta(0.0)), (0.25, mf.make_delta(-2.5)), (0.25, mf.make_delta(2.5))])
    assert mf.canonical_distance(mf.convolve(tp, mf.antipode(tp)), three) == 0.0
    verdict = mf.is_invertible(tp, 10.0, 1e-3)
    assert not verdict.invertible
    assert abs(verdict.witness - math.pi / 2.5) <= 1e-6
    assert mf.is_invertible(mf.make_delta(1.3), 10.0, 1.0 - 1e-6).invertible


def test_characteristic_function_of_gaussian():
    g = mf.make_gaussian(0.7, 0.4)
    for p in np.linspace(-3, 3, 13):
        expected = np.exp(-0.2 * p * p - 0.7j * p)
        assert abs(mf.characteristic_value(g, p) - expected) <= 1e-14


def test_text_round_trip():
    rho = mf.mix([(0.25, mf.make_delta(-1.0)), (0.75, mf.make_gaussian(2.0, 0.5))])
    assert mf.approx_equal(mf.GroupDensity.parse(str(rho)), rho)


def test_evaluate_uses_python_callable():
    g = mf.make_gaussian(1.0, 0.25)
    assert mf.evaluate(g, lambda a: a * a) == pytest.approx(1.25, abs=1e-9)


def test_gaussian_smear_matches_closed_form():
    grid = mf.PositionGrid(1024, 40.0)
    x = np.array(grid.points())
    psi = mf.gaussian_wavepacket(grid, 0.75)
    dens = mf.position_density(mf.act_mixed(mf.make_gaussian(0.0, 1.0), mf.PureMixture.pure(psi)))
    var = 1.0 + 0.75**2
    expected = np.exp(-x * x / (2 * var)) / np.sqrt(2 * np.pi * var)
    assert np.max(np.abs(np.array(dens.values) - expected)) <= 1e-6


def test_purity_matches_dense_density_matrix():
    grid = mf.PositionGrid(256, 40.0)
    a = mf.gaussian_wavepacket(grid, 0.8, -1.0)
    b = mf.gaussian_wavepacket(grid, 1.1, 1.5)
    state = mf.PureMixture([(0.3, a), (0.7, b)])
    dx = grid.spacing
    va, vb = np.array(a.amplitudes()), np.array(b.amplitudes())
    rho = dx * (0.3 * np.outer(va, va.conj()) + 0.7 * np.outer(vb, vb.conj()))
    assert abs(mf.purity(state) - np.trace(rho @ rho).real) <= 1e-10
    smeared = mf.act_mixed(mf.make_gaussian(0.0, 0.5), state)
    assert mf.purity(smeared) <= mf.purity(state) + 1e-9


def test_thermal_dictionary():
    for temperature in (0.1, 1.0, 10.0):
        beta = mf.beta_of_temperature(temperature)
        tp = mf.ThermalParameters(beta, 1.0)
        p = np.linspace(-5, 5, 41) * math.sqrt(temperature)
        mb = np.exp(-p * p / (2 * temperature)) / np.sqrt(2 * np.pi * temperature)
        got = np.array(mf.momentum_smearing_density(tp, p.tolist()))
        assert np.max(np.abs(got - mb) / mb) <= 1e-12
        assert abs(mf.energy_density_integral(tp) - 1.0) <= 1e-8


def test_boost_label_phase():
    label = mf.boost_pure_label(3.0, 2.0, mf.GalileiParams(mass=1.0, time=1.0))
    assert label.momentum == 5.0
    assert label.phase == pytest.approx(4 * math.pi - 10.5, abs=1e-12)


def test_errors_are_typed():
    with pytest.raises(mf.DomainError):
        mf.boost_pure_label(1.0, 0.0, mf.GalileiParams(mass=-1.0))
    with pytest.raises(mf.Error):
        mf.make_gaussian(0.0, -1.0)
