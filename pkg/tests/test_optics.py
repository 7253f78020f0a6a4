import math

import numpy as np
import pytest

from opticaltv.optics import (
    PLANCK,
    REFERENCE_NOISE_TABLE,
    AmplifierNoiseModel,
    beam_splitter_combine,
    gain_for_scalar_multiply,
    power,
    signal_splitter,
)

SQRT2 = math.sqrt(2.0)


class TestBeamSplitter:
    def test_equal_inputs(self):
        o1, o2 = beam_splitter_combine(1.0, 1.0)
        assert o1 == pytest.approx(SQRT2)
        assert o2 == pytest.approx(0.0)

    def test_zero_inputs(self):
        assert beam_splitter_combine(0.0, 0.0) == (0.0, 0.0)

    def test_single_input(self):
        o1, o2 = beam_splitter_combine(1.0, 0.0)
        assert o1 == pytest.approx(1 / SQRT2)
        assert o2 == pytest.approx(1 / SQRT2)

    def test_energy_conservation_random(self, rng):
        a = rng.normal(size=1000) + 1j * rng.normal(size=1000)
        b = rng.normal(size=1000) + 1j * rng.normal(size=1000)
        for ai, bi in zip(a, b):
            o1, o2 = beam_splitter_combine(ai, bi)
            total_in = power(ai) + power(bi)
            assert power(o1) + power(o2) == pytest.approx(total_in, rel=1e-12)


class TestSignalSplitter:
    def test_unit_input(self):
        o1, o2 = signal_splitter(1.0)
        assert power(o1) == pytest.approx(0.5)
        assert power(o2) == pytest.approx(0.5)

    def test_zero(self):
        assert signal_splitter(0.0) == (0.0, 0.0)

    def test_scaling(self):
        o1, o2 = signal_splitter(2.0)
        assert power(o1) == pytest.approx(2.0)
        assert power(o2) == pytest.approx(2.0)


class TestAseNoisePower:
    def test_table_rows_within_one_percent(self):
        model = AmplifierNoiseModel()
        for gain, reference in REFERENCE_NOISE_TABLE:
            computed = model.ase_noise_power(gain)
            assert computed == pytest.approx(reference, rel=0.01)

    def test_unity_gain_is_noiseless(self):
        model = AmplifierNoiseModel(noise_figure=3.0, frequency=2e14, bandwidth=5e9)
        assert model.ase_noise_power(1.0) == 0.0

    def test_affine_in_gain(self):
        model = AmplifierNoiseModel()
        slope = model.noise_figure * PLANCK * model.frequency * model.bandwidth
        for gain in (1.5, 3.0, 77.0, 1000.0):
            assert model.ase_noise_power(gain) == pytest.approx(slope * (gain - 1), rel=1e-12)

    def test_rejects_attenuation(self):
        with pytest.raises(ValueError):
            AmplifierNoiseModel().ase_noise_power(0.5)


class TestSimNoiseStd:
    def test_gain_256(self):
        model = AmplifierNoiseModel()
        # direct arithmetic: sqrt(1000 * F*(G-1)*h*mu*B)
        expected = math.sqrt(1000.0 * 2.0 * 255 * PLANCK * 1.94e14 * 1e10)
        assert model.sim_noise_std(256) == pytest.approx(expected, rel=1e-12)
        assert model.sim_noise_std(256) == pytest.approx(0.02555, rel=5e-3)

    def test_gain_32(self):
        assert AmplifierNoiseModel().sim_noise_std(32) == pytest.approx(0.008911, rel=5e-3)

    def test_unity_gain(self):
        assert AmplifierNoiseModel().sim_noise_std(1) == 0.0

    def test_sim_scale_zero(self):
        model = AmplifierNoiseModel(sim_scale=0.0)
        assert model.sim_noise_std(256) == 0.0


class TestSampleNoiseVector:
    def test_seeded_reproducibility(self):
        model = AmplifierNoiseModel()
        a = model.sample_noise_vector(256, 512, np.random.default_rng(99))
        b = model.sample_noise_vector(256, 512, np.random.default_rng(99))
        np.testing.assert_array_equal(a, b)

    def test_unity_gain_gives_zeros(self):
        out = AmplifierNoiseModel().sample_noise_vector(1, 8, np.random.default_rng(0))
        np.testing.assert_array_equal(out, np.zeros(8))

    def test_large_sample_statistics(self):
        model = AmplifierNoiseModel()
        n = 10**6
        sample = model.sample_noise_vector(256, n, np.random.default_rng(7))
        var_expected = 1000.0 * model.ase_noise_power(256)
        std = math.sqrt(var_expected)
        assert abs(sample.mean()) < 4 * std / 1e3
        assert sample.var() == pytest.approx(var_expected, rel=0.02)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            AmplifierNoiseModel().sample_noise_vector(256, 0, np.random.default_rng(0))


class TestGainForScalarMultiply:
    def test_attenuation_returns_none(self):
        assert gain_for_scalar_multiply(0.5) is None

    def test_identity_returns_none(self):
        assert gain_for_scalar_multiply(1.0) is None

    def test_amplification_squares(self):
        assert gain_for_scalar_multiply(10.0) == 100.0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            gain_for_scalar_multiply(0.0)
        with pytest.raises(ValueError):
            gain_for_scalar_multiply(-2.0)


class TestModelValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"noise_figure": 0.5},
            {"frequency": 0.0},
            {"bandwidth": -1.0},
            {"sim_scale": -0.1},
        ],
    )
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(ValueError):
            AmplifierNoiseModel(**kwargs)
