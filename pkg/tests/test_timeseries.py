import numpy as np
import pytest

from sqztune.homodyne import symmetric_sideband_noise, undb
from sqztune.optics_components import OpoParams
from sqztune.timeseries import (
    AcquisitionParams,
    NoiseModel,
    SpectrumEstimate,
    band_power,
    band_power_stderr,
    calibrate,
    estimate_spectrum,
    mean_power,
    normalize_to_snl,
    periodogram,
    simulate_spectrum,
    spectrum_from_csv,
    spectrum_to_csv,
    synthesize_round,
)

SMALL = AcquisitionParams(
    sample_rate_msps=50.0,
    samples_per_round=4096,
    rounds=64,
    band_center_mhz=1.55,
    band_width_mhz=0.4,
    rng_seed=99,
)


def flat(level: float):
    def psd(freqs):
        return np.full(np.shape(freqs), level)

    return psd


class TestAcquisitionParams:
    def test_defaults_follow_acquisition_settings(self):
        acq = AcquisitionParams()
        assert acq.sample_rate_msps == 50.0
        assert acq.samples_per_round == 50_000
        assert acq.rounds == 500
        assert acq.band_width_mhz == 0.1
        assert acq.bin_spacing_mhz == pytest.approx(1e-3)

    def test_nyquist_violation_rejected(self):
        with pytest.raises(ValueError, match="Nyquist"):
            AcquisitionParams(sample_rate_msps=50.0, band_center_mhz=25.0)
        # the beat band needs the faster sampling rate
        AcquisitionParams(sample_rate_msps=250.0, band_center_mhz=81.55)

    def test_odd_sample_count_rejected(self):
        with pytest.raises(ValueError, match="even"):
            AcquisitionParams(samples_per_round=4097)

    def test_bad_rounds_and_seed_rejected(self):
        with pytest.raises(ValueError):
            AcquisitionParams(rounds=0)
        with pytest.raises(ValueError):
            AcquisitionParams(rng_seed=-1)


class TestSynthesizeRound:
    def test_same_seed_is_bit_identical(self):
        model = NoiseModel(flat(1.0), electronic_floor=0.0)
        a = synthesize_round(model, SMALL, 7)
        b = synthesize_round(model, SMALL, 7)
        assert np.array_equal(a, b)

    def test_rounds_and_streams_differ(self):
        model = NoiseModel(flat(1.0), electronic_floor=0.0)
        a = synthesize_round(model, SMALL, 0)
        b = synthesize_round(model, SMALL, 1)
        c = synthesize_round(model, SMALL, 0, stream=5)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_flat_unit_psd_gives_unit_variance(self):
        model = NoiseModel(flat(1.0), electronic_floor=0.0)
        variances = [np.var(synthesize_round(model, SMALL, i)) for i in range(32)]
        sigma = np.sqrt(2.0 / SMALL.samples_per_round / 32)
        assert np.mean(variances) == pytest.approx(1.0, abs=3 * sigma)

    def test_zero_psd_with_floor_recovers_floor(self):
        model = NoiseModel(None, electronic_floor=0.31)
        est = simulate_spectrum(model, SMALL)
        level = band_power(est, 10.0, 5.0)
        assert level == pytest.approx(0.31, rel=0.05)

    def test_negative_psd_rejected(self):
        model = NoiseModel(flat(-1.0), electronic_floor=0.0)
        with pytest.raises(ValueError, match="non-negative"):
            synthesize_round(model, SMALL, 0)

    def test_tone_beyond_nyquist_rejected(self):
        model = NoiseModel(None, electronic_floor=0.1, interference_tones=((30.0, 1.0),))
        with pytest.raises(ValueError, match="Nyquist"):
            synthesize_round(model, SMALL, 0)

    def test_on_grid_tone_lands_in_one_bin(self):
        power = 25.0
        freq = 5.0  # exactly on the 4096-point grid at 50 MS/s? 5/0.012207 = 409.6 -> off grid
        acq = AcquisitionParams(
            sample_rate_msps=50.0, samples_per_round=4000, rounds=8,
            band_center_mhz=5.0, band_width_mhz=0.5, rng_seed=1,
        )
        model = NoiseModel(None, electronic_floor=0.0, interference_tones=((freq, power),))
        trace = synthesize_round(model, acq, 0)
        gram = periodogram(trace)
        k = int(round(freq / acq.bin_spacing_mhz))
        assert gram[k] == pytest.approx(power, rel=1e-9)
        assert gram[k - 3] < 1e-15


class TestEstimateSpectrum:
    def test_zero_traces_give_zero_psd(self):
        traces = [np.zeros(SMALL.samples_per_round)]
        est = estimate_spectrum(traces, SMALL)
        assert np.all(est.psd == 0.0)
        assert np.all(est.stderr == 0.0)

    def test_white_noise_level_within_stderr(self):
        level = 2.4
        model = NoiseModel(flat(level), electronic_floor=0.0)
        traces = [synthesize_round(model, SMALL, i) for i in range(SMALL.rounds)]
        est = estimate_spectrum(traces, SMALL)
        got = band_power(est, 10.0, 8.0)
        err = band_power_stderr(est, 10.0, 8.0)
        assert abs(got - level) < 3 * err

    def test_matches_streaming_estimator(self):
        model = NoiseModel(flat(0.7), electronic_floor=0.05)
        traces = [synthesize_round(model, SMALL, i) for i in range(SMALL.rounds)]
        batch = estimate_spectrum(traces, SMALL)
        streamed = simulate_spectrum(model, SMALL)
        assert np.allclose(batch.psd, streamed.psd, rtol=1e-12, atol=1e-15)
        assert np.allclose(batch.stderr, streamed.stderr, rtol=1e-9, atol=1e-12)

    def test_inconsistent_lengths_rejected(self):
        with pytest.raises(ValueError, match="lengths"):
            estimate_spectrum([np.zeros(4096), np.zeros(2048)], SMALL)
        with pytest.raises(ValueError, match="lengths"):
            estimate_spectrum([np.zeros(1024)], SMALL)

    def test_no_traces_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            estimate_spectrum([], SMALL)

    def test_grid_spacing_invariant(self):
        est = simulate_spectrum(NoiseModel(None, 0.1), SMALL)
        spacing = np.diff(est.freqs_mhz)
        assert np.allclose(spacing, SMALL.bin_spacing_mhz, rtol=1e-12)

    def test_parseval_round_power(self):
        model = NoiseModel(flat(1.3), electronic_floor=0.0, interference_tones=((10.009765625, 4.0),))
        trace = synthesize_round(model, SMALL, 3)
        est = estimate_spectrum([trace], SMALL)
        assert mean_power(est) == pytest.approx(float(np.mean(trace**2)), rel=1e-9)

    def test_stderr_scales_inverse_sqrt_rounds(self):
        model = NoiseModel(flat(1.0), electronic_floor=0.0)
        errs = {}
        for rounds in (50, 200, 500):
            acq = AcquisitionParams(
                sample_rate_msps=50.0, samples_per_round=2048, rounds=rounds,
                band_center_mhz=10.0, band_width_mhz=8.0, rng_seed=4,
            )
            est = simulate_spectrum(model, acq)
            errs[rounds] = band_power_stderr(est, 10.0, 8.0)
        assert errs[50] / errs[500] == pytest.approx(np.sqrt(10.0), rel=0.2)
        assert errs[200] / errs[500] == pytest.approx(np.sqrt(2.5), rel=0.2)


class TestBandPower:
    def test_flat_spectrum_any_band(self):
        freqs = np.linspace(0, 25, 251)
        est = SpectrumEstimate(freqs, np.full(251, 3.3), np.zeros(251))
        assert band_power(est, 1.55, 0.1) == pytest.approx(3.3)
        assert band_power(est, 20.0, 5.0) == pytest.approx(3.3)

    def test_band_with_tone_exceeds_neighbor(self):
        acq = AcquisitionParams(
            sample_rate_msps=250.0, samples_per_round=10_000, rounds=20,
            band_center_mhz=81.55, band_width_mhz=0.1, rng_seed=11,
        )
        model = NoiseModel(flat(1.0), electronic_floor=0.0, interference_tones=((80.0, 30.0),))
        est = simulate_spectrum(model, acq)
        assert band_power(est, 80.0, 0.1) > band_power(est, 81.55, 0.1)

    def test_empty_band_rejected(self):
        freqs = np.linspace(0, 25, 26)
        est = SpectrumEstimate(freqs, np.ones(26), np.zeros(26))
        with pytest.raises(ValueError, match="no spectrum bins"):
            band_power(est, 1.55, 0.1)


class TestCalibrate:
    def test_signal_equal_to_snl_gives_unity(self):
        freqs = np.linspace(0, 25, 100)
        snl = SpectrumEstimate(freqs, np.full(100, 1.1), np.zeros(100))
        elec = SpectrumEstimate(freqs, np.full(100, 0.1), np.zeros(100))
        out = calibrate(snl, snl, elec)
        assert np.allclose(out.psd, 1.0, atol=1e-12)
        assert out.normalization == "corrected"
        assert not out.clipped

    def test_signal_at_electronic_floor_clips(self):
        freqs = np.linspace(0, 25, 100)
        snl = SpectrumEstimate(freqs, np.full(100, 1.1), np.zeros(100))
        elec = SpectrumEstimate(freqs, np.full(100, 0.1), np.zeros(100))
        out = calibrate(elec, snl, elec)
        assert out.clipped
        assert np.all(out.psd > 0)
        assert np.all(out.psd <= 1e-15)

    def test_snl_below_floor_rejected(self):
        freqs = np.linspace(0, 25, 100)
        snl = SpectrumEstimate(freqs, np.full(100, 0.05), np.zeros(100))
        elec = SpectrumEstimate(freqs, np.full(100, 0.1), np.zeros(100))
        with pytest.raises(ValueError, match="calibration"):
            calibrate(snl, snl, elec)

    def test_mismatched_grids_rejected(self):
        a = SpectrumEstimate(np.linspace(0, 25, 100), np.ones(100), np.zeros(100))
        b = SpectrumEstimate(np.linspace(0, 50, 100), np.ones(100), np.zeros(100))
        with pytest.raises(ValueError, match="grid"):
            calibrate(a, a, b)

    def test_recovers_injected_flat_level(self):
        # -3.47 dB injected model with the SNL 10 dB above the electronic floor
        target_db = -3.47
        acq = AcquisitionParams(
            sample_rate_msps=50.0, samples_per_round=8192, rounds=400,
            band_center_mhz=10.0, band_width_mhz=6.0, rng_seed=21,
        )
        floor = 0.1
        signal = simulate_spectrum(NoiseModel(flat(undb(target_db)), floor), acq, stream=10)
        snl = simulate_spectrum(NoiseModel(flat(1.0), floor), acq, stream=11)
        elec = simulate_spectrum(NoiseModel(None, floor), acq, stream=12)
        corrected = calibrate(signal, snl, elec)
        got_db = 10 * np.log10(band_power(corrected, 10.0, 6.0))
        assert got_db == pytest.approx(target_db, abs=0.1)

    def test_recovers_squeezed_branch_model(self):
        # band value at 1.55 MHz within 0.1 dB of the analytic -3.177 dB point
        curve = symmetric_sideband_noise(OpoParams(450.0), 0.708, 0.0, np.deg2rad(6.0))
        acq = AcquisitionParams(
            sample_rate_msps=50.0, samples_per_round=50_000, rounds=200,
            band_center_mhz=1.55, band_width_mhz=0.1, rng_seed=8,
        )
        est = simulate_spectrum(NoiseModel(curve, electronic_floor=0.0), acq)
        got_db = 10 * np.log10(band_power(est, 1.55, 0.1))
        assert got_db == pytest.approx(-3.1773469774916565, abs=0.1)

    def test_normalize_to_snl(self):
        freqs = np.linspace(0, 25, 50)
        signal = SpectrumEstimate(freqs, np.full(50, 0.55), np.zeros(50))
        snl = SpectrumEstimate(freqs, np.full(50, 1.1), np.zeros(50))
        out = normalize_to_snl(signal, snl)
        assert np.allclose(out.psd, 0.5, atol=1e-12)
        assert out.normalization == "snl_normalized"


class TestCsv:
    def test_round_trip_is_bit_exact(self):
        est = simulate_spectrum(NoiseModel(flat(0.9), 0.1), SMALL)
        text = spectrum_to_csv(est)
        parsed = spectrum_from_csv(text)
        assert np.array_equal(parsed.freqs_mhz, est.freqs_mhz)
        assert np.array_equal(parsed.psd, est.psd)
        assert np.array_equal(parsed.stderr, est.stderr)
        assert spectrum_to_csv(parsed) == text

    def test_header_enforced(self):
        with pytest.raises(ValueError, match="header"):
            spectrum_from_csv("nope\n1,2,3,4\n")

    def test_zero_psd_serializes_as_minus_inf_db(self):
        est = SpectrumEstimate(np.array([0.0, 1.0]), np.array([0.0, 1.0]), np.zeros(2))
        text = spectrum_to_csv(est)
        assert "-inf" in text.splitlines()[1]
