"""
Monte-Carlo photocurrent synthesis and periodogram-averaged spectral
estimation, mirroring the acquisition pipeline of a sampling scope behind a
balanced detector: repeated fixed-length records, plain FFT periodograms
averaged over rounds, band integration, and shot-noise / electronic-noise
calibration.

Conventions: PSD values are per-frequency-bin in SNL units, so a flat PSD of
1 is white noise of unit sample variance and the estimator is directly
comparable to the analytic noise-power curves.  Synthesis draws independent
Gaussian spectral bins with Hermitian symmetry and amplitude sqrt(PSD),
giving the target spectrum exactly in expectation with no filter transient.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True)
class AcquisitionParams:
    """Scope acquisition settings.

    Defaults follow the sideband measurements: 50 MS/s, 50k samples per
    round, 500 rounds, 0.1 MHz integration bandwidth.  The beat measurement
    raises the rate to 250 MS/s.
    """

    sample_rate_msps: float = 50.0
    samples_per_round: int = 50_000
    rounds: int = 500
    band_center_mhz: float = 1.55
    band_width_mhz: float = 0.1
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.sample_rate_msps <= 0:
            raise ValueError("sample rate must be positive")
        if self.samples_per_round < 2 or self.samples_per_round % 2:
            raise ValueError("samples per round must be an even count >= 2")
        if self.rounds < 1:
            raise ValueError("at least one round required")
        if self.band_width_mhz <= 0:
            raise ValueError("band width must be positive")
        nyquist = self.sample_rate_msps / 2.0
        if self.band_center_mhz + self.band_width_mhz / 2.0 >= nyquist:
            raise ValueError(
                f"analysis band {self.band_center_mhz}+-{self.band_width_mhz/2} MHz "
                f"exceeds the Nyquist frequency {nyquist} MHz"
            )
        if self.band_center_mhz - self.band_width_mhz / 2.0 < 0:
            raise ValueError("analysis band extends below 0 MHz")
        if self.rng_seed < 0:
            raise ValueError("rng seed must be a non-negative integer")

    @property
    def bin_spacing_mhz(self) -> float:
        return self.sample_rate_msps / self.samples_per_round

    @property
    def grid_mhz(self) -> NDArray[np.float64]:
        return np.fft.rfftfreq(self.samples_per_round, d=1.0 / self.sample_rate_msps)


PsdFunction = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True)
class NoiseModel:
    """Target spectrum of one recorded trace.

    ``psd`` maps analysis frequency (MHz) to the optical noise power in SNL
    units (None = no optical signal); ``electronic_floor`` is a flat detector
    noise floor added to every trace; ``interference_tones`` are
    deterministic sinusoids given as (frequency MHz, peak PSD value).
    """

    psd: PsdFunction | None = None
    electronic_floor: float = 0.1
    interference_tones: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.electronic_floor < 0:
            raise ValueError("electronic noise floor must be non-negative")
        for freq, power in self.interference_tones:
            if power < 0:
                raise ValueError(f"tone power at {freq} MHz must be non-negative")

    def target_psd(self, freqs_mhz: NDArray[np.float64]) -> NDArray[np.float64]:
        """Stochastic part of the spectrum (optical + floor, without tones)."""
        total = np.full(freqs_mhz.shape, float(self.electronic_floor))
        if self.psd is not None:
            optical = np.asarray(self.psd(freqs_mhz), dtype=float)
            if optical.shape != freqs_mhz.shape:
                raise ValueError("psd function must return one value per frequency")
            if np.any(optical < 0):
                raise ValueError("target PSD must be non-negative everywhere")
            total = total + optical
        return total


def _round_rng(seed: int, stream: int, round_index: int) -> np.random.Generator:
    # Philox is counter-based: every (seed, stream, round) triple opens an
    # independent, platform-stable sequence.
    ss = np.random.SeedSequence(entropy=(seed, stream, round_index))
    return np.random.Generator(np.random.Philox(ss))


def synthesize_round(
    model: NoiseModel, acq: AcquisitionParams, round_index: int, stream: int = 0
) -> NDArray[np.float64]:
    """One simulated voltage record with the model's spectrum.

    Fully reproducible: the trace is a pure function of
    (acq.rng_seed, stream, round_index).
    """
    if round_index < 0 or stream < 0:
        raise ValueError("round index and stream must be non-negative")
    n = acq.samples_per_round
    freqs = acq.grid_mhz
    target = model.target_psd(freqs)

    rng = _round_rng(acq.rng_seed, stream, round_index)
    re = rng.standard_normal(freqs.size)
    im = rng.standard_normal(freqs.size)
    spectrum = np.sqrt(target * n / 2.0) * (re + 1j * im)
    # DC and Nyquist bins of a real signal are real-valued.
    spectrum[0] = np.sqrt(target[0] * n) * re[0]
    spectrum[-1] = np.sqrt(target[-1] * n) * re[-1]
    trace = np.fft.irfft(spectrum, n=n)

    if model.interference_tones:
        t = np.arange(n) / acq.sample_rate_msps
        nyquist = acq.sample_rate_msps / 2.0
        for freq, power in model.interference_tones:
            if freq >= nyquist:
                raise ValueError(f"tone at {freq} MHz exceeds Nyquist {nyquist} MHz")
            trace = trace + 2.0 * np.sqrt(power / n) * np.cos(2.0 * np.pi * freq * t)
    return trace


@dataclass(frozen=True)
class SpectrumEstimate:
    """Averaged one-sided power spectrum.

    ``psd`` holds the two-sided density values on the non-negative grid;
    ``stderr`` is the per-bin standard error over rounds.  ``normalization``
    is one of 'raw', 'snl_normalized', 'corrected'.
    """

    freqs_mhz: NDArray[np.float64]
    psd: NDArray[np.float64]
    stderr: NDArray[np.float64]
    normalization: str = "raw"
    clipped: bool = False

    def __post_init__(self) -> None:
        freqs = np.asarray(self.freqs_mhz, dtype=float)
        psd = np.asarray(self.psd, dtype=float)
        stderr = np.asarray(self.stderr, dtype=float)
        if not (freqs.shape == psd.shape == stderr.shape) or freqs.ndim != 1:
            raise ValueError("freqs, psd and stderr must be 1-d arrays of equal length")
        for arr in (freqs, psd, stderr):
            arr.flags.writeable = False
        object.__setattr__(self, "freqs_mhz", freqs)
        object.__setattr__(self, "psd", psd)
        object.__setattr__(self, "stderr", stderr)


def periodogram(trace: NDArray[np.float64]) -> NDArray[np.float64]:
    """Rectangular-window periodogram |FFT|^2 / N on the one-sided grid."""
    spectrum = np.fft.rfft(np.asarray(trace, dtype=float))
    return np.abs(spectrum) ** 2 / trace.size


def estimate_spectrum(
    traces: Sequence[NDArray[np.float64]], acq: AcquisitionParams
) -> SpectrumEstimate:
    """Mean periodogram over rounds with round-to-round standard error."""
    traces = list(traces)
    if not traces:
        raise ValueError("at least one trace required")
    lengths = {len(t) for t in traces}
    if lengths != {acq.samples_per_round}:
        raise ValueError(
            f"trace lengths {sorted(lengths)} inconsistent with "
            f"samples_per_round={acq.samples_per_round}"
        )
    grams = np.stack([periodogram(t) for t in traces])
    mean = grams.mean(axis=0)
    if len(traces) > 1:
        stderr = grams.std(axis=0, ddof=1) / np.sqrt(len(traces))
    else:
        stderr = np.zeros_like(mean)
    return SpectrumEstimate(acq.grid_mhz, mean, stderr, normalization="raw")


def simulate_spectrum(
    model: NoiseModel, acq: AcquisitionParams, stream: int = 0
) -> SpectrumEstimate:
    """Synthesize acq.rounds records and average their periodograms.

    Streams one round at a time (memory stays flat at one record) with a
    fixed-order reduction, so the result is deterministic for a given
    (model, acq, stream).
    """
    psd_sum = np.zeros(acq.samples_per_round // 2 + 1)
    psd_sumsq = np.zeros_like(psd_sum)
    for round_index in range(acq.rounds):
        gram = periodogram(synthesize_round(model, acq, round_index, stream=stream))
        psd_sum += gram
        psd_sumsq += gram * gram
    rounds = acq.rounds
    mean = psd_sum / rounds
    if rounds > 1:
        var = np.maximum(psd_sumsq - psd_sum * psd_sum / rounds, 0.0) / (rounds - 1)
        stderr = np.sqrt(var / rounds)
    else:
        stderr = np.zeros_like(mean)
    return SpectrumEstimate(acq.grid_mhz, mean, stderr, normalization="raw")


def mean_power(spec: SpectrumEstimate) -> float:
    """Time-domain mean-square power implied by the one-sided spectrum."""
    n = 2 * (spec.psd.size - 1)
    return float((spec.psd[0] + 2.0 * spec.psd[1:-1].sum() + spec.psd[-1]) / n)


def _band_mask(spec: SpectrumEstimate, center_mhz: float, width_mhz: float):
    lo = center_mhz - width_mhz / 2.0
    hi = center_mhz + width_mhz / 2.0
    pad = 1e-9 * max(1.0, abs(center_mhz))
    mask = (spec.freqs_mhz >= lo - pad) & (spec.freqs_mhz <= hi + pad)
    if not np.any(mask):
        raise ValueError(f"no spectrum bins inside {center_mhz}+-{width_mhz/2} MHz")
    return mask


def band_power(spec: SpectrumEstimate, center_mhz: float, width_mhz: float) -> float:
    """Mean PSD over the bins whose centers fall inside the band."""
    return float(spec.psd[_band_mask(spec, center_mhz, width_mhz)].mean())


def band_power_stderr(spec: SpectrumEstimate, center_mhz: float, width_mhz: float) -> float:
    """Standard error of :func:`band_power` assuming independent bins."""
    err = spec.stderr[_band_mask(spec, center_mhz, width_mhz)]
    return float(np.sqrt(np.sum(err**2)) / err.size)


def _require_common_grid(*spectra: SpectrumEstimate) -> None:
    base = spectra[0].freqs_mhz
    for other in spectra[1:]:
        if other.freqs_mhz.shape != base.shape or not np.array_equal(other.freqs_mhz, base):
            raise ValueError("spectra must share an identical frequency grid")


def normalize_to_snl(signal: SpectrumEstimate, snl: SpectrumEstimate) -> SpectrumEstimate:
    """Bin-wise ratio to the shot-noise trace (no electronic-noise correction)."""
    _require_common_grid(signal, snl)
    if np.any(snl.psd <= 0):
        raise ValueError("shot-noise spectrum must be positive everywhere")
    psd = signal.psd / snl.psd
    stderr = np.sqrt(
        (signal.stderr / snl.psd) ** 2 + (signal.psd * snl.stderr / snl.psd**2) ** 2
    )
    return SpectrumEstimate(signal.freqs_mhz, psd, stderr, normalization="snl_normalized")


def calibrate(
    signal: SpectrumEstimate,
    snl: SpectrumEstimate,
    electronic: SpectrumEstimate,
    clip_floor: float = 1e-15,
) -> SpectrumEstimate:
    """Electronic-noise-corrected, SNL-normalized spectrum.

    corrected = (signal - electronic) / (snl - electronic), bin-wise.  Bins
    where the corrected value is not above ``clip_floor`` are clipped to it
    and the estimate is flagged ``clipped`` (their dB value would diverge).
    """
    _require_common_grid(signal, snl, electronic)
    denom = snl.psd - electronic.psd
    if np.any(denom <= 0):
        bad = int(np.sum(denom <= 0))
        raise ValueError(
            f"shot-noise level does not exceed the electronic floor in {bad} bins; "
            "calibration is undefined"
        )
    numer = signal.psd - electronic.psd
    corrected = numer / denom
    numer_err = np.sqrt(signal.stderr**2 + electronic.stderr**2)
    denom_err = np.sqrt(snl.stderr**2 + electronic.stderr**2)
    stderr = np.sqrt((numer_err / denom) ** 2 + (numer * denom_err / denom**2) ** 2)
    clipped = bool(np.any(corrected <= clip_floor))
    corrected = np.maximum(corrected, clip_floor)
    return SpectrumEstimate(
        signal.freqs_mhz, corrected, stderr, normalization="corrected", clipped=clipped
    )


# ---------------------------------------------------------------------------
# CSV serialization
# ---------------------------------------------------------------------------

CSV_HEADER = "freq_mhz,psd_linear,psd_db,stderr"


def spectrum_to_csv(spec: SpectrumEstimate) -> str:
    """CSV text with header ``freq_mhz,psd_linear,psd_db,stderr``."""
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for freq, psd, err in zip(spec.freqs_mhz, spec.psd, spec.stderr):
        psd_db = float(10.0 * np.log10(psd)) if psd > 0 else float("-inf")
        out.write(f"{float(freq)!r},{float(psd)!r},{psd_db!r},{float(err)!r}\n")
    return out.getvalue()


def spectrum_from_csv(text: str, normalization: str = "raw") -> SpectrumEstimate:
    """Parse the CSV written by :func:`spectrum_to_csv`."""
    lines = [line for line in text.strip().splitlines() if line]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    freqs, psd, stderr = [], [], []
    for line in lines[1:]:
        f, p, _p_db, e = line.split(",")
        freqs.append(float(f))
        psd.append(float(p))
        stderr.append(float(e))
    return SpectrumEstimate(
        np.array(freqs), np.array(psd), np.array(stderr), normalization=normalization
    )
