"""
Frequency-domain homodyne detection model.

A balanced detector with its local oscillator at ``lo`` and electronic
analysis frequency ``nu`` reads out the sideband pair at lo +- nu.  The
noise power in SNL units is the phase-weighted sum of the pair's symmetric
and antisymmetric quadrature combinations; vacuum gives exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian_core import (
    GaussianState,
    ModeLabel,
    add_vacuum_modes,
    partial_trace,
    quadrature_variance,
)
from .optics_components import OpoParams, apply_uniform_loss, opo_variances

SQUEEZED = "squeezed"
ANTISQUEEZED = "antisqueezed"


def db(value: float) -> float:
    """Linear power ratio -> dB (10 log10)."""
    if value <= 0:
        raise ValueError(f"dB undefined for non-positive value {value}")
    return 10.0 * math.log10(value)


def undb(value_db: float) -> float:
    """dB -> linear power ratio."""
    return 10.0 ** (value_db / 10.0)


@dataclass(frozen=True)
class HdConfig:
    """Homodyne readout settings.

    ``lo`` is the local-oscillator mode (carrier or the shifted carrier),
    ``theta`` the locked LO phase, ``delta_theta`` a deterministic phase-lock
    offset added to it, ``nu_mhz`` the electronic analysis frequency and
    ``efficiency`` the detection efficiency applied as a loss channel on the
    sideband pair before readout.
    """

    lo: ModeLabel
    theta: float
    nu_mhz: float
    delta_theta: float = 0.0
    efficiency: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError("detection efficiency must be in [0, 1]")
        if self.nu_mhz < 0:
            raise ValueError("analysis frequency must be non-negative")


@dataclass(frozen=True)
class NoisePowerResult:
    """Homodyne noise power with its branch breakdown.

    ``plus_variance`` / ``minus_variance`` are the two sideband-combination
    variances entering with weights cos^2 / sin^2 of the effective phase;
    ``cross_term`` collects X-P cross correlations (zero for the states built
    here); ``vacuum_filled`` lists sideband modes that were absent from the
    input state and entered as vacuum.
    """

    value: float
    value_db: float
    plus_variance: float
    minus_variance: float
    plus_weight: float
    minus_weight: float
    cross_term: float
    vacuum_filled: tuple[ModeLabel, ...]


def hd_noise_power(state: GaussianState, cfg: HdConfig) -> NoisePowerResult:
    """Noise power of the sideband pair at cfg.lo +- cfg.nu, in SNL units.

    Sideband modes missing from the state are treated as vacuum, which is
    exactly the situation of a frequency-shifted state read out with the
    unshifted LO.  Detection efficiency acts as a loss channel before the
    phase-weighted combination variances are formed.
    """
    theta_eff = cfg.theta + cfg.delta_theta
    ct, st = math.cos(theta_eff), math.sin(theta_eff)

    if cfg.nu_mhz == 0:
        # Degenerate readout: the noise power is the single rotated quadrature.
        missing = () if cfg.lo in state.modes else (cfg.lo,)
        work = add_vacuum_modes(state, missing)
        single = apply_uniform_loss(partial_trace(work, (cfg.lo,)), cfg.efficiency)
        c = single.cov
        value = quadrature_variance(single, cfg.lo, theta_eff)
        return NoisePowerResult(
            value=value,
            value_db=db(value),
            plus_variance=float(c[0, 0]),
            minus_variance=float(c[1, 1]),
            plus_weight=ct * ct,
            minus_weight=st * st,
            cross_term=float(2.0 * c[0, 1]),
            vacuum_filled=missing,
        )

    lower = cfg.lo.shifted_mhz(-cfg.nu_mhz)
    upper = cfg.lo.shifted_mhz(cfg.nu_mhz)
    missing = tuple(m for m in (lower, upper) if m not in state.modes)
    work = add_vacuum_modes(state, missing)
    pair = apply_uniform_loss(partial_trace(work, (lower, upper)), cfg.efficiency)
    c = pair.cov  # order: lower (X, P), upper (X, P)

    x_sum = 0.5 * (c[0, 0] + c[2, 2])
    p_sum = 0.5 * (c[1, 1] + c[3, 3])
    var_x_plus = x_sum + c[0, 2]
    var_x_minus = x_sum - c[0, 2]
    var_p_plus = p_sum + c[1, 3]
    var_p_minus = p_sum - c[1, 3]

    plus_variance = 0.5 * (var_x_plus + var_p_minus)
    minus_variance = 0.5 * (var_x_minus + var_p_plus)
    cross_term = float(c[2, 1] + c[0, 3])

    value = ct * ct * plus_variance + st * st * minus_variance + st * ct * cross_term
    return NoisePowerResult(
        value=float(value),
        value_db=db(float(value)),
        plus_variance=float(plus_variance),
        minus_variance=float(minus_variance),
        plus_weight=ct * ct,
        minus_weight=st * st,
        cross_term=cross_term,
        vacuum_filled=missing,
    )


def variance_from_r(r: float, eta: float, branch: str) -> float:
    """Quadrature-combination variance of an effective squeezer of strength r
    seen through efficiency eta: eta * exp(-+2r) + (1 - eta)."""
    if r < 0:
        raise ValueError("squeezing parameter must be non-negative")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("efficiency must be in [0, 1]")
    if branch == SQUEEZED:
        return eta * math.exp(-2.0 * r) + (1.0 - eta)
    if branch == ANTISQUEEZED:
        return eta * math.exp(2.0 * r) + (1.0 - eta)
    raise ValueError(f"branch must be {SQUEEZED!r} or {ANTISQUEEZED!r}, got {branch!r}")


def r_from_antisqueezing(anti_db: float, eta: float) -> float:
    """Effective squeezing parameter from a measured antisqueezing level.

    Inverts the antisqueezed branch of :func:`variance_from_r`; the measured
    linear value must exceed the vacuum admixture floor (1 - eta).
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError("efficiency must be in (0, 1]")
    linear = undb(anti_db)
    excess = linear - (1.0 - eta)
    if excess <= 0:
        raise ValueError(
            f"{anti_db} dB is at or below the vacuum admixture floor "
            f"{db(1.0 - eta):.2f} dB for eta = {eta}; no squeezing parameter fits"
        )
    if linear < 1.0:
        raise ValueError(f"{anti_db} dB is below shot noise; not an antisqueezing level")
    return 0.5 * math.log(excess / eta)


def asymmetric_beat_noise(r: float, eta: float, include_vacuum_half: bool = True) -> float:
    """Phase-insensitive beat noise of one squeezed-pair member plus vacuum.

    When a frequency-shifted pair is read out with the unshifted LO, each
    analysis pair holds one thermal member (variance cosh 2r through
    efficiency eta) and one vacuum mode, each entering with weight 1/2:

        eta/2 * (sinh^2 r + cosh^2 r) + (1 - eta)/2 + 1/2

    The trailing 1/2 is the vacuum member's share, which makes r = 0 return
    exactly 1 (SNL).  ``include_vacuum_half=False`` drops it and returns only
    the populated member's contribution (the excess-noise bookkeeping some
    write-ups quote).
    """
    if r < 0:
        raise ValueError("squeezing parameter must be non-negative")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("efficiency must be in [0, 1]")
    value = (eta / 2.0) * (math.sinh(r) ** 2 + math.cosh(r) ** 2) + (1.0 - eta) / 2.0
    if include_vacuum_half:
        value += 0.5
    return value


# ---------------------------------------------------------------------------
# Analytic noise-power spectra (callables over analysis frequency, SNL units)
# ---------------------------------------------------------------------------

def symmetric_sideband_noise(
    opo: OpoParams, eta: float, theta: float, delta_theta: float = 0.0
):
    """Noise power vs analysis frequency for an LO matched to the state.

    Both sideband members are populated and correlated; the curve is the
    phase-weighted pair of source variances at overall efficiency ``eta``.
    """
    theta_eff = theta + delta_theta
    w_plus = math.cos(theta_eff) ** 2
    w_minus = math.sin(theta_eff) ** 2

    def psd(nu_mhz):
        squeezed, antisqueezed = opo_variances(opo, np.abs(nu_mhz), eta)
        return w_plus * squeezed + w_minus * antisqueezed

    return psd


def shifted_single_sideband_noise(opo: OpoParams, eta: float, shift_mhz: float):
    """Noise power vs analysis frequency for a shifted state and unshifted LO.

    Each analysis pair holds one thermal member of the shifted state (at
    source detuning |nu - shift|) and one vacuum mode; the result is
    phase-insensitive.
    """

    def psd(nu_mhz):
        detuning = np.abs(np.asarray(nu_mhz, dtype=float) - shift_mhz)
        squeezed, antisqueezed = opo_variances(opo, detuning, eta)
        single = (np.asarray(squeezed) + np.asarray(antisqueezed)) / 2.0
        out = (single + 1.0) / 2.0
        if np.isscalar(nu_mhz) or np.ndim(nu_mhz) == 0:
            return float(out)
        return out

    return psd
