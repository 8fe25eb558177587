"""Synapse drivers: event-bus receive logic and short-term plasticity.

A driver listens on the event-interface bus with a maskable 5-bit row
select. Accepted events are converted to a synaptic efficacy scale through
a depressing resource model: a pool of virtual neurotransmitter resources
is depleted by a fixed utilization per event and recovers exponentially in
between. Device mismatch enters as an additive efficacy offset which a
4-bit calibration code can compensate.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from .errors import FitUnderdeterminedError, OrderingError


@dataclass(frozen=True)
class EventIfWord:
    """One event-interface bus word: 6-bit address, 5-bit row select and
    the two timing flags."""

    address: int
    select: int
    pulse: bool = True
    stable: bool = True

    def __post_init__(self):
        if not 0 <= self.address < 64:
            raise ValueError(f"address {self.address} outside 6-bit range")
        if not 0 <= self.select < 32:
            raise ValueError(f"select {self.select} outside 5-bit range")


@dataclass
class StpDriverState:
    """Per-driver state and configuration.

    ``r_avail`` is the available resource fraction, ``u`` the utilization
    per event and ``tau_rec`` the recovery time constant. ``offset_mismatch``
    models the device-specific efficacy offset; ``calib_code`` subtracts
    ``calib_gain * code - calib_bias`` from the efficacy, with the bias
    centering code 8 at zero correction.
    """

    u: float = 0.4
    tau_rec: float = 200e-3
    offset_mismatch: float = 0.0
    calib_code: int = 8
    calib_gain: float = 0.02
    calib_bias: float = 0.16
    select_mask: int = 0
    row_select: int = 0
    enabled_stp: bool = True
    r_avail: float = 1.0
    last_event_t: float = field(default=-math.inf)

    def __post_init__(self):
        if not 0 < self.u <= 1:
            raise ValueError(f"u={self.u} outside (0, 1]")
        if self.tau_rec <= 0:
            raise ValueError("tau_rec must be positive")
        if not 0 <= self.calib_code <= 15:
            raise ValueError(f"calib_code {self.calib_code} outside 4-bit range")
        if not 0 <= self.r_avail <= 1:
            raise ValueError("r_avail outside [0, 1]")

    @property
    def calib_correction(self) -> float:
        return self.calib_bias - self.calib_gain * self.calib_code

    def reset(self):
        """Return the driver to full recovery (infinite silence)."""
        self.r_avail = 1.0
        self.last_event_t = -math.inf


def match_select(driver: StpDriverState, word: EventIfWord) -> bool:
    """True iff the word's row select matches the driver outside the masked
    (don't-care) bits."""

    care = ~driver.select_mask & 0b11111
    return (word.select & care) == (driver.row_select & care)


def on_event(driver: StpDriverState, t: float) -> float:
    """Process one accepted event at time ``t`` and return the efficacy
    scale applied to the driver's synapse row.

    Resources first recover over the elapsed time, the returned efficacy is
    ``u * r_avail`` (or 1 with the depression bypass) plus the mismatch and
    calibration offsets clamped to >= 0, then the event depletes the pool
    by the utilization fraction.
    """

    if t < driver.last_event_t:
        raise OrderingError(
            f"event at t={t} precedes previous event at t={driver.last_event_t}"
        )
    dt = t - driver.last_event_t
    r = 1.0 - (1.0 - driver.r_avail) * math.exp(-dt / driver.tau_rec)
    base = driver.u * r if driver.enabled_stp else 1.0
    efficacy = base + driver.offset_mismatch + driver.calib_correction
    driver.r_avail = r * (1.0 - driver.u)
    driver.last_event_t = t
    return max(efficacy, 0.0)


def steady_state_amplitude(u: float, tau_rec: float, period: float) -> float:
    """Efficacy the depression converges to under a periodic train,
    excluding offsets: u * (1 - E) / (1 - (1 - u) * E) with
    E = exp(-period / tau_rec)."""

    e = math.exp(-period / tau_rec)
    return u * (1.0 - e) / (1.0 - (1.0 - u) * e)


def amplitude_sequence(
    u: float, tau_rec: float, isi: float, n: int, offset: float = 0.0
) -> np.ndarray:
    """Amplitudes of n equidistant events starting from full recovery."""

    e = math.exp(-isi / tau_rec)
    out = np.empty(n)
    r = 1.0
    for k in range(n):
        out[k] = u * r + offset
        r = 1.0 - (1.0 - r * (1.0 - u)) * e
    return out


@dataclass
class StpFit:
    u: float
    tau_rec: float
    offset: float
    residual: float


def _initial_guess(amps: np.ndarray, isi: float):
    """Closed-form start values from the geometric decay of the first
    amplitudes (Aitken extrapolation for the fixed point)."""

    a1, a2, a3 = amps[0], amps[1], amps[2]
    denom = a1 + a3 - 2.0 * a2
    if abs(denom) < 1e-15:
        return None
    a_inf = (a1 * a3 - a2 * a2) / denom
    rho = (a3 - a2) / (a2 - a1) if a2 != a1 else 0.0
    d = a1 - a_inf
    if not (0.0 < rho < 1.0) or d <= 0.0:
        return None
    # d = u^2 rho / ((1-u)(1-rho)) solved for u
    disc = d * d * (1.0 - rho) ** 2 + 4.0 * rho * d * (1.0 - rho)
    u0 = (-d * (1.0 - rho) + math.sqrt(disc)) / (2.0 * rho)
    if not (0.0 < u0 < 1.0):
        return None
    e0 = rho / (1.0 - u0)
    if not (0.0 < e0 < 1.0):
        return None
    return u0, -isi / math.log(e0), a1 - u0


def extract_stp_params(
    amplitudes: Sequence[float], inter_spike_interval: float
) -> StpFit:
    """Fit (utilization, recovery time constant, additive offset) to the
    amplitude sequence of an equidistant event train.

    Requires at least 3 amplitudes. A flat sequence carries no depression
    signature and raises :class:`FitUnderdeterminedError`.
    """

    amps = np.asarray(amplitudes, dtype=float)
    if amps.size < 3:
        raise ValueError("need at least 3 amplitudes from an equidistant train")
    if inter_spike_interval <= 0:
        raise ValueError("inter_spike_interval must be positive")
    scale = max(1.0, float(np.max(np.abs(amps))))
    if float(np.ptp(amps)) <= 1e-12 * scale:
        raise FitUnderdeterminedError(
            "amplitude sequence is flat; utilization and offset are degenerate"
        )

    isi = inter_spike_interval
    n = amps.size

    def residuals(x):
        u, tau, off = x
        return amplitude_sequence(u, tau, isi, n, off) - amps

    starts = []
    smart = _initial_guess(amps, isi)
    if smart is not None:
        starts.append(smart)
    for u0 in (0.2, 0.5, 0.8):
        for tau0 in (isi / 3.0, isi, 5.0 * isi):
            starts.append((u0, tau0, float(amps.min()) * 0.5))

    best = None
    for x0 in starts:
        try:
            res = least_squares(
                residuals,
                x0=np.array(x0),
                bounds=([1e-9, 1e-12, -np.inf], [1.0, np.inf, np.inf]),
                xtol=1e-15,
                ftol=1e-15,
                gtol=1e-15,
            )
        except ValueError:
            continue
        if best is None or res.cost < best.cost:
            best = res
        if best.cost < 1e-24 * n * scale * scale:
            break
    if best is None:
        raise FitUnderdeterminedError("no fit start point converged")
    u, tau, off = best.x
    residual = math.sqrt(2.0 * best.cost / n)
    return StpFit(u=float(u), tau_rec=float(tau), offset=float(off), residual=residual)
