"""Synapse matrix: address-matched event delivery, causal correlation
sensors and column-parallel digitization.

Every synapse stores a 6-bit weight and a 6-bit address in 8-bit local
memory. An event arriving on a row contributes current only through the
synapses whose stored address equals the event address exactly. Each
synapse additionally integrates a causal correlation trace: a post-synaptic
spike at time t_post adds a_plus * exp(-(t_post - t_pre)/tau_plus) for the
most recent matching pre-synaptic event, the stored value leaks towards
zero with tau_leak and saturates at trace_saturation. Readout quantizes
traces to cadc_bits codes (round half up) and is non-destructive; clearing
is an explicit row operation.
"""

import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import AddressingError, OrderingError

WEIGHT_MAX = 63
ADDRESS_MAX = 63

EXCITATORY = 1
INHIBITORY = -1


@dataclass
class Synapse:
    """Single-synapse view, mostly for inspection and tests."""

    weight: int
    address: int
    trace: float = 0.0
    last_pre: float = math.nan


class SynapseArray:
    """rows x cols synapse grid with one sign per row."""

    def __init__(
        self,
        rows: int,
        cols: int,
        row_signs: Sequence[int] = None,
        i_unit: float = 1e-9,
        a_plus: float = 0.25,
        tau_plus: float = 20e-6,
        tau_leak: float = math.inf,
        trace_saturation: float = 1.0,
        cadc_bits: int = 8,
    ):
        if rows <= 0 or cols <= 0:
            raise ValueError("geometry must be positive")
        if row_signs is None:
            row_signs = [EXCITATORY] * rows
        row_signs = np.asarray(row_signs, dtype=np.int8)
        if row_signs.shape != (rows,) or not set(np.unique(row_signs)) <= {-1, 1}:
            raise ValueError("row_signs must assign +1 or -1 to every row")
        if trace_saturation <= 0 or a_plus < 0 or tau_plus <= 0 or tau_leak <= 0:
            raise ValueError("invalid trace parameters")

        self.rows = rows
        self.cols = cols
        self.row_sign = row_signs
        self.i_unit = i_unit
        self.a_plus = a_plus
        self.tau_plus = tau_plus
        self.tau_leak = tau_leak
        self.trace_saturation = trace_saturation
        self.cadc_bits = cadc_bits

        # 8-bit storage per synapse; weight occupies the lower 6 bits
        self.weight = np.zeros((rows, cols), dtype=np.uint8)
        self.address = np.zeros((rows, cols), dtype=np.uint8)
        self.trace = np.zeros((rows, cols))
        self.last_pre = np.full((rows, cols), math.nan)
        self._trace_time = np.zeros((rows, cols))

    # -- addressing ------------------------------------------------------

    def _check_row(self, row: int):
        if not 0 <= row < self.rows:
            raise AddressingError(f"row {row} outside 0..{self.rows - 1}")

    def get_synapse(self, row: int, col: int) -> Synapse:
        self._check_row(row)
        return Synapse(
            weight=int(self.weight[row, col]),
            address=int(self.address[row, col]),
            trace=float(self.trace[row, col]),
            last_pre=float(self.last_pre[row, col]),
        )

    def set_row_weights(self, row: int, weights: Sequence[int]):
        self._check_row(row)
        w = np.asarray(weights, dtype=np.int64)
        if w.shape != (self.cols,):
            raise ValueError(f"expected {self.cols} weights")
        if w.min() < 0 or w.max() > WEIGHT_MAX:
            raise ValueError("weights outside 0..63")
        self.weight[row, :] = w.astype(np.uint8)

    def get_row_weights(self, row: int) -> np.ndarray:
        self._check_row(row)
        return self.weight[row, :].astype(np.int64)

    def set_row_addresses(self, row: int, addresses: Sequence[int]):
        self._check_row(row)
        a = np.asarray(addresses, dtype=np.int64)
        if a.shape != (self.cols,):
            raise ValueError(f"expected {self.cols} addresses")
        if a.min() < 0 or a.max() > ADDRESS_MAX:
            raise ValueError("addresses outside 0..63")
        self.address[row, :] = a.astype(np.uint8)

    # -- event path ------------------------------------------------------

    def deliver(
        self, row: int, event_address: int, efficacy_scale: float, t: float
    ) -> np.ndarray:
        """Convert one accepted row event into per-column current
        contributions (signed by the row) and mark the pre-event time on the
        matching synapses."""

        self._check_row(row)
        if not 0 <= event_address <= ADDRESS_MAX:
            raise AddressingError(f"event address {event_address} outside 6-bit range")
        matched = self.address[row, :] == event_address
        contributions = np.where(
            matched,
            float(self.row_sign[row])
            * self.weight[row, :]
            * efficacy_scale
            * self.i_unit,
            0.0,
        )
        self.last_pre[row, matched] = t
        return contributions

    # -- correlation sensors ---------------------------------------------

    def _decay_to(self, index, t):
        elapsed = t - self._trace_time[index]
        if np.any(elapsed < 0):
            raise OrderingError("trace access went backwards in time")
        if math.isfinite(self.tau_leak):
            self.trace[index] *= np.exp(-elapsed / self.tau_leak)
        self._trace_time[index] = t

    def update_traces(self, post_spikes: Iterable[Tuple[float, int]]):
        """Apply post-synaptic spikes to the correlation sensors.

        ``post_spikes`` is an iterable of (time, column) pairs; they are
        processed in time order. Each spike adds the causal kernel value for
        every synapse of the column with a recorded pre-event not later than
        the spike. Saturation is silent by design; leak decay between events
        is applied lazily on access.
        """

        for t_post, col in sorted(post_spikes):
            if not 0 <= col < self.cols:
                raise AddressingError(f"column {col} outside 0..{self.cols - 1}")
            self._decay_to((slice(None), col), t_post)
            last = self.last_pre[:, col]
            eligible = np.isfinite(last) & (last <= t_post)
            increment = np.where(
                eligible, self.a_plus * np.exp(-(t_post - last) / self.tau_plus), 0.0
            )
            self.trace[:, col] = np.minimum(
                self.trace[:, col] + increment, self.trace_saturation
            )

    def cadc_read(self, row: int, t: float) -> np.ndarray:
        """Digitize the row's traces at time ``t`` (non-destructive).

        code = round_half_up(trace / trace_saturation * (2**cadc_bits - 1))
        """

        self._check_row(row)
        self._decay_to((row, slice(None)), t)
        full_scale = (1 << self.cadc_bits) - 1
        codes = np.floor(self.trace[row, :] / self.trace_saturation * full_scale + 0.5)
        return np.clip(codes, 0, full_scale).astype(np.int64)

    def codes_to_trace(self, codes: np.ndarray) -> np.ndarray:
        """Rescale digitized codes back to analog trace units."""
        full_scale = (1 << self.cadc_bits) - 1
        return np.asarray(codes, dtype=float) / full_scale * self.trace_saturation

    def reset_row_traces(self, row: int):
        """Explicit trace clear for one row (readout stays non-destructive)."""
        self._check_row(row)
        self.trace[row, :] = 0.0

    # -- CSV interfaces ----------------------------------------------------

    def weights_to_csv(self) -> str:
        buf = io.StringIO()
        for r in range(self.rows):
            buf.write(",".join(str(int(x)) for x in self.weight[r, :]))
            buf.write("\n")
        return buf.getvalue()

    def weights_from_csv(self, text: str):
        rows = [line for line in text.splitlines() if line.strip()]
        if len(rows) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(rows)}")
        for r, line in enumerate(rows):
            values = [int(x) for x in line.split(",")]
            self.set_row_weights(r, values)

    def traces_to_csv(self) -> str:
        buf = io.StringIO()
        for r in range(self.rows):
            buf.write(",".join(repr(float(x)) for x in self.trace[r, :]))
            buf.write("\n")
        return buf.getvalue()
