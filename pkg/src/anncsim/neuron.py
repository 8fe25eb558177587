"""Adaptive-exponential integrate-and-fire neurons on a fixed time grid.

The membrane follows

    C dV/dt = -g_L (V - E_L) + g_L Delta_T exp((V - V_T) / Delta_T) - w + I
    tau_w dw/dt = a (V - E_L) - w

with a hard spiking threshold V_th, reset to V_reset, a refractory clamp
and the spike-triggered adaptation increment w <- w + b. Integration uses
exponential Euler on the linear leak and adaptation parts (exact for the
LIF limit under piecewise-constant input) and an explicit step for the
exponential term. Delta_T = 0 disables the exponential term entirely.

Digitization of spikes happens in a per-group backend: a priority encoder
releases at most one event per group and time step, lower neuron index
first; concurrent losers stay latched for later steps.
"""

import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import IntegrationOverflowError
from .kernel import get_backend

EXP_ARG_CAP = 700.0  # keeps exp() finite for unbounded-threshold neurons


@dataclass(frozen=True)
class NeuronParams:
    """Model constants of one neuron.

    Units are a self-consistent volt/ampere/second system; the hardware they
    describe runs accelerated, so defaults use microsecond-scale time
    constants. Values are artifact defaults, not measured device figures.
    """

    c_m: float = 2e-10
    g_l: float = 1e-5
    e_l: float = -0.065
    v_t: float = -0.050
    delta_t: float = 0.0
    a: float = 0.0
    b: float = 0.0
    tau_w: float = 100e-6
    v_th: float = -0.040
    v_reset: float = -0.070
    tau_ref: float = 2e-6

    def __post_init__(self):
        if self.c_m <= 0:
            raise ValueError("c_m must be positive")
        if self.g_l < 0:
            raise ValueError("g_l must be non-negative")
        if self.tau_w <= 0:
            raise ValueError("tau_w must be positive")
        if self.delta_t < 0:
            raise ValueError("delta_t must be non-negative")
        if self.tau_ref < 0:
            raise ValueError("tau_ref must be non-negative")

    @property
    def v_ceiling(self) -> float:
        """Divergence ceiling; reaching it triggers the spike path."""
        return self.v_th + 10.0 * self.delta_t


@dataclass
class NeuronState:
    v: float
    w: float = 0.0
    refractory_until: float = -math.inf
    spike_count: int = 0


@dataclass(frozen=True, order=True)
class SpikeEvent:
    time: float
    neuron: int = 0


def step(
    state: NeuronState,
    params: NeuronParams,
    i_syn: float,
    dt: float,
    t: float,
    neuron: int = 0,
) -> Tuple[NeuronState, Optional[SpikeEvent]]:
    """Advance one neuron by one step of length dt starting at time t.

    Returns the new state and, if the membrane crossed the threshold, a
    spike event stamped t + dt. During the refractory window the membrane
    stays clamped to the reset potential while the adaptation current keeps
    relaxing.
    """

    if dt <= 0:
        raise ValueError("dt must be positive")
    if not (math.isfinite(state.v) and math.isfinite(state.w)):
        raise IntegrationOverflowError(neuron)

    decay_w = math.exp(-dt / params.tau_w)

    if t < state.refractory_until:
        w_inf = params.a * (params.v_reset - params.e_l)
        w_new = w_inf + (state.w - w_inf) * decay_w
        return (
            replace(state, v=params.v_reset, w=w_new),
            None,
        )

    if params.delta_t > 0:
        arg = (state.v - params.v_t) / params.delta_t
        arg_max = (params.v_ceiling - params.v_t) / params.delta_t
        arg = min(arg, arg_max, EXP_ARG_CAP)
        i_exp = params.g_l * params.delta_t * math.exp(arg)
    else:
        i_exp = 0.0

    if params.g_l > 0:
        decay_m = math.exp(-dt * params.g_l / params.c_m)
        v_inf = params.e_l + (i_exp - state.w + i_syn) / params.g_l
        v_new = v_inf + (state.v - v_inf) * decay_m
    else:
        v_new = state.v + dt * (i_exp - state.w + i_syn) / params.c_m

    w_inf = params.a * (state.v - params.e_l)
    w_new = w_inf + (state.w - w_inf) * decay_w

    if not (math.isfinite(v_new) and math.isfinite(w_new)):
        raise IntegrationOverflowError(neuron)

    if v_new >= params.v_th or v_new >= params.v_ceiling:
        return (
            NeuronState(
                v=params.v_reset,
                w=w_new + params.b,
                refractory_until=t + dt + params.tau_ref,
                spike_count=state.spike_count + 1,
            ),
            SpikeEvent(time=t + dt, neuron=neuron),
        )
    return replace(state, v=v_new, w=w_new), None


class NeuronPopulation:
    """Vectorized neuron block stepped by the selected kernel backend.

    Holds the per-neuron parameter arrays plus the live state (membrane,
    adaptation, filtered synaptic current, refractory countdown and rate
    counters). Synaptic input accumulates in ``i_syn`` and decays with
    ``tau_syn`` between steps; ``tau_syn <= 0`` makes each injection last
    exactly one step.
    """

    def __init__(
        self,
        params: Sequence[NeuronParams],
        dt: float,
        tau_syn: float = 0.0,
        backend: str = None,
    ):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.params = list(params)
        self.n = len(self.params)
        self.dt = dt
        self.tau_syn = tau_syn
        self._kernel = get_backend(backend)

        def arr(get):
            return np.array([get(p) for p in self.params], dtype=float)

        self.c_m = arr(lambda p: p.c_m)
        self.g_l = arr(lambda p: p.g_l)
        self.e_l = arr(lambda p: p.e_l)
        self.v_t = arr(lambda p: p.v_t)
        self.delta_t = arr(lambda p: p.delta_t)
        self.a_w = arr(lambda p: p.a)
        self.b_w = arr(lambda p: p.b)
        self.v_th = arr(lambda p: p.v_th)
        self.v_reset = arr(lambda p: p.v_reset)
        self.refrac_steps = np.array(
            [round(p.tau_ref / dt) for p in self.params], dtype=np.int64
        )
        self.decay_m = np.where(
            self.g_l > 0, np.exp(-dt * self.g_l / self.c_m), 1.0
        )
        self.decay_w = np.exp(-dt / arr(lambda p: p.tau_w))
        self.exp_arg_max = np.array(
            [
                min((p.v_ceiling - p.v_t) / p.delta_t, EXP_ARG_CAP)
                if p.delta_t > 0
                else 0.0
                for p in self.params
            ],
            dtype=float,
        )
        self.decay_syn = math.exp(-dt / tau_syn) if tau_syn > 0 else 0.0

        self.v = self.e_l.copy()
        self.w = np.zeros(self.n)
        self.i_syn = np.zeros(self.n)
        self.refrac_left = np.zeros(self.n, dtype=np.int64)
        self.spike_count = np.zeros(self.n, dtype=np.int64)
        self.step_index = 0

    @property
    def backend(self) -> str:
        return self._kernel.BACKEND

    def inject(self, currents: np.ndarray):
        """Add synaptic current contributions (amperes) to the input
        accumulator."""
        self.i_syn += currents

    def advance(self, n_steps: int, i_ext: np.ndarray = None, record: bool = False):
        """Step the population forward and collect threshold crossings.

        Returns (spike_steps, spike_neurons) with absolute step stamps, or
        (spike_steps, spike_neurons, v_rec, w_rec) when recording.
        """

        if i_ext is None:
            i_ext = np.zeros(self.n)
        v_rec = np.empty((n_steps, self.n)) if record else None
        w_rec = np.empty((n_steps, self.n)) if record else None
        spike_steps, spike_neurons = self._kernel.advance(
            self.v,
            self.w,
            self.i_syn,
            self.refrac_left,
            self.spike_count,
            self.c_m,
            self.g_l,
            self.e_l,
            self.v_t,
            self.delta_t,
            self.a_w,
            self.b_w,
            self.v_th,
            self.v_reset,
            self.refrac_steps,
            self.decay_m,
            self.decay_w,
            self.exp_arg_max,
            self.decay_syn,
            self.dt,
            np.ascontiguousarray(i_ext, dtype=float),
            n_steps,
            self.step_index,
            v_rec,
            w_rec,
        )
        self.step_index += n_steps
        if record:
            return spike_steps, spike_neurons, v_rec, w_rec
        return spike_steps, spike_neurons

    def reset_counters(self, neurons=None):
        if neurons is None:
            self.spike_count[:] = 0
        else:
            self.spike_count[neurons] = 0


class SpikeArbiter:
    """Priority-encoder backend digitizing spikes of neuron groups.

    Keeps at most one latched request per neuron; a neuron spiking again
    while still latched loses the event (counted in ``dropped``), as does
    any request beyond the queue depth.
    """

    def __init__(self, group_size: int = 64, queue_depth: int = 64):
        if group_size <= 0:
            raise ValueError("group_size must be positive")
        if queue_depth <= 0:
            raise ValueError("queue_depth must be positive")
        self.group_size = group_size
        self.queue_depth = queue_depth
        self.dropped = 0
        self._pending: Dict[int, Set[int]] = {}

    def push(self, neurons: Sequence[int]):
        """Latch new spike requests arriving in the current step."""
        for n in neurons:
            pending = self._pending.setdefault(n // self.group_size, set())
            if n in pending or len(pending) >= self.queue_depth:
                self.dropped += 1
            else:
                pending.add(n)

    def release(self) -> List[int]:
        """Release one request per group, lowest neuron index first."""
        out = []
        for group in sorted(self._pending):
            pending = self._pending[group]
            if pending:
                winner = min(pending)
                pending.remove(winner)
                out.append(winner)
        self._pending = {g: p for g, p in self._pending.items() if p}
        return sorted(out)

    @property
    def backlog(self) -> int:
        return sum(len(p) for p in self._pending.values())


def arbitrate_spikes(
    events: Sequence[SpikeEvent],
    group_size: int,
    dt: float,
    queue_depth: int = 64,
) -> Tuple[List[SpikeEvent], int]:
    """Arbitrate a full list of spike events sharing the dt time grid.

    Within each neuron group and time step at most one event is released;
    lower index wins and losers move to the following step. Returns the
    released events in time order plus the count of dropped events.
    """

    arbiter = SpikeArbiter(group_size=group_size, queue_depth=queue_depth)
    by_step: Dict[int, List[int]] = {}
    for ev in events:
        by_step.setdefault(round(ev.time / dt), []).append(ev.neuron)

    released: List[SpikeEvent] = []
    if not by_step:
        return released, 0
    step_i = min(by_step)
    last = max(by_step)
    while step_i <= last or arbiter.backlog:
        arbiter.push(sorted(by_step.get(step_i, ())))
        for neuron in arbiter.release():
            released.append(SpikeEvent(time=step_i * dt, neuron=neuron))
        step_i += 1
    return released, arbiter.dropped
