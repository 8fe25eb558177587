"""Pure-Python (numpy) population stepping kernel.

Fallback used when the compiled extension is unavailable or explicitly
deselected. Implements exactly the same per-element arithmetic as the
extension kernel; the only permissible difference is the exp()
implementation (numpy vs libm), which matters solely when Delta_T > 0.
"""

import numpy as np

from .errors import IntegrationOverflowError

BACKEND = "py"


def advance(
    v,
    w,
    i_syn,
    refrac_left,
    spike_count,
    c_m,
    g_l,
    e_l,
    v_t,
    delta_t,
    a_w,
    b_w,
    v_th,
    v_reset,
    refrac_steps,
    decay_m,
    decay_w,
    exp_arg_max,
    decay_syn,
    dt,
    i_ext,
    n_steps,
    start_step,
    v_rec=None,
    w_rec=None,
):
    """Advance the whole population by ``n_steps`` fixed steps in place.

    Returns (spike_steps, spike_neurons) with absolute step stamps; a
    threshold crossing during step k is stamped start_step + k + 1. Raises
    IntegrationOverflowError naming the lowest-index neuron that went
    non-finite.
    """

    spike_steps = []
    spike_neurons = []
    n = v.shape[0]
    has_exp = bool(np.any(delta_t > 0))
    has_integrator = bool(np.any(g_l == 0))

    for k in range(n_steps):
        i_tot = i_syn + i_ext
        active = refrac_left <= 0
        refr = ~active

        i_exp = np.zeros(n)
        if has_exp:
            m = active & (delta_t > 0)
            if m.any():
                arg = np.minimum((v[m] - v_t[m]) / delta_t[m], exp_arg_max[m])
                i_exp[m] = g_l[m] * delta_t[m] * np.exp(arg)

        v_new = v.copy()
        m = active & (g_l > 0)
        if m.any():
            v_inf = e_l[m] + (i_exp[m] - w[m] + i_tot[m]) / g_l[m]
            v_new[m] = v_inf + (v[m] - v_inf) * decay_m[m]
        if has_integrator:
            m = active & (g_l == 0)
            if m.any():
                v_new[m] = v[m] + dt * (i_exp[m] - w[m] + i_tot[m]) / c_m[m]

        w_inf = a_w * (np.where(active, v, v_reset) - e_l)
        w_new = w_inf + (w - w_inf) * decay_w

        bad = ~(np.isfinite(v_new) & np.isfinite(w_new))
        if bad.any():
            raise IntegrationOverflowError(int(np.nonzero(bad)[0][0]))

        spiking = active & (v_new >= v_th)
        v_new[spiking] = v_reset[spiking]
        w_new[spiking] += b_w[spiking]
        v_new[refr] = v_reset[refr]

        v[:] = v_new
        w[:] = w_new
        refrac_left[refr] -= 1
        refrac_left[spiking] = refrac_steps[spiking]
        spike_count[spiking] += 1
        i_syn *= decay_syn

        if spiking.any():
            stamp = start_step + k + 1
            for idx in np.nonzero(spiking)[0]:
                spike_steps.append(stamp)
                spike_neurons.append(int(idx))

        if v_rec is not None:
            v_rec[k, :] = v
        if w_rec is not None:
            w_rec[k, :] = w

    return spike_steps, spike_neurons
