# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled population stepping kernel.

Same per-element arithmetic as the pure-Python fallback in _kernel_py;
keep the two in sync. No fused multiply-adds, no fast-math: trace
reproducibility relies on strict IEEE semantics.
"""

from libc.math cimport exp, isfinite

from .errors import IntegrationOverflowError

BACKEND = "ext"


def advance(
    double[::1] v,
    double[::1] w,
    double[::1] i_syn,
    long long[::1] refrac_left,
    long long[::1] spike_count,
    const double[::1] c_m,
    const double[::1] g_l,
    const double[::1] e_l,
    const double[::1] v_t,
    const double[::1] delta_t,
    const double[::1] a_w,
    const double[::1] b_w,
    const double[::1] v_th,
    const double[::1] v_reset,
    const long long[::1] refrac_steps,
    const double[::1] decay_m,
    const double[::1] decay_w,
    const double[::1] exp_arg_max,
    double decay_syn,
    double dt,
    const double[::1] i_ext,
    long long n_steps,
    long long start_step,
    v_rec=None,
    w_rec=None,
):
    """See _kernel_py.advance; identical contract."""

    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i
    cdef long long k
    cdef double i_tot, i_exp, arg, v_inf, w_inf, v_new, w_new
    cdef bint record_v = v_rec is not None
    cdef bint record_w = w_rec is not None
    cdef double[:, ::1] v_rec_mv = v_rec if record_v else None
    cdef double[:, ::1] w_rec_mv = w_rec if record_w else None

    spike_steps = []
    spike_neurons = []

    for k in range(n_steps):
        for i in range(n):
            i_tot = i_syn[i] + i_ext[i]
            if refrac_left[i] > 0:
                refrac_left[i] -= 1
                v[i] = v_reset[i]
                w_inf = a_w[i] * (v_reset[i] - e_l[i])
                w[i] = w_inf + (w[i] - w_inf) * decay_w[i]
            else:
                if delta_t[i] > 0:
                    arg = (v[i] - v_t[i]) / delta_t[i]
                    if arg > exp_arg_max[i]:
                        arg = exp_arg_max[i]
                    i_exp = g_l[i] * delta_t[i] * exp(arg)
                else:
                    i_exp = 0.0
                if g_l[i] > 0:
                    v_inf = e_l[i] + (i_exp - w[i] + i_tot) / g_l[i]
                    v_new = v_inf + (v[i] - v_inf) * decay_m[i]
                else:
                    v_new = v[i] + dt * (i_exp - w[i] + i_tot) / c_m[i]
                w_inf = a_w[i] * (v[i] - e_l[i])
                w_new = w_inf + (w[i] - w_inf) * decay_w[i]
                if not (isfinite(v_new) and isfinite(w_new)):
                    raise IntegrationOverflowError(i)
                if v_new >= v_th[i]:
                    v[i] = v_reset[i]
                    w[i] = w_new + b_w[i]
                    refrac_left[i] = refrac_steps[i]
                    spike_count[i] += 1
                    spike_steps.append(start_step + k + 1)
                    spike_neurons.append(i)
                else:
                    v[i] = v_new
                    w[i] = w_new
            i_syn[i] = i_syn[i] * decay_syn
        if record_v:
            for i in range(n):
                v_rec_mv[k, i] = v[i]
        if record_w:
            for i in range(n):
                w_rec_mv[k, i] = w[i]

    return spike_steps, spike_neurons
