"""Hot loops for envelope synthesis and streaming crossing statistics.

Every kernel is deterministic: all randomness lives in the caller's
angle and phase draws.  Component phasors advance by a per-step rotation
recurrence and are renormalized to their exact amplitudes on a fixed
schedule, so magnitude error cannot drift over billions of steps.
"""

import math

import numpy as np
from numba import njit

RENORM_EVERY = 65536


@njit(cache=True, nogil=True)
def synth_envelope(re, im, cos_w, sin_w, amp, out):
    """Write |sum_k phasor_k| for consecutive steps into out.

    re/im hold the component phasors at the first output sample and are
    advanced in place, so repeated calls continue the same process.
    """
    n = out.shape[0]
    n_comp = re.shape[0]
    for i in range(n):
        total_re = 0.0
        total_im = 0.0
        for k in range(n_comp):
            r = re[k]
            m = im[k]
            total_re += r
            total_im += m
            re[k] = r * cos_w[k] - m * sin_w[k]
            im[k] = r * sin_w[k] + m * cos_w[k]
        out[i] = math.sqrt(total_re * total_re + total_im * total_im)
        if (i + 1) % RENORM_EVERY == 0:
            for k in range(n_comp):
                mag = math.sqrt(re[k] * re[k] + im[k] * im[k])
                if mag > 0.0:
                    s = amp[k] / mag
                    re[k] *= s
                    im[k] *= s


@njit(cache=True, nogil=True)
def stream_selection_stats(re, im, cos_w, sin_w, amp, n_samples, af_g,
                           ck, zs, n_down, below, dwell, events):
    """Crossing bookkeeping of the selection process without trace storage.

    re/im/cos_w/sin_w/amp are (2M, K) component phasor arrays; hop 2j is
    the source hop of relay j and hop 2j+1 its destination hop.  Grid
    points may mix relaying modes so one pass over the hop processes can
    serve several thresholds, SNRs, and both modes at once: af_g is a
    (G,) bool array selecting the AF selection variable per point, ck a
    (G, M) array of fixed-gain constants (read only where af_g), zs the
    (G,) thresholds.  Accumulated into the int64 (G,) output arrays:

      n_down - downward crossings, w[i-1] > z >= w[i]
      below  - samples with w <= z
      dwell  - samples inside completed below-intervals
      events - completed below-intervals

    A below-interval is completed only when it both starts and ends
    inside the trace; boundary intervals contribute to `below` alone, so
    dwell/events is free of censoring bias.
    """
    n_hops = re.shape[0]
    n_comp = re.shape[1]
    n_grid = zs.shape[0]
    m = n_hops // 2
    any_df = False
    for g in range(n_grid):
        if not af_g[g]:
            any_df = True
    env = np.empty(n_hops)
    prev_below = np.zeros(n_grid, np.bool_)
    counting = np.zeros(n_grid, np.bool_)
    run_len = np.zeros(n_grid, np.int64)
    for i in range(n_samples):
        for h in range(n_hops):
            total_re = 0.0
            total_im = 0.0
            for k in range(n_comp):
                r = re[h, k]
                q = im[h, k]
                total_re += r
                total_im += q
                re[h, k] = r * cos_w[h, k] - q * sin_w[h, k]
                im[h, k] = r * sin_w[h, k] + q * cos_w[h, k]
            env[h] = math.sqrt(total_re * total_re + total_im * total_im)
        if (i + 1) % RENORM_EVERY == 0:
            for h in range(n_hops):
                for k in range(n_comp):
                    mag = math.sqrt(re[h, k] * re[h, k] + im[h, k] * im[h, k])
                    if mag > 0.0:
                        s = amp[h, k] / mag
                        re[h, k] *= s
                        im[h, k] *= s
        df_wmax = 0.0
        if any_df:
            for j in range(m):
                a_s = env[2 * j]
                a_d = env[2 * j + 1]
                w = a_s if a_s < a_d else a_d
                if w > df_wmax:
                    df_wmax = w
        for g in range(n_grid):
            if af_g[g]:
                w_max = 0.0
                for j in range(m):
                    a_d = env[2 * j + 1]
                    w = env[2 * j] * a_d / math.sqrt(ck[g, j] + a_d * a_d)
                    if w > w_max:
                        w_max = w
            else:
                w_max = df_wmax
            is_below = w_max <= zs[g]
            if is_below:
                below[g] += 1
            if i > 0:
                if is_below and not prev_below[g]:
                    n_down[g] += 1
                    counting[g] = True
                    run_len[g] = 0
                elif prev_below[g] and not is_below:
                    if counting[g]:
                        dwell[g] += run_len[g]
                        events[g] += 1
                        counting[g] = False
            if is_below and counting[g]:
                run_len[g] += 1
            prev_below[g] = is_below
