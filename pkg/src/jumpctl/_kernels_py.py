"""Pure-Python/NumPy kernels.

Reference implementations of the hot loops; the Cython module
``jumpctl._kernels`` exposes the same functions compiled.  Keep the two in
lockstep: tests compare them element-wise.

All kernels consume the flat bank layout (``offsets`` delimiting each path's
slice of the event arrays).
"""

from __future__ import annotations

import numpy as np


def gamma0_transitions(offsets, s, disc, det):
    """Sweep data for the undetected-threshold family (threshold on the
    running mark sum, scanned upward from 0).

    Per path, the stopping event as a function of the threshold g0 is
    ``min(A, first event with s >= g0)`` where A is the first detected event
    with nonnegative running sum.  The function of g0 is a step function whose
    jumps sit at the strict running maxima of ``s`` before A.

    Returns (init, thresholds, deltas):
      * init: float[3] -- summed (e, e*s, e*det) contributions at g0 -> 0+
      * thresholds: float[K] ascending per path (concatenated, unsorted
        across paths)
      * deltas: float[K, 3] -- contribution change when g0 crosses above the
        matching threshold
    """
    n = len(offsets) - 1
    init = np.zeros(3)
    thr = []
    dlt = []
    for i in range(n):
        a, b = offsets[i], offsets[i + 1]
        # A: first detected event with s >= 0
        A = -1
        for j in range(a, b):
            if det[j] != 0.0 and s[j] >= 0.0:
                A = j
                break
        # strict running maxima with positive value, before A
        stop = A if A >= 0 else b
        recs = []
        mx = 0.0
        for j in range(a, stop):
            if s[j] > mx:
                mx = s[j]
                recs.append(j)
        if recs:
            j0 = recs[0]
            cur = (disc[j0], disc[j0] * s[j0], disc[j0] * det[j0])
        elif A >= 0:
            cur = (disc[A], disc[A] * s[A], disc[A] * det[A])
        else:
            cur = (0.0, 0.0, 0.0)
        init[0] += cur[0]
        init[1] += cur[1]
        init[2] += cur[2]
        for k, j in enumerate(recs):
            if k + 1 < len(recs):
                jn = recs[k + 1]
                nxt = (disc[jn], disc[jn] * s[jn], disc[jn] * det[jn])
            elif A >= 0:
                nxt = (disc[A], disc[A] * s[A], disc[A] * det[A])
            else:
                nxt = (0.0, 0.0, 0.0)
            thr.append(s[j])
            dlt.append((nxt[0] - cur[0], nxt[1] - cur[1], nxt[2] - cur[2]))
            cur = nxt
    thr_arr = np.array(thr, dtype=np.float64)
    dlt_arr = np.array(dlt, dtype=np.float64).reshape(len(thr), 3)
    return init, thr_arr, dlt_arr


def gamma1_transitions(offsets, s, disc, det):
    """Sweep data for the detected-threshold family (threshold on the
    post-event sum at detected events, scanned downward from 0).

    Per path, the stopping event as a function of the threshold g1 < 0 is
    ``min(Z, first detected event with s >= g1)`` where Z is the first event
    with nonnegative running sum.  Jumps sit at the strict running maxima of
    ``s`` over detected events before Z (all negative values).

    Returns (init, thresholds, deltas): thresholds are the negative crossing
    values; the delta applies once g1 <= threshold.
    """
    n = len(offsets) - 1
    init = np.zeros(3)
    thr = []
    dlt = []
    for i in range(n):
        a, b = offsets[i], offsets[i + 1]
        Z = -1
        for j in range(a, b):
            if s[j] >= 0.0:
                Z = j
                break
        stop = Z if Z >= 0 else b
        recs = []
        mx = -np.inf
        for j in range(a, stop):
            if det[j] != 0.0 and s[j] > mx:
                mx = s[j]
                recs.append(j)
        if Z >= 0:
            cur = (disc[Z], disc[Z] * s[Z], disc[Z] * det[Z])
        else:
            cur = (0.0, 0.0, 0.0)
        init[0] += cur[0]
        init[1] += cur[1]
        init[2] += cur[2]
        # crossing order: largest record first (descending g1)
        for j in reversed(recs):
            nxt = (disc[j], disc[j] * s[j], disc[j] * det[j])
            thr.append(s[j])
            dlt.append((nxt[0] - cur[0], nxt[1] - cur[1], nxt[2] - cur[2]))
            cur = nxt
    thr_arr = np.array(thr, dtype=np.float64)
    dlt_arr = np.array(dlt, dtype=np.float64).reshape(len(thr), 3)
    return init, thr_arr, dlt_arr


def hitting_samples(offsets, s, disc, det, gamma0, gamma1):
    """Per-path stopping contributions for fixed thresholds.

    Stop at the first event with (detected and s >= gamma1) or (s >= gamma0).
    Returns float[n, 3] of (e, e*s, e*detected) per path, zeros when the path
    never stops before the horizon.
    """
    n = len(offsets) - 1
    out = np.zeros((n, 3))
    total = len(s)
    if total == 0:
        return out
    hit = (s >= gamma0) | ((det != 0.0) & (s >= gamma1))
    idx = np.arange(total, dtype=np.int64)
    cand = np.where(hit, idx, total)
    first = np.full(n, total, dtype=np.int64)
    counts = np.diff(offsets)
    nonempty = counts > 0
    if nonempty.any():
        first[nonempty] = np.minimum.reduceat(cand, offsets[:-1][nonempty])
    valid = first < total
    safe = np.minimum(first, total - 1)
    e = np.where(valid, disc[safe], 0.0)
    out[:, 0] = e
    out[:, 1] = e * np.where(valid, s[safe], 0.0)
    out[:, 2] = e * np.where(valid, det[safe], 0.0)
    return out


def runsup_weights(offsets, s, disc):
    """Per-path (sum_k disc_k * max(0, s_1..s_{k-1}), sum_k disc_k).

    The inner max is the running supremum of the pre-event mark sums, used by
    the running-supremum representation of the investment threshold.
    """
    n = len(offsets) - 1
    out = np.zeros((n, 2))
    for i in range(n):
        a, b = offsets[i], offsets[i + 1]
        run = 0.0
        acc_n = 0.0
        acc_d = 0.0
        for j in range(a, b):
            acc_n += disc[j] * run
            acc_d += disc[j]
            if s[j] > run:
                run = s[j]
        out[i, 0] = acc_n
        out[i, 1] = acc_d
    return out


def path_levels(offsets, lat, lrt, l0, c0):
    """Per-event control levels of the running-sup policy.

    Returns (start[n], cat[E], crt[E]): the post-time-0 level per path and
    the instant/post-event levels per event.
    """
    n = len(offsets) - 1
    start = np.empty(n)
    cat = np.empty(len(lat))
    crt = np.empty(len(lat))
    for i in range(n):
        run = c0 if l0 < c0 else l0
        start[i] = run
        for j in range(offsets[i], offsets[i + 1]):
            run = run if lat[j] < run else lat[j]
            cat[j] = run
            run = run if lrt[j] < run else lrt[j]
            crt[j] = run
    return start, cat, crt


def path_values(offsets, disc, lat, lrt, proj_at, proj_rt, l0, c0, p0):
    """Realized reward/risk/dual-form sums of the running-sup control.

    Per path the control starts at c0, jumps at time 0 to max(c0, l0), then
    at each event takes the triple (run, max(run, lat), max(.., lrt)).
    Reward weights the instant move by proj_at and the post-event move by
    proj_rt; risk charges disc * C_at^2 / 2 per event; closed accumulates
    disc * (C_at (C_at - c0) - C_at^2/2).

    Returns float[n, 3] of (reward, risk, closed).
    """
    n = len(offsets) - 1
    out = np.zeros((n, 3))
    for i in range(n):
        a, b = offsets[i], offsets[i + 1]
        run = c0 if l0 < c0 else l0
        reward = (run - c0) * p0
        risk = 0.0
        closed = 0.0
        for j in range(a, b):
            cat = run if lat[j] < run else lat[j]
            reward += (cat - run) * proj_at[j]
            risk += disc[j] * cat * cat * 0.5
            closed += disc[j] * (cat * (cat - c0) - cat * cat * 0.5)
            crt = cat if lrt[j] < cat else lrt[j]
            reward += (crt - cat) * proj_rt[j]
            run = crt
        out[i, 0] = reward
        out[i, 1] = risk
        out[i, 2] = closed
    return out
