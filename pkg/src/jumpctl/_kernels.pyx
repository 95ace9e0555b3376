# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels; same contracts as jumpctl._kernels_py."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def gamma0_transitions(object offsets_o, object s_o, object disc_o, object det_o):
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_o, dtype=np.int64)
    cdef double[::1] s = np.ascontiguousarray(s_o, dtype=np.float64)
    cdef double[::1] disc = np.ascontiguousarray(disc_o, dtype=np.float64)
    cdef double[::1] det = np.ascontiguousarray(det_o, dtype=np.float64)
    cdef Py_ssize_t n = offsets.shape[0] - 1
    cdef Py_ssize_t total = s.shape[0]

    init = np.zeros(3)
    thr_arr = np.empty(total, dtype=np.float64)
    dlt_arr = np.empty((total, 3), dtype=np.float64)
    cdef double[::1] init_v = init
    cdef double[::1] thr = thr_arr
    cdef double[:, ::1] dlt = dlt_arr

    cdef Py_ssize_t i, j, a, b, A, k, nk, nrec, jn
    cdef double mx, ce, ces, ced, ne, nes, ned
    cdef Py_ssize_t[::1] recs = np.empty(total if total else 1, dtype=np.intp)
    cdef Py_ssize_t out = 0

    for i in range(n):
        a = offsets[i]
        b = offsets[i + 1]
        A = -1
        for j in range(a, b):
            if det[j] != 0.0 and s[j] >= 0.0:
                A = j
                break
        nrec = 0
        mx = 0.0
        for j in range(a, b if A < 0 else A):
            if s[j] > mx:
                mx = s[j]
                recs[nrec] = j
                nrec += 1
        if nrec > 0:
            j = recs[0]
            ce = disc[j]; ces = disc[j] * s[j]; ced = disc[j] * det[j]
        elif A >= 0:
            ce = disc[A]; ces = disc[A] * s[A]; ced = disc[A] * det[A]
        else:
            ce = 0.0; ces = 0.0; ced = 0.0
        init_v[0] += ce; init_v[1] += ces; init_v[2] += ced
        for k in range(nrec):
            j = recs[k]
            if k + 1 < nrec:
                jn = recs[k + 1]
                ne = disc[jn]; nes = disc[jn] * s[jn]; ned = disc[jn] * det[jn]
            elif A >= 0:
                ne = disc[A]; nes = disc[A] * s[A]; ned = disc[A] * det[A]
            else:
                ne = 0.0; nes = 0.0; ned = 0.0
            thr[out] = s[j]
            dlt[out, 0] = ne - ce; dlt[out, 1] = nes - ces; dlt[out, 2] = ned - ced
            out += 1
            ce = ne; ces = nes; ced = ned
    return init, thr_arr[:out].copy(), dlt_arr[:out].copy()


def gamma1_transitions(object offsets_o, object s_o, object disc_o, object det_o):
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_o, dtype=np.int64)
    cdef double[::1] s = np.ascontiguousarray(s_o, dtype=np.float64)
    cdef double[::1] disc = np.ascontiguousarray(disc_o, dtype=np.float64)
    cdef double[::1] det = np.ascontiguousarray(det_o, dtype=np.float64)
    cdef Py_ssize_t n = offsets.shape[0] - 1
    cdef Py_ssize_t total = s.shape[0]

    init = np.zeros(3)
    thr_arr = np.empty(total, dtype=np.float64)
    dlt_arr = np.empty((total, 3), dtype=np.float64)
    cdef double[::1] init_v = init
    cdef double[::1] thr = thr_arr
    cdef double[:, ::1] dlt = dlt_arr

    cdef Py_ssize_t i, j, a, b, Z, k, nrec
    cdef double mx, ce, ces, ced, ne, nes, ned
    cdef Py_ssize_t[::1] recs = np.empty(total if total else 1, dtype=np.intp)
    cdef Py_ssize_t out = 0

    for i in range(n):
        a = offsets[i]
        b = offsets[i + 1]
        Z = -1
        for j in range(a, b):
            if s[j] >= 0.0:
                Z = j
                break
        nrec = 0
        mx = -np.inf
        for j in range(a, b if Z < 0 else Z):
            if det[j] != 0.0 and s[j] > mx:
                mx = s[j]
                recs[nrec] = j
                nrec += 1
        if Z >= 0:
            ce = disc[Z]; ces = disc[Z] * s[Z]; ced = disc[Z] * det[Z]
        else:
            ce = 0.0; ces = 0.0; ced = 0.0
        init_v[0] += ce; init_v[1] += ces; init_v[2] += ced
        for k in range(nrec - 1, -1, -1):
            j = recs[k]
            ne = disc[j]; nes = disc[j] * s[j]; ned = disc[j] * det[j]
            thr[out] = s[j]
            dlt[out, 0] = ne - ce; dlt[out, 1] = nes - ces; dlt[out, 2] = ned - ced
            out += 1
            ce = ne; ces = nes; ced = ned
    return init, thr_arr[:out].copy(), dlt_arr[:out].copy()


def hitting_samples(object offsets_o, object s_o, object disc_o, object det_o,
                    double gamma0, double gamma1):
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_o, dtype=np.int64)
    cdef double[::1] s = np.ascontiguousarray(s_o, dtype=np.float64)
    cdef double[::1] disc = np.ascontiguousarray(disc_o, dtype=np.float64)
    cdef double[::1] det = np.ascontiguousarray(det_o, dtype=np.float64)
    cdef Py_ssize_t n = offsets.shape[0] - 1

    out_arr = np.zeros((n, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, a, b
    for i in range(n):
        a = offsets[i]
        b = offsets[i + 1]
        for j in range(a, b):
            if s[j] >= gamma0 or (det[j] != 0.0 and s[j] >= gamma1):
                out[i, 0] = disc[j]
                out[i, 1] = disc[j] * s[j]
                out[i, 2] = disc[j] * det[j]
                break
    return out_arr


def runsup_weights(object offsets_o, object s_o, object disc_o):
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_o, dtype=np.int64)
    cdef double[::1] s = np.ascontiguousarray(s_o, dtype=np.float64)
    cdef double[::1] disc = np.ascontiguousarray(disc_o, dtype=np.float64)
    cdef Py_ssize_t n = offsets.shape[0] - 1

    out_arr = np.zeros((n, 2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double run, acc_n, acc_d
    for i in range(n):
        run = 0.0
        acc_n = 0.0
        acc_d = 0.0
        for j in range(offsets[i], offsets[i + 1]):
            acc_n += disc[j] * run
            acc_d += disc[j]
            if s[j] > run:
                run = s[j]
        out[i, 0] = acc_n
        out[i, 1] = acc_d
    return out_arr


def path_levels(object offsets_o, object lat_o, object lrt_o, double l0, double c0):
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_o, dtype=np.int64)
    cdef double[::1] lat = np.ascontiguousarray(lat_o, dtype=np.float64)
    cdef double[::1] lrt = np.ascontiguousarray(lrt_o, dtype=np.float64)
    cdef Py_ssize_t n = offsets.shape[0] - 1

    start_arr = np.empty(n, dtype=np.float64)
    cat_arr = np.empty(lat.shape[0], dtype=np.float64)
    crt_arr = np.empty(lat.shape[0], dtype=np.float64)
    cdef double[::1] start = start_arr
    cdef double[::1] cat = cat_arr
    cdef double[::1] crt = crt_arr
    cdef Py_ssize_t i, j
    cdef double run
    for i in range(n):
        run = c0 if l0 < c0 else l0
        start[i] = run
        for j in range(offsets[i], offsets[i + 1]):
            if lat[j] > run:
                run = lat[j]
            cat[j] = run
            if lrt[j] > run:
                run = lrt[j]
            crt[j] = run
    return start_arr, cat_arr, crt_arr


def path_values(object offsets_o, object disc_o, object lat_o, object lrt_o,
                object proj_at_o, object proj_rt_o,
                double l0, double c0, double p0):
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_o, dtype=np.int64)
    cdef double[::1] disc = np.ascontiguousarray(disc_o, dtype=np.float64)
    cdef double[::1] lat = np.ascontiguousarray(lat_o, dtype=np.float64)
    cdef double[::1] lrt = np.ascontiguousarray(lrt_o, dtype=np.float64)
    cdef double[::1] proj_at = np.ascontiguousarray(proj_at_o, dtype=np.float64)
    cdef double[::1] proj_rt = np.ascontiguousarray(proj_rt_o, dtype=np.float64)
    cdef Py_ssize_t n = offsets.shape[0] - 1

    out_arr = np.zeros((n, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double run, reward, risk, closed, cat, crt
    for i in range(n):
        run = c0 if l0 < c0 else l0
        reward = (run - c0) * p0
        risk = 0.0
        closed = 0.0
        for j in range(offsets[i], offsets[i + 1]):
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
    return out_arr
