# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled telegraph kernels; see _pykernels for the reference semantics."""

from libc.math cimport log1p


def advance(double[::1] up, double[::1] down, long level, double t, double t_end,
            double[::1] uniforms, double[::1] times_out, long[::1] levels_out, Py_ssize_t n_out):
    cdef Py_ssize_t n_levels = up.shape[0]
    cdef Py_ssize_t n_pairs = uniforms.shape[0] // 2
    cdef Py_ssize_t cap = times_out.shape[0]
    cdef Py_ssize_t k = 0, used = 0
    cdef double r_up, r_down, q, t_next
    while used < n_pairs and n_out + k < cap:
        r_up = up[level] if level < n_levels - 1 else 0.0
        r_down = down[level] if level > 0 else 0.0
        q = r_up + r_down
        if q <= 0.0:
            return k, level, t_end, used, True
        t_next = t - log1p(-uniforms[2 * used]) / q
        if t_next >= t_end:
            return k, level, t_end, used + 1, False
        if uniforms[2 * used + 1] * q < r_up:
            level += 1
        else:
            level -= 1
        t = t_next
        times_out[n_out + k] = t
        levels_out[n_out + k] = level
        k += 1
        used += 1
    return k, level, t, used, False


def count(double[::1] times, long[::1] levels, long start_level, double window,
          bint any_pair, bint triple_span):
    cdef Py_ssize_t n = times.shape[0], i
    cdef long long n2 = 0, n3 = 0, s2 = 0, s3 = 0, run2 = 0, run3 = 0
    cdef long step, prev_step = 0, prev_prev_step = 0, prev_level = start_level
    cdef bint hit2, hit3
    for i in range(n):
        step = levels[i] - prev_level
        prev_level = levels[i]
        hit2 = False
        hit3 = False
        if i >= 1 and times[i] - times[i - 1] < window and (any_pair or step == prev_step):
            hit2 = True
            if i >= 2 and (any_pair or step == prev_prev_step):
                if triple_span:
                    hit3 = times[i] - times[i - 2] < window
                else:
                    hit3 = times[i - 1] - times[i - 2] < window
        if hit2:
            n2 += 1
            run2 += 1
        else:
            s2 += run2 * run2
            run2 = 0
        if hit3:
            n3 += 1
            run3 += 1
        else:
            s3 += run3 * run3
            run3 = 0
        prev_prev_step = prev_step
        prev_step = step
    s2 += run2 * run2
    s3 += run3 * run3
    return n2, n3, s2, s3
