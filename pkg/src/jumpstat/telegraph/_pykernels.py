"""Pure-Python telegraph kernels; same semantics as the compiled ones."""

import math


def advance(up, down, level, t, t_end, uniforms, times_out, levels_out, n_out):
    """Run the birth-death chain until ``t_end`` or a buffer runs out.

    ``uniforms`` holds pairs (u_time, u_branch) drawn from [0, 1). The
    holding time is -log(1 - u_time)/q and the step goes up when
    u_branch * q < up[level].

    Returns (n_written, level, t, n_pairs_used, absorbed).
    """
    n_levels = len(up)
    n_pairs = len(uniforms) // 2
    cap = len(times_out)
    k = 0
    used = 0
    while used < n_pairs and n_out + k < cap:
        r_up = up[level] if level < n_levels - 1 else 0.0
        r_down = down[level] if level > 0 else 0.0
        q = r_up + r_down
        if q <= 0.0:
            return k, level, t_end, used, True
        t_next = t - math.log1p(-uniforms[2 * used]) / q
        if t_next >= t_end:
            return k, level, t_end, used + 1, False
        level = level + 1 if uniforms[2 * used + 1] * q < r_up else level - 1
        t = t_next
        times_out[n_out + k] = t
        levels_out[n_out + k] = level
        k += 1
        used += 1
    return k, level, t, used, False


def count(times, levels, start_level, window, any_pair, triple_span):
    """Sliding multi-jump counts.

    Returns (n_double, n_triple, sumsq_double, sumsq_triple); the sums of
    squared cluster sizes feed the compound-Poisson standard errors.
    """
    n = len(times)
    n2 = n3 = 0
    s2 = s3 = 0
    run2 = run3 = 0
    prev_step = 0
    prev_prev_step = 0
    prev_level = start_level
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
