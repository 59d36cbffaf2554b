"""Optional compiled kernels (numba) for the interval type-2 inner loops.

Two entry points: ``km_endpoints`` (batched iterative Karnik-Mendel, used
by the generic reducer) and ``it2_node_eval`` (one fused pass per sample
over grades, firing products, interval consequents, type reduction and the
interval midpoint).  The algorithms match the numpy implementations in
``fuzzy``; rows are independent and scratch buffers are reused, so results
are deterministic.  Everything degrades gracefully to the numpy path when
numba is not importable (or FUZZYTREE_NO_NUMBA is set).
"""

from __future__ import annotations

import math
import os

HAVE_NUMBA = False
if not os.environ.get("FUZZYTREE_NO_NUMBA"):
    try:
        import numpy as np
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        HAVE_NUMBA = False


if HAVE_NUMBA:

    @njit(cache=True, inline="always")
    def _endpoint_sorted(head, tail, bs, chead, chead_b, ctail, ctail_b, M, eps):
        # head carries the firing used before the switch point, tail after;
        # bs is ascending.  Prefix sums make each switch-point pass O(1)
        # after the O(M) count.  Returns the converged weighted mean.
        chead[0] = 0.0
        chead_b[0] = 0.0
        ctail[0] = 0.0
        ctail_b[0] = 0.0
        for i in range(M):
            chead[i + 1] = chead[i] + head[i]
            chead_b[i + 1] = chead_b[i] + head[i] * bs[i]
            ctail[i + 1] = ctail[i] + tail[i]
            ctail_b[i + 1] = ctail_b[i] + tail[i] * bs[i]
        num = 0.0
        den = 0.0
        for i in range(M):
            w = 0.5 * (head[i] + tail[i])
            num += w * bs[i]
            den += w
        y = num / den if den > eps else 0.0
        k_prev = -1
        for _ in range(M):
            k = 0
            for i in range(M):
                if bs[i] <= y:
                    k += 1
            if k < 1:
                k = 1
            if k > M - 1:
                k = M - 1
            num = chead_b[k] + (ctail_b[M] - ctail_b[k])
            den = chead[k] + (ctail[M] - ctail[k])
            y = num / den if den > eps else 0.0
            if k == k_prev:
                break
            k_prev = k
        return y

    @njit(cache=True, inline="always")
    def _km_row(
        f_lower, f_upper, b_lower, b_upper, M,
        idx, bs, head, tail, chead, chead_b, ctail, ctail_b, eps,
    ):
        # One row of the iterative reducer; callers have already handled the
        # all-zero-upper-firing degenerate case.
        if M == 1:
            return b_lower[0], b_upper[0]
        y_l = 0.0
        y_r = 0.0
        for side in range(2):
            b = b_lower if side == 0 else b_upper
            for i in range(M):
                idx[i] = i
            # Stable insertion sort by consequent endpoint (M is tiny).
            for i in range(1, M):
                key = idx[i]
                kb = b[key]
                j = i - 1
                while j >= 0 and b[idx[j]] > kb:
                    idx[j + 1] = idx[j]
                    j -= 1
                idx[j + 1] = key
            if side == 0:
                for i in range(M):
                    bs[i] = b[idx[i]]
                    head[i] = f_upper[idx[i]]
                    tail[i] = f_lower[idx[i]]
                y_l = _endpoint_sorted(
                    head, tail, bs, chead, chead_b, ctail, ctail_b, M, eps
                )
            else:
                for i in range(M):
                    bs[i] = b[idx[i]]
                    head[i] = f_lower[idx[i]]
                    tail[i] = f_upper[idx[i]]
                y_r = _endpoint_sorted(
                    head, tail, bs, chead, chead_b, ctail, ctail_b, M, eps
                )
        return y_l, y_r

    @njit(cache=True)
    def km_endpoints(f_lower, f_upper, b_lower, b_upper, eps):
        K, M = b_lower.shape
        y_l = np.empty(K)
        y_r = np.empty(K)
        idx = np.empty(M, np.int64)
        bs = np.empty(M)
        head = np.empty(M)
        tail = np.empty(M)
        chead = np.empty(M + 1)
        chead_b = np.empty(M + 1)
        ctail = np.empty(M + 1)
        ctail_b = np.empty(M + 1)
        for r in range(K):
            total_upper = 0.0
            for j in range(M):
                total_upper += f_upper[r, j]
            if total_upper < eps:
                y_l[r] = 0.0
                y_r[r] = 0.0
                continue
            y_l[r], y_r[r] = _km_row(
                f_lower[r], f_upper[r], b_lower[r], b_upper[r], M,
                idx, bs, head, tail, chead, chead_b, ctail, ctail_b, eps,
            )
        return y_l, y_r

    @njit(cache=True)
    def it2_node_eval(z, m1, m2, sigma, coeffs, spreads, eps):
        """Fused interval type-2 rule-base evaluation.

        z: (P, N, d) node inputs; m1/m2/sigma: (P, d, 2) memberships;
        coeffs/spreads: (P, R, d+1) consequents with R = 2**d.  Returns the
        (P, N) crisp outputs (type-reduced interval midpoints).
        """
        P, N, d = z.shape
        R = coeffs.shape[1]
        out = np.empty((P, N))
        g_lo = np.empty((d, 2))
        g_hi = np.empty((d, 2))
        f_lo = np.empty(R)
        f_hi = np.empty(R)
        b_lo = np.empty(R)
        b_hi = np.empty(R)
        idx = np.empty(R, np.int64)
        bs = np.empty(R)
        head = np.empty(R)
        tail = np.empty(R)
        chead = np.empty(R + 1)
        chead_b = np.empty(R + 1)
        ctail = np.empty(R + 1)
        ctail_b = np.empty(R + 1)
        for p in range(P):
            for n in range(N):
                for j in range(d):
                    zj = z[p, n, j]
                    for s in range(2):
                        mm1 = m1[p, j, s]
                        mm2 = m2[p, j, s]
                        sg = sigma[p, j, s]
                        if zj <= 0.5 * (mm1 + mm2):
                            t = (zj - mm2) / sg
                        else:
                            t = (zj - mm1) / sg
                        g_lo[j, s] = math.exp(-0.5 * t * t)
                        if zj < mm1:
                            t = (zj - mm1) / sg
                            g_hi[j, s] = math.exp(-0.5 * t * t)
                        elif zj > mm2:
                            t = (zj - mm2) / sg
                            g_hi[j, s] = math.exp(-0.5 * t * t)
                        else:
                            g_hi[j, s] = 1.0
                # Firing products in rule-grid order by in-place doubling.
                f_lo[0] = g_lo[0, 0]
                f_lo[1] = g_lo[0, 1]
                f_hi[0] = g_hi[0, 0]
                f_hi[1] = g_hi[0, 1]
                size = 2
                for j in range(1, d):
                    for r in range(size - 1, -1, -1):
                        a_lo = f_lo[r]
                        a_hi = f_hi[r]
                        f_lo[2 * r] = a_lo * g_lo[j, 0]
                        f_lo[2 * r + 1] = a_lo * g_lo[j, 1]
                        f_hi[2 * r] = a_hi * g_hi[j, 0]
                        f_hi[2 * r + 1] = a_hi * g_hi[j, 1]
                    size *= 2
                total_upper = 0.0
                for r in range(R):
                    total_upper += f_hi[r]
                if total_upper < eps:
                    out[p, n] = 0.0
                    continue
                for r in range(R):
                    lo_v = coeffs[p, r, 0] - spreads[p, r, 0]
                    hi_v = coeffs[p, r, 0] + spreads[p, r, 0]
                    for j in range(d):
                        zj = z[p, n, j]
                        lo_v += (coeffs[p, r, j + 1] - spreads[p, r, j + 1]) * zj
                        hi_v += (coeffs[p, r, j + 1] + spreads[p, r, j + 1]) * zj
                    if lo_v <= hi_v:
                        b_lo[r] = lo_v
                        b_hi[r] = hi_v
                    else:
                        b_lo[r] = hi_v
                        b_hi[r] = lo_v
                y_l, y_r = _km_row(
                    f_lo, f_hi, b_lo, b_hi, R,
                    idx, bs, head, tail, chead, chead_b, ctail, ctail_b, eps,
                )
                out[p, n] = 0.5 * (y_l + y_r)
        return out
