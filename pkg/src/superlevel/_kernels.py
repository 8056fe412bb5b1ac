"""Compiled inner loops: the value-table sweep and Monte Carlo policy rollouts.

All kernels work in grid coordinates. ``lq[j, o + n - 1]`` is the log-mass of
an increment of ``o`` y-cells over ``j`` x-steps (see ``prior.increment_table``).
Tables are indexed ``[iL, iR, j]``; action 0 means stop, otherwise the split
offset in x-steps from the left end of the gap.
"""

import numpy as np

from ._accel import njit, prange


@njit(cache=True)
def _bridge_weights(lq, eq, jl, jr, iL, iR, buf):
    """Unnormalized bridge weights into ``buf``; returns their sum.

    Uses the pre-exponentiated rows ``eq`` and falls back to a log-space
    softmax only when the product underflows.
    """
    n = buf.shape[0]
    off = n - 1
    z = 0.0
    for i in range(n):
        w = eq[jl, i - iL + off] * eq[jr, iR - i + off]
        buf[i] = w
        z += w
    if z > 1e-200:
        return z
    mx = -np.inf
    for i in range(n):
        v = lq[jl, i - iL + off] + lq[jr, iR - i + off]
        buf[i] = v
        if v > mx:
            mx = v
    z = 0.0
    for i in range(n):
        buf[i] = np.exp(buf[i] - mx)
        z += buf[i]
    return z


@njit(parallel=True, cache=True)
def build_layers(lq, plus, minus, ends, h, c, V, S, A, G, GA):
    """Fill every layer ``j >= 1`` of the value, stop, action and lookahead tables in place.

    Arrays here are layer-major, ``[j, iL, iR]``; transposed copies keep the
    innermost loop contiguous for both sub-gaps.
    """
    n = plus.shape[0]
    m = V.shape[0] - 1
    eq = np.empty_like(lq)
    for j in range(lq.shape[0]):
        eq[j] = np.exp(lq[j] - lq[j].max())
    Vt = np.zeros_like(V)
    St = np.zeros_like(S)
    for j in range(1, m + 1):
        for iL in prange(n):
            buf = np.empty(n)
            qv = np.empty(max(j - 1, 1))
            for iR in range(n):
                pv_sum = 0.0
                best_gain = -np.inf
                best_gain_at = 0
                for jl in range(1, j):
                    jr = j - jl
                    z = _bridge_weights(lq, eq, jl, jr, iL, iR, buf)
                    ep = 0.0
                    em = 0.0
                    ev = 0.0
                    es = 0.0
                    for i in range(n):
                        w = buf[i]
                        ep += w * plus[i]
                        em += w * minus[i]
                        ev += w * (V[jl, iL, i] + Vt[jr, iR, i])
                        es += w * (S[jl, iL, i] + St[jr, iR, i])
                    pv_sum += max(ep, em) / z
                    qv[jl - 1] = ev / z - c
                    if es / z > best_gain:
                        best_gain = es / z
                        best_gain_at = jl
                s = h * (0.5 * (ends[iL] + ends[iR]) + pv_sum)
                S[j, iL, iR] = s
                best = s
                act = 0
                for jl in range(1, j):
                    if qv[jl - 1] > best:
                        best = qv[jl - 1]
                        act = jl
                V[j, iL, iR] = best
                A[j, iL, iR] = act
                G[j, iL, iR] = best_gain - s
                GA[j, iL, iR] = best_gain_at
        Vt[j] = V[j].T
        St[j] = S[j].T


@njit(cache=True)
def draw_index(lq, jl, jr, iL, iR, u, buf):
    """Inverse-CDF draw from the bridge pmf using the uniform ``u``."""
    n = buf.shape[0]
    off = n - 1
    mx = -np.inf
    for i in range(n):
        v = lq[jl, i - iL + off] + lq[jr, iR - i + off]
        buf[i] = v
        if v > mx:
            mx = v
    z = 0.0
    for i in range(n):
        buf[i] = np.exp(buf[i] - mx)
        z += buf[i]
    target = u * z
    acc = 0.0
    for i in range(n):
        acc += buf[i]
        if acc > target:
            return i
    return n - 1


@njit(parallel=True, cache=True)
def simulate_tree(actions, S, lq, gap_iL, gap_iR, gap_j, U, reward_out, tau_out):
    """Roll out a per-gap stationary policy, gaps processed left to right.

    ``U[r]`` holds the uniforms of replication ``r``; sample ``t`` uses ``U[r, t]``.
    """
    reps = U.shape[0]
    n = S.shape[0]
    ngaps = gap_j.shape[0]
    cap = 1
    for q in range(ngaps):
        cap += gap_j[q]
    for r in prange(reps):
        buf = np.empty(n)
        sL = np.empty(cap, dtype=np.int64)
        sR = np.empty(cap, dtype=np.int64)
        sJ = np.empty(cap, dtype=np.int64)
        top = 0
        for q in range(ngaps - 1, -1, -1):
            sL[top] = gap_iL[q]
            sR[top] = gap_iR[q]
            sJ[top] = gap_j[q]
            top += 1
        total = 0.0
        t = 0
        while top > 0:
            top -= 1
            iL = sL[top]
            iR = sR[top]
            j = sJ[top]
            a = actions[iL, iR, j]
            if a == 0:
                total += S[iL, iR, j]
                continue
            mid = draw_index(lq, a, j - a, iL, iR, U[r, t], buf)
            t += 1
            sL[top] = mid
            sR[top] = iR
            sJ[top] = j - a
            top += 1
            sL[top] = iL
            sR[top] = mid
            sJ[top] = a
            top += 1
        reward_out[r] = total
        tau_out[r] = t


@njit(parallel=True, cache=True)
def simulate_budget(G, GA, S, lq, gap_iL, gap_iR, gap_j, budgets, U, reward_out):
    """Greedy one-step lookahead that takes exactly ``budgets[r]`` samples.

    Each step samples the gap whose best split has the largest expected gain
    in stop reward (leftmost gap on ties), whatever the sign of that gain.
    """
    reps = U.shape[0]
    n = S.shape[0]
    ngaps = gap_j.shape[0]
    for r in prange(reps):
        T = budgets[r]
        cap = ngaps + T
        buf = np.empty(n)
        L = np.empty(cap, dtype=np.int64)
        R = np.empty(cap, dtype=np.int64)
        J = np.empty(cap, dtype=np.int64)
        for q in range(ngaps):
            L[q] = gap_iL[q]
            R[q] = gap_iR[q]
            J[q] = gap_j[q]
        cnt = ngaps
        for t in range(T):
            best = -np.inf
            at = -1
            for q in range(cnt):
                if J[q] > 1 and G[L[q], R[q], J[q]] > best:
                    best = G[L[q], R[q], J[q]]
                    at = q
            if at < 0:
                break
            iL = L[at]
            iR = R[at]
            j = J[at]
            a = GA[iL, iR, j]
            mid = draw_index(lq, a, j - a, iL, iR, U[r, t], buf)
            for q in range(cnt, at + 1, -1):
                L[q] = L[q - 1]
                R[q] = R[q - 1]
                J[q] = J[q - 1]
            R[at] = mid
            J[at] = a
            L[at + 1] = mid
            R[at + 1] = iR
            J[at + 1] = j - a
            cnt += 1
        total = 0.0
        for q in range(cnt):
            total += S[L[q], R[q], J[q]]
        reward_out[r] = total
