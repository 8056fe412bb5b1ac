"""Pure-numpy counterparts of ``_kernels``; same contracts, vectorized per layer."""

import numpy as np


def _bridge_weights(lq, jl, jr, n):
    # w[iL, iR, i] proportional to the bridge pmf of Y(i) between iL and iR
    off = n - 1
    i = np.arange(n)
    left = lq[jl][i[None, :] - i[:, None] + off]  # [iL, i]
    right = lq[jr][i[None, :] - i[:, None] + off]  # [i, iR]
    logits = left[:, None, :] + right.T[None, :, :]
    logits -= logits.max(axis=2, keepdims=True)
    w = np.exp(logits)
    return w / w.sum(axis=2, keepdims=True)


def build_layers(lq, plus, minus, ends, h, c, V, S, A, G, GA):
    n = plus.shape[0]
    m = V.shape[2] - 1
    endsum = 0.5 * (ends[:, None] + ends[None, :])
    for j in range(1, m + 1):
        pv_sum = np.zeros((n, n))
        best_q = np.full((n, n), -np.inf)
        best_q_at = np.zeros((n, n), dtype=A.dtype)
        best_gain = np.full((n, n), -np.inf)
        best_gain_at = np.zeros((n, n), dtype=GA.dtype)
        for jl in range(1, j):
            jr = j - jl
            P = _bridge_weights(lq, jl, jr, n)
            pv_sum += np.maximum(P @ plus, P @ minus)
            q = np.einsum("abi,ai->ab", P, V[:, :, jl]) + np.einsum("abi,ib->ab", P, V[:, :, jr]) - c
            g = np.einsum("abi,ai->ab", P, S[:, :, jl]) + np.einsum("abi,ib->ab", P, S[:, :, jr])
            better = q > best_q
            best_q = np.where(better, q, best_q)
            best_q_at[better] = jl
            better = g > best_gain
            best_gain = np.where(better, g, best_gain)
            best_gain_at[better] = jl
        s = h * (endsum + pv_sum)
        S[:, :, j] = s
        split = best_q > s
        V[:, :, j] = np.where(split, best_q, s)
        A[:, :, j] = np.where(split, best_q_at, 0)
        G[:, :, j] = best_gain - s
        GA[:, :, j] = best_gain_at


def draw_index(lq, jl, jr, iL, iR, u, buf=None):
    n = lq.shape[1] // 2 + 1
    i = np.arange(n)
    logits = lq[jl][i - iL + n - 1] + lq[jr][iR - i + n - 1]
    w = np.exp(logits - logits.max())
    cdf = np.cumsum(w)
    return min(int(np.searchsorted(cdf, u * cdf[-1], side="right")), n - 1)


def simulate_tree(actions, S, lq, gap_iL, gap_iR, gap_j, U, reward_out, tau_out):
    for r in range(U.shape[0]):
        stack = [(int(a), int(b), int(c)) for a, b, c in zip(gap_iL, gap_iR, gap_j)][::-1]
        total = 0.0
        t = 0
        while stack:
            iL, iR, j = stack.pop()
            a = int(actions[iL, iR, j])
            if a == 0:
                total += S[iL, iR, j]
                continue
            mid = draw_index(lq, a, j - a, iL, iR, U[r, t])
            t += 1
            stack.append((mid, iR, j - a))
            stack.append((iL, mid, a))
        reward_out[r] = total
        tau_out[r] = t


def simulate_budget(G, GA, S, lq, gap_iL, gap_iR, gap_j, budgets, U, reward_out):
    for r in range(U.shape[0]):
        gaps = [(int(a), int(b), int(c)) for a, b, c in zip(gap_iL, gap_iR, gap_j)]
        for t in range(int(budgets[r])):
            cands = [(G[g], -q) for q, g in enumerate(gaps) if g[2] > 1]
            if not cands:
                break
            at = -max(cands)[1]
            iL, iR, j = gaps[at]
            a = int(GA[iL, iR, j])
            mid = draw_index(lq, a, j - a, iL, iR, U[r, t])
            gaps[at : at + 1] = [(iL, mid, a), (mid, iR, j - a)]
        reward_out[r] = sum(S[g] for g in gaps)
