"""Monte Carlo simulation of the node-level infection process.

Randomness is counter-based: the uniforms for trajectory j at step t
come from a Philox stream keyed by (seed, j) with the step index in the
top counter word. Results are therefore independent of chunking and of
the order trajectories are advanced, and any (trajectory, step) block
can be regenerated in isolation.
"""

from collections import namedtuple

import numpy as np

_MASK64 = (1 << 64) - 1

McConfig = namedtuple("McConfig", "n_traj t_max seed init")

McEstimate = namedtuple(
    "McEstimate",
    "times mean_infected_fraction stderr n_alive_trajectories "
    "node_freq n_traj n")


def _stream(seed, traj, t):
    key = [int(seed) & _MASK64, int(traj) & _MASK64]
    return np.random.Generator(np.random.Philox(counter=[0, 0, 0, t], key=key))


def _uniforms(seed, traj, t, count):
    return _stream(seed, traj, t).random(count)


def init_state(g, init):
    """Initial infection pattern as a boolean vector.

    Accepts "all", "node:i", an integer bitmask, or a boolean array.
    """
    n = g.n
    if isinstance(init, str):
        if init == "all":
            return np.ones(n, dtype=bool)
        if init.startswith("node:"):
            i = int(init[5:])
            if not 0 <= i < n:
                raise ValueError("node %d out of range for n=%d" % (i, n))
            x = np.zeros(n, dtype=bool)
            x[i] = True
            return x
        raise ValueError("unknown initial condition %r" % init)
    if isinstance(init, (int, np.integer)):
        if not 0 <= init < (1 << n):
            raise ValueError("mask %d out of range for n=%d" % (init, n))
        return np.array([(init >> i) & 1 for i in range(n)], dtype=bool)
    arr = np.asarray(init, dtype=bool)
    if arr.shape != (n,):
        raise ValueError("initial state must have length %d" % n)
    return arr.copy()


def _step_nodewise(g, params, x, u):
    # one uniform per node: infected nodes test recovery against delta,
    # healthy nodes test infection against 1 - (1-beta)^m
    m = g.adjacency() @ x.astype(np.int64)
    p_inf = 1.0 - (1.0 - params.beta) ** m
    return np.where(x, u >= params.delta, u < p_inf)


def _step_edgewise(g, params, x, u_rec, u_edges):
    # one uniform per node for recovery plus one per (node, neighbour
    # slot); a healthy node is infected when any infected neighbour's
    # slot uniform falls below beta
    nxt = np.zeros(g.n, dtype=bool)
    for i in range(g.n):
        if x[i]:
            nxt[i] = u_rec[i] >= params.delta
        else:
            hit = False
            for pos, l in enumerate(g.neighbors[i]):
                if x[l] and u_edges[i, pos] < params.beta:
                    hit = True
                    break
            nxt[i] = hit
    return nxt


def simulate_trajectory(g, params, init, t_max, seed, traj=0, per_edge=False):
    """One trajectory; returns a (t_max+1, n) boolean state history.

    The all-healthy state is absorbing, and no randomness is consumed
    once it is reached.
    """
    if t_max < 0:
        raise ValueError("t_max must be >= 0, got %d" % t_max)
    x = init_state(g, init)
    hist = np.zeros((t_max + 1, g.n), dtype=bool)
    hist[0] = x
    dmax = max((len(nb) for nb in g.neighbors), default=0)
    for t in range(1, t_max + 1):
        if not x.any():
            break
        if per_edge:
            u = _uniforms(seed, traj, t, g.n * (1 + dmax))
            x = _step_edgewise(g, params, x, u[:g.n],
                               u[g.n:].reshape(g.n, dmax) if dmax else
                               np.zeros((g.n, 0)))
        else:
            x = _step_nodewise(g, params, x, _uniforms(seed, traj, t, g.n))
        hist[t] = x
    return hist


def estimate(g, params, cfg, node_freq_times=(), per_edge=False, chunk=256):
    """Aggregate many trajectories into per-step infection statistics.

    Counts are accumulated as integers, so the estimate is exact up to
    the sampled uniforms and identical for any chunk size. node_freq
    maps each requested time to the per-node infection count.
    """
    if cfg.n_traj < 1:
        raise ValueError("n_traj must be >= 1, got %d" % cfg.n_traj)
    if cfg.t_max < 0:
        raise ValueError("t_max must be >= 0, got %d" % cfg.t_max)
    n = g.n
    T = cfg.t_max
    x0 = init_state(g, cfg.init)
    adj = g.adjacency()
    sum_cnt = np.zeros(T + 1, dtype=np.int64)
    sum_sq = np.zeros(T + 1, dtype=np.int64)
    alive = np.zeros(T + 1, dtype=np.int64)
    node_freq_times = tuple(int(t) for t in node_freq_times)
    node_cnt = {t: np.zeros(n, dtype=np.int64) for t in node_freq_times}
    for lo in range(0, cfg.n_traj, chunk):
        hi = min(lo + chunk, cfg.n_traj)
        c = hi - lo
        X = np.tile(x0, (c, 1))
        cnt = X.sum(axis=1)
        sum_cnt[0] += cnt.sum()
        sum_sq[0] += (cnt * cnt).sum()
        alive[0] += int((cnt > 0).sum())
        if 0 in node_cnt:
            node_cnt[0] += X.sum(axis=0)
        for t in range(1, T + 1):
            live = np.flatnonzero(X.any(axis=1))
            if live.size:
                if per_edge:
                    for r in live:
                        j = lo + r
                        dmax = max((len(nb) for nb in g.neighbors), default=0)
                        u = _uniforms(cfg.seed, j, t, n * (1 + dmax))
                        X[r] = _step_edgewise(
                            g, params, X[r], u[:n],
                            u[n:].reshape(n, dmax) if dmax else
                            np.zeros((n, 0)))
                else:
                    U = np.empty((live.size, n))
                    for k, r in enumerate(live):
                        U[k] = _uniforms(cfg.seed, lo + r, t, n)
                    Xl = X[live]
                    m = Xl.astype(np.int64) @ adj.T
                    p_inf = 1.0 - (1.0 - params.beta) ** m
                    X[live] = np.where(Xl, U >= params.delta, U < p_inf)
            cnt = X.sum(axis=1)
            sum_cnt[t] += cnt.sum()
            sum_sq[t] += (cnt * cnt).sum()
            alive[t] += int((cnt > 0).sum())
            if t in node_cnt:
                node_cnt[t] += X.sum(axis=0)
    N = cfg.n_traj
    mean = sum_cnt / (N * n)
    if N > 1:
        var = (sum_sq / (n * n) - N * mean * mean) / (N - 1)
        stderr = np.sqrt(np.maximum(var, 0.0) / N)
    else:
        stderr = np.zeros(T + 1)
    return McEstimate(np.arange(T + 1), mean, stderr, alive,
                      node_cnt, N, n)


def estimate_to_csv(est, f):
    """Write per-step statistics as CSV."""
    own = isinstance(f, str)
    fh = open(f, "w") if own else f
    try:
        fh.write("t,mean_infected_fraction,stderr,n_alive_trajectories\n")
        for t in est.times:
            fh.write("%d,%s,%s,%d\n" % (
                t, repr(float(est.mean_infected_fraction[t])),
                repr(float(est.stderr[t])),
                int(est.n_alive_trajectories[t])))
    finally:
        if own:
            fh.close()
