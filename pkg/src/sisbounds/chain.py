"""Exact distribution dynamics on the full 2^n state space.

States are bitmasks with bit i set when node i is infected, so the
all-healthy absorbing state is index 0. Everything here is capped at
n <= 14 because the state space doubles per node.
"""

from collections import namedtuple

import numpy as np

STATE_CAP = 14

ExactMoments = namedtuple("ExactMoments", "p p_edges q_edges")

MixingResult = namedtuple("MixingResult", "t tv")


class ConsistencyError(RuntimeError):
    """Probability mass left the simplex beyond float tolerance."""


_bits_cache = {}


def _bits(n):
    if n not in _bits_cache:
        states = np.arange(1 << n, dtype=np.int64)
        _bits_cache[n] = ((states[:, None] >> np.arange(n)) & 1).astype(float)
    return _bits_cache[n]


def _check_size(g, cap):
    if g.n > cap:
        raise ValueError("exact chain limited to n <= %d nodes, got %d"
                         % (cap, g.n))


def point_dist(n, mask):
    """Distribution concentrated on one bitmask state."""
    if not 0 <= mask < (1 << n):
        raise ValueError("mask %d out of range for n=%d" % (mask, n))
    dist = np.zeros(1 << n)
    dist[mask] = 1.0
    return dist


def all_infected_dist(n):
    return point_dist(n, (1 << n) - 1)


def all_infected_moments(g):
    """Exact moments of the deterministic all-infected start."""
    return ExactMoments(np.ones(g.n), np.ones(g.num_edges),
                        np.zeros(2 * g.num_edges))


def _clean(dist, n):
    dist = np.asarray(dist, dtype=float)
    if dist.shape != (1 << n,):
        raise ValueError("distribution must have length 2^%d, got %s"
                         % (n, dist.shape))
    if dist.min() < -1e-15:
        raise ConsistencyError("negative probability %.3g" % dist.min())
    return np.maximum(dist, 0.0)


def transition_apply(g, params, dist, cap=STATE_CAP):
    """One exact step of the chain applied to a distribution.

    Per state, each infected node recovers independently with
    probability delta and each healthy node with m infected neighbours
    becomes infected with probability 1 - (1-beta)^m. The product
    measure over nodes is expanded one node at a time, so the full
    2^n x 2^n transition matrix is never materialized.
    """
    _check_size(g, cap)
    n = g.n
    dist = _clean(dist, n)
    total_in = dist.sum()
    bits = _bits(n)
    m = bits @ g.adjacency().toarray().astype(float)
    p1 = np.where(bits == 1.0, 1 - params.delta,
                  1 - (1 - params.beta) ** m)
    out = np.zeros(1 << n)
    chunk = 1 << min(n, 10)
    for lo in range(0, 1 << n, chunk):
        hi = min(lo + chunk, 1 << n)
        arr = dist[lo:hi, None].copy()
        for i in range(n):
            q = p1[lo:hi, i][:, None]
            arr = np.concatenate([arr * (1 - q), arr * q], axis=1)
        out += arr.sum(axis=0)
    if abs(out.sum() - total_in) > 1e-12 * max(1.0, total_in):
        raise ConsistencyError("mass drifted from %.17g to %.17g"
                               % (total_in, out.sum()))
    return out


def exact_moments(dist, g):
    """Marginals, both-infected edge moments, and healthy-infected
    directed-pair moments of a distribution."""
    dist = _clean(dist, g.n)
    bits = _bits(g.n)
    p = dist @ bits
    p_edges = np.empty(g.num_edges)
    q_edges = np.empty(2 * g.num_edges)
    pairs = g.directed_pairs()
    for k, (i, j) in enumerate(g.edges):
        p_edges[k] = dist @ (bits[:, i] * bits[:, j])
    for k, (i, j) in enumerate(pairs):
        q_edges[k] = dist @ ((1 - bits[:, i]) * bits[:, j])
    return ExactMoments(p, p_edges, q_edges)


def tv_from_stationary(dist):
    """Total-variation distance to the point mass on all-healthy."""
    return float(1.0 - dist[0])


def mixing_time(g, params, epsilon, t_max=100000, cap=STATE_CAP):
    """Smallest t with tv(t) <= epsilon starting all infected.

    Returns None when the horizon t_max is exhausted first.
    """
    _check_size(g, cap)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1), got %r" % epsilon)
    dist = all_infected_dist(g.n)
    for t in range(1, t_max + 1):
        dist = transition_apply(g, params, dist, cap=cap)
        if tv_from_stationary(dist) <= epsilon:
            return t
    return None


def dist_to_csv(dist, f):
    """Write a distribution as state_bitmask,probability rows."""
    own = isinstance(f, str)
    fh = open(f, "w") if own else f
    try:
        fh.write("state_bitmask,probability\n")
        for s, v in enumerate(dist):
            fh.write("%d,%s\n" % (s, repr(float(v))))
    finally:
        if own:
            fh.close()
