"""Undirected simple graphs, experiment topologies, and matrix views.

Nodes are labeled 0..n-1. Edges are unordered pairs stored in canonical
order (i < j, sorted lexicographically). The directed pair index lists
both orientations of every edge as two contiguous blocks: first all
(i, j) with i < j in edge order, then all (j, i) in the same edge order.
"""

import numpy as np
import scipy.sparse as sp


class Graph:
    """Immutable undirected simple graph.

    Parameters
    ----------
    n : int
        Number of nodes, >= 1.
    edges : iterable of (i, j)
        Unordered pairs, i != j, no duplicates.
    """

    def __init__(self, n, edges):
        if n < 1:
            raise ValueError("graph needs at least one node, got n=%d" % n)
        canon = []
        seen = set()
        for i, j in edges:
            if i == j:
                raise ValueError("self-loop at node %d" % i)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError("edge (%d, %d) out of range for n=%d" % (i, j, n))
            e = (min(i, j), max(i, j))
            if e in seen:
                raise ValueError("duplicate edge %s" % (e,))
            seen.add(e)
            canon.append(e)
        canon.sort()
        self.n = n
        self.edges = tuple(canon)
        nbrs = [[] for _ in range(n)]
        for i, j in canon:
            nbrs[i].append(j)
            nbrs[j].append(i)
        self.neighbors = tuple(tuple(sorted(v)) for v in nbrs)
        self._adj = None
        self._inc = None

    @property
    def num_edges(self):
        return len(self.edges)

    def degree(self, i):
        return len(self.neighbors[i])

    def edge_index(self):
        """Map {i, j} -> position in the canonical edge order."""
        return {e: k for k, e in enumerate(self.edges)}

    def directed_pairs(self):
        """Both orientations of every edge, (min, max) block first."""
        return tuple([(i, j) for i, j in self.edges]
                     + [(j, i) for i, j in self.edges])

    def directed_index(self):
        """Map ordered pair (i, j) -> position in 0..2|E|-1."""
        return {pair: k for k, pair in enumerate(self.directed_pairs())}

    def adjacency(self):
        """Symmetric 0/1 adjacency matrix as sparse CSR."""
        if self._adj is None:
            rows, cols = [], []
            for i, j in self.edges:
                rows += [i, j]
                cols += [j, i]
            self._adj = sp.csr_matrix(
                (np.ones(len(rows)), (rows, cols)), shape=(self.n, self.n))
        return self._adj

    def incidence(self):
        """n x |E| 0/1 incidence matrix as sparse CSR, canonical edge order."""
        if self._inc is None:
            rows, cols = [], []
            for k, (i, j) in enumerate(self.edges):
                rows += [i, j]
                cols += [k, k]
            self._inc = sp.csr_matrix(
                (np.ones(len(rows)), (rows, cols)),
                shape=(self.n, max(len(self.edges), 0)))
        return self._inc


def star(n):
    """Star graph: node 0 is the hub adjacent to all of 1..n-1."""
    if n < 2:
        raise ValueError("star needs n >= 2, got %d" % n)
    return Graph(n, [(0, j) for j in range(1, n)])


def cycle(n):
    """Cycle graph on n >= 3 nodes."""
    if n < 3:
        raise ValueError("cycle needs n >= 3, got %d" % n)
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    """Path graph on n >= 1 nodes."""
    if n < 1:
        raise ValueError("path needs n >= 1, got %d" % n)
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def clique(n):
    """Complete graph on n >= 1 nodes."""
    if n < 1:
        raise ValueError("clique needs n >= 1, got %d" % n)
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def spider(arms, arm_length):
    """Hub joined to `arms` disjoint paths of `arm_length` nodes each.

    spider(k, 1) is the star on k+1 nodes.
    """
    if arms < 1 or arm_length < 1:
        raise ValueError("spider needs arms >= 1 and arm_length >= 1")
    edges = []
    node = 1
    for _ in range(arms):
        prev = 0
        for _ in range(arm_length):
            edges.append((prev, node))
            prev = node
            node += 1
    return Graph(node, edges)


def erdos_renyi(n, p, seed):
    """Each of the n(n-1)/2 pairs appears independently with probability p.

    Deterministic for a fixed seed (numpy PCG64 stream).
    """
    if not 0 <= p <= 1:
        raise ValueError("edge probability must be in [0, 1], got %r" % p)
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    draws = rng.random(len(pairs))
    return Graph(n, [e for e, u in zip(pairs, draws) if u < p])


def watts_strogatz(n, k, p_rewire, seed):
    """Ring lattice joined to k nearest neighbors, single-pass rewiring.

    Each lattice edge (i, i+lane) is rewired with probability p_rewire by
    replacing its far endpoint with a uniform node, avoiding self-loops
    and duplicates. Edge count is always n*k/2.
    """
    if k % 2 != 0 or k >= n:
        raise ValueError("watts_strogatz needs even k < n, got k=%d n=%d" % (k, n))
    if not 0 <= p_rewire <= 1:
        raise ValueError("rewire probability must be in [0, 1], got %r" % p_rewire)
    rng = np.random.default_rng(seed)
    adj = [set() for _ in range(n)]
    for lane in range(1, k // 2 + 1):
        for i in range(n):
            adj[i].add((i + lane) % n)
            adj[(i + lane) % n].add(i)
    for lane in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + lane) % n
            if j not in adj[i]:
                continue
            if rng.random() < p_rewire:
                candidates = [u for u in range(n) if u != i and u not in adj[i]]
                if not candidates:
                    continue
                u = candidates[rng.integers(len(candidates))]
                adj[i].discard(j)
                adj[j].discard(i)
                adj[i].add(u)
                adj[u].add(i)
    edges = set()
    for i in range(n):
        for j in adj[i]:
            edges.add((min(i, j), max(i, j)))
    return Graph(n, sorted(edges))


def incidence_matrix(g):
    """n x |E| matrix with B[i, e] = 1 iff node i is an endpoint of edge e."""
    return g.incidence()


def lambda_max(g, tol=1e-10, max_iter=2000000):
    """Largest adjacency eigenvalue by shifted power iteration.

    Iterates on A + I (nonnegative with positive diagonal, so the power
    method cannot get stuck on the -lambda branch of bipartite graphs)
    and returns the Rayleigh quotient minus 1 once the relative residual
    ||A v - lam v|| / max(1, lam) drops below tol.
    """
    if g.num_edges == 0:
        return 0.0
    A = g.adjacency()
    v = np.ones(g.n) / np.sqrt(g.n)
    lam = 0.0
    for _ in range(max_iter):
        w = A @ v + v
        nrm = np.linalg.norm(w)
        v = w / nrm
        Av = A @ v
        lam = v @ Av
        if np.linalg.norm(Av - lam * v) <= tol * max(1.0, abs(lam)):
            return float(lam)
    raise RuntimeError("lambda_max power iteration did not converge")


def write_edge_list(g, f):
    """Write the canonical edge-list text format: `n m`, then m lines `i j`."""
    own = isinstance(f, str)
    fh = open(f, "w") if own else f
    try:
        fh.write("%d %d\n" % (g.n, g.num_edges))
        for i, j in g.edges:
            fh.write("%d %d\n" % (i, j))
    finally:
        if own:
            fh.close()


def read_edge_list(f):
    """Read the edge-list text format; rejects duplicates and self-loops."""
    own = isinstance(f, str)
    fh = open(f) if own else f
    try:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("edge list header must be 'n m'")
        n, m = int(header[0]), int(header[1])
        edges = []
        for _ in range(m):
            parts = fh.readline().split()
            if len(parts) != 2:
                raise ValueError("edge line must be 'i j'")
            edges.append((int(parts[0]), int(parts[1])))
        return Graph(n, edges)
    finally:
        if own:
            fh.close()
