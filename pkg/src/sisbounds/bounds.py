"""The three linear bound operators for SIS marginal dynamics.

M bounds the marginal infection probabilities p(t), M_PRIME bounds the
pair (p, -p_E) where p_E holds the per-edge joint infection
probabilities, and M_DOUBLE_PRIME acts on (p, q_E) where q_E holds both
orientations of P(one endpoint healthy, the other infected).
"""

from collections import namedtuple, deque

import numpy as np
import scipy.sparse as sp
from scipy.optimize import nnls

M = "M"
M_PRIME = "M_PRIME"
M_DOUBLE_PRIME = "M_DOUBLE_PRIME"


class EpidemicParams:
    """Per-link infection probability beta and recovery probability delta."""

    def __init__(self, beta, delta):
        if not 0 <= beta <= 1:
            raise ValueError("beta must be in [0, 1], got %r" % beta)
        if not 0 <= delta <= 1:
            raise ValueError("delta must be in [0, 1], got %r" % delta)
        self.beta = float(beta)
        self.delta = float(delta)

    @property
    def tau(self):
        """Effective infection rate beta/delta, defined only for delta > 0."""
        if self.delta == 0:
            raise ValueError("tau is undefined for delta = 0")
        return self.beta / self.delta

    def __repr__(self):
        return "EpidemicParams(beta=%r, delta=%r)" % (self.beta, self.delta)


BoundMatrix = namedtuple("BoundMatrix", "kind mat n num_edges nonnegative")

SignConditionReport = namedtuple(
    "SignConditionReport",
    "horizon holds first_failure tol certified certified_at")


def build_m(g, params):
    """Marginal bound matrix (1-delta) I + beta A, symmetric nonnegative."""
    b, d = params.beta, params.delta
    mat = ((1 - d) * sp.identity(g.n, format="csr")
           + b * g.adjacency()).tocsr()
    return BoundMatrix(M, mat, g.n, g.num_edges, True)


def build_m_prime(g, params):
    """Pairwise bound matrix on the stacked state (p, -p_E).

    Blocks: [[(1-d)I + bA, bB], [-(1-d)bB^T, (1-d)(1-d-2b)I]] with B the
    0/1 incidence matrix. The p_E sign convention is handled by the
    propagation layer; the stored matrix is exactly this block form.
    """
    b, d = params.beta, params.delta
    E = g.num_edges
    K = (1 - d) * sp.identity(g.n) + b * g.adjacency()
    if E == 0:
        mat = K.tocsr()
    else:
        B = g.incidence()
        mat = sp.bmat([
            [K, b * B],
            [-(1 - d) * b * B.T, (1 - d) * (1 - d - 2 * b) * sp.identity(E)],
        ]).tocsr()
    nonneg = mat.nnz == 0 or mat.data.min() >= 0
    return BoundMatrix(M_PRIME, mat, g.n, E, bool(nonneg))


def build_m_double_prime(g, params):
    """Directed-pair bound matrix on the stacked state (p, q_E).

    Row for p_i: (1-d) on p_i and b on q_{il} for every neighbor l.
    Row for q_{ij}: d(1-d) on p_j, (1-d)(1-d-b) on q_{ij}, b*d on q_{ji},
    and b(1+d) on q_{jl} for every neighbor l of j other than i.
    Entrywise nonnegative whenever 1 - delta - beta >= 0.
    """
    b, d = params.beta, params.delta
    n, E = g.n, g.num_edges
    didx = g.directed_index()
    dim = n + 2 * E
    rows, cols, vals = [], [], []

    def add(r, c, v):
        if v != 0.0:
            rows.append(r)
            cols.append(c)
            vals.append(v)

    for i in range(n):
        add(i, i, 1 - d)
        for l in g.neighbors[i]:
            add(i, n + didx[(i, l)], b)
    for (i, j), k in didx.items():
        r = n + k
        add(r, j, d * (1 - d))
        add(r, n + didx[(i, j)], (1 - d) * (1 - d - b))
        add(r, n + didx[(j, i)], b * d)
        for l in g.neighbors[j]:
            if l != i:
                add(r, n + didx[(j, l)], b * (1 + d))
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
    nonneg = mat.nnz == 0 or mat.data.min() >= 0
    return BoundMatrix(M_DOUBLE_PRIME, mat, n, E, bool(nonneg))


def check_sign_condition(mp, horizon=1000, tol=1e-12, cert_tol=1e-10,
                         window=64):
    """Check nonnegativity of the left-iterates of M_PRIME.

    Iterates the row vector v(t)^T = v(t-1)^T M' from v(0) = (1_n, 0) and
    flags each step whose minimum entry is >= -tol (relative to the sup
    norm of the iterate; iterates are rescaled each step so the check is
    scale-free). holds[t] records the status of step t for t in
    0..horizon, with holds[0] always true.

    An explicit step check only certifies the condition up to the
    horizon. A sound early exit is attempted at power-of-two steps: if
    v(t) is a nonnegative linear combination of previously seen
    nonnegative iterates (nonnegative least squares residual below
    cert_tol), then by induction every later iterate is a nonnegative
    combination of nonnegative vectors, so the condition holds for all t.
    The fit is exact only in exact arithmetic; numerically the residual
    can be amplified by later powers of M'.
    """
    if mp.kind != M_PRIME:
        raise ValueError("sign condition is defined for M_PRIME, got %s" % mp.kind)
    if horizon < 1:
        raise ValueError("horizon must be >= 1, got %d" % horizon)
    if tol < 0:
        raise ValueError("tol must be >= 0, got %r" % tol)
    mt = mp.mat.T.tocsr()
    dim = mp.mat.shape[0]
    v = np.zeros(dim)
    v[:mp.n] = 1.0
    holds = np.zeros(horizon + 1, dtype=bool)
    holds[0] = True
    first_failure = None
    past = deque(maxlen=window)
    past.append(np.maximum(v, 0.0))
    for t in range(1, horizon + 1):
        v = mt @ v
        scale = np.abs(v).max()
        ok = v.min() >= -tol * max(1.0, scale)
        holds[t] = ok
        if not ok and first_failure is None:
            first_failure = t
        if scale > 0:
            v = v / scale
        if ok and first_failure is None:
            clamped = np.maximum(v, 0.0)
            if t >= 8 and (t & (t - 1)) == 0 and len(past) >= 1:
                cols = np.column_stack(past)
                try:
                    coef, resid = nnls(cols, clamped)
                except RuntimeError:
                    # solver hit its iteration cap; skip this attempt
                    resid = np.inf
                if resid <= cert_tol * max(1.0, np.abs(clamped).max()):
                    holds[t:] = True
                    return SignConditionReport(horizon, holds, None, tol,
                                               True, t)
            past.append(clamped)
    return SignConditionReport(horizon, holds, first_failure, tol, False, None)


def triplet_text(bm):
    """Serialize a bound matrix as `dim nnz` header plus `row col value` lines."""
    coo = bm.mat.tocoo()
    order = np.lexsort((coo.col, coo.row))
    lines = ["%d %d" % (bm.mat.shape[0], coo.nnz)]
    for k in order:
        lines.append("%d %d %s" % (coo.row[k], coo.col[k],
                                   repr(float(coo.data[k]))))
    return "\n".join(lines) + "\n"
