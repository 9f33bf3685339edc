"""Bound propagation, dominance checks, and threshold analysis."""

import math
from collections import namedtuple

import numpy as np

from . import chain as chain_mod
from .bounds import (M, M_PRIME, M_DOUBLE_PRIME, build_m, build_m_prime,
                     build_m_double_prime, check_sign_condition)
from .spectral import (spectral_radius, lyapunov_certificate,
                       CertificateUnavailable, LYAPUNOV_LIMIT)

BoundTrajectory = namedtuple("BoundTrajectory", "kind p p_edges q_edges valid")

DominanceReport = namedtuple(
    "DominanceReport", "T sign_valid q_valid violations max_violation")

ComparisonRow = namedtuple(
    "ComparisonRow",
    "label n beta delta rho_m rho_m_prime rho_m_double_prime "
    "mpp_nonnegative sign_status first_failure certified")

MixingBound = namedtuple("MixingBound", "bound route candidates")

ScanResult = namedtuple("ScanResult", "betas rows crossings")

SIGN_HOLDS = "holds_to_horizon"
SIGN_FAILS = "fails_at_t"


class PropagationInvalid(RuntimeError):
    """The requested propagation is not a certified upper bound."""


def _covers(report, T):
    if report is None:
        return False
    return report.certified or (report.first_failure is None
                                and report.horizon >= T)


def propagate(kind, g, params, initial, T, sign_report=None,
              allow_invalid=False):
    """Iterate a bound matrix from exact starting moments.

    initial must expose p, p_edges, q_edges (see chain.ExactMoments).
    For the pairwise matrix, a sign-condition report covering T is
    required for the result to be a certified upper bound; for the
    directed-pair matrix the requirement is 1 - delta - beta >= 0.
    Pass allow_invalid=True to get the trajectory anyway, flagged
    valid=False.
    """
    if T < 0:
        raise ValueError("T must be >= 0, got %d" % T)
    n = g.n
    e = g.num_edges
    p0 = np.asarray(initial.p, dtype=float)
    if kind == M:
        mat = build_m(g, params).mat
        out = np.empty((T + 1, n))
        out[0] = p0
        s = p0.copy()
        for t in range(1, T + 1):
            s = mat @ s
            out[t] = s
        return BoundTrajectory(M, out, None, None, True)
    if kind == M_PRIME:
        valid = _covers(sign_report, T)
        if not valid and not allow_invalid:
            raise PropagationInvalid(
                "pairwise propagation needs a sign-condition report "
                "covering T=%d" % T)
        mat = build_m_prime(g, params).mat
        s = np.concatenate([p0, -np.asarray(initial.p_edges, dtype=float)])
        out_p = np.empty((T + 1, n))
        out_pe = np.empty((T + 1, e))
        out_p[0], out_pe[0] = s[:n], -s[n:]
        for t in range(1, T + 1):
            s = mat @ s
            out_p[t], out_pe[t] = s[:n], -s[n:]
        return BoundTrajectory(M_PRIME, out_p, out_pe, None, valid)
    if kind == M_DOUBLE_PRIME:
        valid = 1 - params.delta - params.beta >= 0
        if not valid and not allow_invalid:
            raise PropagationInvalid(
                "directed-pair propagation needs 1-delta-beta >= 0, got "
                "beta=%g delta=%g" % (params.beta, params.delta))
        mat = build_m_double_prime(g, params).mat
        s = np.concatenate([p0, np.asarray(initial.q_edges, dtype=float)])
        out_p = np.empty((T + 1, n))
        out_q = np.empty((T + 1, 2 * e))
        out_p[0], out_q[0] = s[:n], s[n:]
        for t in range(1, T + 1):
            s = mat @ s
            out_p[t], out_q[t] = s[:n], s[n:]
        return BoundTrajectory(M_DOUBLE_PRIME, out_p, None, out_q, valid)
    raise ValueError("unknown matrix kind %r" % kind)


def dominance_check(g, params, T, cap=chain_mod.STATE_CAP):
    """Compare every bound against the exact chain from all infected.

    One-step clauses re-derive each recursion's right-hand side from
    exact moments at time t and compare with the exact value at t+1;
    multi-step clauses compare propagated trajectories elementwise.
    Violations are positive slack in the wrong direction, so a sound
    bound gives values at rounding level.
    """
    n = g.n
    b, d = params.beta, params.delta
    q_valid = 1 - d - b >= 0
    mp = build_m_prime(g, params)
    rep = check_sign_condition(mp, horizon=max(T, 8))
    sign_valid = _covers(rep, T)

    dist = chain_mod.all_infected_dist(n)
    mom = chain_mod.exact_moments(dist, g)
    pairs = g.directed_pairs()
    didx = g.directed_index()
    viol = {"marginal_step": 0.0, "pair_tightening": 0.0,
            "edge_lower_step": 0.0, "directed_p_step": 0.0,
            "directed_q_step": 0.0}
    exact_p = [mom.p]
    exact_pe = [mom.p_edges]
    exact_q = [mom.q_edges]
    for t in range(T):
        nxt = chain_mod.transition_apply(g, params, dist, cap=cap)
        nmom = chain_mod.exact_moments(nxt, g)
        rhs_a = np.array([(1 - d) * mom.p[i]
                          + b * sum(mom.p[l] for l in g.neighbors[i])
                          for i in range(n)])
        rhs_b = np.array([(1 - d) * mom.p[i]
                          + b * sum(mom.q_edges[didx[(i, l)]]
                                    for l in g.neighbors[i])
                          for i in range(n)])
        viol["marginal_step"] = max(viol["marginal_step"],
                                    float((nmom.p - rhs_a).max(initial=0.0)))
        viol["pair_tightening"] = max(
            viol["pair_tightening"],
            float((nmom.p - rhs_b).max(initial=0.0)),
            float((rhs_b - rhs_a).max(initial=0.0)))
        if g.num_edges:
            rhs_e = np.array([
                (1 - d) * b * (mom.p[i] + mom.p[l])
                + (1 - d) * (1 - d - 2 * b) * mom.p_edges[k]
                for k, (i, l) in enumerate(g.edges)])
            viol["edge_lower_step"] = max(
                viol["edge_lower_step"],
                float((rhs_e - nmom.p_edges).max(initial=0.0)))
        viol["directed_p_step"] = max(
            viol["directed_p_step"],
            float((nmom.p - rhs_b).max(initial=0.0)))
        if len(pairs):
            rhs_q = np.empty(len(pairs))
            for k, (i, j) in enumerate(pairs):
                acc = (d * (1 - d) * mom.p[j]
                       + (1 - d) * (1 - d - b) * mom.q_edges[k]
                       + b * d * mom.q_edges[didx[(j, i)]])
                for l in g.neighbors[j]:
                    if l != i:
                        acc += b * (1 + d) * mom.q_edges[didx[(j, l)]]
                rhs_q[k] = acc
            viol["directed_q_step"] = max(
                viol["directed_q_step"],
                float((nmom.q_edges - rhs_q).max(initial=0.0)))
        dist, mom = nxt, nmom
        exact_p.append(mom.p)
        exact_pe.append(mom.p_edges)
        exact_q.append(mom.q_edges)
    exact_p = np.array(exact_p)
    exact_q = np.array(exact_q)

    init = chain_mod.all_infected_moments(g)
    traj_m = propagate(M, g, params, init, T)
    viol["multi_marginal"] = float((exact_p - traj_m.p).max(initial=0.0))
    if sign_valid:
        traj_mp = propagate(M_PRIME, g, params, init, T, sign_report=rep)
        viol["multi_sandwich_low"] = float(
            (exact_p - traj_mp.p).max(initial=0.0))
        viol["multi_sandwich_high"] = float(
            (traj_mp.p - traj_m.p).max(initial=0.0))
    else:
        viol["multi_sandwich_low"] = None
        viol["multi_sandwich_high"] = None
    if q_valid:
        traj_mpp = propagate(M_DOUBLE_PRIME, g, params, init, T)
        viol["multi_directed_p"] = float(
            (exact_p - traj_mpp.p).max(initial=0.0))
        viol["multi_directed_q"] = float(
            (exact_q - traj_mpp.q_edges).max(initial=0.0))
    else:
        viol["multi_directed_p"] = None
        viol["multi_directed_q"] = None
    worst = max(v for v in viol.values() if v is not None)
    return DominanceReport(T, sign_valid, q_valid, viol, worst)


def table_row(g, params, horizon=1000, label=None):
    """All three radii plus the sign-condition status for one instance."""
    rho_m = spectral_radius(build_m(g, params)).rho
    mp = build_m_prime(g, params)
    rho_mp = spectral_radius(mp).rho
    mpp = build_m_double_prime(g, params)
    rho_mpp = spectral_radius(mpp).rho
    rep = check_sign_condition(mp, horizon=horizon)
    status = SIGN_HOLDS if rep.first_failure is None else SIGN_FAILS
    return ComparisonRow(label, g.n, params.beta, params.delta,
                         rho_m, rho_mp, rho_mpp, mpp.nonnegative,
                         status, rep.first_failure, rep.certified)


def _lyapunov_route(mat_bm, u, w, epsilon):
    cert = lyapunov_certificate(mat_bm)
    const = (np.linalg.norm(cert.p_inv_half @ u)
             * np.linalg.norm(cert.p_half @ w))
    if cert.eta >= 1:
        return None
    t = math.log(const / epsilon) / (-math.log(cert.eta))
    return max(t, 0.0)


def mixing_bound(g, params, epsilon, horizon=1000):
    """Best certified upper bound on the epsilon-mixing time.

    Tries three routes: marginal contraction (rho(M) < 1), the pairwise
    matrix with a Lyapunov certificate (needs the sign condition to hold
    at least up to the claimed bound), and the directed-pair matrix with
    a Lyapunov certificate (needs 1 - delta - beta >= 0). Returns the
    smallest certified value; bound is None when every route fails.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1), got %r" % epsilon)
    n = g.n
    e = g.num_edges
    candidates = {}
    rho_m = spectral_radius(build_m(g, params)).rho
    if rho_m < 1:
        candidates["marginal"] = max(
            math.log(n / epsilon) / (-math.log(rho_m)), 0.0)
    if n + e <= LYAPUNOV_LIMIT:
        mp = build_m_prime(g, params)
        if spectral_radius(mp).rho < 1:
            try:
                u = np.concatenate([np.ones(n), np.zeros(e)])
                w = np.concatenate([np.ones(n), -np.ones(e)])
                t = _lyapunov_route(mp, u, w, epsilon)
            except CertificateUnavailable:
                t = None
            if t is not None:
                rep = check_sign_condition(
                    mp, horizon=max(horizon, int(math.ceil(t)), 8))
                if rep.certified or (rep.first_failure is None
                                     and rep.horizon >= t):
                    candidates["pairwise"] = t
    if 1 - params.delta - params.beta >= 0 and n + 2 * e <= LYAPUNOV_LIMIT:
        mpp = build_m_double_prime(g, params)
        if spectral_radius(mpp).rho < 1:
            try:
                u = np.concatenate([np.ones(n), np.zeros(2 * e)])
                t = _lyapunov_route(mpp, u, u, epsilon)
            except CertificateUnavailable:
                t = None
            if t is not None:
                candidates["directed"] = t
    if not candidates:
        return MixingBound(None, None, candidates)
    route = min(candidates, key=candidates.get)
    return MixingBound(candidates[route], route, candidates)


def threshold_scan(g, delta, betas, horizon=1000):
    """Sweep beta and locate where each radius crosses 1.

    Crossings are linearly interpolated between adjacent grid points.
    """
    betas = [float(b) for b in betas]
    if sorted(betas) != betas:
        raise ValueError("betas must be sorted ascending")
    from .bounds import EpidemicParams
    rows = [table_row(g, EpidemicParams(b, delta), horizon=horizon,
                      label="beta=%g" % b) for b in betas]
    crossings = {M: [], M_PRIME: [], M_DOUBLE_PRIME: []}
    series = {M: [r.rho_m for r in rows],
              M_PRIME: [r.rho_m_prime for r in rows],
              M_DOUBLE_PRIME: [r.rho_m_double_prime for r in rows]}
    for kind, vals in series.items():
        for k in range(len(betas) - 1):
            f0, f1 = vals[k] - 1.0, vals[k + 1] - 1.0
            if f0 == 0.0:
                crossings[kind].append(betas[k])
            elif f0 < 0 <= f1 or f1 < 0 <= f0:
                crossings[kind].append(
                    betas[k] + (betas[k + 1] - betas[k]) * (-f0) / (f1 - f0))
        if len(betas) and vals[-1] == 1.0:
            crossings[kind].append(betas[-1])
    return ScanResult(betas, rows, crossings)


def refine_crossing(g, delta, kind, lo, hi, tol=1e-4):
    """Bisect the radius of one matrix kind to locate rho = 1."""
    from .bounds import EpidemicParams
    builders = {M: build_m, M_PRIME: build_m_prime,
                M_DOUBLE_PRIME: build_m_double_prime}
    if kind not in builders:
        raise ValueError("unknown matrix kind %r" % kind)

    def f(b):
        return spectral_radius(builders[kind](g, EpidemicParams(b, delta))).rho - 1.0

    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise ValueError("no sign change on [%g, %g]" % (lo, hi))
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def scan_to_csv(scan, f):
    """Write scan rows as beta,rho_m,rho_mp,rho_mpp,cond_holds."""
    own = isinstance(f, str)
    fh = open(f, "w") if own else f
    try:
        fh.write("beta,rho_m,rho_mp,rho_mpp,cond_holds\n")
        for b, r in zip(scan.betas, scan.rows):
            fh.write("%s,%s,%s,%s,%d\n" % (
                repr(float(b)), repr(r.rho_m), repr(r.rho_m_prime),
                repr(r.rho_m_double_prime),
                1 if r.sign_status == SIGN_HOLDS else 0))
    finally:
        if own:
            fh.close()


def check_conjecture(records, tol=1e-8):
    """Return records where the pairwise radius exceeds the marginal one.

    records is an iterable of (label, rho_m, rho_m_prime); an empty
    return supports the conjecture rho(M') <= rho(M) on those instances.
    """
    bad = []
    for label, rho_m, rho_mp in records:
        if rho_mp > rho_m + tol:
            bad.append((label, rho_m, rho_mp))
    return bad
