"""End-to-end acceptance checks.

Each test prints one `criterion N: PASS/FAIL` line with the measured
values behind it, then asserts every sub-check, so the captured output
records the full measurement even when a sub-check fails.
"""

import math
import time

import numpy as np
import pytest

from sisbounds import graph, chain
from sisbounds import montecarlo as mc
from sisbounds.analysis import (dominance_check, table_row, mixing_bound,
                                check_conjecture)
from sisbounds.bounds import (EpidemicParams, build_m, build_m_prime,
                              build_m_double_prime)
from sisbounds.spectral import (spectral_radius, lyapunov_certificate,
                                star_rowsum_certificate)

# (label, rho_m, rho_m_prime) pairs observed by criteria 1-5, swept by
# criterion 9
CONJECTURE_RECORDS = []

STAR_TABLE = [(0.75, 0.078), (0.50, 0.053), (0.25, 0.028)]
CYCLE_TABLE = [(0.75, 0.390), (0.50, 0.265), (0.25, 0.140)]

MIXING_INSTANCES = [
    ("path2", graph.path(2), 0.10, 0.5),
    ("path3", graph.path(3), 0.10, 0.6),
    ("star4", graph.star(4), 0.05, 0.6),
    ("star5", graph.star(5), 0.08, 0.7),
    ("cycle5", graph.cycle(5), 0.10, 0.5),
    ("cycle6", graph.cycle(6), 0.12, 0.6),
    ("clique4", graph.clique(4), 0.09, 0.7),
    ("clique5", graph.clique(5), 0.10, 0.8),
    ("er7", graph.erdos_renyi(7, 0.4, 11), 0.08, 0.7),
    ("star8", graph.star(8), 0.05, 0.5),
]


def _conclude(num, checks, elapsed, budget=None):
    if budget is not None:
        checks.append(("runtime %.1fs < %ds" % (elapsed, budget),
                       elapsed < budget))
    failed = [name for name, ok in checks if not ok]
    line = "criterion %d: %s (%.1f s, %d checks)" % (
        num, "FAIL" if failed else "PASS", elapsed, len(checks))
    if failed:
        line += "\n  failing: " + "; ".join(failed)
    print(line)
    assert not failed, line


def test_01_star2000_pairwise_radius_at_scan_points():
    """Pairwise radius and marginal ratio at the two reference betas."""
    t0 = time.monotonic()
    g = graph.star(2000)
    lam = graph.lambda_max(g)
    checks = []
    for beta, rho_want, ratio_want in ((0.0130, 0.99, 1.93),
                                       (0.0157, 1.05, 2.33)):
        params = EpidemicParams(beta, 0.3)
        rho_m = spectral_radius(build_m(g, params)).rho
        rho_mp = spectral_radius(build_m_prime(g, params)).rho
        CONJECTURE_RECORDS.append(
            ("star2000 beta=%g" % beta, rho_m, rho_mp))
        ratio = beta * lam / 0.3
        checks.append(("rho_mp at beta=%g is %.4f, want %.2f +- 0.01"
                       % (beta, rho_mp, rho_want),
                       abs(rho_mp - rho_want) <= 0.01))
        checks.append(("beta*lambda/delta at beta=%g is %.4f, want "
                       "%.2f +- 0.01" % (beta, ratio, ratio_want),
                       abs(ratio - ratio_want) <= 0.01))
    _conclude(1, checks, time.monotonic() - t0, 60)


def test_02_star2000_extinction_vs_persistence():
    """Monte Carlo split at t=500 across the two reference betas."""
    t0 = time.monotonic()
    g = graph.star(2000)
    cfg = mc.McConfig(200, 500, 12345, "all")
    lo = mc.estimate(g, EpidemicParams(0.0130, 0.3), cfg)
    hi = mc.estimate(g, EpidemicParams(0.0157, 0.3), cfg)
    f_lo = float(lo.mean_infected_fraction[-1])
    f_hi = float(hi.mean_infected_fraction[-1])
    checks = [
        ("beta=0.0130 final fraction %.5f < 0.01 (alive %d/200)"
         % (f_lo, lo.n_alive_trajectories[-1]), f_lo < 0.01),
        ("beta=0.0157 final fraction %.5f > 0.05 (alive %d/200)"
         % (f_hi, hi.n_alive_trajectories[-1]), f_hi > 0.05),
    ]
    _conclude(2, checks, time.monotonic() - t0, 600)


def test_03_comparison_table_star_and_cycle_rows():
    """Radii and sign statuses for the six 101-node table rows."""
    t0 = time.monotonic()
    checks = []
    star_rows = []
    for (d, b) in STAR_TABLE:
        row = table_row(graph.star(101), EpidemicParams(b, d))
        star_rows.append(row)
        CONJECTURE_RECORDS.append(
            ("star101 d=%g b=%g" % (d, b), row.rho_m, row.rho_m_prime))
    cycle_rows = []
    for (d, b) in CYCLE_TABLE:
        row = table_row(graph.cycle(101), EpidemicParams(b, d))
        cycle_rows.append(row)
        CONJECTURE_RECORDS.append(
            ("cycle101 d=%g b=%g" % (d, b), row.rho_m, row.rho_m_prime))
    for row in star_rows + cycle_rows:
        checks.append(("rho_m(%s n=%d d=%g) = %.4f, want 1.030 +- 0.001"
                       % ("star" if row.n == 101 and row in star_rows
                          else "cycle", row.n, row.delta, row.rho_m),
                       abs(row.rho_m - 1.030) <= 0.001))
    for row, want in zip(star_rows, (0.903, 0.828, 0.840)):
        checks.append(("star rho_mp(d=%g) = %.4f, want %.3f +- 0.01"
                       % (row.delta, row.rho_m_prime, want),
                       abs(row.rho_m_prime - want) <= 0.01))
    for row, want_hold in zip(star_rows, (True, True, False)):
        got = row.first_failure is None
        checks.append(("star sign(d=%g) %s, want %s"
                       % (row.delta, "holds" if got else "fails",
                          "holds" if want_hold else "fails"),
                       got == want_hold))
    minus = star_rows[2]
    checks.append(("star rho_mpp on the d=0.25 row = %.4f, want "
                   "0.968 +- 0.005" % minus.rho_m_double_prime,
                   abs(minus.rho_m_double_prime - 0.968) <= 0.005))
    for row, want_hold in zip(cycle_rows, (True, False, False)):
        got = row.first_failure is None
        checks.append(("cycle sign(d=%g) %s, want %s"
                       % (row.delta, "holds" if got else "fails",
                          "holds" if want_hold else "fails"),
                       got == want_hold))
    for row, want in zip(cycle_rows[1:], (0.945, 0.942)):
        checks.append(("cycle rho_mpp(d=%g) = %.4f, want %.3f +- 0.01"
                       % (row.delta, row.rho_m_double_prime, want),
                       abs(row.rho_m_double_prime - want) <= 0.01))
    _conclude(3, checks, time.monotonic() - t0, 60)


def test_04_exact_chain_dominance_suite():
    """One-step and propagated bounds against the exact chain on five
    small graphs across 20 random parameter pairs."""
    t0 = time.monotonic()
    suite = [("path3", graph.path(3)), ("star5", graph.star(5)),
             ("cycle5", graph.cycle(5)), ("clique4", graph.clique(4)),
             ("er7", graph.erdos_renyi(7, 0.4, 7))]
    rng = np.random.default_rng(12345)
    pairs = [(float(b), float(d)) for b, d in rng.uniform(size=(20, 2))]
    one_step_keys = ("marginal_step", "pair_tightening", "edge_lower_step",
                     "directed_p_step", "directed_q_step")
    worst_one = 0.0
    worst_marg = 0.0
    worst_sandwich = 0.0
    worst_q = 0.0
    n_sandwich = 0
    n_q = 0
    for name, g in suite:
        for b, d in pairs:
            params = EpidemicParams(b, d)
            rep = dominance_check(g, params, 50)
            worst_one = max(worst_one, *(rep.violations[k]
                                         for k in one_step_keys))
            worst_marg = max(worst_marg, rep.violations["multi_marginal"])
            if rep.sign_valid:
                n_sandwich += 1
                worst_sandwich = max(worst_sandwich,
                                     rep.violations["multi_sandwich_low"],
                                     rep.violations["multi_sandwich_high"])
            if rep.q_valid:
                n_q += 1
                worst_q = max(worst_q,
                              rep.violations["multi_directed_p"],
                              rep.violations["multi_directed_q"])
            rho_m = spectral_radius(build_m(g, params)).rho
            rho_mp = spectral_radius(build_m_prime(g, params)).rho
            CONJECTURE_RECORDS.append(
                ("%s b=%.3f d=%.3f" % (name, b, d), rho_m, rho_mp))
    checks = [
        ("one-step worst violation %.3e <= 1e-10" % worst_one,
         worst_one <= 1e-10),
        ("propagated marginal worst %.3e <= 1e-10" % worst_marg,
         worst_marg <= 1e-10),
        ("sandwich worst %.3e <= 1e-10 over %d cases"
         % (worst_sandwich, n_sandwich),
         n_sandwich > 0 and worst_sandwich <= 1e-10),
        ("q-sandwich worst %.3e <= 1e-10 over %d cases" % (worst_q, n_q),
         n_q > 0 and worst_q <= 1e-10),
    ]
    _conclude(4, checks, time.monotonic() - t0, 300)


def test_05_mixing_time_certificates():
    """Exact mixing times against the marginal-contraction bound, plus
    one star whose marginal matrix is unstable but whose pairwise
    certificate still bounds the mixing time."""
    t0 = time.monotonic()
    eps = 0.01
    checks = []
    for name, g, b, d in MIXING_INSTANCES:
        params = EpidemicParams(b, d)
        rho = spectral_radius(build_m(g, params)).rho
        rho_mp = spectral_radius(build_m_prime(g, params)).rho
        CONJECTURE_RECORDS.append((name, rho, rho_mp))
        bound = math.log(g.n / eps) / (-math.log(rho))
        t_mix = chain.mixing_time(g, params, eps)
        checks.append(("%s: rho_m %.3f < 1" % (name, rho), rho < 1))
        checks.append(("%s: t_mix %s <= bound %.1f" % (name, t_mix, bound),
                       t_mix is not None and t_mix <= bound))
    g = graph.star(6)
    beta = 0.63 / math.sqrt(5.0)
    params = EpidemicParams(beta, 0.6)
    rho_m = spectral_radius(build_m(g, params)).rho
    rho_mp = spectral_radius(build_m_prime(g, params)).rho
    CONJECTURE_RECORDS.append(("star6 hot", rho_m, rho_mp))
    mb = mixing_bound(g, params, eps)
    t_mix = chain.mixing_time(g, params, eps)
    checks.append(("hot star: rho_m %.3f > 1 > rho_mp %.3f"
                   % (rho_m, rho_mp), rho_m > 1 > rho_mp))
    checks.append(("hot star: pairwise route available",
                   "pairwise" in mb.candidates))
    pw = mb.candidates.get("pairwise", float("nan"))
    checks.append(("hot star: t_mix %s finite and <= pairwise bound %.1f"
                   % (t_mix, pw),
                   t_mix is not None and "pairwise" in mb.candidates
                   and t_mix <= pw))
    _conclude(5, checks, time.monotonic() - t0, 300)


def test_06_lyapunov_certificate_random_matrices():
    """Certified geometric envelope against direct powering for 50
    random matrices at three contraction levels."""
    t0 = time.monotonic()
    rng = np.random.default_rng(2026)
    targets = (0.5, 0.9, 0.99)
    worst_slack = -float("inf")
    n_ok = 0
    etas_ok = True
    for k in range(50):
        dim = int(rng.integers(2, 21))
        a = rng.standard_normal((dim, dim))
        rho = float(np.abs(np.linalg.eigvals(a)).max())
        a *= targets[k % 3] / rho
        cert = lyapunov_certificate(a)
        etas_ok = etas_ok and cert.eta < 1
        ones = np.ones(dim)
        v = ones.copy()
        ok = True
        for t in range(501):
            lhs = float(ones @ v)
            bound = cert.eta ** t * cert.bound_constant
            worst_slack = max(worst_slack, lhs - bound)
            if lhs > bound + 1e-9:
                ok = False
                break
            v = a @ v
        n_ok += ok
    checks = [
        ("eta < 1 for all 50 matrices", etas_ok),
        ("envelope held for %d/50 matrices (worst slack %.2e)"
         % (n_ok, worst_slack), n_ok == 50),
    ]
    _conclude(6, checks, time.monotonic() - t0, 60)


def test_07_star_certificate_beats_marginal_radius():
    """Closed-form row-sum certificate below the marginal radius for
    some star size, confirmed by the directed-pair radius there."""
    t0 = time.monotonic()
    checks = []
    for d in (0.1, 0.25, 0.4):
        b = (1 - d) / 2
        params = EpidemicParams(b, d)
        hit = None
        for n in (100, 1000, 10000, 100000):
            cert = star_rowsum_certificate(n, params)
            rho_m = 1 - d + b * math.sqrt(n - 1.0)
            if cert.max_rho < rho_m and hit is None:
                hit = (n, cert.max_rho, rho_m)
        checks.append(("delta=%g: certificate wins at some n in the scan"
                       % d, hit is not None))
        if hit is None:
            continue
        n, max_rho, rho_m = hit
        bm = build_m_double_prime(graph.star(n), params)
        rho_pp = spectral_radius(bm).rho
        checks.append(("delta=%g n=%d: directed matrix nonnegative"
                       % (d, n), bm.nonnegative))
        checks.append(
            ("delta=%g n=%d: rho_mpp %.3f <= cert %.3f < rho_m %.3f"
             % (d, n, rho_pp, max_rho, rho_m),
             rho_pp <= max_rho + 1e-8 and rho_pp < rho_m))
    _conclude(7, checks, time.monotonic() - t0, 300)


def test_08_monte_carlo_matches_exact_chain():
    """Per-node frequencies on star(6) against the exact chain at three
    times, 1e5 trajectories, 4 standard errors."""
    t0 = time.monotonic()
    g = graph.star(6)
    params = EpidemicParams(0.05, 0.6)
    times = (1, 5, 10)
    dist = chain.all_infected_dist(6)
    exact = {}
    for t in range(1, 11):
        dist = chain.transition_apply(g, params, dist)
        if t in times:
            exact[t] = chain.exact_moments(dist, g).p
    n_traj = 100000
    est = mc.estimate(g, params, mc.McConfig(n_traj, 10, 12345, "all"),
                      node_freq_times=times, chunk=4096)
    checks = []
    for t in times:
        freq = est.node_freq[t] / n_traj
        sigma = np.sqrt(exact[t] * (1 - exact[t]) / n_traj)
        z = float(np.abs((freq - exact[t]) / sigma).max())
        checks.append(("t=%d worst z-score %.2f <= 4" % (t, z), z <= 4.0))
    _conclude(8, checks, time.monotonic() - t0, 120)


def test_09_pairwise_radius_never_exceeds_marginal():
    """Conjecture monitor over every instance the other criteria
    touched: rho(M') <= rho(M) + 1e-8."""
    t0 = time.monotonic()
    records = list(CONJECTURE_RECORDS)
    if len(records) < 16:
        # standalone run: rebuild a baseline sweep
        for (d, b) in STAR_TABLE:
            row = table_row(graph.star(101), EpidemicParams(b, d))
            records.append(("star101 d=%g" % d, row.rho_m, row.rho_m_prime))
        for (d, b) in CYCLE_TABLE:
            row = table_row(graph.cycle(101), EpidemicParams(b, d))
            records.append(("cycle101 d=%g" % d, row.rho_m, row.rho_m_prime))
        for name, g, b, d in MIXING_INSTANCES:
            params = EpidemicParams(b, d)
            records.append((name,
                            spectral_radius(build_m(g, params)).rho,
                            spectral_radius(build_m_prime(g, params)).rho))
    bad = check_conjecture(records, tol=1e-8)
    checks = [
        ("collected %d records" % len(records), len(records) >= 16),
        ("violations: %s" % (bad if bad else "none"), not bad),
    ]
    _conclude(9, checks, time.monotonic() - t0)
