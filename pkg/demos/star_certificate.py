"""Closed-form row-sum certificate versus spectral radii on growing stars.

For several recovery rates with beta = (1 - delta) / 2, the script scans
star sizes and reports where the certificate drops below the marginal
radius 1 - delta + beta * sqrt(n - 1). At the first such size it also
computes the directed-pair radius numerically to show the certificate
is a genuine upper bound on it.
"""

import math

from sisbounds import graph
from sisbounds.bounds import EpidemicParams, build_m_double_prime
from sisbounds.spectral import spectral_radius, star_rowsum_certificate

SIZES = (100, 1000, 10000, 100000)


def main():
    for delta in (0.10, 0.25, 0.40):
        beta = (1 - delta) / 2
        params = EpidemicParams(beta, delta)
        print("delta=%.2f beta=%.3f" % (delta, beta))
        hit = None
        for n in SIZES:
            cert = star_rowsum_certificate(n, params)
            rho_m = 1 - delta + beta * math.sqrt(n - 1.0)
            mark = "<" if cert.max_rho < rho_m else ">="
            print("  n=%-7d cert=%9.3f %s rho(M)=%9.3f   rows %s"
                  % (n, cert.max_rho, mark, rho_m,
                     " ".join("%.3f" % r for r in cert.rho_rows)))
            if hit is None and cert.max_rho < rho_m:
                hit = n
        if hit is not None and hit <= 10000:
            rho_pp = spectral_radius(
                build_m_double_prime(graph.star(hit), params)).rho
            print("  numeric rho(M'') at n=%d: %.4f" % (hit, rho_pp))


if __name__ == "__main__":
    main()
