"""Spectral bounds and exact references for contact-process extinction.

The package builds three linear systems whose iterates dominate the
exact infection process on a graph: the marginal matrix M, the pairwise
matrix on (marginals, minus both-infected probabilities), and the
directed-pair matrix on (marginals, healthy-infected probabilities).
Their spectral radii give extinction certificates, which can be checked
against the exact chain on small graphs and Monte Carlo on large ones.
"""

from .graph import (Graph, star, cycle, path, clique, spider, erdos_renyi,
                    watts_strogatz, incidence_matrix, lambda_max,
                    write_edge_list, read_edge_list)
from .bounds import (EpidemicParams, BoundMatrix, SignConditionReport,
                     M, M_PRIME, M_DOUBLE_PRIME,
                     build_m, build_m_prime, build_m_double_prime,
                     check_sign_condition, triplet_text)
from .spectral import (SpectralResult, LyapunovCertificate, StarCertificate,
                       CertificateUnavailable, CertificateInapplicable,
                       DegenerateWindow, spectral_radius,
                       lyapunov_certificate, star_rowsum_certificate)
from .chain import (STATE_CAP, ExactMoments, ConsistencyError, point_dist,
                    all_infected_dist, all_infected_moments,
                    transition_apply, exact_moments, tv_from_stationary,
                    mixing_time, dist_to_csv)
from .montecarlo import (McConfig, McEstimate, init_state,
                         simulate_trajectory, estimate, estimate_to_csv)
from .analysis import (BoundTrajectory, DominanceReport, ComparisonRow,
                       MixingBound, ScanResult, PropagationInvalid,
                       SIGN_HOLDS, SIGN_FAILS, propagate, dominance_check,
                       table_row, mixing_bound, threshold_scan,
                       refine_crossing, scan_to_csv, check_conjecture)

__version__ = "0.1.0"
