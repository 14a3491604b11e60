"""Nonintersecting random walkers and their diffusion scaling limits.

Exact lattice counting (binomial determinants), Pfaffian non-collision
probabilities, closed-form transition densities of the conditioned
diffusions (finite and infinite horizon, with and without an absorbing
wall), stochastic simulation, random-matrix endpoint laws, and a
verification harness.
"""

from .combinatorics import (LatticeConfig, WalkCount, count_paths, count_paths_batch,
                            oracle_count_dp,
                            scaled_survival, survival_probability, time_lattice,
                            walk_probability)
from .densities import (ModelSpec, de_bruijn_check, drift, drift_batch, g_density,
                        imhof_check, km_density, p_density, survival,
                        survival_asymptotics, survival_batch)
from .harness import (Histogram, StatReport, ks_test, ks_two_sample, make_histogram,
                      marginal_cdf, marginalize, verify_suite)
from .linalg import determinant, pfaffian, skew_from_upper, symmetric_eigenvalues
from .montecarlo import (PathEnsemble, SimConfig, endpoint_values, noncollision_mc,
                         sample_origin_law, simulate_sde, simulate_walkers)
from .quadrature import chamber_integral, ordered_grid
from .rmt import SpectrumSample, eigen_density, pm_bridge_check, sample_ensemble
from .special_functions import (ModelConstants, constants, h_hat_poly, h_poly,
                                mehta_integral, mehta_integral_quadrature, psi,
                                psi_hat, schur, sp_character)

__version__ = "0.1.0"
