import math

import numpy as np
import pytest
from scipy import stats as sps

from viciouskit.harness import marginal_cdf
from viciouskit.quadrature import chamber_integral
from viciouskit.rmt import (eigen_density, pm_bridge_check, sample_ensemble,
                            sample_finite_horizon_endpoint)


def test_goe_single_entry_variance():
    s = sample_ensemble("GOE", 1, variance=1.0, samples=10_000, seed=3)
    lam = s.eigenvalues[:, 0]
    se = math.sqrt(2.0 / len(lam))
    assert abs(lam.var() - 1.0) < 4 * se
    assert lam.mean() == pytest.approx(0.0, abs=4 / math.sqrt(len(lam)))


def test_eigen_density_normalizes():
    # ordered-chamber mass of the symmetric joint density is 1/N!
    for kind, n in (("GOE", 2), ("GUE", 2), ("GOE", 3), ("GUE", 3)):
        mass = chamber_integral(lambda y: eigen_density(kind, y, 1.0),
                                n, -9.0, 9.0, order=110)
        assert mass == pytest.approx(1.0 / math.factorial(n), abs=1e-8)


@pytest.mark.parametrize("kind", ["GOE", "GUE"])
@pytest.mark.parametrize("n", [2, 3])
def test_spectra_match_closed_form_density(kind, n):
    s = sample_ensemble(kind, n, variance=1.0, samples=4000, seed=8)
    for k in range(n):
        dens = lambda y: eigen_density(kind, y, 1.0) * math.factorial(n)
        cdf, drift = marginal_cdf(dens, n, k, -9.0, 9.0)
        assert drift < 1e-6
        d = sps.kstest(s.eigenvalues[:, k], cdf).statistic
        assert d < 1.63 / math.sqrt(4000)


def test_gue_level_repulsion():
    # the nearest-neighbor gap density vanishes at zero: P(gap < eps) ~ eps^3
    s = sample_ensemble("GUE", 2, variance=1.0, samples=40_000, seed=4)
    gaps = np.diff(s.eigenvalues, axis=1)[:, 0]
    p1 = np.mean(gaps < 0.2)
    p2 = np.mean(gaps < 0.4)
    # cubic scaling would give a ratio of 8; allow sampling noise
    assert p2 / max(p1, 1e-12) > 5.0


def test_pm_alpha_one_is_gue():
    pm = sample_ensemble("PM", 2, variance=1.0, alpha=1.0, samples=5000, seed=6)
    gue = sample_ensemble("GUE", 2, variance=0.5, samples=5000, seed=7)
    for k in (0, 1):
        d = sps.ks_2samp(pm.eigenvalues[:, k], gue.eigenvalues[:, k]).statistic
        assert d < 1.63 * math.sqrt(2 / 5000)


def test_pm_alpha_zero_is_goe():
    pm = sample_ensemble("PM", 2, variance=1.0, alpha=0.0, samples=5000, seed=6)
    goe = sample_ensemble("GOE", 2, variance=1.0, samples=5000, seed=7)
    for k in (0, 1):
        d = sps.ks_2samp(pm.eigenvalues[:, k], goe.eigenvalues[:, k]).statistic
        assert d < 1.63 * math.sqrt(2 / 5000)


def test_pm_interpolates_monotonically():
    # distance of the top eigenvalue law to the GUE limit shrinks with alpha
    ref = sample_ensemble("GUE", 2, variance=0.5, samples=8000, seed=10)
    dists = []
    for alpha in (0.0, 0.5, 1.0):
        pm = sample_ensemble("PM", 2, variance=1.0, alpha=alpha,
                             samples=8000, seed=11)
        dists.append(sps.ks_2samp(pm.eigenvalues[:, 1],
                                  ref.eigenvalues[:, 1]).statistic)
    assert dists[0] > dists[1] > dists[2]


def test_finite_horizon_endpoint_mass_shrinks_with_t():
    # conditioning on survival to the horizon concentrates the endpoint
    a = sample_finite_horizon_endpoint(2, 1.0, 0.3, 4000, seed=1)
    b = sample_ensemble("GOE", 2, variance=0.3, samples=4000, seed=2).eigenvalues
    # conditioned gaps are stochastically larger than the plain GOE gaps
    ga, gb = np.diff(a, axis=1)[:, 0], np.diff(b, axis=1)[:, 0]
    assert ga.mean() > gb.mean()
    assert np.all(np.diff(a, axis=1) > 0)


def test_pm_bridge_check_passes():
    reports = pm_bridge_check(2, 1.0, 0.5, samples=4000, seed=0)
    assert all(r.verdict == "pass" for r in reports)


def test_input_validation():
    with pytest.raises(ValueError):
        sample_ensemble("XYZ", 2)
    with pytest.raises(ValueError):
        sample_ensemble("PM", 2, alpha=None)
    with pytest.raises(ValueError):
        sample_ensemble("PM", 2, alpha=1.5)
    with pytest.raises(ValueError):
        eigen_density("PM", np.zeros((1, 2)))
    with pytest.raises(ValueError):
        sample_finite_horizon_endpoint(4, 1.0, 0.5, 10)
