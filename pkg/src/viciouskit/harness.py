"""Statistics and verification harness.

Kolmogorov-Smirnov machinery (with optional evaluation grids for lattice
observables), histogramming, quadrature marginalization of chamber
densities, and the named verification suites aggregating every identity
in the package.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .special_functions import _gl_nodes

__all__ = [
    "Histogram",
    "StatReport",
    "ks_test",
    "ks_two_sample",
    "make_histogram",
    "marginalize",
    "marginal_cdf",
    "verify_suite",
    "SUITES",
]


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    total: int

    def __post_init__(self):
        if np.any(np.diff(self.edges) <= 0):
            raise ValueError("edges must be strictly ascending")
        if int(self.counts.sum()) != self.total:
            raise ValueError("counts must sum to total")


@dataclass
class StatReport:
    test_name: str
    statistic: float
    critical_value: float
    n_samples: int
    verdict: str = field(init=False)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.verdict = "pass" if self.statistic <= self.critical_value else "fail"

    def as_dict(self):
        return {
            "test_name": self.test_name,
            "statistic": self.statistic,
            "critical_value": self.critical_value,
            "n_samples": self.n_samples,
            "verdict": self.verdict,
            "metadata": {k: _plain(v) for k, v in self.metadata.items()},
        }


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


def _ks_coefficient(level):
    # asymptotic sup |B(F)| quantile: 1.628 at the 1% level
    return float(sps.kstwobign.isf(level))


def ks_test(samples, cdf, level=0.01, name="ks", eval_points=None, metadata=None):
    """One-sample Kolmogorov-Smirnov test against a callable CDF.

    With eval_points the statistic is the discrepancy on that grid only --
    use lattice midpoints for discrete-valued samples, where the empirical
    CDF is free of the half-atom bias of the raw supremum.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n < 10:
        raise ValueError("need at least 10 samples")
    if eval_points is None:
        f = np.asarray(cdf(x), dtype=float)
        if np.any(np.diff(f) < -1e-12) or f.min() < -1e-9 or f.max() > 1 + 1e-9:
            raise ValueError("cdf must be monotone into [0, 1]")
        d = max(np.abs(np.arange(1, n + 1) / n - f).max(),
                np.abs(np.arange(n) / n - f).max())
    else:
        pts = np.asarray(eval_points, dtype=float)
        emp = np.searchsorted(x, pts, side="right") / n
        d = np.abs(emp - np.asarray(cdf(pts), dtype=float)).max()
    crit = _ks_coefficient(level) / math.sqrt(n)
    md = dict(metadata or {})
    md["level"] = level
    if eval_points is not None:
        md["eval_grid"] = "supplied (%d points)" % len(eval_points)
    return StatReport(name, float(d), crit, n, metadata=md)


def ks_two_sample(a, b, level=0.01, name="ks2", metadata=None):
    """Two-sample Kolmogorov-Smirnov test with asymptotic critical value."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) < 10 or len(b) < 10:
        raise ValueError("need at least 10 samples per side")
    d = float(sps.ks_2samp(a, b, method="asymp").statistic)
    crit = _ks_coefficient(level) * math.sqrt((len(a) + len(b)) / (len(a) * len(b)))
    md = dict(metadata or {})
    md["level"] = level
    return StatReport(name, d, crit, len(a) + len(b), metadata=md)


def make_histogram(values, bins=50, range_=None):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("empty sample")
    counts, edges = np.histogram(values, bins=bins, range=range_)
    return Histogram(edges=edges, counts=counts, total=int(counts.sum()))


# ---------------------------------------------------------------------------
# Quadrature marginalization (N <= 3)


def _gl(a, b, order):
    xi, wi = _gl_nodes(order)
    return a + 0.5 * (xi + 1.0) * (b - a), 0.5 * wi * (b - a)


def marginalize(density, n, coordinate, grid, lo, hi, order=80):
    """Marginal density of one coordinate of an ordered-chamber density.

    density takes an (..., n) array; returns (values on grid, normalization
    drift), drift being |trapezoid integral - 1|.
    """
    grid = np.asarray(grid, dtype=float)
    if not (0 <= coordinate < n):
        raise ValueError("coordinate out of range")
    if n == 1:
        vals = density(grid[:, None])
    elif n == 2:
        vals = np.empty_like(grid)
        for i, g in enumerate(grid):
            if coordinate == 0:
                y, w = _gl(g, hi, order)
                pts = np.stack([np.full_like(y, g), y], axis=-1)
            else:
                y, w = _gl(lo, g, order)
                pts = np.stack([y, np.full_like(y, g)], axis=-1)
            vals[i] = float(np.sum(density(pts) * w))
    elif n == 3:
        vals = np.empty_like(grid)
        for i, g in enumerate(grid):
            if coordinate == 0:
                pts2, w2 = _ordered2(g, hi, order)
                pts = np.concatenate([np.full(pts2.shape[:-1] + (1,), g), pts2], axis=-1)
            elif coordinate == 2:
                pts2, w2 = _ordered2(lo, g, order)
                pts = np.concatenate([pts2, np.full(pts2.shape[:-1] + (1,), g)], axis=-1)
            else:
                ya, wa = _gl(lo, g, order)
                yb, wb = _gl(g, hi, order)
                pts = np.stack(np.broadcast_arrays(ya[:, None], np.full((order, order), g),
                                                   yb[None, :]), axis=-1)
                w2 = wa[:, None] * wb[None, :]
            vals[i] = float(np.sum(density(pts) * w2))
    else:
        raise ValueError("marginalize supports n <= 3")
    drift = abs(float(np.trapezoid(vals, grid)) - 1.0)
    return vals, drift


def _ordered2(lo, hi, order):
    from .quadrature import ordered_grid

    return ordered_grid(2, lo, hi, order)


def marginal_cdf(density, n, coordinate, lo, hi, grid_size=400, order=80):
    """Callable CDF of one coordinate, built from the quadrature marginal.

    The table is renormalized; the raw normalization drift is returned as
    the second element.
    """
    grid = np.linspace(lo, hi, grid_size)
    vals, drift = marginalize(density, n, coordinate, grid, lo, hi, order=order)
    cum = np.concatenate([[0.0], np.cumsum((vals[1:] + vals[:-1]) / 2 * np.diff(grid))])
    cum /= cum[-1]

    def cdf(x):
        return np.clip(np.interp(x, grid, cum, left=0.0, right=1.0), 0.0, 1.0)

    return cdf, drift


# ---------------------------------------------------------------------------
# Verification suites


SUITES = ("identities", "combinatorics", "montecarlo", "rmt", "all")


def _report(name, residual, tol, n=0, **md):
    md.update(md.pop("metadata", {}))
    return StatReport(name, float(residual), float(tol), n, metadata=md)


def _suite_identities(samples, seed):
    import math as _m

    from .combinatorics import LatticeConfig, scaled_survival
    from .densities import (ModelSpec, de_bruijn_check, g_density, imhof_check,
                            p_density, survival_asymptotics)
    from .quadrature import ordered_grid
    from .rmt import eigen_density
    from .special_functions import mehta_integral, mehta_integral_quadrature

    out = []
    rng = np.random.Generator(np.random.Philox(key=[seed, 10]))

    # normalization of the four origin densities, N = 2
    for wall in (False, True):
        lo = 0.0 if wall else -8.0
        pts, wts = ordered_grid(2, lo, 8.0, order=120)
        flat = pts.reshape(-1, 2)
        for fam, f in (("g", g_density), ("p", p_density)):
            spec = ModelSpec(2, horizon=2.0 if fam == "g" else _m.inf, wall=wall)
            dens = f(spec, 0.0, None, 1.0, flat).reshape(wts.shape)
            out.append(_report("normalization_%s%s_n2" % (fam, "_wall" if wall else ""),
                               abs(float((dens * wts).sum()) - 1.0), 1e-6))

    # Imhof product identity on randomized instances
    worst = {(n, wall): 0.0 for n in (1, 2, 3) for wall in (False, True)}
    reps = max(samples // 500, 4)
    for n in (1, 2, 3):
        for wall in (False, True):
            for _ in range(reps):
                T = 0.5 + 2 * rng.random()
                k = int(rng.integers(1, 4))
                times = np.sort(rng.random(k)) * 0.9 * T
                times = list(times[times > 0.05]) + [T]
                pts = []
                for _t in times:
                    x = np.sort(rng.random(n) * 2 + (0.1 if wall else -1.0))
                    while np.any(np.diff(x) < 0.05):
                        x = np.sort(rng.random(n) * 2 + (0.1 if wall else -1.0))
                    pts.append(x)
                spec = ModelSpec(n, horizon=T, wall=wall)
                worst[(n, wall)] = max(worst[(n, wall)], imhof_check(spec, times, pts))
            out.append(_report("imhof_n%d%s" % (n, "_wall" if wall else ""),
                               worst[(n, wall)], 1e-8, reps))

    # de Bruijn reduction
    for n, kernel, tol in ((2, "gaussian", 1e-6), (2, "wall-gaussian", 1e-6),
                           (3, "gaussian", 1e-4)):
        x = np.array([0.3, 1.1, 2.2][:n])
        out.append(_report("de_bruijn_%s_n%d" % (kernel, n),
                           de_bruijn_check(n, kernel, x), tol))

    # survival asymptotics sweep: error shrinks along eps = .2, .1, .05
    for n in (2, 3):
        for wall in (False, True):
            errs = []
            base = np.arange(1, n + 1, dtype=float)
            for eps in (0.2, 0.1, 0.05):
                _, _, r = survival_asymptotics(1.0, eps * base / base.max(), wall)
                errs.append(abs(1 - r))
            ok = errs[0] > errs[1] > errs[2] and errs[2] < 0.05
            out.append(_report("asymptotics_n%d%s" % (n, "_wall" if wall else ""),
                               errs[2] if ok else 1.0, 0.05, metadata={"sweep": errs}))

    # GOE/GUE pointwise identities
    for n in (1, 2, 3):
        y = np.sort(rng.random(n) * 2 - 1.0)
        while n > 1 and np.any(np.diff(y) < 0.1):
            y = np.sort(rng.random(n) * 2 - 1.0)
        T, t = 1.7, 0.8
        g = g_density(ModelSpec(n, horizon=T), 0.0, None, T, y)
        out.append(_report("goe_identity_n%d" % n,
                           abs(g / (math.factorial(n) * eigen_density("GOE", y, T)) - 1.0),
                           1e-10))
        p = p_density(ModelSpec(n), 0.0, None, t, y)
        out.append(_report("gue_identity_n%d" % n,
                           abs(p / (math.factorial(n) * eigen_density("GUE", y, t)) - 1.0),
                           1e-10))

    # Mehta integrals
    for n in (1, 2, 3):
        for weight in ("plain", "squared-diff-abs"):
            closed = mehta_integral(n, 0.5, 0.5, weight=weight)
            quad = mehta_integral_quadrature(n, 0.5, 0.5, weight=weight)
            out.append(_report("mehta_%s_n%d" % (weight, n),
                               abs(quad / closed - 1.0), 1e-6))

    # lattice survival vs scaling prediction; the wall run keeps the start
    # proportional to the scale (the discrete boundary shifts fixed starts
    # by one lattice unit, so fixed-u ratios do not converge behind the wall)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        _, _, ratio = scaled_survival(8, 1.0, LatticeConfig((0, 2)))
        out.append(_report("scaled_survival", abs(1 - ratio), 0.05))
        _, _, ratio = scaled_survival(32, 16.0, LatticeConfig((32, 64), wall=True))
        out.append(_report("scaled_survival_wall", abs(1 - ratio), 0.05))
    return out


def _suite_combinatorics(samples, seed):
    from fractions import Fraction

    from .combinatorics import (LatticeConfig, count_paths, oracle_count_dp,
                                survival_probability)

    out = []
    mismatches = 0
    checked = 0
    starts = [(0, 2), (0, 4), (2, 6), (0, 2, 4), (0, 4, 6)]
    for wall in (False, True):
        for pos in starts:
            cfg = LatticeConfig(pos, wall=wall)
            for m in (1, 2, 3, 4, 6):
                dp = oracle_count_dp(m, cfg)
                det_total = 0
                for v, cnt in dp.items():
                    det = count_paths(m, cfg, v)
                    checked += 1
                    if det.value != cnt.value:
                        mismatches += 1
                    det_total += det.value
                surv = survival_probability(m, cfg)
                dp_total = sum(c.value for c in dp.values())
                if surv != Fraction(dp_total, 1 << (m * len(pos))):
                    mismatches += 1
    out.append(_report("count_vs_dp", mismatches, 0, checked))
    return out


def _suite_montecarlo(samples, seed):
    import math as _m

    from .combinatorics import LatticeConfig, survival_probability
    from .densities import ModelSpec, survival
    from .montecarlo import (SimConfig, endpoint_values, noncollision_mc,
                             sample_origin_law, simulate_sde, simulate_walkers)

    out = []
    level = 0.01 / 4     # Bonferroni across the KS tests of this suite

    # walker acceptance vs exact survival
    for wall in (False, True):
        cfg = SimConfig("walker", ModelSpec(2, horizon=2.0, wall=wall),
                        start=LatticeConfig((0, 2), wall=wall),
                        samples=min(samples, 2000), seed=seed)
        ens = simulate_walkers(cfg)
        exact = float(survival_probability(2, cfg.start))
        se = _m.sqrt(exact * (1 - exact) / ens.proposed)
        out.append(_report("walker_acceptance%s" % ("_wall" if wall else ""),
                           abs(ens.accepted / ens.proposed - exact), 3 * se,
                           ens.proposed, exact=exact))

    # Brownian non-collision vs Pfaffian (bias allowance ~ c sqrt(step))
    step = 1e-3
    for n, x, wall in ((2, (0.0, 1.0), False), (3, (0.0, 1.0, 2.0), False),
                       (2, (0.5, 1.5), True)):
        est, se = noncollision_mc(1.0, x, samples=min(samples * 4, 40_000),
                                  step=step, wall=wall, seed=seed)
        exact = survival(1.0, np.array(x, dtype=float), wall)
        allowance = 0.5 * _m.sqrt(step)
        out.append(_report("noncollision_n%d%s" % (n, "_wall" if wall else ""),
                           abs(est - exact), 3 * se + allowance, metadata={"exact": exact}))

    # SDE endpoints vs exact origin laws
    rng = np.random.Generator(np.random.Philox(key=[seed, 30]))
    k = min(samples, 3000)
    ens = simulate_sde(SimConfig("sde-p", ModelSpec(2), step=1e-3, t_end=1.0,
                                 samples=k, seed=seed))
    ref = sample_origin_law(ModelSpec(2), 1.0, k, rng)
    out.append(ks_two_sample(endpoint_values(ens, 1), ref[:, 1], level=level,
                             name="sde_p_n2_endpoint"))
    ensb = simulate_sde(SimConfig("sde-p", ModelSpec(1, wall=True), step=1e-3,
                                  t_end=1.0, samples=k, seed=seed))
    out.append(ks_test(endpoint_values(ensb, 0), sps.chi(3).cdf, level=level,
                       name="sde_bessel_endpoint"))

    # walker endpoint gap vs the exact conditioned-gap law (lattice midpoints)
    L = 16
    spec = ModelSpec(2, horizon=1.0)
    cfgw = SimConfig("walker", spec, start=LatticeConfig((0, 2)), scale=L,
                     samples=min(samples, 4000), seed=seed)
    ensw = simulate_walkers(cfgw)
    gap = (endpoint_values(ensw, 1) - endpoint_values(ensw, 0)) / _m.sqrt(2)
    cdf = walker_gap_cdf(2.0 / L, float(ensw.time_grid[-1]))
    spacing = 2.0 / (L * _m.sqrt(2))
    grid = (np.arange(6 * L) + 0.5) * spacing
    out.append(ks_test(gap, cdf, level=level, name="walker_gap_fclt_L16",
                       eval_points=grid))
    return out


def walker_gap_cdf(start_gap, t):
    """CDF of (y2 - y1)/sqrt(2) under the two-walker conditioned law.

    Closed form: the rotated gap coordinate is a Brownian motion started at
    start_gap/sqrt(2) conditioned to stay positive up to t (reflection
    difference of Gaussians).
    """
    from .special_functions import psi

    gx = start_gap / math.sqrt(2)
    st = math.sqrt(t)
    z = psi(gx / math.sqrt(2 * t))

    def cdf(g):
        g = np.asarray(g, dtype=float)
        a = sps.norm.cdf((g - gx) / st) - sps.norm.cdf(-gx / st)
        b = sps.norm.cdf((g + gx) / st) - sps.norm.cdf(gx / st)
        return np.clip((a - b) / z, 0.0, 1.0)

    return cdf


def _suite_rmt(samples, seed):
    import math as _m

    from .quadrature import ordered_grid
    from .rmt import eigen_density, pm_bridge_check, sample_ensemble

    out = []
    level = 0.01 / 8

    # sampled spectra vs closed forms, per coordinate
    k = min(samples, 5000)
    for kind in ("GOE", "GUE"):
        for n in (2, 3):
            sample = sample_ensemble(kind, n, variance=1.0, samples=k, seed=seed)
            dens = lambda pts: eigen_density(kind, pts) * math.factorial(n)
            for c in range(n):
                cdf, drift = marginal_cdf(dens, n, c, -6.0, 6.0, order=60)
                out.append(ks_test(sample.eigenvalues[:, c], cdf, level=level,
                                   name="%s_n%d_coord%d" % (kind, n, c),
                                   metadata={"marginal_drift": drift}))

    # eigen_density normalization over the chamber (N = 2)
    pts, wts = ordered_grid(2, -7.0, 7.0, order=120)
    dens = eigen_density("GUE", pts.reshape(-1, 2)).reshape(wts.shape) * 2
    out.append(_report("gue_density_normalization_n2",
                       abs(float((dens * wts).sum()) - 1.0), 1e-6))

    # PM(alpha=1) degenerates to GUE; its total variance 2v^2 = 1/(1+alpha^2)
    # halves at alpha = 1, so the matching GUE runs at variance/2
    pm1 = sample_ensemble("PM", 2, alpha=1.0, samples=k, seed=seed).eigenvalues
    gue = sample_ensemble("GUE", 2, variance=0.5, samples=k, seed=seed + 1).eigenvalues
    out.append(ks_two_sample(pm1[:, 1], gue[:, 1], level=level, name="pm_alpha1_is_gue"))

    # bridge between the finite-horizon law and the interpolating ensemble
    for rep in pm_bridge_check(2, 1.0, 0.5, samples=min(samples, 5000),
                               seed=seed, level=level):
        out.append(rep)
    return out


def verify_suite(suite, samples=2000, seed=0):
    """Run one named verification battery; returns a list of StatReports."""
    if suite not in SUITES:
        raise ValueError("unknown suite %r (choose from %s)" % (suite, ", ".join(SUITES)))
    runners = {
        "identities": _suite_identities,
        "combinatorics": _suite_combinatorics,
        "montecarlo": _suite_montecarlo,
        "rmt": _suite_rmt,
    }
    names = list(runners) if suite == "all" else [suite]
    reports = []
    for nm in names:
        reports.extend(runners[nm](samples, seed))
    return reports
