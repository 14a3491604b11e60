"""Stochastic engines for the nonintersecting walk and diffusion families.

Rejection-conditioned lattice walkers, Euler-Maruyama integration of the
conditioned SDEs (free and wall variants, finite and infinite horizon),
Brownian non-collision estimates, and endpoint extraction for the
statistics harness.
"""

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import LatticeConfig, time_lattice
from .densities import ModelSpec, drift_batch, survival, survival_batch
from .linalg import symmetric_eigenvalues
from .special_functions import constants, h_hat_poly, h_poly

__all__ = [
    "SimConfig",
    "PathEnsemble",
    "simulate_walkers",
    "simulate_sde",
    "noncollision_mc",
    "endpoint_values",
    "sample_origin_law",
]

ACCEPTANCE_FLOOR = 1e-6
HALVING_BUDGET = 20
HORIZON_GUARD = 1e-4      # g-family integration stops at T * (1 - guard)
MAX_GRID_COLUMNS = 65


@dataclass(frozen=True)
class SimConfig:
    """Inputs of one simulation run.

    model: "walker", "sde-g" (finite horizon), or "sde-p" (h-transform).
    start: LatticeConfig for walkers; an interior configuration or None
    (degenerate origin start, realized by an exact warm-start draw) for the
    SDE modes.  t_end applies to the SDE modes only; the g-family default
    is the guarded horizon.
    """

    model: str
    spec: ModelSpec
    start: object = None
    scale: int = 1
    step: float = 1e-3
    t_end: float = None
    samples: int = 1000
    seed: int = 0
    streams: int = 1

    def __post_init__(self):
        if self.model not in ("walker", "sde-g", "sde-p"):
            raise ValueError("unknown model %r" % (self.model,))
        if self.samples < 1 or self.streams < 1 or self.scale < 1:
            raise ValueError("need samples >= 1, streams >= 1, scale >= 1")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.model == "walker":
            if not isinstance(self.start, LatticeConfig):
                raise ValueError("walker mode requires a LatticeConfig start")
            if not math.isfinite(self.spec.horizon):
                raise ValueError("walker mode requires a finite horizon")
        if self.model == "sde-g" and not math.isfinite(self.spec.horizon):
            raise ValueError("sde-g requires a finite horizon")
        if self.model == "sde-p" and math.isfinite(self.spec.horizon):
            raise ValueError("sde-p requires an infinite horizon")

    def digest(self):
        start = self.start
        if isinstance(start, LatticeConfig):
            start_repr = ("lattice", start.positions, start.wall)
        elif start is None:
            start_repr = "origin"
        else:
            start_repr = tuple(float(v) for v in np.asarray(start).ravel())
        payload = repr((self.model, self.spec.n_walkers, self.spec.horizon,
                        self.spec.wall, start_repr, self.scale, self.step,
                        self.t_end, self.samples, self.seed, self.streams))
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class PathEnsemble:
    time_grid: np.ndarray       # (n_grid,)
    paths: np.ndarray           # (samples, N, n_grid)
    accepted: int
    proposed: int
    config_digest: str

    def __post_init__(self):
        if self.accepted > self.proposed:
            raise ValueError("accepted cannot exceed proposed")
        if np.any(np.diff(self.time_grid) <= 0):
            raise ValueError("time grid must be strictly increasing")


def _stream_rng(cfg, stream):
    return np.random.Generator(
        np.random.Philox(key=[cfg.seed & 0xFFFFFFFFFFFFFFFF, stream])
    )


def _stream_quotas(samples, streams):
    base, extra = divmod(samples, streams)
    return [base + (1 if s < extra else 0) for s in range(streams)]


def _grid_columns(m):
    """Indices of recorded lattice/SDE steps: at most MAX_GRID_COLUMNS, always 0 and m."""
    if m + 1 <= MAX_GRID_COLUMNS:
        return np.arange(m + 1)
    idx = np.unique(np.round(np.linspace(0, m, MAX_GRID_COLUMNS)).astype(int))
    return idx


# ---------------------------------------------------------------------------
# Lattice walkers


def simulate_walkers(cfg, acceptance_floor=ACCEPTANCE_FLOOR):
    """Rejection sampling of nonintersecting +-1 walk tuples.

    N independent simple walks over m = 2*floor(scale^2*horizon/2) steps;
    realizations breaking strict order (or wall nonnegativity) at any step
    are discarded.  Paths are returned in diffusion scaling, position/scale
    against time step/scale^2, on a uniform subgrid.  The acceptance
    fraction accepted/proposed is an unbiased survival estimate.
    """
    if cfg.model != "walker":
        raise ValueError("simulate_walkers requires walker mode")
    u = cfg.start
    n = len(u)
    L = cfg.scale
    m = time_lattice(L, cfg.spec.horizon)
    if m < 1:
        raise ValueError("horizon too short for this scale: zero lattice steps")
    cols = _grid_columns(m)
    pos0 = np.asarray(u.positions, dtype=float)

    quotas = _stream_quotas(cfg.samples, cfg.streams)
    kept = []
    accepted = 0
    proposed = 0
    for s, quota in enumerate(quotas):
        rng = _stream_rng(cfg, s)
        got = []
        have = 0
        batch = max(4 * quota, 1024)
        while have < quota:
            steps = rng.integers(0, 2, size=(batch, m, n)) * 2 - 1
            paths = np.concatenate(
                [np.broadcast_to(pos0, (batch, 1, n)),
                 pos0 + np.cumsum(steps, axis=1)], axis=1
            )
            ok = np.all(paths[:, :, 1:] > paths[:, :, :-1], axis=(1, 2))
            if u.wall:
                ok &= np.all(paths[:, :, 0] >= 0, axis=1)
            proposed += batch
            accepted += int(ok.sum())
            good = paths[ok]
            got.append(good[: quota - have])
            have += min(len(good), quota - have)
            if proposed >= 1_000_000 and accepted / proposed < acceptance_floor:
                raise RuntimeError(
                    "walker acceptance below %g after %d proposals; "
                    "reduce the scale or walker count" % (acceptance_floor, proposed)
                )
        kept.append(np.concatenate(got, axis=0))
    paths = np.concatenate(kept, axis=0)                 # (samples, m+1, n)
    paths = paths[:, cols, :].transpose(0, 2, 1) / L     # (samples, n, grid)
    grid = cols / float(L * L)
    return PathEnsemble(time_grid=grid, paths=paths, accepted=accepted,
                        proposed=proposed, config_digest=cfg.digest())


# ---------------------------------------------------------------------------
# Exact origin-law samplers (warm starts)


def _goe_eigs(rng, n, variance, draws):
    g = rng.normal(scale=math.sqrt(variance), size=(draws, n, n))
    return symmetric_eigenvalues((g + np.swapaxes(g, 1, 2)) / 2.0)


def _gue_eigs(rng, n, variance, draws):
    g = rng.normal(scale=math.sqrt(variance), size=(draws, n, n)) \
        + 1j * rng.normal(scale=math.sqrt(variance), size=(draws, n, n))
    return symmetric_eigenvalues((g + np.conj(np.swapaxes(g, 1, 2))) / 2.0)


def _antisym_spectra(rng, n, variance, draws):
    """Positive spectra of odd antisymmetric Gaussian matrices.

    For A real antisymmetric of size 2n+1 with independent N(0, sigma^2)
    upper entries, the nonzero eigenvalues of iA come in pairs +-y with the
    positive half distributed as exp(-|y|^2/2sigma^2) prod y_i^2
    prod (y_j^2 - y_i^2)^2 on the ordered half-chamber -- exactly the
    wall h-transform origin law at time sigma^2.
    """
    dim = 2 * n + 1
    g = rng.normal(scale=math.sqrt(variance), size=(draws, dim, dim))
    a = np.triu(g, k=1)
    a = a - np.swapaxes(a, 1, 2)
    eig = symmetric_eigenvalues(1j * a)
    return eig[:, n + 1:]           # the n positive eigenvalues, ascending


def _wishart_sqrt_spectra(rng, n, variance, draws):
    """Ordered y with density proportional to exp(-|y|^2/2sigma^2) h_hat(y).

    y_i = sigma * sqrt(lambda_i) with lambda the spectrum of G G^T for G a
    real n x (n+1) standard Gaussian; that spectrum has density
    proportional to exp(-sum lambda/2) prod (lambda_j - lambda_i).
    """
    g = rng.normal(size=(draws, n, n + 1))
    lam = symmetric_eigenvalues(g @ np.swapaxes(g, 1, 2))
    return math.sqrt(variance) * np.sqrt(np.clip(lam, 0.0, None))


def _rejection_fill(propose, accept_prob, rng, samples, n, max_rounds=500):
    out = np.empty((samples, n))
    got = 0
    while got < samples:
        max_rounds -= 1
        if max_rounds < 0:
            raise RuntimeError("origin-law rejection sampler stalled")
        draw = max(2 * (samples - got), 1024)
        y = propose(draw)
        keep = rng.random(draw) < accept_prob(y)
        y = y[keep]
        take = min(len(y), samples - got)
        out[got:got + take] = y[:take]
        got += take
    return out


def _survival_rows(t, ys, wall):
    if ys.shape[-1] <= 3:
        return survival_batch(t, ys, wall)
    return np.array([survival(t, row, wall) for row in ys])


def sample_origin_law(spec, t, samples, rng):
    """Exact draws from the origin-start transition density at time t.

    Free p-family: GUE spectra.  Wall p-family: odd antisymmetric spectra.
    Finite-horizon families: the matching h-transform-free proposal is
    thinned by the non-collision probability of the remaining window,
    which is a valid acceptance probability (at most one), so the draws
    are exact, not approximate.
    """
    n, T, wall = spec.n_walkers, spec.horizon, spec.wall
    if not (0 < t <= T):
        raise ValueError("need 0 < t <= horizon")
    if math.isinf(T):
        if wall:
            return _antisym_spectra(rng, n, t, samples)
        return _gue_eigs(rng, n, t, samples)
    tau = T - t
    if t > T / 2:
        # proposal already weighted by one h factor; thinning by the
        # non-collision probability (<= 1) of the remaining window is exact
        if wall:
            propose = lambda k: _wishart_sqrt_spectra(rng, n, t, k)
        else:
            propose = lambda k: _goe_eigs(rng, n, t, k)
        accept = lambda y: _survival_rows(tau, y, wall)
        return _rejection_fill(propose, accept, rng, samples, n)
    # short-time branch: the h^2-weighted proposal cancels the vanishing
    # survival factor; accept with survival / small-gap prediction, which
    # stays below the 1.05 envelope (asserted per batch, never clipped)
    consts = constants(n)
    envelope = 1.05
    if wall:
        propose = lambda k: _antisym_spectra(rng, n, t, k)
        pred = lambda y: h_hat_poly(y / math.sqrt(tau)) / consts.c_tilde
    else:
        propose = lambda k: _gue_eigs(rng, n, t, k)
        pred = lambda y: h_poly(y / math.sqrt(tau)) / consts.c_bar

    def accept(y):
        ratio = _survival_rows(tau, y, wall) / pred(y)
        if np.any(ratio > envelope):
            raise RuntimeError("survival exceeded its small-gap envelope")
        return ratio / envelope

    return _rejection_fill(propose, accept, rng, samples, n)


# ---------------------------------------------------------------------------
# SDE integration


def _em_advance(spec, x, t, dt, rng, depth=HALVING_BUDGET):
    """One Euler-Maruyama step over [t, t+dt] for every row of x.

    Rows whose proposal leaves the chamber are re-advanced over two halved
    substeps (fresh Gaussian increments) down to the halving budget.
    """
    b = drift_batch(spec, t, x)
    prop = x + b * dt + rng.normal(scale=math.sqrt(dt), size=x.shape)
    ok = np.all(prop[:, 1:] > prop[:, :-1], axis=1)
    if spec.wall:
        ok &= prop[:, 0] > 0
    if np.all(ok):
        return prop
    if depth <= 0:
        raise RuntimeError("halving budget exhausted near t = %g" % t)
    bad = ~ok
    half = _em_advance(spec, x[bad], t, dt / 2, rng, depth - 1)
    prop[bad] = _em_advance(spec, half, t + dt / 2, dt / 2, rng, depth - 1)
    return prop


def simulate_sde(cfg):
    """Euler-Maruyama paths of the conditioned diffusion.

    Origin starts are replaced by an exact draw from the closed-form law at
    t0 = step (g-family: 1e-3 * horizon); the g-family integrates only up
    to horizon*(1 - 1e-4) where its drift blows up.  Strict ordering (and
    wall positivity) holds at every recorded time by construction.
    """
    if cfg.model not in ("sde-g", "sde-p"):
        raise ValueError("simulate_sde requires an SDE mode")
    spec = cfg.spec
    n, T = spec.n_walkers, spec.horizon
    if cfg.model == "sde-g":
        t_end = cfg.t_end if cfg.t_end is not None else T * (1.0 - HORIZON_GUARD)
        if not (t_end <= T * (1.0 - HORIZON_GUARD) + 1e-12):
            raise ValueError("g-family end time must stay below the horizon guard")
    else:
        t_end = cfg.t_end if cfg.t_end is not None else 1.0
    if cfg.start is None:
        t0 = min(1e-3 * T, cfg.step) if math.isfinite(T) else cfg.step
    else:
        t0 = 0.0
    if t_end <= t0:
        raise ValueError("end time must exceed the warm-start time")

    n_steps = max(int(math.ceil((t_end - t0) / cfg.step)), 1)
    times = t0 + (t_end - t0) * np.arange(n_steps + 1) / n_steps
    cols = _grid_columns(n_steps)

    quotas = _stream_quotas(cfg.samples, cfg.streams)
    blocks = []
    for s, quota in enumerate(quotas):
        rng = _stream_rng(cfg, s)
        if cfg.start is None:
            x = sample_origin_law(spec, t0, quota, rng)
        else:
            x0 = np.asarray(cfg.start, dtype=float)
            if np.any(np.diff(x0) <= 0) or (spec.wall and x0[0] <= 0):
                raise ValueError("SDE start must be strictly interior")
            x = np.broadcast_to(x0, (quota, n)).copy()
        rec = np.empty((quota, n, len(cols)))
        ptr = 0
        if cols[0] == 0:
            rec[:, :, 0] = x
            ptr = 1
        for k in range(n_steps):
            x = _em_advance(spec, x, times[k], times[k + 1] - times[k], rng)
            if ptr < len(cols) and cols[ptr] == k + 1:
                rec[:, :, ptr] = x
                ptr += 1
        blocks.append(rec)
    paths = np.concatenate(blocks, axis=0)
    assert np.all(paths[:, 1:, :] > paths[:, :-1, :]), "chamber order violated"
    if spec.wall:
        assert np.all(paths[:, 0, :] > 0), "wall positivity violated"
    return PathEnsemble(time_grid=times[cols], paths=paths, accepted=cfg.samples,
                        proposed=cfg.samples, config_digest=cfg.digest())


# ---------------------------------------------------------------------------
# Brownian non-collision oracle


def noncollision_mc(t, x, samples=100_000, step=1e-3, wall=False, seed=0):
    """Monte Carlo estimate of the strict-order (non-collision) probability.

    Discretized Brownian tuples; returns (estimate, standard_error).  The
    discretization bias is first order in sqrt(step) (order checks should
    budget an allowance of that size on top of 3 standard errors).
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if np.any(np.diff(x) <= 0) or (wall and x[0] < 0):
        raise ValueError("start must be an interior chamber point")
    n_steps = max(int(math.ceil(t / step)), 1)
    dt = t / n_steps
    rng = np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, 0]))
    alive_total = 0
    chunk = max(min(samples, 10_000_000 // max(n_steps * n, 1)), 1)
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        pos = np.broadcast_to(x, (b, n)).copy()
        alive = np.ones(b, dtype=bool)
        for _ in range(n_steps):
            pos[alive] += rng.normal(scale=math.sqrt(dt), size=(int(alive.sum()), n))
            ok = np.all(pos[alive][:, 1:] > pos[alive][:, :-1], axis=1)
            if wall:
                ok &= pos[alive][:, 0] > 0
            idx = np.flatnonzero(alive)
            alive[idx[~ok]] = False
            if not alive.any():
                break
        alive_total += int(alive.sum())
        done += b
    p = alive_total / samples
    se = math.sqrt(max(p * (1 - p), 1.0 / samples) / samples)
    return p, se


def endpoint_values(ens, coordinate=None, functional=None):
    """Endpoint observable of an ensemble: one coordinate or a functional of the row."""
    if ens.paths.shape[0] == 0:
        raise ValueError("empty ensemble")
    end = ens.paths[:, :, -1]
    if functional is not None:
        return np.asarray([functional(row) for row in end])
    if coordinate is None:
        raise ValueError("give a coordinate index or a functional")
    return end[:, coordinate]
