"""Continuum densities of the nonintersecting diffusions.

Karlin-McGregor determinant kernels, Pfaffian non-collision probabilities,
the finite-horizon and infinite-horizon transition densities (free and
wall-restricted), their drifts, the generalized Imhof product identity,
small-configuration survival asymptotics, and the de Bruijn
integral-to-Pfaffian reduction check.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .quadrature import chamber_integral
from .special_functions import constants, h_hat_poly, h_poly, psi, psi_hat

__all__ = [
    "ModelSpec",
    "km_density",
    "survival",
    "survival_batch",
    "g_density",
    "p_density",
    "drift",
    "drift_batch",
    "imhof_check",
    "survival_asymptotics",
    "de_bruijn_check",
]


@dataclass(frozen=True)
class ModelSpec:
    """Walker count, nonintersection horizon (math.inf for the h-transform family), wall flag."""

    n_walkers: int
    horizon: float = math.inf
    wall: bool = False

    def __post_init__(self):
        if self.n_walkers < 1:
            raise ValueError("need at least one walker")
        if not (self.horizon > 0):
            raise ValueError("horizon must be positive (math.inf selects the p-family)")


def _check_chamber(x, wall, name="x"):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("%s must be a single configuration" % name)
    if np.any(np.diff(x) <= 0):
        raise ValueError("%s must be strictly increasing" % name)
    if wall and x[0] < 0:
        raise ValueError("%s must be nonnegative behind the wall" % name)
    return x


def km_density(t, x, y, wall=False):
    """Absorbing transition density: determinant over heat kernels.

    y may carry leading batch dimensions; the last axis is the particle
    index.  With the wall, each kernel entry is the difference of the
    direct and reflected Gaussians.
    """
    if t <= 0:
        raise ValueError("elapsed time must be positive")
    x = _check_chamber(x, wall)
    y = np.asarray(y, dtype=float)
    n = x.shape[0]
    if y.shape[-1] != n:
        raise ValueError("dimension mismatch between x and y")
    xb = x.reshape((1,) * (y.ndim - 1) + (1, n))
    yb = y[..., :, None]
    norm = 1.0 / math.sqrt(2 * math.pi * t)
    ker = norm * np.exp(-((xb - yb) ** 2) / (2 * t))
    if wall:
        ker = ker - norm * np.exp(-((xb + yb) ** 2) / (2 * t))
    out = np.linalg.det(ker)
    return float(out) if out.ndim == 0 else out


def _survival_matrix(t, x, wall):
    """Skew matrix whose Pfaffian is the non-collision probability (bordered when N is odd)."""
    n = len(x)
    dim = n if n % 2 == 0 else n + 1
    f = np.zeros((dim, dim))
    if wall:
        u = x / math.sqrt(2 * t)
        for i in range(n):
            for j in range(i + 1, n):
                f[i, j] = psi_hat(u[i], u[j])
        if dim > n:
            f[:n, n] = psi(u)
    else:
        for i in range(n):
            for j in range(i + 1, n):
                f[i, j] = psi((x[j] - x[i]) / (2 * math.sqrt(t)))
        if dim > n:
            f[:n, n] = 1.0
    return f - f.T


def survival(t, x, wall=False):
    """Probability that the Brownian configuration keeps strict order up to time t.

    Pfaffian of the pair-kernel matrix; t = 0 returns 1 for interior starts.
    """
    x = _check_chamber(x, wall)
    if t < 0:
        raise ValueError("remaining time must be nonnegative")
    if t == 0:
        return 1.0
    val = linalg.pfaffian(_survival_matrix(t, x, wall))
    return float(val)


def survival_batch(t, xs, wall=False):
    """Vectorized non-collision probability over a batch of configurations, N <= 3.

    The Pfaffians collapse to short closed forms in these dimensions.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.shape[-1]
    if t == 0:
        return np.ones(xs.shape[:-1])
    if t < 0:
        raise ValueError("remaining time must be nonnegative")
    if not wall:
        if n == 1:
            return np.ones(xs.shape[:-1])
        c = 1.0 / (2 * math.sqrt(t))
        if n == 2:
            return psi(c * (xs[..., 1] - xs[..., 0]))
        if n == 3:
            p12 = psi(c * (xs[..., 1] - xs[..., 0]))
            p13 = psi(c * (xs[..., 2] - xs[..., 0]))
            p23 = psi(c * (xs[..., 2] - xs[..., 1]))
            return p12 - p13 + p23
    else:
        u = xs / math.sqrt(2 * t)
        if n == 1:
            return psi(u[..., 0])
        if n == 2:
            return psi_hat(u[..., 0], u[..., 1])
        if n == 3:
            f12 = psi_hat(u[..., 0], u[..., 1])
            f13 = psi_hat(u[..., 0], u[..., 2])
            f23 = psi_hat(u[..., 1], u[..., 2])
            return f12 * psi(u[..., 2]) - f13 * psi(u[..., 1]) + f23 * psi(u[..., 0])
    raise ValueError("survival_batch supports N <= 3; use survival per configuration")


def _log_pos(v):
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(v)


def g_density(spec, s, x, t, y):
    """Transition density of the finite-horizon nonintersecting diffusion.

    x=None marks the degenerate origin start (requires s=0), handled by the
    closed form; otherwise the ratio form
    f(t-s, y|x) * survival(T-t, y) / survival(T-s, x) is used.
    y may carry batch dimensions when N <= 3.
    """
    n, T, wall = spec.n_walkers, spec.horizon, spec.wall
    if not (0 <= s < t <= T):
        raise ValueError("need 0 <= s < t <= horizon")
    y = np.asarray(y, dtype=float)
    batched = y.ndim > 1
    surv_y = survival_batch(T - t, y, wall) if (batched or n <= 3) else survival(T - t, y, wall)
    if x is None:
        if s != 0:
            raise ValueError("the origin start requires s = 0")
        consts = constants(n)
        gauss = np.exp(-np.sum(y ** 2, axis=-1) / (2 * t))
        if wall:
            pref = consts.c_hat * T ** (n * n / 2.0) * t ** (-n * (2 * n + 1) / 2.0)
            val = pref * gauss * h_hat_poly(y) * surv_y
        else:
            pref = consts.c * T ** (n * (n - 1) / 4.0) * t ** (-n * n / 2.0)
            val = pref * gauss * h_poly(y) * surv_y
        return float(val) if np.ndim(val) == 0 else val
    x = _check_chamber(x, wall)
    surv_x = survival(T - s, x, wall) if n > 3 else float(survival_batch(T - s, x[None, :], wall)[0])
    val = km_density(t - s, x, y, wall) * surv_y / surv_x
    return float(val) if np.ndim(val) == 0 else val


def p_density(spec, s, x, t, y):
    """Transition density of the infinite-horizon (h-transform) diffusion."""
    n, wall = spec.n_walkers, spec.wall
    if not (0 <= s < t):
        raise ValueError("need 0 <= s < t")
    y = np.asarray(y, dtype=float)
    hfun = h_hat_poly if wall else h_poly
    if x is None:
        if s != 0:
            raise ValueError("the origin start requires s = 0")
        consts = constants(n)
        gauss = np.exp(-np.sum(y ** 2, axis=-1) / (2 * t))
        if wall:
            val = consts.c_hat_prime * t ** (-n * (2 * n + 1) / 2.0) * gauss * hfun(y) ** 2
        else:
            val = consts.c_prime * t ** (-n * n / 2.0) * gauss * hfun(y) ** 2
        return float(val) if np.ndim(val) == 0 else val
    x = _check_chamber(x, wall)
    val = km_density(t - s, x, y, wall) * hfun(y) / hfun(x)
    return float(val) if np.ndim(val) == 0 else val


# ---------------------------------------------------------------------------
# Drifts


def _fd_grad_log(fun, x, rel_step=1e-5):
    """Richardson-extrapolated central difference gradient of log fun."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i in range(len(x)):
        h = rel_step * (1.0 + abs(x[i]))
        vals = {}
        for step in (h, h / 2):
            xp = x.copy()
            xm = x.copy()
            xp[i] += step
            xm[i] -= step
            vals[step] = (math.log(fun(xp)) - math.log(fun(xm))) / (2 * step)
        out[i] = (4 * vals[h / 2] - vals[h]) / 3.0
    return out


def drift(spec, t, x, rel_step=1e-5):
    """Drift vector of the conditioned diffusion at time t.

    Finite horizon: gradient of log survival(T - t, .), by Richardson
    central differences.  Infinite horizon: the closed interacting form
    sum_{j != i} 1/(x_i - x_j), plus 1/x_i and 1/(x_i + x_j) terms behind
    the wall.
    """
    n, T, wall = spec.n_walkers, spec.horizon, spec.wall
    x = _check_chamber(x, wall)
    if math.isinf(T):
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        b = np.sum(1.0 / diff, axis=1)
        if wall:
            s = x[:, None] + x[None, :]
            np.fill_diagonal(s, np.inf)
            b = b + 1.0 / x + np.sum(1.0 / s, axis=1)
        return b
    if not (t < T):
        raise ValueError("the finite-horizon drift is singular at t = horizon")
    tau = T - t
    h = rel_step * (1.0 + np.abs(x).max())
    gaps = np.diff(x)
    margin = min(gaps.min() if len(gaps) else np.inf, x[0] if wall else np.inf)
    if margin < 10 * h:
        raise ValueError("configuration too close to the chamber wall for step %g; reduce rel_step" % h)
    return _fd_grad_log(lambda z: survival(tau, z, wall), x, rel_step)


def drift_batch(spec, t, xs):
    """Drift evaluated across a batch of configurations (rows strictly ordered).

    Closed forms are used wherever available (the whole infinite-horizon
    family; the finite-horizon free family for N <= 3; the wall family for
    N = 1); other cases fall back to per-row finite differences.
    """
    n, T, wall = spec.n_walkers, spec.horizon, spec.wall
    xs = np.asarray(xs, dtype=float)
    if math.isinf(T):
        diff = xs[:, :, None] - xs[:, None, :]
        diff[:, np.arange(n), np.arange(n)] = np.inf
        b = np.sum(1.0 / diff, axis=2)
        if wall:
            s = xs[:, :, None] + xs[:, None, :]
            s[:, np.arange(n), np.arange(n)] = np.inf
            b = b + 1.0 / xs + np.sum(1.0 / s, axis=2)
        return b
    tau = T - t
    root_pi = math.sqrt(math.pi)
    if not wall and n == 1:
        return np.zeros_like(xs)
    if not wall and n == 2:
        d = xs[:, 1] - xs[:, 0]
        c = 1.0 / (2 * math.sqrt(tau))
        phi = (2.0 / root_pi) * c * np.exp(-((c * d) ** 2)) / psi(c * d)
        return np.stack([-phi, phi], axis=1)
    if not wall and n == 3:
        c = 1.0 / (2 * math.sqrt(tau))
        surv = survival_batch(tau, xs, wall=False)

        def e(i, j):
            return (2.0 / root_pi) * c * np.exp(-((c * (xs[:, j] - xs[:, i])) ** 2))

        e12, e13, e23 = e(0, 1), e(0, 2), e(1, 2)
        grad = np.stack([-e12 + e13, e12 - e23, -e13 + e23], axis=1)
        return grad / surv[:, None]
    if wall and n == 1:
        u = xs[:, 0] / math.sqrt(2 * tau)
        phi = (2.0 / root_pi) * np.exp(-u ** 2) / (math.sqrt(2 * tau) * psi(u))
        return phi[:, None]
    if n <= 3:
        # vectorized central differences on the closed-form survival,
        # step capped per row by the distance to the chamber boundary
        margin = np.diff(xs, axis=1).min(axis=1)
        if wall:
            margin = np.minimum(margin, xs[:, 0])
        h = np.minimum(1e-5 * (1.0 + np.abs(xs).max(axis=1)), 0.05 * margin)
        out = np.empty_like(xs)
        for i in range(n):
            shift = np.zeros_like(xs)
            shift[:, i] = h
            sp = survival_batch(tau, xs + shift, wall)
            sm = survival_batch(tau, xs - shift, wall)
            out[:, i] = (np.log(sp) - np.log(sm)) / (2 * h)
        return out
    out = np.empty_like(xs)
    for r in range(xs.shape[0]):
        out[r] = drift(spec, t, xs[r])
    return out


# ---------------------------------------------------------------------------
# Identities and asymptotics


def imhof_check(spec, times, points):
    """Relative residual of the generalized meander/Bessel product identity.

    times must be strictly increasing, start after 0, and end at the
    horizon; points are the configurations visited at those times.  The
    first factor always starts from the origin.
    """
    n, T, wall = spec.n_walkers, spec.horizon, spec.wall
    times = [float(t) for t in times]
    if math.isinf(T):
        raise ValueError("the identity compares against a finite horizon")
    if len(times) != len(points) or not times:
        raise ValueError("need one configuration per time")
    if any(b <= a for a, b in zip(times, times[1:])) or times[0] <= 0 or times[-1] != T:
        raise ValueError("times must be strictly increasing and end at the horizon")
    pts = [np.asarray(p, dtype=float) for p in points]
    consts = constants(n)

    log_lhs = math.log(g_density(spec, 0.0, None, times[0], pts[0]))
    log_rhs = math.log(p_density(spec, 0.0, None, times[0], pts[0]))
    for i in range(1, len(times)):
        log_lhs += math.log(g_density(spec, times[i - 1], pts[i - 1], times[i], pts[i]))
        log_rhs += math.log(p_density(spec, times[i - 1], pts[i - 1], times[i], pts[i]))
    if wall:
        log_rhs += math.log(consts.c_tilde) + (n * n / 2.0) * math.log(T)
        log_rhs -= math.log(h_hat_poly(pts[-1]))
    else:
        log_rhs += math.log(consts.c_bar) + (n * (n - 1) / 4.0) * math.log(T)
        log_rhs -= math.log(h_poly(pts[-1]))
    return abs(math.expm1(log_lhs - log_rhs))


def survival_asymptotics(t, x, wall=False):
    """Exact Pfaffian survival against its small-configuration prediction.

    Returns (exact, predicted, ratio); the ratio tends to 1 as |x|/sqrt(t)
    shrinks.
    """
    if t <= 0:
        raise ValueError("time must be positive")
    x = _check_chamber(x, wall)
    exact = survival(t, x, wall)
    consts = constants(len(x))
    if wall:
        pred = h_hat_poly(x / math.sqrt(t)) / consts.c_tilde
    else:
        pred = h_poly(x / math.sqrt(t)) / consts.c_bar
    return exact, pred, exact / pred


def de_bruijn_check(n, kernel, x, order=120, span=7.0):
    """Residual of the chamber-integral-of-determinant = Pfaffian reduction.

    kernel "gaussian": z(a, b) = exp(-(a-b)^2)/sqrt(pi) on the full line;
    kernel "wall-gaussian": the reflected difference restricted to the
    nonnegative half-line.  n <= 3.
    """
    if n < 1 or n > 3:
        raise ValueError("quadrature check supports n <= 3")
    wall = kernel == "wall-gaussian"
    if kernel not in ("gaussian", "wall-gaussian"):
        raise ValueError("unknown kernel %r" % (kernel,))
    x = _check_chamber(x, wall)

    if wall:
        def z(a, b):
            return (np.exp(-((a - b) ** 2)) - np.exp(-((a + b) ** 2))) / math.sqrt(math.pi)
        lo, hi = 0.0, float(x.max() + span)
    else:
        def z(a, b):
            return np.exp(-((a - b) ** 2)) / math.sqrt(math.pi)
        lo, hi = float(x.min() - span), float(x.max() + span)

    def integrand(y):
        mats = z(x.reshape((1,) * (y.ndim - 1) + (n, 1)), y[..., None, :])
        return np.linalg.det(mats)

    integral = chamber_integral(integrand, n, lo, hi, order=order)

    dim = n if n % 2 == 0 else n + 1
    f = np.zeros((dim, dim))
    for i in range(n):
        for j in range(i + 1, n):
            if wall:
                f[i, j] = psi_hat(x[i], x[j])
            else:
                f[i, j] = psi((x[j] - x[i]) / math.sqrt(2.0))
    if dim > n:
        f[:n, n] = psi(x) if wall else 1.0
    pf = linalg.pfaffian(f - f.T)
    return abs(integral - pf) / abs(pf)
