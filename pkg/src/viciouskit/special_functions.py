"""Scalar and symmetric-function kernels for the walker model.

Holds the Gaussian mass function psi, the two-rectangle wall kernel
psi_hat, the Vandermonde-type chamber polynomials, Schur and symplectic
characters with confluent evaluation, the model constants, and the two
Mehta-type Gaussian integrals.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

__all__ = [
    "psi",
    "psi_hat",
    "h_poly",
    "h_hat_poly",
    "schur",
    "sp_character",
    "schur_principal",
    "sp_principal",
    "ModelConstants",
    "constants",
    "mehta_integral",
    "mehta_integral_quadrature",
]


def psi(u):
    """Normalized Gaussian mass (2/sqrt(pi)) * int_0^u exp(-v^2) dv."""
    return erf(u)


# ---------------------------------------------------------------------------
# Gauss-Legendre machinery (vectorized over broadcastable endpoints)

_GL_CACHE = {}


def _gl_nodes(order):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def _gl_integrate(f, a, b, order=32, panels=8):
    """Composite Gauss-Legendre integral of f over [a, b].

    a, b may be arrays (broadcast); f must accept arrays.
    """
    xi, wi = _gl_nodes(order)
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    edges = np.linspace(0.0, 1.0, panels + 1)
    total = np.zeros(a.shape)
    span = b - a
    for k in range(panels):
        lo = a + span * edges[k]
        hi = a + span * edges[k + 1]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        # nodes along a new leading axis
        pts = mid[None, ...] + half[None, ...] * xi.reshape((-1,) + (1,) * a.ndim if a.ndim else (-1,))
        vals = f(pts)
        total = total + half * np.tensordot(wi, vals, axes=(0, 0))
    return total


def psi_hat(u1, u2, order=32, panels=8):
    """Two-rectangle double integral kernel for the wall survival Pfaffian.

    (2/pi) [ int_0^{u1} dv1 int_{u1-u2}^{u2-u1} dv2 e^{-v1^2-(v1-v2)^2}
           - int_{u1}^{u2} dv1 int_{u2-u1}^{u1+u2} dv2 e^{-v1^2-(v1-v2)^2} ].

    The inner v2 integral is done in closed form with erf, the outer one
    by composite Gauss-Legendre.  Accepts broadcastable arrays with
    0 <= u1 <= u2 elementwise.
    """
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    if np.any(u1 < 0) or np.any(u2 < u1):
        raise ValueError("psi_hat requires 0 <= u1 <= u2")

    # int_a^b e^{-(v1-v2)^2} dv2 = (sqrt(pi)/2) [erf(v1-a) - erf(v1-b)]
    def inner1(v1):
        return np.exp(-v1 ** 2) * (erf(v1 - (u1 - u2)) - erf(v1 - (u2 - u1)))

    def inner2(v1):
        return np.exp(-v1 ** 2) * (erf(v1 - (u2 - u1)) - erf(v1 - (u1 + u2)))

    t1 = _gl_integrate(inner1, np.zeros_like(u1), u1, order, panels)
    t2 = _gl_integrate(inner2, u1, u2, order, panels)
    return (t1 - t2) / math.sqrt(math.pi)


def h_poly(x):
    """Product of coordinate differences prod_{i<j} (x_j - x_i)."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    out = np.ones(x.shape[:-1])
    for i in range(n):
        for j in range(i + 1, n):
            out = out * (x[..., j] - x[..., i])
    return out if out.ndim else float(out)


def h_hat_poly(x):
    """Wall chamber polynomial prod_{i<j} (x_j^2 - x_i^2) * prod_i x_i."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    out = np.prod(x, axis=-1)
    for i in range(n):
        for j in range(i + 1, n):
            out = out * (x[..., j] ** 2 - x[..., i] ** 2)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Alternant ratios (Schur / symplectic characters)
#
# Each column is a short list of monomial terms (coeff, power); the ratio of
# two alternants det(f_j(z_i)) / det(g_j(z_i)) is evaluated directly when the
# nodes are well separated, and through Hermite divided differences (the
# common Vandermonde factors cancel) when nodes nearly coincide.


def _monomial_dd(nodes, terms):
    """Divided-difference column for f(z) = sum c * z^p over possibly repeated nodes.

    Uses the Hermite-Newton table; confluent entries are f^{(k)}(z)/k!.
    """
    n = len(nodes)

    def deriv(z, k):
        tot = 0.0
        for c, p in terms:
            fall = 1.0
            for r in range(k):
                fall *= (p - r)
            tot += c * fall * z ** (p - k)
        return tot

    # standard Hermite divided-difference triangle
    table = [[0.0] * n for _ in range(n)]
    for i in range(n):
        table[i][0] = deriv(nodes[i], 0)
    for j in range(1, n):
        for i in range(n - j):
            if nodes[i + j] == nodes[i]:
                table[i][j] = deriv(nodes[i], j) / math.factorial(j)
            else:
                table[i][j] = (table[i + 1][j - 1] - table[i][j - 1]) / (nodes[i + j] - nodes[i])
    return [table[0][j] for j in range(n)]


def _alternant_ratio(z, num_cols, den_cols, coincident_tol=1e-6):
    """det(num_cols_j(z_i)) / det(den_cols_j(z_i)) with confluent fallback."""
    z = np.asarray(z, dtype=float)
    n = len(z)
    scale = np.max(np.abs(z))
    gaps = np.abs(z[:, None] - z[None, :]) + np.eye(n) * (scale + 1.0)
    if gaps.min() > coincident_tol * max(scale, 1.0):
        num = np.empty((n, n))
        den = np.empty((n, n))
        for j in range(n):
            num[:, j] = sum(c * z ** p for c, p in num_cols[j])
            den[:, j] = sum(c * z ** p for c, p in den_cols[j])
        return float(np.linalg.det(num) / np.linalg.det(den))

    # confluent path: snap near-equal nodes, use Hermite divided differences;
    # the Vandermonde-type factors of the two alternants cancel in the ratio.
    order = np.argsort(z)
    zs = z[order]
    snapped = list(zs)
    for i in range(1, n):
        if abs(snapped[i] - snapped[i - 1]) <= coincident_tol * max(scale, 1.0):
            snapped[i] = snapped[i - 1]
    num = np.empty((n, n))
    den = np.empty((n, n))
    for j in range(n):
        num[:, j] = _monomial_dd(snapped, num_cols[j])
        den[:, j] = _monomial_dd(snapped, den_cols[j])
    return float(np.linalg.det(num) / np.linalg.det(den))


def _check_partition(lam, n):
    lam = list(lam)
    if len(lam) != n:
        raise ValueError("partition length must match number of variables")
    if any(a < b for a, b in zip(lam, lam[1:])) or lam[-1] < 0:
        raise ValueError("partition parts must be nonincreasing and nonnegative")
    return lam


def schur_principal(lam):
    """Schur polynomial at z = (1, ..., 1): prod_{i<j} (l_i - l_j + j - i)/(j - i)."""
    n = len(lam)
    lam = _check_partition(lam, n)
    out = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            out *= (lam[i] - lam[j] + j - i) / (j - i)
    return out


def schur(lam, z):
    """Schur polynomial as the bialternant det(z_i^{l_j+N-j}) / det(z_i^{N-j})."""
    z = np.asarray(z, dtype=float)
    n = len(z)
    lam = _check_partition(lam, n)
    if np.any(z <= 0):
        raise ValueError("schur requires positive variables")
    if np.allclose(z, 1.0, rtol=0, atol=1e-12):
        return schur_principal(lam)
    num_cols = [[(1.0, lam[j] + n - j - 1)] for j in range(n)]
    den_cols = [[(1.0, n - j - 1)] for j in range(n)]
    return _alternant_ratio(z, num_cols, den_cols)


def sp_principal(lam):
    """Symplectic character at z = (1, ..., 1)."""
    n = len(lam)
    lam = _check_partition(lam, n)
    ell = [lam[j - 1] + n - j + 1 for j in range(1, n + 1)]
    m = [n - j + 1 for j in range(1, n + 1)]
    out = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            out *= (ell[j] ** 2 - ell[i] ** 2) / (m[j] ** 2 - m[i] ** 2)
    for j in range(n):
        out *= ell[j] / m[j]
    return out


def sp_character(lam, z):
    """Symplectic character det(z_i^{l_j} - z_i^{-l_j}) / det(z_i^{m_j} - z_i^{-m_j}).

    l_j = lam_j + N - j + 1 and m_j = N - j + 1.
    """
    z = np.asarray(z, dtype=float)
    n = len(z)
    lam = _check_partition(lam, n)
    if np.any(z <= 0):
        raise ValueError("sp_character requires positive variables")
    if np.allclose(z, 1.0, rtol=0, atol=1e-12):
        return sp_principal(lam)
    ell = [lam[j - 1] + n - j + 1 for j in range(1, n + 1)]
    m = [n - j + 1 for j in range(1, n + 1)]
    num_cols = [[(1.0, ell[j]), (-1.0, -ell[j])] for j in range(n)]
    den_cols = [[(1.0, m[j]), (-1.0, -m[j])] for j in range(n)]
    # z = 1 is a common zero of every column; nudge exactly-one entries so the
    # generic path stays out of 0/0 when other entries are far away.
    if np.any(np.abs(z - 1.0) < 1e-12):
        z = np.where(np.abs(z - 1.0) < 1e-12, 1.0 + 1e-7, z)
    return _alternant_ratio(z, num_cols, den_cols)


# ---------------------------------------------------------------------------
# Model constants


@dataclass(frozen=True)
class ModelConstants:
    n_walkers: int
    c: float            # finite-horizon family, origin start
    c_prime: float      # infinite-horizon family, origin start
    c_bar: float        # ratio c / c_prime
    c_hat: float        # wall finite-horizon family
    c_hat_prime: float  # wall infinite-horizon family
    c_tilde: float      # ratio c_hat / c_hat_prime


def constants(n):
    """All six model normalization constants for n walkers."""
    if n < 1:
        raise ValueError("need at least one walker")
    lg_half = sum(math.lgamma(j / 2.0) for j in range(1, n + 1))
    lg_int = sum(math.lgamma(j) for j in range(1, n + 1))
    lg_2int = sum(math.lgamma(2 * j) for j in range(1, n + 1))
    c = math.exp(-0.5 * n * math.log(2) - lg_half)
    c_prime = math.exp(-0.5 * n * math.log(2 * math.pi) - lg_int)
    c_hat = math.exp(-lg_int)
    c_hat_prime = math.exp(0.5 * n * math.log(2 / math.pi) - lg_2int)
    return ModelConstants(
        n_walkers=n,
        c=c,
        c_prime=c_prime,
        c_bar=c / c_prime,
        c_hat=c_hat,
        c_hat_prime=c_hat_prime,
        c_tilde=c_hat / c_hat_prime,
    )


# ---------------------------------------------------------------------------
# Mehta-type Gaussian integrals


def mehta_integral(n, gamma, a, weight="plain"):
    """Closed form of the two Gaussian ensemble integrals.

    weight="plain":
        int_{R^n} e^{-a|u|^2} prod_{i<j} |u_j-u_i|^{2 gamma} du
        = (2 pi)^{n/2} (2a)^{-n(gamma(n-1)+1)/2} prod_i Gamma(1+i gamma)/Gamma(1+gamma)

    weight="squared-diff-abs":
        int_{R^n} e^{-|u|^2/2} prod_{i<j} |u_j^2-u_i^2|^{2 gamma} prod_j |u_j|^{2a-1} du
        = 2^{an + gamma n(n-1)} prod_j Gamma(1+j gamma) Gamma(a+gamma(j-1)) / Gamma(1+gamma)
    """
    if n < 1 or gamma <= 0 or a <= 0:
        raise ValueError("parameters out of range")
    if weight == "plain":
        lg = 0.5 * n * math.log(2 * math.pi)
        lg -= 0.5 * n * (gamma * (n - 1) + 1) * math.log(2 * a)
        lg += sum(math.lgamma(1 + i * gamma) - math.lgamma(1 + gamma) for i in range(1, n + 1))
        return math.exp(lg)
    if weight == "squared-diff-abs":
        lg = (a * n + gamma * n * (n - 1)) * math.log(2)
        lg += sum(
            math.lgamma(1 + j * gamma) + math.lgamma(a + gamma * (j - 1)) - math.lgamma(1 + gamma)
            for j in range(1, n + 1)
        )
        return math.exp(lg)
    raise ValueError("unknown weight %r" % (weight,))


def mehta_integral_quadrature(n, gamma, a, weight="plain", order=80, span=9.0):
    """Numeric left-hand side of mehta_integral, n <= 3.

    Integrates over the ordered sector (times n!) where the integrand is
    smooth, with tensor Gauss-Legendre.
    """
    if n > 3:
        raise ValueError("quadrature only supported for n <= 3")
    from .quadrature import chamber_integral

    if weight == "plain":
        sig = math.sqrt(1.0 / (2 * a))

        def f(u):
            diffs = np.ones(u.shape[:-1])
            for i in range(n):
                for j in range(i + 1, n):
                    diffs = diffs * np.abs(u[..., j] - u[..., i]) ** (2 * gamma)
            return np.exp(-a * np.sum(u ** 2, axis=-1)) * diffs

        lo, hi = -span * sig, span * sig
    elif weight == "squared-diff-abs":
        def f(u):
            val = np.exp(-0.5 * np.sum(u ** 2, axis=-1))
            for i in range(n):
                for j in range(i + 1, n):
                    val = val * np.abs(u[..., j] ** 2 - u[..., i] ** 2) ** (2 * gamma)
            val = val * np.prod(np.abs(u) ** (2 * a - 1), axis=-1)
            return val

        # integrand is symmetric under u -> -u coordinatewise; restrict to the
        # positive ordered sector and multiply by 2^n n!
        from .quadrature import chamber_integral as _ci

        val = _ci(f, n, 0.0, span, order=order)
        return val * math.factorial(n) * 2 ** n
    else:
        raise ValueError("unknown weight %r" % (weight,))

    val = chamber_integral(f, n, lo, hi, order=order)
    return val * math.factorial(n)
