"""Importance-sampling proposals.

Every proposal draws batches of points in a fixed packed real-coordinate
layout and reports the log density of each draw with respect to Lebesgue
measure on those coordinates, plus a validity mask (rejection-style
proposals mark out-of-support draws invalid instead of resampling, so the
stream layout -- and with it bitwise reproducibility -- never depends on
the acceptance rate).

The kinds:

  CauchyProduct          independent (half-)Cauchy coordinates
  GammaCone              positive-definite Hermitian matrices via Cholesky
  BallRejection          uniform on a Frobenius ball, operator-norm filtered
  BoxUniform             uniform on a coordinate box
  InterlacingSequential  triangular interlacing arrays, top row first
  Composite              independent blocks of the above
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import betaln, gammaln

from . import fields
from .errors import DomainError

__all__ = [
    "CauchyProduct", "GammaCone", "BallRejection", "BoxUniform",
    "InterlacingSequential", "Composite",
    "importance_weights", "importance_weights_log",
]

_LOG_PI = math.log(math.pi)


class CauchyProduct:
    """Independent Cauchy coordinates; fold any subset to the half line.

    scales: per-coordinate scale.  folded: bool per coordinate (folded
    coordinates are |scale * C|, supported on (0, inf)).
    """

    def __init__(self, scales: Sequence[float], folded: Sequence[bool] | None = None):
        self.scales = np.asarray(scales, dtype=float)
        if np.any(self.scales <= 0):
            raise DomainError("cauchy-product scales must be positive")
        self.dim = len(self.scales)
        self.folded = (np.zeros(self.dim, dtype=bool) if folded is None
                       else np.asarray(folded, dtype=bool))

    def sample(self, rng: np.random.Generator, m: int):
        x = rng.standard_cauchy((m, self.dim)) * self.scales
        x = np.where(self.folded, np.abs(x), x)
        logq = -_LOG_PI - np.log(self.scales) - np.log1p((x / self.scales) ** 2)
        logq = logq + np.where(self.folded, math.log(2.0), 0.0)
        return x, logq.sum(axis=1), np.ones(m, dtype=bool)

    def log_density(self, x: np.ndarray) -> np.ndarray:
        # exposed for the coverage tests; matches sample() exactly
        x = np.asarray(x, dtype=float)
        logq = -_LOG_PI - np.log(self.scales) - np.log1p((x / self.scales) ** 2)
        logq = logq + np.where(self.folded, math.log(2.0), 0.0)
        out = logq.sum(axis=-1)
        bad = np.any((x <= 0) & self.folded, axis=-1)
        return np.where(bad, -np.inf, out)


class GammaCone:
    """Positive-definite Hermitian matrices over R/C/H through X = L L*.

    L is lower triangular; its diagonal comes from Gamma(shape_j) draws or,
    with diag="beta-prime", from Gamma(a_j)/Gamma(b_j) ratios whose  x^(-b-1)
    tails keep importance weights finite against integrands that decay only
    polynomially (the half-space and cone-times-shift families).  Off-diagonal
    components are Cauchy.  The Cholesky Jacobian dX = 2^n prod l_jj^(d(n-j)+1) dL
    is folded into the reported density, so logq is w.r.t. Lebesgue measure
    on the packed coordinates of X itself.
    """

    def __init__(self, n: int, field: str, diag_shapes: Sequence[float],
                 offdiag_scale: float = 1.0, diag: str = "gamma",
                 diag_shapes2: Sequence[float] | None = None):
        self.n = int(n)
        self.field = field
        self.d = fields.field_dim(field)
        self.shapes = np.asarray(diag_shapes, dtype=float)
        if self.shapes.shape != (self.n,) or np.any(self.shapes <= 0):
            raise DomainError("gamma-cone needs one positive shape per row")
        if diag not in ("gamma", "beta-prime"):
            raise DomainError(f"unknown diag mode {diag!r}")
        self.diag = diag
        if diag == "beta-prime":
            self.shapes2 = np.asarray(diag_shapes2, dtype=float)
            if self.shapes2.shape != (self.n,) or np.any(self.shapes2 <= 0):
                raise DomainError("beta-prime diag needs a second positive shape per row")
        self.offdiag_scale = float(offdiag_scale)
        self.dim = fields.herm_coord_count(self.n, field)

    def _draw_diag(self, rng, m):
        if self.diag == "gamma":
            l = rng.gamma(self.shapes, size=(m, self.n))
            logq = ((self.shapes - 1.0) * np.log(l) - l
                    - gammaln(self.shapes))
            return l, logq.sum(axis=1)
        g1 = rng.gamma(self.shapes, size=(m, self.n))
        g2 = rng.gamma(self.shapes2, size=(m, self.n))
        l = g1 / g2
        logq = ((self.shapes - 1.0) * np.log(l)
                - (self.shapes + self.shapes2) * np.log1p(l)
                - betaln(self.shapes, self.shapes2))
        return l, logq.sum(axis=1)

    def sample(self, rng: np.random.Generator, m: int):
        n, d, s = self.n, self.d, self.offdiag_scale
        ldiag, logq = self._draw_diag(rng, m)
        noff = d * n * (n - 1) // 2
        if noff:
            off = rng.standard_cauchy((m, noff)) * s
            logq = logq + (-_LOG_PI - math.log(s)
                           - np.log1p((off / s) ** 2)).sum(axis=1)
        else:
            off = np.zeros((m, 0))
        # assemble L, form X = L L*, pack
        if self.field == fields.REAL:
            L = np.zeros((m, n, n))
        elif self.field == fields.COMPLEX:
            L = np.zeros((m, n, n), dtype=complex)
        else:
            L = np.zeros((m, n, n, 4))
        k = 0
        for p in range(n):
            for q in range(p):
                if self.field == fields.REAL:
                    L[:, p, q] = off[:, k]; k += 1
                elif self.field == fields.COMPLEX:
                    L[:, p, q] = off[:, k] + 1j * off[:, k + 1]; k += 2
                else:
                    L[:, p, q, :] = off[:, k:k + 4]; k += 4
            if self.field == fields.QUAT:
                L[:, p, p, 0] = ldiag[:, p]
            else:
                L[:, p, p] = ldiag[:, p]
        X = fields.mat_mul(L, fields.conj_transpose(L, self.field), self.field)
        # Jacobian of X -> L, log of 2^n prod l_jj^(d(n-j)+1); j is 1-based
        jac = n * math.log(2.0)
        for j in range(1, n + 1):
            jac = jac + (d * (n - j) + 1) * np.log(ldiag[:, j - 1])
        logq = logq - jac
        return fields.herm_to_coords(X, self.field), logq, np.ones(m, dtype=bool)


class BallRejection:
    """Uniform draws on the Frobenius ball of radius sqrt(min(rows, cols)),
    which encloses the operator-norm unit ball; draws with operator norm >= 1
    come back invalid (zero-weight slots), keeping the estimate unbiased
    without resampling.  Density is the reciprocal enclosing-ball volume.
    """

    def __init__(self, rows: int, cols: int, field: str):
        self.rows, self.cols, self.field = int(rows), int(cols), field
        self.d = fields.field_dim(field)
        self.dim = self.d * self.rows * self.cols
        self.radius = math.sqrt(min(self.rows, self.cols))
        self.log_volume = (0.5 * self.dim * _LOG_PI
                           + self.dim * math.log(self.radius)
                           - gammaln(0.5 * self.dim + 1.0))

    def _unpack(self, pts: np.ndarray):
        m = pts.shape[0]
        if self.field == fields.REAL:
            return pts.reshape(m, self.rows, self.cols)
        if self.field == fields.COMPLEX:
            z = pts.reshape(m, self.rows, self.cols, 2)
            return z[..., 0] + 1j * z[..., 1]
        return pts.reshape(m, self.rows, self.cols, 4)

    def sample(self, rng: np.random.Generator, m: int):
        g = rng.normal(size=(m, self.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = self.radius * rng.random(m) ** (1.0 / self.dim)
        pts = g * r[:, None]
        Z = self._unpack(pts)
        valid = fields.operator_norm(Z, self.field) < 1.0
        logq = np.full(m, -self.log_volume)
        return pts, logq, valid

    unpack = _unpack  # integrands reuse the same packing


class BoxUniform:
    def __init__(self, bounds: Sequence):
        self.bounds = [(float(a), float(b)) for a, b in bounds]
        if any(b <= a for a, b in self.bounds):
            raise DomainError("box-uniform needs a < b in every coordinate")
        self.dim = len(self.bounds)
        self._lo = np.array([a for a, _ in self.bounds])
        self._w = np.array([b - a for a, b in self.bounds])
        self._logq = -float(np.sum(np.log(self._w)))

    def sample(self, rng: np.random.Generator, m: int):
        pts = self._lo + self._w * rng.random((m, self.dim))
        return pts, np.full(m, self._logq), np.ones(m, dtype=bool)


class InterlacingSequential:
    """Triangular interlacing arrays lam[j, a], 1 <= a <= j <= n.

    The top row (j = n) is a sorted vector of n scaled Cauchy draws; each
    lower row is then drawn bracket by bracket inside the interlacing
    intervals of the row above it -- uniformly by default, or symmetric
    Beta(theta, theta) rescaled to the bracket, which concentrates mass away
    from the endpoints and tames the endpoint singularities of densities
    with exponents theta - 1 < 0.

    Points are packed row-major from the bottom: row 1, then row 2, ...,
    row n, each row ascending; dim = n (n + 1) / 2.
    """

    def __init__(self, n: int, top_scale: float = 1.0,
                 inner: str = "uniform", beta_theta: float | None = None):
        self.n = int(n)
        if self.n < 1:
            raise DomainError("interlacing-sequential needs n >= 1")
        self.top_scale = float(top_scale)
        if inner not in ("uniform", "beta"):
            raise DomainError(f"unknown inner mode {inner!r}")
        if inner == "beta" and (beta_theta is None or beta_theta <= 0):
            raise DomainError("inner='beta' requires beta_theta > 0")
        self.inner = inner
        self.theta = beta_theta
        self.dim = self.n * (self.n + 1) // 2

    def sample(self, rng: np.random.Generator, m: int):
        n, s = self.n, self.top_scale
        top = np.sort(rng.standard_cauchy((m, n)) * s, axis=1)
        logq = math.lgamma(n + 1) + (
            -_LOG_PI - math.log(s) - np.log1p((top / s) ** 2)).sum(axis=1)
        rows = [None] * (n + 1)
        rows[n] = top
        for j in range(n - 1, 0, -1):
            above = rows[j + 1]
            lo, hi = above[:, :j], above[:, 1:j + 1]
            width = hi - lo
            if self.inner == "uniform":
                u = rng.random((m, j))
                logq = logq - np.log(width).sum(axis=1)
            else:
                u = rng.beta(self.theta, self.theta, size=(m, j))
                # u can land exactly on 0 or 1; the -inf log marks a
                # zero-density draw that the weight accounting discards
                with np.errstate(divide="ignore"):
                    logq = logq + (
                        (self.theta - 1.0) * (np.log(u) + np.log1p(-u))
                        - betaln(self.theta, self.theta)
                        - np.log(width)).sum(axis=1)
            rows[j] = lo + width * u
        pts = np.concatenate([rows[j] for j in range(1, n + 1)], axis=1)
        return pts, logq, np.ones(m, dtype=bool)


class Composite:
    """Independent product of proposals over consecutive coordinate blocks."""

    def __init__(self, parts: Sequence):
        self.parts = list(parts)
        self.dim = sum(p.dim for p in self.parts)

    def sample(self, rng: np.random.Generator, m: int):
        cols, logq, valid = [], np.zeros(m), np.ones(m, dtype=bool)
        for p in self.parts:
            x, lq, v = p.sample(rng, m)
            cols.append(x)
            logq = logq + lq
            valid &= v
        return np.concatenate(cols, axis=1), logq, valid


# ---------------------------------------------------------------------------

def importance_weights(proposal, integrand):
    """weight_fn for mc_integrate: integrand(points) / proposal density.

    integrand maps a (k, dim) block of valid points to k values (real or
    complex); invalid draws contribute zero weight.
    """
    def weight_fn(rng, m):
        pts, logq, valid = proposal.sample(rng, m)
        vals = np.asarray(integrand(pts[valid]))
        w = np.zeros(m, dtype=vals.dtype if np.iscomplexobj(vals) else float)
        w[valid] = vals * np.exp(-logq[valid])
        return w
    return weight_fn


def importance_weights_log(proposal, log_integrand):
    """Same, for positive integrands supplied in log form (overflow-safe)."""
    def weight_fn(rng, m):
        pts, logq, valid = proposal.sample(rng, m)
        w = np.zeros(m)
        logf = np.asarray(log_integrand(pts[valid]))
        w[valid] = np.exp(logf - logq[valid])
        return w
    return weight_fn
