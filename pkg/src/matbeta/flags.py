"""Beta-integrals over triangular charts of flag manifolds.

Z ranges over unipotent upper-triangular n x n matrices with entries in K;
the free coordinates are the d * n(n-1)/2 real components above the
diagonal.  For p < q let s_pq(Z) = det([Z]_pq [Z]_pq^*) built from the top
p x q corner.  Integrals of prod s_pq^(-lam_pq) against coordinate Lebesgue
measure evaluate to gamma products, and the last-column marginals push
forward self-similarly (the projectivity property).

Two alternative normalizations that fail numerical audit are kept available
behind ``alt_convention=True`` so the verifier can demonstrate an honest
FAIL: a pi-power lacking the factor d, and a shifted denominator argument in
the projectivity constant.  The default forms are the ones every cross-check
(dimension counting, closed n=2 cases, n=3 telescoping) confirms.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from . import fields
from .errors import DomainError

__all__ = [
    "pair_order", "free_coord_count", "triang_from_coords",
    "corner_gram_dets", "flag_log_integrand", "nu_exponents", "flag_rhs",
    "projectivity_constant", "last_column_lambdas",
]


def pair_order(n: int) -> list:
    """Index pairs (p, q), 1-based, p < q, in row-major order."""
    return [(p, q) for p in range(1, n + 1) for q in range(p + 1, n + 1)]


def free_coord_count(n: int, field: str) -> int:
    return fields.field_dim(field) * n * (n - 1) // 2


def triang_from_coords(pts: np.ndarray, n: int, field: str) -> np.ndarray:
    """Unipotent upper-triangular matrices from packed coordinates.

    Coordinates fill the strict upper triangle in pair_order, d real
    components per entry (matching the Hermitian packing convention).
    """
    pts = np.asarray(pts, dtype=float)
    m = pts.shape[:-1]
    if pts.shape[-1] != free_coord_count(n, field):
        raise DomainError(
            f"expected {free_coord_count(n, field)} coordinates, got {pts.shape[-1]}")
    if field == fields.REAL:
        Z = np.zeros(m + (n, n))
        for idx in range(n):
            Z[..., idx, idx] = 1.0
        for k, (p, q) in enumerate(pair_order(n)):
            Z[..., p - 1, q - 1] = pts[..., k]
        return Z
    if field == fields.COMPLEX:
        Z = np.zeros(m + (n, n), dtype=complex)
        for idx in range(n):
            Z[..., idx, idx] = 1.0
        for k, (p, q) in enumerate(pair_order(n)):
            Z[..., p - 1, q - 1] = pts[..., 2 * k] + 1j * pts[..., 2 * k + 1]
        return Z
    Z = np.zeros(m + (n, n, 4))
    for idx in range(n):
        Z[..., idx, idx, 0] = 1.0
    for k, (p, q) in enumerate(pair_order(n)):
        Z[..., p - 1, q - 1, :] = pts[..., 4 * k:4 * k + 4]
    return Z


def _corner(Z: np.ndarray, p: int, q: int, field: str) -> np.ndarray:
    if field == fields.QUAT:
        return Z[..., :p, :q, :]
    return Z[..., :p, :q]


def corner_gram_dets(Z: np.ndarray, n: int, field: str) -> dict:
    """{(p, q): det([Z]_pq [Z]_pq^*)} for all p < q, batched."""
    out = {}
    for p, q in pair_order(n):
        blk = _corner(Z, p, q, field)
        gram = fields.mat_mul(blk, fields.conj_transpose(blk, field), field)
        out[(p, q)] = fields.hermitian_det(gram, field)
    return out


def flag_log_integrand(n: int, field: str, lam):
    """Batched log of prod s_pq^(-lam_pq) over packed triangular coordinates."""
    lam = _lam_dict(n, lam)

    def f(pts):
        Z = triang_from_coords(pts, n, field)
        dets = corner_gram_dets(Z, n, field)
        out = np.zeros(np.shape(pts)[:-1])
        for pq, lpq in lam.items():
            if lpq != 0.0:
                out = out - lpq * np.log(dets[pq])
        return out
    return f


def _lam_dict(n: int, lam) -> dict:
    pairs = pair_order(n)
    if isinstance(lam, dict):
        d = {tuple(k): float(v) for k, v in lam.items()}
        extra = set(d) - set(pairs)
        if extra:
            raise DomainError(f"unknown exponent pairs {sorted(extra)}")
        return {pq: d.get(pq, 0.0) for pq in pairs}
    lam = [float(v) for v in lam]
    if len(lam) != len(pairs):
        raise DomainError(f"need {len(pairs)} exponents (pairs {pairs})")
    return dict(zip(pairs, lam))


def nu_exponents(n: int, lam, d: float) -> dict:
    """nu_pq = -(q-p-1) d/2 + sum of lam_km over the rectangle
    p <= k < q, q <= m <= n."""
    lam = _lam_dict(n, lam)
    out = {}
    for p, q in pair_order(n):
        s = sum(lam[(k, m)] for k in range(p, q) for m in range(q, n + 1))
        out[(p, q)] = -0.5 * (q - p - 1) * d + s
    return out


def flag_rhs(n: int, field: str, lam, alt_convention: bool = False) -> float:
    d = fields.field_dim(field)
    nus = nu_exponents(n, lam, d)
    power = n * (n - 1) / 4.0 if alt_convention else n * (n - 1) * d / 4.0
    acc = power * math.log(math.pi)
    for pq, nu in nus.items():
        if nu <= d / 2.0:
            raise DomainError(f"need nu_{pq} > d/2, got {nu}")
        acc += gammaln(nu - d / 2.0) - gammaln(nu)
    return math.exp(acc)


def last_column_lambdas(n: int, lams) -> dict:
    """Exponent dict placing lam_p on s_pn only (the projectivity density)."""
    lams = [float(v) for v in lams]
    if len(lams) != n - 1:
        raise DomainError(f"need {n - 1} exponents")
    return {(p, n): lams[p - 1] for p in range(1, n)}


def projectivity_constant(n: int, field: str, lams,
                          alt_convention: bool = False) -> float:
    """Total mass picked up when prod_p s_pn^(-lam_p) dZ is pushed down to
    the (n-1)-chart: pi^((n-1)d/2) prod_p Gamma(L_p - (n-p)d/2) /
    Gamma(L_p - (n-p-1)d/2) with L_p = lam_p + ... + lam_(n-1)."""
    d = fields.field_dim(field)
    lams = [float(v) for v in lams]
    if len(lams) != n - 1:
        raise DomainError(f"need {n - 1} exponents")
    acc = (n - 1) * d / 2.0 * math.log(math.pi)
    for p in range(1, n):
        big = sum(lams[p - 1:])
        if big <= (n - p) * d / 2.0:
            raise DomainError(
                f"need lam_{p} + ... + lam_{n-1} > (n-p) d/2, got {big}")
        den_shift = (n - p + 1) if alt_convention else (n - p - 1)
        acc += gammaln(big - (n - p) * d / 2.0) - gammaln(big - den_shift * d / 2.0)
    return math.exp(acc)
