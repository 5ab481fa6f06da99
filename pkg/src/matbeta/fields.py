"""Linear algebra over the three real division algebras.

A single array convention covers all three coefficient fields:

    R : real ndarray, shape (n, m)
    C : complex ndarray, shape (n, m)
    H : real ndarray, shape (n, m, 4), components ordered (1, i, j, k)

Quaternionic spectral work routes through the complex symplectic embedding
q = a + b j  ->  [[a, b], [-conj(b), conj(a)]]  (a, b complex), under which a
quaternion-Hermitian matrix becomes an ordinary 2n x 2n complex Hermitian
matrix with doubly degenerate spectrum; we keep every other eigenvalue.
General (non-Hermitian) quaternionic determinants are Dieudonne moduli,
computed as the square root of the embedded determinant's modulus.
"""

from __future__ import annotations

import numpy as np

REAL, COMPLEX, QUAT = "R", "C", "H"
FIELD_DIM = {REAL: 1, COMPLEX: 2, QUAT: 4}

__all__ = [
    "REAL", "COMPLEX", "QUAT", "FIELD_DIM",
    "field_dim", "herm_coord_count", "herm_from_coords", "herm_to_coords",
    "quat_mul", "quat_conj", "embed_symplectic", "embed_real",
    "mat_mul", "conj_transpose", "corner",
    "hermitian_eigenvalues", "hermitian_det", "dieudonne_det",
    "singular_values", "is_positive_definite", "operator_norm",
    "frobenius_norm", "random_hermitian",
]


def field_dim(field: str) -> int:
    try:
        return FIELD_DIM[field]
    except KeyError:
        raise KeyError(f"field must be one of 'R','C','H', got {field!r}") from None


def herm_coord_count(n: int, field: str) -> int:
    """Real dimension of the Hermitian n x n matrices over the field."""
    return n + field_dim(field) * n * (n - 1) // 2


# ---------------------------------------------------------------------------
# coordinate packing
#
# Fixed ordering: the n diagonal entries first, then the strictly upper
# triangle row by row ((0,1), (0,2), ..., (1,2), ...), each contributing
# d real components.  Every sampler and every Jacobian in the package
# assumes exactly this layout.

def herm_from_coords(coords: np.ndarray, n: int, field: str):
    """Assemble a Hermitian matrix (batch) from packed real coordinates.

    coords has shape (..., herm_coord_count(n, field)); the result has the
    batched matrix shape for the field.
    """
    coords = np.asarray(coords, dtype=float)
    d = field_dim(field)
    batch = coords.shape[:-1]
    if coords.shape[-1] != herm_coord_count(n, field):
        raise ValueError("coordinate vector has wrong length")
    if field == REAL:
        X = np.zeros(batch + (n, n))
        idx = np.arange(n)
        X[..., idx, idx] = coords[..., :n]
        k = n
        for p in range(n):
            for q in range(p + 1, n):
                X[..., p, q] = coords[..., k]
                X[..., q, p] = coords[..., k]
                k += 1
        return X
    if field == COMPLEX:
        X = np.zeros(batch + (n, n), dtype=complex)
        idx = np.arange(n)
        X[..., idx, idx] = coords[..., :n]
        k = n
        for p in range(n):
            for q in range(p + 1, n):
                z = coords[..., k] + 1j * coords[..., k + 1]
                X[..., p, q] = z
                X[..., q, p] = np.conj(z)
                k += 2
        return X
    X = np.zeros(batch + (n, n, 4))
    idx = np.arange(n)
    X[..., idx, idx, 0] = coords[..., :n]
    k = n
    for p in range(n):
        for q in range(p + 1, n):
            comp = coords[..., k:k + 4]
            X[..., p, q, :] = comp
            X[..., q, p, 0] = comp[..., 0]
            X[..., q, p, 1:] = -comp[..., 1:]
            k += 4
    return X


def herm_to_coords(X, field: str) -> np.ndarray:
    """Inverse of herm_from_coords (no Hermiticity check)."""
    X = np.asarray(X)
    if field == REAL:
        n = X.shape[-1]
        parts = [X[..., np.arange(n), np.arange(n)]]
        parts += [X[..., p, q][..., None] for p in range(n) for q in range(p + 1, n)]
        return np.concatenate([parts[0]] + parts[1:], axis=-1)
    if field == COMPLEX:
        n = X.shape[-1]
        out = [np.real(X[..., np.arange(n), np.arange(n)])]
        for p in range(n):
            for q in range(p + 1, n):
                out.append(np.real(X[..., p, q])[..., None])
                out.append(np.imag(X[..., p, q])[..., None])
        return np.concatenate(out, axis=-1)
    n = X.shape[-3]
    out = [X[..., np.arange(n), np.arange(n), 0]]
    for p in range(n):
        for q in range(p + 1, n):
            out.append(X[..., p, q, :])
    return np.concatenate(out, axis=-1)


# ---------------------------------------------------------------------------
# quaternion arithmetic on (..., 4) component arrays

def quat_mul(p, q):
    p = np.asarray(p)
    q = np.asarray(q)
    w1, x1, y1, z1 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    w2, x2, y2, z2 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=-1)


def quat_conj(q):
    q = np.asarray(q)
    out = q.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def embed_symplectic(Q) -> np.ndarray:
    """2n x 2m complex embedding of an n x m quaternionic matrix.

    Entry q = a + b j (a = w + xi, b = y + zi) maps to the interleaved 2 x 2
    block [[a, b], [-conj(b), conj(a)]]; the embedding is a ring homomorphism
    and sends Hermitian to Hermitian.
    """
    Q = np.asarray(Q)
    a = Q[..., 0] + 1j * Q[..., 1]
    b = Q[..., 2] + 1j * Q[..., 3]
    n, m = Q.shape[-3], Q.shape[-2]
    E = np.zeros(Q.shape[:-3] + (2 * n, 2 * m), dtype=complex)
    E[..., 0::2, 0::2] = a
    E[..., 0::2, 1::2] = b
    E[..., 1::2, 0::2] = -np.conj(b)
    E[..., 1::2, 1::2] = np.conj(a)
    return E


_LEFT_MUL_SIGNS = np.array([
    [1, -1, -1, -1],
    [1, 1, -1, 1],
    [1, 1, 1, -1],
    [1, -1, 1, 1],
], dtype=float)
_LEFT_MUL_PERM = np.array([
    [0, 1, 2, 3],
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 1, 0],
])


def embed_real(Q) -> np.ndarray:
    """4n x 4m real embedding (left-multiplication blocks)."""
    Q = np.asarray(Q)
    n, m = Q.shape[-3], Q.shape[-2]
    E = np.zeros(Q.shape[:-3] + (4 * n, 4 * m))
    for r in range(4):
        for c in range(4):
            E[..., r::4, c::4] = _LEFT_MUL_SIGNS[r, c] * Q[..., _LEFT_MUL_PERM[r, c]]
    return E


# ---------------------------------------------------------------------------
# generic operations

def mat_mul(A, B, field: str):
    if field in (REAL, COMPLEX):
        return A @ B
    # direct component einsum; the embedding route would work too but this
    # keeps shapes quaternionic
    A = np.asarray(A)
    B = np.asarray(B)
    prod = quat_mul(A[..., :, :, None, :], B[..., None, :, :, :])
    return prod.sum(axis=-3)


def conj_transpose(A, field: str):
    if field == REAL:
        return np.swapaxes(A, -1, -2)
    if field == COMPLEX:
        return np.conj(np.swapaxes(A, -1, -2))
    return quat_conj(np.swapaxes(A, -2, -3))


def corner(X, k: int, field: str = REAL):
    """Leading principal k x k block."""
    if field == QUAT:
        return X[..., :k, :k, :]
    return X[..., :k, :k]


def hermitian_eigenvalues(X, field: str) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix (batch) over the field.

    Raises if any input deviates from X = X* by more than 1e-12 ||X||_F --
    eigvalsh would otherwise silently read only one triangle.
    """
    X = np.asarray(X)
    dev = frobenius_norm(X - conj_transpose(X, field), field)
    if np.any(dev > 1e-12 * np.maximum(frobenius_norm(X, field), 1e-300)):
        raise ValueError("matrix is not Hermitian to working precision")
    if field == REAL:
        return np.linalg.eigvalsh(X)
    if field == COMPLEX:
        return np.linalg.eigvalsh(X)
    ev = np.linalg.eigvalsh(embed_symplectic(X))
    return ev[..., ::2]  # Kramers pairs


def hermitian_det(X, field: str):
    if field == REAL:
        return np.linalg.det(np.asarray(X))
    if field == COMPLEX:
        return np.real(np.linalg.det(np.asarray(X)))
    return np.prod(hermitian_eigenvalues(X, QUAT), axis=-1)


def dieudonne_det(A, field: str):
    """|det| in the Dieudonne sense: |det A| for R, C; Study modulus for H."""
    if field in (REAL, COMPLEX):
        return np.abs(np.linalg.det(np.asarray(A)))
    sign, logdet = np.linalg.slogdet(embed_symplectic(A))
    return np.exp(0.5 * np.real(logdet))


def singular_values(A, field: str) -> np.ndarray:
    """Descending singular values; quaternionic ones via the embedding."""
    if field in (REAL, COMPLEX):
        return np.linalg.svd(np.asarray(A), compute_uv=False)
    sv = np.linalg.svd(embed_symplectic(A), compute_uv=False)
    return sv[..., ::2]


def is_positive_definite(X, field: str, tol: float = 0.0):
    ev = hermitian_eigenvalues(X, field)
    return ev[..., 0] > tol


def operator_norm(A, field: str):
    sv = singular_values(A, field)
    return sv[..., 0]


def frobenius_norm(A, field: str):
    A = np.asarray(A)
    if field == REAL:
        return np.sqrt(np.sum(A * A, axis=(-1, -2)))
    if field == COMPLEX:
        return np.sqrt(np.sum(np.abs(A) ** 2, axis=(-1, -2)))
    return np.sqrt(np.sum(A * A, axis=(-1, -2, -3)))


def random_hermitian(rng: np.random.Generator, n: int, field: str,
                     scale: float = 1.0, size=()):
    """Gaussian Hermitian draws (for tests; not an importance proposal)."""
    if isinstance(size, int):
        size = (size,)
    coords = rng.normal(scale=scale, size=size + (herm_coord_count(n, field),))
    return herm_from_coords(coords, n, field)
