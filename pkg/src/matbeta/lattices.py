"""Exact arithmetic on full-rank lattices in Q^n and their zeta-type sums.

A lattice here is a subgroup of Q^n isomorphic to Z^n.  Every such lattice
has a unique canonical form (D, H): the minimal positive integer D with
D*S contained in Z^n, together with the row Hermite normal form H of D*S
(upper triangular, positive diagonal, entries above each pivot reduced into
[0, pivot)).  All covolumes are exact fractions.

Flag intersections S cap Q^k and S cap Z^k are computed through integer
kernels, never read off the HNF rows -- the rows of H are generally *not*
adapted to the coordinate flag.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .scalar import riemann_zeta

__all__ = [
    "integer_hnf", "integer_kernel", "RationalLattice",
    "enumerate_sublattices", "enumerate_lattices",
    "zeta_lattice_rhs", "zeta_lattice_term", "zeta_lattice_partial",
    "tamagawa_partial", "wallach_member", "berezin_gram", "berezin_min_eig",
    "random_lattices", "berezin_witness_search",
]


# ---------------------------------------------------------------------------
# integer linear algebra (exact, deterministic)

def integer_hnf(rows):
    """Row Hermite normal form of an integer matrix.

    Returns the nonzero rows as a list of lists: upper echelon, positive
    pivots, entries above each pivot in [0, pivot).
    """
    M = [[int(x) for x in r] for r in rows]
    if not M:
        return []
    m, n = len(M), len(M[0])
    row = 0
    for col in range(n):
        nz = [i for i in range(row, m) if M[i][col] != 0]
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(M[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = M[i][col] // M[i0][col]
                M[i] = [a - q * b for a, b in zip(M[i], M[i0])]
            nz = [i for i in nz if M[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        M[row], M[i0] = M[i0], M[row]
        if M[row][col] < 0:
            M[row] = [-a for a in M[row]]
        for i in range(row):
            q = M[i][col] // M[row][col]
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[row])]
        row += 1
    return M[:row]


def integer_kernel(mat, m=None):
    """Basis (list of integer rows, in HNF) of {c in Z^m : c @ mat = 0}."""
    mat = [list(r) for r in mat]
    if m is None:
        m = len(mat)
    if m == 0:
        return []
    ncols = len(mat[0]) if mat else 0
    # eliminate on the mat-part of [mat | I]; zero mat-rows expose the kernel
    aug = [list(mat[i]) + [1 if j == i else 0 for j in range(m)]
           for i in range(m)]
    row = 0
    for col in range(ncols):
        nz = [i for i in range(row, m) if aug[i][col] != 0]
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(aug[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = aug[i][col] // aug[i0][col]
                aug[i] = [a - q * b for a, b in zip(aug[i], aug[i0])]
            nz = [i for i in nz if aug[i][col] != 0]
        if not nz:
            continue
        aug[row], aug[nz[0]] = aug[nz[0]], aug[row]
        row += 1
    kern = [r[ncols:] for r in aug[row:]]
    return integer_hnf(kern)


def _int_det(rows):
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[-1][-1]


def _fraction_det(rows):
    """Exact determinant of a square matrix of Fractions (Bareiss)."""
    n = len(rows)
    M = [[Fraction(x) for x in r] for r in rows]
    sign = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            M[i] = [a - f * b for a, b in zip(M[i], M[k])]
    det = Fraction(sign)
    for k in range(n):
        det *= M[k][k]
    return det


def _lcm(a, b):
    return a // math.gcd(a, b) * b


# ---------------------------------------------------------------------------

class RationalLattice:
    """Full-rank lattice in Q^n, stored canonically as (D, H)."""

    __slots__ = ("n", "den", "hnf")

    def __init__(self, basis):
        rows = [[Fraction(x) for x in r] for r in basis]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DomainError("basis must be a square matrix")
        den = 1
        for r in rows:
            for x in r:
                den = _lcm(den, x.denominator)
        H = integer_hnf([[int(x * den) for x in r] for r in rows])
        if len(H) != n:
            raise DomainError("basis is not full rank")
        # minimal denominator: strip common prime content shared with den
        content = 0
        for r in H:
            for x in r:
                content = math.gcd(content, x)
        g = math.gcd(den, content)
        if g > 1:
            den //= g
            H = [[x // g for x in r] for r in H]
        self.n = n
        self.den = den
        self.hnf = tuple(tuple(r) for r in H)

    @classmethod
    def from_hnf(cls, den, hnf):
        return cls([[Fraction(x, den) for x in r] for r in hnf])

    @classmethod
    def standard(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def basis(self):
        """Canonical basis as rows of Fractions."""
        return [[Fraction(x, self.den) for x in r] for r in self.hnf]

    @property
    def covolume(self) -> Fraction:
        det = 1
        for j in range(self.n):
            det *= self.hnf[j][j]
        return Fraction(det, self.den ** self.n)

    def _key(self):
        return (self.n, self.den, self.hnf)

    def __eq__(self, other):
        return isinstance(other, RationalLattice) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self._key() < other._key()

    def __repr__(self):
        return f"RationalLattice(den={self.den}, hnf={self.hnf})"

    # -- lattice operations ------------------------------------------------

    def intersect(self, other: "RationalLattice") -> "RationalLattice":
        """Intersection of two full-rank lattices in the same Q^n."""
        if self.n != other.n:
            raise DomainError("lattices live in different dimensions")
        a, b = self.den, other.den
        # c @ (A/a) = c' @ (B/b)  <=>  (c, c') @ [[b*A], [-a*B]] = 0
        stacked = [[b * x for x in r] for r in self.hnf] + \
                  [[-a * x for x in r] for r in other.hnf]
        kern = integer_kernel(stacked)
        vecs = []
        for row in kern:
            c = row[:self.n]
            vecs.append([Fraction(sum(ci * self.hnf[i][j] for i, ci in enumerate(c)),
                                  self.den) for j in range(self.n)])
        return RationalLattice(vecs)

    def flag_part(self, k: int) -> "RationalLattice":
        """S cap Q^k as a full-rank lattice in Q^k (first k coordinates)."""
        if not 1 <= k <= self.n:
            raise DomainError(f"k must be in 1..{self.n}")
        if k == self.n:
            return self
        tail = [[r[j] for j in range(k, self.n)] for r in self.hnf]
        kern = integer_kernel(tail)
        vecs = [[Fraction(sum(ci * self.hnf[i][j] for i, ci in enumerate(c)),
                          self.den) for j in range(k)] for c in kern]
        return RationalLattice(vecs)

    def integer_flag_part(self, k: int) -> "RationalLattice":
        """S cap Z^k as a full-rank lattice in Z^k."""
        part = self.flag_part(k)
        # c @ (H/D) integral  <=>  (c, t) @ [[H], [D*I]] = 0 for some t
        D = part.den
        stacked = [list(r) for r in part.hnf] + \
                  [[D if i == j else 0 for j in range(k)] for i in range(k)]
        kern = integer_kernel(stacked)
        vecs = []
        for row in kern:
            c = row[:k]
            vecs.append([Fraction(sum(ci * part.hnf[i][j] for i, ci in enumerate(c)),
                                  D) for j in range(k)])
        return RationalLattice(vecs)


# ---------------------------------------------------------------------------
# enumeration

def _hnf_matrices(n, max_det):
    """All integer row-HNF matrices with determinant <= max_det,
    ordered by (det, flattened entries)."""
    out = []
    def diag_tuples(rem, depth, prefix):
        if depth == n:
            yield prefix
            return
        for d in range(1, rem + 1):
            yield from diag_tuples(rem // d, depth + 1, prefix + (d,))
    for diag in diag_tuples(max_det, 0, ()):
        above = [(i, j) for j in range(1, n) for i in range(j)]
        pools = [range(diag[j]) for (_, j) in above]
        for offs in itertools.product(*pools):
            H = [[0] * n for _ in range(n)]
            for j in range(n):
                H[j][j] = diag[j]
            for (pos, (i, j)) in enumerate(above):
                H[i][j] = offs[pos]
            out.append(tuple(tuple(r) for r in H))
    out.sort(key=lambda H: (math.prod(H[j][j] for j in range(n)), H))
    return out


def enumerate_sublattices(n, max_det):
    """Finite-index sublattices of Z^n with index <= max_det, deterministic order."""
    return [RationalLattice.from_hnf(1, H) for H in _hnf_matrices(n, max_det)]


def enumerate_lattices(n, bound):
    """Lattices in Q^n with minimal denominator <= bound and
    det(D * S) <= bound, in deterministic (D, det, lex) order."""
    hs = _hnf_matrices(n, bound)
    out = []
    for D in range(1, bound + 1):
        for H in hs:
            content = 0
            for r in H:
                for x in r:
                    content = math.gcd(content, x)
            if math.gcd(D, content) != 1:
                continue  # not the minimal denominator for this lattice
            out.append(RationalLattice.from_hnf(D, H))
    return out


# ---------------------------------------------------------------------------
# the zeta-type beta-sum

def _pad(seq, n):
    vals = [float(v) for v in seq]
    if len(vals) != n:
        raise DomainError(f"need {n} exponents")
    return vals + [0.0]


def covolume_profile(den, hnf):
    """Exact covolumes (as Fractions) of S cap Q^k and S cap Z^k, k = 1..n,
    for S = (1/den) * rowspan(hnf).  Flag intersections go through integer
    kernels; every covolume is an integer determinant over den^k."""
    n = len(hnf)
    uq, uz = [], []
    for k in range(1, n + 1):
        if k == n:
            N = [list(r) for r in hnf]
        else:
            tail = [[hnf[i][j] for j in range(k, n)] for i in range(n)]
            kern = integer_kernel(tail)
            N = [[sum(c[i] * hnf[i][j] for i in range(n)) for j in range(k)]
                 for c in kern]
        uq.append(Fraction(abs(_int_det(N)), den ** k))
        if den == 1:
            uz.append(uq[-1])
        else:
            stacked = N + [[den if i == j else 0 for j in range(k)]
                           for i in range(k)]
            csol = [row[:k] for row in integer_kernel(stacked)]
            Nz = [[sum(ci * N[i][j] for i, ci in enumerate(c)) for j in range(k)]
                  for c in csol]
            uz.append(Fraction(abs(_int_det(Nz)), den ** k))
    return uq, uz


def zeta_lattice_rhs(n, alpha, beta):
    """prod_j zeta(-(beta_j + j - 1)) zeta(alpha_j + beta_j - n + j)
    / zeta(alpha_j - n + j), with every argument required to lie in the
    convergence half-plane s > 1."""
    a, b = _pad(alpha, n)[:-1], _pad(beta, n)[:-1]
    acc = 1.0
    for j in range(1, n + 1):
        args = (-(b[j - 1] + j - 1), a[j - 1] + b[j - 1] - n + j)
        den = a[j - 1] - n + j
        for s in args + (den,):
            if s <= 1.0:
                raise DomainError(
                    f"zeta argument {s} outside the convergence region s > 1")
        acc *= riemann_zeta(args[0]) * riemann_zeta(args[1]) / riemann_zeta(den)
    return acc


def _term_from_profile(uq, uz, a, b):
    term = 1.0
    for k in range(1, len(uq) + 1):
        term *= (float(uq[k - 1]) ** (-b[k - 1] + b[k])
                 * float(uz[k - 1]) ** (-a[k - 1] + a[k]))
    return term


def zeta_lattice_term(lat: RationalLattice, alpha, beta) -> float:
    """Summand attached to one lattice: covolumes of S cap Q^k carry the
    beta-exponents, covolumes of S cap Z^k the alpha-exponents
    (alpha_{n+1} = beta_{n+1} = 0)."""
    a, b = _pad(alpha, lat.n), _pad(beta, lat.n)
    uq, uz = covolume_profile(lat.den, lat.hnf)
    return _term_from_profile(uq, uz, a, b)


def zeta_lattice_partial(n, alpha, beta, bound) -> float:
    """Partial sum over lattices with denominator <= bound and
    det(den * S) <= bound, in the deterministic enumeration order."""
    a, b = _pad(alpha, n), _pad(beta, n)
    if n == 1:
        # S = (p/q) Z with gcd(p, q) = 1: the two covolumes are p/q and p
        p = np.arange(1, bound + 1, dtype=np.int64)
        q = np.arange(1, bound + 1, dtype=np.int64)
        cop = np.gcd.outer(p, q) == 1
        ratio = p[:, None] / q[None, :]
        terms = ratio ** (-b[0]) * (p[:, None].astype(float)) ** (-a[0])
        return float(np.sum(terms[cop]))
    hs = _hnf_matrices(n, bound)
    contents = [math.gcd(*[x for r in H for x in r]) for H in hs]
    terms = []
    for D in range(1, bound + 1):
        for H, content in zip(hs, contents):
            if math.gcd(D, content) != 1:
                continue
            uq, uz = covolume_profile(D, H)
            terms.append(_term_from_profile(uq, uz, a, b))
    return math.fsum(terms)


def zeta_lattice_sum(n, alpha, beta, bound):
    """Partial sum at the budget cap plus a doubling-tail heuristic.

    One enumeration pass accumulates the nested partial sums at bound/4,
    bound/2 and bound; the two increments give a geometric tail estimate
    (ratio clipped to [0.05, 0.9], then a 1.5x safety factor).  Returns
    (partial_sum, tail_estimate).
    """
    if bound < 8:
        raise DomainError("bound must be at least 8 for the tail heuristic")
    a, b = _pad(alpha, n), _pad(beta, n)
    cuts = (bound // 4, bound // 2, bound)
    sums = [[], [], []]
    if n == 1:
        p = np.arange(1, bound + 1, dtype=np.int64)
        cop = np.gcd.outer(p, p) == 1
        terms = ((p[:, None] / p[None, :]) ** (-b[0])
                 * p[:, None].astype(float) ** (-a[0]))
        for i, c in enumerate(cuts):
            sums[i] = float(np.sum(terms[:c, :c][cop[:c, :c]]))
    else:
        hs = _hnf_matrices(n, bound)
        dets = [math.prod(H[j][j] for j in range(n)) for H in hs]
        contents = [math.gcd(*[x for r in H for x in r]) for H in hs]
        for D in range(1, bound + 1):
            for H, det, content in zip(hs, dets, contents):
                if math.gcd(D, content) != 1:
                    continue
                uq, uz = covolume_profile(D, H)
                t = _term_from_profile(uq, uz, a, b)
                for i, c in enumerate(cuts):
                    if D <= c and det <= c:
                        sums[i].append(t)
        sums = [math.fsum(s) for s in sums]
    s1, s2, s3 = sums
    d1, d2 = s2 - s1, s3 - s2
    r = abs(d2 / d1) if d1 != 0 else 0.5
    r = min(max(r, 0.05), 0.9)
    tail = 1.5 * abs(d2) * r / (1.0 - r)
    return s3, tail


def tamagawa_partial(n, alpha, bound) -> float:
    """Partial sum of prod_k covol(S cap Z^k)^(-alpha_k + alpha_{k+1})
    over sublattices of Z^n of index <= bound.  No closed form is exposed;
    convergence is judged by bound-doubling."""
    a = _pad(alpha, n)
    if n == 1:
        ks = np.arange(1, int(bound) + 1, dtype=float)
        return float(np.sum(ks ** (-a[0])))
    terms = []
    for H in _hnf_matrices(n, bound):
        uq, _ = covolume_profile(1, H)
        terms.append(math.prod(float(uq[k - 1]) ** (-a[k - 1] + a[k])
                               for k in range(1, n + 1)))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# positive-definiteness of the covolume kernel

def wallach_member(n: int, alpha: float) -> bool:
    """Discrete-or-continuous set on which the kernel is positive definite."""
    if alpha > n - 1:
        return True
    return alpha >= 0 and float(alpha).is_integer()


def berezin_gram(alpha: float, lats) -> np.ndarray:
    """Gram matrix of (covol(R) covol(S))^(alpha/2) / covol(R cap S)^alpha."""
    m = len(lats)
    logv = [math.log(float(L.covolume)) for L in lats]
    G = np.empty((m, m))
    for i in range(m):
        G[i, i] = 1.0
        for j in range(i + 1, m):
            inter = lats[i].intersect(lats[j])
            val = math.exp(alpha * (0.5 * (logv[i] + logv[j])
                                    - math.log(float(inter.covolume))))
            G[i, j] = G[j, i] = val
    return G


def berezin_min_eig(alpha: float, lats) -> float:
    return float(np.linalg.eigvalsh(berezin_gram(alpha, lats))[0])


def random_lattices(rng, n, count, max_den=4, max_entry=4):
    """Distinct random lattices in Q^n (canonicalized random bases)."""
    out = []
    seen = set()
    while len(out) < count:
        mat = rng.integers(-max_entry, max_entry + 1, size=(n, n))
        den = int(rng.integers(1, max_den + 1))
        try:
            lat = RationalLattice([[Fraction(int(x), den) for x in row]
                                   for row in mat])
        except DomainError:
            continue
        if lat not in seen:
            seen.add(lat)
            out.append(lat)
    return out


def berezin_witness_search(n, alpha, trials, seed, set_size=5, pool_bound=3):
    """Randomized search for a set of lattices whose Gram matrix has a
    negative eigenvalue.

    Subsets of the given size are drawn from the exhaustive small-height
    pool (denominator and determinant <= pool_bound); the most negative
    configuration found is refined greedily.  Returns (min eigenvalue,
    witness set) -- the eigenvalue is nonnegative when nothing was found,
    which the caller must report as inconclusive rather than a confirmation.
    """
    rng = np.random.default_rng(seed)
    pool = enumerate_lattices(n, pool_bound)
    G = berezin_gram(alpha, pool)
    best, witness = math.inf, None
    for _ in range(trials):
        idx = rng.choice(len(pool), size=min(set_size, len(pool)), replace=False)
        e = float(np.linalg.eigvalsh(G[np.ix_(idx, idx)])[0])
        if e < best:
            best, witness = e, sorted(idx)
    # greedy refinement: swap members for pool elements while it helps
    improved = True
    while improved and witness is not None:
        improved = False
        for pos in range(len(witness)):
            for cand in range(len(pool)):
                if cand in witness:
                    continue
                trial = list(witness)
                trial[pos] = cand
                e = float(np.linalg.eigvalsh(G[np.ix_(trial, trial)])[0])
                if e < best - 1e-15:
                    best, witness, improved = e, sorted(trial), True
    return best, [pool[i] for i in witness] if witness is not None else None
