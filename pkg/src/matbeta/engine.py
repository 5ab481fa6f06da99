"""Integration engines and the verification report format.

Two engines:

* nested adaptive Gauss-Kronrod quadrature, usable up to real dimension 4,
  with infinite intervals handled by the explicit rational substitution
  x = t/(1-t^2) (so interior breakpoints survive the mapping -- scipy's own
  infinite-interval handling silently drops them);

* importance-sampled Monte Carlo with a fixed chunked RNG layout: chunk c of
  size 4096 draws from PCG64 seeded with SeedSequence([seed, c]).  Chunk sums
  use numpy's pairwise summation, the cross-chunk reduction uses math.fsum,
  so a (seed, samples) pair reproduces the estimate bit for bit no matter
  how the chunks are scheduled.

A VerificationReport compares an engine estimate against a closed-form value
and carries the verdict plus any analytic caveats as notes.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as _integrate

from .errors import DegenerateWeightsError, EngineError

__all__ = [
    "MCEstimate", "QuadEstimate", "VerificationReport",
    "quad_adaptive", "mc_integrate", "assess",
    "CHUNK",
]

CHUNK = 4096


# ---------------------------------------------------------------------------
# quadrature

def _t_of_x(x: float) -> float:
    # inverse of x = t/(1-t^2) on (-1,1); root picked inside the interval
    if x == 0.0:
        return 0.0
    return (math.sqrt(1.0 + 4.0 * x * x) - 1.0) / (2.0 * x)


@dataclass(frozen=True)
class QuadEstimate:
    value: complex
    errbound: float


def _quad_level(g, a, b, pts, epsabs, epsrel, limit, complex_func):
    kw = dict(epsabs=epsabs, epsrel=epsrel, limit=limit)
    if complex_func:
        kw["complex_func"] = True
        val, err = _quad_level_raw(g, a, b, pts, kw)
        # scipy packs the real/imag error estimates into a complex number
        return val, abs(complex(err).real) + abs(complex(err).imag)
    return _quad_level_raw(g, a, b, pts, kw)


def _quad_level_raw(g, a, b, pts, kw):
    if a == -math.inf and b == math.inf:
        def gt(t):
            one = 1.0 - t * t
            return g(t / one) * (1.0 + t * t) / (one * one)
        tp = sorted(_t_of_x(p) for p in pts) if pts else None
        return _integrate.quad(gt, -1.0, 1.0, points=tp, **kw)
    if b == math.inf:
        def gu(u):
            one = 1.0 - u
            return g(a + u / one) / (one * one)
        up = sorted((p - a) / (1.0 + p - a) for p in pts if p > a) if pts else None
        return _integrate.quad(gu, 0.0, 1.0, points=up, **kw)
    if a == -math.inf:
        def gu(u):
            one = 1.0 - u
            return g(b - u / one) / (one * one)
        up = sorted((b - p) / (1.0 + b - p) for p in pts if p < b) if pts else None
        return _integrate.quad(gu, 0.0, 1.0, points=up, **kw)
    inner = sorted(p for p in pts if a < p < b) if pts else None
    return _integrate.quad(g, a, b, points=inner, **kw)


def quad_adaptive(f, ranges: Sequence, *, epsabs: float = 1e-10,
                  epsrel: float = 1e-10, points=None, limit: int = 200,
                  complex_output: bool = False) -> QuadEstimate:
    """Nested 1-D adaptive quadrature over up to four coordinates.

    f takes the coordinates as positional scalars, innermost last.  ranges is
    a sequence of (a, b) pairs, infinities allowed; an entry may instead be a
    callable receiving the already-bound outer coordinates and returning
    (a, b), for simplex- or ball-shaped domains.  points optionally gives
    per-coordinate breakpoint lists (in the original coordinates; they are
    transformed together with the interval).  The reported errbound is the
    outermost quad's estimate -- the usual nested-quadrature heuristic, fine
    at the tolerances used here but not a rigorous enclosure.
    """
    ranges = [r if callable(r) else tuple(map(float, r)) for r in ranges]
    dim = len(ranges)
    if dim == 0 or dim > 4:
        raise EngineError(f"nested quadrature handles 1..4 dimensions, got {dim}")
    pts = list(points) if points is not None else [None] * dim
    if len(pts) != dim:
        raise EngineError("points must match the number of coordinates")
    # inner levels run a touch tighter so the outer error estimate dominates
    inner_scale = 0.1

    def level(k, outer_args):
        r = ranges[k]
        a, b = r(*outer_args) if callable(r) else r
        a, b = float(a), float(b)
        if not b > a:
            return 0.0, 0.0
        ea = epsabs * (inner_scale ** k)
        er = epsrel * (inner_scale ** (min(k, 1)))
        if k == dim - 1:
            g = lambda x: f(*outer_args, x)
        else:
            g = lambda x: level(k + 1, outer_args + (x,))[0]
        return _quad_level(g, a, b, pts[k], ea, er, limit, complex_output)

    val, err = level(0, ())
    if not np.isfinite(err) or (np.isscalar(val) and not np.all(np.isfinite([np.real(val), np.imag(val)]))):
        raise EngineError("quadrature returned a non-finite value")
    return QuadEstimate(value=val, errbound=float(err))


# ---------------------------------------------------------------------------
# Monte Carlo

@dataclass(frozen=True)
class MCEstimate:
    value: complex
    stderr: float
    samples: int
    effective_samples: int
    seed: int
    nonfinite: int = 0


def mc_integrate(weight_fn: Callable[[np.random.Generator, int], np.ndarray],
                 samples: int, seed: int, chunk: int = CHUNK) -> MCEstimate:
    """Mean of importance weights over a fixed chunked stream.

    weight_fn(rng, m) returns m weights (integrand value / proposal density,
    zeros for rejected or out-of-support draws).  Non-finite weights -- exact
    hits on integrable singularities under heavy-tailed proposals -- are
    zeroed and counted rather than allowed to poison the sum.
    """
    if samples < 1:
        raise EngineError("samples must be positive")
    nchunks = (samples + chunk - 1) // chunk
    sums_re, sums_im, sumsq = [], [], []
    effective = 0
    nonfinite = 0
    is_complex = False
    for c in range(nchunks):
        m = min(chunk, samples - c * chunk)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, c])))
        w = np.asarray(weight_fn(rng, m))
        if w.shape != (m,):
            raise EngineError(f"weight_fn returned shape {w.shape}, wanted ({m},)")
        if np.iscomplexobj(w):
            is_complex = True
            bad = ~(np.isfinite(w.real) & np.isfinite(w.imag))
        else:
            bad = ~np.isfinite(w)
        if bad.any():
            nonfinite += int(bad.sum())
            w = np.where(bad, 0.0, w)
        effective += int(np.count_nonzero(w))
        sums_re.append(float(np.sum(w.real if is_complex else w)))
        sums_im.append(float(np.sum(w.imag)) if is_complex else 0.0)
        sumsq.append(float(np.sum(np.abs(w) ** 2)))
    n = float(samples)
    mean_re = math.fsum(sums_re) / n
    mean_im = math.fsum(sums_im) / n
    m2 = math.fsum(sumsq)
    mean_abs2 = mean_re * mean_re + mean_im * mean_im
    if samples < 2 or effective < max(2.0, 1e-3 * samples):
        raise DegenerateWeightsError(
            f"only {effective} of {samples} draws carry weight")
    var = max(m2 - n * mean_abs2, 0.0) / (n - 1.0)
    stderr = math.sqrt(var / n)
    value = complex(mean_re, mean_im) if is_complex else mean_re
    return MCEstimate(value=value, stderr=stderr, samples=samples,
                      effective_samples=effective, seed=seed,
                      nonfinite=nonfinite)


# ---------------------------------------------------------------------------
# reports

def _jsonable(v):
    if isinstance(v, complex):
        if v.imag == 0.0:
            return v.real
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


@dataclass
class VerificationReport:
    identity: str
    params: dict
    lhs_value: complex
    lhs_err: float          # stderr (mc) or errbound (quadrature/series)
    engine: str             # quadrature | mc | series | exact
    rhs: complex
    z: float
    verdict: str            # pass | fail | inconclusive
    notes: list = field(default_factory=list)
    samples: Optional[int] = None
    seed: Optional[int] = None
    effective_samples: Optional[int] = None

    def to_dict(self, timestamp: bool = True) -> dict:
        lhs = {"value": _jsonable(self.lhs_value), "engine": self.engine}
        lhs["stderr" if self.engine == "mc" else "errbound"] = self.lhs_err
        if self.samples is not None:
            lhs["samples"] = self.samples
        if self.effective_samples is not None:
            lhs["effective_samples"] = self.effective_samples
        if self.seed is not None:
            lhs["seed"] = self.seed
        out = {
            "identity": self.identity,
            "params": _jsonable(self.params),
            "lhs": lhs,
            "rhs": _jsonable(self.rhs),
            "z": self.z,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }
        if timestamp:
            out["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return out

    def to_json(self, timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(timestamp=timestamp), sort_keys=True)


def assess(identity: str, params: dict, value, err: float, engine: str,
           rhs, *, abs_tol: float = 0.0, notes=(), samples=None, seed=None,
           effective_samples=None) -> VerificationReport:
    """Turn an estimate plus a closed form into a report with a verdict.

    pass          |lhs - rhs| <= max(3 err, abs_tol)
    inconclusive  the error bar swamps the target: err > |rhs| / 2
    fail          otherwise
    """
    diff = abs(complex(value) - complex(rhs))
    err = float(err)
    if err > 0.0:
        z = diff / err
        if not (isinstance(value, complex) and value.imag != 0.0) \
                and not (isinstance(rhs, complex) and complex(rhs).imag != 0.0):
            z = (float(np.real(value)) - float(np.real(rhs))) / err
    else:
        z = 0.0 if diff <= abs_tol else math.inf
    if diff <= max(3.0 * err, abs_tol):
        verdict = "pass"
        if err > 0.5 * abs(complex(rhs)):
            verdict = "inconclusive"
    elif err > 0.5 * abs(complex(rhs)):
        verdict = "inconclusive"
    else:
        verdict = "fail"
    return VerificationReport(
        identity=identity, params=dict(params), lhs_value=value, lhs_err=err,
        engine=engine, rhs=rhs, z=float(z), verdict=verdict,
        notes=list(notes), samples=samples, seed=seed,
        effective_samples=effective_samples)
