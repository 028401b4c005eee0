"""Exact distribution, shape analysis and simulation of the memory walk.

The walk S_n repeats a uniformly chosen past step with probability p and
flips it otherwise; P(n, k) = P[S_n = 2k - n].  With q_first = 1 the
probabilities satisfy the triangular recurrence

    P(n+1, k) = [ (np - ak) P(n, k) + ((1-p)n + a(k-1)) P(n, k-1) ] / n,

a = 2p - 1, with P(n, 0) = P(n, n+1) = 0.  Rows are evolved in
probability space (the integer-array variant grows factorially) and
renormalised each step; drift before renormalisation stays near machine
epsilon.  Rows for q_first < 1 are mixtures of the q_first = 1 row and
its reflection.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BracketingError
from .rootfind import bisect

_REL_TOL = 1e-12


@dataclass(frozen=True)
class ErwParams:
    """Memory parameter p and first-step parameter q_first; a = 2p - 1."""

    p: float
    q_first: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.p) and 0.0 <= self.p <= 1.0):
            raise ValueError(f"memory parameter p must be in [0, 1], got {self.p!r}")
        if not (math.isfinite(self.q_first) and 0.0 <= self.q_first <= 1.0):
            raise ValueError(f"first-step parameter must be in [0, 1], got {self.q_first!r}")

    @property
    def a(self):
        return 2.0 * self.p - 1.0

    @classmethod
    def from_a(cls, a, q_first=1.0):
        return cls(p=(1.0 + a) / 2.0, q_first=q_first)

    def require_superdiffusive(self):
        if not (0.5 < self.a < 1.0):
            raise ValueError(f"operation requires 1/2 < a < 1, got a={self.a!r}")


@dataclass(frozen=True)
class DistributionRow:
    """P(n, k) for k = k_lo .. k_lo + len(probs) - 1 (position S = 2k - n).

    k_lo is 1 for q_first = 1 rows and 0 for mixture rows.
    """

    n: int
    probs: np.ndarray
    k_lo: int = 1

    def support(self):
        """Walk positions s = 2k - n carried by ``probs``."""
        k = np.arange(self.k_lo, self.k_lo + len(self.probs))
        return 2 * k - self.n

    def scaled_support(self, a):
        return self.support() / float(self.n) ** a


@dataclass(frozen=True)
class ShapeReport:
    """Unimodality / log-concavity verdict for one row.

    Indices are 1-based positions within ``probs``; first_violation is the
    smallest k with u_k^2 < u_{k-1} u_{k+1} (boundary terms zero), or None.
    """

    unimodal: bool
    mode_lo: int
    mode_hi: int
    log_concave: bool
    first_violation: int | None


@dataclass(frozen=True)
class StepDensity:
    """Density of n^(-a) S_n: 'step' holds interval heights between
    len(values)+1 breakpoints; 'piecewise-affine' holds node values at the
    breakpoints with linear interpolation between and zero outside."""

    breakpoints: np.ndarray
    values: np.ndarray
    kind: str

    def integral(self):
        if self.kind == "step":
            return float(np.dot(np.diff(self.breakpoints), self.values))
        mid = 0.5 * (self.values[1:] + self.values[:-1])
        return float(np.dot(np.diff(self.breakpoints), mid))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "step":
            idx = np.searchsorted(self.breakpoints, x, side="left") - 1
            inside = (idx >= 0) & (idx < len(self.values)) & (x > self.breakpoints[0])
            out = np.zeros_like(x)
            out[inside] = self.values[np.clip(idx[inside], 0, len(self.values) - 1)]
            return out
        out = np.interp(x, self.breakpoints, self.values, left=0.0, right=0.0)
        # interp pins the outside to the edge values at exact endpoints; zero them
        out = np.where((x < self.breakpoints[0]) | (x > self.breakpoints[-1]), 0.0, out)
        return out


def _advance(probs, n, p):
    """One recurrence step: row at time n (q_first = 1 layout) to time n+1,
    without renormalisation."""
    a = 2.0 * p - 1.0
    prev = np.zeros(n + 2)
    prev[1 : n + 1] = probs
    k = np.arange(1, n + 2)
    return ((n * p - a * k) * prev[1:] + ((1.0 - p) * n + a * (k - 1)) * prev[:-1]) / n


def _mixture(row, q_first):
    """q_first-mixture of a q_first = 1 row with its reflection (k -> n - k)."""
    n = row.n
    mixed = np.zeros(n + 1)
    mixed[1:] += q_first * row.probs
    mixed[:n] += (1.0 - q_first) * row.probs[::-1]
    return DistributionRow(n=n, probs=mixed, k_lo=0)


def evolve_distribution(params, n_max):
    """Rows 1..n_max of the exact distribution.

    Row n has n entries for q_first = 1 and n+1 entries otherwise (the
    mixture row); every row is renormalised after the recurrence step.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    probs = np.array([1.0])
    rows.append(DistributionRow(n=1, probs=probs))
    for n in range(1, n_max):
        probs = _advance(probs, n, params.p)
        probs /= probs.sum()
        rows.append(DistributionRow(n=n + 1, probs=probs))
    if params.q_first == 1.0:
        return rows
    return [_mixture(r, params.q_first) for r in rows]


def evolution_drift(params, n_max):
    """Max |sum - 1| of a row right after the recurrence step (before the
    renormalisation evolve_distribution applies)."""
    probs = np.array([1.0])
    worst = 0.0
    for n in range(1, n_max):
        probs = _advance(probs, n, params.p)
        worst = max(worst, abs(probs.sum() - 1.0))
        probs /= probs.sum()
    return worst


def evolve_q_exact(p, n_max):
    """Exact rational triangular array Q(n, k) = (n-1)! P(n, k) for
    q_first = 1; p must be a Fraction.  Test oracle, n_max <= ~12."""
    if not isinstance(p, Fraction):
        raise TypeError("evolve_q_exact expects a Fraction memory parameter")
    a = 2 * p - 1
    rows = [[Fraction(1)]]
    for n in range(1, n_max):
        q = rows[-1]
        nxt = []
        for k in range(1, n + 2):
            t = Fraction(0)
            if k <= n:
                t += (n * p - a * k) * q[k - 1]
            if 1 <= k - 1 <= n:
                t += ((1 - p) * n + a * (k - 1)) * q[k - 2]
            nxt.append(t)
        rows.append(nxt)
    return rows


def check_shape(row):
    """Unimodality and log-concavity of a row, with relative tolerance
    1e-12 on every comparison (ties satisfy both inequalities)."""
    u = np.asarray(row.probs, dtype=float)
    n = len(u)
    if n == 1:
        return ShapeReport(True, 1, 1, True, None)

    diffs = u[1:] - u[:-1]
    tol = _REL_TOL * np.maximum(np.abs(u[1:]), np.abs(u[:-1]))
    seen_drop = False
    unimodal = True
    for d, t in zip(diffs, tol):
        if d < -t:
            seen_drop = True
        elif d > t and seen_drop:
            unimodal = False
            break

    peak = u.max()
    plateau = np.flatnonzero(u >= peak * (1.0 - _REL_TOL))
    mode_lo = int(plateau[0]) + 1
    mode_hi = int(plateau[-1]) + 1

    log_concave = True
    first_violation = None
    # boundary convention u_0 = u_{n+1} = 0 makes k = 1 and k = n automatic
    for i in range(1, n - 1):
        lhs = u[i] * u[i]
        rhs = u[i - 1] * u[i + 1]
        if lhs < rhs - _REL_TOL * max(lhs, rhs):
            log_concave = False
            first_violation = i + 1
            break
    return ShapeReport(unimodal, mode_lo, mode_hi, log_concave, first_violation)


# threshold polynomials for log-concavity of all rows n >= q + 3
# (ascending coefficients; unique root in (1/2, 1))
_THRESHOLD_POLYS = (
    (3.0, -2.0, -4.0, -1.0),
    (54.0, 36.0, -83.0, -123.0, -63.0, -13.0),
    (360.0, 834.0, 247.0, -1259.0, -2009.0, -1423.0, -514.0, -76.0),
    (11250.0, 8325.0, -13781.0, -24282.0, -13396.0, -1024.0, 2518.0, 1361.0, 229.0),
)


def log_concavity_root(q_index):
    """Unique root in (1/2, 1) of the hard-coded threshold polynomial
    P_q, q_index in 0..3, bisected to 1e-10."""
    if q_index not in (0, 1, 2, 3):
        raise ValueError("q_index must be one of 0, 1, 2, 3")
    coeffs = _THRESHOLD_POLYS[q_index]

    def poly(x):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    lo, hi = 0.5, 1.0
    if poly(lo) * poly(hi) > 0.0:
        raise BracketingError(
            f"threshold polynomial {q_index} has no sign change in (1/2, 1)"
        )
    return bisect(poly, lo, hi, xtol=1e-10)


def scaled_density(row, a, kind="step"):
    """Finite-n density of n^(-a) S_n.

    'step': height n^a P(n,k)/2 on (n^(-a)(2k-n-1), n^(-a)(2k-n+1)].
    'piecewise-affine': the continuous interpolation with node values
    n^a P(n,k) / (2 - P_first - P_last) at n^(-a)(2k-n).
    """
    if not (0.5 < a < 1.0):
        raise ValueError(f"scaled_density requires a in (1/2, 1), got {a!r}")
    scale = float(row.n) ** a
    s = row.support().astype(float)
    if kind == "step":
        edges = np.concatenate([(s - 1.0), [s[-1] + 1.0]]) / scale
        return StepDensity(breakpoints=edges, values=scale * row.probs / 2.0, kind="step")
    if kind == "piecewise-affine":
        if len(row.probs) < 2:
            raise ValueError("piecewise-affine density needs at least two support points")
        norm = 2.0 - row.probs[0] - row.probs[-1]
        return StepDensity(
            breakpoints=s / scale,
            values=scale * row.probs / norm,
            kind="piecewise-affine",
        )
    raise ValueError(f"unknown density kind {kind!r}")


# ---------------------------------------------------------------------------
# Monte Carlo


def resolve_threads(threads=None):
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("ERWLAB_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _simulate_chunk(p, q_first, n, seed, lo, hi):
    # one counter-based stream per trajectory: key = (seed, trajectory index),
    # so results do not depend on chunking or scheduling
    count = hi - lo
    u_pick = np.empty((n, count))
    u_flip = np.empty((n, count), dtype=np.float32)
    for j in range(count):
        gen = np.random.Generator(
            np.random.Philox(key=np.array([seed, lo + j], dtype=np.uint64))
        )
        u_pick[:, j] = gen.random(n)
        u_flip[:, j] = gen.random(n, dtype=np.float32)
    steps = np.empty((n, count), dtype=np.int8)
    steps[0] = np.where(u_flip[0] < q_first, 1, -1)
    flat = steps.reshape(-1)
    cols = np.arange(count, dtype=np.int64)
    for m in range(1, n):
        k = (u_pick[m] * m).astype(np.int64)
        x = flat[k * count + cols]
        steps[m] = np.where(u_flip[m] < p, x, -x)
    return steps.sum(axis=0, dtype=np.int64)


def simulate_terminal(params, n, count, seed, threads=None, step_budget=2**31):
    """count independent samples of n^(-a) S_n, simulated from the process
    definition (uniform pick over the stored step history).

    Deterministic for fixed (seed, count, n): trajectory i consumes only
    its own Philox stream keyed by (seed, i).  Output is ordered by
    trajectory index regardless of thread scheduling.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if count < 1:
        raise ValueError("count must be >= 1")
    if n * count > step_budget:
        raise ValueError(
            f"count*n = {n * count} exceeds the step budget {step_budget}"
        )
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    workers = resolve_threads(threads)
    chunk = max(64, min(count, 30_000_000 // max(n, 1)))
    bounds = [(lo, min(lo + chunk, count)) for lo in range(0, count, chunk)]
    sums = np.empty(count, dtype=np.int64)
    if workers == 1 or len(bounds) == 1:
        for lo, hi in bounds:
            sums[lo:hi] = _simulate_chunk(params.p, params.q_first, n, seed, lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(
                    _simulate_chunk, params.p, params.q_first, n, seed, lo, hi
                ): (lo, hi)
                for lo, hi in bounds
            }
            for fut, (lo, hi) in futures.items():
                sums[lo:hi] = fut.result()
    return sums / float(n) ** params.a
