"""Moment sequence of the superdiffusive limit law.

The sequence {m_n} is defined by m_0 = m_1 = 1 and the quadratic
recurrence

    m_n = (n a - c_n)^(-1) * sum_{i=1}^{n-1} c_i m_i m_{n-i},

with c_i = 1 for even i and c_i = a for odd i.  It grows like
(2a/(a+1)) rho_a^n where

    rho_a = ( Gamma(1/2 + 1/(2a)) Gamma(1 - 1/(2a)) / sqrt(pi) )^a,

so everything is computed on the scale-invariant sequence
m_n / rho_a^n, which stays O(1) out to n = 5000 in doubles.  Integer
moments of the limit variable follow from E[L^n] = n! m_n / Gamma(1+an).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import QuadratureError, SeriesOverflowError
from .quadrature import integrate
from .specfun import gamma_ln, poch_ln

# m_2 = a/(2a-1) blows up at the diffusive boundary; the artifact refuses
# to operate closer than this
_A_MIN = 0.5 + 1e-6


def _check_a(a):
    if not (a > _A_MIN and a < 1.0):
        raise ValueError(
            f"superdiffusive moment recurrence needs a in ({_A_MIN}, 1), got {a!r}"
        )


def rho(a):
    """Exponential growth rate of {m_n} (Gamma-product form), a > 1/2."""
    if not (0.5 < a <= 10.0):
        raise ValueError(f"rho requires a in (1/2, 10], got {a!r}")
    return math.exp(
        a * (gamma_ln(0.5 + 0.5 / a) + gamma_ln(1.0 - 0.5 / a) - 0.5 * math.log(math.pi))
    )


def rho_integral(a):
    """Independent quadrature route to rho:

        rho_a^(1/a) = (1/a) * int_0^inf (1 - 1/sqrt(1+u^2)) u^(-1-1/a) du.

    The u -> 0 endpoint behaves like u^(1-1/a)/2 (integrable but singular)
    and is summed as a binomial series on (0, 1/2]; the tail is mapped to
    a finite interval with u = tan(theta).
    """
    if not (0.5 < a < 1.0):
        raise ValueError(f"rho_integral requires a in (1/2, 1), got {a!r}")
    inv_a = 1.0 / a
    # series part on (0, u0]: sum_j (-1)^(j+1) (1/2)_j /j! * u0^(2j-1/a)/(2j-1/a)
    u0 = 0.5
    total = 0.0
    coef = 0.5
    j = 1
    while True:
        t = coef * u0 ** (2 * j - inv_a) / (2 * j - inv_a)
        total += t
        if abs(t) < 1e-18 * abs(total):
            break
        coef *= -(0.5 + j) / (j + 1.0)
        j += 1

    def mid(u):
        return (1.0 - 1.0 / math.sqrt(1.0 + u * u)) * u ** (-1.0 - inv_a)

    def far(theta):
        # u = tan(theta); integrand (1-cos theta) tan(theta)^(-1-1/a) sec^2
        t = math.tan(theta)
        return (1.0 - math.cos(theta)) * t ** (-1.0 - inv_a) / math.cos(theta) ** 2

    v1, e1 = integrate(mid, u0, 1.0, tol_abs=1e-14, tol_rel=1e-14)
    v2, e2 = integrate(far, 0.25 * math.pi, 0.5 * math.pi, tol_abs=1e-14, tol_rel=1e-14)
    total += v1 + v2
    achieved = e1 + e2
    if achieved > 1e-9:
        raise QuadratureError("rho_integral quadrature did not converge", achieved)
    return (total / a) ** a


@dataclass(frozen=True)
class MomentTable:
    """{m_n / rho_a^n} for n = 0..n_max, with the rho_a used to scale."""

    a: float
    n_max: int
    rho: float
    scaled: np.ndarray = field(repr=False)

    def unscaled(self, n):
        """m_n itself; exact to doubles for n <= 50, overflow-guarded beyond."""
        ln = math.log(self.scaled[n]) + n * math.log(self.rho)
        if ln > 700.0:
            raise SeriesOverflowError(f"m_{n} at a={self.a} exceeds double range")
        return self.scaled[n] * self.rho**n

    def asymptotic_ratio(self, n):
        """m_n (a+1) / (2a rho_a^n); tends to 1 as n grows."""
        return self.scaled[n] * (self.a + 1.0) / (2.0 * self.a)


def moment_sequence(a, n_max):
    """Run the recurrence in rho-scaled form out to n_max (>= 2)."""
    _check_a(a)
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    r = rho(a)
    mt = np.empty(n_max + 1)
    mt[0] = 1.0
    mt[1] = 1.0 / r
    c = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, a)
    cm = c * mt  # c_i * m_i, filled as we go
    for n in range(2, n_max + 1):
        s = np.dot(cm[1:n], mt[n - 1:0:-1])
        mt[n] = s / (n * a - c[n])
        cm[n] = c[n] * mt[n]
    return MomentTable(a=a, n_max=n_max, rho=r, scaled=mt)


def moment_sequence_raw(a, n_max):
    """Unscaled recurrence in plain doubles (overflows factorially; the
    dual route for the scaling-identity tests, usable to n ~ 50)."""
    _check_a(a)
    m = np.empty(n_max + 1)
    m[0] = 1.0
    m[1] = 1.0
    c = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, a)
    cm = c * m
    for n in range(2, n_max + 1):
        m[n] = np.dot(cm[1:n], m[n - 1:0:-1]) / (n * a - c[n])
        cm[n] = c[n] * m[n]
    return m


def limit_moment_ln(a, n, table=None):
    """log E[L1^n] = log(n! m_n / Gamma(1+an))."""
    if n < 0:
        raise ValueError("moment order must be >= 0")
    if n == 0:
        return 0.0
    if table is None:
        table = moment_sequence(a, max(n, 2))
    ln_m = math.log(table.scaled[n]) + n * math.log(table.rho)
    return gamma_ln(n + 1.0) + ln_m - gamma_ln(1.0 + a * n)


def limit_moment(a, n, table=None):
    """E[L1^n] = n! m_n / Gamma(1+an), evaluated through logs."""
    ln = limit_moment_ln(a, n, table)
    if abs(ln) > 700.0:
        raise SeriesOverflowError(
            f"E[L^{n}] at a={a} has log-magnitude {ln:.1f}; use limit_moment_ln"
        )
    return math.exp(ln)


@dataclass(frozen=True)
class LimitLawContext:
    """Per-a bundle of the limit-law constants."""

    a: float
    rho: float
    kappa: float
    delta: float
    c_pos: float
    c_neg: float


def context(a):
    """Constants rho_a, kappa_a, delta_a and the two tail prefactors.

    kappa_a = (rho_a^(2/(a+1)) / 4) ((a+1)/a)^(2a/(a+1)),
    delta_a = (1-a)/(1+a),
    c_pos   = sqrt(2/(pi (1-a^2)(1+a))) (a/rho_a)^(1/(2(1-a))),
    c_neg   = (rho_a/a)^((3a-1)/(2(1-a^2))) rho_a^(2/(a+1))
              / (sqrt(2 pi (1-a)) 2 (a+1)^delta Gamma(delta)).
    """
    _check_a(a)
    r = rho(a)
    delta = (1.0 - a) / (1.0 + a)
    kappa = (r ** (2.0 / (a + 1.0)) / 4.0) * ((a + 1.0) / a) ** (2.0 * a / (a + 1.0))
    c_pos = math.sqrt(2.0 / (math.pi * (1.0 - a * a) * (1.0 + a))) * (a / r) ** (
        1.0 / (2.0 * (1.0 - a))
    )
    c_neg = (
        (r / a) ** ((3.0 * a - 1.0) / (2.0 * (1.0 - a * a)))
        * r ** (2.0 / (a + 1.0))
        / (
            math.sqrt(2.0 * math.pi * (1.0 - a))
            * 2.0
            * (a + 1.0) ** delta
            * math.exp(gamma_ln(delta))
        )
    )
    return LimitLawContext(a=a, rho=r, kappa=kappa, delta=delta, c_pos=c_pos, c_neg=c_neg)


def asymptotic_moment_ln(ctx, n, order="leading"):
    """log of the moment asymptote 2a rho^n n! / ((a+1) Gamma(1+an)),
    optionally with the parity-dependent first correction."""
    if n < 1:
        raise ValueError("asymptotic_moment needs n >= 1")
    a = ctx.a
    ln = (
        math.log(2.0 * a / (a + 1.0))
        + n * math.log(ctx.rho)
        + gamma_ln(n + 1.0)
        - gamma_ln(1.0 + a * n)
    )
    if order == "leading":
        return ln
    if order == "first_correction":
        poch_ratio = math.exp(poch_ln(ctx.delta, n) - gamma_ln(n + 1.0))
        sign = 1.0 if n % 2 == 0 else -1.0
        corr = 1.0 + ctx.kappa * poch_ratio * (sign + (a - 1.0) / (3.0 * a + 1.0))
        return ln + math.log(corr)
    raise ValueError(f"unknown order {order!r}")


def asymptotic_moment(ctx, n, order="leading"):
    ln = asymptotic_moment_ln(ctx, n, order)
    if abs(ln) > 700.0:
        raise SeriesOverflowError(
            f"asymptotic moment at n={n} has log-magnitude {ln:.1f}; use asymptotic_moment_ln"
        )
    return math.exp(ln)


def hankel_test(table, k_max):
    """Signs of the Hankel determinants det [m_{i+j}]_{0<=i,j<=k}, k <= k_max.

    Computed on the scaled sequence: the positive diagonal scaling
    diag(rho^-i) leaves every determinant sign unchanged.  A single
    negative sign certifies that {m_n} is not a Hamburger moment
    sequence.  Magnitudes below 1e-12 of the row-max scale are reported
    as 0 (indeterminate).
    """
    if 2 * k_max > table.n_max:
        raise ValueError("hankel_test needs 2*k_max <= n_max")
    out = []
    for k in range(k_max + 1):
        idx = np.arange(k + 1)
        h = table.scaled[idx[:, None] + idx[None, :]]
        sign, logabs = np.linalg.slogdet(h)
        log_scale = float(np.sum(np.log(np.max(np.abs(h), axis=1))))
        if logabs < math.log(1e-12) + log_scale:
            out.append((k, 0))
        else:
            out.append((k, int(sign)))
    return out
