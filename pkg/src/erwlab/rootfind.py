"""Bracketed root finding: plain bisection plus a Newton-polished variant."""

import math

from .errors import BracketingError


def bisect(f, lo, hi, xtol=1e-10, max_iter=200):
    """Bisection on a sign-changing bracket [lo, hi] down to width xtol."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketingError(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < xtol:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def bisect_newton(f, fprime, lo, hi, ftol, max_bisect=80, max_newton=30):
    """Bisection to a rough root, then Newton refinement kept inside the bracket.

    Stops when |f(x)| <= ftol.  fprime is the analytic derivative.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketingError(f"no sign change on [{lo!r}, {hi!r}]")
    x = 0.5 * (lo + hi)
    for _ in range(max_bisect):
        x = 0.5 * (lo + hi)
        fx = f(x)
        if abs(fx) <= ftol:
            return x
        if flo * fx < 0.0:
            hi = x
        else:
            lo, flo = x, fx
        if (hi - lo) <= 1e-6 * (abs(x) + 1e-300):
            break
    for _ in range(max_newton):
        fx = f(x)
        if abs(fx) <= ftol:
            return x
        d = fprime(x)
        if d == 0.0 or not math.isfinite(d):
            break
        step = fx / d
        y = x - step
        if not (lo <= y <= hi):
            y = 0.5 * (lo + hi)
        if f(lo) * f(y) < 0.0:
            hi = y
        else:
            lo = y
        x = y
    return x
