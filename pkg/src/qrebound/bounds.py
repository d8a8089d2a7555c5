"""Scalar machinery for the uncertainty bound curve.

The two-level exchange family with asymmetry eps has symmetric
divergence h(eps) = eps*tanh(eps/2) and uncertainty 1/sinh^2(eps/2).
Eliminating eps gives the bound curve

    f(s) = 1 / sinh^2(g(s)/2),

with g the inverse of h.  f is strictly decreasing, f(0) = +inf and
f(inf) = 0.  Its own inverse has the closed form

    B(u) = 2*(1+u)^(-1/2) * atanh((1+u)^(-1/2)),

so u >= f(s) and s >= B(u) are equivalent (1 + f = coth^2(g/2)).

All functions are extended-real: they accept and return math.inf where
the limits make sense.
"""
from __future__ import annotations

import math

from .errors import NegativeInput, NonPositiveInput

# f is flagged +inf below this input; the bound diverges as s -> 0 and
# the theorem excludes the s = 0 (equal states) case anyway.
_F_UNDERFLOW = 1e-300

_BISECT_WIDTH = 1e-14
_MAX_BISECT = 200


def exchange_divergence(x: float) -> float:
    """h(x) = x*tanh(x/2): divergence of the exchange family at x."""
    if x < 0.0:
        raise NegativeInput(f"exchange_divergence needs x >= 0, got {x}")
    return x * math.tanh(0.5 * x)


def inverse_exchange_divergence(y: float) -> float:
    """Inverse of ``exchange_divergence`` on [0, inf).

    Bracketed bisection on [0, y+2] (valid since h(x) >= x-2), run to
    interval width 1e-14, then one secant polish.  The residual
    |h(g(y)) - y| stays below 1e-12 over the supported range.
    """
    if y < 0.0:
        raise NegativeInput(f"inverse_exchange_divergence needs y >= 0, got {y}")
    if y == 0.0:
        return 0.0
    if math.isinf(y):
        return math.inf
    lo, hi = 0.0, y + 2.0
    flo = -y
    fhi = exchange_divergence(hi) - y
    for _ in range(_MAX_BISECT):
        if hi - lo <= _BISECT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = exchange_divergence(mid) - y
        if fmid < 0.0:
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    if fhi == flo:
        return 0.5 * (lo + hi)
    root = hi - fhi * (hi - lo) / (fhi - flo)
    if not (lo <= root <= hi):
        return 0.5 * (lo + hi)
    return root


def _inverse_sinh_sq(t: float) -> float:
    """1/sinh(t)^2 for t > 0 without overflow at large t."""
    if t > 20.0:
        # sinh(t) ~ e^t/2 here; exp(-2t) underflows gracefully to 0
        e = math.exp(-2.0 * t)
        return 4.0 * e / ((1.0 - e) ** 2)
    s = math.sinh(t)
    sq = s * s
    if sq == 0.0:
        return math.inf
    return 1.0 / sq


def uncertainty_bound(s: float) -> float:
    """f(s) = 1/sinh^2(g(s)/2): least uncertainty at divergence s.

    Strictly decreasing; f(0) = +inf (flagged, not overflowed) and
    f(inf) = 0, covering the disjoint-support convention.
    """
    if s < 0.0:
        raise NegativeInput(f"uncertainty_bound needs s >= 0, got {s}")
    if s <= _F_UNDERFLOW:
        return math.inf
    if math.isinf(s):
        return 0.0
    return _inverse_sinh_sq(0.5 * inverse_exchange_divergence(s))


def divergence_bound(u: float) -> float:
    """B(u) = 2*(1+u)^(-1/2)*atanh((1+u)^(-1/2)): least divergence at
    uncertainty u; inverse of ``uncertainty_bound`` on (0, inf)."""
    if u <= 0.0:
        raise NonPositiveInput(f"divergence_bound needs u > 0, got {u}")
    if math.isinf(u):
        return 0.0
    # 1 - (1+u)^(-1/2) computed cancellation-free for small u
    one_minus = u / ((1.0 + u) + math.sqrt(1.0 + u))
    w = 1.0 - one_minus
    atanh_w = 0.5 * (math.log1p(w) - math.log(one_minus))
    return 2.0 * w * atanh_w


def divergence_bound_log_form(u: float) -> float:
    """Algebraically equal logarithmic form of ``divergence_bound``,
    (1+u)^(-1/2) * log((sqrt(1+u)+1)/(sqrt(1+u)-1)), kept separate as a
    cross-check of the closed form."""
    if u <= 0.0:
        raise NonPositiveInput(f"divergence_bound_log_form needs u > 0, got {u}")
    if math.isinf(u):
        return 0.0
    r = math.sqrt(1.0 + u)
    # (r+1)/(r-1) = (r+1)^2/u avoids the r-1 cancellation
    return (2.0 * math.log1p(r) - math.log(u)) / r
