"""Hypergeometric series and quadrature for integrands of the form ``(t(1-t))**(g-1)``."""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "NonConvergence",
    "beta_weighted_integral",
    "hyp2f1",
    "hyp3f2",
    "hypergeometric_sum",
    "nested_singular_integral",
    "singular_integral",
    "tanh_sinh",
]

MAX_TERMS = 100_000
SERIES_RTOL = 1e-16


class NonConvergence(ArithmeticError):
    """A series or quadrature failed to reach its tolerance."""


# ---------------------------------------------------------------------------
# generalized hypergeometric series
# ---------------------------------------------------------------------------


def _check_lower(params):
    for b in params:
        if b <= 0 and float(b).is_integer():
            raise ValueError(f"lower parameter {b} is a nonpositive integer")


def hypergeometric_sum(upper, lower, x: float, rtol: float = SERIES_RTOL, max_terms: int = MAX_TERMS):
    """Sum ``pFq(upper; lower; x)`` directly for ``0 <= x < 1``.

    Returns ``(value, err)``.  ``err`` bounds the neglected tail by treating it
    as geometric with ratio ``x`` and adds a rounding allowance.
    """
    _check_lower(lower)
    if not 0 <= x < 1:
        raise ValueError(f"series needs 0 <= x < 1, got {x}")
    if x == 0:
        return 1.0, 0.0
    upper = [float(a) for a in upper]
    lower = [float(b) for b in lower]
    s = 1.0
    term = 1.0
    for n in range(max_terms):
        num = x
        for a in upper:
            num *= a + n
        den = n + 1.0
        for b in lower:
            den *= b + n
        term *= num / den
        s += term
        if term == 0.0:
            return s, 2.2e-16 * abs(s) * (n + 1) ** 0.5
        if abs(term) < rtol * abs(s):
            tail = abs(term) * x / (1.0 - x)
            return s, tail + 2.2e-16 * abs(s) * (n + 1) ** 0.5
    raise NonConvergence(
        f"{len(upper)}F{len(lower)} at x={x} did not converge in {max_terms} terms"
    )


def hyp2f1(a, b, c, x: float, rtol: float = SERIES_RTOL, max_terms: int = MAX_TERMS) -> float:
    """Gauss hypergeometric function by direct summation.

    At ``x == 1`` the Gauss summation formula is used when ``c - a - b > 0``.
    Raises :class:`NonConvergence` when the series is too slow, which happens
    as ``x -> 1``; callers should then transform the argument.
    """
    if x == 1:
        _check_lower([c])
        s = c - a - b
        if s <= 0:
            raise ValueError("2F1 diverges at x = 1 unless c - a - b > 0")
        return math.gamma(c) * math.gamma(s) / (math.gamma(c - a) * math.gamma(c - b))
    return hypergeometric_sum((a, b), (c,), x, rtol, max_terms)[0]


def hyp3f2(a1, a2, a3, b1, b2, x: float, rtol: float = SERIES_RTOL, max_terms: int = MAX_TERMS) -> float:
    """``3F2(a1, a2, a3; b1, b2; x)`` by direct summation for ``0 <= x < 1``."""
    return hypergeometric_sum((a1, a2, a3), (b1, b2), x, rtol, max_terms)[0]


# ---------------------------------------------------------------------------
# tanh-sinh quadrature
# ---------------------------------------------------------------------------

_UMAX = 4.0
# relative floor for reported quadrature errors
_ROUNDING = 4 * np.finfo(float).eps


@lru_cache(maxsize=None)
def _ts_rule(level: int):
    """Nodes, complementary nodes and weights of the tanh-sinh rule on ``[0, 1]``.

    Step ``h = 2**-level``.  Nodes are built from ``1/(1+exp(-pi*sinh u))`` so
    both ``x`` and ``1-x`` are accurate near the endpoints.
    """
    h = 2.0 ** -level
    u = np.arange(-int(_UMAX / h), int(_UMAX / h) + 1) * h
    s = np.pi * np.sinh(u)
    x = 1.0 / (1.0 + np.exp(-s))
    xc = 1.0 / (1.0 + np.exp(s))
    # d/du of 1/(1+exp(-pi sinh u)) = pi cosh(u) / (4 cosh^2(pi sinh(u)/2))
    w = h * np.pi * np.cosh(u) / (4.0 * np.cosh(s / 2.0) ** 2)
    for arr in (x, xc, w):
        arr.setflags(write=False)
    return x, xc, w


def tanh_sinh(f: Callable, a: float, b: float, rtol: float = 1e-14, min_level: int = 3, max_level: int = 10):
    """Integrate a vectorized ``f`` over ``[a, b]``; returns ``(value, err)``.

    The step is halved until two successive estimates agree to ``rtol``
    relative.  ``err`` is the last difference, floored at a few ulps of the
    value.  Integrable endpoint
    singularities are fine as long as ``f`` does not overflow at nodes a
    few ulps from the ends.
    """
    if b == a:
        return 0.0, 0.0
    prev = None
    for level in range(min_level, max_level + 1):
        x, _, w = _ts_rule(level)
        q = (b - a) * float(np.dot(w, f(a + (b - a) * x)))
        if prev is not None:
            err = abs(q - prev)
            if err <= rtol * max(abs(q), 1e-300):
                return q, max(err, _ROUNDING * abs(q))
        prev = q
    raise NonConvergence(f"tanh-sinh did not reach rtol={rtol} by level {max_level}")


# ---------------------------------------------------------------------------
# integrals with weight (t(1-t))**(g-1)
# ---------------------------------------------------------------------------
#
# On [0, 1/2] the substitution s = t**g turns t**(g-1) dt into ds/g, so the
# only remaining factor (1-t)**(g-1) is smooth there.  The half [1/2, 1] is
# mapped onto [0, 1/2] by t -> 1-t.  Callers pass both t and 1-t to
# integrands so nothing is computed as 1 - (something close to 1).


def _lower_half(g: float, a: float, b: float, fn, level: int):
    """``int_a^b t**(g-1) (1-t)**(g-1) fn(t, 1-t) dt`` for ``0 <= a < b <= 1/2`` with a fixed rule."""
    x, _, w = _ts_rule(level)
    sa, sb = a ** g, b ** g
    s = sa + (sb - sa) * x
    t = s ** (1.0 / g)
    vals = (1.0 - t) ** (g - 1.0) / g
    if fn is not None:
        vals = vals * fn(t, 1.0 - t)
    return (sb - sa) * float(np.dot(w, vals))


def _weighted_fixed(g: float, lo: float, hi: float, lo_c: float, hi_c: float, fn, level: int):
    total = 0.0
    if lo < 0.5:
        total += _lower_half(g, lo, min(hi, 0.5), fn, level)
    if hi > 0.5:
        a, b = hi_c, min(lo_c, 0.5)
        mirrored = None if fn is None else (lambda t, tc: fn(tc, t))
        total += _lower_half(g, a, b, mirrored, level)
    return total


def _check_interval(g, lo, hi):
    if g <= 0:
        raise ValueError(f"integral of (t(1-t))**(g-1) diverges for g = {g} <= 0")
    if not 0 <= lo <= hi <= 1:
        raise ValueError(f"need 0 <= lo <= hi <= 1, got lo={lo}, hi={hi}")


def beta_weighted_integral(
    g: float,
    lo: float,
    hi: float,
    fn=None,
    *,
    lo_c: float | None = None,
    hi_c: float | None = None,
    rtol: float = 1e-13,
    min_level: int = 3,
    max_level: int = 9,
):
    """``int_lo^hi (t(1-t))**(g-1) fn(t, 1-t) dt``; returns ``(value, err)``.

    ``fn`` must be vectorized and take ``(t, 1-t)``; ``None`` means 1.
    ``lo_c``/``hi_c`` optionally supply ``1-lo``/``1-hi`` to full precision.
    """
    _check_interval(g, lo, hi)
    lo_c = 1.0 - lo if lo_c is None else lo_c
    hi_c = 1.0 - hi if hi_c is None else hi_c
    if lo == hi:
        return 0.0, 0.0
    prev = None
    for level in range(min_level, max_level + 1):
        q = _weighted_fixed(g, lo, hi, lo_c, hi_c, fn, level)
        if prev is not None:
            err = abs(q - prev)
            if err <= rtol * max(abs(q), 1e-300):
                return q, max(err, _ROUNDING * abs(q))
        prev = q
    raise NonConvergence(f"weighted quadrature did not reach rtol={rtol} by level {max_level}")


def singular_integral(g: float, lo: float, hi: float, **kw) -> float:
    """``int_lo^hi (t(1-t))**(g-1) dt`` for ``g > 0``, safe at both endpoints.

    Agrees with the beta function ``B(g, g)`` over ``[0, 1]``.
    """
    return beta_weighted_integral(g, lo, hi, **kw)[0]


def _inner_primitive(g: float, base: float, level: int):
    """Vectorized ``(t, tc) -> int_base^t (u(1-u))**(g-1) du`` for ``base`` in {0, 1/2}."""
    x, _, w = _ts_rule(level)

    def lower(a, b):
        # int_a^b over [0, 1/2] for arrays a <= b
        sa, sb = a ** g, b ** g
        s = sa[:, None] + (sb - sa)[:, None] * x[None, :]
        vals = (1.0 - s ** (1.0 / g)) ** (g - 1.0) / g
        return (sb - sa) * (vals @ w)

    half = 0.5
    total_half = lower(np.zeros(1), np.full(1, half))[0]

    def prim(t, tc):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        tc = np.atleast_1d(np.asarray(tc, dtype=float))
        low = t <= half
        out = np.empty_like(t)
        # for t <= 1/2: int_0^t ; for t > 1/2: B - int_0^{1-t}
        z = np.zeros(int(low.sum()))
        out[low] = lower(z, t[low])
        hz = np.zeros(int((~low).sum()))
        out[~low] = 2.0 * total_half - lower(hz, tc[~low])
        if base == half:
            out = out - total_half
        return out

    return prim


def nested_singular_integral(alpha: float, gamma: float, lam: float, base: float, *, lam_c: float | None = None,
                             rtol: float = 1e-12, min_level: int = 3, max_level: int = 8):
    """``int_0^lam w_alpha(t) int_base^t w_gamma(u) du dt`` with ``w_g = (t(1-t))**(g-1)``.

    ``base`` is 0 or 1/2.  Both levels use tanh-sinh after the power
    substitution; the inner rule is refined together with the outer one.
    Returns ``(value, err)``.
    """
    if base not in (0, 0.5):
        raise ValueError("inner basepoint must be 0 or 1/2")
    _check_interval(alpha, 0.0, lam)
    if gamma <= 0:
        raise ValueError(f"inner integral diverges for gamma = {gamma} <= 0")
    lam_c = 1.0 - lam if lam_c is None else lam_c
    prev = None
    for level in range(min_level, max_level + 1):
        inner = _inner_primitive(gamma, base, level + 1)
        q = _weighted_fixed(alpha, 0.0, lam, 1.0, lam_c, inner, level)
        if prev is not None:
            err = abs(q - prev)
            if err <= rtol * max(abs(q), 1e-300):
                return q, max(err, _ROUNDING * abs(q))
        prev = q
    raise NonConvergence(f"nested quadrature did not reach rtol={rtol} by level {max_level}")
