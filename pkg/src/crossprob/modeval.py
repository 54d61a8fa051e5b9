"""Numerical evaluation of q-expansions in the upper half-plane.

Only the imaginary axis gets automatic reduction (``ir -> i/r``); anywhere
else the caller has to stay where ``|qhat| < 0.9``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .qseries import DEFAULT_ORDER, QExpansion, qexp_f, qexp_lambda, qexp_lambda_complement
from .special import NonConvergence

__all__ = [
    "EvalResult",
    "HalfPlanePoint",
    "MAX_NOME",
    "C_F2",
    "check_transformation",
    "eta_value",
    "eval_f",
    "eval_f2",
    "eval_lambda",
    "eval_series",
    "f2_quadrature",
    "lambda_pair",
    "nome",
]

MAX_NOME = 0.9
TAIL_WINDOW = 8
OMEGA = cmath.exp(2j * math.pi / 3)

# constant in tau**-2 f2(-1/tau) = f2(tau) - C f1(tau)
C_F2 = 2 ** (1 / 3) * math.pi ** 2 / (3 * math.gamma(1 / 3) ** 3)


class DomainError(ValueError):
    """The point lies outside the region where the series are evaluated."""


@dataclass(frozen=True)
class HalfPlanePoint:
    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise DomainError(f"tau must lie in the upper half-plane, got {tau}")
        object.__setattr__(self, "tau", tau)

    @classmethod
    def on_axis(cls, r: float) -> "HalfPlanePoint":
        return cls(complex(0.0, r))

    @property
    def nome(self) -> float:
        return math.exp(-math.pi * self.tau.imag)

    def S(self) -> "HalfPlanePoint":
        return HalfPlanePoint(-1 / self.tau)

    def T(self, k: int = 1) -> "HalfPlanePoint":
        return HalfPlanePoint(self.tau + k)


@dataclass(frozen=True)
class EvalResult:
    """A value plus an estimate of the truncation error.

    ``reliable`` is False when the coefficient ratio estimate did not show
    convergence; ``tail_bound`` is then only the size of the last terms.
    """

    value: complex
    tail_bound: float
    reliable: bool = True

    @property
    def real(self) -> float:
        return self.value.real


def _point(tau) -> HalfPlanePoint:
    return tau if isinstance(tau, HalfPlanePoint) else HalfPlanePoint(tau)


def nome(tau) -> complex:
    """``qhat = exp(pi i tau)``."""
    return cmath.exp(1j * math.pi * _point(tau).tau)


def _qpow(exponent, tau: complex) -> complex:
    # qhat**a as exp(a pi i tau): single valued for any real a
    return cmath.exp(float(exponent) * 1j * math.pi * tau)


def eval_series(f: QExpansion, tau) -> EvalResult:
    """Sum a truncated series at ``tau`` with a geometric tail estimate.

    The decay ratio of the coefficients is estimated from the last two
    windows of ``TAIL_WINDOW`` terms and the tail is bounded by
    ``A * rho|qhat| / (1 - rho|qhat|)``, where ``A`` is the largest of the
    last window's terms.
    """
    p = _point(tau)
    aq = p.nome
    if aq >= MAX_NOME:
        raise DomainError(f"|qhat| = {aq:.3g} >= {MAX_NOME}; reduce tau first")
    c = np.asarray(f.float_coeffs, dtype=float)
    n = np.arange(len(c))
    phase = np.exp(1j * math.pi * p.tau.real * n)
    mag = aq ** n
    value = complex(np.dot(c, mag * phase)) * _qpow(f.leading, p.tau)
    scale = math.pi ** f.pi_power * abs(_qpow(f.leading, p.tau))
    value *= math.pi ** f.pi_power

    terms = np.abs(c) * mag
    tail, reliable = _tail_estimate(np.abs(c), terms, aq)
    return EvalResult(value, tail * scale, reliable)


def _tail_estimate(absc: np.ndarray, terms: np.ndarray, aq: float):
    nz = np.nonzero(absc)[0]
    if len(nz) == 0 or (len(nz) == 1 and nz[0] == 0):
        return 0.0, True
    w = TAIL_WINDOW
    last = terms[-w:]
    a = float(last.max())
    if a == 0.0:
        a = float(terms[nz[-1]])
    if len(absc) < 2 * w:
        rho = 1.0
    else:
        hi = float(absc[-w:].max())
        lo = float(absc[-2 * w:-w].max())
        rho = (hi / lo) ** (1.0 / w) if lo > 0 and hi > 0 else 1.0
    x = rho * aq
    if x >= 1.0:
        return a * len(last), False
    return a * x / (1.0 - x), True


def eval_f(kind: str, tau, order: int = DEFAULT_ORDER) -> EvalResult:
    return eval_series(qexp_f(kind, order), tau)


def eval_f2(tau, order: int = DEFAULT_ORDER) -> EvalResult:
    """``f2`` from its exact rational series."""
    return eval_f("f2", tau, order)


def lambda_pair(r: float, order: int = DEFAULT_ORDER):
    """``(lambda(ir), 1 - lambda(ir))``, each computed without cancellation.

    For ``r < 1`` the roles swap through ``lambda(i/r) = 1 - lambda(ir)``.
    Returns ``(lam, lam_c, tail_bound)``.
    """
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    s = r if r >= 1 else 1.0 / r
    tau = complex(0.0, s)
    a = eval_series(qexp_lambda(order), tau)
    b = eval_series(qexp_lambda_complement(order), tau)
    tail = max(a.tail_bound, b.tail_bound)
    if r >= 1:
        return a.real, b.real, tail
    return b.real, a.real, tail


def eval_lambda(tau, order: int = DEFAULT_ORDER) -> EvalResult:
    """The lambda function; on the imaginary axis any ``r > 0`` is accepted."""
    p = _point(tau)
    if p.tau.imag >= 1:
        return eval_series(qexp_lambda(order), p)
    if p.tau.real != 0:
        raise DomainError(f"off-axis tau with Im < 1 is outside the reduction policy: {p.tau}")
    lam, _, tail = lambda_pair(p.tau.imag, order)
    return EvalResult(complex(lam), tail)


def eta_value(tau, scale=1) -> complex:
    """``eta(scale*tau)`` from the product formula, independent of the series engine.

    On the imaginary axis below ``Im = 1`` the S-transformation
    ``eta(-1/t) = sqrt(-i t) eta(t)`` is applied first.
    """
    z = _point(tau).tau * float(Fraction(scale))
    if z.real == 0 and z.imag < 1:
        w = -1 / z
        return eta_value(w) / cmath.sqrt(-1j * z)
    return cmath.exp(1j * math.pi * z / 12) * _euler(cmath.exp(2j * math.pi * z))


def _euler(x: complex) -> complex:
    """``prod_{n>=1} (1 - x**n)``."""
    prod = 1.0 + 0j
    xn = x
    for _ in range(100_000):
        prod *= 1 - xn
        xn *= x
        if abs(xn) < 1e-18:
            return prod
    raise NonConvergence(f"Euler product did not converge at |x|={abs(x)}")


def _f3_product(tau: complex) -> complex:
    # qhat**(2/3) * E(qhat)**8 E(qhat**4)**8 / E(qhat**2)**12, kept normalized so
    # nothing underflows far up the axis
    qh = cmath.exp(1j * math.pi * tau)
    body = _euler(qh) ** 8 * _euler(qh ** 4) ** 8 / _euler(qh ** 2) ** 12
    return _qpow(Fraction(2, 3), tau) * body


def f2_quadrature(tau) -> complex:
    """``f2 = (2 pi / 3) f1(tau) int_0^inf f3(tau + i s) ds`` with eta products and adaptive quadrature.

    Independent of the rational series; used as a test oracle.
    """
    t = _point(tau).tau
    g = lambda s: _f3_product(t + 1j * s)
    opts = dict(epsabs=1e-15, epsrel=1e-13, limit=400)
    re = integrate.quad(lambda s: g(s).real, 0, np.inf, **opts)[0]
    im = integrate.quad(lambda s: g(s).imag, 0, np.inf, **opts)[0]
    return 2 * math.pi / 3 * eta_value(t) ** 4 * complex(re, im)


def check_transformation(kind: str, tau, order: int = DEFAULT_ORDER) -> float:
    """Residual of a transformation law of ``f1`` or ``f2``.

    ``f1_S``: ``|tau**-2 f1(-1/tau) + f1(tau)|``.
    ``f2_S``: ``|tau**-2 f2(-1/tau) - f2(tau) + C f1(tau)|``.
    ``vector_ST``: max norm over both matrix relations for ``(f1, f2)``
    under ``tau -> tau + 2`` and ``tau -> -1/tau``.
    """
    p = _point(tau)
    t = p.tau
    f1 = lambda z: eval_f("f1", z, order).value
    f2 = lambda z: eval_f("f2", z, order).value
    if kind == "f1_S":
        return abs(t ** -2 * f1(p.S()) + f1(p))
    if kind == "f2_S":
        return abs(t ** -2 * f2(p.S()) - f2(p) + C_F2 * f1(p))
    if kind == "vector_ST":
        a1, a2 = f1(p), f2(p)
        t2 = p.T(2)
        s = p.S()
        res_t = max(abs(f1(t2) - OMEGA * a1), abs(f2(t2) - a2))
        res_s = max(abs(t ** -2 * f1(s) + a1), abs(t ** -2 * f2(s) + C_F2 * a1 - a2))
        return max(res_t, res_s)
    raise ValueError(f"unknown transformation kind {kind!r}")
