"""Crossing probabilities on a rectangle of aspect ratio ``r`` and the partition function.

Each quantity is available through up to three independent routes:

``hypergeometric``
    closed forms in ``lambda = lambda(ir)`` summed as 2F1 / 3F2 series;
``lambda_integral``
    integrals of ``(t(1-t))**(a-1)`` over ``[0, lambda]`` by tanh-sinh;
``eta_integral``
    exact rational q-series of eta quotients, integrated termwise along
    the imaginary axis and summed at ``qhat = exp(-pi r)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import modeval
from .modeval import eval_series, lambda_pair
from .qseries import DEFAULT_ORDER, QExpansion, qexp_eta, qexp_f, qexp_h, tail_integral
from .special import (
    beta_weighted_integral,
    hypergeometric_sum,
    nested_singular_integral,
)

__all__ = [
    "CrossingParams",
    "CrossingValue",
    "METHODS",
    "PERCOLATION",
    "PartitionParams",
    "c_alpha_beta",
    "cardy_pih",
    "ode_residual",
    "partition_Z",
    "pi2",
    "pih_alpha",
    "pihv",
    "pihvbar_beta1",
    "piminus",
    "sle_crossing",
    "watts_pihvbar",
]

METHODS = ("hypergeometric", "lambda_integral", "eta_integral")
_ALIASES = {"hyp": "hypergeometric", "integral": "lambda_integral", "lambda": "lambda_integral", "eta": "eta_integral"}

G13 = math.gamma(1 / 3)
SQRT3 = math.sqrt(3.0)


def _method(method: str) -> str:
    m = _ALIASES.get(method, method)
    if m not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return m


def _as_param(x):
    """Exact ``Fraction`` when ``x`` is a short rational in disguise, else the float itself."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    f = Fraction(x).limit_denominator(10_000)
    return f if float(f) == float(x) else float(x)


def _check_r(r):
    if not r > 0:
        raise ValueError(f"aspect ratio must be positive, got {r}")


@dataclass(frozen=True)
class CrossingParams:
    """One member of the generalized crossing family.

    ``alpha = 1 - 4/kappa`` with ``0 < alpha <= 1/2``; ``beta`` defaults to 1.
    """

    alpha: float = 1 / 3
    beta: float | None = 1.0

    def __post_init__(self):
        if not 0 < self.alpha <= 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2], got {self.alpha}")
        if self.beta is not None:
            if not 0 < self.beta <= 1:
                raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
            if self.beta == self.alpha:
                raise ValueError("beta must differ from alpha")

    @classmethod
    def from_kappa(cls, kappa: float, beta: float | None = 1.0) -> "CrossingParams":
        return cls(1 - 4 / kappa, beta)

    @property
    def kappa(self) -> float:
        return 4 / (1 - self.alpha)

    @property
    def gamma(self) -> float | None:
        return None if self.beta is None else self.beta - self.alpha


PERCOLATION = CrossingParams(1 / 3, 1.0)


@dataclass(frozen=True)
class CrossingValue:
    value: float
    method: str
    est_error: float = 0.0

    def __float__(self):
        return float(self.value)

    def as_row(self, r) -> dict:
        return {"r": r, "value": self.value, "method": self.method, "est_error": self.est_error}


def _complement(v: CrossingValue) -> CrossingValue:
    return CrossingValue(1.0 - v.value, v.method, v.est_error)


# ---------------------------------------------------------------------------
# Cardy and Watts (alpha = 1/3, beta = 1)
# ---------------------------------------------------------------------------

_CARDY_HYP = 2 * math.pi * SQRT3 / G13 ** 3
_CARDY_INT = 2 * math.pi / (SQRT3 * G13 ** 3)
_CARDY_ETA = 2 ** (7 / 3) * math.pi ** 2 / (SQRT3 * G13 ** 3)
_WATTS_HYP = SQRT3 / (2 * math.pi)
_WATTS_INT = 1 / (SQRT3 * math.pi)
_WATTS_ETA = 8 * SQRT3


# the eta route doubles its series order until the scaled tail estimate is
# below EVAL_TOL; near r -> 0 the nome approaches 1 and 64 terms are too few
EVAL_TOL = 1e-13
MAX_ORDER = 1024


def _eval_growing(build, tau: complex, order: int, scale: float = 1.0):
    while True:
        res = eval_series(build(order), tau)
        if abs(scale) * res.tail_bound <= EVAL_TOL or order >= MAX_ORDER:
            return res
        order *= 2


def _reduce_default(method, reduce):
    return method == "hypergeometric" if reduce is None else bool(reduce)


def cardy_pih(r: float, method: str = "hypergeometric", *, reduce: bool | None = None,
              order: int = DEFAULT_ORDER) -> CrossingValue:
    """Probability of a left-right crossing of an ``r x 1`` rectangle.

    ``reduce`` maps ``r < 1`` to ``1 - Pi_h(1/r)``; by default only the
    hypergeometric route does this, since its series slows down as
    ``lambda -> 1``.  On the eta route ``order`` is only the starting
    truncation, see :data:`EVAL_TOL`.
    """
    _check_r(r)
    method = _method(method)
    if r < 1 and _reduce_default(method, reduce):
        return _complement(cardy_pih(1 / r, method, reduce=False, order=order))
    if method == "eta_integral":
        res = _eval_growing(lambda n: tail_integral(qexp_f("f1", n)), complex(0, r), order, _CARDY_ETA)
        return CrossingValue(_CARDY_ETA * res.real, method, _CARDY_ETA * res.tail_bound)
    lam, lam_c, tail = lambda_pair(r, order)
    if method == "hypergeometric":
        s, err = hypergeometric_sum((1 / 3, 2 / 3), (4 / 3,), lam)
        pre = _CARDY_HYP * lam ** (1 / 3)
        return CrossingValue(pre * s, method, pre * err + tail)
    q, err = beta_weighted_integral(1 / 3, 0.0, lam, hi_c=lam_c)
    return CrossingValue(_CARDY_INT * q, method, _CARDY_INT * err + tail)


def watts_pihvbar(r: float, method: str = "hypergeometric", *, reduce: bool | None = None,
                  order: int = DEFAULT_ORDER) -> CrossingValue:
    """Probability of a horizontal crossing with no vertical crossing.

    For ``r < 1`` with reduction: ``Pi_hvbar(r) = 1 - 2 Pi_h(1/r) + Pi_hvbar(1/r)``,
    which combines both functional equations.
    """
    _check_r(r)
    method = _method(method)
    if r < 1 and _reduce_default(method, reduce):
        h = cardy_pih(1 / r, method, reduce=False, order=order)
        v = watts_pihvbar(1 / r, method, reduce=False, order=order)
        return CrossingValue(1 - 2 * h.value + v.value, method, 2 * h.est_error + v.est_error)
    if method == "eta_integral":
        res = _eval_growing(lambda n: tail_integral(qexp_f("f2", n)), complex(0, r), order, _WATTS_ETA)
        return CrossingValue(_WATTS_ETA * res.real, method, _WATTS_ETA * res.tail_bound)
    lam, lam_c, tail = lambda_pair(r, order)
    if method == "hypergeometric":
        s, err = hypergeometric_sum((1, 1, 4 / 3), (2, 5 / 3), lam)
        return CrossingValue(_WATTS_HYP * lam * s, method, _WATTS_HYP * lam * err + tail)
    q, err = nested_singular_integral(1 / 3, 2 / 3, lam, 0, lam_c=lam_c)
    return CrossingValue(_WATTS_INT * q, method, _WATTS_INT * err + tail)


def pihv(r: float, method: str = "hypergeometric", **kw) -> CrossingValue:
    """Probability of a cluster touching all four sides: ``Pi_h - Pi_hvbar``."""
    h = cardy_pih(r, method, **kw)
    v = watts_pihvbar(r, method, **kw)
    return CrossingValue(h.value - v.value, h.method, h.est_error + v.est_error)


# ---------------------------------------------------------------------------
# SLE family
# ---------------------------------------------------------------------------


def _check_kappa(kappa):
    if not 4 < kappa <= 8:
        raise ValueError(f"kappa must lie in (4, 8], got {kappa}")


def _check_alpha(alpha):
    if not 0 < alpha <= 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2], got {alpha}")


def _sle_lambda(lam: float, alpha: float, method: str, lam_c: float | None = None):
    """``F(lambda)`` for dimension ``alpha``; returns ``(value, err)``."""
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if method == "hypergeometric":
        pre = math.gamma(2 * alpha) / (math.gamma(alpha) * math.gamma(1 + alpha))
        if lam == 1:
            # Gauss summation; equals 1 by the duplication formula
            s = math.gamma(1 + alpha) * math.gamma(alpha) / (math.gamma(2 * alpha) * math.gamma(1.0))
            return pre * s, 1e-16
        s, err = hypergeometric_sum((alpha, 1 - alpha), (1 + alpha,), lam)
        return pre * lam ** alpha * s, pre * lam ** alpha * err
    pre = math.gamma(2 * alpha) / math.gamma(alpha) ** 2
    q, err = beta_weighted_integral(alpha, 0.0, lam, hi_c=lam_c)
    return pre * q, pre * err


def sle_crossing(lam: float, kappa: float, method: str = "hyp") -> float:
    """Crossing probability for SLE with speed ``kappa`` at cross-ratio ``lam``.

    ``lam`` may equal 1, where the value is exactly 1.
    """
    _check_kappa(kappa)
    if not 0 < lam <= 1:
        raise ValueError(f"lam must lie in (0, 1], got {lam}")
    method = _method(method)
    if method == "eta_integral":
        raise ValueError("sle_crossing takes lambda directly; use pih_alpha for the eta route")
    return _sle_lambda(lam, 1 - 4 / kappa, method)[0]


@lru_cache(maxsize=None)
def _h_tail(alpha, order):
    return tail_integral(qexp_h(alpha, order))


def pih_alpha(r: float, alpha: float, method: str = "eta_integral", *, order: int = DEFAULT_ORDER) -> CrossingValue:
    """Generalized horizontal crossing ``Pi_h(r; alpha)``.

    The eta route integrates the series of the weight-2 quotient of
    dimension ``alpha`` termwise; exact coefficients are used whenever
    ``alpha`` is a short rational, float coefficients otherwise.
    """
    _check_r(r)
    _check_alpha(alpha)
    method = _method(method)
    if method == "eta_integral":
        a = _as_param(alpha)
        fa = float(a)
        const = 2 ** (4 * fa) * math.pi * math.gamma(2 * fa) / math.gamma(fa) ** 2
        res = _eval_growing(lambda n: _h_tail(a, n), complex(0, r), order, const)
        return CrossingValue(const * res.real, method, const * res.tail_bound)
    lam, lam_c, tail = lambda_pair(r, order)
    if method == "hypergeometric" and r < 1:
        v, err = _sle_lambda(lam_c, alpha, method)
        return CrossingValue(1 - v, method, err + tail)
    v, err = _sle_lambda(lam, alpha, method, lam_c)
    return CrossingValue(v, method, err + tail)


# ---------------------------------------------------------------------------
# two-parameter family
# ---------------------------------------------------------------------------


def c_alpha_beta(alpha: float, beta: float) -> float:
    """Normalizing constant of the nested integrals.

    ``2**(4 beta + 1) pi**2 Gamma(2a) Gamma(2b - 2a) / (Gamma(a)**2 Gamma(b - a)**2)``;
    for ``beta < alpha`` the Gamma values at negative arguments are the
    analytic continuation (``math.gamma`` handles them by reflection).
    """
    _check_alpha(alpha)
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    g = beta - alpha
    if g == 0:
        raise ValueError("beta must differ from alpha")
    if g <= 0 and float(2 * g).is_integer():
        raise ValueError(f"Gamma pole at beta - alpha = {g}")
    return (
        2 ** (4 * beta + 1) * math.pi ** 2 * math.gamma(2 * alpha) * math.gamma(2 * g)
        / (math.gamma(alpha) ** 2 * math.gamma(g) ** 2)
    )


def _lambda_form_const(alpha, gamma):
    return 2 * math.gamma(2 * alpha) * math.gamma(2 * gamma) / (math.gamma(alpha) ** 2 * math.gamma(gamma) ** 2)


@lru_cache(maxsize=None)
def _family_series(alpha, gamma, order):
    """``(tail(h_a * P), P, tail(h_a))`` with ``P`` the primitive of ``h_g`` along ``t`` vanishing at infinity."""
    ha = qexp_h(alpha, order)
    hg = qexp_h(gamma, order)
    # P(t) = -sum a/(pi m) qhat**m, so dP/dt = h_g(it); this form needs no
    # convergence at infinity and therefore also covers gamma < 0
    k = hg.primitive_kernel()
    P = QExpansion(k.leading, tuple(-c for c in k.coeffs), k.pi_power - 1)
    return tail_integral(ha * P), P, tail_integral(ha)


def _eta_pair(r, alpha, beta, order):
    """``(Pi_-, Pi_2, err)`` by the eta route."""
    a, b = _as_param(alpha), _as_param(beta)
    g = b - a
    C = c_alpha_beta(float(a), float(b))
    tau = complex(0, r)
    while True:
        t_haP, P, t_ha = _family_series(a, g, order)
        x = eval_series(t_haP, tau)
        p1 = eval_series(P, 1j)
        y = eval_series(t_ha, tau)
        err = abs(C) * (x.tail_bound + p1.tail_bound * abs(y.real) + abs(p1.real) * y.tail_bound)
        if err <= EVAL_TOL or order >= MAX_ORDER:
            break
        order *= 2
    two = -C * x.real
    minus = C * (x.real - p1.real * y.real)
    return minus, two, err


def _check_thm3(alpha, beta):
    _check_alpha(alpha)
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if beta == alpha:
        raise ValueError("beta must differ from alpha")


def piminus(r: float, alpha: float = 1 / 3, beta: float = 1.0, method: str = "eta_integral",
            *, order: int = DEFAULT_ORDER) -> CrossingValue:
    """Generalized four-sided crossing ``Pi_-(r; alpha, beta)``, inner basepoint ``u = 1``."""
    _check_r(r)
    _check_thm3(alpha, beta)
    method = _method(method)
    if method == "eta_integral":
        m, _, err = _eta_pair(r, alpha, beta, order)
        return CrossingValue(m, method, err)
    if method == "hypergeometric":
        if r < 1:
            # symmetric under r -> 1/r
            return piminus(1 / r, alpha, beta, method, order=order)
        h = pih_alpha(r, alpha, method, order=order)
        v = pihvbar_beta1(r, alpha, beta=beta, order=order)
        return CrossingValue(h.value - v.value, method, h.est_error + v.est_error)
    g = beta - alpha
    if g <= 0:
        raise ValueError("the lambda-integral form needs beta > alpha")
    lam, lam_c, tail = lambda_pair(r, order)
    K = _lambda_form_const(alpha, g)
    q, err = nested_singular_integral(alpha, g, lam, 0.5, lam_c=lam_c)
    return CrossingValue(-K * q, method, K * err + tail)


def pi2(r: float, alpha: float = 1 / 3, beta: float = 1.0, method: str = "eta_integral",
        *, order: int = DEFAULT_ORDER) -> CrossingValue:
    """Generalized ``Pi_hvbar(r; alpha, beta)``, inner basepoint at infinity; needs ``beta > alpha``."""
    _check_r(r)
    _check_thm3(alpha, beta)
    if beta <= alpha:
        raise ValueError("pi2 requires beta > alpha")
    method = _method(method)
    if method == "eta_integral":
        _, two, err = _eta_pair(r, alpha, beta, order)
        return CrossingValue(two, method, err)
    if method == "hypergeometric":
        if r < 1:
            h = pih_alpha(1 / r, alpha, method, order=order)
            v = pihvbar_beta1(1 / r, alpha, beta=beta, order=order)
            return CrossingValue(1 - 2 * h.value + v.value, method, 2 * h.est_error + v.est_error)
        return pihvbar_beta1(r, alpha, beta=beta, order=order)
    g = beta - alpha
    lam, lam_c, tail = lambda_pair(r, order)
    K = _lambda_form_const(alpha, g)
    q, err = nested_singular_integral(alpha, g, lam, 0, lam_c=lam_c)
    return CrossingValue(K * q, method, K * err + tail)


def pihvbar_beta1(r: float, alpha: float, *, beta: float = 1.0, order: int = DEFAULT_ORDER) -> CrossingValue:
    """The purely hypergeometric ``beta = 1`` case of ``Pi_2``.

    ``(tan(pi a)/pi) (1-2a)/(1-a) lambda 3F2(1, 1, 2-2a; 2, 2-a; lambda)``.
    """
    _check_r(r)
    if beta != 1:
        raise ValueError("the 3F2 closed form exists only for beta = 1")
    if not 0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha}")
    lam, _, tail = lambda_pair(r, order)
    pre = pihvbar_beta1_prefactor(alpha)
    s, err = hypergeometric_sum((1, 1, 2 - 2 * alpha), (2, 2 - alpha), lam)
    return CrossingValue(pre * lam * s, "hypergeometric", pre * lam * err + tail)


def pihvbar_beta1_prefactor(alpha: float) -> float:
    return math.tan(math.pi * alpha) / math.pi * (1 - 2 * alpha) / (1 - alpha)


# ---------------------------------------------------------------------------
# the third-order ODE in lambda
# ---------------------------------------------------------------------------

ODE_STEP = 1e-3
_ODE_LEVEL = 7


def _F_of_lambda(quantity: str, params: CrossingParams):
    a = params.alpha
    b = 1.0 if params.beta is None else params.beta
    g = b - a
    if quantity == "one":
        return lambda lam: 1.0
    if quantity == "pih":
        return lambda lam: _sle_lambda(lam, a, "hypergeometric")[0]
    if quantity in ("pihvbar", "pihv"):
        if b == 1 and a < 0.5:
            pre = pihvbar_beta1_prefactor(a)
            vbar = lambda lam: pre * lam * hypergeometric_sum((1, 1, 2 - 2 * a), (2, 2 - a), lam)[0]
        else:
            # fixed rule: the quadrature error is then a smooth function of lam
            K = _lambda_form_const(a, g)
            vbar = lambda lam: K * nested_singular_integral(
                a, g, lam, 0, min_level=_ODE_LEVEL, max_level=_ODE_LEVEL + 1, rtol=1.0)[0]
        if quantity == "pihvbar":
            return vbar
        return lambda lam: _sle_lambda(lam, a, "hypergeometric")[0] - vbar(lam)
    raise ValueError(f"unknown quantity {quantity!r}; expected one, pih, pihvbar or pihv")


def ode_residual(quantity: str, lam: float, params: CrossingParams = PERCOLATION, h: float = ODE_STEP) -> float:
    """``|d/dl w1 d/dl w2 dF/dl|`` by nested central differences.

    ``w1 = (l(1-l))**(1+alpha-beta)`` and ``w2 = (l(1-l))**(1-alpha)``.  ``F``
    is sampled at ``lam +- h/2`` and ``lam +- 3h/2``.
    """
    if not 0.05 < lam < 0.95:
        raise ValueError(f"lam must lie in (0.05, 0.95), got {lam}")
    a = params.alpha
    b = 1.0 if params.beta is None else params.beta
    F = _F_of_lambda(quantity, params)
    w1 = lambda x: (x * (1 - x)) ** (1 + a - b)
    w2 = lambda x: (x * (1 - x)) ** (1 - a)
    f = {k: F(lam + k * h / 2) for k in (-3, -1, 1, 3)}
    D = {j: w2(lam + j * h) * (f[2 * j + 1] - f[2 * j - 1]) / h for j in (-1, 0, 1)}
    E = {s: w1(lam + s * h / 2) * (D[(s + 1) // 2] - D[(s - 1) // 2]) / h for s in (-1, 1)}
    return abs((E[1] - E[-1]) / h)


# ---------------------------------------------------------------------------
# partition function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionParams:
    l: float
    lp: float
    c: float = 0.5
    scale_const: float = 1.0

    def __post_init__(self):
        if not (self.l > 0 and self.lp > 0):
            raise ValueError("rectangle sides must be positive")
        if not self.scale_const > 0:
            raise ValueError("scale constant must be positive")


def _abs_eta(tau: complex) -> float:
    if tau.real == 0 and tau.imag < 1:
        # |eta(ir)| = |eta(i/r)| / sqrt(r)
        return _abs_eta(complex(0, 1 / tau.imag)) / math.sqrt(tau.imag)
    if math.exp(-math.pi * tau.imag) < modeval.MAX_NOME:
        return abs(_eval_growing(lambda n: qexp_eta(1, n), tau, DEFAULT_ORDER).value)
    return abs(modeval.eta_value(tau))


def partition_Z(p: PartitionParams, tau: complex | None = None) -> float:
    """``C l**(c/4) |eta(i l'/l)|**(-c/2)``.

    ``tau`` overrides ``i l'/l``; only its modulus class matters since
    ``|eta|`` is invariant under ``tau -> tau + 1``.
    """
    t = complex(0, p.lp / p.l) if tau is None else complex(tau)
    if p.c == 0:
        return p.scale_const
    return p.scale_const * p.l ** (p.c / 4) * _abs_eta(t) ** (-p.c / 2)
