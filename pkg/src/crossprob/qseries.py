"""Truncated power series in the nome ``qhat = exp(pi*i*tau)``.

Every modular object used by the package (eta, theta, the lambda function,
the weight-2 forms behind the crossing formulas) is a :class:`QExpansion`:
``qhat**leading`` times a power series in ``qhat`` with exact rational
coefficients.  Series that only involve even powers relative to the leading
exponent are series in ``q = qhat**2``; they are still stored in ``qhat``
with the odd slots zero.

A series may carry an integral power of ``pi`` as an overall factor.  This
keeps the termwise tail integral ``sum a_n qhat**m_n / (pi*m_n)`` exact.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

BigRational = Fraction
Scalar = Union[int, Fraction, float]

DEFAULT_ORDER = 64
ETA_SCALES = (Fraction(1, 2), Fraction(1), Fraction(2))

__all__ = [
    "BigRational",
    "DEFAULT_ORDER",
    "EtaQuotient",
    "QExpansion",
    "SeriesError",
    "qexp_eta",
    "qexp_f",
    "qexp_h",
    "qexp_lambda",
    "qexp_lambda_complement",
    "qexp_lambda_prime",
    "qexp_theta",
    "tail_integral",
]


class SeriesError(ValueError):
    """Raised for operations that are undefined on the given series."""


def _is_exact(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool)


def _as_exponent(x) -> Scalar:
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _integral_offset(a: Scalar, b: Scalar) -> int:
    """Return ``b - a`` as an int, or raise if the exponents are not aligned."""
    d = b - a
    if isinstance(d, float):
        k = round(d)
        if abs(d - k) > 1e-9:
            raise SeriesError(f"exponents {a} and {b} differ by a non-integer")
        return int(k)
    if d.denominator != 1:
        raise SeriesError(f"exponents {a} and {b} differ by a non-integer")
    return int(d)


@dataclass(frozen=True, eq=False)
class QExpansion:
    """``pi**pi_power * sum_n coeffs[n] * qhat**(leading + n) + O(qhat**(leading + order))``.

    Leading zero coefficients are stripped on construction, so a nonzero
    series always has ``coeffs[0] != 0``.  The all-zero series keeps its
    length, which records how far it is known to vanish.
    """

    leading: Scalar
    coeffs: tuple
    pi_power: int = 0

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise SeriesError("a QExpansion needs at least one coefficient")
        leading = _as_exponent(self.leading)
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        if 0 < k < len(coeffs):
            coeffs = coeffs[k:]
            leading = leading + k
        coeffs = tuple(Fraction(c) if _is_exact(c) else c for c in coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "leading", leading)
        object.__setattr__(self, "pi_power", int(self.pi_power))

    # -- construction ------------------------------------------------------

    @classmethod
    def constant(cls, value: Scalar, order: int = DEFAULT_ORDER) -> "QExpansion":
        return cls(Fraction(0), (value,) + (0,) * (order - 1))

    @classmethod
    def monomial(cls, exponent: Scalar, coeff: Scalar = 1, order: int = DEFAULT_ORDER) -> "QExpansion":
        return cls(exponent, (coeff,) + (0,) * (order - 1))

    @classmethod
    def from_terms(cls, terms: Mapping, order: int, leading: Scalar | None = None) -> "QExpansion":
        """Build from ``{exponent: coefficient}``; exponents must share a residue mod 1."""
        exps = [_as_exponent(e) for e in terms]
        lead = min(exps) if leading is None else _as_exponent(leading)
        coeffs = [0] * order
        for e, c in terms.items():
            n = _integral_offset(lead, _as_exponent(e))
            if 0 <= n < order:
                coeffs[n] += c
        return cls(lead, tuple(coeffs))

    # -- basic properties --------------------------------------------------

    @property
    def order(self) -> int:
        """Number of retained coefficients."""
        return len(self.coeffs)

    @property
    def precision(self) -> Scalar:
        """Exponent of the first unknown term."""
        return self.leading + self.order

    @property
    def exact(self) -> bool:
        return not isinstance(self.leading, float) and all(isinstance(c, Fraction) for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_even(self) -> bool:
        """True when only every other coefficient is populated (a series in ``q``)."""
        return all(c == 0 for c in self.coeffs[1::2])

    def exponents(self) -> list:
        return [self.leading + n for n in range(self.order)]

    def terms(self) -> list[tuple]:
        """``(exponent, coefficient)`` pairs for the nonzero coefficients."""
        return [(self.leading + n, c) for n, c in enumerate(self.coeffs) if c != 0]

    def coefficient(self, exponent) -> Scalar:
        n = _integral_offset(self.leading, _as_exponent(exponent))
        if n < 0:
            return 0
        if n >= self.order:
            raise SeriesError(f"exponent {exponent} is beyond the truncation order")
        return self.coeffs[n]

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (
            self.leading == other.leading
            and self.coeffs == other.coeffs
            and self.pi_power == other.pi_power
        )

    def __hash__(self):
        return hash((self.leading, self.coeffs, self.pi_power))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order > 6 else ""
        pi = f", pi_power={self.pi_power}" if self.pi_power else ""
        return f"QExpansion(leading={self.leading}, coeffs=({shown}{more}), order={self.order}{pi})"

    @cached_property
    def float_coeffs(self) -> tuple:
        return tuple(float(c) for c in self.coeffs)

    # -- truncation and reshaping -------------------------------------------

    def truncate(self, order: int) -> "QExpansion":
        if order < 1:
            raise SeriesError("order must be positive")
        if order > self.order:
            raise SeriesError(f"cannot extend a series of order {self.order} to {order}")
        return QExpansion(self.leading, self.coeffs[:order], self.pi_power)

    def truncate_at(self, precision) -> "QExpansion":
        """Drop every term with exponent ``>= precision``."""
        n = _integral_offset(self.leading, _as_exponent(precision))
        return self.truncate(min(n, self.order))

    def to_float(self) -> "QExpansion":
        return QExpansion(float(self.leading), self.float_coeffs, self.pi_power)

    def even_part(self) -> "QExpansion":
        """Terms whose exponent is an even integer (requires integral exponents)."""
        return self._parity_part(0)

    def odd_part(self) -> "QExpansion":
        return self._parity_part(1)

    def _parity_part(self, parity: int) -> "QExpansion":
        lead = self.leading
        if isinstance(lead, float) or lead.denominator != 1:
            raise SeriesError("parity split needs integral exponents")
        coeffs = tuple(
            c if (int(lead) + n) % 2 == parity else 0 for n, c in enumerate(self.coeffs)
        )
        return QExpansion(lead, coeffs, self.pi_power)

    # -- ring operations ---------------------------------------------------

    def _check_pi(self, other: "QExpansion"):
        if self.pi_power != other.pi_power:
            raise SeriesError("cannot add series carrying different powers of pi")

    def __neg__(self):
        return QExpansion(self.leading, tuple(-c for c in self.coeffs), self.pi_power)

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            if other == 0:
                return self
            return self._add_constant(other)
        self._check_pi(other)
        lead = self.leading if _integral_offset(self.leading, other.leading) >= 0 else other.leading
        prec = min(self.precision, other.precision)
        n = _integral_offset(lead, prec)
        if n < 1:
            raise SeriesError("sum has no known coefficients")
        coeffs = [0] * n
        for s in (self, other):
            off = _integral_offset(lead, s.leading)
            for k, c in enumerate(s.coeffs):
                if off + k < n:
                    coeffs[off + k] += c
        return QExpansion(lead, tuple(coeffs), self.pi_power)

    __radd__ = __add__

    def _add_constant(self, value):
        if self.pi_power:
            raise SeriesError("cannot add a plain constant to a series carrying a power of pi")
        off = _integral_offset(self.leading, 0)
        if off >= self.order:
            raise SeriesError("constant lies beyond the truncation order")
        if off >= 0:
            coeffs = list(self.coeffs)
            coeffs[off] += value
            return QExpansion(self.leading, tuple(coeffs))
        coeffs = [value] + [0] * (-off - 1) + list(self.coeffs)
        return QExpansion(Fraction(0), tuple(coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor: Scalar, pi_power: int = 0) -> "QExpansion":
        return QExpansion(self.leading, tuple(c * factor for c in self.coeffs), self.pi_power + pi_power)

    def __mul__(self, other):
        if not isinstance(other, QExpansion):
            return self.scale(other)
        n = min(self.order, other.order)
        return QExpansion(
            self.leading + other.leading,
            _convolve(self.coeffs[:n], other.coeffs[:n], n),
            self.pi_power + other.pi_power,
        )

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if not isinstance(other, QExpansion):
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            inv = Fraction(1) / other if _is_exact(other) else 1.0 / other
            return self.scale(inv)
        return self * other ** -1

    def __pow__(self, exponent):
        exponent = exponent if isinstance(exponent, float) else Fraction(exponent)
        if self.is_zero():
            raise ZeroDivisionError("power of the zero series")
        c0 = self.coeffs[0]
        integral = not isinstance(exponent, float) and exponent.denominator == 1
        if integral:
            head = c0 ** int(exponent)
        elif c0 == 1:
            head = Fraction(1) if self.exact and not isinstance(exponent, float) else 1.0
        elif not self.exact or isinstance(exponent, float):
            if c0 <= 0:
                raise SeriesError("real power of a series with non-positive leading coefficient")
            head = float(c0) ** float(exponent)
        else:
            raise SeriesError(
                "non-integral power needs a unit leading coefficient after removing qhat**leading"
            )
        if self.pi_power and not integral:
            raise SeriesError("non-integral power of a series carrying a power of pi")
        coeffs = _power_coeffs(self.coeffs, exponent, head)
        pi_power = self.pi_power * int(exponent) if self.pi_power else 0
        return QExpansion(self.leading * exponent, coeffs, pi_power)

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "QExpansion":
        """``(1/(2*pi*i)) d/dtau``: the coefficient at ``qhat**m`` gets multiplied by ``m/2``."""
        half = Fraction(1, 2) if self.exact else 0.5
        out = tuple(c * (self.leading + n) * half for n, c in enumerate(self.coeffs))
        return QExpansion(self.leading, out, self.pi_power)

    def derivative_t(self) -> "QExpansion":
        """``d/dt`` on the imaginary axis ``tau = i*t``: ``qhat**m -> -pi*m*qhat**m``."""
        out = tuple(-c * (self.leading + n) for n, c in enumerate(self.coeffs))
        return QExpansion(self.leading, out, self.pi_power + 1)

    def primitive_kernel(self) -> "QExpansion":
        """Termwise ``a*qhat**m -> (a/m)*qhat**m`` (no factor of pi).

        Fails when an exponent with a nonzero coefficient is zero.
        """
        out = []
        for n, c in enumerate(self.coeffs):
            m = self.leading + n
            if c == 0:
                out.append(c)
                continue
            if m == 0:
                raise SeriesError("termwise primitive undefined for a qhat**0 term")
            out.append(c / m)
        return QExpansion(self.leading, tuple(out), self.pi_power)


def _convolve(a: Sequence, b: Sequence, n: int) -> tuple:
    if all(isinstance(x, Fraction) for x in a) and all(isinstance(x, Fraction) for x in b):
        return _convolve_exact(a, b, n)
    out = [0.0] * n
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(n - i):
            y = b[j]
            if y:
                out[i + j] += x * y
    return tuple(out)


def _convolve_exact(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> tuple:
    # Integer convolution over a common denominator; Fraction arithmetic in the
    # inner loop is an order of magnitude slower.
    da = math.lcm(*(x.denominator for x in a))
    db = math.lcm(*(x.denominator for x in b))
    ia = [x.numerator * (da // x.denominator) for x in a]
    ib = [x.numerator * (db // x.denominator) for x in b]
    nz_b = [(j, y) for j, y in enumerate(ib) if y]
    out = [0] * n
    for i, x in enumerate(ia):
        if not x:
            continue
        lim = n - i
        for j, y in nz_b:
            if j >= lim:
                break
            out[i + j] += x * y
    d = da * db
    return tuple(Fraction(v, d) for v in out)


def _power_coeffs(g: Sequence, p, head) -> tuple:
    """Coefficients of ``(sum g_k x**k)**p`` with ``g_0 != 0`` via the J.C.P. Miller recurrence."""
    n = len(g)
    g0 = g[0]
    nz = [(k, gk) for k, gk in enumerate(g) if k and gk != 0]
    y = [head] + [0] * (n - 1)
    p1 = p + 1
    for m in range(1, n):
        acc = 0
        for k, gk in nz:
            if k > m:
                break
            acc += (p1 * k - m) * gk * y[m - k]
        y[m] = acc / (m * g0)
    return tuple(y)


# ---------------------------------------------------------------------------
# Eta, theta and the objects built from them
# ---------------------------------------------------------------------------


def _check_order(order: int, minimum: int = 1):
    if int(order) != order or order < minimum:
        raise SeriesError(f"order must be an integer >= {minimum}, got {order}")


def _scale(scale) -> Fraction:
    s = Fraction(scale)
    if s not in ETA_SCALES:
        raise SeriesError(f"eta scale must be one of 1/2, 1, 2; got {scale}")
    return s


@lru_cache(maxsize=None)
def qexp_eta(scale=1, order: int = DEFAULT_ORDER) -> QExpansion:
    """``eta(scale*tau)`` via Euler's pentagonal number theorem.

    ``eta(s*tau) = qhat**(s/12) * sum_k (-1)**k qhat**(s*k*(3k-1))`` so only
    ``O(sqrt(order))`` coefficients are nonzero.
    """
    _check_order(order)
    s = _scale(scale)
    step = 2 * s  # eta's product variable q**s is qhat**(2s)
    coeffs = [0] * order
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = step * kk * (3 * kk - 1) / 2
            if e < order:
                coeffs[int(e)] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return QExpansion(s / 12, tuple(coeffs))


@lru_cache(maxsize=None)
def qexp_theta(kind: int, order: int = DEFAULT_ORDER) -> QExpansion:
    """Jacobi theta_2 or theta_3 as lattice sums in ``qhat``."""
    _check_order(order)
    coeffs = [0] * order
    if kind == 3:
        n = 0
        while n * n < order:
            coeffs[n * n] += 1 if n == 0 else 2
            n += 1
        return QExpansion(Fraction(0), tuple(coeffs))
    if kind == 2:
        # (n + 1/2)**2 = 1/4 + n(n+1)
        n = 0
        while n * (n + 1) < order:
            coeffs[n * (n + 1)] += 2
            n += 1
        return QExpansion(Fraction(1, 4), tuple(coeffs))
    raise SeriesError(f"theta kind must be 2 or 3, got {kind}")


@dataclass(frozen=True)
class EtaQuotient:
    """``prod_s eta(s*tau)**power_s`` for ``s`` in {1/2, 1, 2}."""

    factors: tuple

    def __init__(self, factors: Mapping | Iterable):
        items = factors.items() if isinstance(factors, Mapping) else factors
        merged: dict = {}
        for s, p in items:
            s = _scale(s)
            if s in merged:
                raise SeriesError(f"duplicate eta scale {s}")
            merged[s] = p if isinstance(p, float) else Fraction(p)
        object.__setattr__(self, "factors", tuple(sorted(merged.items())))

    @property
    def leading(self):
        """Leading ``qhat`` exponent, ``sum s*p/12``."""
        return sum((s * p / 12 for s, p in self.factors), Fraction(0))

    @property
    def weight(self):
        return sum((p for _, p in self.factors), Fraction(0)) / 2

    def expand(self, order: int = DEFAULT_ORDER) -> QExpansion:
        _check_order(order)
        result = None
        for s, p in self.factors:
            if p == 0:
                continue
            term = qexp_eta(s, order) ** p
            result = term if result is None else result * term
        if result is None:
            return QExpansion.constant(Fraction(1), order)
        return result


def _eta_quotient(order: int, factors: Mapping, prefactor=1) -> QExpansion:
    return EtaQuotient(factors).expand(order).scale(prefactor)


@lru_cache(maxsize=None)
def qexp_lambda(order: int = DEFAULT_ORDER, form: int = 1) -> QExpansion:
    """The Hauptmodul ``lambda(tau) = 16 qhat - 128 qhat**2 + 704 qhat**3 - ...``.

    ``form`` picks one of three equivalent constructions: 1 is
    ``16 eta(tau/2)**8 eta(2tau)**16 / eta(tau)**24``, 2 is one minus the
    complementary quotient, 3 is ``(theta_2/theta_3)**4``.  All three give the
    same coefficients.
    """
    _check_order(order, 3)
    half = Fraction(1, 2)
    if form == 1:
        return _eta_quotient(order, {half: 8, 2: 16, 1: -24}, 16)
    if form == 2:
        lam = 1 - qexp_lambda_complement(order + 1)
        return lam.truncate(order)
    if form == 3:
        ratio = qexp_theta(2, order) / qexp_theta(3, order)
        return (ratio ** 4).truncate(order)
    raise SeriesError(f"lambda form must be 1, 2 or 3, got {form}")


@lru_cache(maxsize=None)
def qexp_lambda_complement(order: int = DEFAULT_ORDER) -> QExpansion:
    """``1 - lambda = eta(tau/2)**16 eta(2tau)**8 / eta(tau)**24``."""
    _check_order(order)
    return _eta_quotient(order, {Fraction(1, 2): 16, 2: 8, 1: -24})


@lru_cache(maxsize=None)
def qexp_lambda_prime(order: int = DEFAULT_ORDER) -> QExpansion:
    """``lambda'(tau) / (2 pi i) = 8 eta(tau/2)**16 eta(2tau)**16 / eta(tau)**28``."""
    _check_order(order, 3)
    return _eta_quotient(order, {Fraction(1, 2): 16, 2: 16, 1: -28}, 8)


def h_quotient(gamma) -> EtaQuotient:
    """``eta(tau)**(20-48g) / (eta(tau/2) eta(2tau))**(8-24g)``, leading exponent ``g``."""
    g = gamma if isinstance(gamma, float) else Fraction(gamma)
    a = 20 - 48 * g
    b = -(8 - 24 * g)
    return EtaQuotient({1: a, Fraction(1, 2): b, 2: b})


@lru_cache(maxsize=None)
def _qexp_h_cached(gamma, order, is_float):
    # is_float keeps 0.25 and Fraction(1, 4) apart; they hash equal
    return h_quotient(gamma).expand(order)


def qexp_h(gamma, order: int = DEFAULT_ORDER) -> QExpansion:
    """The weight-2 eta quotient of dimension ``gamma`` behind the generalized crossing formulas.

    ``gamma=1/3`` gives ``eta**4`` and ``gamma=2/3`` gives
    ``eta(tau/2)**8 eta(2tau)**8 / eta(tau)**12``.  Float ``gamma`` switches to
    float coefficients.
    """
    _check_order(order)
    if not isinstance(gamma, float):
        gamma = Fraction(gamma)
    return _qexp_h_cached(gamma, order, isinstance(gamma, float))


def tail_integral(f: QExpansion) -> QExpansion:
    """``t -> integral_t^inf f(i*s) ds`` termwise: ``a qhat**m -> a/(pi*m) qhat**m``.

    Needs every exponent positive, otherwise the integral diverges.
    """
    if f.leading <= 0 and not f.is_zero():
        raise SeriesError(f"tail integral diverges: leading exponent {f.leading} is not positive")
    k = f.primitive_kernel()
    return QExpansion(k.leading, k.coeffs, f.pi_power - 1)


@lru_cache(maxsize=None)
def qexp_f(kind: str, order: int = DEFAULT_ORDER) -> QExpansion:
    """The weight-2 forms ``f1``, ``f3``, ``f2`` and the remainder ``fW``.

    ``f2 = (2/3) * f1 * K(f3)`` where ``K`` is the termwise primitive
    ``a qhat**m -> (a/m) qhat**m``; with that normalization
    ``f2 = theta_2**4 / 16 - 16 fW`` holds exactly.
    """
    _check_order(order)
    if kind == "f1":
        return qexp_h(Fraction(1, 3), order)
    if kind == "f3":
        return qexp_h(Fraction(2, 3), order)
    if kind == "f2":
        kernel = qexp_f("f3", order).primitive_kernel()
        return (qexp_f("f1", order) * kernel).scale(Fraction(2, 3))
    if kind == "fW":
        # the qhat**1 terms cancel, so one extra coefficient keeps `order` of them
        theta4 = qexp_theta(2, order + 1) ** 4
        rest = theta4.scale(Fraction(1, 16)) - qexp_f("f2", order + 1)
        return rest.scale(Fraction(1, 16)).truncate(order)
    raise SeriesError(f"unknown kind {kind!r}; expected f1, f2, f3 or fW")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _require_exact(f: QExpansion):
    if not f.exact:
        raise SeriesError("only exact series can be serialized")


def to_json(f: QExpansion) -> str:
    """``{"leading": "p/q", "coeffs": ["p/q", ...]}``; ``pi_power`` is added only when nonzero."""
    _require_exact(f)
    doc = {"leading": _frac_str(f.leading), "coeffs": [_frac_str(c) for c in f.coeffs]}
    if f.pi_power:
        doc["pi_power"] = f.pi_power
    return json.dumps(doc)


def from_json(text: str) -> QExpansion:
    doc = json.loads(text)
    return QExpansion(
        Fraction(doc["leading"]),
        tuple(Fraction(c) for c in doc["coeffs"]),
        int(doc.get("pi_power", 0)),
    )


CSV_HEADER = ("exponent", "numerator", "denominator")


def to_csv(f: QExpansion) -> str:
    """One row per retained coefficient, zeros included, so the order survives a round trip."""
    _require_exact(f)
    if f.pi_power:
        raise SeriesError("the CSV layout has no field for a power of pi")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_HEADER)
    for e, c in zip(f.exponents(), f.coeffs):
        w.writerow((_frac_str(e), c.numerator, c.denominator))
    return buf.getvalue()


def from_csv(text: str) -> QExpansion:
    rows = list(csv.reader(io.StringIO(text)))
    if rows and tuple(rows[0]) == CSV_HEADER:
        rows = rows[1:]
    if not rows:
        raise SeriesError("empty CSV series")
    lead = Fraction(rows[0][0])
    coeffs = []
    for n, (e, num, den) in enumerate(rows):
        if Fraction(e) != lead + n:
            raise SeriesError(f"row {n}: exponent {e} out of sequence")
        coeffs.append(Fraction(int(num), int(den)))
    return QExpansion(lead, tuple(coeffs))
