from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossprob import qseries as qs
from crossprob.qseries import QExpansion, SeriesError

import oracles

N = 40


def q_coeffs(f: QExpansion, n: int):
    """Coefficients of ``f`` in ``q = qhat**2`` after removing the leading power."""
    assert f.is_even()
    return list(f.coeffs[::2][:n])


# --- eta and theta ---------------------------------------------------------


@pytest.mark.parametrize("scale,step", [(Fraction(1, 2), 1), (1, 2), (2, 4)])
def test_eta_matches_dense_product(scale, step):
    f = qs.qexp_eta(scale, N)
    assert f.leading == Fraction(scale) / 12
    assert list(f.coeffs) + [0] * (N - len(f.coeffs)) == oracles.product_coeffs(step, N)


def test_theta_squares():
    t3 = qs.qexp_theta(3, 50)
    assert [t3.coefficient(n) for n in range(8)] == [1, 2, 0, 0, 2, 0, 0, 0]
    t2 = qs.qexp_theta(2, 50)
    assert t2.leading == Fraction(1, 4)
    # exponents (n+1/2)^2 = 1/4, 9/4, 25/4
    assert [e for e, c in t2.terms()][:3] == [Fraction(1, 4), Fraction(9, 4), Fraction(25, 4)]


def test_jacobi_quartic():
    # theta3^4 = theta2^4 + theta4^4, with theta4(qhat) = theta3(-qhat)
    t3 = qs.qexp_theta(3, N)
    t4 = QExpansion(t3.leading, tuple((-1) ** n * c for n, c in enumerate(t3.coeffs)))
    diff = t3 ** 4 - qs.qexp_theta(2, N) ** 4 - t4 ** 4
    assert diff.is_zero()


def test_theta3_as_eta_quotient():
    t3 = qs.EtaQuotient({1: 5, Fraction(1, 2): -2, 2: -2}).expand(N)
    assert t3 == qs.qexp_theta(3, N)


# --- lambda ------------------------------------------------------------------


def test_lambda_leading_coefficients():
    lam = qs.qexp_lambda(10)
    assert lam.leading == 1
    assert list(lam.coeffs[:3]) == [16, -128, 704]


def test_lambda_forms_agree():
    a, b, c = (qs.qexp_lambda(N, form) for form in (1, 2, 3))
    assert a == b == c


def test_lambda_against_squared_theta_ratio():
    # oracle: dense power series arithmetic on theta coefficients
    t2 = [Fraction(c) for c in qs.qexp_theta(2, N).coeffs]  # times qhat^(1/4)
    t3 = [Fraction(c) for c in qs.qexp_theta(3, N).coeffs]
    ratio = oracles.series_mul(t2, oracles.series_inv(t3, N), N)
    lam = oracles.series_pow_int(ratio, 4, N)
    assert list(qs.qexp_lambda(N).coeffs) == lam[: len(qs.qexp_lambda(N).coeffs)]


def test_lambda_prime():
    lp = qs.qexp_lambda_prime(10)
    assert list(lp.coeffs[:3]) == [8, -128, 1056]
    assert lp == qs.qexp_lambda(10).derivative()


def test_lambda_complement():
    assert qs.qexp_lambda(N) + qs.qexp_lambda_complement(N) == QExpansion.constant(1, N)


# --- f-forms -----------------------------------------------------------------


def test_fW_coefficients():
    fw = qs.qexp_f("fW", 12)
    assert fw.leading == 2
    expected = [Fraction(1, 5), Fraction(16, 55), Fraction(364, 935), Fraction(13568, 21505), Fraction(91614, 124729)]
    assert q_coeffs(fw, 5) == expected


def test_f2_decomposition_exact():
    f2 = qs.qexp_f("f2", 64)
    fw = qs.qexp_f("fW", 64)
    t4 = qs.qexp_theta(2, 65) ** 4
    assert (f2 + 16 * fw - t4.scale(Fraction(1, 16))).truncate(64).is_zero()


def test_f2_leading_terms():
    f2 = qs.qexp_f("f2", 12)
    assert f2.leading == 1
    assert list(f2.coeffs[:2]) == [1, Fraction(-16, 5)]


def test_f1_is_eta4():
    assert qs.qexp_f("f1", N) == qs.qexp_eta(1, N) ** 4


def test_h_leading_exponent():
    for g in (Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(-1, 6)):
        assert qs.qexp_h(g, 20).leading == g
        assert qs.h_quotient(g).weight == 2


def test_tail_integral():
    f = QExpansion.from_terms({1: 2, 3: 6}, 4)
    t = qs.tail_integral(f)
    assert t.pi_power == -1
    assert t.coefficient(1) == 2 and t.coefficient(3) == 2
    with pytest.raises(SeriesError):
        qs.tail_integral(QExpansion.constant(1, 4))


# --- ring properties ---------------------------------------------------------

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
series = st.lists(fractions, min_size=6, max_size=6).map(lambda c: QExpansion(Fraction(0), tuple(c)))
units = st.lists(fractions, min_size=5, max_size=5).map(lambda c: QExpansion(Fraction(0), (Fraction(1),) + tuple(c)))


@settings(max_examples=60, deadline=None)
@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert (a * (b + c)).truncate(6) == (a * b + a * c).truncate(6)


@settings(max_examples=60, deadline=None)
@given(units, series)
def test_division_inverts_multiplication(u, a):
    assert (a * u / u).truncate(5) == a.truncate(5)


@settings(max_examples=40, deadline=None)
@given(units, st.fractions(min_value=-3, max_value=3, max_denominator=6))
def test_power_laws(u, p):
    assert (u ** p) * (u ** (1 - p)) == u.truncate((u ** p).order)
    assert u ** 2 == u * u


@settings(max_examples=40, deadline=None)
@given(series, series)
def test_derivative_is_a_derivation(a, b):
    a = QExpansion(Fraction(1), a.coeffs)
    b = QExpansion(Fraction(1), b.coeffs)
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@settings(max_examples=60, deadline=None)
@given(st.lists(fractions, min_size=1, max_size=10), st.fractions(min_value=-4, max_value=4, max_denominator=4))
def test_json_csv_round_trip(coeffs, lead):
    f = QExpansion(lead, tuple(coeffs))
    assert qs.from_json(qs.to_json(f)) == f
    assert qs.from_csv(qs.to_csv(f)) == f


def test_float_mode_refuses_serialization():
    with pytest.raises(SeriesError):
        qs.to_json(qs.qexp_h(0.3, 8))


def test_float_mode_close_to_exact():
    exact = qs.qexp_h(Fraction(1, 4), 20)
    approx = qs.qexp_h(0.25, 20)
    assert not approx.exact
    for x, y in zip(exact.coeffs, approx.coeffs):
        assert abs(float(x) - y) <= 1e-12 * max(1.0, abs(float(x)))


def test_bad_inputs():
    with pytest.raises(SeriesError):
        qs.qexp_eta(3, 10)
    with pytest.raises(SeriesError):
        qs.qexp_f("f9", 10)
    with pytest.raises(SeriesError):
        qs.qexp_lambda(10, form=4)
    with pytest.raises(SeriesError):
        QExpansion(Fraction(0), (1,)) + QExpansion(Fraction(1, 3), (1,))
