"""Scalar q-series primitives: frozen oracles, shift identities, contracts."""

import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qmeixner.errors import DenominatorPole, NonConvergent, PoleHit
from qmeixner.qseries import (
    CompensatedSum,
    QContext,
    QPower,
    basic_hypergeometric,
    big_qexp,
    little_qexp,
    q_binomial,
    q_pochhammer,
    q_pochhammer_inf,
)

CTX = QContext(q=0.5)

qs = st.floats(min_value=0.05, max_value=0.95)
# keep z clear of the e_q pole set {q^-m} which starts at z = 1
safe_z = st.floats(min_value=-3.0, max_value=0.9)


def test_pochhammer_hand_value():
    # (0.5; 0.5)_3 = 0.5 * 0.75 * 0.875
    assert q_pochhammer(0.5, 3, CTX) == pytest.approx(0.328125, abs=0.0)


def test_pochhammer_empty_product():
    assert q_pochhammer(0.7, 0, CTX) == 1.0


def test_pochhammer_rejects_negative_order():
    with pytest.raises(ValueError):
        q_pochhammer(0.5, -1, CTX)


@given(a=st.floats(-2.0, 0.95), q=qs, m=st.integers(0, 8), n=st.integers(0, 8))
def test_pochhammer_splitting(a, q, m, n):
    """(a;q)_{m+n} = (a;q)_m (a q^m; q)_n."""
    ctx = QContext(q=q)
    whole = q_pochhammer(a, m + n, ctx)
    split = q_pochhammer(a, m, ctx) * q_pochhammer(a * q**m, n, ctx)
    assert whole == pytest.approx(split, rel=1e-12, abs=1e-15)


def test_pochhammer_inf_matches_finite_for_tiny_tail():
    sv = q_pochhammer_inf(0.5, CTX)
    direct = q_pochhammer(0.5, 80, CTX)  # tail factors are 1 - 5e-25-ish
    assert sv.value == pytest.approx(direct, rel=1e-14)
    assert sv.tail_estimate < 1e-15


def test_pochhammer_inf_reciprocal_pole():
    with pytest.raises(PoleHit):
        q_pochhammer_inf(1.0, CTX, reciprocal=True)


def test_qbinomial_hand_value():
    # [2, 1]_0.5 = (1 - 0.25) / (1 - 0.5)
    assert q_binomial(2, 1, CTX) == pytest.approx(1.5, abs=0.0)


def test_qbinomial_out_of_range_is_zero():
    assert q_binomial(3, -1, CTX) == 0.0
    assert q_binomial(3, 4, CTX) == 0.0


@given(q=qs, n=st.integers(0, 20), k=st.integers(0, 20))
def test_qbinomial_symmetry_exact(q, n, k):
    assume(k <= n)
    ctx = QContext(q=q)
    assert q_binomial(n, k, ctx) == q_binomial(n, n - k, ctx)


@given(n=st.integers(0, 12), k=st.integers(0, 12))
def test_qbinomial_classical_limit(n, k):
    assume(k <= n)
    ctx = QContext(q=1.0 - 1e-8)
    assert q_binomial(n, k, ctx) == pytest.approx(math.comb(n, k), rel=1e-5)


def test_qpower_requires_integer_exponent():
    with pytest.raises(TypeError):
        QPower(1.5)


def test_context_validation():
    with pytest.raises(ValueError):
        QContext(q=1.0)
    with pytest.raises(ValueError):
        QContext(q=0.5, rel_tol=0.0)
    with pytest.raises(ValueError):
        QContext(q=0.5, max_terms=0)


# --- q-exponentials -------------------------------------------------------


def test_little_qexp_series_agreement():
    # product form vs direct series sum_n z^n / (q;q)_n for |z| < 1
    z = 0.3
    total = 0.0
    term = 1.0
    for n in range(200):
        total += term
        term *= z / (1.0 - CTX.q ** (n + 1))
    assert little_qexp(z, CTX).value == pytest.approx(total, rel=1e-13)


def test_big_qexp_series_agreement():
    z = 0.7
    total = 0.0
    for n in range(200):
        log_term = n * (n - 1) / 2 * math.log(CTX.q) + n * math.log(z)
        den = 1.0
        for k in range(1, n + 1):
            den *= 1.0 - CTX.q**k
        total += math.exp(log_term) / den
    assert big_qexp(z, CTX).value == pytest.approx(total, rel=1e-13)


def test_little_qexp_pole():
    with pytest.raises(PoleHit):
        little_qexp(1.0, CTX)


@given(z=safe_z, q=qs)
@settings(max_examples=200)
def test_qexp_inverse_identity(z, q):
    """e_q(z) E_q(-z) = 1."""
    ctx = QContext(q=q)
    prod = little_qexp(z, ctx).value * big_qexp(-z, ctx).value
    assert prod == pytest.approx(1.0, rel=10 * ctx.rel_tol)


@given(z=safe_z, q=qs)
@settings(max_examples=200)
def test_qexp_shift_identities(z, q):
    """e_q(qz) = (1-z) e_q(z);  E_q(z) = (1+z) E_q(qz);
    and their difference forms e_q(z) - e_q(qz) = z e_q(z),
    E_q(z) - E_q(qz) = z E_q(qz)."""
    ctx = QContext(q=q)
    tol = 10 * ctx.rel_tol
    ez = little_qexp(z, ctx).value
    eqz = little_qexp(q * z, ctx).value
    bz = big_qexp(z, ctx).value
    bqz = big_qexp(q * z, ctx).value
    scale_e = max(abs(ez), abs(eqz), 1.0)
    scale_b = max(abs(bz), abs(bqz), 1.0)
    assert abs(eqz - (1.0 - z) * ez) <= tol * scale_e
    assert abs(bz - (1.0 + z) * bqz) <= tol * scale_b
    assert abs((ez - eqz) - z * ez) <= tol * scale_e
    assert abs((bz - bqz) - z * bqz) <= tol * scale_b


# --- basic hypergeometric --------------------------------------------------


def test_phi_terminating_hand_value():
    # 2phi1(q^-1, q^-1; q; q, z) = 1 + z (1-q^-1)^2/(1-q)^2, z = 0.1, q = 0.5
    sv = basic_hypergeometric([QPower(-1), QPower(-1)], [QPower(1)], 0.1, CTX)
    assert sv.value == pytest.approx(1.4, abs=1e-15)
    assert sv.tail_estimate == 0.0


def test_phi_termination_is_exact():
    # QPower(-n) caps the sum: huge |z| is harmless
    sv = basic_hypergeometric([QPower(-2)], [], 1e6, CTX)
    assert sv.terms_used <= 3
    assert math.isfinite(sv.value)


def test_phi_float_near_power_is_not_terminating():
    # a float numerically equal to q^-2 must not trigger termination
    with pytest.raises(NonConvergent):
        basic_hypergeometric([CTX.q**-2, 0.5], [], 1.5, CTX)


def test_phi_divergent_without_termination():
    with pytest.raises(NonConvergent):
        basic_hypergeometric([0.5, 0.5], [], 1.5, CTX)


def test_phi_denominator_pole():
    with pytest.raises(DenominatorPole):
        basic_hypergeometric([QPower(-5)], [QPower(-2)], 0.3, CTX)


def test_phi_q_binomial_theorem():
    # 1phi0(a; -; q, z) = (az; q)_oo / (z; q)_oo, |z| < 1
    a, z = 0.4, 0.6
    sv = basic_hypergeometric([a], [], z, CTX)
    expected = (
        q_pochhammer_inf(a * z, CTX).value / q_pochhammer_inf(z, CTX).value
    )
    assert sv.value == pytest.approx(expected, rel=1e-12)


def test_compensated_sum_beats_naive():
    cs = CompensatedSum()
    values = [1e16, 1.0, -1e16, 1.0]
    naive = 0.0
    for v in values:
        cs.add(v)
        naive += v
    assert cs.total == 2.0
    assert naive != 2.0
