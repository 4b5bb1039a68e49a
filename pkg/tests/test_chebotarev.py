import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from langtrotter import DomainError, FitUnavailable
from langtrotter.arith import li, sieve_primes
from langtrotter.chebotarev import (
    CharPolyClass,
    CountReport,
    always,
    asymptote_fit,
    bound_profile,
    charpoly_frequencies,
    class_fraction,
    conductor_proxy_M,
    count_DE,
    count_PEa,
    count_PEk,
    det_is,
    existence_threshold,
    frob_class,
    in_set_C,
    make_window,
    mixed_frobenius_check,
    pea_window_diagnostic,
    pi_C,
    pi_tilde_C,
    pred_mask,
    smoothed_count,
    surjectivity_witness,
    trace_is,
)
from langtrotter.elliptic import ApRecord, EllipticCurve, ap_table, read_cache, trace_of_power, write_cache
from langtrotter.groups import gl2_order, set_C_a

never = lambda c: False


def test_frob_class_examples():
    assert frob_class(ApRecord.build(5, -3), 7) == CharPolyClass(7, 4, 5)
    assert frob_class(ApRecord.build(7, 1), 7) is None
    with pytest.raises(DomainError):
        CharPolyClass(7, 1, 0)


def test_frob_classes_from_cache_file(tmp_path, table_1e5):
    write_cache(table_1e5.upto(20000), tmp_path / "c.csv")
    again = read_cache(tmp_path / "c.csv", EllipticCurve(1, 1))
    for ell in (5, 7, 13):
        for r1, r2 in zip(table_1e5.upto(20000), again):
            c = frob_class(r1, ell)
            assert c == frob_class(r2, ell)
            if c is not None:
                assert c.dt != 0 and (c.t, c.dt) == (r2.a % ell, r2.p % ell)


def test_pi_C_full_class(table_1e5):
    for ell in (5, 7, 31, 101):
        for x in (100, 5000, 10**5):
            good = int((table_1e5.p <= x).sum())
            ell_good = ell <= x and ell in table_1e5.p.tolist()
            assert pi_C(table_1e5, ell, x).observed == good - ell_good


@pytest.mark.parametrize("ell", [3, 5, 7, 11])
def test_det_fraction(ell):
    for n in range(1, ell):
        assert class_fraction(ell, det_is(n)) == Fraction(1, ell - 1)


@pytest.mark.parametrize("ell", [5, 7, 11])
def test_set_C_fraction(ell):
    for a in range(ell):
        assert class_fraction(ell, in_set_C(a)) == Fraction(len(set_C_a(ell, a)), gl2_order(ell))


def test_pi_C_matches_direct_loop(table_1e5):
    ell = 7
    for pred in (det_is(3), trace_is(2), in_set_C(0)):
        direct = sum(1 for r in table_1e5 if r.p != ell and pred(frob_class(r, ell)))
        rep = pi_C(table_1e5, ell, 10**5, pred)
        assert rep.observed == direct
        assert rep.expected == pytest.approx(rep.fraction * li(10**5), rel=1e-12)


def test_pi_C_empty_class_and_domain(table_1e5):
    assert pi_C(table_1e5, 5, 1e4, never).observed == 0
    with pytest.raises(DomainError):
        pi_C(table_1e5, 5, 2)


def test_pi_tilde_small_x(table_1e5):
    assert pi_tilde_C(table_1e5, 5, 8).observed == pi_C(table_1e5, 5, 8).observed
    # 3^2 = 9 is the only prime power; its weight is exactly 1/2
    diff = Fraction(pi_tilde_C(table_1e5, 5, 20).extra["exact"]) - int(pi_C(table_1e5, 5, 20).observed)
    assert diff == Fraction(1, 2)
    diff = Fraction(pi_tilde_C(table_1e5, 5, 27).extra["exact"]) - int(pi_C(table_1e5, 5, 27).observed)
    assert diff == Fraction(1, 2) + Fraction(1, 3)


def test_pi_tilde_matches_direct_prime_powers(table_1e5):
    x, ell = 30000, 7
    for pred in (always, det_is(2), trace_is(0), in_set_C(3)):
        total = Fraction(0)
        for r in table_1e5.upto(x):
            if r.p == ell:
                continue
            m, pm = 1, r.p
            while pm <= x:
                c = CharPolyClass(ell, trace_of_power(r.a, r.p, m) % ell, pm % ell)
                total += Fraction(int(pred(c)), m)
                m, pm = m + 1, pm * r.p
        assert Fraction(pi_tilde_C(table_1e5, ell, x, pred).extra["exact"]) == total


def test_pi_tilde_dominates_pi(table_1e5):
    for x in (100, 1000, 10**4, 10**5):
        for pred in (always, det_is(1), in_set_C(1)):
            assert pi_tilde_C(table_1e5, 5, x, pred).observed >= pi_C(table_1e5, 5, x, pred).observed


def test_pi_tilde_ramified_contributions(table_1e5):
    base = Fraction(pi_tilde_C(table_1e5, 5, 100).extra["exact"])
    full = pi_tilde_C(table_1e5, 5, 100, include_ramified=True)
    # ramified: 2 (2, 4, 8, 16, 32, 64), 5 (5, 25), 31
    extra = sum(Fraction(1, m) for m in range(1, 7)) + Fraction(1) + Fraction(1, 2) + 1
    assert Fraction(full.extra["exact"]) == base + extra
    assert Fraction(pi_tilde_C(table_1e5, 5, 100, never, include_ramified=True).extra["exact"]) == 0


def test_bump_window():
    f = make_window("bump", 0.5, 1.0)
    assert f(0.5) == 0 and f(1.0) == 0 and f(0.4) == 0 and f(1.1) == 0
    assert f.integral > 0
    ref, _ = quad(lambda t: float(f(t)), 0.5, 1.0, epsabs=1e-14, epsrel=1e-12)
    assert abs(f.integral - ref) <= 1e-8 * ref
    assert f.integral_error <= 1e-8 * f.integral


def test_dominating_window():
    f = make_window("dominating")
    assert (f.c1, f.c2) == (0.25, 1.25)
    t = np.linspace(0.5, 1.0, 501)
    assert np.all(f(t) >= 1)
    assert f(0.75) >= 1
    assert f(0.25) == 0 and f(1.25) == 0 and f(0.1) == 0
    ref, _ = quad(lambda s: float(f(s)), 0.25, 1.25, points=[0.5, 1.0], epsabs=1e-14)
    assert abs(f.integral - ref) <= 1e-8 * ref


def test_window_domain_errors():
    for c1, c2 in ((0.0, 1.0), (-1.0, 1.0), (1.0, 1.0), (2.0, 1.0)):
        with pytest.raises(DomainError):
            make_window("bump", c1, c2)
    with pytest.raises(DomainError):
        make_window("dominating", 0.6, 1.25)
    with pytest.raises(DomainError):
        make_window("triangle")


def test_smoothed_count_support_and_oracle(table_1e5):
    x = 50000
    f = make_window("bump", 0.5, 1.0)
    rep = smoothed_count(table_1e5, 5, always, f, x)
    mid = [p for p in sieve_primes(x).tolist() if x / 2 < p < x and p not in (2, 5, 31)]
    # direct summation oracle with an explicit bump formula
    direct = 0.0
    for p in mid:
        s = (2 * p / x - 1.5) / 0.5
        direct += math.log(p) * math.exp(-1 / (1 - s * s))
    assert rep.observed == pytest.approx(direct, rel=1e-12)
    assert rep.expected == pytest.approx(x * f.integral, rel=1e-12)
    assert smoothed_count(table_1e5, 5, never, f, x).observed == 0


def test_smoothed_count_dominates_raw_log_count(table_1e5):
    f = make_window("dominating")
    for x in (1000, 10**4, 50000):
        raw = sum(math.log(p) for p in table_1e5.p.tolist() if x / 2 <= p <= x and p != 5)
        assert smoothed_count(table_1e5, 5, always, f, x).observed >= raw


def test_smoothed_count_shard_independent():
    E = EllipticCurve(2, 3)
    f = make_window("bump")
    a = smoothed_count(ap_table(E, 30000), 7, det_is(3), f, 30000)
    b = smoothed_count(ap_table(E, 30000, shards=4), 7, det_is(3), f, 30000)
    assert a.observed == b.observed


def test_count_PEa(table_1e5):
    x = 10**5
    assert count_PEa(table_1e5, math.ceil(2 * math.sqrt(x)), x).observed == 0
    assert count_PEa(table_1e5, -math.ceil(2 * math.sqrt(x)), x).observed == 0
    for a in (0, 1, -2, 5):
        total = count_PEa(table_1e5, a, x).observed
        assert total == sum(1 for r in table_1e5 if r.a == a)
        for ell in (5, 7, 11, 13):
            strict = count_PEa(table_1e5, a, x, ell=ell).observed
            incl = count_PEa(table_1e5, a, x, ell=ell, inclusive=True).observed
            assert strict <= incl <= total
            direct = sum(1 for r in table_1e5 if r.a == a and pow((a * a - 4 * r.p) % ell, (ell - 1) // 2, ell) == 1)
            assert strict == direct


def test_pea_window_diagnostic(table_1e5):
    diag = pea_window_diagnostic(table_1e5, 0, 10**5, 6)
    assert set(diag["per_ell"]) == {7, 11}
    assert diag["max"] <= diag["P"]
    assert diag["ratio"] >= 1


def test_count_PEk(table_1e5):
    x = 10**5
    assert count_PEk(table_1e5, -4 * x - 3 if (-4 * x - 3) % 4 == 1 else -400003, x).observed == 0
    rep = count_PEk(table_1e5, -4, x)
    assert rep.normalizer == 1 and rep.extra["principal_failures"] == []
    assert rep.observed == int((table_1e5.d == -4).sum())
    rep23 = count_PEk(table_1e5, -23, x)
    assert rep23.normalizer == 3


def test_partition_identity(table_1e5):
    for x in (3, 100, 3000):
        T = table_1e5.upto(x)
        total = sum(count_PEk(T, int(d), x, check_principal=False).observed for d in set(T.d.tolist()))
        assert total == len(T)
    for x in (3, 100, 3000, 10**5):
        assert count_DE(table_1e5, x).extra["partition_residual"] == 0


def test_every_ordinary_prime_is_principal(table_1e5):
    from langtrotter.quadfield import ideal_class_of_prime

    for r in table_1e5.upto(20000):
        if r.ordinary:
            assert ideal_class_of_prime(r.d, r.p) == "principal"


def test_field_size_bound(table_1e5):
    T = table_1e5
    assert np.all(-T.d <= 4 * T.p - T.a * T.a)


def test_count_DE(table_1e5):
    assert count_DE(table_1e5, 3).observed == 1
    prev = 0
    for x in (3, 10, 100, 1000, 10**4, 10**5):
        v = count_DE(table_1e5, x).observed
        assert v >= prev
        prev = v


def test_mixed_frobenius_check(table_1e5):
    res = mixed_frobenius_check(table_1e5, -4, 13, 10**5)
    assert res.checked > 0 and res.violations == 0 and res.max_trace_set <= 4
    res = mixed_frobenius_check(table_1e5, -7, 11, 10**5)
    assert res.violations == 0 and res.max_trace_set <= 2
    with pytest.raises(DomainError):
        mixed_frobenius_check(table_1e5, -23, 13, 10**5)


def test_bound_profile():
    y, bound = bound_profile(1e5, mode="a-generic")
    assert y == pytest.approx(10 * math.log(1e5) ** -0.4, rel=1e-12)
    for mode, h in (("a-generic", None), ("a-zero", None), ("k-field", 1), ("k-field", 50)):
        values = [bound_profile(x, h, mode)[1] for x in (1e4, 1e5, 1e6, 1e7, 1e8)]
        assert all(b < c for b, c in zip(values, values[1:]))
    # large class number switches y to (log x)^2
    x = 1e6
    assert bound_profile(x, 10**6, "k-field")[0] == pytest.approx(math.log(x) ** 2)
    with pytest.raises(DomainError):
        bound_profile(10)
    with pytest.raises(DomainError):
        bound_profile(1e5, mode="k-field")


def test_asymptote_fit_synthetic():
    xs = [1e3, 1e4, 1e5, 1e6, 1e7]
    fit = asymptote_fit([(x, 2 * math.sqrt(x) / math.log(x)) for x in xs])
    assert fit.constant == pytest.approx(2, rel=0.01) and fit.rms_residual < 1e-12
    fit = asymptote_fit([(x, x**0.8) for x in xs])
    assert fit.exponent == pytest.approx(0.8, rel=0.01)
    assert fit.power_constant == pytest.approx(1, rel=0.01)


def test_asymptote_fit_unavailable():
    with pytest.raises(FitUnavailable):
        asymptote_fit([(10, 1), (100, 2)])
    with pytest.raises(FitUnavailable):
        asymptote_fit([(10, 1), (100, 0), (1000, 3)])


@settings(max_examples=50, deadline=None)
@given(
    st.floats(3, 1e9),
    st.floats(0, 1e9),
    st.floats(0, 1e9),
    st.floats(0, 1),
    st.floats(0, 1e5),
    st.dictionaries(st.text(max_size=5), st.integers()),
)
def test_report_json_round_trip(x, obs, exp, frac, margin, extra):
    rep = CountReport("pi_C", x, obs, exp, frac, margin, extra=extra)
    back = CountReport.from_json(rep.to_json())
    assert back == rep
    for key in ("x", "observed", "expected", "fraction", "margin"):
        assert key in back.to_json()


def test_charpoly_frequencies_shapes(table_1e5):
    counts, dens, n = charpoly_frequencies(table_1e5, 5, 10**4)
    assert counts.sum() == n and counts[:, 0].sum() == 0
    assert dens.sum() == pytest.approx(1.0)
    assert surjectivity_witness(table_1e5, 5, 10**4)
    assert not surjectivity_witness(table_1e5, 5, 30)


def test_pred_mask_union_of_classes():
    m = pred_mask(5, in_set_C(0))
    assert not m[:, 0].any()
    assert m.sum() == sum(1 for n in range(1, 5) if ((-4 * n) % 5) in (0, 1, 4))


def test_existence_diagnostics():
    E = EllipticCurve(1, 1)
    M = conductor_proxy_M(E, 5)
    assert M == 2 * 480 * 2 * 5 * 31
    thr = existence_threshold(480, 24, math.log(M))
    assert thr == pytest.approx(480**2 / 24 * math.log(M) ** 2)
    with pytest.raises(DomainError):
        existence_threshold(480, 0, 1.0)
