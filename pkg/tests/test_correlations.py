"""Correlation sums: FFT-vs-direct equivalence, decompositions, tuple sums,
and the singular series."""

import math

import numpy as np
import pytest

import oracles
from msl import correlations as co
from msl import sieves, typical
from msl.errors import ValidationError


def explicit_profile(X=10 ** 5, H=64):
    return typical.derive_profile(X, H, mode="explicit",
                                  explicit_intervals=((5, 50), (100, 1000)))


class TestShiftedCorrelation:
    def test_constant_one_gives_pi(self):
        rep = co.shifted_correlation("divisor_1", 300, 10)
        assert np.all(rep.C == sieves.prime_pi(300))

    def test_h0_diagnostic_slot(self):
        rep = co.shifted_correlation("mobius", 100, 5)
        assert rep.C0 == -sieves.prime_pi(100)

    def test_hand_enumeration_x10(self):
        rep = co.shifted_correlation("mobius", 10, 1)
        # mu(3) + mu(4) + mu(6) + mu(8) over primes {2,3,5,7}
        assert rep.C[0] == 0

    def test_direct_loop_oracle(self):
        X, H = 2000, 16
        f = [oracles.mobius(n) for n in range(1, X + H + 1)]
        base = [1 if n in set(oracles.primes_list(X)) else 0 for n in range(1, X + 1)]
        want = oracles.direct_shifted_correlation(f, X, H, base)
        rep = co.shifted_correlation("mobius", X, H)
        assert rep.C.tolist() == want

    def test_mass_bound_invariant(self):
        rep = co.shifted_correlation("divisor_2", 5000, 32)
        cap = float(sieves.table("divisor_2", 1, 5001).values.sum())
        assert np.all(np.abs(rep.C) <= cap)
        assert rep.aggregate >= 0

    @pytest.mark.parametrize("f", ["mobius", "liouville", "divisor_1", "divisor_2"])
    def test_fft_matches_direct(self, f):
        a = co.shifted_correlation(f, 10 ** 4, 64, method="fft")
        b = co.shifted_correlation(f, 10 ** 4, 64, method="direct")
        assert np.array_equal(a.C, b.C)
        assert a.fft_error_bound < 0.49

    def test_block_order_invariance(self):
        base = co.shifted_correlation("mobius", 10 ** 5, 128, method="fft")
        for block in (1 << 14, 1 << 15, 77777):
            other = co.shifted_correlation("mobius", 10 ** 5, 128,
                                           method="fft", block=block)
            assert np.array_equal(base.C, other.C)

    def test_integer_base_normalizer(self):
        rep = co.shifted_correlation("mobius", 1000, 8, base="integers")
        assert rep.normalizer == 1000

    def test_validation(self):
        with pytest.raises(ValidationError):
            co.shifted_correlation("mobius", 10, 11)
        with pytest.raises(ValidationError):
            co.shifted_correlation("mobius", 10, 4, method="warp")


class TestRestricted:
    def test_full_cover_equals_unrestricted(self):
        X, H = 3000, 16
        prof = typical.derive_profile(X + H, H, mode="explicit",
                                      explicit_intervals=((2, 59), (61, X + H)))
        full = co.shifted_correlation("mobius", X, H)
        rc = co.restricted_shifted_correlation("mobius", X, H, prof)
        # every n with a factor in both huge intervals is in S; the complement
        # picks up the rest, and the split is exact
        assert np.array_equal(rc.recombined(), full.C)

    def test_empty_set_gives_zero(self):
        X, H = 2000, 8
        prof = typical.derive_profile(10 ** 6, H, mode="explicit",
                                      explicit_intervals=((10 ** 5, 2 * 10 ** 5),
                                                          (3 * 10 ** 5, 4 * 10 ** 5)))
        rc = co.restricted_shifted_correlation("mobius", X, H, prof)
        assert not rc.in_set.C.any()
        full = co.shifted_correlation("mobius", X, H)
        assert np.array_equal(rc.complement.C, full.C)

    def test_decomposition_exact_at_1e5(self):
        X, H = 10 ** 5, 64
        prof = explicit_profile(X + H, H)
        rc = co.restricted_shifted_correlation("mobius", X, H, prof)
        full = co.shifted_correlation("mobius", X, H)
        assert np.array_equal(rc.recombined(), full.C)

    def test_restricted_against_direct_loop(self):
        X, H = 1500, 8
        prof = explicit_profile(X + H, H)
        rc = co.restricted_shifted_correlation("mobius", X, H, prof)
        primes = set(oracles.primes_list(X))
        for h in range(1, H + 1):
            s = 0
            for p in primes:
                n = p + h
                fs = oracles.factorize(n)
                in1 = any(5 <= q <= 50 for q, _ in fs)
                in2 = any(100 <= q <= 1000 for q, _ in fs)
                if in1 and in2:
                    s += oracles.mobius(n)
            assert rc.in_set.C[h - 1] == s, h


class TestChowla:
    def test_single_shift_is_mertens(self):
        for X in (1, 10, 100, 5000):
            assert co.chowla_sum(X, (0,)) == sieves.mertens(X)

    def test_repeated_shift_counts_squarefree(self):
        X, h = 4000, 3
        val = co.chowla_sum(X, (h, h))
        squarefree = sum(1 for n in range(1 + h, X + h + 1) if oracles.mobius(n) != 0)
        assert val == squarefree

    def test_brute_force_x10(self):
        assert co.chowla_sum(10, (1, 2)) == \
            sum(oracles.mobius(n + 1) * oracles.mobius(n + 2) for n in range(1, 11))
        assert co.chowla_sum(10, (1, 2)) == -2

    def test_validation(self):
        with pytest.raises(ValidationError):
            co.chowla_sum(10, ())
        with pytest.raises(ValidationError):
            co.chowla_sum(10, (-1,))


class TestAveragedChowla:
    def test_m1_indicator_weight_matches_shifted_aggregate(self):
        X, H = 10 ** 4, 32
        rep = co.averaged_chowla(X, H, 1, (0,), weight_id="prime_indicator")
        base = co.shifted_correlation("mobius", X, H)
        assert rep.total == pytest.approx(float(np.abs(base.C).sum()))

    def test_h1_m1_single_term_oracle(self):
        X = 10 ** 4
        rep = co.averaged_chowla(X, 1, 1, (0,))
        lam = [oracles.von_mangoldt(n) for n in range(1, X + 2)]
        mu = [oracles.mobius(n) for n in range(1, X + 2)]
        want = abs(sum(lam[n - 1] * mu[n] for n in range(1, X + 1)))
        assert rep.total == pytest.approx(want, rel=1e-12)

    def test_m2_matches_nested_direct_loops(self):
        X, H = 10 ** 4, 8
        rep = co.averaged_chowla(X, H, 2, ())
        mu = sieves.table("mobius", 1, X + H + 1).values.astype(np.int64)
        want = 0.0
        for h1 in range(1, H + 1):
            for h2 in range(1, H + 1):
                want += abs(int(np.sum(mu[h1:h1 + X] * mu[h2:h2 + X])))
        assert rep.total == pytest.approx(want)

    def test_sampled_mode_reproducible_and_reasonable(self):
        X, H, m = 2000, 16, 3
        a = co.averaged_chowla(X, H, m, (), method="sampled", n_samples=64, seed=9)
        b = co.averaged_chowla(X, H, m, (), method="sampled", n_samples=64, seed=9)
        assert a.total == b.total
        assert a.method == "sampled" and a.n_samples == 64
        mu = sieves.table("mobius", 1, X + H + 1).values.astype(np.int64)
        exact = 0.0
        for h1 in range(1, H + 1):
            for h2 in range(1, H + 1):
                v = mu[h1:h1 + X] * mu[h2:h2 + X]
                for h3 in range(1, H + 1):
                    exact += abs(int(np.sum(v * mu[h3:h3 + X])))
        # sampling estimates the mean |inner sum|; allow five standard errors
        assert abs(a.normalized - exact / (X * H ** 3)) <= \
            5 * a.standard_error + 1e-12

    def test_reference_curve_positive(self):
        rep = co.averaged_chowla(10 ** 4, 64, 1, ())
        assert rep.reference > 0


class TestSingularSeries:
    def test_singleton_is_exactly_one(self):
        assert co.singular_series((0,), 50).value == 1.0

    def test_adjacent_pair_vanishes(self):
        assert co.singular_series((0, 1), 50).value == 0.0

    def test_twin_constant(self):
        s = co.singular_series((0, 2), 10 ** 6)
        # truncated Euler product oracle with explicit tail control
        twin = 2 * math.prod(1 - 1 / (p - 1) ** 2 for p in oracles.primes_list(10 ** 5)[1:])
        assert s.value == pytest.approx(twin, abs=1e-4)
        assert s.value == pytest.approx(1.3203, abs=2e-4)
        assert s.tail_bound >= abs(math.log(s.value) -
                                   math.log(co.singular_series((0, 2), 10 ** 7).value))

    def test_tail_precondition(self):
        with pytest.raises(ValidationError):
            co.singular_series((0, 100), 50)

    def test_nu_p_counting_small_primes(self):
        s3 = co.singular_series((0, 2, 4), 10 ** 4)
        # nu_3 = 3 kills the product
        assert s3.value == 0.0


class TestHlKtuple:
    def test_singleton_chebyshev(self):
        X = 10 ** 4
        res = co.hl_ktuple(X, (0,), 100)
        want = sum(oracles.von_mangoldt(n) for n in range(1, X + 1))
        assert res.lambda_sum == pytest.approx(want, rel=1e-12)
        assert res.prediction == pytest.approx(X)

    def test_vanishing_series_flagged(self):
        res = co.hl_ktuple(1000, (0, 1), 100)
        assert res.prediction == 0.0
        assert res.ratio is None

    def test_twin_ratio_close_at_1e6(self):
        res = co.hl_ktuple(10 ** 6, (0, 2), 10 ** 6)
        assert res.ratio is not None
        assert abs(res.ratio - 1) <= 0.1


class TestDivisorCorrelation:
    def test_empty_klist_reduces_to_mobius_only(self):
        X, H = 2000, 8
        rep = co.divisor_mobius_correlation(X, H, (), ())
        base = co.shifted_correlation("mobius", X, H, base="integers")
        assert np.array_equal(rep.C, base.C)
        assert rep.normalizer == pytest.approx(H * X)

    def test_direct_loop_oracle(self):
        X, H = 100, 4
        rep = co.divisor_mobius_correlation(X, H, (2,), (0,))
        for h in range(1, H + 1):
            want = sum(oracles.mobius(n + h) * oracles.divisor_k(n, 2)
                       for n in range(1, X + 1))
            assert rep.C[h - 1] == want

    def test_all_ones_substitute_is_shift_free(self):
        X, H = 500, 6
        ones = np.ones(X + H)
        rep = co.divisor_mobius_correlation(X, H, (2, 3), (0, 1),
                                            mobius_substitute=ones)
        expect = sum(oracles.divisor_k(n, 2) * oracles.divisor_k(n + 1, 3)
                     for n in range(1, X + 1))
        assert np.allclose(rep.C, expect)

    def test_validation(self):
        with pytest.raises(ValidationError):
            co.divisor_mobius_correlation(100, 4, (1,), (0,))
        with pytest.raises(ValidationError):
            co.divisor_mobius_correlation(100, 4, (2, 2), (0, 0))


class TestExceptionalScan:
    def test_eps_one_is_empty(self):
        rep = co.shifted_correlation("mobius", 10 ** 4, 64)
        assert co.exceptional_scan(rep, 1.0).count == 0

    def test_eps_zero_collects_nonzero(self):
        rep = co.shifted_correlation("mobius", 10 ** 4, 64)
        scan = co.exceptional_scan(rep, 0.0)
        assert scan.count == int(np.count_nonzero(rep.C))

    def test_monotone_in_eps(self):
        rep = co.shifted_correlation("mobius", 10 ** 4, 256)
        fractions = [co.exceptional_scan(rep, e).fraction
                     for e in (0.0, 0.01, 0.05, 0.1, 0.5, 1.0)]
        assert fractions == sorted(fractions, reverse=True)

    def test_direct_computation_oracle(self):
        rep = co.shifted_correlation("mobius", 10 ** 5, 128)
        eps = 0.01
        scan = co.exceptional_scan(rep, eps)
        want = {h + 1 for h in range(128)
                if abs(rep.C[h]) > eps * rep.normalizer}
        assert set(scan.shifts) == want
