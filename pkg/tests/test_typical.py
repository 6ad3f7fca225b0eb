"""Typical-set profiles, membership, the weighted prime splitting, and the
sieve-complement comparisons."""

import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from msl import sieves, typical
from msl.errors import ValidationError


def explicit_profile(X=10 ** 6, H=64, i1=(5, 50), i2=(100, 1000)):
    return typical.derive_profile(X, H, mode="explicit", explicit_intervals=(i1, i2))


class TestDeriveProfile:
    def test_degenerate_paper_mode(self):
        with pytest.raises(ValidationError, match="degenerate"):
            typical.derive_profile(10 ** 6, 16, A=1.0, mode="paper-formula")

    def test_explicit_passthrough(self):
        prof = explicit_profile()
        assert (prof.P1, prof.Q1, prof.P2, prof.Q2) == (5, 50, 100, 1000)

    def test_psi_arithmetic(self):
        # log X = e^4 and H = (log X)^10 force psi = 10
        lx = math.exp(4.0)
        X = round(math.exp(lx))
        H = round(lx ** 10)
        prof = typical.derive_profile(X, H, mode="explicit",
                                      explicit_intervals=((5, 50), (100, 1000)))
        assert prof.psi == pytest.approx(math.log(H) / math.log(math.log(X)), rel=1e-12)
        assert prof.psi == pytest.approx(10.0, abs=5e-3)

    def test_paper_mode_q1_identity(self):
        # Q1 = H / W^4 whenever H = (log X)^psi exactly
        X = 10 ** 6
        A = 0.02
        H = round(math.log(X) ** 2.0)
        prof = typical.derive_profile(X, H, A=A, mode="paper-formula")
        W4 = math.log(X) ** (4 * A)
        assert prof.Q1 == pytest.approx(H / W4, rel=1e-9)

    def test_explicit_ordering_enforced(self):
        with pytest.raises(ValidationError):
            explicit_profile(i1=(5, 150), i2=(100, 1000))
        with pytest.raises(ValidationError):
            explicit_profile(i1=(1, 50), i2=(100, 1000))


class TestMembership:
    def test_examples(self):
        prof = explicit_profile()
        assert typical.membership(707, prof)          # 7 * 101
        assert not typical.membership(7, prof)
        assert not typical.membership(1024, prof)     # only prime 2 < P1

    def test_out_of_range(self):
        prof = explicit_profile(X=1000)
        with pytest.raises(ValidationError):
            typical.membership(1001, prof)

    def test_refined_consistency_identity(self):
        prof = explicit_profile(X=10 ** 5)
        spf = sieves.spf_table(1, 3 * 10 ** 4 + 1)
        for d in range(1, 4):
            for m in range(1, 10 ** 4 + 1):
                lhs = typical.membership(m * d, prof, spf)
                rhs = typical.membership_refined(m, d, prof, spf)
                assert lhs == rhs, (m, d)

    def test_refined_examples(self):
        prof = explicit_profile()
        assert typical.membership_refined(707, 2, prof)
        assert typical.membership(1414, prof)
        assert not typical.membership_refined(7, 2, prof)

    def test_refined_rejects_large_d(self):
        prof = explicit_profile()
        with pytest.raises(ValidationError):
            typical.membership_refined(10, 7, prof)

    def test_monotone_in_intervals(self):
        narrow = explicit_profile(i1=(7, 30), i2=(150, 700))
        wide = explicit_profile(i1=(5, 50), i2=(100, 1000))
        block = typical.factor_condition_block(1, 5000, narrow)
        block_w = typical.factor_condition_block(1, 5000, wide)
        assert not np.any(block & ~block_w)

    def test_block_matches_pointwise(self):
        prof = explicit_profile(X=4000)
        bits = typical.factor_condition_block(1, 4001, prof)
        for n in range(1, 4001):
            assert bits[n - 1] == typical.membership(n, prof), n

    def test_membership_table_caps_range(self):
        prof = explicit_profile(X=2000)
        tab = typical.build_membership_table(prof, 2, 900, 1100)
        n = np.arange(900, 1100)
        assert not tab.bits[n > 1000].any()


class TestRamare:
    def test_single_prime(self):
        out = typical.ramare_decompose(3 * 7, 5, 11)
        assert out == [(7, Fraction(1, 1))]

    def test_two_primes_split(self):
        out = typical.ramare_decompose(7 * 11 * 4, 5, 20)
        assert out == [(7, Fraction(1, 2)), (11, Fraction(1, 2))]
        assert sum(w for _, w in out) == 1

    def test_square(self):
        assert typical.ramare_decompose(49, 5, 50) == [(7, Fraction(1, 1))]

    def test_weights_sum_to_one_exhaustive(self):
        spf = sieves.spf_table(1, 10 ** 5 + 1)
        for P, Q in ((5, 50), (11, 199)):
            for n in range(2, 20001):
                out = typical.ramare_decompose(n, P, Q)
                ps = typical.distinct_prime_factors(n, spf)
                if any(P <= p <= Q for p in ps):
                    assert sum(w for _, w in out) == 1, (n, P, Q)
                else:
                    assert out == []


class TestComplement:
    def test_empty_interval(self):
        cc = typical.complement_count(100, 3, 2, 1)
        assert cc.exact == oracles.brute_prime_pi(100)
        assert cc.ratio == 1.0

    def test_parity_case(self):
        # q = 2 divides p + 1 for every odd prime, leaving only p = 2
        cc = typical.complement_count(10 ** 4, 2, 2, 1)
        assert cc.exact == 1

    def test_against_adjusted_prediction(self):
        cc = typical.complement_count(10 ** 6, 5, 50, 1)
        # h = 1 leaves the h/phi(h) adjustment trivial
        assert 0.5 <= cc.ratio <= 2.0

    def test_exact_matches_enumeration_oracle(self):
        X, P, Q, h = 2000, 3, 20, 6
        primes = oracles.primes_list(X)
        qs = [q for q in oracles.primes_list(Q) if q >= P]
        expect = sum(1 for p in primes if all((p + h) % q for q in qs))
        assert typical.complement_count(X, P, Q, h).exact == expect

    def test_density_formula(self):
        prof = explicit_profile()
        dens = typical.complement_density(prof)
        assert dens.rho1 == pytest.approx(math.log(5) / math.log(50))
        assert dens.rho2 == pytest.approx(math.log(100) / math.log(1000))
        single = explicit_profile(i1=(7, 7), i2=(100, 1000))
        assert typical.complement_density(single).rho1 == pytest.approx(1.0)

    def test_measured_fraction_within_factor_two(self):
        prof = explicit_profile(X=10 ** 6)
        dens = typical.complement_density(prof)
        measured = typical.measured_outside_fraction(prof, upto=10 ** 6)
        assert dens.independent_estimate / 2 <= measured <= dens.independent_estimate * 2
