"""Typical-factorization sets and their companion estimates.

A profile fixes two prime intervals [P1, Q1] and [P2, Q2]; an integer is
"typical" when it carries at least one prime factor from each interval.
Profiles come in two modes. The formula mode ties the endpoints to X, H,
A, delta:

    P1 = (log X)^(33A)            Q1 = (log X)^(psi - 4A)
    P2 = exp((log X)^(2/3 + delta/2))   Q2 = exp((log X)^(1 - delta/2))

with psi = log H / log log X. At desk scale these endpoints overflow any
runnable range, so an explicit mode accepts user-chosen intervals while the
formula mode remains available for symbolic reporting. All iterated
logarithms here are natural-base; reports carry LOG_CONVENTION_NOTE to flag
that choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from . import sieves
from .errors import ValidationError

LOG_CONVENTION_NOTE = ("iterated logarithms are natural-base: the hypothesis scale "
                       "psi = log H / log log X reads log log, not a base-2 log")


@dataclass(frozen=True)
class TypicalParams:
    X: int
    H: int
    A: float
    delta: float
    psi: float
    W: float
    P1: float
    Q1: float
    P2: float
    Q2: float
    mode: str  # "paper-formula" | "explicit"


@dataclass(frozen=True)
class MembershipTable:
    params: TypicalParams
    d: int
    lo: int
    hi: int
    bits: np.ndarray  # bool per m in [lo, hi)

    def __post_init__(self):
        if len(self.bits) != self.hi - self.lo:
            raise ValidationError("bit length does not match range")
        self.bits.setflags(write=False)


def derive_profile(X: int, H: int, A: float = 6.0, delta: float = 0.05,
                   mode: str = "paper-formula",
                   explicit_intervals: tuple[tuple[float, float], tuple[float, float]] | None = None,
                   ) -> TypicalParams:
    """Build a validated interval profile.

    Formula mode rejects degenerate interval choices (psi <= 37A forces
    Q1 < P1 up to the boundary). Explicit mode stores the supplied endpoints
    verbatim and requires 2 <= P1 <= Q1 < P2 <= Q2.
    """
    if X < 16 or H < 2:
        raise ValidationError("need X >= 16 and H >= 2")
    if A < 0 or delta < 0:
        raise ValidationError("A and delta must be >= 0")
    lx = math.log(X)
    llx = math.log(lx)
    psi = math.log(H) / llx
    W = lx ** A
    if mode == "paper-formula":
        if psi <= 37 * A:
            raise ValidationError(
                f"degenerate intervals: psi={psi:.3f} <= 37A={37 * A:.3f} forces Q1 < P1")
        P1 = lx ** (33 * A)
        Q1 = lx ** (psi - 4 * A)
        P2 = math.exp(lx ** (2 / 3 + delta / 2))
        Q2 = math.exp(lx ** (1 - delta / 2))
        if not (P1 <= Q1 and P2 <= Q2):
            raise ValidationError("degenerate intervals: endpoint ordering failed")
    elif mode == "explicit":
        if explicit_intervals is None:
            raise ValidationError("explicit mode requires explicit_intervals")
        (P1, Q1), (P2, Q2) = explicit_intervals
        if not (2 <= P1 <= Q1 < P2 <= Q2):
            raise ValidationError(
                f"explicit intervals must satisfy 2 <= P1 <= Q1 < P2 <= Q2, "
                f"got [{P1}, {Q1}], [{P2}, {Q2}]")
    else:
        raise ValidationError(f"unknown profile mode {mode!r}")
    return TypicalParams(X, H, A, delta, psi, W, float(P1), float(Q1), float(P2), float(Q2), mode)


def psi_delta(params: TypicalParams) -> float:
    """min(psi, (log X)^(1/3 - delta)), the effective savings scale."""
    return min(params.psi, math.log(params.X) ** (1 / 3 - params.delta))


def psi_delta_of(X: int, H: int, delta: float) -> float:
    lx = math.log(X)
    return min(math.log(H) / math.log(lx), lx ** (1 / 3 - delta))


def distinct_prime_factors(n: int, spf_source: sieves.ArithmeticTable | None = None) -> list[int]:
    """Distinct primes dividing n, via an spf table when one covers n."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    out: list[int] = []
    m = n
    if spf_source is not None:
        while m > 1 and spf_source.lo <= m < spf_source.hi:
            p = int(spf_source.value_at(m))
            out.append(p)
            while m % p == 0:
                m //= p
        if m == 1:
            return out
    for p in sieves.primes_upto(isqrt(m)):
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
    if m > 1:
        out.append(m)
    return sorted(set(out))


def _has_factor_in(primes: list[int], lo: float, hi: float) -> bool:
    return any(lo <= p <= hi for p in primes)


def membership(n: int, params: TypicalParams,
               spf_source: sieves.ArithmeticTable | None = None) -> bool:
    """Whether n belongs to the typical set: a prime factor in each interval."""
    if not (1 <= n <= params.X):
        raise ValidationError(f"n={n} outside [1, X={params.X}]")
    ps = distinct_prime_factors(n, spf_source)
    return (_has_factor_in(ps, params.P1, params.Q1)
            and _has_factor_in(ps, params.P2, params.Q2))


def membership_refined(m: int, d: int, params: TypicalParams,
                       spf_source: sieves.ArithmeticTable | None = None) -> bool:
    """Whether m lies in the d-refined set: same factor condition, range X/d.

    Satisfies indicator(S)(m*d) == indicator(S_d)(m) for every d < P1,
    because no prime of such d can land in either interval.
    """
    if d >= params.P1:
        raise ValidationError(f"d={d} must be < P1={params.P1}")
    if d < 1:
        raise ValidationError("d must be >= 1")
    if not (1 <= m and m * d <= params.X):
        raise ValidationError(f"m={m} outside [1, X/d]")
    ps = distinct_prime_factors(m, spf_source)
    return (_has_factor_in(ps, params.P1, params.Q1)
            and _has_factor_in(ps, params.P2, params.Q2))


def factor_condition_block(lo: int, hi: int, params: TypicalParams) -> np.ndarray:
    """Boolean block of the two-interval factor condition on [lo, hi).

    Range caps are deliberately not applied here; callers slice to the range
    they need (the S_d range cap is m <= X/d).
    """
    if not (1 <= lo < hi):
        raise ValidationError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    size = hi - lo
    out = np.ones(size, dtype=bool)
    for plo, phi in ((params.P1, params.Q1), (params.P2, params.Q2)):
        if phi < 2 or phi < plo:
            out[:] = False
            break
        has = np.zeros(size, dtype=bool)
        ps = sieves.primes_upto(int(math.floor(phi)))
        ps = ps[ps >= plo]
        for p in ps:
            p = int(p)
            start = (-lo) % p
            has[start::p] = True
        out &= has
    return out


def build_membership_table(params: TypicalParams, d: int, lo: int, hi: int) -> MembershipTable:
    if d >= params.P1 or d < 1:
        raise ValidationError(f"d={d} must satisfy 1 <= d < P1={params.P1}")
    cap = params.X // d
    bits = factor_condition_block(lo, hi, params)
    n = np.arange(lo, hi)
    bits = bits & (n <= cap)
    return MembershipTable(params, d, lo, hi, bits)


def ramare_decompose(n: int, P: float, Q: float) -> list[tuple[int, Fraction]]:
    """Weighted splittings n = m * p over primes p | n inside [P, Q].

    Each admissible p contributes weight 1 / (#{q in [P,Q] prime : q | m} +
    [p does not divide m]) with m = n / p; the weights add up to exactly 1
    whenever n has a prime factor in [P, Q], and the list is empty otherwise.
    Weights are exact rationals.
    """
    if n < 2:
        raise ValidationError("n must be >= 2")
    if P > Q:
        return []
    ps = distinct_prime_factors(n)
    window = [p for p in ps if P <= p <= Q]
    out: list[tuple[int, Fraction]] = []
    for p in window:
        m = n // p
        in_m = [q for q in window if m % q == 0]
        denom = len(in_m) + (0 if m % p == 0 else 1)
        out.append((p, Fraction(1, denom)))
    return out


@dataclass(frozen=True)
class ComplementCount:
    exact: int
    prediction: float
    ratio: float


def complement_count(X: int, P: float, Q: float, h: int) -> ComplementCount:
    """Primes p <= X such that no prime q in [P, Q] divides p + h.

    `exact` comes from direct enumeration; `prediction` is the Mertens-style
    product pi(X) * prod_{q in [P,Q]} (1 - 1/q).
    """
    if X < 2 or h < 1:
        raise ValidationError("need X >= 2 and h >= 1")
    if not (2 <= P <= Q <= X) and not Q < P:
        raise ValidationError("need 2 <= P <= Q <= X (or an empty interval Q < P)")
    primes = sieves.primes_upto(X)
    qs = sieves.primes_upto(int(math.floor(Q))) if Q >= P else np.empty(0, dtype=np.int64)
    qs = qs[qs >= P]
    shifted = primes + h
    keep = np.ones(len(primes), dtype=bool)
    for q in qs:
        keep &= shifted % int(q) != 0
    exact = int(keep.sum())
    prediction = float(len(primes)) * float(np.prod(1.0 - 1.0 / qs.astype(np.float64))) \
        if qs.size else float(len(primes))
    ratio = exact / prediction if prediction else math.inf
    return ComplementCount(exact, prediction, ratio)


@dataclass(frozen=True)
class ComplementDensity:
    rho1: float
    rho2: float
    union_sum: float
    independent_estimate: float


def complement_density(params: TypicalParams) -> ComplementDensity:
    """Mertens-product estimates of the density removed by each interval.

    rho_j = log P_j / log Q_j approximates the density of integers with no
    prime factor in [P_j, Q_j]; the union sum rho1 + rho2 bounds the
    predicted fraction outside the typical set, and the independent-model
    estimate rho1 + rho2 - rho1*rho2 refines it.
    """
    rho1 = math.log(params.P1) / math.log(params.Q1)
    rho2 = math.log(params.P2) / math.log(params.Q2)
    return ComplementDensity(rho1, rho2, rho1 + rho2, rho1 + rho2 - rho1 * rho2)


def measured_outside_fraction(params: TypicalParams, upto: int | None = None,
                              block_size: int = sieves.DEFAULT_BLOCK_SIZE) -> float:
    """Exhaustively measured fraction of n <= upto outside the typical set."""
    N = upto or params.X
    outside = 0
    for b in range(1, N + 1, block_size):
        e = min(b + block_size, N + 1)
        outside += int((~factor_condition_block(b, e, params)).sum())
    return outside / N
