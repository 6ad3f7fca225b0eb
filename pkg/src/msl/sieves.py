"""Segmented sieves for arithmetic-function tables over integer ranges.

Tables are produced blockwise so ranges up to ~1e9 stay inside desk memory.
All tables are numpy-backed and read-only after construction, so they can be
shared freely. Summatory reductions (mertens, prime_pi) accumulate block
results in ascending range order; the result is independent of how blocks
would be scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb, isqrt

import numpy as np

from .errors import BudgetError, ValidationError

DEFAULT_BLOCK_SIZE = 1 << 20
# Hard cap for one materialized block; sieve_block refuses larger requests.
DEFAULT_BLOCK_BUDGET = 1 << 26
# Cap (in bytes) for a stitched multi-block table.
DEFAULT_TABLE_BUDGET_BYTES = 2 << 30

SIMPLE_FUNCTION_IDS = ("mobius", "liouville", "von_mangoldt", "spf", "prime_indicator")


def parse_function_id(function_id: str) -> tuple[str, int | None]:
    """Split a function id into (kind, k); k is set only for divisor_k."""
    if function_id in SIMPLE_FUNCTION_IDS:
        return function_id, None
    if function_id.startswith("divisor_"):
        tail = function_id[len("divisor_"):]
        try:
            k = int(tail)
        except ValueError:
            raise ValidationError(f"bad divisor order in function id {function_id!r}") from None
        if k < 1:
            raise ValidationError(f"divisor order must be >= 1, got {k}")
        return "divisor", k
    raise ValidationError(f"unknown function id {function_id!r}")


@dataclass(frozen=True)
class ArithmeticTable:
    """Contiguous values of one arithmetic function on the half-open range [lo, hi)."""

    function_id: str
    lo: int
    hi: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.hi - self.lo:
            raise ValidationError("table length does not match its range")
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.hi - self.lo

    def value_at(self, n: int):
        if not (self.lo <= n < self.hi):
            raise ValidationError(f"n={n} outside table range [{self.lo}, {self.hi})")
        return self.values[n - self.lo]

    def window(self, a: int, b: int, dtype=np.float64) -> np.ndarray:
        """Values on [a, b), zero-extended outside the covered range."""
        out = np.zeros(b - a, dtype=dtype)
        s, e = max(a, self.lo), min(b, self.hi)
        if s < e:
            out[s - a:e - a] = self.values[s - self.lo:e - self.lo]
        return out


def _check_range(lo: int, hi: int, budget: int) -> None:
    if not (1 <= lo < hi):
        raise ValidationError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    if hi - lo > budget:
        raise BudgetError(f"block of {hi - lo} values exceeds budget {budget}")


@lru_cache(maxsize=8)
def _primes_below_pow2(bound: int) -> np.ndarray:
    flags = np.ones(bound, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(bound - 1) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n, as an int64 array."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    bound = 1 << max(int(n).bit_length(), 2)
    primes = _primes_below_pow2(bound + 1)
    return primes[:np.searchsorted(primes, n, side="right")]


def _small_primes_for(hi: int) -> np.ndarray:
    return primes_upto(isqrt(hi - 1))


def _mobius_block(lo: int, hi: int) -> np.ndarray:
    size = hi - lo
    mu = np.ones(size, dtype=np.int8)
    prod = np.ones(size, dtype=np.int64)
    for p in _small_primes_for(hi):
        p = int(p)
        start = (-lo) % p
        mu[start::p] *= -1
        prod[start::p] *= p
        p2 = p * p
        if p2 < hi:
            mu[(-lo) % p2::p2] = 0
    n = np.arange(lo, hi, dtype=np.int64)
    # Entries whose tracked product misses n still carry one prime > sqrt(hi).
    leftover = (prod != n) & (mu != 0)
    mu[leftover] *= -1
    return mu


def _liouville_block(lo: int, hi: int) -> np.ndarray:
    size = hi - lo
    lam = np.ones(size, dtype=np.int8)
    prod = np.ones(size, dtype=np.int64)
    for p in _small_primes_for(hi):
        p = int(p)
        pk = p
        while pk < hi:
            start = (-lo) % pk
            lam[start::pk] *= -1
            prod[start::pk] *= p
            if pk > (hi - 1) // p:
                break
            pk *= p
    n = np.arange(lo, hi, dtype=np.int64)
    lam[prod != n] *= -1
    return lam


def _prime_indicator_block(lo: int, hi: int) -> np.ndarray:
    size = hi - lo
    isp = np.ones(size, dtype=bool)
    for n in range(lo, min(hi, 2)):
        isp[n - lo] = False
    for p in _small_primes_for(hi):
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start < hi:
            isp[start - lo::p] = False
    return isp.astype(np.int8)


def _von_mangoldt_block(lo: int, hi: int) -> np.ndarray:
    vals = np.zeros(hi - lo, dtype=np.float64)
    # Primes inside the block; each is its own prime power.
    isp = _prime_indicator_block(lo, hi)
    for idx in np.nonzero(isp)[0]:
        vals[idx] = math.log(lo + int(idx))
    # Proper powers p^k, k >= 2, of small primes.
    for p in _small_primes_for(hi):
        p = int(p)
        pk = p * p
        while pk < hi:
            if pk >= lo:
                vals[pk - lo] = math.log(p)
            if pk > (hi - 1) // p:
                break
            pk *= p
    return vals


def _factor_scan(lo: int, hi: int):
    """Yield (p, idx, exponents) per small prime; idx are block positions of
    multiples of p, exponents the exact p-adic valuations."""
    size = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    for p in _small_primes_for(hi):
        p = int(p)
        idx = np.arange((-lo) % p, size, p)
        if idx.size == 0:
            continue
        r = rem[idx] // p
        a = np.ones(idx.size, dtype=np.int64)
        while True:
            div = r % p == 0
            if not div.any():
                break
            r[div] //= p
            a[div] += 1
        rem[idx] = r
        yield p, idx, a
    yield None, None, rem


def _divisor_block(k: int, lo: int, hi: int) -> np.ndarray:
    size = hi - lo
    dk = np.ones(size, dtype=np.int64)
    if k == 1:
        return dk
    max_exp = int(hi - 1).bit_length()
    # d_k(p^a) counts ordered k-factorizations of p^a: C(a+k-1, k-1).
    ctab = np.array([comb(a + k - 1, k - 1) for a in range(max_exp + 2)], dtype=np.int64)
    for p, idx, a in _factor_scan(lo, hi):
        if p is None:
            dk[a > 1] *= k
        else:
            dk[idx] *= ctab[a]
    return dk


def _spf_block(lo: int, hi: int) -> np.ndarray:
    size = hi - lo
    spf = np.zeros(size, dtype=np.int64)
    for p in _small_primes_for(hi):
        p = int(p)
        idx = np.arange((-lo) % p, size, p)
        unset = idx[spf[idx] == 0]
        spf[unset] = p
    n = np.arange(lo, hi, dtype=np.int64)
    rest = spf == 0
    spf[rest] = n[rest]
    if lo == 1:
        spf[0] = 1  # spf(1) = 1 by convention
    return spf


def sieve_block(function_id: str, lo: int, hi: int,
                budget: int = DEFAULT_BLOCK_BUDGET) -> ArithmeticTable:
    """Sieve one contiguous block of values of the named function on [lo, hi)."""
    kind, k = parse_function_id(function_id)
    _check_range(lo, hi, budget)
    if kind == "mobius":
        vals = _mobius_block(lo, hi)
    elif kind == "liouville":
        vals = _liouville_block(lo, hi)
    elif kind == "von_mangoldt":
        vals = _von_mangoldt_block(lo, hi)
    elif kind == "prime_indicator":
        vals = _prime_indicator_block(lo, hi)
    elif kind == "spf":
        vals = _spf_block(lo, hi)
    else:
        vals = _divisor_block(k, lo, hi)
    return ArithmeticTable(function_id, lo, hi, vals)


def table(function_id: str, lo: int, hi: int,
          block_size: int = DEFAULT_BLOCK_SIZE,
          budget_bytes: int = DEFAULT_TABLE_BUDGET_BYTES) -> ArithmeticTable:
    """Stitch sieved blocks into one table covering [lo, hi)."""
    kind, _ = parse_function_id(function_id)
    if not (1 <= lo < hi):
        raise ValidationError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    if block_size < 2:
        raise ValidationError("block_size must be >= 2")
    itemsize = {"von_mangoldt": 8, "spf": 8, "divisor": 8}.get(kind, 1)
    if (hi - lo) * itemsize > budget_bytes:
        raise BudgetError(f"table of {hi - lo} values exceeds {budget_bytes} bytes")
    parts = [sieve_block(function_id, b, min(b + block_size, hi), budget=block_size).values
             for b in range(lo, hi, block_size)]
    return ArithmeticTable(function_id, lo, hi, np.concatenate(parts))


def divisor_table(k: int, lo: int, hi: int,
                  budget: int = DEFAULT_BLOCK_BUDGET) -> ArithmeticTable:
    """d_k values on [lo, hi): ordered k-tuples with the given product."""
    return sieve_block(f"divisor_{k}", lo, hi, budget=budget)


def spf_table(lo: int, hi: int, budget: int = DEFAULT_BLOCK_BUDGET) -> ArithmeticTable:
    """Smallest-prime-factor values on [lo, hi), with spf(1) = 1."""
    return sieve_block("spf", lo, hi, budget=budget)


def mertens(X: int, block_size: int = DEFAULT_BLOCK_SIZE) -> int:
    """Exact summatory Mobius value sum_{n<=X} mu(n)."""
    if X < 1:
        raise ValidationError("X must be >= 1")
    total = 0
    for b in range(1, X + 1, block_size):
        total += int(_mobius_block(b, min(b + block_size, X + 1)).sum())
    return total


def prime_pi(X: int, block_size: int = DEFAULT_BLOCK_SIZE) -> int:
    """Exact count of primes <= X."""
    if X < 1:
        raise ValidationError("X must be >= 1")
    total = 0
    for b in range(1, X + 1, block_size):
        total += int(_prime_indicator_block(b, min(b + block_size, X + 1)).sum())
    return total


@dataclass(frozen=True)
class ConvolutionReport:
    ok: bool
    checked_upto: int
    first_failure: int | None


def mobius_from_liouville_report(X: int,
                                 mu_values: np.ndarray | None = None,
                                 lam_values: np.ndarray | None = None) -> ConvolutionReport:
    """Check mu(n) = sum_{d^2 | n} mu(d) * lambda(n / d^2) for all n <= X.

    The identity inverts the square-supported convolution linking the Mobius
    and Liouville functions. Tables may be injected (e.g. deliberately
    corrupted ones) to exercise the failure path; by default both sides come
    from fresh sieves.
    """
    if X < 1:
        raise ValidationError("X must be >= 1")
    mu = np.asarray(mu_values if mu_values is not None
                    else table("mobius", 1, X + 1).values, dtype=np.int64)
    lam = np.asarray(lam_values if lam_values is not None
                     else table("liouville", 1, X + 1).values, dtype=np.int64)
    if len(mu) < X or len(lam) < X:
        raise ValidationError("injected tables must cover [1, X]")
    recon = np.zeros(X, dtype=np.int64)
    for d in range(1, isqrt(X) + 1):
        md = int(mu[d - 1])
        if md == 0:
            continue
        d2 = d * d
        recon[d2 - 1::d2] += md * lam[:X // d2]
    bad = np.nonzero(recon != mu[:X])[0]
    if bad.size:
        return ConvolutionReport(False, X, int(bad[0]) + 1)
    return ConvolutionReport(True, X, None)
