"""Shifted correlation sums, singular series, and tuple correlations.

The central quantity is C(h) = sum over a base sequence (primes by default)
of f(base + h), computed for all shifts h <= H at once. The fast path is a
blocked FFT cross-correlation with an explicit roundoff budget: the
accumulated FFT error bound is computed per run, and when it cannot
guarantee deviation < 0.49 on integer-valued correlands the run silently
degrades to the direct path. Correctness over speed, with speed typical.

Reductions over blocks are accumulated in ascending range order, so results
do not depend on block scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sieves, typical
from .errors import BudgetError, ValidationError

DEFAULT_FFT_BLOCK = 1 << 22
_EPS = np.finfo(np.float64).eps
_INTEGER_IDS = {"mobius", "liouville", "prime_indicator"}


def _next_fast_len(n: int) -> int:
    """Smallest 5-smooth integer >= n."""
    if n <= 2:
        return max(n, 1)
    best = 1 << n.bit_length()
    p5 = 1
    while p5 < best:
        p35 = p5
        while p35 < best:
            x = p35
            while x < n:
                x *= 2
            best = min(best, x)
            p35 *= 3
        p5 *= 5
    return best


def _is_integral(f_id: str) -> bool:
    kind, _ = sieves.parse_function_id(f_id)
    return kind in _INTEGER_IDS or kind == "divisor"


@dataclass(frozen=True)
class CrossCorrResult:
    lags: np.ndarray          # C[h], h = 0..H
    method: str               # "fft" | "direct"
    fft_error_bound: float


def cross_correlation(weights: np.ndarray, f_vals: np.ndarray, H: int,
                      method: str = "auto", block: int = DEFAULT_FFT_BLOCK,
                      integral: bool = False) -> CrossCorrResult:
    """C[h] = sum_i weights[i] * f_vals[i+h] for h = 0..H.

    `f_vals` must be at least H longer than `weights`. With method "auto" or
    "fft" the overlap-add FFT path runs first; if the accumulated error
    bound reaches 0.49 on integral inputs, the direct path replaces it.
    """
    n = len(weights)
    if len(f_vals) < n + H:
        raise ValidationError("f_vals must cover every requested lag")
    if method not in ("auto", "fft", "direct"):
        raise ValidationError(f"unknown method {method!r}")
    if method == "direct":
        return CrossCorrResult(_direct_corr(weights, f_vals, H), "direct", 0.0)
    lags = np.zeros(H + 1)
    bound = 0.0
    for b in range(0, n, block):
        wb = weights[b:b + block]
        fb = f_vals[b:b + len(wb) + H]
        nfft = _next_fast_len(len(fb))
        FW = np.fft.rfft(wb, nfft)
        FF = np.fft.rfft(fb, nfft)
        corr = np.fft.irfft(np.conj(FW) * FF, nfft)
        lags += corr[:H + 1]
        bound += 8 * _EPS * math.log2(nfft) * float(np.linalg.norm(wb)) * float(np.linalg.norm(fb))
    if integral and bound >= 0.49:
        return CrossCorrResult(_direct_corr(weights, f_vals, H), "direct", bound)
    if integral:
        lags = np.rint(lags)
    return CrossCorrResult(lags, "fft", bound)


def _direct_corr(weights: np.ndarray, f_vals: np.ndarray, H: int) -> np.ndarray:
    return np.correlate(f_vals[:len(weights) + H], weights, mode="valid")


@dataclass(frozen=True)
class CorrelationReport:
    f_id: str
    X: int
    H: int
    base: str
    C: np.ndarray             # per-shift sums, h = 1..H
    C0: float                 # the h = 0 diagnostic slot
    normalizer: float
    aggregate: float
    method: str
    fft_error_bound: float

    def __post_init__(self):
        self.C.setflags(write=False)


def _base_weights(base: str, X: int) -> tuple[np.ndarray, float]:
    if base == "primes":
        w = sieves.table("prime_indicator", 1, X + 1).values.astype(np.float64)
        return w, float(w.sum())
    if base == "integers":
        return np.ones(X), float(X)
    raise ValidationError(f"unknown base {base!r}")


def _report_from_lags(f_id, X, H, base, res: CrossCorrResult, normalizer) -> CorrelationReport:
    C = res.lags[1:H + 1].copy()
    agg = float(np.abs(C).sum() / (H * normalizer)) if normalizer else math.inf
    return CorrelationReport(f_id, X, H, base, C, float(res.lags[0]),
                             normalizer, agg, res.method, res.fft_error_bound)


def shifted_correlation(f_id: str, X: int, H: int, base: str = "primes",
                        method: str = "auto",
                        block: int = DEFAULT_FFT_BLOCK) -> CorrelationReport:
    """C(h) = sum over the base sequence up to X of f(. + h), h = 1..H.

    The aggregate field carries sum_h |C(h)| / (H * normalizer) with the
    normalizer pi(X) for the prime base and X for the integer base.
    """
    if X < 2 or not (1 <= H <= X):
        raise ValidationError("need X >= 2 and 1 <= H <= X")
    weights, normalizer = _base_weights(base, X)
    f_vals = sieves.table(f_id, 1, X + H + 1).values.astype(np.float64)
    res = cross_correlation(weights, f_vals, H, method=method, block=block,
                            integral=_is_integral(f_id))
    return _report_from_lags(f_id, X, H, base, res, normalizer)


@dataclass(frozen=True)
class RestrictedCorrelation:
    in_set: CorrelationReport
    complement: CorrelationReport

    def recombined(self) -> np.ndarray:
        """Per-shift sums of the unrestricted correlation, by the exact split."""
        return self.in_set.C + self.complement.C


def restricted_shifted_correlation(f_id: str, X: int, H: int,
                                   params: typical.TypicalParams,
                                   base: str = "primes", method: str = "auto",
                                   block: int = DEFAULT_FFT_BLOCK) -> RestrictedCorrelation:
    """Shifted correlation of f restricted to the typical set, plus the
    complementary sums, so that C = C_in + C_out can be checked per shift."""
    if X < 2 or not (1 <= H <= X):
        raise ValidationError("need X >= 2 and 1 <= H <= X")
    weights, normalizer = _base_weights(base, X)
    f_vals = sieves.table(f_id, 1, X + H + 1).values.astype(np.float64)
    ind = typical.factor_condition_block(1, X + H + 1, params)
    integral = _is_integral(f_id)
    res_in = cross_correlation(weights, np.where(ind, f_vals, 0.0), H,
                               method=method, block=block, integral=integral)
    res_out = cross_correlation(weights, np.where(ind, 0.0, f_vals), H,
                                method=method, block=block, integral=integral)
    return RestrictedCorrelation(
        _report_from_lags(f_id, X, H, base, res_in, normalizer),
        _report_from_lags(f_id, X, H, base, res_out, normalizer))


def chowla_sum(X: int, shifts: tuple[int, ...] | list[int]) -> int:
    """Exact integer sum over n <= X of the product of mu(n + h) over shifts."""
    if not shifts:
        raise ValidationError("shifts must be nonempty")
    if X < 1:
        raise ValidationError("X must be >= 1")
    if min(shifts) < 0:
        raise ValidationError("shifts must be >= 0")
    hmax = max(shifts)
    mu = sieves.table("mobius", 1, X + hmax + 1).values.astype(np.int64)
    acc = np.ones(X, dtype=np.int64)
    for h in shifts:
        acc *= mu[h:h + X]
    return int(acc.sum())


@dataclass(frozen=True)
class AveragedChowlaReport:
    X: int
    H: int
    m: int
    prime_tuple: tuple[int, ...]
    total: float               # sum over shift tuples of |inner sum|
    normalized: float          # total / (X * H^m)
    reference: float           # 1 / psi_delta(X)^m, the expected decay shape
    method: str                # "fft" | "exhaustive" | "sampled"
    n_samples: int | None = None
    standard_error: float | None = None


def averaged_chowla(X: int, H: int, m: int, prime_tuple: tuple[int, ...] = (),
                    delta: float = 0.05, method: str = "auto",
                    n_samples: int = 256, seed: int = 0,
                    weight_id: str = "von_mangoldt") -> AveragedChowlaReport:
    """Average over shift tuples (h_1..h_m) in [1,H]^m of
    |sum_{n<=X} prod_j mu(n+h_j) * prod_i w(n+a_i)| with w the von Mangoldt
    weight on the fixed tuple.

    m = 1 runs through the FFT correlation; m = 2 is exhaustive; larger m is
    estimated by uniform sampling of shift tuples (reported with a standard
    error) since the exhaustive count grows like H^m.
    """
    if X < 2 or H < 1:
        raise ValidationError("need X >= 2 and H >= 1")
    if m < 1:
        raise ValidationError("m must be >= 1")
    if len(set(prime_tuple)) != len(prime_tuple):
        raise ValidationError("tuple entries must be distinct")
    if prime_tuple and min(prime_tuple) < 0:
        raise ValidationError("tuple entries must be >= 0")
    amax = max(prime_tuple, default=0)
    w = np.ones(X)
    if prime_tuple:
        wt = sieves.table(weight_id, 1, X + amax + 1).values.astype(np.float64)
        for a in prime_tuple:
            w *= wt[a:a + X]
    mu = sieves.table("mobius", 1, X + H + 1).values.astype(np.float64)
    pd = typical.psi_delta_of(X, H, delta)
    reference = pd ** (-m) if pd > 0 else math.inf

    if m == 1:
        res = cross_correlation(w, mu, H, method=method)
        total = float(np.abs(res.lags[1:H + 1]).sum())
        return AveragedChowlaReport(X, H, m, tuple(prime_tuple), total,
                                    total / (X * H), reference, res.method)
    if m == 2:
        total = 0.0
        for h1 in range(1, H + 1):
            v = w * mu[h1:h1 + X]
            res = cross_correlation(v, mu, H, method="direct" if X * H <= 1 << 22 else "fft")
            total += float(np.abs(res.lags[1:H + 1]).sum())
        return AveragedChowlaReport(X, H, m, tuple(prime_tuple), total,
                                    total / (X * H ** 2), reference, "exhaustive")
    # m >= 3: sampled estimate of the average
    rng = np.random.Generator(np.random.Philox(key=seed))
    samples = np.empty(n_samples)
    for i in range(n_samples):
        hs = rng.integers(1, H + 1, size=m)
        acc = w.copy()
        for h in hs:
            acc *= mu[h:h + X]
        samples[i] = abs(float(acc.sum()))
    mean = float(samples.mean())
    stderr = float(samples.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else math.inf
    total = mean * H ** m
    return AveragedChowlaReport(X, H, m, tuple(prime_tuple), total,
                                total / (X * H ** m), reference, "sampled",
                                n_samples, stderr * H ** m / (X * H ** m))


@dataclass(frozen=True)
class SingularSeries:
    value: float
    tail_bound: float          # bound on |log| of the omitted Euler product
    truncated_at: int


def singular_series(prime_tuple: tuple[int, ...] | list[int], p_max: int) -> SingularSeries:
    """Truncated singular series prod_p (1 - nu_p/p) / (1 - 1/p)^k.

    nu_p counts the residues of the tuple mod p. Past the tuple diameter the
    residues stay distinct, so each omitted factor with x = k/p satisfies
    |log factor| <= k(k+1)/p^2 (from |log(1-x) + x| <= x^2 for x < 1/2);
    summing the tail gives the k(k+1)/p_max bound. Requires p_max >= 2k and
    p_max >= diameter so the tail formula is valid.
    """
    tup = tuple(prime_tuple)
    k = len(tup)
    if k == 0 or len(set(tup)) != k:
        raise ValidationError("tuple must be nonempty and distinct")
    diameter = max(tup) - min(tup)
    if p_max < max(diameter, 2 * k):
        raise ValidationError(f"p_max={p_max} too small: tail formula needs "
                              f"p_max >= max(diameter={diameter}, 2k={2 * k})")
    primes = sieves.primes_upto(p_max)
    value = 1.0
    arr = np.array(tup, dtype=np.int64)
    small = primes[primes <= max(diameter, k)]
    for p in small:
        p = int(p)
        nu = len(set(int(a) % p for a in arr))
        value *= (1 - nu / p) / (1 - 1 / p) ** k
    big = primes[primes > max(diameter, k)].astype(np.float64)
    if big.size:
        value *= float(np.prod((1 - k / big) / (1 - 1 / big) ** k))
    return SingularSeries(value, k * (k + 1) / p_max, p_max)


@dataclass(frozen=True)
class HlKtupleResult:
    lambda_sum: float
    prediction: float
    ratio: float | None        # None when the singular series vanishes
    series: SingularSeries


def hl_ktuple(X: int, prime_tuple: tuple[int, ...] | list[int], p_max: int) -> HlKtupleResult:
    """Compare sum_{n<=X} prod_i Lambda(n + a_i) against its tuple prediction
    (singular series times X)."""
    tup = tuple(prime_tuple)
    if X < 1:
        raise ValidationError("X must be >= 1")
    if min(tup) < 0:
        raise ValidationError("tuple entries must be >= 0")
    amax = max(tup)
    lam = sieves.table("von_mangoldt", 1, X + amax + 1).values
    acc = np.ones(X)
    for a in tup:
        acc = acc * lam[a:a + X]
    # ascending compensated accumulation: block partials then fsum
    partials = [float(acc[b:b + (1 << 16)].sum()) for b in range(0, X, 1 << 16)]
    lambda_sum = math.fsum(partials)
    series = singular_series(tup, p_max)
    prediction = series.value * X
    ratio = lambda_sum / prediction if prediction != 0 else None
    return HlKtupleResult(lambda_sum, prediction, ratio, series)


@dataclass(frozen=True)
class DivisorCorrelationReport:
    X: int
    H: int
    k_list: tuple[int, ...]
    shift_tuple: tuple[int, ...]
    C: np.ndarray              # per-shift sums, h = 1..H
    normalizer: float          # H * X * (log X)^(k - j)
    aggregate: float
    method: str

    def __post_init__(self):
        self.C.setflags(write=False)


def divisor_mobius_correlation(X: int, H: int, k_list: tuple[int, ...],
                               shift_tuple: tuple[int, ...],
                               method: str = "auto",
                               mobius_substitute: np.ndarray | None = None) -> DivisorCorrelationReport:
    """Per-shift sums over n <= X of mu(n+h) * prod_i d_{k_i}(n + a_i).

    The aggregate divides by H * X * (log X)^(k - j) with k the sum of the
    divisor orders and j their count. An empty k_list reduces to the plain
    averaged Mobius sum. `mobius_substitute` swaps the shifted factor for a
    caller-supplied table (handy for null tests).
    """
    if X < 2 or not (1 <= H <= X):
        raise ValidationError("need X >= 2 and 1 <= H <= X")
    if any(k < 2 for k in k_list):
        raise ValidationError("divisor orders must all be >= 2")
    if len(k_list) != len(shift_tuple):
        raise ValidationError("k_list and shift tuple must align")
    if len(set(shift_tuple)) != len(shift_tuple):
        raise ValidationError("tuple entries must be distinct")
    if shift_tuple and min(shift_tuple) < 0:
        raise ValidationError("tuple entries must be >= 0")
    w = np.ones(X)
    for k, a in zip(k_list, shift_tuple):
        dk = sieves.table(f"divisor_{k}", 1, X + a + 1).values.astype(np.float64)
        w *= dk[a:a + X]
    if mobius_substitute is not None:
        f_vals = np.asarray(mobius_substitute, dtype=np.float64)
        if len(f_vals) < X + H:
            raise ValidationError("substitute table must cover [1, X+H]")
        integral = False
    else:
        f_vals = sieves.table("mobius", 1, X + H + 1).values.astype(np.float64)
        integral = True
    res = cross_correlation(w, f_vals, H, method=method, integral=integral)
    ksum = sum(k_list)
    j = len(k_list)
    normalizer = H * X * math.log(X) ** (ksum - j)
    C = res.lags[1:H + 1].copy()
    agg = float(np.abs(C).sum() / normalizer)
    return DivisorCorrelationReport(X, H, tuple(k_list), tuple(shift_tuple),
                                    C, normalizer, agg, res.method)


@dataclass(frozen=True)
class ExceptionalScan:
    epsilon: float
    threshold: float
    shifts: tuple[int, ...]
    count: int
    fraction: float


def exceptional_scan(report: CorrelationReport, epsilon: float) -> ExceptionalScan:
    """Shifts whose correlation escapes the epsilon * normalizer band."""
    if epsilon < 0:
        raise ValidationError("epsilon must be >= 0")
    threshold = epsilon * report.normalizer
    idx = np.nonzero(np.abs(report.C) > threshold)[0]
    shifts = tuple(int(i) + 1 for i in idx)
    return ExceptionalScan(epsilon, threshold, shifts, len(shifts), len(shifts) / report.H)
