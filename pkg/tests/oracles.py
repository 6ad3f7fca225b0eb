"""Independent oracles for the test suite.

Everything here recomputes values from definitions, using remainder-based
trial division and explicit double loops, never the package's sieving or
FFT paths. Keep it that way: these are the other side of every dual-route
check.
"""

from __future__ import annotations

import math
from math import comb, isqrt

import numpy as np


def primes_list(n: int) -> list[int]:
    if n < 2:
        return []
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(n) + 1):
        if flags[p]:
            flags[p * p::p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, f in enumerate(flags) if f]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division."""
    assert n >= 1
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def liouville(n: int) -> int:
    return -1 if sum(e for _, e in factorize(n)) % 2 else 1


def von_mangoldt(n: int) -> float:
    f = factorize(n)
    if len(f) == 1:
        return math.log(f[0][0])
    return 0.0


def spf(n: int) -> int:
    if n == 1:
        return 1
    return factorize(n)[0][0]


def divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def divisor_k(n: int, k: int) -> int:
    """Ordered k-tuple count via the recursive divisor-sum definition."""
    if k == 1:
        return 1
    return sum(divisor_k(d, k - 1) for d in divisors(n))


def divisor_k_enumeration(n: int, k: int) -> int:
    """Count ordered k-tuples with product n by direct recursion on tuples."""
    if k == 0:
        return 1 if n == 1 else 0
    return sum(divisor_k_enumeration(n // d, k - 1) for d in divisors(n))


def trial_division_tables(N: int, ks: tuple[int, ...] = (2, 3)) -> dict[str, np.ndarray]:
    """Vectorized remainder-based factorization of every n in [1, N].

    Differs mechanically from a sieve: exponents come from repeated division
    of each entry, not from marking arithmetic progressions.
    """
    n = np.arange(1, N + 1, dtype=np.int64)
    rem = n.copy()
    omega = np.zeros(N, dtype=np.int64)
    big_omega = np.zeros(N, dtype=np.int64)
    squarefull = np.zeros(N, dtype=bool)
    spf_t = np.zeros(N, dtype=np.int64)
    max_e = int(N).bit_length() + 1
    ctabs = {k: np.array([comb(e + k - 1, k - 1) for e in range(max_e)], dtype=np.int64)
             for k in ks}
    dk = {k: np.ones(N, dtype=np.int64) for k in ks}
    for p in primes_list(isqrt(N)):
        active = rem % p == 0
        if not active.any():
            continue
        e = np.zeros(N, dtype=np.int64)
        while active.any():
            e[active] += 1
            rem[active] //= p
            active &= rem % p == 0
        hit = e > 0
        omega[hit] += 1
        big_omega += e
        squarefull |= e > 1
        spf_t[hit & (spf_t == 0)] = p
        for k in ks:
            dk[k][hit] *= ctabs[k][e[hit]]
    left = rem > 1
    omega[left] += 1
    big_omega[left] += 1
    spf_t[left & (spf_t == 0)] = rem[left & (spf_t == 0)]
    for k in ks:
        dk[k][left] *= k
    spf_t[0] = 1  # spf(1) = 1
    mu = np.where(squarefull, 0, np.where(omega % 2 == 1, -1, 1)).astype(np.int64)
    lam = np.where(big_omega % 2 == 1, -1, 1).astype(np.int64)
    vm = np.zeros(N)
    for i in np.nonzero(omega == 1)[0]:
        vm[i] = math.log(int(spf_t[i]))
    out = {"mobius": mu, "liouville": lam, "von_mangoldt": vm, "spf": spf_t,
           "prime_indicator": ((omega == 1) & (big_omega == 1)).astype(np.int64)}
    for k in ks:
        out[f"divisor_{k}"] = dk[k]
    return out


def brute_mertens(X: int) -> int:
    return int(trial_division_tables(X)["mobius"].sum())


def brute_prime_pi(X: int) -> int:
    return len(primes_list(X))


def direct_shifted_correlation(f_vals, X: int, H: int, base_vals) -> list[float]:
    """C(h) by explicit double loop; f_vals and base_vals are 1-indexed via
    position 0 = value at n=1."""
    out = []
    for h in range(1, H + 1):
        s = 0.0
        for n in range(1, X + 1):
            if base_vals[n - 1]:
                s += base_vals[n - 1] * f_vals[n + h - 1]
        out.append(s)
    return out


def dirichlet_poly_quadrature(support, coeffs, T0: float, T: float,
                              rel_tol: float = 1e-9) -> float:
    """Adaptive panel quadrature of |sum a_n n^{-it}|^2 over T0 <= |t| <= T.

    Gauss-Legendre panels sized to the log-span bandwidth, halved until the
    total stabilizes; implemented independently of any closed form.
    """
    logs = np.log(np.asarray(support, dtype=np.float64))
    cf = np.asarray(coeffs, dtype=np.complex128)
    span = float(logs.max() - logs.min()) if len(logs) > 1 else 0.0
    nodes, weights = np.polynomial.legendre.leggauss(16)

    def total(n_panels: int) -> float:
        edges = np.linspace(T0, T, n_panels + 1)
        mid = (edges[1:] + edges[:-1]) / 2
        half = (edges[1:] - edges[:-1]) / 2
        ts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        acc = 0.0
        for sgn in (1.0, -1.0):
            vals = np.abs(np.exp(-1j * np.outer(sgn * ts, logs)) @ cf) ** 2
            acc += float(np.sum(vals.reshape(-1, 16) * weights[None, :] * half[:, None]))
        return acc

    n = max(8, int((T - T0) * max(span, 0.25) / 3.0) + 1)
    prev = total(n)
    for _ in range(14):
        n *= 2
        cur = total(n)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev


def best_rational_brute(alpha: float, Q: int) -> tuple[int, int, float]:
    """Best a/q with q <= Q by exhaustive search over denominators."""
    best = None
    for q in range(1, Q + 1):
        a = round(alpha * q)
        err = abs(alpha - a / q)
        if best is None or err < best[2] - 1e-18:
            g = math.gcd(abs(a), q)
            best = (a // g if g else a, q // g if g else q, err)
    return best


def exp_sum_direct(values, lo: int, x: float, H: float, alpha) -> complex:
    """Windowed exponential sum with exact per-term rational phase."""
    from fractions import Fraction
    fr = alpha if isinstance(alpha, Fraction) else Fraction(float(alpha))
    n0, n1 = math.ceil(x), math.floor(x + H)
    s = 0j
    for n in range(n0, n1 + 1):
        ph = ((n * fr.numerator) % fr.denominator) / fr.denominator
        s += values[n - lo] * complex(math.cos(2 * math.pi * ph),
                                      math.sin(2 * math.pi * ph))
    return s
