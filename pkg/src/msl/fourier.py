"""Circle-method machinery: windowed exponential sums, their x-averaged
Fourier integrals, rational approximation with major/minor arc labels, the
min(H/n, 1/||n alpha||) sums that control minor arcs, and mean values of
Dirichlet polynomials.

Phase arguments n*alpha are reduced mod 1 before any trigonometry: the block
base is reduced exactly through integer arithmetic on the binary rational
alpha, and offsets use a split-product scheme that keeps the high part
exact. Without this, n around 1e8 times alpha would lose most of the phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from . import sieves, typical
from .characters import DirichletCharacter
from .errors import BudgetError, ValidationError

_SPLIT = (1 << 27) + 1
_PHASE_CHUNK = 1 << 25


def _exact_frac(n: int, alpha_fr: Fraction) -> float:
    num, den = alpha_fr.numerator, alpha_fr.denominator
    return ((n * num) % den) / den


def unit_phases(n0: int, count: int, alpha: float | Fraction) -> np.ndarray:
    """Fractional parts of (n0 + j) * alpha for j = 0..count-1.

    The base n0 * alpha is reduced exactly as a rational; offsets j * alpha
    use a high/low product split so the high part stays exact for j < 2^26.
    Longer runs are re-based chunk by chunk.
    """
    fr = alpha if isinstance(alpha, Fraction) else Fraction(float(alpha))
    af = float(fr)
    t = af * _SPLIT
    a_hi = t - (t - af)
    a_lo = af - a_hi
    out = np.empty(count)
    for c0 in range(0, count, _PHASE_CHUNK):
        c1 = min(c0 + _PHASE_CHUNK, count)
        base = _exact_frac(n0 + c0, fr)
        j = np.arange(c1 - c0, dtype=np.float64)
        ph = (j * a_hi) % 1.0
        ph += j * a_lo + base
        out[c0:c1] = ph % 1.0
    return out


def _unit_exp(phases: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * phases)


def exp_sum(table: sieves.ArithmeticTable, x: float, H: float, alpha: float) -> complex:
    """F_x(alpha) = sum over integers n in [x, x+H] of f(n) e(n alpha)."""
    if H < 0:
        raise ValidationError("H must be >= 0")
    n0 = math.ceil(x)
    n1 = math.floor(x + H)
    if n1 < n0:
        return 0j
    if n0 < table.lo or n1 >= table.hi:
        raise ValidationError(f"table [{table.lo}, {table.hi}) does not cover [{n0}, {n1}]")
    f = table.values[n0 - table.lo:n1 + 1 - table.lo].astype(np.float64)
    return complex(np.dot(f, _unit_exp(unit_phases(n0, n1 - n0 + 1, alpha))))


def fourier_integral(table: sieves.ArithmeticTable, X: int, H: float, alpha: float,
                     block: int = 1 << 15) -> float:
    """Exact integral over x in [0, X] of |sum_{x<=n<=x+H} f(n) e(n alpha)| dx.

    The window contents only change at x = n and x = n - H, so the integrand
    is piecewise constant; the integral is a finite sum of segment lengths
    times window magnitudes. Integer H uses a vectorized sliding window over
    unit segments; fractional H walks the full breakpoint list.
    """
    if X < 1:
        raise ValidationError("X must be >= 1")
    if H <= 0:
        raise ValidationError("H must be > 0")
    need_hi = math.floor(X + H)
    if table.lo > 1 or table.hi <= need_hi:
        raise ValidationError(f"table must cover [1, {need_hi}]")
    if float(H).is_integer():
        return _fourier_integral_int(table, int(X), int(H), alpha, block)
    return _fourier_integral_sweep(table, X, H, alpha)


def _fourier_integral_int(table, X, H, alpha, block):
    total = 0.0
    for b0 in range(0, X, block):
        b1 = min(b0 + block, X)
        n_start = b0 + 1
        cnt = (b1 - b0) + H
        ph = unit_phases(n_start, cnt, alpha)
        g = table.window(n_start, n_start + cnt) * _unit_exp(ph)
        cs = np.concatenate(([0j], np.cumsum(g)))
        w = cs[H:H + (b1 - b0)] - cs[:b1 - b0]
        total += float(np.abs(w).sum())
    return total


def _fourier_integral_sweep(table, X, H, alpha):
    if X + H > 2e6:
        raise BudgetError("fractional-H sweep supports X + H <= 2e6")
    n_hi = math.floor(X + H)
    ns = np.arange(1, n_hi + 1)
    g = table.window(1, n_hi + 1) * _unit_exp(unit_phases(1, n_hi, alpha))
    # event: (position, n, +1 enter) at n-H and (position, n, -1 leave) at n
    pos = np.concatenate((ns - H, ns.astype(np.float64)))
    kind = np.concatenate((np.ones(n_hi, dtype=np.int8), -np.ones(n_hi, dtype=np.int8)))
    idx = np.concatenate((ns, ns))
    order = np.lexsort((-kind, pos))
    w = 0j
    x_cur = 0.0
    total = 0.0
    for o in order:
        p = float(pos[o])
        if p > X:
            break
        if p > x_cur:
            total += abs(w) * (p - x_cur)
            x_cur = p
        if p >= 0:
            w += int(kind[o]) * g[idx[o] - 1]
        else:
            # window already contains this n at x = 0
            if kind[o] > 0:
                w += g[idx[o] - 1]
    if x_cur < X:
        total += abs(w) * (X - x_cur)
    return total


@dataclass(frozen=True)
class ArcLabel:
    alpha: float               # representative in [0, 1)
    a: int
    q: int
    err: float                 # |alpha - a/q|
    klass: str                 # "major" | "minor"
    W: float
    Q1: float

    @property
    def is_major(self) -> bool:
        return self.klass == "major"


def dirichlet_approx(alpha: float | Fraction, Q: int) -> tuple[int, int, float]:
    """Best rational approximation a/q with q <= Q and |alpha - a/q| <= 1/(qQ).

    Candidates are the continued-fraction convergents of alpha plus the
    deepest semiconvergent that still fits the denominator budget; among
    those satisfying the Dirichlet inequality the smallest error wins (ties
    to the smaller q). Such a candidate always exists.
    """
    if Q < 1:
        raise ValidationError("Q must be >= 1")
    fr = alpha if isinstance(alpha, Fraction) else Fraction(float(alpha))
    n_int = math.floor(fr)
    x = fr - n_int
    cands = [(0, 1)]
    if x != 0:
        pm1, qm1 = 1, 0
        p, q = 0, 1
        a, b = x.denominator, x.numerator
        while True:
            t = a // b
            p2, q2 = t * p + pm1, t * q + qm1
            if q2 > Q:
                tmax = (Q - qm1) // q
                if tmax >= 1:
                    cands.append((tmax * p + pm1, tmax * q + qm1))
                break
            cands.append((p2, q2))
            pm1, qm1, p, q = p, q, p2, q2
            a, b = b, a - t * b
            if b == 0:
                break
    best = None
    for pc, qc in cands:
        err = abs(x - Fraction(pc, qc))
        if err * qc * Q <= 1:
            key = (err, qc)
            if best is None or key < best[0]:
                best = (key, pc, qc)
    assert best is not None  # the last convergent always qualifies
    (err, _), pc, qc = best
    return pc + n_int * qc, qc, float(err)


def classify_arc(alpha: float, W: float, Q1: float) -> ArcLabel:
    """Label alpha major or minor: its denominator q against the cutoff W,
    after rational approximation at quality Q1."""
    if W < 1 or Q1 <= W:
        raise ValidationError("need W >= 1 and Q1 > W")
    frac = float(alpha) % 1.0
    a, q, err = dirichlet_approx(frac, int(Q1))
    klass = "major" if q <= W else "minor"
    return ArcLabel(frac, a, q, err, klass, float(W), float(Q1))


def major_arc_measure(W: float, Q1: float) -> float:
    """Formula value sum_{q<=W} phi(q) * 2/(q*Q1) of the major-arc measure."""
    total = 0.0
    for q in range(1, int(W) + 1):
        phi = sum(1 for a in range(1, q + 1) if math.gcd(a, q) == 1)
        total += phi * 2 / (q * Q1)
    return total


def major_arc_measure_exact(W: float, Q1: float) -> float:
    """Measure of the union of arcs |alpha - a/q| <= 1/(q*Q1) inside [0, 1),
    with wraparound at 1, by direct interval merging."""
    intervals = []
    for q in range(1, int(W) + 1):
        for a in range(q + 1):
            if math.gcd(a, q) != 1:
                continue
            c = a / q
            r = 1 / (q * Q1)
            intervals.append((c - r, c + r))
    clipped = []
    for lo, hi in intervals:
        clipped.append((max(lo, 0.0), min(hi, 1.0)))
        if lo < 0:
            clipped.append((lo + 1, 1.0))
        if hi > 1:
            clipped.append((0.0, hi - 1))
    clipped.sort()
    total = 0.0
    cur_lo, cur_hi = None, None
    for lo, hi in clipped:
        if hi <= lo:
            continue
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


@dataclass(frozen=True)
class SupScanResult:
    alpha: float
    value: float
    label: ArcLabel
    candidates: int


def farey_fractions(q_max: int) -> np.ndarray:
    """All reduced fractions a/q in [0, 1) with q <= q_max, ascending."""
    vals = {0.0}
    for q in range(1, q_max + 1):
        for a in range(1, q):
            if math.gcd(a, q) == 1:
                vals.add(a / q)
    return np.array(sorted(vals))


def sup_scan(table: sieves.ArithmeticTable, X: int, H: float, q_max: int,
             grid_size: int, W: float | None = None,
             Q1: float | None = None) -> SupScanResult:
    """Maximize the Fourier integral over Farey fractions (q <= q_max) united
    with a uniform grid. The result is a certified lower bound for the true
    supremum over alpha, never an upper bound; ties break to the smaller
    alpha.
    """
    if q_max < 1 or grid_size < 1:
        raise ValidationError("q_max and grid_size must be >= 1")
    cands = np.unique(np.concatenate((farey_fractions(q_max),
                                      np.arange(grid_size) / grid_size)))
    best_alpha, best_val = 0.0, -1.0
    for alpha in cands:
        v = fourier_integral(table, X, H, float(alpha))
        if v > best_val:
            best_alpha, best_val = float(alpha), v
    W = float(W if W is not None else q_max)
    if Q1 is None:
        Q1 = float(max(grid_size, q_max * q_max + 1, int(W) + 2))
    label = classify_arc(best_alpha, W, Q1)
    return SupScanResult(best_alpha, best_val, label, len(cands))


@dataclass(frozen=True)
class VinogradovResult:
    value: float
    bound: float
    ratio: float
    a: int
    q: int


def vinogradov_sum(alpha: float, H: float, P: int, a: int | None = None,
                   q: int | None = None, approx_limit: int | None = None) -> VinogradovResult:
    """value = sum_{1<=n<=P} min(H/n, 1/||n alpha||), against the reference
    bound H/q + H/P + (P+q) log(2q).

    When ||n alpha|| = 0 the summand is H/n (the min's other branch). The
    denominator q defaults to the rational approximation of alpha at quality
    P, which always satisfies |alpha - a/q| <= 1/q^2.
    """
    if H <= 1 or P <= 1:
        raise ValidationError("need H > 1 and P > 1")
    if q is None:
        a, q, _ = dirichlet_approx(alpha, approx_limit or max(2, int(P)))
    ph = unit_phases(1, int(P), alpha)
    dist = np.minimum(ph, 1.0 - ph)
    n = np.arange(1, int(P) + 1, dtype=np.float64)
    hn = H / n
    with np.errstate(divide="ignore"):
        inv = np.where(dist > 0, 1.0 / np.where(dist > 0, dist, 1.0), np.inf)
    value = float(np.minimum(hn, inv).sum())
    bound = H / q + H / P + (P + q) * math.log(2 * q)
    return VinogradovResult(value, bound, value / bound, int(a), int(q))


@dataclass(frozen=True)
class DirichletPoly:
    """Finite Dirichlet polynomial: coefficients a_n on an integer support."""

    support: np.ndarray        # ascending distinct integers >= 1
    coeffs: np.ndarray         # complex, same length
    tag: str = ""

    def __post_init__(self):
        s = np.asarray(self.support, dtype=np.int64)
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if len(s) != len(c):
            raise ValidationError("support and coefficients must align")
        if len(s) and (s[0] < 1 or np.any(np.diff(s) <= 0)):
            raise ValidationError("support must be ascending distinct integers >= 1")
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "coeffs", c)
        s.setflags(write=False)
        c.setflags(write=False)

    def sum_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def _band_integral(support, coeffs, T0, T, chunk=2048, max_pairs=1 << 27):
    """Exact integral of |D(it)|^2 over T0 <= |t| <= T via the pair formula:
    2(T - T0) sum |a_n|^2 + sum_{m<n} 4 Re(a_m conj(a_n)) (sin(T L) - sin(T0 L))/L
    with L = log(n/m)."""
    N = len(support)
    if N * (N - 1) // 2 > max_pairs:
        raise BudgetError(f"{N} support points need {N*(N-1)//2} pairs, over {max_pairs}; "
                          "raise max_pairs explicitly for a long run")
    logs = np.log(support.astype(np.float64))
    s2 = float(np.sum(np.abs(coeffs) ** 2))
    off = 0.0
    for i0 in range(0, N, chunk):
        i1 = min(i0 + chunk, N)
        dL = logs[None, i0:] - logs[i0:i1, None]
        w = coeffs[i0:i1, None] * np.conj(coeffs[None, i0:])
        rows = np.arange(i1 - i0)[:, None]
        cols = np.arange(i0, N)[None, :] - i0
        upper = cols > rows
        dLu = np.where(upper, dL, 1.0)
        kern = (np.sin(T * dLu) - np.sin(T0 * dLu)) / dLu
        off += float(np.sum(np.where(upper, 4.0 * w.real * kern, 0.0)))
    return 2.0 * (T - T0) * s2 + off


def mean_value_exact(poly: DirichletPoly, T: float, max_pairs: int = 1 << 27) -> float:
    """Exact closed form of the mean value integral over t in [-T, T] of
    |D(it)|^2: 2T sum |a_n|^2 plus the pairwise sine kernel."""
    if T < 0:
        raise ValidationError("T must be >= 0")
    return _band_integral(poly.support, poly.coeffs, 0.0, T, max_pairs=max_pairs)


def mean_value_band(poly: DirichletPoly, T0: float, T: float,
                    max_pairs: int = 1 << 27) -> float:
    """Exact integral of |D(it)|^2 over the symmetric band T0 <= |t| <= T."""
    if not (0 <= T0 <= T):
        raise ValidationError("need 0 <= T0 <= T")
    return _band_integral(poly.support, poly.coeffs, T0, T, max_pairs=max_pairs)


def mean_value_quadrature(poly: DirichletPoly, T0: float, T: float,
                          rel_tol: float = 1e-9, max_doublings: int = 12) -> float:
    """Adaptive Gauss-Legendre quadrature of |D(it)|^2 over T0 <= |t| <= T.

    Cross-check for the closed form; panels halve until the value is stable
    to rel_tol.
    """
    logs = np.log(poly.support.astype(np.float64))
    span = float(logs.max() - logs.min()) if len(logs) > 1 else 0.0
    width = min(1.0, 2.0 / span) if span > 0 else (T - T0 if T > T0 else 1.0)
    nodes, weights = np.polynomial.legendre.leggauss(12)

    def eval_at(ts):
        out = np.empty(len(ts))
        for c0 in range(0, len(ts), 4096):
            tt = ts[c0:c0 + 4096]
            E = np.exp(-1j * np.outer(tt, logs))
            D = E @ poly.coeffs
            out[c0:c0 + 4096] = np.abs(D) ** 2
        return out

    def integrate(n_panels):
        edges = np.linspace(T0, T, n_panels + 1)
        mids = (edges[1:] + edges[:-1]) / 2
        half = (edges[1:] - edges[:-1]) / 2
        ts = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
        vals = eval_at(ts) + eval_at(-ts)
        return float(np.sum(vals.reshape(-1, len(nodes)) * weights[None, :] * half[:, None]))

    n_panels = max(4, int((T - T0) / width) + 1)
    prev = integrate(n_panels)
    for _ in range(max_doublings):
        n_panels *= 2
        cur = integrate(n_panels)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev


@dataclass(frozen=True)
class ProfileReport:
    value: float               # exact band integral of |G(1+it)|^2
    trivial_bound: float       # mean-value bound with rigorous pair slack
    target_shape: float        # (Q1 T / Y + 1) (log X)^(-B)
    support_size: int
    T0: float
    T: float
    B: float
    quadrature_value: float | None = None


def twisted_mean_value_profile(params: typical.TypicalParams, d: int,
                               chi: DirichletCharacter, Y: int,
                               T: float, T0: float | None = None,
                               B: float | None = None,
                               max_pairs: int = 1 << 27,
                               quadrature_check: bool = False) -> ProfileReport:
    """Mean value profile of the restricted Liouville polynomial
    G(1+it) = sum over n in [Y, 2Y] inside the d-refined typical set of
    lambda(n) chi(n) / n^(1+it), integrated over the band T0 <= |t| <= T.

    The band is symmetric in t (equivalently, it averages chi with its
    conjugate). Defaults: B = 11 A, T0 = (log X)^(2B) capped at T/2. The
    trivial bound adds the rigorous mean-value pair slack 4 pi (n_max + 1)
    to the diagonal term, so value <= trivial_bound always holds.
    """
    if Y < 2 or d < 1:
        raise ValidationError("need Y >= 2 and d >= 1")
    if d >= params.P1:
        raise ValidationError(f"d={d} must be < P1={params.P1}")
    lx = math.log(params.X)
    B = float(B if B is not None else 11 * params.A)
    if T0 is None:
        T0 = min(lx ** (2 * B), T / 2)
    if not (0 <= T0 <= T):
        raise ValidationError("need 0 <= T0 <= T")
    bits = typical.build_membership_table(params, d, Y, 2 * Y + 1).bits
    n = np.arange(Y, 2 * Y + 1, dtype=np.int64)
    lam = sieves.table("liouville", Y, 2 * Y + 1).values.astype(np.float64)
    chiv = chi.values_at(n)
    coeffs = np.where(bits, lam * chiv / n, 0)
    keep = np.abs(coeffs) > 0
    poly = DirichletPoly(n[keep], coeffs[keep], tag=f"restricted lambda*chi, d={d}")
    value = mean_value_band(poly, T0, T, max_pairs=max_pairs) if keep.any() else 0.0
    s2 = poly.sum_sq()
    n_max = int(n[keep].max()) if keep.any() else 0
    trivial = 2 * (T - T0) * s2 + 4 * math.pi * (n_max + 1) * s2
    target = (params.Q1 * T / Y + 1) * lx ** (-B)
    quad = None
    if quadrature_check and keep.any():
        quad = mean_value_quadrature(poly, T0, T, rel_tol=1e-8)
    return ProfileReport(value, trivial, target, int(keep.sum()), float(T0), float(T), B, quad)


@dataclass(frozen=True)
class DecayCurve:
    t_grid: np.ndarray
    magnitude: np.ndarray
    fitted_scale: float
    reference: np.ndarray      # fitted_scale * log(Q) / (1 + |t|)


def prime_poly_decay(P: float, Q: float, chi: DirichletCharacter,
                     t_grid: np.ndarray | list[float]) -> DecayCurve:
    """|sum over primes p in [P, Q] of chi(p) p^(-1-it)| on a t-grid, with a
    least-squares scale fit against the reference shape log(Q)/(1+|t|).
    Diagnostic only: nothing is asserted about the fit.
    """
    ts = np.asarray(t_grid, dtype=np.float64)
    primes = sieves.primes_upto(int(math.floor(Q))) if Q >= P else np.empty(0, np.int64)
    primes = primes[primes >= P]
    if primes.size == 0:
        zero = np.zeros(len(ts))
        return DecayCurve(ts, zero, 0.0, zero)
    logs = np.log(primes.astype(np.float64))
    w = chi.values_at(primes) / primes.astype(np.float64)
    mags = np.empty(len(ts))
    for i, t in enumerate(ts):
        mags[i] = abs(np.sum(w * np.exp(-1j * t * logs)))
    ref_shape = math.log(max(Q, 2.0)) / (1.0 + np.abs(ts))
    denom = float(np.sum(ref_shape ** 2))
    c = float(np.sum(mags * ref_shape) / denom) if denom > 0 else 0.0
    return DecayCurve(ts, mags, c, c * ref_shape)


@dataclass(frozen=True)
class DecouplingResult:
    lhs: float
    rhs: float
    ratio: float
    constant: float
    within_constant: bool
    scan_alpha: float


def fourier_decoupling_check(f_id: str | sieves.ArithmeticTable,
                             g_id: str | sieves.ArithmeticTable, X: int, H: int,
                             q_max: int = 8, grid_size: int = 32,
                             constant: float | None = None) -> DecouplingResult:
    """Both sides of the correlation-decoupling inequality at desk scale:

    lhs = sum_{|h|<=H} |sum_{n<=X} f(n) g(n+h)|^2
    rhs = (sum_{n<=X+2H} |f(n)|^2) * scan-max over alpha of
          integral_0^X |sum_{x<=n<=x+2H} g(n) e(n alpha)| dx

    Everything is computed directly (window length 2H on the right). The
    scan maximum is a lower bound for the true supremum, so the pinned
    constant absorbs both the inequality's loss and the scan gap.
    """
    from .calibration import DECOUPLING_CONSTANT
    if X > 10 ** 4 or H > 64:
        raise BudgetError("direct decoupling check supports X <= 1e4, H <= 64")
    c = float(constant if constant is not None else DECOUPLING_CONSTANT)

    def as_table(spec):
        if isinstance(spec, sieves.ArithmeticTable):
            if spec.lo > 1 or spec.hi < X + 2 * H + 1:
                raise ValidationError("supplied table must cover [1, X + 2H]")
            return spec
        return sieves.table(spec, 1, X + 2 * H + 1)

    f_tab = as_table(f_id)
    g_tab = as_table(g_id)
    f = f_tab.values[:X].astype(np.float64)
    gw = g_tab.window(1 - H, X + H + 1)
    lhs = 0.0
    for h in range(-H, H + 1):
        lhs += float(np.dot(f, gw[h + H:h + H + X])) ** 2
    F = float(np.sum(f_tab.values.astype(np.float64) ** 2))
    scan = sup_scan(g_tab, X, 2 * H, q_max, grid_size)
    rhs = F * scan.value
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return DecouplingResult(lhs, rhs, ratio, c, lhs <= c * rhs, scan.alpha)


@dataclass(frozen=True)
class VarianceReport:
    mean_square: float         # (1/Y) integral over [Y, 2Y] of |S(x)/h|^2 dx
    reference: float           # (log X)^(-10A)
    h: int
    Y: int
    support_size: int


def short_interval_variance(params: typical.TypicalParams, d: int,
                            chi: DirichletCharacter, h: int, Y: int) -> VarianceReport:
    """Average square of the short-interval sums (1/h) sum_{x<=m<=x+h} of
    lambda(m) chi(m) over the d-refined typical set, for x in [Y, 2Y].

    Reported against the reference decay (log X)^(-10A); never asserted.
    """
    if h < 1 or Y < 2:
        raise ValidationError("need h >= 1 and Y >= 2")
    hi = 2 * Y + h + 1
    bits = typical.build_membership_table(params, d, Y + 1, hi).bits
    n = np.arange(Y + 1, hi, dtype=np.int64)
    lam = sieves.table("liouville", Y + 1, hi).values.astype(np.float64)
    vals = np.where(bits, lam * chi.values_at(n), 0)
    cs = np.concatenate(([0j], np.cumsum(vals)))
    m0 = np.arange(Y, 2 * Y)
    w = cs[m0 - Y + h] - cs[m0 - Y]
    mean_sq = float(np.mean(np.abs(w / h) ** 2))
    return VarianceReport(mean_sq, math.log(params.X) ** (-10 * params.A),
                          h, Y, int(bits.sum()))
