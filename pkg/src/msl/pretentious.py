"""Pretentious distance between bounded multiplicative functions, and the
distance-to-twisted-characters infimum.

Only values at primes enter the distance, so a function is specified by a
rule p -> f(p) with |f(p)| <= 1 plus a completion policy for prime powers
(which other modules may consume). The infimum over the continuous twist
parameter t is bracketed, never claimed exact: a grid minimum with local
golden-section refinement gives the upper end, and a Lipschitz certificate
(|d/dt of the squared distance| <= sum of log p / p) gives the lower end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import sieves
from .characters import DirichletCharacter, character_group
from .errors import BudgetError, ValidationError

DEFAULT_GRID_POINTS = 1 << 14
_GOLDEN = (math.sqrt(5) - 1) / 2
# grid points times characters, the scan budget
DEFAULT_MAX_CELLS = 1 << 24


@dataclass(frozen=True)
class MultFunctionSpec:
    """A bounded multiplicative function, known through its prime values."""

    name: str
    prime_value: Callable[[int], complex]
    completion: str = "completely-multiplicative"  # or "mobius-like"

    def values_on(self, primes: np.ndarray) -> np.ndarray:
        vals = np.array([complex(self.prime_value(int(p))) for p in primes])
        if np.any(np.abs(vals) > 1 + 1e-12):
            raise ValidationError(f"{self.name}: |f(p)| <= 1 violated")
        return vals


def mobius_spec() -> MultFunctionSpec:
    return MultFunctionSpec("mobius", lambda p: -1.0, "mobius-like")


def liouville_spec() -> MultFunctionSpec:
    return MultFunctionSpec("liouville", lambda p: -1.0)


def one_spec() -> MultFunctionSpec:
    return MultFunctionSpec("one", lambda p: 1.0)


def power_twist_spec(t0: float) -> MultFunctionSpec:
    return MultFunctionSpec(f"n^(i{t0:g})", lambda p: p ** complex(0, t0))


def character_spec(chi: DirichletCharacter) -> MultFunctionSpec:
    return MultFunctionSpec(f"chi mod {chi.q} #{chi.index}", lambda p: chi(p))


def twisted_character_spec(chi: DirichletCharacter, t: float) -> MultFunctionSpec:
    return MultFunctionSpec(f"n^(i{t:g}) chi mod {chi.q} #{chi.index}",
                            lambda p: chi(p) * p ** complex(0, t))


def distance(f: MultFunctionSpec, g: MultFunctionSpec, X: int) -> float:
    """Pretentious distance: sqrt(sum over p <= X of (1 - Re f(p) conj(g(p)))/p).

    Summed ascending with compensated accumulation; each term is >= 0 since
    both functions are bounded by 1 on primes.
    """
    if X < 2:
        return 0.0
    primes = sieves.primes_upto(X)
    fv = f.values_on(primes)
    gv = g.values_on(primes)
    terms = (1.0 - (fv * np.conj(gv)).real) / primes
    return math.sqrt(max(math.fsum(terms.tolist()), 0.0))


@dataclass(frozen=True)
class PretendResult:
    value: float
    witness_t: float
    witness_chi: tuple[int, int]   # (modulus, index within character_group)
    bracket: tuple[float, float]
    grid_meta: dict


def _grid_scan(zz_list: list[np.ndarray], base: float, logs: np.ndarray,
               ts: np.ndarray, chunk: int = 2048) -> list[tuple[float, float]]:
    """Per twisted weight vector zz = f conj(chi)/p, the grid minimum of
    D^2(t) = base - Re sum_p zz_p e^{-i t log p} and its argmin.

    The phase matrix is shared across characters, which is where the scan
    cost lives.
    """
    best = [(math.inf, 0.0)] * len(zz_list)
    for c0 in range(0, len(ts), chunk):
        tt = ts[c0:c0 + chunk]
        E = np.exp(-1j * np.outer(tt, logs))
        for k, zz in enumerate(zz_list):
            curve = base - (E @ zz).real
            i = int(np.argmin(curve))
            if curve[i] < best[k][0]:
                best[k] = (float(curve[i]), float(tt[i]))
    return best


def pretend_measure(f: MultFunctionSpec, X: int, Q: int,
                    t_resolution: float | None = None,
                    grid_points: int = DEFAULT_GRID_POINTS,
                    refine_iters: int = 60,
                    max_cells: int = DEFAULT_MAX_CELLS) -> PretendResult:
    """Bracketed infimum over |t| <= X and characters chi of modulus q <= Q
    of the squared pretentious distance from f to n -> n^{it} chi(n).

    The reported value is the best point found (grid plus golden-section
    refinement), hence an upper end; the lower end subtracts the Lipschitz
    slack (sum of log p / p) times half the grid spacing, clamped at 0.
    """
    if Q < 1 or X < 2:
        raise ValidationError("need Q >= 1 and X >= 2")
    if t_resolution is not None:
        if t_resolution <= 0:
            raise ValidationError("t_resolution must be > 0")
        grid_points = max(2, int(math.ceil(2 * X / t_resolution)) + 1)
    chars = [(q, chi) for q in range(1, Q + 1) for chi in character_group(q)]
    if grid_points * len(chars) > max_cells:
        raise BudgetError(f"{grid_points} grid points x {len(chars)} characters "
                          f"exceeds the {max_cells}-cell budget")
    primes = sieves.primes_upto(X)
    fv = f.values_on(primes)
    inv_p = 1.0 / primes
    logs = np.log(primes.astype(np.float64))
    lipschitz = float(np.sum(logs * inv_p))
    base = float(np.sum(inv_p))
    ts = np.linspace(-X, X, grid_points)
    spacing = ts[1] - ts[0] if grid_points > 1 else 2.0 * X

    zz_list = [fv * np.conj(chi.values_at(primes)) * inv_p for _, chi in chars]
    mins = _grid_scan(zz_list, base, logs, ts)
    k_best = min(range(len(chars)), key=lambda k: (mins[k][0], k))
    grid_min, t_star = mins[k_best]
    chi_ref = (chars[k_best][0], chars[k_best][1].index)

    # local golden-section refinement around the best grid point
    zz = zz_list[k_best]

    def dsq(t: float) -> float:
        return base - float((np.exp(-1j * t * logs) @ zz).real)

    lo, hi = max(t_star - spacing, -X), min(t_star + spacing, X)
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    dmid = a + _GOLDEN * (b - a)
    fc, fd = dsq(c), dsq(dmid)
    for _ in range(refine_iters):
        if fc < fd:
            b, dmid, fd = dmid, c, fc
            c = b - _GOLDEN * (b - a)
            fc = dsq(c)
        else:
            a, c, fc = c, dmid, fd
            dmid = a + _GOLDEN * (b - a)
            fd = dsq(dmid)
    value = min(grid_min, fc, fd)
    lower = max(0.0, grid_min - lipschitz * spacing / 2)
    witness_t = t_star if value == grid_min else (c if fc <= fd else dmid)
    return PretendResult(value, float(witness_t), chi_ref, (lower, value),
                         {"grid_points": grid_points, "spacing": float(spacing),
                          "lipschitz": lipschitz, "characters": len(chars),
                          "refine_iters": refine_iters})


@dataclass(frozen=True)
class VkDiagnostic:
    value: float
    reference: float           # (1/3 - epsilon) log log X
    lower_prime: float
    n_primes: int


def vk_diagnostic(X: int, epsilon: float, chi: DirichletCharacter, t: float) -> VkDiagnostic:
    """The zero-free-region flavored sum over exp((log X)^(2/3+eps)) <= p <= X
    of (1 + Re chi(p) p^{it}) / p, reported next to (1/3 - eps) log log X.

    Both numbers are returned without assertion: at desk scale log log X is
    about 3, which makes the comparison purely indicative.
    """
    if X < 16:
        raise ValidationError("X must be >= 16")
    lower = math.exp(math.log(X) ** (2 / 3 + epsilon))
    reference = (1 / 3 - epsilon) * math.log(math.log(X))
    if lower > X:
        return VkDiagnostic(0.0, reference, lower, 0)
    primes = sieves.primes_upto(X)
    primes = primes[primes >= lower]
    if primes.size == 0:
        return VkDiagnostic(0.0, reference, lower, 0)
    chiv = chi.values_at(primes)
    ph = np.exp(1j * t * np.log(primes.astype(np.float64)))
    terms = (1.0 + (chiv * ph).real) / primes
    return VkDiagnostic(math.fsum(terms.tolist()), reference, lower, int(primes.size))


def m_cutoff_scale(X: int, H: int, rho: float) -> float:
    """The X^2 / H^(2-rho) scale at which non-pretentiousness should be
    measured for window length H; rho in (0, 1/8) is a free knob."""
    if not (0 < rho < 1 / 8):
        raise ValidationError("rho must lie in (0, 1/8)")
    return X ** 2 / H ** (2 - rho)
