"""Dirichlet characters mod q, built from the cyclic structure of (Z/qZ)*.

The unit group is decomposed into cyclic factors: one per odd prime power
(generated by the smallest primitive root, lifted so it acts trivially on
the other factors) and, for 2^k with k >= 3, the two-generator pair
(-1, 5). A character is an exponent vector against those generators; its
value at n is the root of unity zeta_e^(t(n)) where e is the group exponent
and t(n) an integer index, so values stay exact until rendered as complex
numbers. Generator choices are deterministic, which makes character indices
reproducible across runs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ValidationError

MAX_MODULUS = 10 ** 6


def _factorize(q: int) -> list[tuple[int, int]]:
    out = []
    m = q
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def _smallest_primitive_root(p: int, e: int) -> int:
    """Smallest primitive root mod p^e for odd p."""
    phi_p = p - 1
    qs = [f for f, _ in _factorize(phi_p)]
    g = 2
    while True:
        if all(pow(g, phi_p // f, p) != 1 for f in qs):
            break
        g += 1
    if e == 1:
        return g
    # g generates mod p; it lifts to p^e unless g^(p-1) = 1 mod p^2.
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _CyclicFactor:
    modulus: int       # the prime-power piece this factor lives in
    order: int
    generator: int     # generator mod `modulus` (already CRT-local)
    dlog: np.ndarray   # residue mod `modulus` -> discrete log, -1 if not coprime


def _cyclic_factors(q: int) -> list[_CyclicFactor]:
    factors: list[_CyclicFactor] = []
    for p, e in _factorize(q):
        pe = p ** e
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                gens = [(3, 2)]
            else:
                gens = [(pe - 1, 2), (5, pe // 4)]
            for g, order in gens:
                dlog = np.full(pe, -1, dtype=np.int64)
                factors.append(_CyclicFactor(pe, order, g, dlog))
            # fill the two 2-power tables jointly: n = (-1)^i * 5^j
            if e >= 3:
                d_sign, d_five = factors[-2].dlog, factors[-1].dlog
                x = 1
                for j in range(pe // 4):
                    d_sign[x], d_five[x] = 0, j
                    d_sign[pe - x], d_five[pe - x] = 1, j
                    x = x * 5 % pe
            else:
                d = factors[-1].dlog
                d[1], d[3] = 0, 1
        else:
            g = _smallest_primitive_root(p, e)
            phi = pe - pe // p
            dlog = np.full(pe, -1, dtype=np.int64)
            x = 1
            for j in range(phi):
                dlog[x] = j
                x = x * g % pe
            factors.append(_CyclicFactor(pe, phi, g, dlog))
    return factors


class CharacterGroup:
    """Shared structure for all characters mod q."""

    def __init__(self, q: int):
        if not (1 <= q <= MAX_MODULUS):
            raise ValidationError(f"modulus {q} outside [1, {MAX_MODULUS}]")
        self.q = q
        self.factors = _cyclic_factors(q)
        self.orders = tuple(f.order for f in self.factors)
        self.exponent = math.lcm(*self.orders) if self.orders else 1
        self.phi = math.prod(self.orders) if self.orders else 1

    def value_index(self, exponents: tuple[int, ...], n: int) -> int | None:
        """Index t with chi(n) = zeta_exponent^t, or None when gcd(n, q) > 1."""
        r = n % self.q
        if self.q == 1:
            return 0
        if math.gcd(r, self.q) != 1:
            return None
        t = 0
        for c, f in zip(exponents, self.factors):
            d = int(f.dlog[r % f.modulus])
            t += c * (self.exponent // f.order) * d
        return t % self.exponent

    def index_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-factor dlogs for all residues 0..q-1 plus the coprime mask."""
        q = self.q
        res = np.arange(q, dtype=np.int64)
        # Coprimality is tested against q itself: prime parts with a trivial
        # unit group (2^1) contribute no cyclic factor but still constrain it.
        mask = np.gcd(res, q) == 1
        if not self.factors:
            return np.zeros((0, q), dtype=np.int64), mask
        rows = np.stack([f.dlog[res % f.modulus] for f in self.factors])
        return rows, mask


@dataclass
class DirichletCharacter:
    """One character: an exponent vector over the group's cyclic factors."""

    group: CharacterGroup
    exponent_vector: tuple[int, ...]
    index: int  # position within character_group(q)
    _table: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.group.q

    @property
    def is_principal(self) -> bool:
        return all(c == 0 for c in self.exponent_vector)

    def order(self) -> int:
        if not self.exponent_vector:
            return 1
        return math.lcm(*(s // math.gcd(s, c) for c, s in
                          zip(self.exponent_vector, self.group.orders)))

    def value_index(self, n: int) -> int | None:
        return self.group.value_index(self.exponent_vector, n)

    def __call__(self, n: int) -> complex:
        t = self.value_index(n)
        if t is None:
            return 0j
        e = self.group.exponent
        return complex(math.cos(2 * math.pi * t / e), math.sin(2 * math.pi * t / e))

    def value_table(self) -> np.ndarray:
        """chi(n) for n = 0..q-1, cached after the first call."""
        if self._table is None:
            rows, mask = self.group.index_matrix()
            e = self.group.exponent
            if rows.shape[0]:
                weights = np.array([c * (e // s) for c, s in
                                    zip(self.exponent_vector, self.group.orders)],
                                   dtype=np.int64)
                t = (weights @ np.where(rows < 0, 0, rows)) % e
            else:
                t = np.zeros(self.q, dtype=np.int64)
            vals = np.exp(2j * np.pi * t / e)
            vals[~mask] = 0
            table = vals
            table.setflags(write=False)
            self._table = table
        return self._table

    def values_at(self, n: np.ndarray | int) -> np.ndarray:
        return self.value_table()[np.asarray(n) % self.q]


@lru_cache(maxsize=64)
def _group(q: int) -> CharacterGroup:
    return CharacterGroup(q)


def character_group(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, principal character first.

    Characters are ordered by their exponent vectors in row-major order, so
    indices are stable given the deterministic generator choice.
    """
    g = _group(q)
    out = []
    for i, vec in enumerate(itertools.product(*(range(s) for s in g.orders))):
        out.append(DirichletCharacter(g, tuple(vec), i))
    return out


def evaluate(chi: DirichletCharacter, n: int) -> complex:
    if n < 0:
        raise ValidationError("n must be >= 0")
    return chi(n)


@dataclass(frozen=True)
class OrthogonalityReport:
    q: int
    max_pair_deviation: float
    max_column_deviation: float

    @property
    def max_deviation(self) -> float:
        return max(self.max_pair_deviation, self.max_column_deviation)


def orthogonality_check(q: int, block: int = 64) -> OrthogonalityReport:
    """Verify the two character orthogonality identities numerically.

    Checks sum_chi chi(a) conj(chi(b)) = phi(q) [a = b mod q] over all
    coprime pairs, and that every nonprincipal character sums to zero over a
    full period. Row pairs are processed in blocks to keep memory flat.
    """
    if not (1 <= q <= 10 ** 4):
        raise ValidationError("orthogonality check supports q <= 10^4")
    chars = character_group(q)
    V = np.stack([c.value_table() for c in chars])  # phi(q) x q
    coprime = np.nonzero(np.abs(V[0]) > 0.5)[0]
    Vc = V[:, coprime]
    phi = len(chars)
    max_pair = 0.0
    for s in range(0, len(coprime), block):
        blk = Vc[:, s:s + block]
        G = blk.conj().T @ Vc  # block x phi(q) residues
        expect = np.zeros_like(G)
        expect[np.arange(G.shape[0]), s + np.arange(G.shape[0])] = phi
        max_pair = max(max_pair, float(np.abs(G - expect).max()))
    sums = V[1:].sum(axis=1) if phi > 1 else np.zeros(0)
    max_col = float(np.abs(sums).max()) if len(sums) else 0.0
    return OrthogonalityReport(q, max_pair, max_col)
