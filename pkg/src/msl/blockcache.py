"""On-disk cache of sieved blocks.

File layout: an 8-byte magic "MSLBLOCK", then a little-endian header
(format version u32, function id u32, k u32, lo u64, hi u64, payload
checksum u64), then the payload of fixed-width little-endian values:
i8 for mobius/liouville/prime indicator, u32 for spf, f64 for the
von Mangoldt weights, u64 for divisor counts.

Reads touch the file mtime so eviction can run least-recently-used.
A corrupt or stale block is reported via CacheError; cached_table logs
the event and falls back to resieving.
"""

from __future__ import annotations

import hashlib
import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import sieves
from .errors import CacheError, ValidationError

log = logging.getLogger("msl.cache")

MAGIC = b"MSLBLOCK"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sIIIQQQ")

_FUNCTION_CODES = {
    "mobius": 1,
    "liouville": 2,
    "von_mangoldt": 3,
    "divisor": 4,
    "spf": 5,
    "prime_indicator": 6,
}

_PAYLOAD_DTYPES = {
    "mobius": "<i1",
    "liouville": "<i1",
    "prime_indicator": "<i1",
    "von_mangoldt": "<f8",
    "spf": "<u4",
    "divisor": "<u8",
}

_MEMORY_DTYPES = {
    "mobius": np.int8,
    "liouville": np.int8,
    "prime_indicator": np.int8,
    "von_mangoldt": np.float64,
    "spf": np.int64,
    "divisor": np.int64,
}


def _checksum(payload: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def block_path(cache_dir: Path | str, function_id: str, lo: int, hi: int) -> Path:
    return Path(cache_dir) / f"{function_id}.{lo}-{hi}.blk"


def write_block(cache_dir: Path | str, tab: sieves.ArithmeticTable) -> Path:
    kind, k = sieves.parse_function_id(tab.function_id)
    if kind == "spf" and tab.hi > 1 << 32:
        raise ValidationError("spf cache payload is u32; range exceeds 2^32")
    payload = np.ascontiguousarray(tab.values).astype(_PAYLOAD_DTYPES[kind]).tobytes()
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, _FUNCTION_CODES[kind], k or 0,
                          tab.lo, tab.hi, _checksum(payload))
    path = block_path(cache_dir, tab.function_id, tab.lo, tab.hi)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(header + payload)
    tmp.replace(path)
    return path


def read_block(cache_dir: Path | str, function_id: str, lo: int, hi: int) -> sieves.ArithmeticTable | None:
    """Load a cached block, or None if absent. Raises CacheError on corruption."""
    kind, k = sieves.parse_function_id(function_id)
    path = block_path(cache_dir, function_id, lo, hi)
    if not path.exists():
        return None
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise CacheError(f"{path}: truncated header")
    magic, version, code, kk, flo, fhi, csum = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CacheError(f"{path}: bad magic")
    if version != FORMAT_VERSION:
        raise CacheError(f"{path}: format version {version} != {FORMAT_VERSION}")
    if (code, kk or None, flo, fhi) != (_FUNCTION_CODES[kind], k, lo, hi):
        raise CacheError(f"{path}: header does not match requested block")
    payload = raw[_HEADER.size:]
    if _checksum(payload) != csum:
        raise CacheError(f"{path}: checksum mismatch")
    vals = np.frombuffer(payload, dtype=_PAYLOAD_DTYPES[kind]).astype(_MEMORY_DTYPES[kind])
    if len(vals) != hi - lo:
        raise CacheError(f"{path}: payload length {len(vals)} != {hi - lo}")
    path.touch()  # refresh mtime: this is the LRU clock
    return sieves.ArithmeticTable(function_id, lo, hi, vals)


def cached_table(function_id: str, lo: int, hi: int, cache_dir: Path | str,
                 block_size: int = sieves.DEFAULT_BLOCK_SIZE) -> sieves.ArithmeticTable:
    """Like sieves.table, but backed by the block cache.

    Blocks are keyed by (function id, range); a checksum failure triggers a
    logged resieve rather than an error.
    """
    if not (1 <= lo < hi):
        raise ValidationError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    parts = []
    for b in range(lo, hi, block_size):
        e = min(b + block_size, hi)
        tab = None
        try:
            tab = read_block(cache_dir, function_id, b, e)
        except CacheError as exc:
            log.warning("cache block rejected, resieving: %s", exc)
        if tab is None:
            tab = sieves.sieve_block(function_id, b, e, budget=block_size)
            write_block(cache_dir, tab)
        parts.append(tab.values)
    return sieves.ArithmeticTable(function_id, lo, hi, np.concatenate(parts))


@dataclass(frozen=True)
class GcReport:
    evicted: tuple[str, ...]
    kept: tuple[str, ...]
    bytes_before: int
    bytes_after: int


def cache_gc(cache_dir: Path | str, max_bytes: int,
             pinned: frozenset[str] | set[str] = frozenset()) -> GcReport:
    """Evict least-recently-used blocks until the cache fits max_bytes.

    `pinned` names files (by basename) that must survive, e.g. blocks a
    running manifest still references.
    """
    cache_dir = Path(cache_dir)
    if not cache_dir.exists():
        raise CacheError(f"cache dir {cache_dir} does not exist")
    entries = sorted(cache_dir.glob("*.blk"), key=lambda p: (p.stat().st_mtime, p.name))
    total = sum(p.stat().st_size for p in entries)
    before = total
    evicted, kept = [], []
    for p in entries:
        if total <= max_bytes:
            kept.append(p.name)
            continue
        if p.name in pinned:
            kept.append(p.name)
            continue
        size = p.stat().st_size
        try:
            p.unlink()
        except OSError as exc:
            raise CacheError(f"could not evict {p}: {exc}") from exc
        evicted.append(p.name)
        total -= size
    return GcReport(tuple(evicted), tuple(kept), before, total)
