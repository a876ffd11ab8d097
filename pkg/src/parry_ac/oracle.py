"""Brute-force ground truth: sliding windows over a fixed-point prefix.

Nothing here touches the automaton machinery.  Relative Parikh vectors of
the windows ``u[j:j+n]`` are read off cumulative letter counts, one numpy
pass per window length.
"""

from __future__ import annotations

import enum
import itertools
import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _config
from .errors import ResourceLimit
from .substitution import ParrySubstitution, fixed_point_prefix

Vector = tuple[int, ...]


class Growth(enum.Enum):
    STABLE = "Stable"
    STILL_GROWING = "StillGrowing"


@dataclass(frozen=True)
class CEstimate:
    c: int
    status: Growth
    scan_len: int


def parikh(w: bytes, size: int) -> Vector:
    counts = [0] * size
    for x in w:
        counts[x] += 1
    return tuple(counts)


def rel_parikh(sub: ParrySubstitution, w: bytes) -> Vector:
    """Parikh vector of ``w`` minus that of the fixed-point prefix of the same length."""
    size = sub.size
    ref = parikh(fixed_point_prefix(sub, len(w)), size)
    return tuple(a - b for a, b in zip(parikh(w, size), ref))


_cum_lock = threading.Lock()
_cum_cache: dict[ParrySubstitution, np.ndarray] = {}


def _cumulative(sub: ParrySubstitution, length: int) -> np.ndarray:
    """Row i holds the Parikh vector of u[:i]; shape (length+1, A)."""
    with _cum_lock:
        cum = _cum_cache.get(sub)
        if cum is None or cum.shape[0] <= length:
            size = max(length, 2 * (cum.shape[0] - 1) if cum is not None else 0, 1 << 12)
            u = np.frombuffer(fixed_point_prefix(sub, size), dtype=np.uint8)
            onehot = np.zeros((size + 1, sub.size), dtype=np.int64)
            onehot[np.arange(1, size + 1), u] = 1
            cum = np.cumsum(onehot, axis=0)
            _cum_cache[sub] = cum
    return cum[: length + 1]


def _window_rels(cum: np.ndarray, n: int, start: int = 0) -> np.ndarray:
    """Relative Parikh vectors of every length-n window starting at index >= start."""
    return cum[start + n:] - cum[start : cum.shape[0] - n] - cum[n]


def _rel_rows(sub, n, scan_len, start):
    cum = _cumulative(sub, scan_len)
    if scan_len - n < start:
        raise ValueError(f"scan_len {scan_len} too short for windows of length {n}")
    return _window_rels(cum, n, start)


def _as_set(rows: np.ndarray) -> frozenset[Vector]:
    # pack each row into one integer key; far cheaper than np.unique(axis=0)
    if rows.shape[0] == 0:
        return frozenset()
    low = rows.min(axis=0)
    span = rows.max(axis=0) - low + 1
    keys = np.zeros(rows.shape[0], dtype=np.int64)
    for col in range(rows.shape[1]):
        keys = keys * span[col] + (rows[:, col] - low[col])
    _, first = np.unique(keys, return_index=True)
    return frozenset(map(tuple, rows[first].tolist()))


def prel_set(
    sub: ParrySubstitution,
    n: int,
    scan_len: int | None = None,
    *,
    stabilize: bool = True,
    start: int = 0,
    cap: int | None = None,
) -> frozenset[Vector]:
    """Relative Parikh vectors of the length-n factors.

    With ``stabilize`` (the default) the scanned prefix is doubled until the
    set is unchanged across two consecutive doublings.  ``start`` skips
    windows beginning before that index.
    """
    if n < 1:
        raise ValueError("n must be positive")
    cap = _config.max_prefix() if cap is None else cap
    length = scan_len if scan_len is not None else 8 * n + 256 + start
    if length < n + start:
        raise ValueError("scan_len must be at least n")
    if length > cap:
        raise ResourceLimit(f"scan length {length} exceeds cap {cap}")
    found = _as_set(_rel_rows(sub, n, length, start))
    if not stabilize:
        return found
    unchanged = 0
    while unchanged < 2:
        length *= 2
        if length > cap:
            raise ResourceLimit(f"relative Parikh set for n={n} not stable within {cap} letters")
        bigger = _as_set(_rel_rows(sub, n, length, start))
        unchanged = unchanged + 1 if bigger == found else 0
        found = bigger
    return found


def ac_bruteforce(sub: ParrySubstitution, n: int, **kwargs) -> int:
    return len(prel_set(sub, n, **kwargs))


def balance_bruteforce(sub: ParrySubstitution, n: int, **kwargs) -> int:
    """Largest sup-norm distance between two relative Parikh vectors of length n."""
    vectors = sorted(prel_set(sub, n, **kwargs))
    best = 0
    for v, w in itertools.combinations(vectors, 2):
        best = max(best, max(abs(a - b) for a, b in zip(v, w)))
    return best


def prel_table(sub: ParrySubstitution, ns: Sequence[int], **kwargs) -> dict[int, frozenset[Vector]]:
    return {n: prel_set(sub, n, **kwargs) for n in ns}


def _max_deviation(sub, length):
    cum = _cumulative(sub, length)
    best = 0
    for n in range(1, length // 2 + 1):
        rows = _window_rels(cum, n)
        best = max(best, int(np.abs(rows).max()))
    return best


def estimate_c(sub: ParrySubstitution, cap_len: int | None = None, start_len: int = 512) -> CEstimate:
    """Empirical balance bound: the largest |component| of any relative Parikh vector seen.

    A prefix of length ``s`` is scanned for every window length up to
    ``s/2``; ``s`` doubles until the maximum survives two doublings
    unchanged (``STABLE``) or ``cap_len`` is reached (``STILL_GROWING``).
    This is an estimate, not a proof of the minimal bound.
    """
    cap_len = _config.max_prefix() if cap_len is None else cap_len
    length = min(start_len, cap_len)
    c = _max_deviation(sub, length)
    unchanged = 0
    while unchanged < 2:
        if length * 2 > cap_len:
            return CEstimate(c, Growth.STILL_GROWING, length)
        length *= 2
        bigger = _max_deviation(sub, length)
        unchanged = unchanged + 1 if bigger == c else 0
        c = bigger
    return CEstimate(c, Growth.STABLE, length)
