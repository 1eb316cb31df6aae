"""(n, k)-universal binary families: every k-subset of positions sees all 2^k patterns.

Families are built by greedy set cover over the constraint universe
``{(S, pattern)}``: repeatedly take the candidate vector that realizes the
most still-missing patterns. Candidates are the full cube for small ``n``
and otherwise a pseudorandom pool seeded by ``(n, k)``, so the output is a
deterministic function of ``(n, k)``.
"""
from __future__ import annotations

import functools
import itertools
import math
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BinaryFamily",
    "build_universal_family",
    "verify_universal",
    "size_bound",
    "get_family",
    "format_family",
    "parse_family",
    "load_or_build",
]

MAX_K = 20
# cap on (#subsets x #candidates) held in memory during the greedy
_WORK_LIMIT = 20_000_000


@dataclass(frozen=True)
class BinaryFamily:
    n: int
    k: int
    functions: tuple  # tuples of 0/1 of length n

    def __len__(self) -> int:
        return len(self.functions)

    def masks(self) -> list[int]:
        """Each function as an int with bit i set iff f(i) = 1."""
        return [sum(1 << i for i, b in enumerate(f) if b) for f in self.functions]

    def as_array(self) -> np.ndarray:
        return np.array(self.functions, dtype=np.uint8).reshape(len(self.functions), self.n)


def size_bound(n: int, k: int) -> float:
    """Greedy cover guarantee 2^k (k ln 2 + ln C(n, k) + 1)."""
    return 2**k * (k * math.log(2) + math.log(math.comb(n, k)) + 1)


def _cube(n: int) -> np.ndarray:
    idx = np.arange(2**n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def _candidates(n: int, k: int) -> np.ndarray:
    if n <= k + 4:
        pool = _cube(n)
    else:
        size = max(256, 16 * 2**k)
        gen = np.random.default_rng([n, k])
        pool = gen.integers(0, 2, size=(size, n), dtype=np.uint8)
        pool = np.vstack([pool, np.zeros((1, n), np.uint8), np.ones((1, n), np.uint8)])
    pool = np.unique(pool, axis=0)  # lexicographic row order
    return pool


def _pattern_codes(rows: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    """codes[r, s] = pattern of row r on subset s as an integer in [0, 2^k)."""
    k = subsets.shape[1]
    weights = (1 << np.arange(k)).astype(np.int32)
    return (rows[:, subsets].astype(np.int32) * weights).sum(axis=2, dtype=np.int32)


def build_universal_family(n: int, k: int) -> BinaryFamily:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if k > MAX_K:
        raise ValueError(f"k={k} exceeds the supported maximum {MAX_K}")
    if n == k:
        return BinaryFamily(n, k, tuple(tuple(int(b) for b in row) for row in _cube(n)))
    pool_size = 2**n if n <= k + 4 else max(256, 16 * 2**k) + 2
    if math.comb(n, k) * pool_size > _WORK_LIMIT:
        raise ValueError(f"universal family for n={n}, k={k} is too large to build greedily")
    subsets = np.array(list(itertools.combinations(range(n), k)), dtype=np.int64)
    pool = _candidates(n, k)
    codes = _pattern_codes(pool, subsets)
    missing = np.ones((len(subsets), 2**k), dtype=bool)
    cols = np.arange(len(subsets))
    remaining = missing.size
    chosen: list[np.ndarray] = []
    while remaining:
        gain = missing[cols[None, :], codes].sum(axis=1)
        best = int(np.argmax(gain))  # first maximum = lexicographically smallest
        if gain[best] == 0:
            # pool cannot realize some pattern: build a vector for it directly
            s, pat = np.argwhere(missing)[0]
            row = np.zeros(n, dtype=np.uint8)
            row[subsets[s]] = (pat >> np.arange(k)) & 1
            row_codes = _pattern_codes(row[None, :], subsets)[0]
        else:
            row = pool[best]
            row_codes = codes[best]
        chosen.append(row.copy())
        newly = missing[cols, row_codes]
        remaining -= int(newly.sum())
        missing[cols, row_codes] = False
    funcs = tuple(tuple(int(b) for b in row) for row in chosen)
    return BinaryFamily(n, k, funcs)


def verify_universal(family: BinaryFamily, k: int | None = None) -> bool:
    """Exhaustive check that every ``k``-subset sees all 2^k patterns."""
    k = family.k if k is None else k
    n = family.n
    if k > n:
        return False
    if k == 0:
        return len(family) > 0
    if len(family) < 2**k:
        return False
    rows = family.as_array()
    subsets = np.array(list(itertools.combinations(range(n), k)), dtype=np.int64)
    codes = _pattern_codes(rows, subsets)  # (size, #subsets)
    seen = np.zeros((len(subsets), 2**k), dtype=bool)
    seen[np.arange(len(subsets))[None, :], codes] = True
    return bool(seen.all())


def format_family(family: BinaryFamily) -> str:
    lines = [f"{family.n} {family.k} {len(family)}"]
    lines.extend("".join(str(b) for b in f) for f in family.functions)
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> BinaryFamily:
    lines = [ln.strip() for ln in text.strip().split("\n")]
    try:
        n, k, size = (int(x) for x in lines[0].split())
    except ValueError:
        raise ValueError("family header must be 'n k size'") from None
    body = lines[1:]
    if len(body) != size:
        raise ValueError(f"expected {size} family lines, found {len(body)}")
    funcs = []
    for i, ln in enumerate(body, start=2):
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValueError(f"line {i}: expected {n} characters over 0/1")
        funcs.append(tuple(int(c) for c in ln))
    return BinaryFamily(n, k, tuple(funcs))


def load_or_build(n: int, k: int, cache_dir: str | None = None) -> BinaryFamily:
    """Family for ``(n, k)``, read from ``cache_dir`` when present there."""
    if cache_dir is None:
        return get_family(n, k)
    path = os.path.join(cache_dir, f"universal_{n}_{k}.txt")
    if os.path.exists(path):
        with open(path) as fh:
            fam = parse_family(fh.read())
        if fam.n == n and fam.k == k:
            return fam
    fam = build_universal_family(n, k)
    os.makedirs(cache_dir, exist_ok=True)
    tmp = f"{path}.{os.getpid()}.tmp"
    with open(tmp, "w") as fh:
        fh.write(format_family(fam))
    os.replace(tmp, path)
    return fam


@functools.lru_cache(maxsize=None)
def get_family(n: int, k: int) -> BinaryFamily:
    return build_universal_family(n, k)
