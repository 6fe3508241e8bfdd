"""Brute-force verification oracles: subspace enumeration, exact and
sampled pairwise distance checks, and spread/parallelism coverage checks.

Pair sampling is counter-based (splitmix64 over a triangular unranking),
so reports are byte-identical across platforms for a fixed seed.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from .linalg import gaussian_binomial, pack_row, rank_bits, rank_rows, unpack_row
from .rankmetric import base_field
from .subspace import Subspace

ENUM_CAP = 10 ** 6
FULL_CHECK_CAP = 10 ** 5


class CapExceeded(ValueError):
    pass


@dataclass
class VerificationReport:
    mode: str
    pairs_checked: int
    min_distance_found: int | None
    violations: list = dc_field(default_factory=list)
    seed: int | None = None
    wall_time: float = 0.0

    @property
    def ok(self):
        return not self.violations

    def to_json(self) -> str:
        return json.dumps({
            "mode": self.mode,
            "pairs_checked": self.pairs_checked,
            "min_distance_found": self.min_distance_found,
            "violations": self.violations,
            "seed": self.seed,
            "wall_time": round(self.wall_time, 3),
        }, sort_keys=False)


# ----------------------------------------------------------------------
# subspace enumeration
# ----------------------------------------------------------------------

def enumerate_subspaces(q: int, n: int, k: int, cap: int = ENUM_CAP):
    """Every k-subspace of F_q^n exactly once, in canonical order:
    pivot-column sets lexicographically, free entries in base-q order."""
    total = gaussian_binomial(n, k, q)
    if total > cap:
        raise CapExceeded(f"{total} subspaces exceeds cap {cap}")
    field = base_field(q)
    if k == 0:
        yield Subspace(field, n, [])
        return
    for pivots in combinations(range(n), k):
        pivot_set = set(pivots)
        free = [(i, j) for i in range(k) for j in range(pivots[i] + 1, n)
                if j not in pivot_set]
        for idx in range(q ** len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            rest = idx
            for (i, j) in reversed(free):
                rest, dig = divmod(rest, q)
                rows[i][j] = dig
            yield Subspace(field, n, [tuple(r) for r in rows])


# ----------------------------------------------------------------------
# pairwise distance kernels
# ----------------------------------------------------------------------

def _subspace_masks(code, n):
    """Per-codeword bitmask over the 2^n vectors of F_2^n, as uint64 words."""
    nwords = max(1, (1 << n) >> 6)
    out = np.zeros((code.size, nwords), dtype=np.uint64)
    for i, rows in enumerate(code.iter_packed()):
        vecs = [0]
        for r in rows:
            vecs.extend([v ^ r for v in vecs])
        mask = 0
        for v in vecs:
            mask |= 1 << v
        for w in range(nwords):
            out[i, w] = (mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def _distance_packed(rows1, rows2, n, k1, k2):
    return 2 * rank_bits(list(rows1) + list(rows2), n) - k1 - k2


def _pair_rows_report(code, i, j):
    return [code.at(i).serialize(), code.at(j).serialize()]


def full_pairwise_check(code, cap: int = FULL_CHECK_CAP, jobs: int = 1) -> VerificationReport:
    """Exact minimum distance over all pairs; q = 2 uses a vectorized
    intersection-size kernel over vector-set bitmasks."""
    start = time.monotonic()
    N = code.size
    if N > cap:
        raise CapExceeded(f"{N} codewords exceeds full-check cap {cap}")
    total_pairs = N * (N - 1) // 2
    if N < 2:
        return VerificationReport("full", 0, None, [],
                                  wall_time=time.monotonic() - start)
    violations = []
    if code.field.q == 2 and code.n <= 20:
        masks = _subspace_masks(code, code.n)
        k = code.k

        def shard(lo, hi):
            best = 0  # max intersection size over the shard
            bad = []
            for i in range(lo, hi):
                if i + 1 >= N:
                    continue
                inter = np.bitwise_count(masks[i + 1:] & masks[i]).sum(axis=1)
                m = int(inter.max())
                if m > best:
                    best = m
                dim_bad = k - (code.d_claim // 2)  # dim cap for distance >= d
                thresh = 1 << (dim_bad + 1)
                if m >= thresh:
                    for off in np.nonzero(inter >= thresh)[0]:
                        bad.append((i, i + 1 + int(off)))
            return best, bad

        if jobs > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(lambda b: shard(b[0], b[1]),
                                        [(N * t // jobs, N * (t + 1) // jobs)
                                         for t in range(jobs)]))
            best = max(r[0] for r in results)
            pairs_bad = [p for r in results for p in r[1]]
        else:
            best, pairs_bad = shard(0, N)
        max_inter_dim = best.bit_length() - 1  # |U ∩ W| = 2^dim
        min_dist = 2 * k - 2 * max_inter_dim
        for (i, j) in sorted(pairs_bad):
            d = 2 * k - 2 * (int(np.bitwise_count(masks[i] & masks[j]).sum()).bit_length() - 1)
            violations.append({"pair": _pair_rows_report(code, i, j), "distance": d})
    else:
        field = code.field
        min_dist = None
        words = [list(rows) for rows in code.iter_rows()] if not code.materialized \
            else [list(w.gen.rows) for w in code.words()]
        for i in range(N):
            wi = words[i]
            for j in range(i + 1, N):
                d = 2 * rank_rows(field, wi + words[j], code.n) - len(wi) - len(words[j])
                if min_dist is None or d < min_dist:
                    min_dist = d
                if d < code.d_claim:
                    violations.append({"pair": _pair_rows_report(code, i, j),
                                       "distance": d})
    return VerificationReport("full", total_pairs, min_dist, violations,
                              wall_time=time.monotonic() - start)


# ----------------------------------------------------------------------
# seeded sampling
# ----------------------------------------------------------------------

_M64 = (1 << 64) - 1


def _splitmix64(state: int):
    state = (state + 0x9E3779B97F4A7C15) & _M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return state, z ^ (z >> 31)


def _unrank_pair(t: int):
    """t-th pair (a, b), a < b, ordered by b then a."""
    b = (1 + math.isqrt(8 * t + 1)) // 2
    while b * (b - 1) // 2 > t:
        b -= 1
    while (b + 1) * b // 2 <= t:
        b += 1
    return t - b * (b - 1) // 2, b


def sample_pairs(n_items: int, pairs: int, seed: int):
    """Deterministic stream of index pairs (a < b) from a 64-bit counter."""
    total = n_items * (n_items - 1) // 2
    state = seed & _M64
    for _ in range(pairs):
        state, z = _splitmix64(state)
        yield _unrank_pair(z % total)


def sampled_check(code, pairs: int, seed: int = 0) -> VerificationReport:
    """Seeded uniform pair sampling over a random-access code."""
    start = time.monotonic()
    N = code.size
    if pairs <= 0 or N < 2:
        return VerificationReport("sampled", 0, None, [], seed=seed,
                                  wall_time=time.monotonic() - start)
    q2 = code.field.q == 2
    n, k = code.n, code.k
    field = code.field
    min_dist = None
    violations = []
    cache = {}

    def fetch(i):
        if i not in cache:
            if len(cache) > 1 << 16:
                cache.clear()
            cache[i] = code.packed_at(i) if q2 else code.at(i).gen.rows
        return cache[i]

    for (a, b) in sample_pairs(N, pairs, seed):
        ra, rb = fetch(a), fetch(b)
        if q2:
            d = _distance_packed(ra, rb, n, k, k)
        else:
            d = 2 * rank_rows(field, list(ra) + list(rb), n) - k - k
        if min_dist is None or d < min_dist:
            min_dist = d
        if d < code.d_claim:
            violations.append({"pair": _pair_rows_report(code, a, b), "distance": d})
    return VerificationReport("sampled", pairs, min_dist, violations, seed=seed,
                              wall_time=time.monotonic() - start)


# ----------------------------------------------------------------------
# coverage
# ----------------------------------------------------------------------

def coverage_check(obj):
    """Exact-once coverage: nonzero vectors for a claimed spread, lines for
    a family of disjoint spreads / parallelism."""
    from .cdc import Cdc, SpreadFamily
    if isinstance(obj, SpreadFamily):
        seen = {}
        for member in obj:
            for w in member:
                key = w.gen.rows
                seen[key] = seen.get(key, 0) + 1
        bad = {k: v for k, v in seen.items() if v != 1}
        return {"mode": "lines", "covered": len(seen),
                "multiplicity_violations": len(bad), "ok": not bad}
    code: Cdc = obj
    q, n = code.field.q, code.n
    if q == 2:
        counts = np.zeros(1 << n, dtype=np.int64)
        for rows in code.iter_packed():
            vecs = [0]
            for r in rows:
                vecs.extend([v ^ r for v in vecs])
            for v in vecs[1:]:
                counts[v] += 1
        nonzero = counts[1:]
        missed = int((nonzero == 0).sum())
        multi = int((nonzero > 1).sum())
    else:
        seen = {}
        for w in code:
            for vec in w.vectors():
                if any(vec):
                    seen[vec] = seen.get(vec, 0) + 1
        expected = q ** n - 1
        missed = expected - len(seen)
        multi = sum(1 for v in seen.values() if v > 1)
    return {"mode": "vectors", "missed": missed,
            "multiplicity_violations": multi, "ok": missed == 0 and multi == 0}
