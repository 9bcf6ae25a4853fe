"""Ground-set model, matroid oracle abstraction, concrete families, and greedy routines.

Element subsets are plain Python ints used as bitmasks over the ground set
[0, n); bit i set means element i is in the subset.  All oracle queries take
such masks.  Every oracle owns its own query counters; the counters are the
costed unit everywhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

INF = math.inf


class CapabilityError(RuntimeError):
    """Raised when an oracle is asked for a query kind it does not support."""


# ---------------------------------------------------------------------------
# bitmask helpers


def mask_of(elements) -> int:
    """Build a bitmask from an iterable of element ids."""
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    """List the element ids of a bitmask in ascending order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_bits(mask: int):
    """Yield element ids of a bitmask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def take_lowest(mask: int, k: int) -> int:
    """Mask of the k lowest set bits of `mask` (all bits if k >= popcount)."""
    if k <= 0:
        return 0
    if k >= mask.bit_count():
        return mask
    # binary search the shortest prefix [0, pos) containing k set bits
    lo, hi = 1, mask.bit_length()
    while lo < hi:
        mid = (lo + hi) // 2
        if (mask & ((1 << mid) - 1)).bit_count() >= k:
            hi = mid
        else:
            lo = mid + 1
    return mask & ((1 << lo) - 1)


def split_half(mask: int) -> tuple[int, int]:
    """Split a mask into (first ceil(k/2) elements by ascending id, rest)."""
    k = mask.bit_count()
    first = take_lowest(mask, (k + 1) // 2)
    return first, mask ^ first


def mask_to_bool(mask: int, n: int) -> np.ndarray:
    """Convert a bitmask to a boolean numpy array of length n."""
    nbytes = (n + 7) // 8
    buf = mask.to_bytes(nbytes, "little")
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little", count=n)
    return bits.view(np.bool_)


def bool_to_mask(arr: np.ndarray) -> int:
    """Convert a boolean numpy array back to a bitmask."""
    packed = np.packbits(arr.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


# ---------------------------------------------------------------------------
# oracle abstraction


@dataclass
class OracleStats:
    """Monotone per-oracle query counters."""

    independence_calls: int = 0
    rank_calls: int = 0

    @property
    def total(self) -> int:
        return self.independence_calls + self.rank_calls

    def snapshot(self) -> "OracleStats":
        return OracleStats(self.independence_calls, self.rank_calls)

    def since(self, earlier: "OracleStats") -> "OracleStats":
        return OracleStats(
            self.independence_calls - earlier.independence_calls,
            self.rank_calls - earlier.rank_calls,
        )


class Matroid:
    """Oracle access to a matroid over ground set [0, n).

    Subclasses implement `_independent` and (if rank-capable) `_rank`; the
    public `is_independent` / `rank` wrappers do the query accounting.
    Instances are immutable after construction except for the counters.
    """

    capabilities = frozenset({"independence", "rank"})

    def __init__(self, n: int):
        if n < 0:
            raise ValueError(f"ground set size must be nonnegative, got {n}")
        self.n = n
        self.full_mask = (1 << n) - 1
        self.stats = OracleStats()

    def is_independent(self, s: int) -> bool:
        self.stats.independence_calls += 1
        return self._independent(s)

    def rank(self, s: int) -> int:
        if "rank" not in self.capabilities:
            raise CapabilityError(f"{type(self).__name__} has no rank oracle")
        self.stats.rank_calls += 1
        return self._rank(s)

    def reset_stats(self) -> None:
        self.stats = OracleStats()

    def _independent(self, s: int) -> bool:
        raise NotImplementedError

    def _rank(self, s: int) -> int:
        raise NotImplementedError


class RankIndependenceView:
    """Adapter answering independence questions through rank queries only.

    Used by the rank-oracle solvers so that their entire query footprint is
    rank calls: is_independent(S) is realized as rank(S) == |S|.
    """

    def __init__(self, matroid: Matroid):
        self._m = matroid
        self.n = matroid.n

    def is_independent(self, s: int) -> bool:
        return self._m.rank(s) == s.bit_count()


class IndependenceOnlyView(Matroid):
    """Wrapper hiding the rank capability of an oracle (for capability tests)."""

    capabilities = frozenset({"independence"})

    def __init__(self, matroid: Matroid):
        super().__init__(matroid.n)
        self._m = matroid

    def _independent(self, s: int) -> bool:
        return self._m.is_independent(s)


# ---------------------------------------------------------------------------
# concrete families


class UniformMatroid(Matroid):
    """Independent sets are all subsets of size at most k."""

    def __init__(self, n: int, k: int):
        super().__init__(n)
        if k < 0:
            raise ValueError(f"uniform matroid cap must be nonnegative, got {k}")
        self.k = k

    def _independent(self, s: int) -> bool:
        return s.bit_count() <= self.k

    def _rank(self, s: int) -> int:
        return min(s.bit_count(), self.k)


class PartitionMatroid(Matroid):
    """Independent sets pick at most cap_j elements from block j.

    Elements not covered by any block are unconstrained.
    """

    def __init__(self, n: int, blocks: list[list[int]], caps: list[int]):
        super().__init__(n)
        if len(blocks) != len(caps):
            raise ValueError("blocks and caps must have equal length")
        if any(c < 0 for c in caps):
            raise ValueError("caps must be nonnegative")
        block_of = np.full(n, -1, dtype=np.int64)
        for j, blk in enumerate(blocks):
            for e in blk:
                if not 0 <= e < n:
                    raise ValueError(f"block element {e} outside [0, {n})")
                if block_of[e] != -1:
                    raise ValueError(f"element {e} assigned to two blocks")
                block_of[e] = j
        self.blocks = [sorted(b) for b in blocks]
        self.caps = list(caps)
        self._block_of = block_of
        self._caps_arr = np.asarray(caps, dtype=np.int64)
        self._nblocks = len(blocks)

    def _counts(self, s: int) -> tuple[np.ndarray, int]:
        sel = self._block_of[mask_to_bool(s, self.n)]
        free = int((sel < 0).sum())
        counts = np.bincount(sel[sel >= 0], minlength=self._nblocks)
        return counts, free

    def _independent(self, s: int) -> bool:
        counts, _ = self._counts(s)
        return bool(np.all(counts <= self._caps_arr))

    def _rank(self, s: int) -> int:
        counts, free = self._counts(s)
        return int(np.minimum(counts, self._caps_arr).sum()) + free


class GraphicMatroid(Matroid):
    """Ground set elements are graph edges; independent sets are forests."""

    def __init__(self, n_vertices: int, edges: list[tuple[int, int]]):
        super().__init__(len(edges))
        if n_vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u},{v}) outside vertex range")
        self.n_vertices = n_vertices
        self.edges = [(int(u), int(v)) for u, v in edges]

    def _unions(self, s: int) -> int:
        # union-find rebuilt per query; returns number of successful unions,
        # i.e. the size of the largest forest inside s
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            root = x
            while parent.setdefault(root, root) != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        merged = 0
        for e in iter_bits(s):
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                merged += 1
        return merged

    def _independent(self, s: int) -> bool:
        return self._unions(s) == s.bit_count()

    def _rank(self, s: int) -> int:
        return self._unions(s)


class LinearMatroid(Matroid):
    """Columns of a matrix over the prime field F_p; independence is linear."""

    def __init__(self, matrix, p: int = 2003):
        mat = np.asarray(matrix, dtype=np.int64) % p
        if mat.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        super().__init__(mat.shape[1])
        self.p = p
        self.matrix = mat

    def _colrank(self, s: int, stop_on_dependent: bool = False) -> int:
        cols = elements_of(s)
        if not cols:
            return 0
        a = self.matrix[:, cols].copy()
        p = self.p
        m, k = a.shape
        r = 0
        for c in range(k):
            col = a[r:, c]
            i = int(np.argmax(col != 0))
            if col[i] == 0:
                if stop_on_dependent:
                    return r
                continue
            if i:
                a[[r, r + i]] = a[[r + i, r]]
            # scale the block below by the pivot and subtract the pivot row;
            # scaling by a nonzero value keeps the rank and products stay
            # below p^2, so int64 never overflows
            block = a[r + 1:]
            if block.size:
                a[r + 1:] = (block * a[r, c] - block[:, c : c + 1] * a[r]) % p
            r += 1
            if r == m:
                break
        return r

    def _independent(self, s: int) -> bool:
        k = s.bit_count()
        if k > self.matrix.shape[0]:
            return False
        return self._colrank(s, stop_on_dependent=True) == k

    def _rank(self, s: int) -> int:
        return self._colrank(s)


class TruncatedMatroid(Matroid):
    """Same matroid with independent-set sizes capped."""

    def __init__(self, inner: Matroid, cap: int):
        if cap < 0:
            raise ValueError("truncation cap must be nonnegative")
        super().__init__(inner.n)
        self.inner = inner
        self.cap = cap

    def _independent(self, s: int) -> bool:
        if s.bit_count() > self.cap:
            return False
        return self.inner.is_independent(s)

    def _rank(self, s: int) -> int:
        return min(self.inner.rank(s), self.cap)


class RestrictedMatroid(Matroid):
    """The matroid restricted to a kept subset, re-indexed densely from 0."""

    def __init__(self, inner: Matroid, kept_mask: int):
        kept = elements_of(kept_mask)
        super().__init__(len(kept))
        self.inner = inner
        self.kept = kept
        self._old_ids = np.asarray(kept, dtype=np.int64)
        self._inner_n = inner.n

    def to_inner_mask(self, s: int) -> int:
        arr = np.zeros(self._inner_n, dtype=np.uint8)
        if s:
            arr[self._old_ids[mask_to_bool(s, self.n)]] = 1
        return bool_to_mask(arr)

    def to_outer_mask(self, s: int) -> int:
        """Alias of to_inner_mask: map a restricted-universe mask to original ids."""
        return self.to_inner_mask(s)

    def _independent(self, s: int) -> bool:
        return self.inner.is_independent(self.to_inner_mask(s))

    def _rank(self, s: int) -> int:
        return self.inner.rank(self.to_inner_mask(s))


def truncate(matroid: Matroid, cap: int) -> TruncatedMatroid:
    return TruncatedMatroid(matroid, cap)


def restrict(matroid: Matroid, kept_mask: int) -> RestrictedMatroid:
    return RestrictedMatroid(matroid, kept_mask)


def make_matroid(kind: str, params: dict) -> Matroid:
    """Build a matroid oracle from a (kind, params) description.

    Kinds: uniform(n, k), partition(n, blocks, caps),
    graphic(n_vertices, edges), linear(matrix, p).
    """
    if kind == "uniform":
        return UniformMatroid(int(params["n"]), int(params["k"]))
    if kind == "partition":
        return PartitionMatroid(int(params["n"]), params["blocks"], params["caps"])
    if kind == "graphic":
        edges = [tuple(e) for e in params["edges"]]
        return GraphicMatroid(int(params["n_vertices"]), edges)
    if kind == "linear":
        return LinearMatroid(params["matrix"], int(params.get("p", 2003)))
    raise ValueError(f"unknown matroid kind {kind!r}")


def matroid_spec(matroid: Matroid) -> dict:
    """Serializable (kind, params) description; inverse of make_matroid."""
    if isinstance(matroid, UniformMatroid):
        return {"kind": "uniform", "params": {"n": matroid.n, "k": matroid.k}}
    if isinstance(matroid, PartitionMatroid):
        return {
            "kind": "partition",
            "params": {"n": matroid.n, "blocks": matroid.blocks, "caps": matroid.caps},
        }
    if isinstance(matroid, GraphicMatroid):
        return {
            "kind": "graphic",
            "params": {
                "n_vertices": matroid.n_vertices,
                "edges": [list(e) for e in matroid.edges],
            },
        }
    if isinstance(matroid, LinearMatroid):
        return {
            "kind": "linear",
            "params": {"matrix": matroid.matrix.tolist(), "p": matroid.p},
        }
    raise ValueError(f"cannot serialize matroid of type {type(matroid).__name__}")


# ---------------------------------------------------------------------------
# greedy routines


def greedy_linear_opt(matroid: Matroid, weights, cap: int) -> int:
    """Greedy maximizer of a linear function over the size-capped matroid.

    Scans elements in decreasing weight (ties by lower id), skips
    non-positive weights, and keeps an element when the set stays independent
    and below the cap.  Returns the chosen mask.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (matroid.n,):
        raise ValueError("weights length must equal ground set size")
    order = np.lexsort((np.arange(matroid.n), -w))
    chosen = 0
    size = 0
    for e in order:
        if w[e] <= 0 or size >= cap:
            break
        cand = chosen | (1 << int(e))
        if matroid.is_independent(cand):
            chosen = cand
            size += 1
    return chosen


def greedy_maximal_common(m1: Matroid, m2: Matroid) -> int:
    """Maximal common independent set by one ascending scan (2 calls/element).

    The result cannot be extended by any single element, which makes it at
    least half the maximum size.
    """
    if m1.n != m2.n:
        raise ValueError("matroids must share a ground set size")
    s = 0
    for e in range(m1.n):
        cand = s | (1 << e)
        if m1.is_independent(cand) and m2.is_independent(cand):
            s = cand
    return s


def verify_common(m1: Matroid, m2: Matroid, s: int) -> bool:
    """Two oracle calls certifying that s is independent in both matroids."""
    return m1.is_independent(s) and m2.is_independent(s)


# ---------------------------------------------------------------------------
# solver result carrier


@dataclass
class SolveResult:
    """What a solver hands back: the set plus run accounting."""

    mask: int
    size: int
    phases: int = 0
    augmentations: int = 0
    d_stop: float = INF
    records: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def members(self) -> list[int]:
        return elements_of(self.mask)
