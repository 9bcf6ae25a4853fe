"""Matroid intersection under rank oracles: blocking-flow phases.

All queries issued by this module are rank queries; independence questions
are answered through rank(S) == |S| so that the counters reflect a pure
rank-oracle algorithm.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .core import (
    INF,
    CapabilityError,
    Matroid,
    RankIndependenceView,
    SolveResult,
    verify_common,
)
from .exchange import SINK, SOURCE, out_arc


def _require_rank(*matroids: Matroid) -> None:
    for m in matroids:
        if "rank" not in m.capabilities:
            raise CapabilityError(
                f"{type(m).__name__} lacks a rank oracle; rank solvers need one"
            )


@dataclass
class RankDistances:
    """Exact source distances for every vertex of the exchange graph."""

    n: int
    s_mask: int
    dist: list  # per element: int or INF
    d_t: float  # int or INF

    def layers(self) -> dict[int, list[int]]:
        """Finalized element layers keyed by distance (ascending ids)."""
        out: dict[int, list[int]] = {}
        for e, d in enumerate(self.dist):
            if d != INF:
                out.setdefault(d, []).append(e)
        return out


def get_distances_rank(m1: Matroid, m2: Matroid, s_mask: int) -> RankDistances:
    """Exact BFS distances from the source using only rank queries.

    Maintains the undiscovered vertex pool and repeatedly asks the current
    queue head for one more arc into the pool; a vertex leaves the pool the
    moment it is discovered, so every arc query shrinks the pool or retires
    the head.
    """
    n = m1.n
    m2_view = RankIndependenceView(m2)
    dist: list = [INF] * n
    d_t: float = INF
    pool = ((1 << n) - 1) & ~0  # all elements start undiscovered
    t_pool = True
    queue = deque()
    queue.append((SOURCE, 0))
    while queue:
        a, da = queue[0]
        b = out_arc(m1, m2_view, s_mask, a, pool, t_pool and d_t == INF)
        if b is None:
            queue.popleft()
            continue
        if b == SINK:
            d_t = da + 1
            t_pool = False
            continue
        dist[b] = da + 1
        pool &= ~(1 << b)
        queue.append((b, da + 1))
    return RankDistances(n=n, s_mask=s_mask, dist=dist, d_t=d_t)


@dataclass
class PhaseRecord:
    """Accounting for one blocking-flow phase."""

    d_t: float
    augmentations: int
    rank_calls: int = 0


def block_flow(
    m1: Matroid,
    m2: Matroid,
    s_mask: int,
    *,
    debug: bool = False,
    on_augment=None,
) -> tuple[int, PhaseRecord]:
    """One phase: exhaust augmenting paths of the current shortest length.

    Computes exact distances, then walks the layered graph depth-first with a
    cursor.  A vertex with no remaining arc into the next layer is deleted
    from its layer; reaching the sink augments along the stack and restarts
    the walk at the source.  The phase ends when the source itself dead-ends.
    """
    calls0 = m1.stats.rank_calls + m2.stats.rank_calls
    dists = get_distances_rank(m1, m2, s_mask)
    d_t = dists.d_t
    record = PhaseRecord(d_t=d_t, augmentations=0)
    if d_t == INF:
        record.rank_calls = m1.stats.rank_calls + m2.stats.rank_calls - calls0
        return s_mask, record

    m2_view = RankIndependenceView(m2)
    d_t = int(d_t)
    # layer_mask[i] holds the still-live vertices at distance i; the sink is
    # handled via the t_in_b flag when probing the final layer
    layer_mask = [0] * d_t
    for e, d in enumerate(dists.dist):
        if d != INF and d < d_t:
            layer_mask[d] |= 1 << e
    source_alive = True
    stack = [SOURCE]
    level = 0
    while level >= 0:
        if level < d_t:
            alive = source_alive if level == 0 else layer_mask[level] != 0
            if not alive:
                break
            cand = layer_mask[level + 1] if level + 1 < d_t else 0
            b = out_arc(m1, m2_view, s_mask, stack[level], cand, level + 1 == d_t)
            if b is None:
                if level == 0:
                    source_alive = False
                else:
                    layer_mask[level] &= ~(1 << stack[level])
                stack.pop()
                level -= 1
            else:
                stack.append(b)
                level += 1
        if level == d_t:
            path = stack[1:-1]  # drop source and sink
            before = s_mask
            for e in path:
                s_mask ^= 1 << e
                layer_mask[dists.dist[e]] &= ~(1 << e)
            record.augmentations += 1
            if debug:
                assert verify_common(m1, m2, s_mask), "augmented set not common independent"
            if on_augment is not None:
                on_augment(before, s_mask, {"d_t": d_t, "path": list(path)})
            stack = [SOURCE]
            level = 0
    record.rank_calls = m1.stats.rank_calls + m2.stats.rank_calls - calls0
    return s_mask, record


def _phase_cap(r: int) -> int:
    # one phase per distinct path length up to ~sqrt(2r), then at most one
    # phase per missing element; both pieces are O(sqrt(r))
    return 2 * math.isqrt(max(r, 0)) + 6


def solve_exact_rank(
    m1: Matroid,
    m2: Matroid,
    *,
    debug: bool = False,
    on_augment=None,
) -> SolveResult:
    """Maximum common independent set using rank queries only."""
    _require_rank(m1, m2)
    s_mask = 0
    records: list[PhaseRecord] = []
    while True:
        s_mask, rec = block_flow(m1, m2, s_mask, debug=debug, on_augment=on_augment)
        records.append(rec)
        if rec.augmentations == 0:
            break
        if debug and len(records) >= 2 and records[-2].d_t != INF:
            assert rec.d_t >= records[-2].d_t + 2, "phase distance must step by 2"
    size = s_mask.bit_count()
    assert len(records) <= _phase_cap(size), (
        f"{len(records)} phases exceeds the O(sqrt(r)) cap for r={size}"
    )
    return SolveResult(
        mask=s_mask,
        size=size,
        phases=len(records),
        augmentations=sum(r.augmentations for r in records),
        d_stop=INF,
        records=records,
    )


def solve_approx_rank(
    m1: Matroid,
    m2: Matroid,
    eps: float,
    *,
    debug: bool = False,
    on_augment=None,
) -> SolveResult:
    """(1 - eps)-approximate common independent set with rank queries.

    Runs exactly ceil(2/eps) + 1 blocking-flow phases (stopping early only at
    a proven maximum) and records the stopping distance.
    """
    _require_rank(m1, m2)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    k = math.ceil(2 / eps) + 1
    s_mask = 0
    records: list[PhaseRecord] = []
    maximal = False
    for _ in range(k):
        s_mask, rec = block_flow(m1, m2, s_mask, debug=debug, on_augment=on_augment)
        records.append(rec)
        if rec.augmentations == 0:
            maximal = True
            break
    if maximal:
        d_stop: float = INF
    else:
        # one extra distance computation to certify how far the sink now is
        d_stop = get_distances_rank(m1, m2, s_mask).d_t
        assert d_stop == INF or d_stop > 1 / eps, (
            f"stopping distance {d_stop} not beyond 1/eps={1 / eps}"
        )
    return SolveResult(
        mask=s_mask,
        size=s_mask.bit_count(),
        phases=len(records),
        augmentations=sum(r.augmentations for r in records),
        d_stop=d_stop,
        records=records,
    )
