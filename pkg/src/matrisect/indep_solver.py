"""Matroid intersection under independence oracles: bounded BFS plus paths.

The distance computation keeps, across augmentations, a per-element lower
bound on each exchange-graph distance.  A BFS call only pays to re-discover
vertices whose bound equals the layer being built; failed discoveries push
the bound up by two (a promotion), and the total number of promotions over a
whole solve is what the amortized query bound charges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    INF,
    Matroid,
    SolveResult,
    greedy_maximal_common,
    mask_of,
    verify_common,
)
from .exchange import find_exchange


@dataclass
class BoundState:
    """Distance lower bounds carried from one BFS call to the next.

    `elem[v]` is a valid lower bound on v's distance from the source in the
    current exchange graph; parity encodes membership (even inside S, odd
    outside).  `t` lower-bounds the sink distance and is always even.
    """

    elem: list
    t: int = 2

    @staticmethod
    def fresh(s_mask: int, n: int) -> "BoundState":
        return BoundState(elem=[2 if s_mask >> v & 1 else 1 for v in range(n)], t=2)


@dataclass
class IndepDistances:
    """Result of one bounded BFS over the exchange graph."""

    n: int
    s_mask: int
    dist: list  # per element: exact int, INF (proven unreachable), or None
    d_t: int | None  # exact sink distance when found
    t_bound: int  # final lower bound on the sink distance (== d_t when found)
    bound: list  # final per-element lower bound (exact value where finalized)
    layers: dict = field(default_factory=dict)  # level -> ascending element list
    promotions: int = 0
    exhausted: bool = False  # BFS hit an empty layer: None labels became INF
    hit_cutoff: bool = False  # BFS stopped at the cutoff without a sink


def get_distances_indep(
    m1: Matroid,
    m2: Matroid,
    s_mask: int,
    bounds: BoundState | None = None,
    *,
    cutoff: int | None = None,
    stop_at_sink: bool = True,
) -> IndepDistances:
    """Layered BFS of the exchange graph using independence queries only.

    Elements wait in pools keyed by their current lower bound.  Building odd
    layer L (outside S): each candidate either proves an arc from layer L-1
    with one exchange search, or is promoted two levels.  Building even layer
    L (inside S): the previous layer's vertices repeatedly pull candidates
    from the pool with exchange searches until none respond; leftovers are
    promoted.  After an odd layer is finalized its members are probed for a
    sink arc (skipped while the sink bound says none can exist).

    With `stop_at_sink` the walk stops once the sink distance is exact, which
    is all an augmentation step needs; without it the walk runs to exhaustion
    and every label, including unreachable ones, is exact.  `cutoff` abandons
    the walk once layers pass it, reporting only bounds beyond that point.
    """
    n = m1.n
    if bounds is None:
        bounds = BoundState.fresh(s_mask, n)
    pools: dict[int, int] = {}
    for v in range(n):
        level = bounds.elem[v]
        if level == INF:
            continue
        pools[level] = pools.get(level, 0) | (1 << v)
    dist: list = [None] * n
    layers: dict[int, list[int]] = {}
    d_t: int | None = None
    t_bound = bounds.t
    promotions = 0
    exhausted = False
    hit_cutoff = False
    never = mask_of(v for v in range(n) if bounds.elem[v] == INF)

    level = 0
    while True:
        level += 1
        if cutoff is not None and level > cutoff:
            hit_cutoff = d_t is None
            break
        cands = pools.pop(level, 0)
        newly: list[int] = []
        if level % 2 == 1:
            prev_mask = 0 if level == 1 else mask_of(layers[level - 1])
            rest = cands
            while rest:
                low = rest & -rest
                rest ^= low
                b = low.bit_length() - 1
                if level == 1:
                    ok = m1.is_independent(s_mask | low)
                else:
                    ok = find_exchange(m1, s_mask, b, prev_mask) is not None
                if ok:
                    newly.append(b)
                    dist[b] = level
                else:
                    pools[level + 2] = pools.get(level + 2, 0) | low
                    promotions += 1
            layers[level] = newly
            if d_t is None and level + 1 >= t_bound:
                for b in newly:
                    if m2.is_independent(s_mask | (1 << b)):
                        d_t = level + 1
                        t_bound = d_t
                        break
                else:
                    t_bound = max(t_bound, level + 3)
        else:
            queue = cands
            for b in layers[level - 1]:
                while queue:
                    a = find_exchange(m2, s_mask, b, queue)
                    if a is None:
                        break
                    queue &= ~(1 << a)
                    newly.append(a)
                    dist[a] = level
            newly.sort()
            layers[level] = newly
            if queue:
                pools[level + 2] = pools.get(level + 2, 0) | queue
                promotions += queue.bit_count()
        if not newly:
            exhausted = True
            break
        if d_t is not None and stop_at_sink:
            break

    if exhausted:
        # an empty layer proves everything still waiting is unreachable
        for v in range(n):
            if dist[v] is None:
                dist[v] = INF
        t_bound = d_t if d_t is not None else INF

    bound = list(dist)
    for lv, mask in pools.items():
        m = mask
        while m:
            low = m & -m
            m ^= low
            bound[low.bit_length() - 1] = lv
    if never:
        m = never
        while m:
            low = m & -m
            m ^= low
            bound[low.bit_length() - 1] = INF

    return IndepDistances(
        n=n,
        s_mask=s_mask,
        dist=dist,
        d_t=d_t,
        t_bound=t_bound if d_t is None else d_t,
        bound=bound,
        layers=layers,
        promotions=promotions,
        exhausted=exhausted,
        hit_cutoff=hit_cutoff,
    )


def one_path(m1: Matroid, m2: Matroid, s_mask: int, dists: IndepDistances) -> list[int]:
    """Extract one shortest source-to-sink path from finalized layers.

    Walks backwards from the sink, at each level scanning the previous layer
    in ascending id order for a vertex with an arc to the current one; the
    BFS guarantees a predecessor exists.  Costs O(n) independence queries.
    """
    d_t = dists.d_t
    assert d_t is not None and d_t != INF, "no augmenting path to extract"
    cur = None
    for b in dists.layers[d_t - 1]:
        if m2.is_independent(s_mask | (1 << b)):
            cur = b
            break
    assert cur is not None, "sink lost its incoming arc"
    path = [cur]
    for level in range(d_t - 1, 1, -1):
        prev = None
        cbit = 1 << cur
        if level % 2 == 1:  # cur outside S, predecessor inside S
            for a in dists.layers[level - 1]:
                if m1.is_independent((s_mask & ~(1 << a)) | cbit):
                    prev = a
                    break
        else:  # cur inside S, predecessor outside S
            for b in dists.layers[level - 1]:
                if m2.is_independent((s_mask & ~cbit) | (1 << b)):
                    prev = b
                    break
        assert prev is not None, f"no predecessor at level {level - 1}"
        path.append(prev)
        cur = prev
    path.reverse()
    return path


def carry_bounds(dists: IndepDistances, path_mask: int, new_s_mask: int) -> BoundState:
    """Lower bounds valid after augmenting along a shortest path.

    Path vertices flip sides and their distance strictly increases, so their
    old label plus one is safe.  Finalized labels below the old sink distance
    remain safe.  Everything else (pending, unreachable, or at the sink
    distance) is clamped to the sink distance, adjusted by one for vertices
    now outside S to keep parity.
    """
    d_t = dists.d_t
    assert d_t is not None and d_t != INF
    elem = []
    for v in range(dists.n):
        dv = dists.dist[v]
        if path_mask >> v & 1:
            elem.append(dv + 1)
        elif dv is not None and dv != INF and dv < d_t:
            elem.append(dv)
        else:
            elem.append(d_t if new_s_mask >> v & 1 else d_t + 1)
    return BoundState(elem=elem, t=d_t)


def solve_exact_indep(
    m1: Matroid,
    m2: Matroid,
    *,
    debug: bool = False,
    on_augment=None,
) -> SolveResult:
    """Maximum common independent set using independence queries only.

    Starts from a greedy maximal common independent set, then repeats:
    bounded BFS for exact distances up to the sink, extract one shortest
    path, augment, and carry the distance bounds over.
    """
    n = m1.n
    s_mask = greedy_maximal_common(m1, m2)
    bounds = BoundState.fresh(s_mask, n)
    promotions = 0
    records = []
    while True:
        dists = get_distances_indep(m1, m2, s_mask, bounds)
        promotions += dists.promotions
        if dists.d_t is None:
            assert dists.exhausted, "BFS must either find the sink or exhaust"
            break
        path = one_path(m1, m2, s_mask, dists)
        path_mask = mask_of(path)
        new_s = s_mask ^ path_mask
        assert new_s.bit_count() == s_mask.bit_count() + 1
        if debug:
            assert verify_common(m1, m2, new_s), "augmented set not common independent"
            _check_bound_parity(bounds, s_mask)
        if on_augment is not None:
            on_augment(s_mask, new_s, {"d_t": dists.d_t, "path": list(path)})
        records.append({"d_t": dists.d_t, "path_len": len(path)})
        bounds = carry_bounds(dists, path_mask, new_s)
        s_mask = new_s
    size = s_mask.bit_count()
    assert promotions <= n * (size + 2), (
        f"{promotions} promotions exceeds the n*(r+2) amortization budget"
    )
    return SolveResult(
        mask=s_mask,
        size=size,
        phases=len(records),
        augmentations=len(records),
        d_stop=INF,
        records=records,
        extras={"promotions": promotions},
    )


def _check_bound_parity(bounds: BoundState, s_mask: int) -> None:
    for v, lv in enumerate(bounds.elem):
        if lv == INF:
            continue
        inside = bool(s_mask >> v & 1)
        assert (lv % 2 == 0) == inside, f"bound parity broken at element {v}"
    assert bounds.t % 2 == 0
