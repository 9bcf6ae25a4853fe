"""Exchange-graph primitives: binary-search arc discovery and an explicit builder.

For a common independent set S of matroids M1, M2 the exchange graph has
vertices [0, n) plus a source s and sink t, and arcs

  s -> b        for b outside S with S + b independent in M1,
  b -> t        for b outside S with S + b independent in M2,
  a -> b        for a in S, b outside S with S - a + b independent in M1,
  b -> a        for a in S, b outside S with S - a + b independent in M2.

`find_free` and `find_exchange` locate one arc endpoint inside a candidate
set with logarithmically many oracle queries; `out_arc` dispatches on the
tail vertex.  `build_explicit` materializes the whole graph by brute force
for verification.
"""

from __future__ import annotations

from collections import deque

from .core import INF, Matroid, elements_of, split_half

# sentinel vertex ids for the exchange graph's source and sink
SOURCE = -1
SINK = -2


def find_free(matroid: Matroid, s_mask: int, b_mask: int) -> int | None:
    """Minimum-id element b in b_mask with rank(S + b) > rank(S), else None.

    Uses only rank queries: at most 2 + ceil(log2 |B|) of them.  The guard
    tests whether the whole candidate set adds rank; afterwards each halving
    step keeps the first half (ascending ids) whenever it adds rank, which
    pins the minimum-id witness.
    """
    if b_mask == 0:
        return None
    r_s = matroid.rank(s_mask)
    if matroid.rank(s_mask | b_mask) == r_s:
        return None
    while b_mask.bit_count() > 1:
        first, rest = split_half(b_mask)
        if matroid.rank(s_mask | first) > r_s:
            b_mask = first
        else:
            b_mask = rest
    return b_mask.bit_length() - 1


def find_exchange(oracle, s_mask: int, b: int, a_mask: int) -> int | None:
    """Some a in a_mask (subset of S) with S - a + b independent, else None.

    `oracle` only needs is_independent, so this works for native independence
    oracles and for rank-backed views alike.  Costs at most
    1 + ceil(log2 |A|) independence queries.  The guard removes all of A at
    once; if that is not independent no single removal can be (hereditary
    property), so the search stops.  Each halving step keeps the half whose
    wholesale removal frees b, which preserves the guarantee that some single
    element of the kept half works.
    """
    if a_mask == 0:
        return None
    bbit = 1 << b
    if not oracle.is_independent((s_mask & ~a_mask) | bbit):
        return None
    while a_mask.bit_count() > 1:
        first, rest = split_half(a_mask)
        if oracle.is_independent((s_mask & ~first) | bbit):
            a_mask = first
        else:
            a_mask = rest
    return a_mask.bit_length() - 1


def out_arc(
    m1: Matroid,
    m2_indep,
    s_mask: int,
    a: int,
    b_mask: int,
    t_in_b: bool = False,
):
    """One exchange-graph arc from vertex a into the candidate set, or None.

    `a` is SOURCE, an element of S, or an element outside S.  `b_mask` holds
    the candidate element ids; `t_in_b` additionally offers the sink.
    Returns an element id, SINK, or None.  `m2_indep` must expose
    is_independent (a matroid or a rank-backed view).
    """
    if a == SOURCE:
        return find_free(m1, s_mask, b_mask)
    abit = 1 << a
    if s_mask & abit:
        return find_free(m1, s_mask & ~abit, b_mask & ~s_mask)
    if t_in_b and m2_indep.is_independent(s_mask | abit):
        return SINK
    return find_exchange(m2_indep, s_mask, a, b_mask & s_mask)


def build_explicit(m1: Matroid, m2: Matroid, s_mask: int) -> dict:
    """Adjacency of the full exchange graph by exhaustive independence tests.

    Keys are SOURCE, SINK and all element ids; values are sorted neighbor
    lists.  Intended for small instances and verification.
    """
    n = m1.n
    inside = [e for e in range(n) if s_mask >> e & 1]
    outside = [e for e in range(n) if not s_mask >> e & 1]
    adj: dict[int, list] = {SOURCE: [], SINK: []}
    for e in range(n):
        adj[e] = []
    for b in outside:
        bbit = 1 << b
        if m1.is_independent(s_mask | bbit):
            adj[SOURCE].append(b)
        if m2.is_independent(s_mask | bbit):
            adj[b].append(SINK)
        for a in inside:
            swapped = (s_mask & ~(1 << a)) | bbit
            if m1.is_independent(swapped):
                adj[a].append(b)
            if m2.is_independent(swapped):
                adj[b].append(a)
    for key in adj:
        adj[key].sort()
    return adj


def explicit_distances(adj: dict) -> dict:
    """BFS distances from SOURCE over an explicit adjacency; INF if unreachable."""
    dist = {v: INF for v in adj}
    dist[SOURCE] = 0
    queue = deque([SOURCE])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] == INF:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def explicit_shortest_path(adj: dict) -> list[int] | None:
    """Lexicographically-first shortest SOURCE->SINK path; element ids only.

    Returns None when the sink is unreachable.
    """
    parent: dict = {SOURCE: None}
    queue = deque([SOURCE])
    while queue:
        v = queue.popleft()
        if v == SINK:
            break
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    if SINK not in parent:
        return None
    path = []
    v = parent[SINK]
    while v != SOURCE:
        path.append(v)
        v = parent[v]
    path.reverse()
    return path


def augment_mask(s_mask: int, path_elements) -> int:
    """Apply a path augmentation: symmetric difference with the path elements."""
    for e in path_elements:
        s_mask ^= 1 << e
    return s_mask


def path_is_valid(adj: dict, path: list[int]) -> bool:
    """Check that SOURCE -> path[0] -> ... -> path[-1] -> SINK uses real arcs."""
    seq = [SOURCE, *path, SINK]
    return all(b in adj[a] for a, b in zip(seq, seq[1:]))


__all__ = [
    "SOURCE",
    "SINK",
    "find_free",
    "find_exchange",
    "out_arc",
    "build_explicit",
    "explicit_distances",
    "explicit_shortest_path",
    "augment_mask",
    "path_is_valid",
]
