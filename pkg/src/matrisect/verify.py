"""Invariant checks for oracles and solver internals.

Each check returns None when it passes or a human-readable witness string
when it fails, so callers can aggregate results into reports.  The checks
are randomized but deterministic in the provided seed.
"""

from __future__ import annotations

import random

from .core import INF, Matroid, elements_of, mask_of
from .exchange import (
    SINK,
    SOURCE,
    build_explicit,
    explicit_distances,
    out_arc,
)
from .indep_solver import get_distances_indep
from .rank_solver import get_distances_rank
from .core import RankIndependenceView
from .reference import brute_force_max_common, solve_reference


def check_oracle_consistency(m: Matroid, seed: int = 0, samples: int = 200) -> str | None:
    """Independence must coincide with rank saturation on random subsets."""
    if "rank" not in m.capabilities:
        return None
    rng = random.Random(seed)
    for _ in range(samples):
        s = rng.getrandbits(m.n) if m.n else 0
        ind = m.is_independent(s)
        saturated = m.rank(s) == s.bit_count()
        if ind != saturated:
            return f"subset {elements_of(s)}: independent={ind} but rank-saturated={saturated}"
    return None


def check_hereditary(m: Matroid, seed: int = 0, samples: int = 200) -> str | None:
    """Dropping any element from an independent set must stay independent."""
    rng = random.Random(seed)
    for _ in range(samples):
        pool = rng.getrandbits(m.n) if m.n else 0
        # greedily build an independent subset of the random pool
        s = 0
        for e in elements_of(pool):
            if m.is_independent(s | (1 << e)):
                s |= 1 << e
        elems = elements_of(s)
        if not elems:
            continue
        drop = rng.choice(elems)
        if not m.is_independent(s & ~(1 << drop)):
            return f"independent {elems} stopped being independent after dropping {drop}"
    return None


def check_exchange_axiom(m: Matroid, seed: int = 0, samples: int = 300) -> str | None:
    """For independent |A| < |B| some element of B extends A (random pairs)."""
    rng = random.Random(seed)
    for _ in range(samples):
        a = _random_independent(m, rng)
        b = _random_independent(m, rng)
        if a.bit_count() >= b.bit_count():
            a, b = b, a
        if a.bit_count() == b.bit_count():
            continue
        if not any(
            m.is_independent(a | (1 << e)) for e in elements_of(b & ~a)
        ):
            return f"no element of {elements_of(b)} extends {elements_of(a)}"
    return None


def _random_independent(m: Matroid, rng: random.Random) -> int:
    pool = rng.getrandbits(m.n) if m.n else 0
    s = 0
    for e in elements_of(pool):
        if m.is_independent(s | (1 << e)):
            s |= 1 << e
    return s


def check_arc_finders(m1: Matroid, m2: Matroid, s_mask: int, seed: int = 0,
                      samples: int = 50) -> str | None:
    """Binary-search arc discovery must agree with the explicit graph."""
    adj = build_explicit(m1, m2, s_mask)
    rng = random.Random(seed)
    n = m1.n
    vertices = [SOURCE, *range(n)]
    m2_view = RankIndependenceView(m2) if "rank" in m2.capabilities else m2
    for _ in range(samples):
        a = rng.choice(vertices)
        b_mask = rng.getrandbits(n) if n else 0
        t_in = rng.random() < 0.5
        got = out_arc(m1, m2_view, s_mask, a, b_mask, t_in)
        allowed = set(adj.get(a, [])) if a != SOURCE else set(adj[SOURCE])
        candidates = {e for e in elements_of(b_mask)}
        if t_in:
            candidates.add(SINK)
        expect_any = allowed & candidates
        if got is None:
            if expect_any:
                return f"out_arc({a}) missed arcs into {sorted(expect_any, key=str)}"
        elif got not in expect_any:
            return f"out_arc({a}) returned {got} which is not an arc"
    return None


def check_rank_bfs(m1: Matroid, m2: Matroid, s_mask: int) -> str | None:
    """Rank-query BFS labels must equal explicit BFS labels exactly."""
    adj = build_explicit(m1, m2, s_mask)
    truth = explicit_distances(adj)
    got = get_distances_rank(m1, m2, s_mask)
    for e in range(m1.n):
        if truth[e] != got.dist[e]:
            return f"element {e}: explicit distance {truth[e]} vs {got.dist[e]}"
    if truth[SINK] != got.d_t:
        return f"sink: explicit distance {truth[SINK]} vs {got.d_t}"
    return None


def check_indep_bfs(m1: Matroid, m2: Matroid, s_mask: int) -> str | None:
    """Independence-query BFS (run to exhaustion) must match explicit BFS."""
    adj = build_explicit(m1, m2, s_mask)
    truth = explicit_distances(adj)
    got = get_distances_indep(m1, m2, s_mask, stop_at_sink=False)
    for e in range(m1.n):
        want = truth[e]
        have = got.dist[e] if got.dist[e] is not None else INF
        if want != have:
            return f"element {e}: explicit distance {want} vs {have}"
    want_t = truth[SINK]
    have_t = got.d_t if got.d_t is not None else INF
    if want_t != have_t:
        return f"sink: explicit distance {want_t} vs {have_t}"
    return None


def check_solvers_agree(m1: Matroid, m2: Matroid, brute_cap: int = 14) -> str | None:
    """Reference solver (and brute force when small) must find the same size."""
    ref = solve_reference(m1, m2)
    if m1.n <= brute_cap:
        brute = brute_force_max_common(m1, m2)
        if brute.size != ref.size:
            return f"brute force found {brute.size} but reference found {ref.size}"
    return None


def verify_instance(m1: Matroid, m2: Matroid, seed: int = 0,
                    brute_cap: int = 14) -> list[tuple[str, str | None]]:
    """Run the full check battery; returns (check name, witness-or-None)."""
    results: list[tuple[str, str | None]] = []
    results.append(("oracle-consistency-m1", check_oracle_consistency(m1, seed)))
    results.append(("oracle-consistency-m2", check_oracle_consistency(m2, seed + 1)))
    results.append(("hereditary-m1", check_hereditary(m1, seed)))
    results.append(("hereditary-m2", check_hereditary(m2, seed + 1)))
    results.append(("exchange-axiom-m1", check_exchange_axiom(m1, seed)))
    results.append(("exchange-axiom-m2", check_exchange_axiom(m2, seed + 1)))
    if m1.n <= 24:
        from .core import greedy_maximal_common

        s = greedy_maximal_common(m1, m2)
        if "rank" in m1.capabilities and "rank" in m2.capabilities:
            results.append(("arc-finders", check_arc_finders(m1, m2, s, seed)))
            results.append(("rank-bfs", check_rank_bfs(m1, m2, s)))
        results.append(("indep-bfs", check_indep_bfs(m1, m2, s)))
        results.append(("empty-set-indep-bfs", check_indep_bfs(m1, m2, 0)))
    if m1.n <= brute_cap + 10:
        results.append(("solver-agreement", check_solvers_agree(m1, m2, brute_cap)))
    return results
