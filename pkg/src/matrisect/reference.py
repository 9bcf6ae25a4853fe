"""Reference solvers: explicit-graph augmentation and exhaustive search.

These are deliberately simple and query-hungry; they exist to check the fast
solvers, not to compete with them.
"""

from __future__ import annotations

from .core import Matroid, SolveResult
from .exchange import augment_mask, build_explicit, explicit_shortest_path


def solve_reference(m1: Matroid, m2: Matroid) -> SolveResult:
    """Maximum common independent set by repeated explicit shortest paths.

    Builds the whole exchange graph before every augmentation, so it costs
    O(n * r) queries per step but leaves nothing to clever bookkeeping.
    """
    s_mask = 0
    augmentations = 0
    while True:
        adj = build_explicit(m1, m2, s_mask)
        path = explicit_shortest_path(adj)
        if path is None:
            break
        s_mask = augment_mask(s_mask, path)
        augmentations += 1
    return SolveResult(
        mask=s_mask,
        size=s_mask.bit_count(),
        phases=augmentations,
        augmentations=augmentations,
    )


def brute_force_max_common(m1: Matroid, m2: Matroid) -> SolveResult:
    """Exhaustive search over common independent sets (small n only).

    Depth-first extension enumerates every common independent set exactly
    once; the hereditary property guarantees completeness.
    """
    n = m1.n
    best_mask = 0
    best_size = 0

    def extend(mask: int, start: int, size: int) -> None:
        nonlocal best_mask, best_size
        if size > best_size:
            best_size, best_mask = size, mask
        for e in range(start, n):
            if size + (n - e) <= best_size:
                break  # not enough elements left to beat the incumbent
            cand = mask | (1 << e)
            if m1.is_independent(cand) and m2.is_independent(cand):
                extend(cand, e + 1, size + 1)

    extend(0, 0, 0)
    return SolveResult(mask=best_mask, size=best_size)


def brute_force_rank(m: Matroid, s_mask: int) -> int:
    """Rank of a subset by exhaustive independent-subset search (small sets)."""
    elems = [e for e in range(m.n) if s_mask >> e & 1]
    best = 0

    def extend(mask: int, start: int, size: int) -> None:
        nonlocal best
        best = max(best, size)
        for i in range(start, len(elems)):
            if size + (len(elems) - i) <= best:
                break
            cand = mask | (1 << elems[i])
            if m.is_independent(cand):
                extend(cand, i + 1, size + 1)

    extend(0, 0, 0)
    return best
