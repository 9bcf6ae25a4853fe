"""Bulk augmentation via augmenting sets, and the hybrid approximate solver.

An augmenting set generalizes one shortest augmenting path to per-layer sets
(B_1, A_1, B_2, ..., B_{l+1}) of equal size w whose symmetric difference with
S yields a common independent set larger by w.  The refine machinery grows a
partial such collection inside the BFS layers by repeated maximal-extension
sweeps, converts it to a true augmenting set, applies it in bulk, and mops up
the few remaining shortest paths one by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    INF,
    Matroid,
    SolveResult,
    greedy_maximal_common,
    mask_of,
)
from .indep_solver import (
    BoundState,
    IndepDistances,
    carry_bounds,
    get_distances_indep,
    one_path,
)


def maximal_add(oracle, base_mask: int, cand_mask: int) -> int:
    """Greedy maximal subset of candidates addable to base, ascending ids.

    One independence query per candidate; returns the mask of added elements.
    """
    added = 0
    cur = base_mask
    rest = cand_mask
    while rest:
        low = rest & -rest
        rest ^= low
        if oracle.is_independent(cur | low):
            cur |= low
            added |= low
    return added


# ---------------------------------------------------------------------------
# augmenting-set containers


@dataclass
class AugmentingSet:
    """Equal-width per-layer sets whose symmetric difference augments S.

    B[k] lives in layer 2k-1 (outside S) for k = 1..ell+1; A[k] lives in
    layer 2k (inside S) for k = 1..ell.  Index 0 of both lists is unused.
    """

    ell: int
    B: list  # masks, length ell + 2
    A: list  # masks, length ell + 1

    @property
    def width(self) -> int:
        return self.B[self.ell + 1].bit_count()

    def all_mask(self) -> int:
        m = 0
        for k in range(1, self.ell + 2):
            m |= self.B[k]
        for k in range(1, self.ell + 1):
            m |= self.A[k]
        return m

    @staticmethod
    def empty(ell: int) -> "AugmentingSet":
        return AugmentingSet(ell=ell, B=[0] * (ell + 2), A=[0] * (ell + 1))


@dataclass
class PartialAugSet:
    """Weakly decreasing per-layer sets; a true augmenting set is extracted
    from it by trimming every layer down to the width of the last one."""

    ell: int
    B: list
    A: list


def validate_augmenting_set(
    m1: Matroid, m2: Matroid, s_mask: int, aug: AugmentingSet, layers: dict | None = None
) -> list[tuple[str, bool]]:
    """Evaluate the six defining conditions; returns (name, ok) pairs."""
    ell = aug.ell
    checks = []
    if layers is not None:
        ok = all(
            aug.B[k] & ~mask_of(layers.get(2 * k - 1, [])) == 0
            for k in range(1, ell + 2)
        ) and all(
            aug.A[k] & ~mask_of(layers.get(2 * k, [])) == 0 for k in range(1, ell + 1)
        )
        checks.append(("layer-containment", ok))
    w = aug.B[1].bit_count()
    sizes_ok = all(aug.B[k].bit_count() == w for k in range(1, ell + 2)) and all(
        aug.A[k].bit_count() == w for k in range(1, ell + 1)
    )
    checks.append(("equal-widths", sizes_ok))
    checks.append(("first-layer-add", m1.is_independent(s_mask | aug.B[1])))
    checks.append(("last-layer-add", m2.is_independent(s_mask | aug.B[ell + 1])))
    ok_e = all(
        m1.is_independent((s_mask & ~aug.A[k]) | aug.B[k + 1]) for k in range(1, ell + 1)
    )
    checks.append(("swap-forward", ok_e))
    ok_f = all(
        m2.is_independent((s_mask & ~aug.A[k]) | aug.B[k]) for k in range(1, ell + 1)
    )
    checks.append(("swap-backward", ok_f))
    return checks


def validate_partial(
    m1: Matroid, m2: Matroid, s_mask: int, phi: PartialAugSet, layers: dict | None = None
) -> list[tuple[str, bool]]:
    """Evaluate the partial-collection conditions; returns (name, ok) pairs."""
    ell = phi.ell
    checks = []
    if layers is not None:
        ok = all(
            phi.B[k] & ~mask_of(layers.get(2 * k - 1, [])) == 0
            for k in range(1, ell + 2)
        ) and all(
            phi.A[k] & ~mask_of(layers.get(2 * k, [])) == 0 for k in range(1, ell + 1)
        )
        checks.append(("layer-containment", ok))
    sizes = []
    for k in range(1, ell + 1):
        sizes.append(phi.B[k].bit_count())
        sizes.append(phi.A[k].bit_count())
    sizes.append(phi.B[ell + 1].bit_count())
    checks.append(("weakly-decreasing", all(a >= b for a, b in zip(sizes, sizes[1:]))))
    checks.append(("first-layer-add", m1.is_independent(s_mask | phi.B[1])))
    checks.append(("last-layer-add", m2.is_independent(s_mask | phi.B[ell + 1])))
    ok_e = all(
        m1.is_independent((s_mask & ~phi.A[k]) | phi.B[k + 1]) for k in range(1, ell + 1)
    )
    checks.append(("swap-forward", ok_e))
    ok_f = True
    for k in range(1, ell + 1):
        base = s_mask & ~phi.A[k]
        got = maximal_add(m2, base, phi.B[k]).bit_count()
        if got < phi.A[k].bit_count():
            ok_f = False
            break
    checks.append(("swap-backward-witness", ok_f))
    return checks


def apply_augmenting_set(m1: Matroid, m2: Matroid, s_mask: int, aug: AugmentingSet) -> int:
    """Symmetric difference of S with every layer set; grows |S| by the width.

    Both-sided independence of the result is asserted unconditionally (two
    oracle calls), since bulk augmentation correctness is the whole point.
    """
    new_s = s_mask ^ aug.all_mask()
    assert new_s.bit_count() == s_mask.bit_count() + aug.width, "width bookkeeping broken"
    assert m1.is_independent(new_s) and m2.is_independent(new_s), (
        "augmenting set broke common independence"
    )
    return new_s


# ---------------------------------------------------------------------------
# refine machinery


@dataclass
class RefineState:
    """Per-layer partition of BFS layers into selected, removed, and fresh.

    Layer index runs 1..2*ell+1; the selected elements of odd layer 2k-1 form
    B_k, those of even layer 2k form A_k.  Element types only move fresh ->
    selected -> removed, and `changes` counts those moves.
    """

    ell: int
    s_mask: int
    D: list
    sel: list
    rem: list
    fre: list
    changes: int = 0

    @staticmethod
    def init(m1: Matroid, s_mask: int, layers: dict, ell: int) -> "RefineState":
        size = 2 * ell + 3  # index up to 2*ell+2 so the last sweep reads zeros
        D = [0] * size
        for k in range(1, 2 * ell + 2):
            D[k] = mask_of(layers.get(k, []))
        state = RefineState(
            ell=ell, s_mask=s_mask, D=D, sel=[0] * size, rem=[0] * size, fre=list(D)
        )
        first = maximal_add(m1, s_mask, D[1])
        state.sel[1] = first
        state.fre[1] = D[1] & ~first
        state.changes = first.bit_count()
        return state

    def B(self, k: int) -> int:
        return self.sel[2 * k - 1]

    def A(self, k: int) -> int:
        return self.sel[2 * k] if 1 <= k <= self.ell else 0

    def gap(self) -> int:
        return self.B(1).bit_count() - self.B(self.ell + 1).bit_count()

    def partial(self) -> PartialAugSet:
        return PartialAugSet(
            ell=self.ell,
            B=[0] + [self.B(k) for k in range(1, self.ell + 2)],
            A=[0] + [self.A(k) for k in range(1, self.ell + 1)],
        )


def refine1(state: RefineState, m1: Matroid, k: int) -> None:
    """Grow B_{k+1} maximally from its layer's fresh pool, then discard the
    part of A_k whose removal is no longer needed for independence."""
    s = state.s_mask
    i = 2 * k + 1
    a_k = state.A(k)
    base = (s & ~a_k) | state.sel[i]
    grown = maximal_add(m1, base, state.fre[i])
    state.sel[i] |= grown
    state.fre[i] &= ~grown
    state.changes += grown.bit_count()
    if k >= 1:
        a_k = state.A(k)
        base = (s & ~a_k) | state.sel[i]
        back = maximal_add(m1, base, a_k)
        state.sel[2 * k] &= ~back
        state.rem[2 * k] |= back
        state.changes += back.bit_count()
        assert state.sel[2 * k].bit_count() == state.sel[i].bit_count(), (
            "selected pair sizes must match after the forward sweep"
        )


def refine2(state: RefineState, m2: Matroid, k: int) -> None:
    """Shrink B_k to the part still coverable after removing layer 2k, then
    mark the fresh elements of layer 2k that cannot be re-added as selected."""
    s = state.s_mask
    j = 2 * k - 1
    avail = s & ~(state.D[2 * k] & ~state.rem[2 * k])
    keep = maximal_add(m2, avail, state.sel[j])
    dropped = state.sel[j] & ~keep
    state.sel[j] = keep
    state.rem[j] |= dropped
    state.changes += dropped.bit_count()
    fresh = state.fre[2 * k]
    if fresh:
        addable = maximal_add(m2, avail | keep, fresh)
        newly = fresh & ~addable
        state.sel[2 * k] |= newly
        state.fre[2 * k] = addable
        state.changes += newly.bit_count()
    if k <= state.ell:
        assert state.sel[j].bit_count() == state.sel[2 * k].bit_count(), (
            "selected pair sizes must match after the backward sweep"
        )


def refine_pass(state: RefineState, m1: Matroid, m2: Matroid) -> int:
    """One full sweep; returns the number of type changes it caused.

    The sweep alternates the forward and backward refinements layer by layer
    and re-runs the first forward step at the end so that B_1 is maximal when
    the pass finishes.  Each pass changes at least as many types as the gap
    |B_1| - |B_{ell+1}| it started with.
    """
    before = state.changes
    for k in range(state.ell + 1):
        refine1(state, m1, k)
        refine2(state, m2, k + 1)
    refine1(state, m1, 0)
    return state.changes - before


def refine_to_fixpoint(state: RefineState, m1: Matroid, m2: Matroid) -> int:
    """Run refine passes until no element changes type; returns pass count."""
    passes = 0
    budget = 2 * sum(d.bit_count() for d in state.D) + 2
    while True:
        if refine_pass(state, m1, m2) == 0:
            return passes
        passes += 1
        assert passes <= budget, "refine failed to reach a fixpoint"


def partial_to_full(
    m1: Matroid,
    m2: Matroid,
    s_mask: int,
    phi: PartialAugSet,
    pi_prime: AugmentingSet | None = None,
) -> AugmentingSet:
    """Extract a true augmenting set from a partial one, keeping its last layer.

    Works backwards: every A_k is thinned to the last-layer width by greedily
    adding unneeded removals back (never touching elements protected by
    pi_prime), and every B_k is rebuilt to that width by greedy extension in
    the second matroid.  Costs O(n) independence queries.
    """
    ell = phi.ell
    if pi_prime is None:
        pi_prime = AugmentingSet.empty(ell)
    out = AugmentingSet.empty(ell)
    out.B[ell + 1] = phi.B[ell + 1]
    w = out.B[ell + 1].bit_count()
    for k in range(ell, 0, -1):
        base = (s_mask & ~phi.A[k]) | out.B[k + 1]
        added = maximal_add(m1, base, phi.A[k] & ~pi_prime.A[k])
        out.A[k] = phi.A[k] & ~added
        assert out.A[k].bit_count() == w, (
            f"A_{k} did not thin to width {w}; partial collection invalid"
        )
        base = (s_mask & ~out.A[k]) | pi_prime.B[k]
        grown = maximal_add(m2, base, phi.B[k] & ~pi_prime.B[k])
        out.B[k] = pi_prime.B[k] | grown
        assert out.B[k].bit_count() == w, (
            f"B_{k} did not rebuild to width {w}; partial collection invalid"
        )
    return out


def peel_paths(
    m1: Matroid, m2: Matroid, s_mask: int, aug: AugmentingSet
) -> tuple[list[list[int]], int]:
    """Decompose an augmenting set into consecutive shortest paths.

    Repeatedly walks forward through the layer sets (always taking the
    lowest-id vertex with an arc), augments along that path, and removes it;
    what remains is an augmenting set for the updated S, so the walk repeats.
    Returns the ordered paths and the final set mask.  O(n * width) queries.
    """
    ell = aug.ell
    work = AugmentingSet(ell=ell, B=list(aug.B), A=list(aug.A))
    s = s_mask
    paths: list[list[int]] = []
    for _ in range(aug.width):
        b = work.B[1] & -work.B[1]
        assert b, "ran out of first-layer vertices mid-peel"
        work.B[1] ^= b
        path = [b.bit_length() - 1]
        prev_bit = b
        for k in range(1, ell + 1):
            a_pick = 0
            rest = work.A[k]
            while rest:
                low = rest & -rest
                rest ^= low
                if m2.is_independent((s & ~low) | prev_bit):
                    a_pick = low
                    break
            assert a_pick, f"no arc into layer {2 * k} during peel"
            work.A[k] ^= a_pick
            path.append(a_pick.bit_length() - 1)
            b_pick = 0
            rest = work.B[k + 1]
            while rest:
                low = rest & -rest
                rest ^= low
                if m1.is_independent((s & ~a_pick) | low):
                    b_pick = low
                    break
            assert b_pick, f"no arc out of layer {2 * k} during peel"
            work.B[k + 1] ^= b_pick
            path.append(b_pick.bit_length() - 1)
            prev_bit = b_pick
        s ^= mask_of(path)
        paths.append(path)
    return paths, s


# ---------------------------------------------------------------------------
# hybrid phase and the approximate solver


@dataclass
class HybridPhaseOutcome:
    s_mask: int
    bounds: BoundState
    next_dists: IndepDistances
    record: dict


def hybrid_phase(
    m1: Matroid,
    m2: Matroid,
    s_mask: int,
    dists: IndepDistances,
    p: int,
    *,
    cutoff: int | None = None,
    debug: bool = False,
    on_augment=None,
) -> HybridPhaseOutcome:
    """One distance phase: bulk augmenting set first, leftover paths after.

    `dists` must hold exact layers up to the current sink distance.  Refine
    passes run until the first/last layer size gap is at most p; the partial
    collection is then trimmed to a true augmenting set and applied at once.
    The remaining shortest paths at this distance (at most (2*ell+4)*p of
    them) are augmented one by one until the sink distance moves, and the
    distance labels computed when that happens seed the next phase.
    """
    assert dists.d_t is not None and dists.d_t % 2 == 0
    ell = (dists.d_t - 2) // 2
    d_t = dists.d_t
    calls0 = m1.stats.total + m2.stats.total
    if p < 1:
        raise ValueError(f"refine gap threshold must be >= 1, got {p}")

    state = RefineState.init(m1, s_mask, dists.layers, ell)
    passes = 0
    if ell == 0:
        # the first and last layer coincide, so the gap is structurally zero;
        # only a fixpoint makes B_1 feasible on both sides at once
        passes = refine_to_fixpoint(state, m1, m2)
    else:
        while state.gap() > p:
            gap_before = state.gap()
            changed = refine_pass(state, m1, m2)
            passes += 1
            assert changed >= gap_before, (
                "refine pass changed fewer types than the starting layer gap"
            )
    phi = state.partial()
    if debug:
        assert all(ok for _, ok in validate_partial(m1, m2, s_mask, phi, dists.layers))
    aug = partial_to_full(m1, m2, s_mask, phi)
    if debug:
        assert all(ok for _, ok in validate_augmenting_set(m1, m2, s_mask, aug, dists.layers))
    width = aug.width
    bounds: BoundState
    if width > 0:
        new_s = apply_augmenting_set(m1, m2, s_mask, aug)
        if on_augment is not None:
            info = {
                "d_t": d_t,
                "bulk_width": width,
                "augset": aug,
                "layers": dict(dists.layers),
            }
            on_augment(s_mask, new_s, info)
        bounds = carry_bounds(dists, aug.all_mask(), new_s)
        s_mask = new_s
    else:
        bounds = BoundState(elem=list(dists.bound), t=d_t)
        for v, dv in enumerate(dists.dist):
            if dv is None or dv == INF or dv >= d_t:
                bounds.elem[v] = d_t if s_mask >> v & 1 else d_t + 1

    paths_after = 0
    while True:
        nxt = get_distances_indep(m1, m2, s_mask, bounds, cutoff=cutoff)
        if nxt.d_t is None or nxt.d_t > d_t:
            break
        assert nxt.d_t == d_t, "sink distance moved backwards"
        path = one_path(m1, m2, s_mask, nxt)
        path_mask = mask_of(path)
        new_s = s_mask ^ path_mask
        if on_augment is not None:
            on_augment(s_mask, new_s, {"d_t": d_t, "path": list(path)})
        bounds = carry_bounds(nxt, path_mask, new_s)
        s_mask = new_s
        paths_after += 1
        assert paths_after <= (2 * ell + 4) * p, (
            "leftover path count exceeded the width-ratio bound"
        )
    record = {
        "ell": ell,
        "d_t": d_t,
        "refine_passes": passes,
        "type_changes": state.changes,
        "width_applied": width,
        "paths_after": paths_after,
        "calls": m1.stats.total + m2.stats.total - calls0,
    }
    return HybridPhaseOutcome(s_mask=s_mask, bounds=bounds, next_dists=nxt, record=record)


def default_gap_threshold(n: int, eps: float, r_hat: int) -> int:
    """Gap threshold balancing refine passes against leftover paths."""
    return max(1, math.ceil(math.sqrt(n * eps / math.log2(r_hat + 2))))


def solve_approx_augset(
    m1: Matroid,
    m2: Matroid,
    eps: float,
    *,
    p_override: int | None = None,
    cutoff_override: int | None = None,
    debug: bool = False,
    on_augment=None,
) -> SolveResult:
    """(1 - O(eps))-approximate intersection with independence queries.

    Runs hybrid phases while the shortest augmenting path is shorter than
    1/eps; the recorded stopping distance certifies the approximation via the
    deficit bound r - |S| <= 2|S| / (d_stop - 1).
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    n = m1.n
    s_mask = greedy_maximal_common(m1, m2)
    r_hat = 2 * s_mask.bit_count()
    p = p_override if p_override is not None else default_gap_threshold(n, eps, r_hat)
    stop_dist = 1.0 / eps
    cutoff = cutoff_override if cutoff_override is not None else math.ceil(stop_dist)

    bounds = BoundState.fresh(s_mask, n)
    records: list[dict] = []
    promotions = 0
    dists = get_distances_indep(m1, m2, s_mask, bounds, cutoff=cutoff)
    while True:
        promotions += dists.promotions
        if dists.d_t is None:
            d_stop = INF if dists.exhausted else float(dists.t_bound)
            break
        if dists.d_t >= stop_dist:
            d_stop = float(dists.d_t)
            break
        outcome = hybrid_phase(
            m1,
            m2,
            s_mask,
            dists,
            p,
            cutoff=cutoff,
            debug=debug,
            on_augment=on_augment,
        )
        s_mask = outcome.s_mask
        records.append(outcome.record)
        dists = outcome.next_dists
    assert d_stop >= stop_dist, "stopped before the distance threshold"
    return SolveResult(
        mask=s_mask,
        size=s_mask.bit_count(),
        phases=len(records),
        augmentations=sum(r["width_applied"] + r["paths_after"] for r in records),
        d_stop=d_stop,
        records=records,
        extras={"p": p, "cutoff": cutoff, "promotions": promotions},
    )
