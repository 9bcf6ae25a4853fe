"""Bound-pool BFS, single-path extraction, bound carryover, and the
independence-oracle exact solver."""

import math
import random

import pytest

from matrisect.core import (
    INF,
    IndependenceOnlyView,
    UniformMatroid,
    elements_of,
    greedy_maximal_common,
    mask_of,
    verify_common,
)
from matrisect.exchange import SINK, build_explicit, explicit_distances, path_is_valid
from matrisect.indep_solver import (
    BoundState,
    carry_bounds,
    get_distances_indep,
    one_path,
    solve_exact_indep,
)
from matrisect.instances import generate, path_matching_instance
from matrisect.reference import brute_force_max_common, solve_reference


def cases(count, seed=0, max_n=14):
    rng = random.Random(seed)
    families = ("bipartite-matching", "graphic-partition",
                "linear-linear", "uniform-partition")
    for i in range(count):
        n = rng.randint(4, max_n)
        yield generate(families[i % 4], n, 2000 + i)


def perturbed_set(inst, rng):
    m1, m2 = inst.build()
    s = greedy_maximal_common(m1, m2)
    if s and rng.random() < 0.6:
        s ^= 1 << rng.choice(elements_of(s))
    return s


class TestDistances:
    def test_gadget_full_labels(self):
        m1, m2 = path_matching_instance().build()
        d = get_distances_indep(m1, m2, mask_of([1, 4]), stop_at_sink=False)
        assert d.d_t == 4
        assert d.dist == [1, 2, 3, 3, 2, 1]

    def test_maximum_set(self):
        m1, m2 = path_matching_instance().build()
        d = get_distances_indep(m1, m2, mask_of([0, 2, 4]))
        assert d.d_t is None and d.exhausted

    def test_empty_s_doubly_free(self):
        m1, m2 = path_matching_instance().build()
        d = get_distances_indep(m1, m2, 0)
        assert d.d_t == 2

    def test_full_mode_matches_explicit(self):
        rng = random.Random(23)
        for inst in cases(30, seed=23, max_n=11):
            s = perturbed_set(inst, rng)
            explicit = explicit_distances(build_explicit(*inst.build(), s))
            d = get_distances_indep(*inst.build(), s, stop_at_sink=False)
            want_t = explicit[SINK]
            assert (d.d_t if d.d_t is not None else INF) == want_t
            for v in range(d.n):
                got = d.dist[v]
                assert (got if got is not None else INF) == explicit[v], f"vertex {v}"

    def test_sink_stop_mode_prefix_correct(self):
        # in early-exit mode every finalized label below d_t is exact
        rng = random.Random(29)
        for inst in cases(20, seed=29, max_n=11):
            s = perturbed_set(inst, rng)
            explicit = explicit_distances(build_explicit(*inst.build(), s))
            d = get_distances_indep(*inst.build(), s)
            if d.d_t is None:
                continue
            assert d.d_t == explicit[SINK]
            for v in range(d.n):
                if d.dist[v] is not None and d.dist[v] != INF and d.dist[v] < d.d_t:
                    assert d.dist[v] == explicit[v]

    def test_cutoff(self):
        m1, m2 = path_matching_instance().build()
        d = get_distances_indep(m1, m2, mask_of([1, 4]), cutoff=2)
        assert d.d_t is None and d.hit_cutoff
        assert d.t_bound >= 4

    def test_independence_only_oracles(self):
        m1, m2 = (IndependenceOnlyView(m) for m in path_matching_instance().build())
        d = get_distances_indep(m1, m2, mask_of([1, 4]))
        assert d.d_t == 4
        assert m1.stats.rank_calls == 0 and m2.stats.rank_calls == 0


class TestOnePath:
    def test_gadget(self):
        m1, m2 = path_matching_instance().build()
        s = mask_of([1, 4])
        d = get_distances_indep(m1, m2, s)
        path = one_path(m1, m2, s, d)
        assert path == [0, 1, 2]
        adj = build_explicit(*path_matching_instance().build(), s)
        assert path_is_valid(adj, path)

    def test_random_paths_are_real_shortest_paths(self):
        rng = random.Random(31)
        for inst in cases(25, seed=31, max_n=12):
            s = perturbed_set(inst, rng)
            m1, m2 = inst.build()
            d = get_distances_indep(m1, m2, s)
            if d.d_t is None:
                continue
            path = one_path(m1, m2, s, d)
            assert len(path) == d.d_t - 1
            adj = build_explicit(*inst.build(), s)
            assert path_is_valid(adj, path)
            assert explicit_distances(adj)[SINK] == d.d_t
            new_s = s
            for e in path:
                new_s ^= 1 << e
            assert verify_common(*inst.build(), new_s)
            assert new_s.bit_count() == s.bit_count() + 1


class TestCarryBounds:
    def test_carried_bounds_stay_valid(self):
        # after augmenting, each carried bound must lower-bound the true new
        # distance and keep the in/out parity convention
        rng = random.Random(37)
        for inst in cases(25, seed=37, max_n=11):
            m1, m2 = inst.build()
            s = 0
            bounds = None
            while True:
                d = get_distances_indep(m1, m2, s, bounds)
                if d.d_t is None:
                    break
                path = one_path(m1, m2, s, d)
                path_mask = mask_of(path)
                new_s = s ^ path_mask
                bounds = carry_bounds(d, path_mask, new_s)
                explicit = explicit_distances(build_explicit(*inst.build(), new_s))
                for v in range(m1.n):
                    b = bounds.elem[v]
                    assert b <= explicit[v] + 1e-9, (
                        f"bound {b} exceeds true distance {explicit[v]} at {v}"
                    )
                    if b != INF:
                        inside = bool(new_s >> v & 1)
                        assert b % 2 == (0 if inside else 1)
                assert bounds.t <= explicit[SINK]
                assert bounds.t % 2 == 0
                s = new_s

    def test_fresh_bounds(self):
        b = BoundState.fresh(mask_of([1, 3]), 5)
        assert b.elem == [1, 2, 1, 2, 1]
        assert b.t == 2


class TestSolveExactIndep:
    def test_rank_zero(self):
        res = solve_exact_indep(UniformMatroid(5, 0), UniformMatroid(5, 5))
        assert res.size == 0

    def test_gadget(self):
        assert solve_exact_indep(*path_matching_instance().build()).size == 3

    def test_matches_brute_force(self):
        for inst in cases(40, seed=41, max_n=12):
            res = solve_exact_indep(*inst.build(), debug=True)
            want = brute_force_max_common(*inst.build()).size
            assert res.size == want, inst.instance_id
            assert verify_common(*inst.build(), res.mask)

    def test_matches_reference(self):
        for i in range(60):
            inst = generate("graphic-partition", 10 + i % 14, 4000 + i)
            assert solve_exact_indep(*inst.build()).size == \
                solve_reference(*inst.build()).size

    def test_augmentation_lengths_non_decreasing(self):
        for inst in cases(20, seed=43, max_n=14):
            res = solve_exact_indep(*inst.build())
            lens = [rec["d_t"] for rec in res.records]
            assert all(b >= a for a, b in zip(lens, lens[1:]))

    def test_promotion_budget(self):
        for inst in cases(20, seed=47, max_n=14):
            m1, m2 = inst.build()
            res = solve_exact_indep(m1, m2)
            assert res.extras["promotions"] <= m1.n * (res.size + 2)

    def test_query_budget(self):
        # O(n r log r) independence queries with a generous constant
        for inst in cases(15, seed=53, max_n=14):
            m1, m2 = inst.build()
            res = solve_exact_indep(m1, m2)
            calls = m1.stats.independence_calls + m2.stats.independence_calls
            n, r = m1.n, max(res.size, 1)
            bound = 12 * n * r * (math.log2(r + 2) + 1) + 4 * n
            assert calls <= bound, f"{calls} > {bound} on {inst.instance_id}"

    def test_never_calls_rank(self):
        m1, m2 = generate("linear-linear", 18, 5).build()
        solve_exact_indep(m1, m2)
        assert m1.stats.rank_calls == 0 and m2.stats.rank_calls == 0
