"""Invariant checkers: clean instances pass, injected faults produce witnesses."""

import random

from matrisect.core import IndependenceOnlyView, UniformMatroid, greedy_maximal_common, elements_of
from matrisect.instances import FAMILIES, generate, path_matching_instance
from matrisect.verify import (
    check_exchange_axiom,
    check_hereditary,
    check_indep_bfs,
    check_oracle_consistency,
    check_rank_bfs,
    check_solvers_agree,
    verify_instance,
)

from conftest import ListedMatroid


class TestCleanInstances:
    def test_gadget_battery_passes(self):
        m1, m2 = path_matching_instance().build()
        results = verify_instance(m1, m2)
        failed = [(name, w) for name, w in results if w is not None]
        assert not failed

    def test_battery_names_for_rank_capable_pair(self):
        m1, m2 = path_matching_instance().build()
        names = [name for name, _ in verify_instance(m1, m2)]
        assert names == [
            "oracle-consistency-m1",
            "oracle-consistency-m2",
            "hereditary-m1",
            "hereditary-m2",
            "exchange-axiom-m1",
            "exchange-axiom-m2",
            "arc-finders",
            "rank-bfs",
            "indep-bfs",
            "empty-set-indep-bfs",
            "solver-agreement",
        ]

    def test_independence_only_pair_skips_rank_checks(self):
        m1, m2 = path_matching_instance().build()
        results = verify_instance(IndependenceOnlyView(m1), IndependenceOnlyView(m2))
        names = [name for name, _ in results]
        assert "arc-finders" not in names and "rank-bfs" not in names
        assert all(w is None for _, w in results)

    def test_random_instances_pass(self):
        for i, fam in enumerate(FAMILIES):
            inst = generate(fam, 12, 3000 + i)
            results = verify_instance(*inst.build(), seed=i)
            failed = [(name, w) for name, w in results if w is not None]
            assert not failed, (inst.instance_id, failed)

    def test_bfs_checks_on_non_maximal_sets(self):
        rng = random.Random(31)
        for i in range(10):
            inst = generate("bipartite-matching", rng.randint(6, 16), 3100 + i)
            m1, m2 = inst.build()
            s = greedy_maximal_common(m1, m2)
            if s:
                s &= ~(1 << rng.choice(elements_of(s)))
            assert check_rank_bfs(m1, m2, s) is None
            assert check_indep_bfs(m1, m2, s) is None


class TestFaultInjection:
    def test_non_hereditary_reported(self):
        # {0,1} is listed independent but the singleton {1} is not
        bad = ListedMatroid(2, [0b00, 0b01, 0b11])
        witness = check_hereditary(bad, seed=0)
        assert witness is not None
        assert "dropping" in witness

    def test_rank_inconsistency_reported(self):
        class LyingRank(ListedMatroid):
            def _rank(self, s):
                return s.bit_count()  # claims every subset is saturated

        bad = LyingRank(3, [0b000, 0b001, 0b010, 0b100])
        witness = check_oracle_consistency(bad, seed=0)
        assert witness is not None
        assert "rank-saturated" in witness

    def test_exchange_violation_reported(self):
        # hereditary family where {2} cannot be extended from {0,1}
        bad = ListedMatroid(3, [0b000, 0b001, 0b010, 0b100, 0b011])
        assert check_hereditary(bad, seed=0) is None
        witness = check_exchange_axiom(bad, seed=0)
        assert witness is not None
        assert "extends" in witness

    def test_solver_disagreement_reported(self):
        # non-matroid where greedy+augmentation stalls at {0} but {1,2} exists
        bad = ListedMatroid(3, [0b000, 0b001, 0b010, 0b100, 0b110])
        witness = check_solvers_agree(bad, UniformMatroid(3, 3))
        assert witness is not None
        assert "brute force" in witness

    def test_clean_listed_matroid_passes(self):
        from conftest import listed_from_bases

        good = listed_from_bases(4, [[0, 2], [0, 3], [1, 2], [1, 3]])
        assert check_hereditary(good, seed=0) is None
        assert check_oracle_consistency(good, seed=0) is None
        assert check_exchange_axiom(good, seed=0) is None
