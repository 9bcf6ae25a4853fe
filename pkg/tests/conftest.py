"""Shared helpers: explicit set-system oracles and deterministic instance mixes."""

from __future__ import annotations

import random

from matrisect.core import Matroid, mask_of
from matrisect.instances import FAMILIES, generate


class ListedMatroid(Matroid):
    """Oracle backed by an explicit list of independent sets.

    No axioms are enforced, so deliberately broken set systems can be fed to
    the checkers.  Rank is the largest listed subset, which matches the true
    rank whenever the list is downward closed.
    """

    def __init__(self, n: int, independent_masks):
        super().__init__(n)
        self.listed = frozenset(independent_masks)

    def _independent(self, s: int) -> bool:
        return s in self.listed

    def _rank(self, s: int) -> int:
        return max((t.bit_count() for t in self.listed if t & ~s == 0), default=0)


def downward_closure(masks) -> set[int]:
    """All subsets of the given masks, including the empty set."""
    out = {0}
    stack = list(masks)
    while stack:
        m = stack.pop()
        if m in out:
            continue
        out.add(m)
        e = m
        while e:
            low = e & -e
            stack.append(m ^ low)
            e ^= low
    return out


def listed_from_bases(n: int, bases) -> ListedMatroid:
    return ListedMatroid(n, downward_closure(mask_of(b) for b in bases))


def instance_mix(counts: dict[int, int], families=FAMILIES, start_seed: int = 0):
    """Deterministic list of (family, n, seed, instance) over a size->count map."""
    out = []
    seed = start_seed
    for n, count in sorted(counts.items()):
        for i in range(count):
            family = families[i % len(families)]
            out.append((family, n, seed, generate(family, n, seed)))
            seed += 1
    return out


def random_subset_of(mask: int, rng: random.Random) -> int:
    sub = 0
    e = mask
    while e:
        low = e & -e
        if rng.random() < 0.5:
            sub |= low
        e ^= low
    return sub
