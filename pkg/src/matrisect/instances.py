"""Deterministic generation of intersection instances and their file format.

An instance is two matroids over a shared ground set, produced from a family
name, size parameters, and a seed.  Serialization stores the fully
materialized matroid descriptions so a saved instance is self-contained; the
JSON form is canonical (sorted keys, fixed separators) and round-trips
byte-identically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import Matroid, make_matroid, matroid_spec

FORMAT_NAME = "matrisect-instance-v1"

FAMILIES = (
    "bipartite-matching",
    "graphic-partition",
    "linear-linear",
    "uniform-partition",
)


@dataclass
class Instance:
    """A generated problem: two matroid descriptions plus provenance."""

    family: str
    n: int
    seed: int
    params: dict
    m1_spec: dict
    m2_spec: dict

    @property
    def instance_id(self) -> str:
        return f"{self.family}-n{self.n}-s{self.seed}"

    def build(self) -> tuple[Matroid, Matroid]:
        """Fresh oracle pair with zeroed counters."""
        m1 = make_matroid(self.m1_spec["kind"], self.m1_spec["params"])
        m2 = make_matroid(self.m2_spec["kind"], self.m2_spec["params"])
        return m1, m2

    def to_json(self) -> str:
        doc = {
            "format": FORMAT_NAME,
            "family": self.family,
            "n": self.n,
            "seed": self.seed,
            "params": self.params,
            "m1": self.m1_spec,
            "m2": self.m2_spec,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

    @staticmethod
    def from_json(text: str) -> "Instance":
        doc = json.loads(text)
        if doc.get("format") != FORMAT_NAME:
            raise ValueError(f"not a {FORMAT_NAME} document")
        return Instance(
            family=doc["family"],
            n=doc["n"],
            seed=doc["seed"],
            params=doc["params"],
            m1_spec=doc["m1"],
            m2_spec=doc["m2"],
        )


def _partition_spec(n: int, blocks: list[list[int]], caps: list[int]) -> dict:
    return {
        "kind": "partition",
        "params": {"n": n, "blocks": [sorted(map(int, b)) for b in blocks], "caps": list(map(int, caps))},
    }


def _group_by(n: int, owner: list[int]) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for e in range(n):
        groups.setdefault(owner[e], []).append(e)
    return [groups[k] for k in sorted(groups)]


def gen_bipartite_matching(
    n: int, seed: int, *, n_left: int | None = None, n_right: int | None = None,
    layout: str = "random",
) -> Instance:
    """Edges of a bipartite graph; one partition matroid per side, caps 1.

    A common independent set is exactly a matching.  `layout="path"` builds
    the deterministic path graph on n+1 vertices instead of random edges.
    """
    params: dict = {"layout": layout}
    if layout == "path":
        # edge i joins vertices i and i+1; sides are even/odd vertices
        left_owner = [i if i % 2 == 0 else i + 1 for i in range(n)]
        right_owner = [i + 1 if i % 2 == 0 else i for i in range(n)]
        m1 = _partition_spec(n, _group_by(n, left_owner), [1] * len(set(left_owner)))
        m2 = _partition_spec(n, _group_by(n, right_owner), [1] * len(set(right_owner)))
        return Instance("bipartite-matching", n, seed, params, m1, m2)
    if n_left is None:
        # about n/4 vertices per side, but never so few that n distinct
        # edges cannot fit
        n_left = max(1, (n + 3) // 4, math.isqrt(max(n - 1, 0)) + 1)
    if n_right is None:
        n_right = n_left
    params.update({"n_left": n_left, "n_right": n_right})
    rng = np.random.default_rng(seed)
    total = n_left * n_right
    if n > total:
        raise ValueError(f"cannot pick {n} distinct edges from {total} possible")
    flat = rng.choice(total, size=n, replace=False)
    left = (flat // n_right).tolist()
    right = (flat % n_right).tolist()
    left_blocks = _group_by(n, left)
    right_blocks = _group_by(n, right)
    m1 = _partition_spec(n, left_blocks, [1] * len(left_blocks))
    m2 = _partition_spec(n, right_blocks, [1] * len(right_blocks))
    return Instance("bipartite-matching", n, seed, params, m1, m2)


def gen_graphic_partition(
    n: int, seed: int, *, n_vertices: int | None = None, max_cap: int = 3
) -> Instance:
    """Random multigraph edges vs a random capped coloring of the edges."""
    if n_vertices is None:
        n_vertices = max(2, (n + 2) // 3)
    rng = np.random.default_rng(seed)
    edges = []
    for _ in range(n):
        u = int(rng.integers(0, n_vertices))
        v = int(rng.integers(0, n_vertices - 1))
        if v >= u:
            v += 1  # guarantees u != v
        edges.append([u, v])
    n_blocks = max(1, n_vertices // 2)
    owner = rng.integers(0, n_blocks, size=n).tolist()
    blocks = _group_by(n, owner)
    caps = [int(rng.integers(1, max_cap + 1)) for _ in blocks]
    m1 = {"kind": "graphic", "params": {"n_vertices": n_vertices, "edges": edges}}
    m2 = _partition_spec(n, blocks, caps)
    params = {"n_vertices": n_vertices, "max_cap": max_cap}
    return Instance("graphic-partition", n, seed, params, m1, m2)


def gen_linear_linear(
    n: int, seed: int, *, rows1: int | None = None, rows2: int | None = None, p: int = 2003
) -> Instance:
    """Two random matrices over F_p; independence is column independence."""
    if rows1 is None:
        rows1 = max(1, n // 3)
    if rows2 is None:
        rows2 = max(1, n // 4)
    rng = np.random.default_rng(seed)
    mat1 = rng.integers(0, p, size=(rows1, n)).tolist()
    mat2 = rng.integers(0, p, size=(rows2, n)).tolist()
    m1 = {"kind": "linear", "params": {"matrix": mat1, "p": p}}
    m2 = {"kind": "linear", "params": {"matrix": mat2, "p": p}}
    params = {"rows1": rows1, "rows2": rows2, "p": p}
    return Instance("linear-linear", n, seed, params, m1, m2)


def gen_uniform_partition(
    n: int, seed: int, *, k: int | None = None, max_cap: int = 2
) -> Instance:
    """Global size cap against a random capped coloring."""
    if k is None:
        k = max(1, n // 3)
    rng = np.random.default_rng(seed)
    n_blocks = max(1, n // 3)
    owner = rng.integers(0, n_blocks, size=n).tolist()
    blocks = _group_by(n, owner)
    caps = [int(rng.integers(1, max_cap + 1)) for _ in blocks]
    m1 = {"kind": "uniform", "params": {"n": n, "k": k}}
    m2 = _partition_spec(n, blocks, caps)
    params = {"k": k, "max_cap": max_cap}
    return Instance("uniform-partition", n, seed, params, m1, m2)


_GENERATORS = {
    "bipartite-matching": gen_bipartite_matching,
    "graphic-partition": gen_graphic_partition,
    "linear-linear": gen_linear_linear,
    "uniform-partition": gen_uniform_partition,
}


def generate(family: str, n: int, seed: int, **kwargs) -> Instance:
    """Dispatch to a family generator; deterministic in (family, n, seed, kwargs)."""
    if family not in _GENERATORS:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    if n < 0:
        raise ValueError("ground set size must be nonnegative")
    return _GENERATORS[family](n, seed, **kwargs)


def path_matching_instance(n_edges: int = 6) -> Instance:
    """The path-graph matching instance used throughout the tests.

    With 6 edges the maximum matching has size 3 while the greedy scan from
    a two-edge matching must cross augmenting paths of length three.
    """
    return gen_bipartite_matching(n_edges, seed=0, layout="path")
