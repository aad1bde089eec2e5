"""Exhaustive arrow checking for small hosts.

``H arrows (T_1, ..., T_k)`` means every k-coloring of H's edges yields,
for some i, a copy of target T_i whose edges all carry color i.  At desk
scale this is decidable by depth-first search over edge colorings: a
branch dies as soon as some color class already contains its target
(recoloring other edges cannot remove it), and a coloring that survives
to the end is a counterexample — a *good coloring*.

Targets are exact-length cycles and bicliques.  Containment tests are
exact backtracking searches, cached per (target, color-class bitmask)
since the DFS revisits the same class many times.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

from .constructions import Graph
from .errors import CapExceededError

ARROW_EDGE_CAP = 21
TARGET_VERTEX_CAP = 20


# ── targets ──────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class CycleTarget:
    """A simple cycle on exactly `length` vertices."""

    length: int

    def __post_init__(self):
        if self.length < 3:
            raise ValueError(f"cycle length must be >= 3, got {self.length}")

    def __str__(self) -> str:
        return f"C{self.length}"


@dataclass(frozen=True)
class BicliqueTarget:
    """A complete bipartite graph on disjoint sets of sizes m1 and m2."""

    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError("biclique part sizes must be >= 1")

    def __str__(self) -> str:
        return f"K{self.m1}x{self.m2}"


Target = Union[CycleTarget, BicliqueTarget]


def parse_targets(text: str) -> tuple[Target, ...]:
    """Parse "C3,C5" / "K2x3" style target lists; errors carry the position."""
    targets = []
    for pos, token in enumerate(t.strip() for t in text.split(",")):
        try:
            if token[:1] in ("C", "c") and token[1:].isdigit():
                targets.append(CycleTarget(int(token[1:])))
            elif token[:1] in ("K", "k") and ("x" in token or "X" in token):
                a, _, b = token[1:].replace("X", "x").partition("x")
                targets.append(BicliqueTarget(int(a), int(b)))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(
                f"bad target {token!r} at position {pos + 1}: "
                f"expected C<len> or K<m1>x<m2>"
            ) from None
    if not targets:
        raise ValueError("need at least one target")
    return tuple(targets)


# ── containment tests ────────────────────────────────────────────────────────


def has_cycle_length(graph: Graph, length: int, cap: int = TARGET_VERTEX_CAP) -> bool:
    """Exact test for a simple cycle on exactly `length` vertices.

    DFS from each start vertex (the cycle's minimum, so each cycle is
    searched in canonical position once) extending simple paths and
    closing back to the start at the right length.
    """
    if length < 3:
        raise ValueError(f"cycle length must be >= 3, got {length}")
    if graph.n > cap:
        raise CapExceededError(
            f"cycle search capped at {cap} vertices, host has {graph.n}"
        )
    if graph.n < length:
        return False
    adj = graph.adjacency_bitsets()

    def extend(start: int, v: int, visited: int, remaining: int) -> bool:
        if remaining == 0:
            return bool(adj[v] >> start & 1)
        # only vertices above the start keep the cycle canonical
        options = adj[v] & ~visited & (-1 << start)
        while options:
            low = options & -options
            options ^= low
            u = low.bit_length() - 1
            if extend(start, u, visited | low, remaining - 1):
                return True
        return False

    for start in range(graph.n):
        if extend(start, start, 1 << start, length - 1):
            return True
    return False


def has_biclique(
    graph: Graph,
    m1: int,
    m2: int,
    respect_bipartition: bool = False,
    cap: int = TARGET_VERTEX_CAP,
) -> bool:
    """Exact test for disjoint sets A (|A|=m1), B (|B|=m2), all cross edges present.

    Enumerates candidate A-sets and checks the common neighborhood; with
    ``respect_bipartition`` A must lie in class 0 and B in class 1 of the
    host's labelling.
    """
    if m1 < 1 or m2 < 1:
        raise ValueError("biclique part sizes must be >= 1")
    if graph.n > cap:
        raise CapExceededError(
            f"biclique search capped at {cap} vertices, host has {graph.n}"
        )
    adj = graph.adjacency_bitsets()
    if respect_bipartition:
        if graph.side is None:
            raise ValueError("respect_bipartition needs a 2-class labelled host")
        v0, v1 = graph.side_vertices(0), graph.side_vertices(1)
        mask1 = 0
        for v in v1:
            mask1 |= 1 << v
        # both orientations of an asymmetric biclique across the classes count
        if _biclique_fixed_pools(adj, v0, mask1, m1, m2):
            return True
        if m1 != m2:
            return _biclique_fixed_pools(adj, v0, mask1, m2, m1)
        return False
    everything = list(range(graph.n))
    full = (1 << graph.n) - 1
    return _biclique_fixed_pools(adj, everything, full, m1, m2)


def _biclique_fixed_pools(
    adj: list[int], a_pool: list[int], b_mask: int, m1: int, m2: int
) -> bool:
    if len(a_pool) < m1:
        return False
    for a_set in combinations(a_pool, m1):
        common = b_mask
        for v in a_set:
            common &= adj[v]
            if common.bit_count() < m2:
                break
        else:
            for v in a_set:
                common &= ~(1 << v)
            if common.bit_count() >= m2:
                return True
    return False


def class_contains_target(
    graph_n: int,
    class_edges: tuple[tuple[int, int], ...],
    target: Target,
    side=None,
    respect_bipartition: bool = False,
) -> bool:
    sub = Graph(graph_n, class_edges, side=side)
    if isinstance(target, CycleTarget):
        return has_cycle_length(sub, target.length)
    return has_biclique(
        sub, target.m1, target.m2, respect_bipartition=respect_bipartition
    )


# ── colorings and results ────────────────────────────────────────────────────


@dataclass(frozen=True)
class EdgeColoring:
    """Total assignment of host edges to colors 1..k."""

    host: Graph
    colors: tuple[int, ...]  # parallel to host.edges

    def __post_init__(self):
        if len(self.colors) != self.host.edge_count:
            raise ValueError("coloring must assign every edge")
        if any(c < 1 for c in self.colors):
            raise ValueError("colors are 1-based positive integers")

    def color_class(self, color: int) -> tuple[tuple[int, int], ...]:
        return tuple(
            e for e, c in zip(self.host.edges, self.colors) if c == color
        )

    def serialize(self) -> str:
        lines = [
            f"{u} {v} {c}" for (u, v), c in zip(self.host.edges, self.colors)
        ]
        return "\n".join(lines) + "\n"


@dataclass
class ArrowResult:
    arrows: bool
    witness: Optional[EdgeColoring]
    colorings_examined: int
    elapsed: float

    def as_dict(self) -> dict:
        return {
            "arrows": self.arrows,
            "witness": None if self.witness is None else self.witness.serialize(),
            "colorings_examined": self.colorings_examined,
        }


def verify_coloring_avoids_targets(
    coloring: EdgeColoring,
    targets: tuple[Target, ...],
    respect_bipartition: bool = False,
) -> bool:
    """Independent witness check: no color class i contains target i."""
    host = coloring.host
    for i, target in enumerate(targets, start=1):
        if class_contains_target(
            host.n,
            coloring.color_class(i),
            target,
            side=host.side,
            respect_bipartition=respect_bipartition,
        ):
            return False
    return True


# ── the search ───────────────────────────────────────────────────────────────


def _search(
    host: Graph,
    targets: tuple[Target, ...],
    edge_cap: int,
    respect_bipartition: bool,
) -> ArrowResult:
    start_time = time.perf_counter()
    k = len(targets)
    m = host.edge_count
    if m > edge_cap:
        raise CapExceededError(
            f"arrow search capped at {edge_cap} edges, host has {m}"
        )

    # color edges in descending endpoint-degree order: dense corners first
    deg = host.degrees()
    order = sorted(range(m), key=lambda i: (-(deg[host.edges[i][0]] + deg[host.edges[i][1]]), i))
    edges = [host.edges[i] for i in order]

    # bitmask per color class over positions in `edges`
    cache: dict[tuple[int, int], bool] = {}

    def class_has_target(color: int, mask: int) -> bool:
        key = (color, mask)
        hit = cache.get(key)
        if hit is not None:
            return hit
        chosen = tuple(edges[i] for i in range(m) if mask >> i & 1)
        result = class_contains_target(
            host.n, chosen, targets[color - 1], side=host.side,
            respect_bipartition=respect_bipartition,
        )
        cache[key] = result
        return result

    assignments = 0
    colors = [0] * m
    masks = [0] * (k + 1)
    # when all targets coincide, color permutations act trivially: fix edge 0
    first_edge_choices = 1 if (m and len(set(targets)) == 1) else k

    def dfs(i: int) -> Optional[list[int]]:
        nonlocal assignments
        if i == m:
            return list(colors)
        allowed = range(1, first_edge_choices + 1) if i == 0 else range(1, k + 1)
        for c in allowed:
            assignments += 1
            masks[c] |= 1 << i
            colors[i] = c
            if not class_has_target(c, masks[c]):
                good = dfs(i + 1)
                if good is not None:
                    return good
            masks[c] &= ~(1 << i)
            colors[i] = 0
        return None

    good = dfs(0)
    elapsed = time.perf_counter() - start_time
    if good is None:
        return ArrowResult(True, None, assignments, elapsed)
    # map colors back to the host's canonical edge order
    by_edge = {edges[i]: good[i] for i in range(m)}
    witness = EdgeColoring(host, tuple(by_edge[e] for e in host.edges))
    if not verify_coloring_avoids_targets(
        witness, targets, respect_bipartition=respect_bipartition
    ):
        raise AssertionError("search returned an invalid witness")
    return ArrowResult(False, witness, assignments, elapsed)


def arrows(
    host: Graph,
    targets: tuple[Target, ...],
    edge_cap: int = ARROW_EDGE_CAP,
) -> ArrowResult:
    """Decide host -> (targets) by exhaustive pruned coloring search."""
    if not targets:
        raise ValueError("need at least one target")
    return _search(host, tuple(targets), edge_cap, respect_bipartition=False)


def bipartite_arrows(
    host: Graph,
    targets: tuple[Target, ...],
    edge_cap: int = ARROW_EDGE_CAP,
) -> ArrowResult:
    """Arrow semantics on a 2-class host; biclique targets respect the classes."""
    if host.side is None:
        raise ValueError("bipartite arrow check needs a 2-class labelled host")
    if not targets:
        raise ValueError("need at least one target")
    return _search(host, tuple(targets), edge_cap, respect_bipartition=True)


def find_good_coloring(
    host: Graph,
    targets: tuple[Target, ...],
    edge_cap: int = ARROW_EDGE_CAP,
) -> Optional[EdgeColoring]:
    """A coloring with no monochromatic target, or None iff host arrows targets."""
    return arrows(host, targets, edge_cap=edge_cap).witness


__all__ = [
    "CycleTarget",
    "BicliqueTarget",
    "Target",
    "parse_targets",
    "has_cycle_length",
    "has_biclique",
    "EdgeColoring",
    "ArrowResult",
    "arrows",
    "bipartite_arrows",
    "find_good_coloring",
    "verify_coloring_avoids_targets",
    "ARROW_EDGE_CAP",
    "TARGET_VERTEX_CAP",
]
