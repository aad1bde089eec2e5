"""Deterministic graph and tree constructions.

Two tree builders drive everything:

* ``build_leaf_tree(n)`` — a bounded-degree rooted tree with exactly n
  leaves, all at depth ceil(log2(n)): a perfect binary tree when n is a
  power of two, otherwise one perfect tree per binary digit of n hung
  off a spine path so the leaf depths line up.
* ``build_connector_tree(m1, m2, n)`` — two leaf trees joined root-to-root
  by a path sized so that every (first-leaf-set, second-leaf-set) pair is
  at distance exactly n-1.

Also here: the shared simple-graph type used by the random models and the
arrow checker, the neighbourhood-expansion condition that guarantees
bounded-degree trees embed, a backtracking tree embedder to witness it at
desk scale, complete multipartite hosts, and the plain-text edge-list
serialisation every command shares.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CapExceededError


def ceil_log2(n: int) -> int:
    """Smallest k with 2**k >= n, for positive integers (ceil_log2(1) = 0)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {n!r}")
    return (n - 1).bit_length()


def binary_decomposition(n: int) -> list[int]:
    """Exponents of the set bits of n, descending: 5 -> [2, 0]."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"binary_decomposition needs a positive integer, got {n!r}")
    return [k for k in range(n.bit_length() - 1, -1, -1) if n >> k & 1]


# ── simple graphs ────────────────────────────────────────────────────────────


class Graph:
    """Immutable simple graph on vertices 0..n-1 with optional 2-class labels.

    ``side`` (when present) assigns each vertex 0 or 1; bipartite-aware
    code (crossing-hole search, class-respecting biclique containment)
    uses it, everything else ignores it.
    """

    __slots__ = ("n", "edges", "side", "_edge_set", "_adj")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        side: Optional[Sequence[int]] = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u} not allowed in a simple graph")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(norm))
        if side is not None:
            side = tuple(int(s) for s in side)
            if len(side) != n or any(s not in (0, 1) for s in side):
                raise ValueError("side must assign 0 or 1 to every vertex")
        self.side = side
        self._edge_set = frozenset(self.edges)
        self._adj: Optional[list[int]] = None

    # -- basic queries ------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def adjacency_bitsets(self) -> list[int]:
        """Per-vertex neighbourhoods as int bitmasks (cached)."""
        if self._adj is None:
            adj = [0] * self.n
            for u, v in self.edges:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            self._adj = adj
        return self._adj

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adjacency_bitsets()]

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.adjacency_bitsets()[v])

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, list(self.edges) + [(u, v)], self.side)

    def side_vertices(self, s: int) -> list[int]:
        if self.side is None:
            raise ValueError("graph carries no 2-class labelling")
        return [v for v in range(self.n) if self.side[v] == s]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
            and self.side == other.side
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges, self.side))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Graph(n={self.n}, edges={self.edge_count})"

    # -- constructors ---------------------------------------------------------

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, combinations(range(n), 2))

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        edges = [(u, a + v) for u in range(a) for v in range(b)]
        return cls(a + b, edges, side=[0] * a + [1] * b)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        edges = [(i, (i + 1) % n) for i in range(n)]
        side = [i % 2 for i in range(n)] if n % 2 == 0 else None
        return cls(n, edges, side=side)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [])


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def build_complete_multipartite(sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph with the given class sizes.

    Vertices are numbered class by class; with exactly two classes the
    result carries the natural 2-class labelling.
    """
    sizes = list(sizes)
    if not sizes or any(not isinstance(s, int) or s < 1 for s in sizes):
        raise ValueError("class sizes must be positive integers")
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    n = offsets[-1]
    edges = []
    for i in range(len(sizes)):
        for j in range(i + 1, len(sizes)):
            for u in range(offsets[i], offsets[i + 1]):
                for v in range(offsets[j], offsets[j + 1]):
                    edges.append((u, v))
    side = None
    if len(sizes) == 2:
        side = [0] * sizes[0] + [1] * sizes[1]
    return Graph(n, edges, side=side)


# ── rooted trees ─────────────────────────────────────────────────────────────


class RootedTree:
    """Rooted tree with vertex 0 as root, stored as parent/depth arrays.

    Ids are topological (parent[v] < v for v >= 1, parent[0] = -1), which
    keeps every check a single vectorised pass.  ``x_leaves``/``y_leaves``
    mark the two designated leaf sets of connector trees.
    """

    __slots__ = ("parent", "depth", "x_leaves", "y_leaves")

    def __init__(
        self,
        parent: np.ndarray,
        depth: np.ndarray,
        x_leaves: Optional[np.ndarray] = None,
        y_leaves: Optional[np.ndarray] = None,
    ):
        self.parent = np.asarray(parent, dtype=np.int64)
        self.depth = np.asarray(depth, dtype=np.int64)
        if self.parent.shape != self.depth.shape or self.parent.ndim != 1:
            raise ValueError("parent and depth must be equal-length 1-d arrays")
        if self.n == 0 or self.parent[0] != -1:
            raise ValueError("vertex 0 must be the root (parent -1)")
        self.x_leaves = None if x_leaves is None else np.asarray(x_leaves, dtype=np.int64)
        self.y_leaves = None if y_leaves is None else np.asarray(y_leaves, dtype=np.int64)

    @property
    def n(self) -> int:
        return len(self.parent)

    def children_counts(self) -> np.ndarray:
        return np.bincount(self.parent[1:], minlength=self.n)

    def degrees(self) -> np.ndarray:
        deg = self.children_counts()
        deg[1:] += 1
        return deg

    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self.children_counts() == 0)

    def max_degree(self) -> int:
        return int(self.degrees().max())

    def edges(self) -> list[tuple[int, int]]:
        return [(int(self.parent[v]), v) for v in range(1, self.n)]

    def to_graph(self) -> Graph:
        return Graph(self.n, self.edges())


def _perfect_tree_block(height: int, base: int, attach: int, attach_depth: int):
    """Heap-layout perfect binary tree of the given height as id block.

    Returns (parent, depth) global arrays for ids base..base+2**(height+1)-2,
    with the block root hung below vertex ``attach``.
    """
    size = 2 ** (height + 1) - 1
    local = np.arange(size, dtype=np.int64)
    parent = base + (local - 1) // 2
    parent[0] = attach
    lev = np.floor(np.log2(local + 1)).astype(np.int64)
    # np.log2 can misround at power-of-two boundaries for huge blocks; repair.
    lev += (local + 1) >> (lev + 1) > 0
    lev -= (np.int64(1) << lev) > local + 1
    depth = attach_depth + 1 + lev
    return parent, depth


def build_leaf_tree(n: int) -> RootedTree:
    """Rooted tree with exactly n leaves, all at depth ceil(log2(n)).

    Powers of two give the perfect binary tree on 2n-1 vertices.  Other n
    decompose into binary digits 2**t1 + ... + 2**tr (t1 > ... > tr); a
    spine path v_1..v_{t1-tr+1} carries one perfect tree of height t_i
    below v_{t1-t_i+1}, putting every leaf at depth t1 + 1 = ceil(log2(n)).
    Vertex count is at most 2n + ceil(log2(n)) - 2 and no degree exceeds 3
    (the root has degree at most 2).
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"leaf tree needs an integer n >= 2, got {n!r}")
    exps = binary_decomposition(n)
    if len(exps) == 1:
        parent, depth = _perfect_tree_block(exps[0], 0, -1, -1)
        return RootedTree(parent, depth)

    t1, tr = exps[0], exps[-1]
    spine = t1 - tr + 1
    parts_p = [np.arange(-1, spine - 1, dtype=np.int64)]
    parts_d = [np.arange(spine, dtype=np.int64)]
    base = spine
    for t in exps:
        attach = t1 - t  # spine vertex v_{t1 - t + 1}
        p, d = _perfect_tree_block(t, base, attach, attach)
        parts_p.append(p)
        parts_d.append(d)
        base += len(p)
    return RootedTree(np.concatenate(parts_p), np.concatenate(parts_d))


def _singleton_tree() -> RootedTree:
    return RootedTree(np.array([-1], dtype=np.int64), np.array([0], dtype=np.int64))


def _leaf_tree_or_singleton(m: int) -> RootedTree:
    return _singleton_tree() if m == 1 else build_leaf_tree(m)


def build_connector_tree(m1: int, m2: int, n: int) -> RootedTree:
    """Tree whose m1 x-leaves and m2 y-leaves are pairwise at distance n-1.

    Joins the two leaf trees by a root-to-root path of length
    n - 1 - ceil(log2(m1)) - ceil(log2(m2)), which must be at least 1.
    At most n + 2*m1 + 2*m2 vertices; maximum degree 3.  For even n the
    two leaf sets land in different classes of the unique 2-colouring.
    """
    if m1 < 1 or m2 < 1:
        raise ValueError("leaf counts m1, m2 must be positive")
    l1, l2 = ceil_log2(m1), ceil_log2(m2)
    path_len = n - 1 - l1 - l2
    if path_len < 1:
        raise ValueError(
            f"n={n} is too small: need n >= {2 + l1 + l2} so the joining path "
            f"has positive length"
        )
    t_x = _leaf_tree_or_singleton(m1)
    t_y = _leaf_tree_or_singleton(m2)
    v1 = t_x.n
    internals = path_len - 1
    base2 = v1 + internals

    # path internals: v1 .. v1+internals-1, hanging off the x-tree root (0)
    path_parent = np.arange(v1 - 1, v1 + internals - 1, dtype=np.int64)
    if internals:
        path_parent[0] = 0
    path_depth = np.arange(1, internals + 1, dtype=np.int64)

    y_parent = t_y.parent + base2
    y_parent[0] = base2 - 1 if internals else 0
    y_depth = t_y.depth + path_len

    parent = np.concatenate([t_x.parent, path_parent, y_parent])
    depth = np.concatenate([t_x.depth, path_depth, y_depth])
    x_leaves = t_x.leaves()
    y_leaves = t_y.leaves() + base2
    return RootedTree(parent, depth, x_leaves=x_leaves, y_leaves=y_leaves)


# ── invariant reports for the tree builders ──────────────────────────────────


def _tree_structure_ok(tree: RootedTree) -> bool:
    p, d = tree.parent, tree.depth
    v = len(p)
    ids = np.arange(v, dtype=np.int64)
    if p[0] != -1 or d[0] != 0:
        return False
    if v == 1:
        return True
    return bool(
        np.all(p[1:] >= 0)
        and np.all(p[1:] < ids[1:])
        and np.all(d[1:] == d[p[1:]] + 1)
    )


def verify_leaf_tree(tree: RootedTree, n: int) -> dict:
    """Invariant report for build_leaf_tree output (ok-flag plus measurements)."""
    leaves = tree.leaves()
    depths = tree.depth[leaves]
    deg = tree.degrees()
    uniform = len(leaves) > 0 and int(depths.min()) == int(depths.max())
    report = {
        "n": n,
        "vertices": tree.n,
        "vertex_bound": 2 * n + ceil_log2(n) - 2,
        "leaves": int(len(leaves)),
        "leaf_depth": int(depths[0]) if uniform else None,
        "expected_depth": ceil_log2(n),
        "max_degree": int(deg.max()),
        "root_degree": int(deg[0]),
    }
    report["ok"] = (
        _tree_structure_ok(tree)
        and report["leaves"] == n
        and uniform
        and report["leaf_depth"] == report["expected_depth"]
        and report["vertices"] <= report["vertex_bound"]
        and report["max_degree"] <= 3
        and report["root_degree"] <= 2
    )
    return report


def _branch_below_root(v: int, parent: np.ndarray, memo: dict) -> int:
    """The child-of-root ancestor of v (or -1 for the root itself)."""
    if v == 0:
        return -1
    trail = []
    while v not in memo and parent[v] != 0:
        trail.append(v)
        v = int(parent[v])
    b = memo.get(v, v)
    for u in trail:
        memo[u] = b
    return b


def verify_connector_tree(tree: RootedTree, m1: int, m2: int, n: int) -> dict:
    """Invariant report for build_connector_tree output.

    Pairwise x-y distances are verified through the rooted-tree identity
    dist(x, y) = depth(x) + depth(y) whenever x and y sit in different
    branches below the root; branch membership is recomputed from the
    parent array, not assumed from the construction.
    """
    x, y = tree.x_leaves, tree.y_leaves
    report = {
        "m1": m1,
        "m2": m2,
        "n": n,
        "vertices": tree.n,
        "vertex_bound": n + 2 * m1 + 2 * m2,
        "max_degree": tree.max_degree(),
        "distance": None,
        "parity_ok": None,
    }
    ok = (
        _tree_structure_ok(tree)
        and x is not None
        and y is not None
        and len(x) == m1
        and len(y) == m2
        and tree.n <= report["vertex_bound"]
        and report["max_degree"] <= 3
    )
    if ok:
        dx, dy = tree.depth[x], tree.depth[y]
        memo: dict = {}
        bx = {_branch_below_root(int(v), tree.parent, memo) for v in x}
        by = {_branch_below_root(int(v), tree.parent, memo) for v in y}
        uniform = (
            int(dx.min()) == int(dx.max()) and int(dy.min()) == int(dy.max())
        )
        disjoint = not (bx & by)
        if uniform and disjoint:
            report["distance"] = int(dx[0]) + int(dy[0])
            ok = report["distance"] == n - 1
            if n % 2 == 0:
                report["parity_ok"] = (int(dx[0]) - int(dy[0])) % 2 == 1
                ok = ok and report["parity_ok"]
        else:
            ok = False
    report["ok"] = bool(ok)
    return report


# ── neighbourhood expansion and tree embedding ───────────────────────────────


def expansion_condition_check(
    graph: Graph,
    n_tree: int,
    d: int,
    cap: int = 24,
) -> tuple[bool, Optional[frozenset]]:
    """Does every set X with 1 <= |X| <= 2*n_tree - 2 satisfy |N(X)| >= (d+1)|X|?

    This is the expansion hypothesis under which every tree on n_tree
    vertices with maximum degree <= d embeds.  Exhaustive over subsets,
    smallest sizes first, so a returned violation is minimum-size.
    N(X) is the union of neighbourhoods (it may intersect X).
    """
    if graph.n > cap:
        raise CapExceededError(
            f"expansion check enumerates subsets; |V|={graph.n} exceeds cap {cap}"
        )
    if n_tree < 1 or d < 0:
        raise ValueError("need n_tree >= 1 and d >= 0")
    adj = graph.adjacency_bitsets()
    top = min(2 * n_tree - 2, graph.n)
    for size in range(1, top + 1):
        need = (d + 1) * size
        for xs in combinations(range(graph.n), size):
            hood = 0
            for v in xs:
                hood |= adj[v]
            if hood.bit_count() < need:
                return False, frozenset(xs)
    return True, None


def embed_tree_backtracking(
    graph: Graph,
    tree: RootedTree,
    cap: int = 40,
) -> Optional[dict[int, int]]:
    """Injective adjacency-preserving embedding of the tree, or None.

    Backtracks over tree vertices in id order (parents first), mapping
    each child to an unused neighbour of its parent's image.  Exhaustive:
    None means no embedding exists.
    """
    if graph.n > cap:
        raise CapExceededError(
            f"embedding host has {graph.n} vertices, cap is {cap}"
        )
    nt = tree.n
    if nt > graph.n:
        return None
    children = [[] for _ in range(nt)]
    for v in range(1, nt):
        children[int(tree.parent[v])].append(v)
    # a tree vertex with k children needs an image of degree >= k (+1 off-root)
    need = [len(children[v]) + (1 if v else 0) for v in range(nt)]
    adj = graph.adjacency_bitsets()
    deg = graph.degrees()
    image = [-1] * nt

    def place(v: int, used: int):
        if v == nt:
            return True
        if v == 0:
            candidates = range(graph.n)
        else:
            candidates = _bits(adj[image[int(tree.parent[v])]] & ~used)
        for g_v in candidates:
            if used >> g_v & 1 or deg[g_v] < need[v]:
                continue
            image[v] = g_v
            if place(v + 1, used | 1 << g_v):
                return True
        image[v] = -1
        return False

    if place(0, 0):
        return {v: image[v] for v in range(nt)}
    return None


# ── edge-list serialisation ──────────────────────────────────────────────────


def serialize_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> str:
    """Shared plain-text format: header "n m", then sorted "u v" lines (u < v)."""
    norm = sorted((u, v) if u < v else (v, u) for u, v in edges)
    lines = [f"{n} {len(norm)}"]
    lines.extend(f"{u} {v}" for u, v in norm)
    return "\n".join(lines) + "\n"


def serialize_graph(graph: Graph) -> str:
    return serialize_edge_list(graph.n, graph.edges)


def serialize_tree(tree: RootedTree) -> str:
    return serialize_edge_list(tree.n, tree.edges())


def parse_edge_list(text: str) -> Graph:
    """Inverse of serialize_graph (comment lines starting with '#' ignored)."""
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows:
        raise ValueError("empty edge-list document")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError(f"header must be 'n m', got {rows[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(rows) - 1 != m:
        raise ValueError(f"header promises {m} edges, found {len(rows) - 1}")
    edges = []
    for ln in rows[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges)


__all__ = [
    "Graph",
    "RootedTree",
    "ceil_log2",
    "binary_decomposition",
    "build_leaf_tree",
    "build_connector_tree",
    "verify_leaf_tree",
    "verify_connector_tree",
    "build_complete_multipartite",
    "expansion_condition_check",
    "embed_tree_backtracking",
    "serialize_edge_list",
    "serialize_graph",
    "serialize_tree",
    "parse_edge_list",
]
