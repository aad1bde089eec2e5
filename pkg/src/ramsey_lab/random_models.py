"""Seeded random-graph samplers and crossing-hole detection.

Three models: the binomial random graph, its bipartite variant, and the
random regular multigraph sampled by pairing d labelled points per vertex
and projecting a uniform perfect matching of the points.

A *hole* is a pair of disjoint equal-size vertex sets with no edge between
them (for 2-class hosts, one set per class).  Graphs dense enough to have
no hole of a given size are exactly the hosts the long-cycle machinery
needs, so this module estimates hole probabilities by seeded Monte Carlo:
exhaustive branch-and-bound search at small scale, a verified greedy
heuristic above it.

Randomness policy: one generator family (PCG64) behind numpy's Generator,
and trial i of any experiment draws from the child sequence
SeedSequence(seed, spawn_key=(i, ...)), so trials are reproducible
independently of execution order or thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import __version__
from .bounds import format_rational
from .errors import CapExceededError
from .constructions import Graph, serialize_edge_list

SeedLike = Union[int, np.random.SeedSequence]

HOLE_EXACT_VERTEX_CAP = 60
HOLE_EXACT_SIZE_CAP = 8

#: z for a central 95% normal interval
_Z95 = 1.959963984540054


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def child_seed(seed: int, *path: int) -> np.random.SeedSequence:
    """The documented stream-split rule: subtask `path` of experiment `seed`."""
    return np.random.SeedSequence(seed, spawn_key=tuple(path))


# ── multigraphs (pairing-model output) ───────────────────────────────────────


class Multigraph:
    """Undirected multigraph: loops and parallel edges allowed.

    Edges are a sorted multiset of (u, v) with u <= v; a loop contributes
    2 to its endpoint's degree.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges):
        self.n = n
        norm = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            norm.append((u, v) if u <= v else (v, u))
        self.edges = tuple(sorted(norm))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_simple(self) -> bool:
        return all(u != v for u, v in self.edges) and len(set(self.edges)) == len(
            self.edges
        )

    def support_graph(self) -> Graph:
        """Simple graph on the same vertices: loops dropped, multiplicities collapsed."""
        return Graph(self.n, {(u, v) for u, v in self.edges if u != v})

    def to_graph(self) -> Graph:
        if not self.is_simple():
            raise ValueError("multigraph has loops or parallel edges")
        return Graph(self.n, self.edges)

    def serialize(self) -> str:
        return serialize_edge_list(self.n, self.edges)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Multigraph(n={self.n}, edges={self.edge_count})"


# ── samplers ─────────────────────────────────────────────────────────────────


def _check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    return p


def sample_gnp(n: int, p: float, seed: SeedLike) -> Graph:
    """Binomial random graph: each pair independently an edge with probability p."""
    if n < 1:
        raise ValueError("need at least one vertex")
    p = _check_probability(p)
    rng = _rng(seed)
    iu, iv = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    return Graph(n, zip(iu[mask].tolist(), iv[mask].tolist()))


def sample_bipartite(n1: int, n2: int, p: float, seed: SeedLike) -> Graph:
    """Bipartite binomial random graph on classes of sizes n1 and n2."""
    if n1 < 1 or n2 < 1:
        raise ValueError("both classes need at least one vertex")
    p = _check_probability(p)
    rng = _rng(seed)
    mask = rng.random(n1 * n2) < p
    us, vs = np.divmod(np.flatnonzero(mask), n2)
    edges = zip(us.tolist(), (n1 + vs).tolist())
    return Graph(n1 + n2, edges, side=[0] * n1 + [1] * n2)


def _pairing_edges(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """One pairing-model draw: (n*d//2, 2) array of bucket pairs, u <= v."""
    points = rng.permutation(n * d)
    buckets = points // d
    pairs = buckets.reshape(-1, 2)
    pairs.sort(axis=1)
    return pairs


def _pairs_simple(pairs: np.ndarray, n: int) -> bool:
    if np.any(pairs[:, 0] == pairs[:, 1]):
        return False
    codes = pairs[:, 0] * n + pairs[:, 1]
    return np.unique(codes).shape[0] == codes.shape[0]


def sample_pairing(
    n: int,
    d: int,
    seed: SeedLike,
    simple_only: bool = False,
):
    """d-regular random multigraph via the pairing (configuration) model.

    n*d labelled points, d per vertex, are matched uniformly at random and
    the matching is projected to vertices.  Every vertex gets degree
    exactly d, loops counting twice.  With ``simple_only`` the draw is
    rejection-resampled until simple and the result is ``(Graph,
    attempts)``; otherwise a single ``Multigraph`` is returned.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if (n * d) % 2:
        raise ValueError(f"n*d = {n * d} is odd: no perfect matching of the points")
    if simple_only and d >= n:
        raise ValueError(
            f"no simple {d}-regular graph on {n} vertices exists; rejection "
            "sampling would never terminate"
        )
    rng = _rng(seed)
    attempts = 0
    while True:
        attempts += 1
        pairs = _pairing_edges(n, d, rng)
        deg = np.bincount(pairs.ravel(), minlength=n)
        if not np.all(deg == d):
            raise AssertionError("pairing projection broke the degree invariant")
        if not simple_only:
            return Multigraph(n, map(tuple, pairs.tolist()))
        if _pairs_simple(pairs, n):
            return Graph(n, map(tuple, pairs.tolist())), attempts


# ── hole witnesses ───────────────────────────────────────────────────────────


@dataclass(frozen=True)
class HoleWitness:
    """Two disjoint equal-size vertex sets with no edge between them."""

    left: frozenset
    right: frozenset

    def as_sorted_lists(self) -> tuple[list[int], list[int]]:
        return sorted(self.left), sorted(self.right)


def verify_hole(graph: Graph, witness: HoleWitness, size: Optional[int] = None) -> bool:
    """Independent re-check of every HoleWitness invariant."""
    left, right = witness.left, witness.right
    if left & right or len(left) != len(right) or not left:
        return False
    if size is not None and len(left) != size:
        return False
    if not all(0 <= v < graph.n for v in left | right):
        return False
    if graph.side is not None:
        sides_l = {graph.side[v] for v in left}
        sides_r = {graph.side[v] for v in right}
        if len(sides_l) != 1 or len(sides_r) != 1 or sides_l == sides_r:
            return False
    adj = graph.adjacency_bitsets()
    right_mask = 0
    for v in right:
        right_mask |= 1 << v
    return all(adj[u] & right_mask == 0 for u in left)


def _mask_first_bits(mask: int, k: int) -> frozenset:
    out = []
    while mask and len(out) < k:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def find_hole_exact(
    graph: Graph,
    s: int,
    vertex_cap: int = HOLE_EXACT_VERTEX_CAP,
    size_cap: int = HOLE_EXACT_SIZE_CAP,
) -> Optional[HoleWitness]:
    """Exhaustive hole search; None is a proof that no hole of size s exists.

    Branch-and-bound over the left set in increasing vertex order,
    maintaining the bitmask of still-compatible right vertices and pruning
    when it drops below s.  For 2-class hosts the left set ranges over
    class 0 and the right pool over class 1; otherwise a witness swap
    symmetry lets the right pool start above the left set's minimum.
    """
    if graph.n > vertex_cap:
        raise CapExceededError(
            f"exact hole search capped at {vertex_cap} vertices, host has {graph.n}"
        )
    if s > size_cap:
        raise CapExceededError(f"exact hole search capped at size {size_cap}, got {s}")
    if s < 1:
        raise ValueError("hole size must be at least 1")
    adj = graph.adjacency_bitsets()
    n = graph.n

    if graph.side is not None:
        left_vertices = graph.side_vertices(0)
        pool0 = 0
        for v in graph.side_vertices(1):
            pool0 |= 1 << v
    else:
        left_vertices = list(range(n))
        pool0 = (1 << n) - 1

    chosen: list[int] = []

    def extend(start_idx: int, pool: int) -> Optional[HoleWitness]:
        if len(chosen) == s:
            if pool.bit_count() >= s:
                return HoleWitness(frozenset(chosen), _mask_first_bits(pool, s))
            return None
        for idx in range(start_idx, len(left_vertices)):
            if len(left_vertices) - idx < s - len(chosen):
                break
            v = left_vertices[idx]
            new_pool = pool & ~adj[v] & ~(1 << v)
            if graph.side is None and not chosen:
                # swap symmetry: assume the overall minimum vertex sits on the left
                new_pool &= -1 << (v + 1)
            if new_pool.bit_count() < s:
                continue
            chosen.append(v)
            found = extend(idx + 1, new_pool)
            if found is not None:
                return found
            chosen.pop()
        return None

    return extend(0, pool0)


def find_hole_heuristic(
    graph: Graph,
    s: int,
    iters: int = 2000,
    seed: SeedLike = 0,
) -> Optional[HoleWitness]:
    """Randomized greedy hole search: one-sided (a miss proves nothing).

    Each restart grows the two sets together, usually extending the
    currently smaller side with whichever of a few sampled candidates
    eliminates the fewest options for the other side.  Pure greedy gets
    systematically stuck (e.g. it splits isolated vertices evenly across
    the sides even when the only hole needs them together), so side order
    and candidate choice are each randomized part of the time.  Any find
    is re-verified against the invariants before being returned.
    """
    if s < 1:
        raise ValueError("hole size must be at least 1")
    n = graph.n
    if 2 * s > n:
        return None
    rng = _rng(seed)
    dense = np.zeros((n, n), dtype=bool)
    for u, v in graph.edges:
        dense[u, v] = dense[v, u] = True

    if graph.side is not None:
        side = np.asarray(graph.side, dtype=np.int64)
        base_left, base_right = side == 0, side == 1
        if base_left.sum() < s or base_right.sum() < s:
            return None
    else:
        base_left = base_right = np.ones(n, dtype=bool)

    for _ in range(max(1, iters)):
        ok_left = base_left.copy()
        ok_right = base_right.copy()
        left: list[int] = []
        right: list[int] = []
        while len(left) < s or len(right) < s:
            if len(left) == s:
                grow_left = False
            elif len(right) == s:
                grow_left = True
            elif len(left) != len(right):
                grow_left = len(left) < len(right)
            else:
                grow_left = bool(rng.integers(2))
            ok_here = ok_left if grow_left else ok_right
            ok_other = ok_right if grow_left else ok_left
            pool = np.flatnonzero(ok_here)
            if pool.shape[0] == 0:
                break
            if rng.random() < 0.4:
                v = int(pool[rng.integers(pool.shape[0])])
            else:
                cands = (
                    pool if pool.shape[0] <= 8 else rng.choice(pool, size=8, replace=False)
                )
                damage = [int(np.count_nonzero(dense[c] & ok_other)) for c in cands]
                v = int(cands[int(np.argmin(damage))])
            (left if grow_left else right).append(v)
            ok_left[v] = ok_right[v] = False
            ok_other &= ~dense[v]
        if len(left) == s and len(right) == s:
            witness = HoleWitness(frozenset(left), frozenset(right))
            if graph.side is None and min(witness.right) < min(witness.left):
                witness = HoleWitness(witness.right, witness.left)
            if verify_hole(graph, witness, s):
                return witness
    return None


# ── Monte Carlo estimation ───────────────────────────────────────────────────


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials with trials >= 1")
    ph = successes / trials
    denom = 1.0 + z * z / trials
    center = ph + z * z / (2 * trials)
    radius = z * (ph * (1.0 - ph) / trials + z * z / (4.0 * trials * trials)) ** 0.5
    low = max(0.0, (center - radius) / denom)
    high = min(1.0, (center + radius) / denom)
    # the extreme endpoints are exactly 0 and 1; don't let rounding blur them
    if successes == 0:
        low = 0.0
    if successes == trials:
        high = 1.0
    return low, high


@dataclass
class TrialReport:
    """Outcome of a seeded hole-frequency experiment."""

    model: str
    params: dict
    trials: int
    holes: int
    freq: Fraction
    ci_low: float
    ci_high: float
    mode: str
    seed: int
    version: str = field(default=__version__)

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "params": self.params,
            "trials": self.trials,
            "holes": self.holes,
            "freq": format_rational(self.freq),
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "mode": self.mode,
            "seed": self.seed,
            "version": self.version,
        }


def _worker_count(max_workers: Optional[int]) -> int:
    if max_workers is not None:
        return max(1, int(max_workers))
    env = os.environ.get("RAMSEY_LAB_THREADS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValueError(f"RAMSEY_LAB_THREADS must be an integer, got {env!r}") from exc
    return 1


def estimate_hole_probability(
    model: str,
    n: int,
    s: int,
    trials: int,
    seed: int,
    *,
    p: Optional[float] = None,
    d: Optional[int] = None,
    mode: str = "auto",
    iters: int = 2000,
    max_workers: Optional[int] = None,
) -> TrialReport:
    """Seeded Monte Carlo estimate of P(sample contains a size-s hole).

    ``model`` is "gnp" (needs p), "bipartite" (classes of size n each,
    needs p), or "pairing" (needs integer degree d; the search runs on the
    simple support of the multigraph, which has the same holes).  ``mode``
    is "exact", "heuristic", or "auto" (exact whenever the caps allow).
    Trial i is seeded from (seed, i), so reports are identical for any
    worker count; workers default to 1 or the RAMSEY_LAB_THREADS env var.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if s < 1 or n < 1:
        raise ValueError("need n >= 1 and s >= 1")
    if model in ("gnp", "bipartite"):
        if p is None:
            raise ValueError(f"model {model!r} needs an edge probability p")
        p = _check_probability(p)
        if d is not None:
            raise ValueError(f"model {model!r} takes p, not d")
        params: dict = {"n": n, "s": s, "p": p}
        if model == "gnp" and 2 * s > n:
            raise ValueError("two disjoint s-sets need 2*s <= n")
        if model == "bipartite" and s > n:
            raise ValueError("each class holds only n vertices, need s <= n")
    elif model == "pairing":
        if d is None or p is not None:
            raise ValueError("model 'pairing' needs a degree d (and no p)")
        if d < 1 or (n * d) % 2:
            raise ValueError("pairing model needs d >= 1 with n*d even")
        if 2 * s > n:
            raise ValueError("two disjoint s-sets need 2*s <= n")
        params = {"n": n, "s": s, "d": d}
    else:
        raise ValueError(f"unknown model {model!r}")

    host_vertices = 2 * n if model == "bipartite" else n
    if mode == "auto":
        mode = (
            "exact"
            if host_vertices <= HOLE_EXACT_VERTEX_CAP and s <= HOLE_EXACT_SIZE_CAP
            else "heuristic"
        )
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown search mode {mode!r}")

    def run_trial(i: int) -> bool:
        sample_seed = child_seed(seed, i, 0)
        if model == "gnp":
            g = sample_gnp(n, p, sample_seed)
        elif model == "bipartite":
            g = sample_bipartite(n, n, p, sample_seed)
        else:
            g = sample_pairing(n, d, sample_seed).support_graph()
        if mode == "exact":
            return find_hole_exact(g, s) is not None
        return find_hole_heuristic(g, s, iters=iters, seed=child_seed(seed, i, 1)) is not None

    workers = _worker_count(max_workers)
    indices = range(trials)
    if workers == 1:
        outcomes = [run_trial(i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_trial, indices))

    holes = sum(outcomes)
    ci_low, ci_high = wilson_interval(holes, trials)
    return TrialReport(
        model=model,
        params=params,
        trials=trials,
        holes=holes,
        freq=Fraction(holes, trials),
        ci_low=ci_low,
        ci_high=ci_high,
        mode=mode,
        seed=seed,
        version=__version__,
    )


__all__ = [
    "Multigraph",
    "HoleWitness",
    "TrialReport",
    "child_seed",
    "sample_gnp",
    "sample_bipartite",
    "sample_pairing",
    "find_hole_exact",
    "find_hole_heuristic",
    "verify_hole",
    "estimate_hole_probability",
    "wilson_interval",
    "HOLE_EXACT_VERTEX_CAP",
    "HOLE_EXACT_SIZE_CAP",
]
