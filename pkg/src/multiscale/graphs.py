"""Signatures, stable trees and enhanced level graphs in genus zero.

A stable tree is stored as a tuple of leg tuples (one per vertex) plus a
tuple of edges given as vertex-index pairs.  Marked points are labelled
``1..n``.  Internally a tree is also described by its *splits*: for each edge
the set of legs on the side not containing leg ``n``, encoded as a bitmask
(leg ``i`` is bit ``i - 1``).  A set of pairwise compatible splits determines
the tree up to isomorphism fixing the legs, which is how trees are enumerated.

Enhanced level graphs (:class:`LevelGraph`) compare equal exactly when they are
isomorphic by a bijection fixing the leg labels and preserving levels and
enhancements; equality and hashing go through :func:`canonical_form`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import PreconditionError, ResourceLimitError

DEFAULT_MAX_N = 9


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    """Orders ``m_1..m_n`` of the zeros and poles at the marked points."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(m) for m in self.orders)
        object.__setattr__(self, "orders", orders)
        if len(orders) < 3:
            raise PreconditionError(f"need at least 3 marked points, got n={len(orders)}")
        if sum(orders) != -2:
            raise PreconditionError(
                f"orders must sum to -2 in genus 0, got sum {sum(orders)} for {orders}"
            )

    @property
    def n(self) -> int:
        return len(self.orders)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        try:
            orders = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError as exc:
            raise PreconditionError(f"cannot parse signature {text!r}: {exc}") from None
        return cls(orders)

    def order(self, leg: int) -> int:
        """Order at marked point ``leg`` (1-based)."""
        return self.orders[leg - 1]

    def total(self, legs: Iterable[int]) -> int:
        return sum(self.orders[i - 1] for i in legs)

    def __iter__(self):
        return iter(self.orders)

    def __len__(self):
        return len(self.orders)

    def __str__(self):
        return ",".join(map(str, self.orders))


def as_signature(mu) -> Signature:
    if isinstance(mu, Signature):
        return mu
    if isinstance(mu, str):
        return Signature.parse(mu)
    return Signature(tuple(mu))


def check_bound(n: int, max_n: int | None) -> None:
    limit = DEFAULT_MAX_N if max_n is None else max_n
    if n > limit:
        raise ResourceLimitError(
            f"n={n} exceeds the enumeration bound {limit}; raise it explicitly to proceed"
        )


# ---------------------------------------------------------------------------
# stable trees


def _mask(legs: Iterable[int]) -> int:
    m = 0
    for i in legs:
        m |= 1 << (i - 1)
    return m


def _legs_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class StableTree:
    """A stable genus-0 dual graph: ``legs[v]`` are the marked points on vertex ``v``."""

    legs: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...] = ()

    @property
    def n(self) -> int:
        return sum(len(ls) for ls in self.legs)

    @property
    def num_vertices(self) -> int:
        return len(self.legs)

    def valence(self, v: int) -> int:
        return len(self.legs[v]) + sum((a == v) + (b == v) for a, b in self.edges)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """``adj[v]`` lists ``(edge index, neighbour)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.legs]
        for idx, (a, b) in enumerate(self.edges):
            adj[a].append((idx, b))
            adj[b].append((idx, a))
        return adj

    def validate(self) -> None:
        nv = len(self.legs)
        if nv == 0 or len(self.edges) != nv - 1:
            raise PreconditionError("a tree needs |edges| = |vertices| - 1")
        seen = sorted(i for ls in self.legs for i in ls)
        if seen != list(range(1, len(seen) + 1)):
            raise PreconditionError(f"legs must be exactly 1..n once each, got {seen}")
        for a, b in self.edges:
            if not (0 <= a < nv and 0 <= b < nv) or a == b:
                raise PreconditionError(f"bad edge {(a, b)}")
        # connectivity
        adj = self.adjacency()
        stack, reached = [0], {0}
        while stack:
            v = stack.pop()
            for _, w in adj[v]:
                if w not in reached:
                    reached.add(w)
                    stack.append(w)
        if len(reached) != nv:
            raise PreconditionError("tree is disconnected")
        for v in range(nv):
            if self.valence(v) < 3:
                raise PreconditionError(f"vertex {v} is unstable (valence {self.valence(v)})")

    def side_masks(self) -> list[int]:
        """For each edge, the leg bitmask of the side *not* containing leg ``n``."""
        n = self.n
        adj = self.adjacency()
        root = next(v for v, ls in enumerate(self.legs) if n in ls)
        out = [0] * len(self.edges)
        order, parent_edge = [root], {root: None}
        for v in order:
            for idx, w in adj[v]:
                if w not in parent_edge:
                    parent_edge[w] = idx
                    order.append(w)
        clade = [_mask(ls) for ls in self.legs]
        for v in reversed(order):
            idx = parent_edge[v]
            if idx is not None:
                out[idx] = clade[v]
                a, b = self.edges[idx]
                clade[a if b == v else b] |= clade[v]
        return out

    def splits(self) -> frozenset[int]:
        return frozenset(self.side_masks())

    @classmethod
    def from_splits(cls, n: int, splits: Iterable[int]) -> "StableTree":
        """Build the tree whose edges realise the given compatible splits.

        Vertex 0 carries leg ``n``; the vertex below split ``A`` carries the legs
        of ``A`` not covered by smaller splits.
        """
        ss = sorted(set(splits), key=lambda m: (-m.bit_count(), m))
        full = (1 << n) - 1
        clades = [full] + ss
        parents = []
        for i, a in enumerate(ss, start=1):
            best = 0
            for j in range(1, i):
                c = clades[j]
                if c & a == a and c != a and (best == 0 or c.bit_count() < clades[best].bit_count()):
                    best = j
            parents.append(best)
        own = list(clades)
        for i, p in enumerate(parents, start=1):
            own[p] &= ~clades[i]
        legs = tuple(_legs_of(m) for m in own)
        edges = tuple((p, i) for i, p in enumerate(parents, start=1))
        return cls(legs, edges)


def _all_splits(n: int) -> list[int]:
    rest = list(range(1, n))
    out = []
    for k in range(2, n - 1):
        for combo in combinations(rest, k):
            out.append(_mask(combo))
    return out


def _compatible(a: int, b: int) -> bool:
    c = a & b
    return c == 0 or c == a or c == b


def iter_split_sets(n: int, max_edges: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every set of pairwise compatible splits (one per stable tree)."""
    splits = _all_splits(n)
    cap = n - 3 if max_edges is None else min(max_edges, n - 3)
    chosen: list[int] = []

    def rec(start: int):
        yield tuple(chosen)
        if len(chosen) == cap:
            return
        for i in range(start, len(splits)):
            s = splits[i]
            if all(_compatible(s, c) for c in chosen):
                chosen.append(s)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


@lru_cache(maxsize=16)
def _stable_trees(n: int, max_edges: int | None) -> tuple[StableTree, ...]:
    sets = sorted(iter_split_sets(n, max_edges), key=lambda s: (len(s), sorted(s)))
    return tuple(StableTree.from_splits(n, s) for s in sets)


def enumerate_stable_trees(n: int, max_edges: int | None = None,
                           max_n: int | None = None) -> list[StableTree]:
    """All stable trees with legs ``1..n`` up to isomorphism fixing the legs.

    Ordered by number of edges, then by the sorted split masks.
    """
    if n < 3:
        raise PreconditionError("need n >= 3")
    check_bound(n, max_n)
    return list(_stable_trees(n, max_edges))


# ---------------------------------------------------------------------------
# half-edge orders


@dataclass(frozen=True, eq=False)
class HalfEdgeOrders:
    """Order of the differential at each half-edge, keyed by ``(edge index, vertex)``."""

    tree: StableTree
    mu: Signature
    order: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def at(self, edge: int, vertex: int) -> int:
        return self.order[(edge, vertex)]

    def is_horizontal(self, edge: int) -> bool:
        a, b = self.tree.edges[edge]
        return self.order[(edge, a)] == -1

    def upper(self, edge: int) -> int | None:
        """The endpoint carrying the non-negative order, or None for a horizontal edge."""
        a, b = self.tree.edges[edge]
        oa = self.order[(edge, a)]
        if oa == -1:
            return None
        return a if oa >= 0 else b

    def kappa(self, edge: int) -> int:
        a, b = self.tree.edges[edge]
        return max(self.order[(edge, a)], self.order[(edge, b)]) + 1

    def vertex_total(self, v: int) -> int:
        total = self.mu.total(self.tree.legs[v])
        for (e, w), o in self.order.items():
            if w == v:
                total += o
        return total


def derive_orders(tree: StableTree, mu) -> HalfEdgeOrders:
    """Forced half-edge orders on a tree, by peeling leaves.

    At a leaf the lone half-edge must bring the vertex total to ``-2``; its
    partner gets ``-2`` minus that.  The leaf is then removed and the
    procedure repeats on the smaller tree.
    """
    mu = as_signature(mu)
    if tree.n != mu.n:
        raise PreconditionError(f"tree has {tree.n} legs but signature has {mu.n} entries")
    acc = [mu.total(ls) for ls in tree.legs]
    adj = [dict() for _ in tree.legs]  # vertex -> {edge: neighbour}
    for idx, (a, b) in enumerate(tree.edges):
        adj[a][idx] = b
        adj[b][idx] = a
    order: dict[tuple[int, int], int] = {}
    leaves = [v for v in range(len(tree.legs)) if len(adj[v]) == 1]
    while leaves:
        v = leaves.pop()
        if len(adj[v]) != 1:
            continue
        (idx, w), = adj[v].items()
        here = -2 - acc[v]
        order[(idx, v)] = here
        order[(idx, w)] = -2 - here
        acc[v] += here
        acc[w] += -2 - here
        del adj[v][idx]
        del adj[w][idx]
        if len(adj[w]) == 1:
            leaves.append(w)
    return HalfEdgeOrders(tree, mu, order)


# ---------------------------------------------------------------------------
# enhanced level graphs


@dataclass(frozen=True, eq=False)
class LevelGraph:
    """An enhanced level graph on a stable tree.

    ``edges[e] = (upper, lower, kappa)``; for horizontal edges ``kappa == 0``
    and the endpoint order is immaterial.  Levels are normalised to
    ``0, -1, ..., -L``.
    """

    mu: tuple[int, ...]
    legs: tuple[tuple[int, ...], ...]
    levels: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...] = ()

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def num_levels(self) -> int:
        """Number of level passages ``L`` (levels below the top)."""
        return -min(self.levels)

    @property
    def horizontal_edges(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if e[2] == 0)

    @property
    def vertical_edges(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if e[2] > 0)

    @property
    def codim(self) -> int:
        return self.num_levels + len(self.horizontal_edges)

    @property
    def tree(self) -> StableTree:
        return StableTree(self.legs, tuple((a, b) for a, b, _ in self.edges))

    @property
    def signature(self) -> Signature:
        return Signature(self.mu)

    def orders(self) -> HalfEdgeOrders:
        return derive_orders(self.tree, self.mu)

    def vertices_at(self, level: int) -> tuple[int, ...]:
        return tuple(v for v, l in enumerate(self.levels) if l == level)

    def passages(self, edge: int) -> range:
        """Level passages crossed by an edge (passage ``i`` sits right above level ``-i``)."""
        u, w, k = self.edges[edge]
        if k == 0:
            return range(0)
        return range(-self.levels[u] + 1, -self.levels[w] + 1)

    @cached_property
    def canonical(self) -> bytes:
        return canonical_form(self)

    def __eq__(self, other):
        if not isinstance(other, LevelGraph):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __lt__(self, other):
        return (self.codim, self.canonical) < (other.codim, other.canonical)

    def __repr__(self):
        parts = []
        for v, ls in enumerate(self.legs):
            parts.append(f"v{v}@{self.levels[v]}{list(ls)}")
        es = [f"{a}-{b}:{k}" for a, b, k in self.edges]
        return f"LevelGraph(mu={self.mu}, {' '.join(parts)}; {' '.join(es)})"

    def validate(self) -> None:
        """Check every structural invariant; raise PreconditionError otherwise."""
        mu = as_signature(self.mu)
        if len(self.levels) != len(self.legs):
            raise PreconditionError("one level per vertex required")
        self.tree.validate()
        if sorted(set(self.levels)) != list(range(-self.num_levels, 1)):
            raise PreconditionError(f"levels must be exactly 0..-L, got {sorted(set(self.levels))}")
        orders = derive_orders(self.tree, mu)
        for idx, (u, w, k) in enumerate(self.edges):
            if orders.is_horizontal(idx):
                if k != 0 or self.levels[u] != self.levels[w]:
                    raise PreconditionError(f"edge {idx} is forced horizontal (orders -1/-1)")
                continue
            if k != orders.kappa(idx):
                raise PreconditionError(f"edge {idx}: kappa {k} but orders force {orders.kappa(idx)}")
            if orders.upper(idx) != u:
                raise PreconditionError(f"edge {idx}: vertex {u} cannot be the upper end")
            if not self.levels[u] > self.levels[w]:
                raise PreconditionError(f"edge {idx}: vertical edge must go strictly down")


def make_graph(mu, legs: Sequence[Sequence[int]], levels: Sequence[int],
               edges: Sequence[tuple[int, int]]) -> LevelGraph:
    """Build a level graph from a tree and levels, deriving the enhancements.

    Raises PreconditionError if the levels are incompatible with the forced
    edge orientations.
    """
    mu = as_signature(mu)
    top = max(levels)
    levels = tuple(l - top for l in levels)
    tree = StableTree(tuple(tuple(sorted(ls)) for ls in legs), tuple(tuple(e) for e in edges))
    orders = derive_orders(tree, mu)
    out = []
    for idx, (a, b) in enumerate(tree.edges):
        if orders.is_horizontal(idx):
            out.append((a, b, 0))
        else:
            u = orders.upper(idx)
            out.append((u, b if u == a else a, orders.kappa(idx)))
    g = LevelGraph(mu.orders, tree.legs, levels, tuple(out))
    g.validate()
    return g


def canonical_form(graph: LevelGraph) -> bytes:
    """Byte encoding that is equal for two graphs iff they are isomorphic.

    The tree is rooted at the vertex carrying leg 1 and serialised bottom-up as
    ``[level, legs, kappa to parent, sorted child codes]``.  Each subtree carries
    at least one leg, so sibling codes never tie.
    """
    nv = len(graph.legs)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for a, b, k in graph.edges:
        adj[a].append((b, k))
        adj[b].append((a, k))
    root = next(v for v, ls in enumerate(graph.legs) if 1 in ls)
    order, parent = [root], {root: (-1, 0)}
    for v in order:
        for w, k in adj[v]:
            if w not in parent:
                parent[w] = (v, k)
                order.append(w)
    code: dict[int, list] = {}
    for v in reversed(order):
        kids = sorted((code[w] for w, _ in adj[v] if parent.get(w, (None,))[0] == v))
        code[v] = [graph.levels[v], sorted(graph.legs[v]), parent[v][1], kids]
    return json.dumps([list(graph.mu), code[root]], separators=(",", ":")).encode()


# ---------------------------------------------------------------------------
# level structures and strata


def _weak_orders(blocks: int, uppers: list[set[int]], num_levels: int | None):
    """Ordered set partitions of ``range(blocks)`` such that every block lies
    strictly below all blocks in ``uppers[b]``."""
    placed: set[int] = set()
    current: list[list[int]] = []

    def rec():
        if len(placed) == blocks:
            if num_levels is None or len(current) == num_levels + 1:
                yield [list(x) for x in current]
            return
        if num_levels is not None and len(current) > num_levels:
            return
        avail = [b for b in range(blocks) if b not in placed and uppers[b] <= placed]
        for r in range(1, len(avail) + 1):
            for subset in combinations(avail, r):
                current.append(list(subset))
                placed.update(subset)
                yield from rec()
                placed.difference_update(subset)
                current.pop()

    yield from rec()


def enumerate_level_structures(tree: StableTree, orders: HalfEdgeOrders,
                               num_levels: int | None = None) -> list[LevelGraph]:
    """All level functions compatible with the forced edge orientations.

    Vertical edges must go strictly down from the endpoint of non-negative
    order; horizontal edges join equal levels.  ``num_levels`` restricts to a
    given number of level passages.
    """
    nv = len(tree.legs)
    uf = list(range(nv))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    edges = []
    for idx, (a, b) in enumerate(tree.edges):
        if orders.is_horizontal(idx):
            uf[find(a)] = find(b)
            edges.append((a, b, 0))
        else:
            u = orders.upper(idx)
            edges.append((u, b if u == a else a, orders.kappa(idx)))
    roots = sorted({find(v) for v in range(nv)})
    block_of = {r: i for i, r in enumerate(roots)}
    block = [block_of[find(v)] for v in range(nv)]
    uppers: list[set[int]] = [set() for _ in roots]
    for u, w, k in edges:
        if k:
            uppers[block[w]].add(block[u])
    out = []
    mu = orders.mu.orders
    for levels in _weak_orders(len(roots), uppers, num_levels):
        lev = [0] * nv
        for depth, bs in enumerate(levels):
            for b in bs:
                for v in range(nv):
                    if block[v] == b:
                        lev[v] = -depth
        out.append(LevelGraph(mu, tree.legs, tuple(lev), tuple(edges)))
    return out


def enumerate_strata(mu, codim: int | None = None, max_n: int | None = None) -> list[LevelGraph]:
    """Every enhanced level graph compatible with ``mu``, sorted by (codim, canonical form)."""
    mu = as_signature(mu)
    check_bound(mu.n, max_n)
    out = []
    for tree in enumerate_stable_trees(mu.n, max_n=max_n):
        orders = derive_orders(tree, mu)
        if codim is None:
            out.extend(enumerate_level_structures(tree, orders))
            continue
        h = sum(orders.is_horizontal(i) for i in range(len(tree.edges)))
        has_vertical = h < len(tree.edges)
        levels = codim - h
        if levels < 0 or (levels == 0) == has_vertical:
            continue
        out.extend(enumerate_level_structures(tree, orders, num_levels=levels))
    out.sort(key=lambda g: (g.codim, g.canonical))
    return out


# ---------------------------------------------------------------------------
# contractions


def _contract(graph: LevelGraph, contract: set[int], new_level: Sequence[int]) -> LevelGraph:
    """Contract the given edges, assign ``new_level[v]`` to the image of ``v``,
    and re-derive the enhancements on the contracted tree."""
    nv = len(graph.legs)
    uf = list(range(nv))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    for idx in contract:
        a, b, _ = graph.edges[idx]
        uf[find(a)] = find(b)
    ids: dict[int, int] = {}
    for v in range(nv):
        ids.setdefault(find(v), len(ids))
    legs: list[list[int]] = [[] for _ in ids]
    levels = [None] * len(ids)
    for v in range(nv):
        i = ids[find(v)]
        legs[i].extend(graph.legs[v])
        if levels[i] is None:
            levels[i] = new_level[v]
        elif levels[i] != new_level[v]:
            raise AssertionError("contracted vertices land on different levels")
    kept = [(idx, e) for idx, e in enumerate(graph.edges) if idx not in contract]
    tree = StableTree(tuple(tuple(sorted(ls)) for ls in legs),
                      tuple((ids[find(a)], ids[find(b)]) for _, (a, b, _) in kept))
    orders = derive_orders(tree, graph.mu)
    edges = []
    for j, (idx, (a, b, k)) in enumerate(kept):
        ta, tb = tree.edges[j]
        if orders.is_horizontal(j):
            edges.append((ta, tb, 0))
        else:
            u = orders.upper(j)
            edges.append((u, tb if u == ta else ta, orders.kappa(j)))
        if edges[-1][2] != k:
            raise AssertionError("contraction changed an enhancement")
    top = max(levels)
    return LevelGraph(graph.mu, tree.legs, tuple(l - top for l in levels), tuple(edges))


def undegenerate(graph: LevelGraph, keep: Iterable[int]) -> LevelGraph:
    """Keep only the level passages in ``keep`` (1-based) and collapse the rest.

    Vertical edges not crossing a kept passage are contracted; horizontal
    edges survive.
    """
    keep = sorted(set(keep))
    L = graph.num_levels
    if not keep or keep[0] < 1 or keep[-1] > L:
        raise PreconditionError(f"keep must be a nonempty subset of 1..{L}, got {keep}")
    new_level = [-sum(1 for i in keep if i <= -l) for l in graph.levels]
    contract = {idx for idx, (u, w, k) in enumerate(graph.edges)
                if k and new_level[u] == new_level[w]}
    return _contract(graph, contract, new_level)


def smooth_horizontal(graph: LevelGraph, keep: Iterable[int] = ()) -> LevelGraph:
    """Contract every horizontal edge except those (by index) in ``keep``."""
    keep = set(keep)
    contract = {i for i in graph.horizontal_edges if i not in keep}
    return _contract(graph, contract, graph.levels)


def contract_levels(graph: LevelGraph) -> LevelGraph:
    """Collapse all level passages, keeping only the horizontal edges."""
    contract = set(graph.vertical_edges)
    return _contract(graph, contract, [0] * len(graph.legs))


# ---------------------------------------------------------------------------
# serialisation


def graph_to_json(graph: LevelGraph) -> dict:
    return {
        "vertices": [{"level": l, "legs": list(ls)} for l, ls in zip(graph.levels, graph.legs)],
        "edges": [{"u": a, "v": b, "kappa": k} for a, b, k in graph.edges],
        "mu": list(graph.mu),
    }


def graph_from_json(data: Mapping) -> LevelGraph:
    try:
        mu = as_signature(data["mu"])
        legs = tuple(tuple(sorted(int(i) for i in v["legs"])) for v in data["vertices"])
        levels = tuple(int(v["level"]) for v in data["vertices"])
        edges = tuple((int(e["u"]), int(e["v"]), int(e["kappa"])) for e in data["edges"])
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed graph JSON: {exc!r}") from None
    g = LevelGraph(mu.orders, legs, levels, edges)
    g.validate()
    return g
