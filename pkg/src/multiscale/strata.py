"""Divisor intersections, profiles and stratum censuses.

Every stratum of codimension ``r`` lies on exactly ``r`` boundary divisors:
one vertical divisor per level passage (keep that passage, collapse the
others, smooth the horizontal nodes) and one horizontal divisor per
horizontal edge.  The vertical ones come with an order, the *profile*.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .errors import PreconditionError
from .graphs import (LevelGraph, _contract, as_signature, check_bound, enumerate_strata,
                     graph_to_json)


@dataclass(frozen=True)
class Profile:
    """Ordered vertical divisors plus an unordered set of horizontal ones."""

    entries: tuple[LevelGraph, ...]
    horizontal: frozenset[LevelGraph] = frozenset()

    def __post_init__(self):
        for d in self.entries:
            if not is_vertical_divisor(d):
                raise PreconditionError("profile entries must be vertical divisors")
        for d in self.horizontal:
            if not is_horizontal_divisor(d):
                raise PreconditionError("horizontal part must hold horizontal divisors")
        if len(set(self.entries)) != len(self.entries):
            raise PreconditionError("a profile has no repeated entry")

    @property
    def divisors(self) -> frozenset[LevelGraph]:
        return frozenset(self.entries) | self.horizontal

    def to_json(self) -> dict:
        return {"vertical": [graph_to_json(g) for g in self.entries],
                "horizontal": [graph_to_json(g) for g in sorted(self.horizontal)]}


@dataclass(frozen=True)
class StratumCensus:
    counts: dict[int, int]
    exceptional_divisors: tuple[LevelGraph, ...] = field(default=())

    def to_json(self) -> dict:
        return {"counts": {str(k): v for k, v in sorted(self.counts.items())},
                "exceptional": [graph_to_json(g) for g in self.exceptional_divisors]}


def is_vertical_divisor(g: LevelGraph) -> bool:
    return g.num_levels == 1 and not g.horizontal_edges


def is_horizontal_divisor(g: LevelGraph) -> bool:
    return g.num_levels == 0 and len(g.edges) == 1


def is_exceptional(g: LevelGraph) -> bool:
    """A vertical divisor whose dual tree has at least two edges."""
    return is_vertical_divisor(g) and len(g.edges) >= 2


def vertical_face(graph: LevelGraph, i: int) -> LevelGraph:
    """The divisor keeping only level passage ``i`` (horizontal nodes smoothed)."""
    L = graph.num_levels
    if not 1 <= i <= L:
        raise PreconditionError(f"passage {i} out of range 1..{L}")
    new_level = [-int(-l >= i) for l in graph.levels]
    contract = {idx for idx, (u, w, _) in enumerate(graph.edges) if new_level[u] == new_level[w]}
    return _contract(graph, contract, new_level)


def horizontal_face(graph: LevelGraph, edge: int) -> LevelGraph:
    """The horizontal divisor carried by the horizontal edge ``edge``."""
    if graph.edges[edge][2] != 0:
        raise PreconditionError(f"edge {edge} is not horizontal")
    contract = set(range(len(graph.edges))) - {edge}
    return _contract(graph, contract, [0] * len(graph.legs))


def divisor_faces(graph: LevelGraph) -> Profile:
    """The profile of ``graph``: its vertical divisors in passage order and its horizontal ones."""
    vert = tuple(vertical_face(graph, i) for i in range(1, graph.num_levels + 1))
    hor = frozenset(horizontal_face(graph, e) for e in graph.horizontal_edges)
    return Profile(vert, hor)


def _faces_raw(graph: LevelGraph) -> tuple[list[LevelGraph], list[LevelGraph]]:
    """Like divisor_faces, but keeps repeats (used to test that they never occur)."""
    vert = [vertical_face(graph, i) for i in range(1, graph.num_levels + 1)]
    hor = [horizontal_face(graph, e) for e in graph.horizontal_edges]
    return vert, hor


def intersection_profile(divisors: Iterable[LevelGraph], mu, max_n: int | None = None):
    """Resolve an intersection of distinct boundary divisors.

    Returns ``(profile, realizations)`` where ``realizations`` lists every
    codimension-``r`` stratum lying on exactly the given divisors, or None if
    the intersection is empty (including when a divisor is repeated).
    """
    mu = as_signature(mu)
    divisors = list(divisors)
    if not divisors:
        raise PreconditionError("need at least one divisor")
    for d in divisors:
        if tuple(d.mu) != mu.orders:
            raise PreconditionError("divisor belongs to a different signature")
        if not (is_vertical_divisor(d) or is_horizontal_divisor(d)):
            raise PreconditionError(f"not a divisorial graph: {d!r}")
    target = frozenset(divisors)
    if len(target) != len(divisors):
        return None
    check_bound(mu.n, max_n)
    hits = _codim_index(mu.orders, len(divisors), max_n).get(target)
    if not hits:
        return None
    realizations = [g for g, _ in hits]
    profiles = {entries for _, entries in hits}
    if len(profiles) != 1:
        raise AssertionError(f"divisor set {target} admits {len(profiles)} orderings")
    entries = profiles.pop()
    return Profile(entries, target - frozenset(entries)), realizations


@lru_cache(maxsize=32)
def _codim_index(mu: tuple[int, ...], r: int, max_n: int | None):
    """Codim-``r`` strata of ``mu`` keyed by their divisor sets."""
    index = defaultdict(list)
    for g in enumerate_strata(mu, codim=r, max_n=max_n):
        p = divisor_faces(g)
        index[p.divisors].append((g, p.entries))
    return dict(index)


@dataclass
class UniquenessReport:
    mu: tuple[int, ...]
    codim: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"mu": list(self.mu), "codim": self.codim, "checked": self.checked,
                "violations": [str(v) for v in self.violations]}


def _divisor_index(strata: Sequence[LevelGraph]):
    """Map each stratum to its divisor set; collect problems with repeated faces."""
    index = defaultdict(list)
    repeats = []
    for g in strata:
        vert, hor = _faces_raw(g)
        faces = vert + hor
        if len(set(faces)) != len(faces):
            repeats.append(g)
        index[frozenset(faces)].append(g)
    return index, repeats


def verify_unique_graph(mu, r: int, max_n: int | None = None) -> UniquenessReport:
    """Check that every ``r`` distinct divisors with a common point lie on one codim-``r`` stratum.

    Two divisors meet iff some stratum lies on both, so the candidate sets are
    the ``r``-subsets of divisor sets of all strata.  For each such set the
    codim-``r`` strata whose divisor set equals it are counted (expected: one).
    """
    return verify_unique_graph_all(mu, [r], max_n)[0]


def verify_unique_graph_all(mu, codims=None, max_n: int | None = None) -> list[UniquenessReport]:
    """:func:`verify_unique_graph` for several codimensions sharing one enumeration.

    ``codims`` defaults to ``1 .. n-3``.
    """
    mu = as_signature(mu)
    check_bound(mu.n, max_n)
    if codims is None:
        codims = range(1, mu.n - 2)
    strata = enumerate_strata(mu, max_n=max_n)
    index, repeats = _divisor_index(strata)
    reports = []
    for r in codims:
        report = UniquenessReport(mu.orders, r)
        for g in repeats:
            report.violations.append(("repeated divisor", g))
        candidates = set()
        for key in index:
            if len(key) >= r:
                candidates.update(frozenset(c) for c in combinations(sorted(key), r))
        for cand in sorted(candidates, key=lambda s: sorted(g.canonical for g in s)):
            report.checked += 1
            hits = [g for g in index.get(cand, ()) if g.codim == r]
            if len(hits) != 1:
                report.violations.append(("realizations", len(hits), cand))
        reports.append(report)
    return reports


def census(mu, max_n: int | None = None) -> StratumCensus:
    """Stratum counts by codimension and the divisors exceptional over the stable-curve space."""
    mu = as_signature(mu)
    check_bound(mu.n, max_n)
    counts: dict[int, int] = defaultdict(int)
    exceptional = []
    for g in enumerate_strata(mu, max_n=max_n):
        counts[g.codim] += 1
        if g.codim == 1 and is_exceptional(g):
            exceptional.append(g)
    return StratumCensus(dict(counts), tuple(exceptional))
