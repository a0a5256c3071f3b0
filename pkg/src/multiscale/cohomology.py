"""Poincaré polynomials of the stable-curve spaces and of their blowup towers.

Polynomials are handled internally as coefficient lists in ``q = t^2`` (all
cohomology here sits in even degree).  The tower model: the boundary of the
stable-curve space is simple normal crossing with one divisor per split, a
blowup center is the intersection of the divisors of a tree, and blowing up
a center of codimension ``c`` in a subvariety ``Y`` adds
``(q + ... + q^(c-1)) * P(Y ∩ Z)`` to ``P(Y)``.
"""
from __future__ import annotations

import heapq
import random
import sys
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

from .cherries import classify_smooth, matching_families
from .errors import PreconditionError, ResourceLimitError
from .graphs import (LevelGraph, StableTree, as_signature, check_bound, enumerate_stable_trees,
                     enumerate_strata, graph_to_json)
from .strata import census, is_exceptional, vertical_face

MAIN_FAMILIES = ("(0^{n-1},-2)", "(0^{n-2},-1^2)")
MAX_TOWER_STEPS = 2000


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient lists in q)


def padd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


@dataclass(frozen=True)
class PoincarePolynomial:
    """Betti numbers ``c_0 .. c_{2d}`` of a smooth projective variety of dimension ``d``."""

    betti: tuple[int, ...]

    @classmethod
    def from_q(cls, coeffs: Sequence[int]) -> "PoincarePolynomial":
        betti = []
        for i, c in enumerate(coeffs):
            if i:
                betti.append(0)
            betti.append(int(c))
        return cls(tuple(betti))

    @property
    def dim(self) -> int:
        return (len(self.betti) - 1) // 2

    @property
    def q_coeffs(self) -> list[int]:
        return list(self.betti[::2])

    def is_palindromic(self) -> bool:
        return self.betti == self.betti[::-1]

    def check(self) -> None:
        b = self.betti
        if not b or b[0] != 1 or b[-1] != 1:
            raise AssertionError(f"Poincaré polynomial needs unit ends: {b}")
        if any(b[1::2]):
            raise AssertionError(f"odd Betti numbers must vanish: {b}")
        if not self.is_palindromic():
            raise AssertionError(f"Poincaré polynomial is not palindromic: {b}")

    def __str__(self):
        terms = []
        for k, c in enumerate(self.betti):
            if c:
                terms.append(str(c) if k == 0 else f"{'' if c == 1 else c}t^{k}")
        return " + ".join(terms) or "0"

    def to_json(self) -> dict:
        return {"dim": self.dim, "betti": list(self.betti)}


# ---------------------------------------------------------------------------
# the stable-curve spaces


def open_part_epoly(valence: int) -> list[int]:
    """Compactly supported E-polynomial of the open part with ``valence`` points, in q."""
    p = [1]
    for k in range(2, valence - 1):
        p = pmul(p, [-k, 1])
    return p


@lru_cache(maxsize=None)
def _m0bar_q(n: int) -> tuple[int, ...]:
    total: list[int] = []
    for tree in enumerate_stable_trees(n, max_n=n):
        term = [1]
        for v in range(tree.num_vertices):
            term = pmul(term, open_part_epoly(tree.valence(v)))
        total = padd(total, term)
    return tuple(total)


def poincare_m0bar(n: int, max_n: int | None = None) -> PoincarePolynomial:
    """Poincaré polynomial of the space of stable n-pointed rational curves (strata sum)."""
    if n < 3:
        raise PreconditionError("need n >= 3")
    check_bound(n, max_n)
    p = PoincarePolynomial.from_q(_m0bar_q(n))
    p.check()
    return p


def picard_rank_m0bar(n: int) -> int:
    return 2 ** (n - 1) - comb(n, 2) - 1


# ---------------------------------------------------------------------------
# the blowup plan


@dataclass(frozen=True)
class BlowupStep:
    center: StableTree
    codim: int
    divisor: LevelGraph

    def to_json(self) -> dict:
        return {"center": {"legs": [list(ls) for ls in self.center.legs],
                           "edges": [list(e) for e in self.center.edges]},
                "codim": self.codim, "divisor": graph_to_json(self.divisor)}


@dataclass(frozen=True)
class BlowupPlan:
    mu: tuple[int, ...]
    steps: tuple[BlowupStep, ...]

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]


def _divisor_kind(g: LevelGraph) -> str:
    if len(g.vertices_at(0)) == 1:
        return "upright"
    if len(g.vertices_at(-1)) == 1:
        return "inverted"
    return "other"


def _shuffle_key(seed: int) -> Callable[[LevelGraph], object]:
    cache: dict[bytes, float] = {}
    rng = random.Random(seed)

    def key(g: LevelGraph):
        if g.canonical not in cache:
            cache[g.canonical] = rng.random()
        return cache[g.canonical], g.canonical
    return key


TIE_BREAKS: dict[str, Callable] = {
    "canonical": lambda g: g.canonical,
    "reverse": lambda g: bytes(255 - x for x in g.canonical),
    "edges-desc": lambda g: (-len(g.edges), g.canonical),
}


def tie_break_key(name: str) -> Callable[[LevelGraph], object]:
    """Named tie-break; ``shuffle:<seed>`` gives a seeded random order."""
    if name in TIE_BREAKS:
        return TIE_BREAKS[name]
    if name.startswith("shuffle:"):
        return _shuffle_key(int(name.split(":", 1)[1]))
    raise PreconditionError(f"unknown tie-break {name!r}")


def supported_family(mu, experimental: bool = False) -> str:
    """Family tag of ``mu`` if the tower supports it; raise PreconditionError otherwise."""
    mu = as_signature(mu)
    fams = matching_families(mu)
    for f in MAIN_FAMILIES:
        if f in fams:
            return f
    if mu.n in (5, 6) and fams:
        if not experimental:
            raise PreconditionError(
                f"{list(mu.orders)} is in family {fams[0]}; the tower for the n=5/6 families "
                "needs the experimental flag")
        if not classify_smooth(mu).smooth:
            raise AssertionError("listed family is not smooth")
        return fams[0]
    raise PreconditionError(f"{list(mu.orders)} is not one of the supported smooth families")


def _precedences(mu, exceptional: Sequence[LevelGraph], max_n: int | None):
    """Pairs ``(first, second)`` forced by two-level intersections of exceptional divisors."""
    idx = {g: i for i, g in enumerate(exceptional)}
    kinds = [_divisor_kind(g) for g in exceptional]
    pairs = set()
    for g in enumerate_strata(mu, codim=2, max_n=max_n):
        if g.num_levels != 2:
            continue
        lower, upper = vertical_face(g, 1), vertical_face(g, 2)
        if lower not in idx or upper not in idx:
            continue
        a, b = idx[lower], idx[upper]
        if kinds[a] != kinds[b]:
            raise AssertionError("an upright and an inverted exceptional divisor meet")
        # profile [D1, D2] means D1 < D2 for upright divisors, reversed for inverted ones
        pairs.add((a, b) if kinds[a] == "upright" else (b, a))
    for a, ka in enumerate(kinds):
        if ka != "upright":
            continue
        for b, kb in enumerate(kinds):
            if kb == "inverted":
                pairs.add((a, b))
    return pairs


def _topological(count: int, pairs, key) -> list[int]:
    succ = [[] for _ in range(count)]
    indeg = [0] * count
    for a, b in pairs:
        succ[a].append(b)
        indeg[b] += 1
    heap = [(key(i), i) for i in range(count) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (key(j), j))
    if len(order) != count:
        raise AssertionError("the divisor order has a cycle")
    return order


def build_blowup_plan(mu, experimental: bool = False, tie_break: str = "canonical",
                      max_n: int | None = None) -> BlowupPlan:
    """Order the exceptional divisors into a blowup sequence.

    The partial order comes from two-level intersections; it is extended to a
    total order with ``tie_break``.  The result is checked to blow up
    smaller centers first.
    """
    mu = as_signature(mu)
    supported_family(mu, experimental)
    check_bound(mu.n, max_n)
    exceptional = list(census(mu, max_n=max_n).exceptional_divisors)
    kinds = {_divisor_kind(g) for g in exceptional}
    if "other" in kinds:
        raise PreconditionError("exceptional divisor with several vertices on both levels")
    trees = [g.tree for g in exceptional]
    split_sets = [t.splits() for t in trees]
    if len(set(split_sets)) != len(split_sets):
        raise AssertionError("two exceptional divisors share a center")
    pairs = _precedences(mu, exceptional, max_n)
    k = tie_break_key(tie_break)
    order = _topological(len(exceptional), pairs, lambda i: k(exceptional[i]))
    steps = tuple(BlowupStep(trees[i], len(trees[i].edges), exceptional[i]) for i in order)
    _check_containment([s.center.splits() for s in steps])
    return BlowupPlan(mu.orders, steps)


def _check_containment(split_sets: Sequence[frozenset[int]]) -> None:
    """Center ``i`` inside center ``j`` (more splits) must come no later than ``j``."""
    for i, si in enumerate(split_sets):
        for j in range(i):
            if split_sets[j] < si:
                raise AssertionError(f"center {i} lies in the earlier center {j}")


# ---------------------------------------------------------------------------
# the tower


def _tree_poly(n: int, splits: frozenset[int]) -> list[int]:
    tree = StableTree.from_splits(n, splits)
    out = [1]
    for v in range(tree.num_vertices):
        out = pmul(out, list(_m0bar_q(tree.valence(v))))
    return out


def _compatible_set(splits) -> bool:
    ss = list(splits)
    for i, a in enumerate(ss):
        for b in ss[i + 1:]:
            if a & b not in (0, a, b):
                return False
    return True


def tower_q(n: int, centers: Sequence[frozenset[int]]) -> list[int]:
    """Poincaré coefficients (in q) after blowing up the given centers in order.

    ``centers[j]`` is the split set of the ``j``-th center.  ``F(j, A)`` is the
    polynomial of the intersection of the (proper transforms of the) boundary
    divisors labelled by ``A`` after ``j`` blowups.
    """
    centers = [frozenset(c) for c in centers]
    if len(centers) > MAX_TOWER_STEPS:
        raise ResourceLimitError(f"{len(centers)} blowups exceed the tower bound {MAX_TOWER_STEPS}")
    dim = n - 3

    @lru_cache(maxsize=None)
    def F(j: int, A: frozenset[int]) -> tuple[int, ...]:
        if j == 0:
            return tuple(_tree_poly(n, A)) if _compatible_set(A) else ()
        S = centers[j - 1]
        if S <= A:
            return ()
        base = F(j - 1, A)
        if not base:
            return ()
        c = len(S - A)
        inner = F(j - 1, A | S)
        if not inner or c == 1:
            return base
        if len(inner) - 1 != dim - len(A) - c:
            raise AssertionError("center trace has unexpected dimension")
        return tuple(padd(base, pmul([0] + [1] * (c - 1), list(inner))))

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * len(centers) + 1000))
    try:
        for j in range(1, len(centers) + 1):
            # fill the cache bottom-up so the recursion depth stays small
            F(j, frozenset())
            if len(centers[j - 1]) < 2:
                raise AssertionError("a blowup center must have codimension >= 2")
            if not F(j - 1, centers[j - 1]):
                raise AssertionError("a blowup center has empty proper transform")
        return list(F(len(centers), frozenset()))
    finally:
        sys.setrecursionlimit(old)


def poincare_multiscale(mu, experimental: bool = False, tie_break: str = "canonical",
                        max_n: int | None = None) -> PoincarePolynomial:
    """Poincaré polynomial of the smooth multiscale space via its blowup tower."""
    mu = as_signature(mu)
    plan = build_blowup_plan(mu, experimental, tie_break, max_n=max_n)
    coeffs = tower_q(mu.n, [s.center.splits() for s in plan.steps])
    p = PoincarePolynomial.from_q(coeffs)
    if p.dim != mu.n - 3:
        raise AssertionError("tower changed the dimension")
    p.check()
    return p


def h2_crosscheck(mu, experimental: bool = False, max_n: int | None = None) -> tuple[int, int]:
    """``(rank Pic of the base + #exceptional divisors, c_2 of the tower)``."""
    mu = as_signature(mu)
    expected = picard_rank_m0bar(mu.n) + len(census(mu, max_n=max_n).exceptional_divisors)
    p = poincare_multiscale(mu, experimental, max_n=max_n)
    computed = p.betti[2] if len(p.betti) > 2 else 0
    return expected, computed
