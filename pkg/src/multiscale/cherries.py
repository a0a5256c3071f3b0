"""Cherries, their realizability and balance, and smoothness of the coarse space.

A cherry is a three-vertex tree: a root carrying ``root_legs`` joined to two
leaves carrying ``left_legs`` and ``right_legs``.  Upright, the root sits
alone on the top level; inverted, alone on the bottom level.  A realizable
cherry whose two edges carry different enhancements slants into a graph with
a nontrivial ghost group, so the coarse space is singular.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from . import kernels
from .errors import PreconditionError, ResourceLimitError
from .graphs import (DEFAULT_MAX_N, LevelGraph, Signature, StableTree, _legs_of,
                     as_signature, check_bound, derive_orders, enumerate_level_structures,
                     enumerate_stable_trees)
from .lattice import ghost_group_order, twist_data


@dataclass(frozen=True)
class Cherry:
    root_legs: frozenset[int]
    left_legs: frozenset[int]
    right_legs: frozenset[int]
    inverted: bool = False

    def __post_init__(self):
        for name in ("root_legs", "left_legs", "right_legs"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        r, l, rr = self.root_legs, self.left_legs, self.right_legs
        if r & l or r & rr or l & rr:
            raise PreconditionError("cherry leg sets must be disjoint")
        if not r or len(l) < 2 or len(rr) < 2:
            raise PreconditionError("unstable cherry: root needs a leg, leaves need two each")

    def check(self, n: int) -> None:
        if self.root_legs | self.left_legs | self.right_legs != set(range(1, n + 1)):
            raise PreconditionError(f"cherry legs must partition 1..{n}")

    def swapped(self) -> "Cherry":
        return Cherry(self.root_legs, self.right_legs, self.left_legs, self.inverted)

    def tree(self) -> StableTree:
        return StableTree((tuple(sorted(self.root_legs)), tuple(sorted(self.left_legs)),
                           tuple(sorted(self.right_legs))), ((0, 1), (0, 2)))

    def __str__(self):
        fmt = lambda s: ",".join(map(str, sorted(s)))
        if self.inverted:
            return f"<{fmt(self.left_legs)} | {fmt(self.right_legs)} || {fmt(self.root_legs)}>"
        return f"<{fmt(self.root_legs)} || {fmt(self.left_legs)} | {fmt(self.right_legs)}>"

    def to_json(self) -> dict:
        return {"root": sorted(self.root_legs), "left": sorted(self.left_legs),
                "right": sorted(self.right_legs), "inverted": self.inverted,
                "notation": str(self)}


@dataclass(frozen=True)
class SmoothnessVerdict:
    smooth: bool
    witness: Cherry | None = None
    family: str | None = None

    def to_json(self) -> dict:
        out: dict = {"smooth": self.smooth}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.family is not None:
            out["family"] = self.family
        return out


def cherry_enhancements(c: Cherry, mu) -> tuple[int, int]:
    mu = as_signature(mu)
    c.check(mu.n)
    return abs(-1 - mu.total(c.left_legs)), abs(-1 - mu.total(c.right_legs))


def is_cherry_realizable(c: Cherry, mu) -> bool:
    mu = as_signature(mu)
    c.check(mu.n)
    s0, sl, sr = mu.total(c.root_legs), mu.total(c.left_legs), mu.total(c.right_legs)
    if c.inverted:
        return s0 >= 2 and sl <= -2 and sr <= -2
    return s0 <= -2 and sl >= 0 and sr >= 0


def is_balanced(c: Cherry, mu) -> bool:
    mu = as_signature(mu)
    c.check(mu.n)
    return mu.total(c.left_legs) == mu.total(c.right_legs)


def iter_cherries(n: int) -> Iterator[Cherry]:
    """Every cherry on ``1..n`` (both orientations), left/right as unordered pair."""
    legs = range(1, n + 1)
    for k in range(2, n - 2):
        for left in combinations(legs, k):
            rest = [i for i in legs if i not in left]
            for j in range(2, len(rest)):
                for right in combinations(rest, j):
                    if right[0] < left[0]:
                        continue
                    root = [i for i in rest if i not in right]
                    for inv in (False, True):
                        yield Cherry(frozenset(root), frozenset(left), frozenset(right), inv)


def find_unbalanced_cherry(mu) -> Cherry | None:
    """A realizable unbalanced cherry for ``mu``, if one exists (fast scan)."""
    mu = as_signature(mu)
    hit = kernels.find_unbalanced_cherry(list(mu.orders))
    if hit is None:
        return None
    root, left, right, inverted = hit
    return Cherry(frozenset(_legs_of(root)), frozenset(_legs_of(left)),
                  frozenset(_legs_of(right)), bool(inverted))


# ---------------------------------------------------------------------------
# smooth families

def _n5_families():
    return [
        # (tag, part of the classification, generator in a, exceptional divisors)
        ("(2a-1,a-1,-a^3)", 1, lambda a: (2 * a - 1, a - 1, -a, -a, -a), 0),
        ("(a^2,0,-a-1^2)", 1, lambda a: (a, a, 0, -a - 1, -a - 1), 0),
        ("(4a-2,a-1,-a^2,-3a+1)", 2, lambda a: (4 * a - 2, a - 1, -a, -a, -3 * a + 1), 1),
        ("(3a-1,2a-1,-a,-2a^2)", 3, lambda a: (3 * a - 1, 2 * a - 1, -a, -2 * a, -2 * a), 2),
        ("(2a-1^2,-a^2,-2a)", 3, lambda a: (2 * a - 1, 2 * a - 1, -a, -a, -2 * a), 2),
        ("(4a-2,-a^4)", 4, lambda a: (4 * a - 2, -a, -a, -a, -a), 3),
        ("(4a-2^2,-a^2,-6a+2)", 5, lambda a: (4 * a - 2, 4 * a - 2, -a, -a, -6 * a + 2), 4),
        ("(a^2,b^3), 2a+3b=-2", 6, None, 6),
    ]


N5_FAMILIES = _n5_families()


def _n5_members(tag_gen, bound):
    tag, _, gen, _ = tag_gen
    if gen is not None:
        for a in range(-bound, bound + 1):
            yield a, gen(a)
    else:
        for b in range(-bound, bound + 1):
            if (-2 - 3 * b) % 2 == 0:
                a = (-2 - 3 * b) // 2
                yield b, (a, a, b, b, b)


def family_members(tag: str, bound: int) -> list[tuple[int, tuple[int, ...]]]:
    """``(parameter, mu)`` for the n=5 family ``tag`` with ``|parameter| <= bound``."""
    for fam in N5_FAMILIES:
        if fam[0] == tag:
            return list(_n5_members(fam, bound))
    raise KeyError(tag)


def matching_families(mu) -> list[str]:
    """Tags of the known smooth families containing ``mu`` (up to permutation)."""
    mu = as_signature(mu)
    n = mu.n
    target = sorted(mu.orders)
    out = []
    if target == sorted((0,) * (n - 1) + (-2,)):
        out.append("(0^{n-1},-2)")
    if target == sorted((0,) * (n - 2) + (-1, -1)):
        out.append("(0^{n-2},-1^2)")
    bound = max(abs(m) for m in target) + 2
    if n == 6:
        if target == sorted((2, 0, -1, -1, -1, -1)):
            out.append("(2,0,-1^4)")
        if target == sorted((1, 0, 0, -1, -1, -1)):
            out.append("(1,0^2,-1^3)")
        for a in range(-bound, bound + 1):
            if target == sorted((a,) * 4 + (-1 - 2 * a,) * 2):
                out.append("(a^4,b^2), 2a+b=-1")
                break
    elif n == 5:
        for fam in N5_FAMILIES:
            if any(sorted(m) == target for _, m in _n5_members(fam, bound)):
                out.append(fam[0])
    return out


# ---------------------------------------------------------------------------
# classification


def ghost_scan(mu, max_n: int | None = None) -> LevelGraph | None:
    """First stratum (in enumeration order) with a nontrivial ghost group, or None.

    Walks every stable tree and every level structure on it.  Graphs with a
    single level passage always have trivial ghost group (``M = M'``), but they
    are still checked.
    """
    mu = as_signature(mu)
    check_bound(mu.n, max_n)
    for tree in enumerate_stable_trees(mu.n, max_n=max_n):
        if not tree.edges:
            continue
        orders = derive_orders(tree, mu)
        for g in enumerate_level_structures(tree, orders):
            if g.num_levels == 0:
                continue
            if ghost_group_order(twist_data(g)).ghost_order != 1:
                return g
    return None


def classify_smooth_full(mu, max_n: int | None = None) -> SmoothnessVerdict:
    """Ground-truth smoothness: every stratum's ghost group is trivial."""
    mu = as_signature(mu)
    bad = ghost_scan(mu, max_n)
    if bad is None:
        return SmoothnessVerdict(True, None, _family(mu))
    return SmoothnessVerdict(False, find_unbalanced_cherry(mu), None)


def _family(mu: Signature) -> str | None:
    fams = matching_families(mu)
    return fams[0] if fams else None


def classify_smooth(mu, max_n: int | None = None) -> SmoothnessVerdict:
    """Smoothness of the coarse space, with a cherry witness when singular.

    The cherry scan settles most signatures; when it finds nothing, the full
    ghost scan decides.  Beyond the enumeration bound only the two families
    with all enhancements 1 are accepted without a scan.
    """
    mu = as_signature(mu)
    if mu.n <= 4:
        return SmoothnessVerdict(True, None, _family(mu))
    witness = find_unbalanced_cherry(mu)
    if witness is not None:
        return SmoothnessVerdict(False, witness, None)
    limit = DEFAULT_MAX_N if max_n is None else max_n
    if mu.n > limit:
        fam = _family(mu)
        if fam in ("(0^{n-1},-2)", "(0^{n-2},-1^2)"):
            return SmoothnessVerdict(True, None, fam)
        raise ResourceLimitError(f"n={mu.n} exceeds the scan bound {limit} and no cherry decides it")
    return classify_smooth_full(mu, max_n=max_n)
