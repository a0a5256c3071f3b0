"""Twist lattices, ghost-group orders and prong-matching orbit counts.

For a level graph with ``L`` level passages let ``ell_i`` be the lcm of the
enhancements of the edges crossing passage ``i``.  The simple-twist lattice
dual ``M'`` has basis ``w_i / ell_i``; the twist lattice dual ``M`` is spanned
by ``(1/kappa_e) * sum(w_i for i crossed by e)``.  Written in the basis of
``M'`` the generators of ``M`` have integer coordinates ``ell_i / kappa_e``, and
the ghost group order is ``[M' : M]``, the product of the Smith diagonal of
that matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from . import kernels
from .errors import PreconditionError
from .graphs import LevelGraph


@dataclass(frozen=True)
class TwistData:
    """Vertical edges of a level graph: enhancement plus crossed passages."""

    L: int
    edges: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        crossed = set()
        for kappa, passages in self.edges:
            if kappa < 1:
                raise PreconditionError("twist data holds vertical edges only (kappa >= 1)")
            ps = list(passages)
            if not ps or ps != list(range(ps[0], ps[-1] + 1)) or ps[0] < 1 or ps[-1] > self.L:
                raise PreconditionError(f"passages {passages} must be a nonempty interval in 1..{self.L}")
            crossed.update(ps)
        if crossed != set(range(1, self.L + 1)):
            raise PreconditionError("every level passage must be crossed by some edge")

    @property
    def kappas(self) -> list[int]:
        return [k for k, _ in self.edges]

    def intervals(self) -> tuple[list[int], list[int]]:
        return [p[0] for _, p in self.edges], [p[-1] for _, p in self.edges]

    def crossing_matrix(self) -> list[list[int]]:
        """``A[e][i-1] = 1`` iff edge ``e`` crosses passage ``i``."""
        return [[int(i in p) for i in range(1, self.L + 1)] for _, p in self.edges]

    def to_json(self) -> dict:
        return {"L": self.L, "edges": [{"kappa": k, "passages": list(p)} for k, p in self.edges]}

    @classmethod
    def from_json(cls, data) -> "TwistData":
        return cls(int(data["L"]),
                   tuple((int(e["kappa"]), tuple(int(i) for i in e["passages"])) for e in data["edges"]))


@dataclass(frozen=True)
class LatticeIndexResult:
    ghost_order: int
    snf_diagonal: tuple[int, ...]

    def to_json(self) -> dict:
        return {"ghost_order": self.ghost_order, "snf": list(self.snf_diagonal)}


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (``min(rows, cols)`` entries, each dividing the next)."""
    rows = [[int(x) for x in r] for r in matrix]
    if not rows or not rows[0]:
        return []
    if len({len(r) for r in rows}) != 1:
        raise PreconditionError("matrix rows must have equal length")
    return list(kernels.snf_diagonal(rows))


def twist_data(graph: LevelGraph) -> TwistData:
    """Enhancements and crossed passages of the vertical edges of ``graph``."""
    L = graph.num_levels
    if L < 1:
        raise PreconditionError("graph has no level passage")
    edges = []
    for idx in graph.vertical_edges:
        p = graph.passages(idx)
        edges.append((graph.edges[idx][2], tuple(p)))
    return TwistData(L, tuple(edges))


def ghost_group_order(td: TwistData) -> LatticeIndexResult:
    lo, hi = td.intervals()
    order, diag = kernels.ghost_order(td.kappas, lo, hi, td.L)
    diag = tuple(int(d) for d in diag)
    if len(diag) != td.L or 0 in diag:
        # level graphs always give rank L; hand-made twist data may not
        raise PreconditionError("crossing matrix has rank below L, so the ghost group is not finite")
    if prod(diag) != order:
        raise AssertionError("ghost order must be the product of the Smith diagonal")
    return LatticeIndexResult(int(order), diag)


def prong_orbit_count(td: TwistData) -> int:
    """Orbits of the level rotation group ``Z^L`` on the prong-matchings.

    The ``i``-th generator turns every edge crossing passage ``i`` by one prong,
    so the orbits are the cokernel of ``[A^T | diag(kappa)]``.
    """
    lo, hi = td.intervals()
    return int(kernels.prong_orbits(td.kappas, lo, hi, td.L))


def graph_ghost_order(graph: LevelGraph) -> int:
    """Ghost group order of a graph; 1 when there is no level passage."""
    if graph.num_levels == 0:
        return 1
    return ghost_group_order(twist_data(graph)).ghost_order
