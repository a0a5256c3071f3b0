"""Combinatorics of genus-0 multiscale differentials.

Enumerates enhanced level graphs, computes ghost-group orders and
prong-matching orbit counts, classifies smoothness of the coarse space and
computes Betti numbers of the smooth cases through their blowup towers.
"""
from .cherries import (Cherry, SmoothnessVerdict, cherry_enhancements, classify_smooth,
                       classify_smooth_full, find_unbalanced_cherry, is_balanced,
                       is_cherry_realizable, matching_families)
from .cohomology import (BlowupPlan, PoincarePolynomial, build_blowup_plan, h2_crosscheck,
                         poincare_m0bar, poincare_multiscale)
from .errors import PreconditionError, ResourceLimitError
from .graphs import (HalfEdgeOrders, LevelGraph, Signature, StableTree, canonical_form,
                     derive_orders, enumerate_level_structures, enumerate_stable_trees,
                     enumerate_strata, graph_from_json, graph_to_json, make_graph, undegenerate)
from .kernels import BACKEND
from .lattice import (LatticeIndexResult, TwistData, ghost_group_order, prong_orbit_count,
                      smith_normal_form, twist_data)
from .strata import (Profile, StratumCensus, census, intersection_profile, verify_unique_graph,
                     verify_unique_graph_all)

__version__ = "0.1.0"
