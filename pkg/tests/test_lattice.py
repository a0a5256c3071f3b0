from math import gcd, prod

import pytest
from hypothesis import assume, given, settings, strategies as st

from multiscale.errors import PreconditionError
from multiscale.graphs import enumerate_strata, make_graph, undegenerate
from multiscale.lattice import (TwistData, ghost_group_order, graph_ghost_order,
                                prong_orbit_count, smith_normal_form, twist_data)
from oracles import brute_ghost_order, brute_prong_orbits, brute_slanted_index

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def slanted(a, b, upside_down=False):
    """Slanted cherry: edge a crosses one passage, edge b both."""
    short = (2,) if upside_down else (1,)
    return TwistData(2, ((a, short), (b, (1, 2))))


# Smith normal form ---------------------------------------------------------


def test_snf_identity():
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [1, 1, 1]


def test_snf_diagonal_pair():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]


@pytest.mark.parametrize("a", range(1, 9))
@pytest.mark.parametrize("b", range(1, 9))
def test_snf_triangular(a, b):
    g = gcd(a, b)
    assert smith_normal_form([[a, 0], [b, b]]) == [g, a * b // g]


def test_snf_zero_and_rank_deficient():
    assert smith_normal_form([[0, 0], [0, 0]]) == [0, 0]
    assert smith_normal_form([[2, 4], [1, 2]]) == [1, 0]
    assert smith_normal_form([]) == []


def test_snf_ragged():
    with pytest.raises(PreconditionError):
        smith_normal_form([[1, 2], [3]])


def test_snf_big_entries_exact():
    big = 10 ** 30
    assert smith_normal_form([[big, 0], [0, big + 1]]) == [1, big * (big + 1)]


def _det_gcds(m):
    """gcd of all k-by-k minors, k = 1..rank (determinantal divisors)."""
    from itertools import combinations

    def det(a):
        if len(a) == 1:
            return a[0][0]
        return sum((-1) ** j * a[0][j] * det([r[:j] + r[j + 1:] for r in a[1:]])
                   for j in range(len(a)))

    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det([[m[r][c] for c in cs] for r in rs]))
        out.append(g)
    return out


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_matches_determinantal_divisors(m):
    d = smith_normal_form(m)
    assert len(d) == min(len(m), len(m[0]))
    for x, y in zip(d, d[1:]):
        assert x == 0 and y == 0 or (x != 0 and y % x == 0)
    dd = _det_gcds(m)
    running = 1
    for k, g in enumerate(dd):
        running *= d[k]
        assert running == g


@settings(max_examples=100, deadline=None)
@given(matrices, st.integers(-3, 3), st.data())
def test_snf_unimodular_invariance(m, c, data):
    rows, cols = len(m), len(m[0])
    i = data.draw(st.integers(0, rows - 1))
    j = data.draw(st.integers(0, rows - 1))
    moved = [list(r) for r in m]
    if i != j:
        moved[i] = [x + c * y for x, y in zip(moved[i], moved[j])]
    k = data.draw(st.integers(0, cols - 1))
    l = data.draw(st.integers(0, cols - 1))
    if k != l:
        for r in moved:
            r[k] += c * r[l]
    moved.reverse()
    assert smith_normal_form(moved) == smith_normal_form(m)


# twist data ----------------------------------------------------------------


def test_twist_data_divisor():
    mu = (0, 0, 0, 0, -2)
    g = make_graph(mu, [[5], [1, 2], [3, 4]], [0, -1, -1], [(0, 1), (0, 2)])
    td = twist_data(g)
    assert td.L == 1 and td.edges == ((1, (1,)), (1, (1,)))


def test_twist_data_slanted():
    mu = (0, 0, 0, 0, -2)
    g = make_graph(mu, [[5], [1, 2], [3, 4]], [0, -1, -2], [(0, 1), (0, 2)])
    td = twist_data(g)
    assert td.edges == ((1, (1,)), (1, (1, 2)))
    assert td.crossing_matrix() == [[1, 0], [1, 1]]


def test_twist_data_drops_horizontal():
    mu = (0, 0, 0, 0, -1, -1)
    for g in enumerate_strata(mu):
        if g.horizontal_edges and g.num_levels:
            td = twist_data(g)
            assert len(td.edges) == len(g.vertical_edges)


def test_twist_data_needs_levels():
    g = enumerate_strata((0, 0, 0, -1, -1), codim=0)[0]
    with pytest.raises(PreconditionError):
        twist_data(g)


def test_twist_data_validation():
    with pytest.raises(PreconditionError):
        TwistData(2, ((1, (1,)),))  # passage 2 uncrossed
    with pytest.raises(PreconditionError):
        TwistData(3, ((1, (1, 3)), (1, (2,))))  # not an interval
    with pytest.raises(PreconditionError):
        TwistData(1, ((0, (1,)),))


def test_ghost_rejects_rank_deficient():
    td = TwistData(2, ((3, (1, 2)),))
    with pytest.raises(PreconditionError, match="rank"):
        ghost_group_order(td)


def test_real_graphs_have_full_rank():
    for mu in [(0, 0, 0, 0, 0, -2), (3, 1, -1, -2, -3), (2, 1, 1, -1, -2, -3)]:
        for g in enumerate_strata(mu):
            if g.num_levels:
                assert _full_rank(twist_data(g))


def test_twist_json_roundtrip():
    td = slanted(2, 3)
    assert TwistData.from_json(td.to_json()) == td
    assert td.to_json() == {"L": 2, "edges": [{"kappa": 2, "passages": [1]},
                                              {"kappa": 3, "passages": [1, 2]}]}


# ghost group ---------------------------------------------------------------


def test_ghost_slanted_examples():
    assert ghost_group_order(slanted(2, 3)).ghost_order == 3
    assert ghost_group_order(slanted(4, 4)).ghost_order == 1


@pytest.mark.parametrize("a", range(1, 13))
def test_ghost_slanted_formula(a):
    for b in range(1, 13):
        for flip in (False, True):
            res = ghost_group_order(slanted(a, b, flip))
            assert res.ghost_order == b // gcd(a, b) == brute_slanted_index(a, b)
            assert prod(res.snf_diagonal) == res.ghost_order


def test_ghost_all_kappa_one():
    for g in enumerate_strata((0, 0, 0, 0, 0, 0, -2)):
        assert graph_ghost_order(g) == 1


def test_ghost_result_json():
    assert ghost_group_order(slanted(2, 3)).to_json() == {"ghost_order": 3, "snf": [1, 3]}


twist_data_strategy = st.integers(1, 3).flatmap(
    lambda L: st.lists(
        st.tuples(st.integers(1, 6), st.integers(1, L), st.integers(0, L - 1)),
        min_size=1, max_size=4).map(lambda raw: (L, raw)))


def _build(L, raw):
    edges = []
    for k, start, span in raw:
        end = min(L, start + span)
        edges.append((k, tuple(range(start, end + 1))))
    covered = {i for _, ps in edges for i in ps}
    for i in range(1, L + 1):
        if i not in covered:
            edges.append((1, (i,)))
    return TwistData(L, tuple(edges))


def _full_rank(td):
    return 0 not in smith_normal_form(td.crossing_matrix()) and len(td.edges) >= td.L


@settings(max_examples=200, deadline=None)
@given(twist_data_strategy)
def test_ghost_matches_coset_count(args):
    td = _build(*args)
    assume(_full_rank(td))
    res = ghost_group_order(td)
    assert res.ghost_order == brute_ghost_order(td.L, list(td.edges))
    for x, y in zip(res.snf_diagonal, res.snf_diagonal[1:]):
        assert y % x == 0


@settings(max_examples=150, deadline=None)
@given(twist_data_strategy)
def test_ghost_invariant_under_lonely_passage_collapse(args):
    # add a new bottom passage crossed by a single edge joining successive levels
    td = _build(*args)
    assume(_full_rank(td))
    L = td.L
    extended = TwistData(L + 1, td.edges + ((7, (L + 1,)),))
    assert ghost_group_order(extended).ghost_order == ghost_group_order(td).ghost_order


@pytest.mark.parametrize("mu", [(2, 2, -2, -2, -2), (4, 1, -2, -2, -3), (3, 2, 1, -4, -4)])
def test_ghost_collapse_on_real_graphs(mu):
    # collapsing a passage crossed by one edge between successive levels keeps the order
    for g in enumerate_strata(mu):
        L = g.num_levels
        if L < 2:
            continue
        for i in range(1, L + 1):
            crossing = [e for e in g.vertical_edges if i in g.passages(e)]
            if len(crossing) == 1 and len(g.passages(crossing[0])) == 1:
                keep = set(range(1, L + 1)) - {i}
                assert graph_ghost_order(undegenerate(g, keep)) == graph_ghost_order(g)


# prong orbits --------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 5, 12])
def test_prongs_single_edge(k):
    assert prong_orbit_count(TwistData(1, ((k, (1,)),))) == 1


@pytest.mark.parametrize("a", range(1, 9))
def test_prongs_two_level_cherry(a):
    for b in range(1, 9):
        td = TwistData(1, ((a, (1,)), (b, (1,))))
        assert prong_orbit_count(td) == gcd(a, b) == brute_prong_orbits(1, list(td.edges))


def test_prongs_chain():
    td = TwistData(3, ((3, (1,)), (4, (2,)), (6, (3,))))
    assert prong_orbit_count(td) == 1


@settings(max_examples=200, deadline=None)
@given(twist_data_strategy)
def test_prongs_match_orbit_search(args):
    td = _build(*args)
    if prod(td.kappas) <= 10 ** 4:
        assert prong_orbit_count(td) == brute_prong_orbits(td.L, list(td.edges))
