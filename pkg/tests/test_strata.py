import json
import random

import pytest

from multiscale.errors import PreconditionError
from multiscale.graphs import enumerate_strata, make_graph, undegenerate
from multiscale.strata import (Profile, census, divisor_faces, intersection_profile,
                               is_vertical_divisor, verify_unique_graph, vertical_face)

MU5 = (0, 0, 0, 0, -2)


def cherry_divisor():
    return make_graph(MU5, [[5], [1, 2], [3, 4]], [0, -1, -1], [(0, 1), (0, 2)])


def block_divisor():
    return make_graph(MU5, [[3, 4, 5], [1, 2]], [0, -1], [(0, 1)])


def test_single_divisor_profile():
    d = cherry_divisor()
    profile, graphs = intersection_profile([d], MU5)
    assert profile.entries == (d,)
    assert graphs == [d]


def test_repeated_divisor_is_empty():
    d = cherry_divisor()
    assert intersection_profile([d, d], MU5) is None


def test_cherry_and_block_meet_in_chain():
    profile, graphs = intersection_profile([cherry_divisor(), block_divisor()], MU5)
    assert profile.entries == (cherry_divisor(), block_divisor())
    assert len(graphs) == 1
    g = graphs[0]
    assert g.num_levels == 2
    bottom = g.vertices_at(-2)
    assert [g.legs[v] for v in bottom] == [(1, 2)]
    # the passage of the {1,2}-block divisor is the lower one
    assert vertical_face(g, 2) == block_divisor()


def test_disjoint_divisors():
    other = make_graph(MU5, [[5], [1, 3], [2, 4]], [0, -1, -1], [(0, 1), (0, 2)])
    assert intersection_profile([cherry_divisor(), other], MU5) is None


def test_profile_rejects_non_divisors():
    g = enumerate_strata(MU5, codim=2)[0]
    with pytest.raises(PreconditionError):
        intersection_profile([g], MU5)
    with pytest.raises(PreconditionError):
        Profile((g,))


def test_profile_json():
    profile, _ = intersection_profile([cherry_divisor(), block_divisor()], MU5)
    data = json.loads(json.dumps(profile.to_json()))
    assert len(data["vertical"]) == 2 and data["horizontal"] == []


@pytest.mark.parametrize("mu,r", [(MU5, 1), (MU5, 2), ((0, 0, 0, 0, 0, -2), 2),
                                  ((0, 0, 0, 0, 0, -2), 3), ((0, 0, 0, 0, -1, -1), 3),
                                  ((2, 1, -1, -1, -1, -2), 2)])
def test_unique_graph(mu, r):
    rep = verify_unique_graph(mu, r)
    assert rep.ok, rep.violations[:3]
    assert rep.checked == len(enumerate_strata(mu, codim=r))


@pytest.mark.parametrize("mu", [(0, 0, 0, 0, 0, -2), (1, 1, -1, -1, -1, -1), (0, 0, 0, 0, -1, -1)])
def test_profile_of_each_stratum(mu):
    for g in enumerate_strata(mu):
        if g.codim == 0:
            continue
        faces = divisor_faces(g)
        if not g.horizontal_edges:
            assert list(faces.entries) == [undegenerate(g, {i})
                                           for i in range(1, g.num_levels + 1)]
        profile, graphs = intersection_profile(faces.divisors, mu)
        assert profile.entries == faces.entries
        assert graphs == [g]


def test_no_profile_with_repeated_vertical_entry():
    for mu in [(0, 0, 0, 0, 0, -2), (2, 2, -2, -2, -2), (3, 1, -1, -1, -1, -3)]:
        for g in enumerate_strata(mu, codim=2):
            if g.num_levels == 2:
                assert vertical_face(g, 1) != vertical_face(g, 2)


def test_census_examples():
    assert len(census(MU5).exceptional_divisors) == 3
    assert len(census((2, 2, -2, -2, -2)).exceptional_divisors) == 6
    c = census((0, 0, 0, 0, 0, -2))
    assert len(c.exceptional_divisors) == 25
    assert c.counts == {0: 1, 1: 50, 2: 205, 3: 180}


def test_census_invariants():
    for mu in [(0, 0, 0, 0, -1, -1), (1, 0, 0, -1, -1, -1), (4, -1, -1, -2, -2)]:
        c = census(mu)
        assert c.counts[0] == 1
        codim1 = set(enumerate_strata(mu, codim=1))
        for d in c.exceptional_divisors:
            assert d in codim1 and is_vertical_divisor(d) and len(d.edges) >= 2


def test_census_permutation_invariant():
    rng = random.Random(11)
    for mu in [(2, 1, -1, -1, -1, -2), (3, 0, -1, -2, -2)]:
        base = census(mu)
        for _ in range(3):
            p = list(mu)
            rng.shuffle(p)
            other = census(p)
            assert other.counts == base.counts
            assert len(other.exceptional_divisors) == len(base.exceptional_divisors)


def test_census_json():
    data = census(MU5).to_json()
    assert data["counts"] == {"0": 1, "1": 13, "2": 18}
    assert len(data["exceptional"]) == 3
