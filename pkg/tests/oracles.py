"""Independent brute-force oracles used by the tests.

Nothing here calls the lattice kernels or the blowup tower; each function
recomputes its quantity from definitions.
"""
from itertools import product
from math import gcd

from multiscale.graphs import derive_orders, enumerate_level_structures, enumerate_stable_trees


def brute_ghost_order(L, edges):
    """Index of the simple twist lattice in the twist lattice, by coset counting.

    ``edges`` is a list of ``(kappa, passages)``.  The twist lattice is
    ``{x in Z^L : kappa_e | sum of x_i over passages of e}``; the simple twist
    lattice is ``prod ell_i Z`` with ``ell_i`` the lcm over edges crossing
    ``i``.  The index is the number of twist-lattice points in ``prod [0, ell_i)``.
    """
    ell = []
    for i in range(1, L + 1):
        l = 1
        for k, ps in edges:
            if i in ps:
                l = l * k // gcd(l, k)
        ell.append(l)
    count = 0
    for x in product(*(range(l) for l in ell)):
        if all(sum(x[i - 1] for i in ps) % k == 0 for k, ps in edges):
            count += 1
    return count


def brute_prong_orbits(L, edges):
    """Orbits of Z^L on prod Z/kappa_e by breadth-first search."""
    kappas = [k for k, _ in edges]
    gens = []
    for i in range(1, L + 1):
        gens.append(tuple(1 if i in ps else 0 for _, ps in edges))
    seen = set()
    orbits = 0
    for start in product(*(range(k) for k in kappas)):
        if start in seen:
            continue
        orbits += 1
        seen.add(start)
        stack = [start]
        while stack:
            x = stack.pop()
            for g in gens:
                y = tuple((a + b) % k for a, b, k in zip(x, g, kappas))
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return orbits


def brute_slanted_index(a, b):
    """Index of ``lcm(a,b)Z + bZ`` in ``{x in Z^2 : a | x1, b | x1 + x2}``.

    The first coordinate is the passage crossed by both edges of a slanted
    cherry, the second the passage crossed only by the long edge.  Cosets are
    counted as lattice points in the fundamental box of the smaller lattice.
    """
    l1 = a * b // gcd(a, b)
    return sum(1 for x1 in range(l1) for x2 in range(b)
               if x1 % a == 0 and (x1 + x2) % b == 0)


def cherry_levels_oracle(cherry, mu):
    """A cherry is realizable iff its tree has a two-level structure with the
    root alone on one level and both leaves on the other (root on top when
    upright, at the bottom when inverted)."""
    tree = cherry.tree()
    orders = derive_orders(tree, mu)
    for g in enumerate_level_structures(tree, orders):
        if g.num_levels != 1 or g.horizontal_edges:
            continue
        root_level = g.levels[0]
        if g.levels[1] == g.levels[2] != root_level:
            if (root_level == 0) != cherry.inverted:
                return True
    return False


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padd(a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


def strata_epoly(mu):
    """E-polynomial (in q) of the compact space as a sum over its strata.

    Over the open part of the stratum of a stable tree T the space is a
    toric fibration whose orbits are the level structures on T; the orbit of
    a structure of codimension c has dimension e(T) - c.
    """
    mu = tuple(mu)
    n = len(mu)
    total = [0]
    for tree in enumerate_stable_trees(n, max_n=n):
        base = [1]
        for v in range(tree.num_vertices):
            for k in range(2, tree.valence(v) - 1):
                base = _pmul(base, [-k, 1])
        fiber = [0]
        e = len(tree.edges)
        for g in enumerate_level_structures(tree, derive_orders(tree, mu)):
            term = [1]
            for _ in range(e - g.codim):
                term = _pmul(term, [-1, 1])
            fiber = _padd(fiber, term)
        total = _padd(total, _pmul(base, fiber))
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return total
