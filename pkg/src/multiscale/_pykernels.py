"""Pure-Python hot kernels.

Same signatures as the compiled ``_ckernels`` module; used when the extension
is unavailable and as the reference the extension is tested against.  All
arithmetic is on Python ints, so nothing can overflow.
"""


def snf_diagonal(rows):
    """Smith normal form diagonal of an integer matrix given as a list of rows.

    Returns ``min(nrows, ncols)`` non-negative entries, each dividing the next.
    Pivots on the entry of least absolute value.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                diag.extend([0] * (min(m, n) - t))
                return diag
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    ri, rt = a[i], a[t]
                    for j in range(t, n):
                        ri[j] -= q * rt[j]
                if a[i][t]:
                    clean = False
            rt = a[t]
            for j in range(t + 1, n):
                q = rt[j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if rt[j]:
                    clean = False
            if not clean:
                continue
            # pivot must divide the remaining block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                diag.append(abs(p))
                break
            rt, rb = a[t], a[bad]
            for j in range(t, n):
                rt[j] += rb[j]
    return diag


def _lcm(a, b):
    from math import gcd
    return a // gcd(a, b) * b


def ghost_matrix(kappas, lo, hi, L):
    """Rows ``ell_i / kappa_e`` over the passages ``lo[e]..hi[e]`` crossed by edge ``e``."""
    ell = [1] * (L + 1)
    for k, a, b in zip(kappas, lo, hi):
        for i in range(a, b + 1):
            ell[i] = _lcm(ell[i], k)
    rows = []
    for k, a, b in zip(kappas, lo, hi):
        row = [0] * L
        for i in range(a, b + 1):
            q, r = divmod(ell[i], k)
            if r:
                raise ArithmeticError("lattice M is not contained in M'")
            row[i - 1] = q
        rows.append(row)
    return rows


def ghost_order(kappas, lo, hi, L):
    """Index ``[M' : M]`` and the SNF diagonal of the change-of-basis matrix."""
    diag = snf_diagonal(ghost_matrix(kappas, lo, hi, L))
    order = 1
    for d in diag:
        order *= d
    return order, diag


def prong_orbits(kappas, lo, hi, L):
    """Order of the cokernel of ``[A^T | diag(kappa)]`` (orbits of Z^L on prong-matchings)."""
    E = len(kappas)
    rows = []
    for e, (k, a, b) in enumerate(zip(kappas, lo, hi)):
        row = [0] * (L + E)
        for i in range(a, b + 1):
            row[i - 1] = 1
        row[L + e] = k
        rows.append(row)
    if not rows:
        return 1
    order = 1
    for d in snf_diagonal(rows):
        order *= d
    return order


def _subset_sums(orders):
    n = len(orders)
    sums = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + orders[low.bit_length() - 1]
    return sums


def find_unbalanced_cherry(orders):
    """First realizable, unbalanced (possibly inverted) cherry, or None.

    Returns ``(root_mask, left_mask, right_mask, inverted)``.  Cherries are
    scanned by left mask, then right mask (with ``left < right`` as unordered
    pair representative); the upright test runs before the inverted one.
    """
    n = len(orders)
    full = (1 << n) - 1
    sums = _subset_sums(orders)
    popc = [bin(m).count("1") for m in range(1 << n)]
    for left in range(1, full + 1):
        if popc[left] < 2:
            continue
        sl = sums[left]
        rest = full ^ left
        sub = rest
        while sub:
            right = sub
            sub = (sub - 1) & rest
            if right <= left or popc[right] < 2 or right == rest:
                continue
            sr = sums[right]
            if sl == sr:
                continue
            root = rest ^ right
            s0 = sums[root]
            if (s0 <= -2 and sl >= 0 and sr >= 0) or (s0 >= 2 and sl <= -2 and sr <= -2):
                return root, left, right, s0 >= 2
    return None
