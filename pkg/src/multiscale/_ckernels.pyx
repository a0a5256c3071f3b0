# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels (64-bit, overflow-checked).

Mirrors ``_pykernels``.  Every multiply/add/subtract is checked; on overflow
the kernel raises OverflowError and the caller retries on Python ints, so
results are always exact.
"""
from libc.stdlib cimport malloc, free
from libc.limits cimport LLONG_MIN

cdef extern from *:
    """
    static inline int ms_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int ms_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    static inline int ms_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    bint ms_mul(long long a, long long b, long long *r) nogil
    bint ms_add(long long a, long long b, long long *r) nogil
    bint ms_sub(long long a, long long b, long long *r) nogil


cdef inline long long _abs(long long x) except? -1:
    if x == LLONG_MIN:
        raise OverflowError("entry too large for 64-bit kernel")
    return -x if x < 0 else x


cdef int _snf(long long *a, int m, int n, long long *diag) except -1:
    # a is row-major m x n, modified in place; diag gets min(m, n) entries
    cdef int t, i, j, bi, bj, bad, k = m if m < n else n
    cdef long long best, x, p, q, tmp
    cdef bint clean
    for t in range(k):
        while True:
            best = -1
            bi = bj = -1
            for i in range(t, m):
                for j in range(t, n):
                    x = a[i * n + j]
                    if x != 0:
                        x = _abs(x)
                        if best < 0 or x < best:
                            best = x
                            bi = i
                            bj = j
            if best < 0:
                for i in range(t, k):
                    diag[i] = 0
                return 0
            if bi != t:
                for j in range(n):
                    tmp = a[t * n + j]
                    a[t * n + j] = a[bi * n + j]
                    a[bi * n + j] = tmp
            if bj != t:
                for i in range(m):
                    tmp = a[i * n + t]
                    a[i * n + t] = a[i * n + bj]
                    a[i * n + bj] = tmp
            p = a[t * n + t]
            clean = True
            for i in range(t + 1, m):
                q = a[i * n + t] / p
                if q != 0:
                    for j in range(t, n):
                        if ms_mul(q, a[t * n + j], &tmp) or ms_sub(a[i * n + j], tmp, &a[i * n + j]):
                            raise OverflowError("SNF overflow")
                if a[i * n + t] != 0:
                    clean = False
            for j in range(t + 1, n):
                q = a[t * n + j] / p
                if q != 0:
                    for i in range(m):
                        if ms_mul(q, a[i * n + t], &tmp) or ms_sub(a[i * n + j], tmp, &a[i * n + j]):
                            raise OverflowError("SNF overflow")
                if a[t * n + j] != 0:
                    clean = False
            if not clean:
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i * n + j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                diag[t] = _abs(p)
                break
            for j in range(t, n):
                if ms_add(a[t * n + j], a[bad * n + j], &a[t * n + j]):
                    raise OverflowError("SNF overflow")
    return 0


cdef list _run_snf(list rows):
    cdef int m = len(rows)
    cdef int n = len(rows[0]) if m else 0
    cdef int k = m if m < n else n
    cdef long long *a = <long long *> malloc(max(m * n, 1) * sizeof(long long))
    cdef long long *diag = <long long *> malloc(max(k, 1) * sizeof(long long))
    cdef int i, j
    if a == NULL or diag == NULL:
        free(a)
        free(diag)
        raise MemoryError()
    try:
        for i in range(m):
            row = rows[i]
            for j in range(n):
                a[i * n + j] = row[j]
        _snf(a, m, n, diag)
        return [diag[i] for i in range(k)]
    finally:
        free(a)
        free(diag)


def snf_diagonal(rows):
    return _run_snf([list(r) for r in rows])


cdef long long _gcd(long long a, long long b):
    while b:
        a, b = b, a % b
    return a


def ghost_matrix(kappas, lo, hi, L):
    cdef int E = len(kappas), e, i
    cdef long long g, k, prod
    ell = [1] * (L + 1)
    cdef long long cur
    for e in range(E):
        k = kappas[e]
        for i in range(lo[e], hi[e] + 1):
            cur = ell[i]
            g = _gcd(cur, k)
            if ms_mul(cur / g, k, &prod):
                raise OverflowError("lcm overflow")
            ell[i] = prod
    rows = []
    for e in range(E):
        k = kappas[e]
        row = [0] * L
        for i in range(lo[e], hi[e] + 1):
            cur = ell[i]
            if cur % k:
                raise ArithmeticError("lattice M is not contained in M'")
            row[i - 1] = cur / k
        rows.append(row)
    return rows


def ghost_order(kappas, lo, hi, L):
    diag = _run_snf(ghost_matrix(kappas, lo, hi, L))
    cdef long long order = 1
    cdef long long d
    for d in diag:
        if ms_mul(order, d, &order):
            raise OverflowError("order overflow")
    return order, diag


def prong_orbits(kappas, lo, hi, L):
    cdef int E = len(kappas), e, i
    if E == 0:
        return 1
    rows = []
    for e in range(E):
        row = [0] * (L + E)
        for i in range(lo[e], hi[e] + 1):
            row[i - 1] = 1
        row[L + e] = kappas[e]
        rows.append(row)
    cdef long long order = 1
    cdef long long d
    for d in _run_snf(rows):
        if ms_mul(order, d, &order):
            raise OverflowError("order overflow")
    return order


def find_unbalanced_cherry(orders):
    cdef int n = len(orders)
    if n > 24:
        raise OverflowError("too many marked points for the subset table")
    cdef unsigned int full = (1u << n) - 1
    cdef unsigned int size = 1u << n
    cdef long long *sums = <long long *> malloc(size * sizeof(long long))
    cdef unsigned char *popc = <unsigned char *> malloc(size)
    cdef unsigned int mask, low, left, rest, sub, right, root
    cdef long long sl, sr, s0
    cdef int b
    if sums == NULL or popc == NULL:
        free(sums)
        free(popc)
        raise MemoryError()
    try:
        sums[0] = 0
        popc[0] = 0
        for mask in range(1, size):
            low = mask & (~mask + 1)
            b = 0
            while (low >> b) != 1:
                b += 1
            if ms_add(sums[mask ^ low], <long long> orders[b], &sums[mask]):
                raise OverflowError("order sum overflow")
            popc[mask] = popc[mask ^ low] + 1
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
                    return int(root), int(left), int(right), s0 >= 2
        return None
    finally:
        free(sums)
        free(popc)
