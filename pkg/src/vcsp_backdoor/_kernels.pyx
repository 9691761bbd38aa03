# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_pykernels``."""

from libc.stdlib cimport malloc, free

NAME = "native"


cdef long long* _alloc(Py_ssize_t n) except NULL:
    cdef long long* p = <long long*> malloc((n if n > 0 else 1) * sizeof(long long))
    if p == NULL:
        raise MemoryError()
    return p


def restrict_indices(int arity, int d, positions, values):
    cdef Py_ssize_t nb = len(positions)
    cdef Py_ssize_t i, p, nfree = 0, total = 1, k
    cdef long long base = 0
    cdef long long* weights = _alloc(arity)
    cdef long long* freew = _alloc(arity)
    cdef long long* digit = _alloc(arity)
    cdef char* bound = <char*> malloc(arity + 1)
    cdef list out
    cdef long long cur
    try:
        for p in range(arity):
            bound[p] = 0
        if arity > 0:
            weights[arity - 1] = 1
            for p in range(arity - 2, -1, -1):
                weights[p] = weights[p + 1] * d
        for i in range(nb):
            p = positions[i]
            bound[p] = 1
            base += <long long> values[i] * weights[p]
        for p in range(arity):
            if not bound[p]:
                freew[nfree] = weights[p]
                digit[nfree] = 0
                nfree += 1
                total *= d
        out = [None] * total
        cur = base
        for i in range(total):
            out[i] = cur
            # odometer over free positions, last one fastest
            k = nfree - 1
            while k >= 0:
                digit[k] += 1
                cur += freew[k]
                if digit[k] < d:
                    break
                cur -= freew[k] * d
                digit[k] = 0
                k -= 1
        return out
    finally:
        free(weights)
        free(freew)
        free(digit)
        free(bound)


def min_closed(finite, int arity, int d):
    cdef Py_ssize_t size = len(finite)
    cdef Py_ssize_t nrows = 0, a, b, p, idx, i
    cdef long long* rows = _alloc(size)
    cdef char* fin = <char*> malloc(size + 1)
    cdef long long* da = _alloc(arity)
    cdef long long* db = _alloc(arity)
    cdef long long x, y
    try:
        for i in range(size):
            fin[i] = 1 if finite[i] else 0
            if fin[i]:
                rows[nrows] = i
                nrows += 1
        for a in range(nrows):
            x = rows[a]
            for p in range(arity - 1, -1, -1):
                da[p] = x % d
                x //= d
            for b in range(a + 1, nrows):
                y = rows[b]
                for p in range(arity - 1, -1, -1):
                    db[p] = y % d
                    y //= d
                idx = 0
                for p in range(arity):
                    idx = idx * d + (da[p] if da[p] < db[p] else db[p])
                if not fin[idx]:
                    return False
        return True
    finally:
        free(rows)
        free(fin)
        free(da)
        free(db)


def submodular(table, int arity):
    cdef Py_ssize_t size = 1 << arity
    cdef Py_ssize_t s, t, i
    cdef long long vs, vt, lo, hi
    cdef long long* v = _alloc(size)
    try:
        for i in range(size):
            v[i] = table[i]
        for s in range(size):
            vs = v[s]
            if vs < 0:
                continue
            for t in range(s + 1, size):
                vt = v[t]
                if vt < 0:
                    continue
                lo = v[s & t]
                hi = v[s | t]
                if lo < 0 or hi < 0 or lo + hi > vs + vt:
                    return False
        return True
    finally:
        free(v)


def brute_force(int n, int d, scopes, arities, offsets, values):
    cdef Py_ssize_t m = len(arities)
    cdef Py_ssize_t nscope = len(scopes)
    cdef Py_ssize_t nvals = len(values)
    cdef Py_ssize_t j, p, s, k
    cdef long long* sc = _alloc(nscope)
    cdef long long* ar = _alloc(m)
    cdef long long* off = _alloc(m)
    cdef long long* st = _alloc(m)
    cdef long long* val = _alloc(nvals)
    cdef long long* a = _alloc(n)
    cdef long long idx = 0, best_idx = 0, best = -1, total, row, vv, count = 1
    try:
        for p in range(nscope):
            sc[p] = scopes[p]
        s = 0
        for j in range(m):
            ar[j] = arities[j]
            off[j] = offsets[j]
            st[j] = s
            s += ar[j]
        for p in range(nvals):
            val[p] = values[p]
        for p in range(n):
            a[p] = 0
            count *= d
        for idx in range(count):
            total = 0
            for j in range(m):
                row = 0
                for p in range(st[j], st[j] + ar[j]):
                    row = row * d + a[sc[p]]
                vv = val[off[j] + row]
                if vv < 0:
                    total = -1
                    break
                total += vv
            if total >= 0 and (best < 0 or total < best):
                best = total
                best_idx = idx
            k = n - 1
            while k >= 0:
                a[k] += 1
                if a[k] < d:
                    break
                a[k] = 0
                k -= 1
        return best_idx, best
    finally:
        free(sc)
        free(ar)
        free(off)
        free(st)
        free(val)
        free(a)
