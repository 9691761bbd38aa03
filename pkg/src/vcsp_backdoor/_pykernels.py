"""Pure-Python kernels.

Reference implementation of the hot loops. ``_kernels.pyx`` mirrors every
function here with the same signature and results; the active one is
chosen in :mod:`vcsp_backdoor._backend`.

Integer tables use ``-1`` for infinity. Tuples are encoded mixed-radix
with the first coordinate most significant.
"""

from itertools import product

NAME = "python"


def restrict_indices(arity, d, positions, values):
    """Row indices of the full table selected by fixing ``positions``.

    The result lists, for each tuple over the free positions (in mixed
    radix order), the row index of the completed tuple.
    """
    weights = [d ** (arity - 1 - p) for p in range(arity)]
    base = 0
    for p, v in zip(positions, values):
        base += v * weights[p]
    bound = set(positions)
    idx = [base]
    for p in range(arity):
        if p in bound:
            continue
        w = weights[p]
        idx = [i + v * w for i in idx for v in range(d)]
    return idx


def _digits(index, arity, d):
    out = [0] * arity
    for p in range(arity - 1, -1, -1):
        index, out[p] = divmod(index, d)
    return out


def min_closed(finite, arity, d):
    """True iff the finite rows are closed under coordinatewise minimum."""
    rows = [i for i, f in enumerate(finite) if f]
    decoded = [_digits(i, arity, d) for i in rows]
    for a in range(len(rows)):
        da = decoded[a]
        for b in range(a + 1, len(rows)):
            db = decoded[b]
            idx = 0
            for p in range(arity):
                idx = idx * d + (da[p] if da[p] < db[p] else db[p])
            if not finite[idx]:
                return False
    return True


def submodular(table, arity):
    """Boolean submodularity of an integer table (``-1`` = infinity)."""
    size = 1 << arity
    for s in range(size):
        vs = table[s]
        if vs < 0:
            continue
        for t in range(s + 1, size):
            vt = table[t]
            if vt < 0:
                continue
            lo = table[s & t]
            hi = table[s | t]
            if lo < 0 or hi < 0 or lo + hi > vs + vt:
                return False
    return True


def brute_force(n, d, scopes, arities, offsets, values):
    """Lexicographically first minimum over all ``d**n`` assignments.

    ``scopes`` is the concatenation of all constraint scopes (positions in
    ``0..n-1``), ``values[offsets[j] + row]`` is row ``row`` of constraint
    ``j``. Returns ``(assignment_index, cost)`` with ``cost == -1`` when
    every assignment is infinite (the index is then 0).
    """
    m = len(arities)
    starts = []
    pos = 0
    for j in range(m):
        starts.append(pos)
        pos += arities[j]
    best_idx = 0
    best = -1
    for idx, a in enumerate(product(range(d), repeat=n)):
        total = 0
        for j in range(m):
            row = 0
            s = starts[j]
            for p in range(s, s + arities[j]):
                row = row * d + a[scopes[p]]
            v = values[offsets[j] + row]
            if v < 0:
                total = -1
                break
            total += v
        if total >= 0 and (best < 0 or total < best):
            best = total
            best_idx = idx
    return best_idx, best
