# cython: language_level=3, boundscheck=False, wraparound=False
"""Fraction-free integer elimination, compiled twin of ``_elim``.

Entries are arbitrary-precision Python ints; Cython removes the interpreter
overhead of the O(n^3) index loops.  Semantics must match ``_elim`` exactly;
the test suite and the benchmark run both backends against each other.
"""

BACKEND = "cython"


def rank_ff(m):
    """Rank of an integer matrix given as a list of row lists."""
    cdef list work = [list(rw) for rw in m]
    cdef Py_ssize_t nrows = len(work)
    if nrows == 0:
        return 0
    cdef Py_ssize_t ncols = len(work[0])
    cdef Py_ssize_t row = 0, col, r, c, piv
    cdef list mr, mrow
    prev = 1
    for col in range(ncols):
        piv = -1
        for r in range(row, nrows):
            if (<list>work[r])[col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != row:
            work[row], work[piv] = work[piv], work[row]
        mrow = <list>work[row]
        p = mrow[col]
        for r in range(row + 1, nrows):
            mr = <list>work[r]
            v = mr[col]
            if v != 0:
                for c in range(col + 1, ncols):
                    mr[c] = (mr[c] * p - v * mrow[c]) // prev
                mr[col] = 0
            elif prev != 1:
                for c in range(col + 1, ncols):
                    mr[c] = mr[c] * p // prev
            elif p != 1:
                for c in range(col + 1, ncols):
                    mr[c] = mr[c] * p
        prev = p
        row += 1
        if row == nrows:
            break
    return row


def det_bareiss(m):
    """Exact determinant of a square integer matrix."""
    cdef list work = [list(row) for row in m]
    cdef Py_ssize_t n = len(work)
    if n == 0:
        return 1
    cdef Py_ssize_t k, r, c, swap
    cdef list mk, mr
    cdef int sign = 1
    prev = 1
    for k in range(n - 1):
        if (<list>work[k])[k] == 0:
            swap = -1
            for r in range(k + 1, n):
                if (<list>work[r])[k] != 0:
                    swap = r
                    break
            if swap < 0:
                return 0
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        mk = <list>work[k]
        p = mk[k]
        for r in range(k + 1, n):
            mr = <list>work[r]
            v = mr[k]
            for c in range(k + 1, n):
                mr[c] = (mr[c] * p - v * mk[c]) // prev
        prev = p
    result = (<list>work[n - 1])[n - 1]
    return sign * result


def leading_minors(m):
    """All n leading principal minors; falls back to per-size determinants
    past a vanishing pivot (same contract as the pure kernel)."""
    cdef Py_ssize_t n = len(m)
    cdef list work = [list(row) for row in m]
    cdef list minors = []
    cdef Py_ssize_t k, r, c, j
    cdef list wk, wr
    prev = 1
    for k in range(n):
        p = (<list>work[k])[k]
        minors.append(p)
        if p == 0:
            for j in range(k + 1, n):
                sub = [list(row[: j + 1]) for row in m[: j + 1]]
                minors.append(det_bareiss(sub))
            return minors
        wk = <list>work[k]
        for r in range(k + 1, n):
            wr = <list>work[r]
            v = wr[k]
            for c in range(k + 1, n):
                wr[c] = (wr[c] * p - v * wk[c]) // prev
        prev = p
    return minors
