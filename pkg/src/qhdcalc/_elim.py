"""Fraction-free integer elimination, pure Python.

Reference implementation of the hot kernels; ``_elim_c.pyx`` is the compiled
twin with identical semantics.  All three routines run single-step Bareiss
elimination: every intermediate entry is a minor of the input, so divisions
are exact and no floating point is ever involved.
"""

BACKEND = "python"


def rank_ff(m):
    """Rank of an integer matrix given as a list of row lists."""
    m = [list(row) for row in m]
    nrows = len(m)
    if nrows == 0:
        return 0
    ncols = len(m[0])
    prev = 1
    row = 0
    for col in range(ncols):
        piv = -1
        for r in range(row, nrows):
            if m[r][col]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != row:
            m[row], m[piv] = m[piv], m[row]
        p = m[row][col]
        mrow = m[row]
        for r in range(row + 1, nrows):
            mr = m[r]
            v = mr[col]
            if v:
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
    m = [list(row) for row in m]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        p = m[k][k]
        mk = m[k]
        for r in range(k + 1, n):
            mr = m[r]
            v = mr[k]
            for c in range(k + 1, n):
                mr[c] = (mr[c] * p - v * mk[c]) // prev
        prev = p
    return sign * m[n - 1][n - 1]


def leading_minors(m):
    """All n leading principal minors of a square integer matrix.

    The Bareiss pivots are exactly the leading minors as long as no pivot
    vanishes; a vanishing pivot makes the remaining minors fall back to
    independent determinant calls on the leading submatrices.
    """
    n = len(m)
    work = [list(row) for row in m]
    minors = []
    prev = 1
    for k in range(n):
        p = work[k][k]
        minors.append(p)
        if p == 0:
            for j in range(k + 1, n):
                sub = [row[: j + 1] for row in m[: j + 1]]
                minors.append(det_bareiss(sub))
            return minors
        for r in range(k + 1, n):
            wr = work[r]
            wk = work[k]
            v = wr[k]
            for c in range(k + 1, n):
                wr[c] = (wr[c] * p - v * wk[c]) // prev
        prev = p
    return minors
