"""Exact integer matrix arithmetic: products, determinants, Smith form, solving.

Matrices are plain lists of lists of Python ints, row major.  Everything is
unbounded-precision; there is no floating point anywhere in this module.
"""

from __future__ import annotations

Matrix = list


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [[row[j] for row in a] for j in range(len(a[0]))]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    n = len(b[0])
    out = []
    for row in a:
        acc = [0] * n
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(n):
                    acc[j] += x * bk[j]
        out.append(acc)
    return out


def mat_vec(a: Matrix, v: list) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def ext_gcd(a: int, b: int):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def det_bareiss(a: Matrix) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _add_row(m: Matrix, dst: int, src: int, c: int = 1) -> None:
    row_s = m[src]
    row_d = m[dst]
    for j in range(len(row_d)):
        row_d[j] += c * row_s[j]


def _combine_rows(m: Matrix, i1: int, i2: int, x: int, y: int, p: int, q: int) -> None:
    # rows (i1, i2) <- (x*r1 + y*r2, p*r1 + q*r2); caller guarantees xq - yp = +-1
    r1, r2 = m[i1], m[i2]
    for j in range(len(r1)):
        a, b = r1[j], r2[j]
        r1[j] = x * a + y * b
        r2[j] = p * a + q * b


def _combine_cols(m: Matrix, j1: int, j2: int, x: int, y: int, p: int, q: int) -> None:
    for row in m:
        a, b = row[j1], row[j2]
        row[j1] = x * a + y * b
        row[j2] = p * a + q * b


def _add_col(m: Matrix, dst: int, src: int, c: int = 1) -> None:
    for row in m:
        row[dst] += c * row[src]


def smith_normal_form(a: Matrix, cols: int | None = None):
    """Return (u, d, v) with d = u * a * v in Smith normal form.

    u and v are unimodular; d is diagonal with nonnegative entries and each
    diagonal entry divides the next.  ``cols`` pins the column count when the
    matrix has no rows.
    """
    nrows = len(a)
    if nrows:
        ncols = len(a[0])
        if any(len(row) != ncols for row in a):
            raise ValueError("ragged matrix")
        if cols is not None and cols != ncols:
            raise ValueError("cols disagrees with the matrix shape")
    else:
        ncols = cols if cols is not None else 0
    d = [list(map(int, row)) for row in a]
    u = identity(nrows)
    v = identity(ncols)

    for t in range(min(nrows, ncols)):
        # pick the nonzero entry of least magnitude in the trailing block
        piv = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                e = d[i][j]
                if e and (piv is None or abs(e) < abs(piv[2])):
                    piv = (i, j, e)
        if piv is None:
            break
        pi, pj, _ = piv
        if pi != t:
            d[pi], d[t] = d[t], d[pi]
            u[pi], u[t] = u[t], u[pi]
        if pj != t:
            for m in (d, v):
                for row in m:
                    row[pj], row[t] = row[t], row[pj]

        guard = 0
        while True:
            guard += 1
            if guard > 100000:
                raise RuntimeError("Smith reduction failed to terminate")
            dirty = False
            for i in range(nrows):
                if i != t and d[i][t]:
                    dirty = True
                    pv, e = d[t][t], d[i][t]
                    if e % pv == 0:
                        q = e // pv
                        _add_row(d, i, t, -q)
                        _add_row(u, i, t, -q)
                    else:
                        g, x, y = ext_gcd(pv, e)
                        p, q = -(e // g), pv // g
                        _combine_rows(d, t, i, x, y, p, q)
                        _combine_rows(u, t, i, x, y, p, q)
            for j in range(ncols):
                if j != t and d[t][j]:
                    dirty = True
                    pv, e = d[t][t], d[t][j]
                    if e % pv == 0:
                        q = e // pv
                        _add_col(d, j, t, -q)
                        _add_col(v, j, t, -q)
                    else:
                        g, x, y = ext_gcd(pv, e)
                        p, q = -(e // g), pv // g
                        _combine_cols(d, t, j, x, y, p, q)
                        _combine_cols(v, t, j, x, y, p, q)
            if not dirty:
                # pivot must divide the whole trailing block; if not, fold the
                # offending row in and keep reducing
                pv = d[t][t]
                offender = None
                for i in range(t + 1, nrows):
                    if any(d[i][j] % pv for j in range(t + 1, ncols)):
                        offender = i
                        break
                if offender is None:
                    break
                _add_row(d, t, offender)
                _add_row(u, t, offender)

        if d[t][t] < 0:
            _add_row(d, t, t, -2)
            _add_row(u, t, t, -2)

    return u, d, v


def solve_integer(a: Matrix, b: list, cols: int | None = None):
    """Solve a*x = b over the integers.

    Returns (particular, kernel_basis) or None when no integer solution
    exists.  kernel_basis spans all integer solutions of a*x = 0.
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else (cols if cols is not None else 0)
    if len(b) != nrows:
        raise ValueError("right-hand side length disagrees with the matrix")
    if nrows == 0:
        return [0] * ncols, [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    u, d, v = smith_normal_form(a, cols=cols)
    c = mat_vec(u, b)
    y = [0] * ncols
    free = []
    for t in range(ncols):
        dt = d[t][t] if t < min(nrows, ncols) else 0
        if dt:
            if c[t] % dt:
                return None
            y[t] = c[t] // dt
        else:
            free.append(t)
            if t < nrows and c[t]:
                return None
    for t in range(ncols, nrows):
        if c[t]:
            return None
    x0 = mat_vec(v, y)
    kernel = [[v[i][t] for i in range(ncols)] for t in free]
    return x0, kernel
