"""Exact linear algebra over the rationals for truncated module
computations: row reduction, nullspaces, and intersections of a column
span with a coordinate subspace."""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form (fresh copy) and the pivot column list."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(columns, nrows: int):
    """Basis of {v : sum v_j * columns[j] = 0}; columns are length-nrows."""
    ncols = len(columns)
    if ncols == 0:
        return []
    matrix = [[columns[j][i] for j in range(ncols)] for i in range(nrows)]
    red, pivots = rref(matrix)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(columns, target, nrows: int):
    """One solution v of sum v_j columns[j] = target, or None."""
    ncols = len(columns)
    matrix = [[columns[j][i] for j in range(ncols)] + [target[i]] for i in range(nrows)]
    red, pivots = rref(matrix)
    if ncols in pivots:
        return None
    v = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        v[p] = red[r][ncols]
    return v


def span_intersect_coords(columns, nrows: int, keep):
    """Basis (restricted to the kept coordinates) of the intersection of
    span(columns) with the subspace vanishing outside ``keep``.

    Order the coordinates with the discarded ones first; the rref rows of
    the span whose discarded part is zero are exactly the intersection.
    """
    keep = list(keep)
    keep_set = set(keep)
    out = [i for i in range(nrows) if i not in keep_set]
    order = out + keep
    reordered = [[col[i] for i in order] for col in columns]
    red, _ = rref(reordered)
    nout = len(out)
    inter = [row[nout:] for row in red if not any(row[:nout])]
    return inter
