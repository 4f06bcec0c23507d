"""Exact Gaussian elimination over a FieldSpec.

Matrices are lists of rows of raw field values (int indices over finite
fields, Fractions over Q).  No pivoting heuristics: the first row with a
nonzero entry in the current column is used, so results are
deterministic and exact.
"""
from __future__ import annotations


def mat_copy(rows):
    return [list(r) for r in rows]


def identity(field, n):
    z, o = field.rzero, field.rone
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def mat_mul(field, a, b):
    n, m, l = len(a), len(b), len(b[0]) if b else 0
    z = field.rzero
    out = [[z] * l for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(m):
            c = ai[t]
            if c == z:
                continue
            bt = b[t]
            oi = out[i]
            for j in range(l):
                oi[j] = field.radd(oi[j], field.rmul(c, bt[j]))
    return out


def mat_vec(field, a, v):
    z = field.rzero
    out = []
    for row in a:
        acc = z
        for c, x in zip(row, v):
            if c != z and x != z:
                acc = field.radd(acc, field.rmul(c, x))
        out.append(acc)
    return out


def transpose(rows):
    return [list(c) for c in zip(*rows)]


def rref(field, rows):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = mat_copy(rows)
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    z = field.rzero
    pivots = []
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, nrows):
            if m[i][col] != z:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = field.rinv(m[r][col])
        m[r] = [field.rmul(inv, x) for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col] != z:
                c = m[i][col]
                m[i] = [field.rsub(x, field.rmul(c, y))
                        for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(field, rows):
    if not rows:
        return 0
    return len(rref(field, rows)[1])


def kernel(field, rows, ncols=None):
    """Basis of the right null space {v : rows . v = 0}.

    One basis vector per free column, in column order, with the free
    coordinate set to one.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[field.rone if i == j else field.rzero for i in range(ncols)]
                for j in range(ncols)]
    m, pivots = rref(field, rows)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    z, o = field.rzero, field.rone
    for fcol in free:
        v = [z] * ncols
        v[fcol] = o
        for r, pcol in enumerate(pivots):
            v[pcol] = field.rneg(m[r][fcol])
        basis.append(v)
    return basis


def solve(field, rows, rhs):
    """One solution of rows . x = rhs, or None if inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(field, aug)
    z = field.rzero
    for r in range(len(m)):
        if all(m[r][j] == z for j in range(ncols)) and m[r][ncols] != z:
            return None
    x = [z] * ncols
    for r, pcol in enumerate(pivots):
        if pcol == ncols:
            return None
        x[pcol] = m[r][ncols]
    return x


def inverse(field, rows):
    """Matrix inverse, or None if singular."""
    n = len(rows)
    aug = [list(r) + ident_row for r, ident_row in zip(rows, identity(field, n))]
    m, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        return None
    return [r[n:] for r in m[:n]]


def det(field, rows):
    """Determinant by fraction-preserving Gaussian elimination."""
    n = len(rows)
    m = mat_copy(rows)
    z = field.rzero
    acc = field.rone
    sign_flip = False
    for col in range(n):
        sel = None
        for i in range(col, n):
            if m[i][col] != z:
                sel = i
                break
        if sel is None:
            return z
        if sel != col:
            m[col], m[sel] = m[sel], m[col]
            sign_flip = not sign_flip
        piv = m[col][col]
        acc = field.rmul(acc, piv)
        inv = field.rinv(piv)
        for i in range(col + 1, n):
            if m[i][col] != z:
                c = field.rmul(m[i][col], inv)
                m[i] = [field.rsub(x, field.rmul(c, y))
                        for x, y in zip(m[i], m[col])]
    return field.rneg(acc) if sign_flip else acc


class Solver:
    """Repeated consistent solves against a fixed column family.

    Columns are vectors in F^dim; `express(w)` returns coefficients x
    with columns . x = w, or None.  The echelon factorization is done
    once at construction.
    """

    def __init__(self, field, columns, dim):
        self.field = field
        self.ncols = len(columns)
        self.dim = dim
        rows = [[col[i] for col in columns] for i in range(dim)]
        aug = [r + ident_row
               for r, ident_row in zip(rows, identity(field, dim))]
        self._m, pivots = rref(field, aug)
        self._pivots = [p for p in pivots if p < self.ncols]

    def express(self, w):
        field = self.field
        z = field.rzero
        n = self.ncols
        x = [z] * n
        for r in range(len(self._m)):
            row = self._m[r]
            acc = z
            for j in range(self.dim):
                c = row[n + j]
                if c != z and w[j] != z:
                    acc = field.radd(acc, field.rmul(c, w[j]))
            if r < len(self._pivots):
                x[self._pivots[r]] = acc
            elif acc != z:
                return None
        return x
