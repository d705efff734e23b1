"""Dense linear algebra over a FieldCtx, on lists of integer encodings."""

from __future__ import annotations

from typing import Sequence

from .gf import FieldCtx

Matrix = list[list[int]]


def row_reduce(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    add, mul, inv, neg = ctx.add, ctx.mul, ctx.inv, ctx.neg
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = inv(m[r][c])
        m[r] = [mul(v, s) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = neg(m[i][c])
                m[i] = [add(a, mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(ctx, rows)[1])


def nullspace(ctx: FieldCtx, rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis of {v : rows . v = 0}; each basis vector has a 1 at a free column."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = row_reduce(ctx, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = ctx.neg(row[f])
        basis.append(v)
    return basis


def matmul(ctx: FieldCtx, a: Matrix, b: Matrix) -> Matrix:
    add, mul = ctx.add, ctx.mul
    out = []
    for row in a:
        new = []
        for j in range(len(b[0])):
            acc = 0
            for k, v in enumerate(row):
                if v and b[k][j]:
                    acc = add(acc, mul(v, b[k][j]))
            new.append(acc)
        out.append(new)
    return out


def matvec(ctx: FieldCtx, a: Matrix, v: Sequence[int]) -> list[int]:
    add, mul = ctx.add, ctx.mul
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = add(acc, mul(x, y))
        out.append(acc)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def frob(ctx: FieldCtx, a: Matrix, r: int) -> Matrix:
    """Entrywise r-th power."""
    return [[ctx.power(v, r) for v in row] for row in a]


def inverse(ctx: FieldCtx, a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + identity(n)[i] for i, row in enumerate(a)]
    red, pivots = row_reduce(ctx, aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(ctx: FieldCtx, a: Matrix) -> int:
    m = [list(r) for r in a]
    n = len(m)
    add, mul, inv, neg = ctx.add, ctx.mul, ctx.inv, ctx.neg
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = neg(result)
        result = mul(result, m[c][c])
        s = inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = neg(mul(m[i][c], s))
                m[i] = [add(x, mul(f, y)) for x, y in zip(m[i], m[c])]
    return result


def embed_matrix(table: Sequence[int], a: Matrix) -> Matrix:
    return [[table[v] for v in row] for row in a]
