"""Exact linear algebra over GF(q): scalar elimination and batched ranks.

Two layers:

* scalar routines (``rank``, ``rref``, ``nullspace``, ``solve_unique``,
  ``det``) work on small matrices given as nested sequences of element
  indices, with deterministic pivoting (first nonzero in column order);

* ``batch_full_col_rank`` runs the same elimination simultaneously on a
  stack of thousands of small matrices using a field's lookup tables,
  which is what makes exhaustive subset checking practical.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .gf import Field, FieldTables


class InconsistentSystem(Exception):
    """Augmented system has a row 0 = nonzero."""


class UnderdeterminedSystem(Exception):
    """System admits more than one solution."""


def _to_rows(matrix) -> list[list[int]]:
    if isinstance(matrix, np.ndarray):
        return [[int(x) for x in row] for row in matrix]
    return [list(row) for row in matrix]


def rref(field: Field, matrix) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = _to_rows(matrix)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = field.neg(rows[i][c])
                rows[i] = [field.add(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(field: Field, matrix) -> int:
    return len(rref(field, matrix)[1])


def nullspace(field: Field, matrix) -> list[list[int]]:
    """Basis of the right nullspace, one vector per free column, ascending."""
    rows, pivots = rref(field, matrix)
    ncols = len(rows[0]) if rows else 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(rows[r][f])
        basis.append(v)
    return basis


def solve_unique(field: Field, matrix, rhs: Sequence[int]) -> list[int]:
    """Solve A x = b expecting a unique solution.

    Raises InconsistentSystem when no solution exists and
    UnderdeterminedSystem when the columns of A do not have full rank.
    """
    rows = _to_rows(matrix)
    ncols = len(rows[0]) if rows else 0
    aug = [row + [int(b)] for row, b in zip(rows, rhs)]
    red, pivots = rref(field, aug)
    if ncols in pivots:
        raise InconsistentSystem("no solution: inconsistent augmented row")
    if len(pivots) < ncols:
        raise UnderdeterminedSystem(f"rank {len(pivots)} < {ncols} unknowns")
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def det(field: Field, matrix) -> int:
    """Determinant of a square matrix by elimination with swap tracking."""
    rows = _to_rows(matrix)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant needs a square matrix")
    sign_flip = False
    acc = 1
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            sign_flip = not sign_flip
        piv = rows[c][c]
        acc = field.mul(acc, piv)
        inv = field.inv(piv)
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = field.neg(field.mul(rows[i][c], inv))
                rows[i] = [field.add(x, field.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return field.neg(acc) if sign_flip else acc


def mat_vec(field: Field, matrix: np.ndarray, vec: Sequence[int]) -> np.ndarray:
    """Matrix-vector product over GF(q) using the field tables."""
    tb = field.tables()
    m = np.asarray(matrix)
    acc = np.zeros(m.shape[0], dtype=tb.dtype)
    for j, vj in enumerate(vec):
        if vj:
            acc = tb.add[acc, tb.mul[m[:, j], vj]]
    return acc


def batch_full_col_rank(tables: FieldTables, mats: np.ndarray) -> np.ndarray:
    """Column-rank test for a stack of matrices.

    ``mats`` has shape (B, R, C) and holds field element indices; the
    result is a boolean (B,) array, True where the C columns are linearly
    independent.  Pivoting is first-nonzero, identical to the scalar
    routines, and the input is not modified.
    """
    mats = np.ascontiguousarray(mats, dtype=tables.dtype)
    mats = mats.copy()
    B, R, C = mats.shape
    if C > R:
        return np.zeros(B, dtype=bool)
    ok = np.ones(B, dtype=bool)
    bidx = np.arange(B)
    add, mul, neg, inv = tables.add, tables.mul, tables.neg, tables.inv
    for c in range(C):
        col = mats[:, c:, c]
        nz = col != 0
        ok &= nz.any(axis=1)
        piv = np.argmax(nz, axis=1)  # first nonzero row offset (0 when none; ok already False)
        rsel = c + piv
        tmp = mats[bidx, rsel, c:].copy()
        mats[bidx, rsel, c:] = mats[:, c, c:]
        mats[:, c, c:] = tmp
        if c + 1 == R:
            break
        ipiv = inv[mats[:, c, c]]
        below = mats[:, c + 1:, c]
        factor = mul[below, ipiv[:, None]]
        contrib = mul[neg[factor][:, :, None], mats[:, c, None, c:]]
        mats[:, c + 1:, c:] = add[mats[:, c + 1:, c:], contrib]
    return ok
