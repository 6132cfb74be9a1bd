"""Exact sparse linear algebra over the rationals.

Vectors are ``dict[int, Fraction]`` without zero entries.  Matrices are
stored column-wise as a list of such vectors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

SparseVec = dict


def axpy(y: dict, a, x: dict) -> None:
    """y += a*x in place, dropping entries that cancel."""
    for i, v in x.items():
        s = y.get(i, 0) + a * v
        if s:
            y[i] = s
        else:
            y.pop(i, None)


def add_vecs(x: dict, y: dict) -> dict:
    out = dict(x)
    axpy(out, 1, y)
    return out


def scale_vec(x: dict, a) -> dict:
    if not a:
        return {}
    return {i: a * v for i, v in x.items()}


def matmul(a_cols: list[dict], b_cols: list[dict]) -> list[dict]:
    """Product A*B of column-stored matrices."""
    out = []
    for col in b_cols:
        acc: dict = {}
        for k, v in col.items():
            axpy(acc, v, a_cols[k])
        out.append(acc)
    return out


def matvec(a_cols: list[dict], x: dict) -> dict:
    acc: dict = {}
    for k, v in x.items():
        axpy(acc, v, a_cols[k])
    return acc


class Echelon:
    """Incrementally maintained reduced row echelon basis of a span."""

    def __init__(self):
        self.rows: dict = {}  # pivot key -> row with 1 at pivot, 0 at other pivots

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = dict(vec)
        for p in [p for p in v if p in self.rows]:
            if p in v:
                axpy(v, -v[p], self.rows[p])
        return v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        inv = 1 / Fraction(v[p])
        v = {i: x * inv for i, x in v.items()}
        for q, row in self.rows.items():
            if p in row:
                axpy(row, -row[p], v)
        self.rows[p] = v
        return True


def rank(vectors: Iterable[dict]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank
