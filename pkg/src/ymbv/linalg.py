"""Small exact linear algebra over Q(i) on sparse vectors.

Vectors are dicts ``index -> GaussianRational`` (zeros absent); a list of
vectors is read as the columns of a matrix. Everything reduces to
:func:`ymbv.kernel.sparse_rref`, whose pivots are the unique RREF pivots, so
all choices below (pivot columns, kernel bases, first-fit extensions) are
deterministic.
"""
from __future__ import annotations

from typing import Dict, Hashable, List, Sequence

from .kernel import GaussianRational, sparse_rref

Vec = Dict[Hashable, GaussianRational]

__all__ = [
    "rank",
    "pivot_columns",
    "nullspace",
    "in_span",
    "first_fit",
    "coordinates",
    "mat_vec",
    "transpose_rows",
]


def _rows_of(cols: Sequence[Vec]):
    """Rows (dict column-position -> value) of the matrix whose columns are ``cols``."""
    rows: Dict[Hashable, Dict[int, GaussianRational]] = {}
    for j, v in enumerate(cols):
        for r, x in v.items():
            if x:
                rows.setdefault(r, {})[j] = x
    return [rows[r] for r in sorted(rows, key=repr)]


def rank(cols: Sequence[Vec]) -> int:
    pivots, _ = sparse_rref(_rows_of(cols), len(cols))
    return len(pivots)


def pivot_columns(cols: Sequence[Vec]) -> List[int]:
    """Positions of the RREF pivot columns: a deterministic basis of the column span."""
    pivots, _ = sparse_rref(_rows_of(cols), len(cols))
    return sorted(pivots)


def nullspace(cols: Sequence[Vec]) -> List[Dict[int, GaussianRational]]:
    """Standard RREF kernel basis of the matrix with the given columns.

    One vector per free column ``f`` (ascending): ``x_f = 1``, other free
    columns 0, pivots solved.
    """
    n = len(cols)
    pivots, _ = sparse_rref(_rows_of(cols), n)
    out = []
    for f in range(n):
        if f in pivots:
            continue
        v = {f: GaussianRational(1)}
        for p, row in pivots.items():
            c = row.get(f)
            if c:
                v[p] = -c
        out.append(v)
    return out


def in_span(vec: Vec, cols: Sequence[Vec]) -> bool:
    return rank(list(cols) + [vec]) == rank(cols)


def first_fit(start: Sequence[Vec], candidates: Sequence[Vec]) -> List[int]:
    """Indices of ``candidates`` that, scanned in order, enlarge the span of ``start``."""
    chosen: List[int] = []
    basis = list(start)
    r = rank(basis)
    for i, c in enumerate(candidates):
        r2 = rank(basis + [c])
        if r2 > r:
            basis.append(c)
            chosen.append(i)
            r = r2
    return chosen


def coordinates(vec: Vec, cols: Sequence[Vec]) -> Dict[int, GaussianRational]:
    """Coordinates of ``vec`` in the (independent) columns ``cols``; ValueError if not in the span."""
    n = len(cols)
    rows: Dict[Hashable, Dict[int, GaussianRational]] = {}
    for j, v in enumerate(cols):
        for r, x in v.items():
            if x:
                rows.setdefault(r, {})[j] = x
    for r, x in vec.items():
        if x:
            rows.setdefault(r, {})[n] = -x
    pivots, bad = sparse_rref([rows[r] for r in sorted(rows, key=repr)], n)
    if bad is not None:
        raise ValueError("vector is not in the span")
    if len(pivots) != n:
        raise ValueError("columns are dependent")
    return {p: -row[n] for p, row in pivots.items() if row.get(n)}


def mat_vec(mat: Dict[tuple, object], vec: Dict[int, object]) -> Dict[int, object]:
    """Sparse ``mat[(r, c)]`` times sparse ``vec``."""
    out: Dict[int, object] = {}
    for (r, c), m in mat.items():
        x = vec.get(c)
        if x is None:
            continue
        t = m * x
        cur = out.get(r)
        t = t if cur is None else cur + t
        if t:
            out[r] = t
        else:
            out.pop(r, None)
    return out


def transpose_rows(mat: Dict[tuple, object]) -> Dict[tuple, object]:
    return {(c, r): v for (r, c), v in mat.items()}
