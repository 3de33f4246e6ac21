"""Gaussian elimination over exact fields (rationals, Scalars) or floats.

Matrices are lists of rows.  With ``tol == 0`` entries are compared with plain
truth testing, which is literal for rationals and eps-aware for approximate
Scalars; with ``tol > 0`` entries are floats and partial pivoting is used.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["rref", "rank", "nullspace", "solve", "det", "inverse", "span_basis"]


def _zero(x, tol: float) -> bool:
    return abs(x) <= tol if tol else not x


def rref(rows: Sequence[Sequence], tol: float = 0.0) -> tuple[list[list], list[int]]:
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        if tol:
            best = max(range(r, len(m)), key=lambda i: abs(m[i][c]))
            if _zero(m[best][c], tol):
                continue
        else:
            best = next((i for i in range(r, len(m)) if m[i][c]), None)
            if best is None:
                continue
        m[r], m[best] = m[best], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if not _zero(f, tol):
                    row_r = m[r]
                    m[i] = [a - f * b for a, b in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence], tol: float = 0.0) -> int:
    return len(rref(rows, tol)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None, tol: float = 0.0,
              one=1, zero=0) -> list[list]:
    """Basis of {x : rows @ x = 0}; ``one``/``zero`` set the entry type of the result."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    ncols = len(rows[0])
    m, pivots = rref(rows, tol)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def span_basis(vectors: Sequence[Sequence], tol: float = 0.0) -> list[list]:
    """Reduced basis of the row span."""
    m, pivots = rref(vectors, tol)
    return m[:len(pivots)]


def solve(a: Sequence[Sequence], b: Sequence, tol: float = 0.0, zero=0):
    """One solution of ``a x = b`` (free variables set to ``zero``), or None if inconsistent."""
    if not a:
        return None if any(not _zero(x, tol) for x in b) else []
    ncols = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug, tol)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for i, p in enumerate(pivots):
        x[p] = m[i][ncols]
    return x


def det(a: Sequence[Sequence], tol: float = 0.0, one=1):
    m = [list(r) for r in a]
    n = len(m)
    out = one
    for c in range(n):
        if tol:
            best = max(range(c, n), key=lambda i: abs(m[i][c]))
            if _zero(m[best][c], tol):
                return out * 0
        else:
            best = next((i for i in range(c, n) if m[i][c]), None)
            if best is None:
                return out * 0
        if best != c:
            m[c], m[best] = m[best], m[c]
            out = -out
        piv = m[c][c]
        out = out * piv
        for i in range(c + 1, n):
            f = m[i][c] / piv
            if not _zero(f, tol):
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def inverse(a: Sequence[Sequence], tol: float = 0.0, one=1, zero=0) -> list[list]:
    n = len(a)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug, tol)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m[:n]]
