"""SKT parameter region for reduced two-step structures.

Points (p, q, y) stand for ``B = p + i q`` and ``D = x + i y`` with
``x = (rho + p^2 + q^2) / 2``, so every point satisfies the SKT constraint.
For rho = 1 the ovaloid ``4y^2 - 4 + (1 + p^2 + q^2)^2 = 0`` separates h2
(outside), h4 (on it) and h5 (inside).
"""

from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .complex_structures import TwoStepCoeffs
from .lie import AlgebraClass
from .scalar import DEFAULT_EPS, Q, Scalar, as_scalar, to_rational

__all__ = ["RegionPoint", "GridAxis", "skt_region_classify", "ovaloid_value",
           "grid_nodes", "scan_region", "scan_rows"]


@dataclass(frozen=True)
class RegionPoint:
    """``y2`` may carry an exact value of y^2 when y itself is irrational."""

    rho: int
    p: Scalar
    q: Scalar
    y: Scalar
    y2: Scalar | None = None

    def __post_init__(self):
        if self.rho not in (0, 1):
            raise ValueError("rho must be 0 or 1")
        for name in ("p", "q", "y"):
            v = as_scalar(getattr(self, name))
            if not v.is_real():
                raise ValueError(f"{name} must be real")
            object.__setattr__(self, name, v)
        if self.y2 is not None:
            object.__setattr__(self, "y2", as_scalar(self.y2))

    @property
    def x(self) -> Scalar:
        return (self.p * self.p + self.q * self.q + self.rho) * Scalar(Q(1, 2))

    def y_squared(self) -> Scalar:
        return self.y2 if self.y2 is not None else self.y * self.y

    def coeffs(self) -> TwoStepCoeffs:
        B = self.p + self.q * Scalar(0, 1)
        D = self.x + self.y * Scalar(0, 1)
        if self.y2 is None:
            return TwoStepCoeffs(self.rho, B, D)
        return TwoStepCoeffs(self.rho, B, D, y2=self.y2, x_exact=self.x)


def ovaloid_value(pt: RegionPoint) -> Scalar:
    r2 = pt.p * pt.p + pt.q * pt.q
    one = r2 + 1
    return pt.y_squared() * 4 - 4 + one * one


def skt_region_classify(pt: RegionPoint) -> AlgebraClass:
    if pt.rho == 0:
        origin = not pt.p and not pt.q and not pt.y_squared()
        return AlgebraClass.of("h8" if origin else "h2")
    return AlgebraClass.of({1: "h2", 0: "h4", -1: "h5"}[ovaloid_value(pt).sign()])


@dataclass(frozen=True)
class GridAxis:
    lo: object
    hi: object
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be at least 1")


def grid_nodes(axis: GridAxis, exact: bool) -> list[Scalar]:
    """Evenly spaced nodes lo..hi; a single step yields lo."""
    lo, hi = to_rational(axis.lo), to_rational(axis.hi)
    n = axis.steps
    vals = [lo] if n == 1 else [lo + (hi - lo) * Q(k, n - 1) for k in range(n)]
    if exact:
        return [Scalar(v) for v in vals]
    return [Scalar.approx(float(v), 0.0, DEFAULT_EPS) for v in vals]


def _fmt(v: Scalar) -> str:
    if v.is_exact:
        return str(v.re)
    return repr(float(v.re) + 0.0)


def _classify_row(args) -> str:
    rho, p, q, y = args
    return str(skt_region_classify(RegionPoint(rho, p, q, y)))


def scan_rows(rho: int, p_axis: GridAxis, q_axis: GridAxis, y_axis: GridAxis,
              exact: bool = False, jobs: int = 1) -> list[tuple[Scalar, Scalar, Scalar, str]]:
    """Classified grid nodes in p-major, then q, then y order."""
    nodes = [(rho, p, q, y)
             for p in grid_nodes(p_axis, exact)
             for q in grid_nodes(q_axis, exact)
             for y in grid_nodes(y_axis, exact)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            classes = list(pool.map(_classify_row, nodes, chunksize=256))
    else:
        classes = [_classify_row(n) for n in nodes]
    return [(p, q, y, c) for (_, p, q, y), c in zip(nodes, classes)]


def scan_region(rho: int, p_axis: GridAxis, q_axis: GridAxis, y_axis: GridAxis,
                out: str | Path | None = None, exact: bool = False, jobs: int = 1) -> str:
    """CSV text with header ``p,q,y,class``; written to ``out`` (UTF-8) when given."""
    buf = io.StringIO(newline="")
    buf.write("p,q,y,class\n")
    for p, q, y, cls in scan_rows(rho, p_axis, q_axis, y_axis, exact, jobs):
        buf.write(f"{_fmt(p)},{_fmt(q)},{_fmt(y)},{cls}\n")
    text = buf.getvalue()
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
