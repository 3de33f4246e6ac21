"""Real Lie algebras given by their Chevalley-Eilenberg differential.

An algebra of dimension ``dim`` is stored as the differentials ``d e^k`` of
the dual basis, each a dict from real 2-letter words (bit ``a-1`` is e^a) to
real Scalars.  Brackets follow ``e^k([X_i, X_j]) = -d e^k(X_i, X_j)``, so the
Salamon string ``(0,0,0,0,12,34)`` has ``[X_1, X_2] = -X_5``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .forms import StructureEquations, jacobi_failures, to_real_terms
from .kernels import antiderivation_terms, wedge_terms
from .scalar import ONE, ZERO, Scalar

__all__ = [
    "JacobiError", "DomainError", "LieAlgebra", "SeriesProfile", "AlgebraClass",
    "algebra_from_mu", "descending_series", "center", "betti", "alpha_invariant",
    "alpha_details", "fingerprint", "classify_by_fingerprint", "is_nilpotent",
    "common_divisor_dim", "jacobi_by_brackets", "d_squared_vanishes",
]


class JacobiError(ValueError):
    """The bracket fails the Jacobi identity; ``index`` is the offending 1-based form."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class DomainError(ValueError):
    pass


def _bit(a: int) -> int:
    return 1 << (a - 1)


class LieAlgebra:
    def __init__(self, dim: int, differentials: Sequence[dict], check: bool = True):
        if dim < 1 or len(differentials) != dim:
            raise ValueError(f"need {dim} differentials, got {len(differentials)}")
        full = (1 << dim) - 1
        d = []
        for k, dk in enumerate(differentials, 1):
            clean = {}
            for w, c in dk.items():
                if w & ~full or bin(w).count("1") != 2:
                    raise ValueError(f"d e^{k}: {w:#b} is not a 2-word in dimension {dim}")
                c = c if isinstance(c, Scalar) else Scalar(c)
                if not c.is_real():
                    raise ValueError(f"d e^{k} has a non-real coefficient {c}")
                if c:
                    clean[w] = c
            d.append(clean)
        self.dim = dim
        self.d = tuple(d)
        if check:
            for k, dk in enumerate(self.d, 1):
                if antiderivation_terms(dk, list(self.d)):
                    raise JacobiError(f"Jacobi identity fails: d(d e^{k}) != 0", k)

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, check: bool = True) -> "LieAlgebra":
        """``brackets[(i, j)] = {k: c}`` means ``[X_i, X_j] = sum c X_k`` (1-based, i < j)."""
        d = [dict() for _ in range(dim)]
        for (i, j), img in brackets.items():
            if i == j:
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            w = _bit(i) | _bit(j)
            for k, c in img.items():
                cur = d[k - 1].get(w, ZERO)
                d[k - 1][w] = cur - Scalar(c) * sign
        return cls(dim, d, check)

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for dk in self.d for c in dk.values())

    @property
    def eps(self) -> float | None:
        eps = [c.eps for dk in self.d for c in dk.values() if c.eps is not None]
        return max(eps) if eps else None

    def structure_constant(self, i: int, j: int, k: int) -> Scalar:
        """Coefficient of X_k in [X_i, X_j] (1-based)."""
        if i == j:
            return ZERO
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        c = self.d[k - 1].get(_bit(i) | _bit(j), ZERO)
        return -c if sign > 0 else c

    def bracket_vector(self, i: int, j: int) -> list[Scalar]:
        return [self.structure_constant(i, j, k) for k in range(1, self.dim + 1)]

    def bracket(self, x: Sequence, y: Sequence) -> list[Scalar]:
        out = [ZERO] * self.dim
        for i, xi in enumerate(x, 1):
            if not xi:
                continue
            for j, yj in enumerate(y, 1):
                if not yj or i == j:
                    continue
                f = xi * yj
                for k in range(self.dim):
                    c = self.structure_constant(i, j, k + 1)
                    if c:
                        out[k] = out[k] + f * c
        return out

    def nonzero_brackets(self) -> dict:
        out = {}
        for i, j in itertools.combinations(range(1, self.dim + 1), 2):
            v = self.bracket_vector(i, j)
            if any(v):
                out[(i, j)] = {k: c for k, c in enumerate(v, 1) if c}
        return out

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        if self.dim != other.dim:
            return False
        for a, b in zip(self.d, other.d):
            for w in set(a) | set(b):
                if a.get(w, ZERO) != b.get(w, ZERO):
                    return False
        return True

    __hash__ = None

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, brackets={len(self.nonzero_brackets())})"


def jacobi_by_brackets(g: LieAlgebra) -> bool:
    """Cyclic sum [[X_i,X_j],X_k] + ... = 0 on basis triples, evaluated on brackets."""
    n = g.dim
    units = [[ONE if a == b else ZERO for a in range(n)] for b in range(n)]
    for i, j, k in itertools.combinations(range(n), 3):
        x, y, z = units[i], units[j], units[k]
        total = [a + b + c for a, b, c in zip(g.bracket(g.bracket(x, y), z),
                                               g.bracket(g.bracket(y, z), x),
                                               g.bracket(g.bracket(z, x), y))]
        if any(total):
            return False
    return True


def d_squared_vanishes(g: LieAlgebra) -> bool:
    return all(not antiderivation_terms(dk, list(g.d)) for dk in g.d)


def algebra_from_mu(eqs: StructureEquations) -> LieAlgebra:
    """Real algebra underlying the complex structure equations ``eqs``."""
    bad = jacobi_failures(eqs)
    if bad:
        raise JacobiError(f"Jacobi identity fails: d(mu^{bad[0]}) != 0", bad[0])
    d = []
    for m in eqs.mu:
        real = to_real_terms(m)
        d.append({w: c.real for w, c in real.items() if c.real})
        d.append({w: c.imag for w, c in real.items() if c.imag})
    return LieAlgebra(2 * eqs.n, d, check=False)


# -- invariants ----------------------------------------------------------------

def _words(dim: int, deg: int) -> list[int]:
    return [sum(1 << i for i in c) for c in itertools.combinations(range(dim), deg)]


def _column(terms: dict, index: dict) -> list:
    v = [ZERO] * len(index)
    for w, c in terms.items():
        v[index[w]] = c
    return v


@dataclass(frozen=True)
class SeriesProfile:
    descending: tuple[int, ...]
    step: int | None
    center_dim: int | None = None
    b1: int | None = None
    b2: int | None = None
    alpha: int | None = None
    alpha_exact: bool = True
    divisor_dim: int | None = None

    @property
    def nilpotent(self) -> bool:
        return self.descending[-1] == 0

    def key(self) -> tuple:
        return (self.step, self.descending, self.center_dim, self.b1, self.b2, self.alpha,
                self.divisor_dim)


def descending_series(g: LieAlgebra) -> SeriesProfile:
    n = g.dim
    basis = [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    dims = [n]
    units = [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    while True:
        vecs = [g.bracket(x, e) for x in basis for e in units]
        vecs = [v for v in vecs if any(v)]
        basis = linalg.span_basis(vecs) if vecs else []
        if len(basis) == dims[-1]:
            break
        dims.append(len(basis))
        if not basis:
            break
    step = len(dims) - 1 if dims[-1] == 0 else None
    return SeriesProfile(tuple(dims), step)


def is_nilpotent(g: LieAlgebra) -> bool:
    return descending_series(g).nilpotent


def center(g: LieAlgebra) -> list[list[Scalar]]:
    n = g.dim
    rows = []
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            row = [g.structure_constant(i, j, k) for i in range(1, n + 1)]
            if any(row):
                rows.append(row)
    return linalg.nullspace(rows, ncols=n, one=ONE, zero=ZERO)


def _d_matrix(g: LieAlgebra, deg: int) -> tuple[list[list], int]:
    src = _words(g.dim, deg)
    dst = {w: i for i, w in enumerate(_words(g.dim, deg + 1))}
    images = list(g.d)
    cols = [_column(antiderivation_terms({w: ONE}, images), dst) for w in src]
    nonzero = [c for c in cols if any(c)]
    return nonzero, len(src)


def betti(g: LieAlgebra) -> tuple[int, int]:
    d1, n1 = _d_matrix(g, 1)
    d2, n2 = _d_matrix(g, 2)
    r1 = linalg.rank(d1) if d1 else 0
    r2 = linalg.rank(d2) if d2 else 0
    return n1 - r1, (n2 - r2) - r1


@dataclass(frozen=True)
class AlphaResult:
    value: int
    exact: bool
    exact_space_dim: int


def _quadratic_rows(basis: list[dict]) -> list[list]:
    """Rows (A, B, C) of the 4-word coefficients of (a t1 + b t2)^2 = A a^2 + B ab + C b^2."""
    t1, t2 = basis
    sq1 = wedge_terms(t1, t1)
    sq2 = wedge_terms(t2, t2)
    mix = wedge_terms(t1, t2)
    rows = []
    for w in set(sq1) | set(sq2) | set(mix):
        rows.append([sq1.get(w, ZERO), mix.get(w, ZERO) * 2, sq2.get(w, ZERO)])
    return rows


def _alpha_two(basis: list[dict]) -> int:
    rows = [r for r in _quadratic_rows(basis) if any(r)]
    if not rows:
        return 2
    red = linalg.span_basis(rows)
    r = len(red)
    if r == 3:
        return 0
    if r == 1:
        a, b, c = red[0]
        disc = b * b - a * c * 4
        s = disc.sign()
        return 2 if s > 0 else (1 if s == 0 else 0)
    (w,) = linalg.nullspace(red, one=ONE, zero=ZERO)
    return 1 if w[1] * w[1] == w[0] * w[2] else 0


def _alpha_sampled(basis: list[dict], seed: int = 0, starts: int = 40) -> int:
    import numpy as np
    from scipy.optimize import least_squares

    m = len(basis)
    words = sorted({w for a in basis for b in basis for w in wedge_terms(a, b)})
    idx = {w: i for i, w in enumerate(words)}
    # tensor T[w, i, j] with (sum x_i t_i)^2 = sum_ij x_i x_j t_i ^ t_j
    T = np.zeros((len(words), m, m))
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            for w, c in wedge_terms(a, b).items():
                T[idx[w], i, j] = float(c.re)

    def residual(x):
        return np.concatenate([np.einsum("wij,i,j->w", T, x, x), [x @ x - 1.0]])

    # 2-forms commute, so T is symmetric in (i, j)
    def jac(x):
        return np.vstack([2.0 * np.einsum("wij,j->wi", T, x), 2.0 * x])

    rng = np.random.default_rng(seed)
    sols = []
    with np.errstate(invalid="ignore", divide="ignore"):
        for _ in range(starts):
            x0 = rng.standard_normal(m)
            res = least_squares(residual, x0 / np.linalg.norm(x0), jac=jac,
                                xtol=1e-12, ftol=1e-12, gtol=1e-12)
            if np.max(np.abs(residual(res.x))) < 1e-9:
                sols.append(res.x)
    if not sols:
        return 0
    sv = np.linalg.svd(np.array(sols), compute_uv=False)
    return int(np.sum(sv > 1e-6 * sv[0]))


def alpha_details(g: LieAlgebra, seed: int = 0) -> AlphaResult:
    """Dimension of the span of exact 2-forms with vanishing self-wedge.

    Exact for exact-space dimension at most 2 and whenever every self-wedge
    vanishes identically; otherwise a seeded sampling estimate (``exact`` False).
    """
    words = _words(g.dim, 2)
    index = {w: i for i, w in enumerate(words)}
    vecs = [_column(dk, index) for dk in g.d if dk]
    rows = linalg.span_basis(vecs) if vecs else []
    basis = [{words[i]: c for i, c in enumerate(r) if c} for r in rows]
    m = len(basis)
    if m == 0:
        return AlphaResult(0, True, 0)
    if m == 1:
        return AlphaResult(0 if wedge_terms(basis[0], basis[0]) else 1, True, 1)
    if m == 2:
        return AlphaResult(_alpha_two(basis), True, 2)
    if all(not wedge_terms(a, b) for a in basis for b in basis):
        return AlphaResult(m, True, m)
    return AlphaResult(_alpha_sampled(basis, seed), False, m)


def common_divisor_dim(g: LieAlgebra) -> int:
    """Dimension of {phi in g^* : phi ^ d psi = 0 for every psi in g^*}.

    A nonzero phi divides every exact 2-form, so ker phi is an abelian
    subalgebra of codimension one.  Separates h10 from h12.
    """
    n = g.dim
    rows: dict = {}
    for k, dk in enumerate(g.d):
        for i in range(n):
            for w, c in wedge_terms({1 << i: ONE}, dk).items():
                rows.setdefault((k, w), [ZERO] * n)[i] = c
    return n - (linalg.rank(list(rows.values())) if rows else 0)


def alpha_invariant(g: LieAlgebra) -> int:
    return alpha_details(g).value


def fingerprint(g: LieAlgebra) -> SeriesProfile:
    series = descending_series(g)
    b1, b2 = betti(g)
    alpha = alpha_details(g)
    return SeriesProfile(series.descending, series.step, len(center(g)), b1, b2,
                         alpha.value, alpha.exact, common_divisor_dim(g))


@dataclass(frozen=True)
class AlgebraClass:
    """A single catalog tag, or a candidate set when invariants do not separate."""

    candidates: frozenset

    @classmethod
    def of(cls, *tags: str) -> "AlgebraClass":
        if not tags:
            raise ValueError("empty class")
        return cls(frozenset(tags))

    @property
    def unique(self) -> bool:
        return len(self.candidates) == 1

    @property
    def tag(self) -> str | None:
        return next(iter(self.candidates)) if self.unique else None

    def __contains__(self, tag: str) -> bool:
        return tag in self.candidates

    def __str__(self) -> str:
        if self.unique:
            return self.tag
        return "{" + ",".join(sorted(self.candidates, key=_tag_order)) + "}"


def _tag_order(tag: str) -> tuple:
    digits = "".join(ch for ch in tag if ch.isdigit())
    return (int(digits) if digits else 0, tag)


def classify_by_fingerprint(g: LieAlgebra) -> AlgebraClass:
    from .catalog import catalog_fingerprints

    if g.dim != 6:
        raise DomainError(f"fingerprint classification needs dimension 6, got {g.dim}")
    series = descending_series(g)
    if not series.nilpotent:
        raise DomainError("algebra is not nilpotent")
    key = fingerprint(g).key()
    tags = [t for t, fp in catalog_fingerprints().items() if fp.key() == key]
    if not tags:
        raise DomainError(f"fingerprint {key} matches no catalog algebra")
    return AlgebraClass.of(*tags)
