"""Complexified exterior algebra on a 2n-dimensional real dual space.

Letters ``0..n-1`` stand for the (1,0)-forms w^1..w^n and letters ``n..2n-1``
for their conjugates; a word is a bitmask read in increasing letter order, so
the fixed order is 1 < ... < n < 1bar < ... < nbar.  The real dual basis
e^1..e^{2n} is tied to it by ``w^j = e^{2j-1} + i e^{2j}``; real-basis forms
use letter ``a-1`` for e^a.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .kernels import antiderivation_terms, substitute_terms, wedge_terms
from .scalar import I, ONE, Q, Scalar, as_scalar

__all__ = [
    "StructuralError", "Form", "StructureEquations",
    "omega", "omegabar", "word", "wedge", "conjugate", "project_bidegree",
    "d_mu", "jacobi_holds", "to_real_terms", "from_real_terms", "random_form",
    "word_letters", "format_word",
]


class StructuralError(ValueError):
    """Operands live on different dimensions or have the wrong shape."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def word_letters(w: int) -> list[int]:
    out = []
    while w:
        low = w & -w
        out.append(low.bit_length() - 1)
        w ^= low
    return out


def format_word(w: int, n: int) -> str:
    """Human-readable word such as ``12c1c2`` (``c`` marks a conjugate letter)."""
    if w == 0:
        return "1"
    parts = []
    for letter in word_letters(w):
        parts.append(str(letter + 1) if letter < n else f"c{letter - n + 1}")
    return "".join(parts)


class Form:
    """An element of the complexified exterior algebra (possibly inhomogeneous)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, object] | None = None):
        if n < 1:
            raise StructuralError("dimension n must be positive")
        self.n = n
        full = (1 << (2 * n)) - 1
        clean = {}
        for w, c in (terms or {}).items():
            if w & ~full:
                raise StructuralError(f"word {w:#b} exceeds dimension {n}")
            c = as_scalar(c)
            if c:
                clean[w] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Form":
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def scalar(cls, n: int, c) -> "Form":
        return cls(n, {0: c})

    # -- structure -------------------------------------------------------

    def degrees(self) -> set[int]:
        return {_popcount(w) for w in self.terms}

    @property
    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) > 1:
            raise StructuralError("form is not homogeneous")
        return degs.pop() if degs else 0

    def bidegrees(self) -> set[tuple[int, int]]:
        lo = (1 << self.n) - 1
        return {(_popcount(w & lo), _popcount(w >> self.n)) for w in self.terms}

    def coefficient(self, w: int) -> Scalar:
        return self.terms.get(w, Scalar(0))

    def is_real(self) -> bool:
        return conjugate(self) == self

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- vector space ----------------------------------------------------

    def _check(self, other: "Form") -> None:
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.n != self.n:
            raise StructuralError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            prev = out.get(w)
            out[w] = c if prev is None else prev + c
        return Form._raw(self.n, {w: c for w, c in out.items() if c})

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Form._raw(self.n, {w: -c for w, c in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, Form):
            return NotImplemented
        c = as_scalar(c)
        if not c:
            return Form._raw(self.n, {})
        return Form._raw(self.n, {w: x * c for w, x in self.terms.items() if x * c})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (ONE / as_scalar(c))

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)) and not isinstance(other, bool):
            other = Form.scalar(self.n, other)
        if not isinstance(other, Form) or other.n != self.n:
            return NotImplemented
        diff = self - other
        return not diff.terms

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return f"Form(n={self.n}, 0)"
        parts = [f"({c})*w{format_word(w, self.n)}" for w, c in sorted(self.terms.items())]
        return f"Form(n={self.n}, " + " + ".join(parts) + ")"

    def to_approx(self, eps: float) -> "Form":
        return Form._raw(self.n, {w: c.to_approx(eps) for w, c in self.terms.items()})


def omega(n: int, j: int) -> Form:
    """The (1,0)-form w^j (1-indexed)."""
    if not 1 <= j <= n:
        raise StructuralError(f"index {j} outside 1..{n}")
    return Form._raw(n, {1 << (j - 1): ONE})


def omegabar(n: int, j: int) -> Form:
    if not 1 <= j <= n:
        raise StructuralError(f"index {j} outside 1..{n}")
    return Form._raw(n, {1 << (n + j - 1): ONE})


def word(n: int, unbarred: Iterable[int] | str = (), barred: Iterable[int] | str = ()) -> Form:
    """Basic form w^{j1..jp k1bar..kqbar} = w^{j1}^...^w^{jp}^w^{k1bar}^...

    ``word(3, "12", "12")`` is w^{12 1bar 2bar}; letters are wedged in the
    order given, so unsorted input picks up the permutation sign.
    """
    out = Form.scalar(n, 1)
    for j in unbarred:
        out = out ^ omega(n, int(j))
    for j in barred:
        out = out ^ omegabar(n, int(j))
    return out


def wedge(a: Form, b: Form) -> Form:
    a._check(b)
    return Form._raw(a.n, wedge_terms(a.terms, b.terms))


def _conj_word(w: int, n: int) -> tuple[int, int]:
    lo = (1 << n) - 1
    u, v = w & lo, w >> n
    sign = -1 if (_popcount(u) * _popcount(v)) & 1 else 1
    return (u << n) | v, sign


def conjugate(a: Form) -> Form:
    out = {}
    for w, c in a.terms.items():
        cw, s = _conj_word(w, a.n)
        cc = c.conjugate()
        out[cw] = cc if s > 0 else -cc
    return Form._raw(a.n, out)


def project_bidegree(a: Form, p: int, q: int) -> Form:
    if p < 0 or q < 0:
        raise ValueError("bidegree components must be non-negative")
    lo = (1 << a.n) - 1
    return Form._raw(a.n, {w: c for w, c in a.terms.items()
                           if _popcount(w & lo) == p and _popcount(w >> a.n) == q})


@dataclass(frozen=True, eq=False)
class StructureEquations:
    """The n images ``d w^j = mu[j-1]``; the conjugate images are implied."""

    n: int
    mu: tuple[Form, ...]
    _dcache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        mu = tuple(self.mu)
        object.__setattr__(self, "mu", mu)
        if len(mu) != self.n:
            raise StructuralError(f"expected {self.n} images, got {len(mu)}")
        for j, m in enumerate(mu, 1):
            if not isinstance(m, Form):
                raise TypeError(f"image {j} is not a Form")
            if m.n != self.n:
                raise StructuralError(f"image {j} lives on dimension {m.n}, not {self.n}")
            if m.terms and m.degrees() != {2}:
                raise StructuralError(f"image {j} is not a 2-form")

    @classmethod
    def from_forms(cls, *mu: Form) -> "StructureEquations":
        if not mu:
            raise StructuralError("need at least one image")
        return cls(mu[0].n, tuple(mu))

    @cached_property
    def images(self) -> list[dict]:
        conj = [conjugate(m).terms for m in self.mu]
        return [m.terms for m in self.mu] + conj

    def __eq__(self, other):
        if not isinstance(other, StructureEquations):
            return NotImplemented
        return self.n == other.n and all(a == b for a, b in zip(self.mu, other.mu))

    __hash__ = None

    def to_approx(self, eps: float) -> "StructureEquations":
        return StructureEquations(self.n, tuple(m.to_approx(eps) for m in self.mu))


def d_mu(eqs: StructureEquations, a: Form) -> Form:
    if a.n != eqs.n:
        raise StructuralError(f"dimension mismatch: form on {a.n}, equations on {eqs.n}")
    cache = eqs._dcache
    images = eqs.images
    out: dict = {}
    for w, c in a.terms.items():
        dw = cache.get(w)
        if dw is None:
            dw = antiderivation_terms({w: ONE}, images)
            cache[w] = dw
        for k, v in dw.items():
            prev = out.get(k)
            x = v * c
            out[k] = x if prev is None else prev + x
    return Form._raw(a.n, {w: c for w, c in out.items() if c})


def jacobi_holds(eqs: StructureEquations) -> bool:
    return all(not d_mu(eqs, m) for m in eqs.mu)


def jacobi_failures(eqs: StructureEquations) -> list[int]:
    """1-based indices j with d(mu^j) != 0."""
    return [j for j, m in enumerate(eqs.mu, 1) if d_mu(eqs, m)]


# -- real basis --------------------------------------------------------------

def _to_real_images(n: int) -> list[dict]:
    imgs = []
    for j in range(n):  # w^j -> e^{2j-1} + i e^{2j}
        imgs.append({1 << (2 * j): ONE, 1 << (2 * j + 1): I})
    for j in range(n):  # wbar^j -> e^{2j-1} - i e^{2j}
        imgs.append({1 << (2 * j): ONE, 1 << (2 * j + 1): -I})
    return imgs


def _from_real_images(n: int) -> list[dict]:
    half = Scalar(Q(1, 2))
    imgs = []
    for j in range(n):
        # e^{2j-1} = (w + wbar)/2 ;  e^{2j} = (w - wbar)/(2i)
        imgs.append({1 << j: half, 1 << (n + j): half})
        imgs.append({1 << j: -I * half, 1 << (n + j): I * half})
    return imgs


_REAL_IMAGES: dict = {}
_COMPLEX_IMAGES: dict = {}


def to_real_terms(a: Form) -> dict:
    """Coefficients of ``a`` on the real dual basis e^1..e^{2n} (complex Scalars)."""
    imgs = _REAL_IMAGES.get(a.n)
    if imgs is None:
        imgs = _REAL_IMAGES[a.n] = _to_real_images(a.n)
    return substitute_terms(a.terms, imgs)


def from_real_terms(terms: Mapping[int, object], n: int) -> Form:
    imgs = _COMPLEX_IMAGES.get(n)
    if imgs is None:
        imgs = _COMPLEX_IMAGES[n] = _from_real_images(n)
    clean = {w: as_scalar(c) for w, c in terms.items()}
    return Form._raw(n, substitute_terms(clean, imgs))


def random_form(n: int, degree: int, nterms: int, rng: random.Random,
                max_num: int = 5, max_den: int = 4) -> Form:
    """Random exact form of the given degree with up to ``nterms`` terms."""
    from itertools import combinations
    words = [sum(1 << i for i in c) for c in combinations(range(2 * n), degree)]
    chosen = rng.sample(words, min(nterms, len(words)))

    def rat():
        return Q(rng.randint(-max_num, max_num), rng.randint(1, max_den))

    return Form(n, {w: Scalar(rat(), rat()) for w in chosen})
