"""Gaussian-rational scalars with an optional tolerance-tagged float backend.

Exact scalars hold two rationals and never round.  Approximate scalars hold
two floats plus an ``eps``; equality and zero tests on them are componentwise
within ``eps``.  Any operation mixing the two backends yields an approximate
result carrying the larger ``eps``.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction

__all__ = ["Scalar", "Q", "I", "ZERO", "ONE", "DEFAULT_EPS", "as_scalar", "to_rational"]

DEFAULT_EPS = 1e-9

_RATIONAL_TYPES: tuple = (int, Fraction, type(Q(0)))


def to_rational(x):
    """Convert an int/Fraction/mpq/decimal string to the rational backing type."""
    if isinstance(x, bool):
        return Q(int(x))
    if isinstance(x, _RATIONAL_TYPES):
        return Q(x)
    if isinstance(x, str):
        return Q(Fraction(x))
    if isinstance(x, numbers.Rational):
        return Q(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class Scalar:
    """Complex number with exact (Gaussian rational) or approximate backend."""

    __slots__ = ("re", "im", "eps")

    def __init__(self, re=0, im=0, eps: float | None = None):
        if isinstance(re, Scalar):
            if im:
                raise TypeError("Scalar(Scalar, im) is ambiguous")
            self.re, self.im, self.eps = re.re, re.im, re.eps
            return
        if isinstance(re, complex):
            re, im = re.real, re.imag + (im or 0)
        if eps is None and (isinstance(re, float) or isinstance(im, float)):
            eps = DEFAULT_EPS
        if eps is None:
            self.re = to_rational(re)
            self.im = to_rational(im)
            self.eps = None
        else:
            self.re = float(re)
            self.im = float(im)
            self.eps = float(eps)

    @classmethod
    def _make(cls, re, im, eps):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        obj.eps = eps
        return obj

    @classmethod
    def approx(cls, re=0.0, im=0.0, eps: float = DEFAULT_EPS) -> "Scalar":
        return cls(float(re), float(im), eps)

    # -- backend helpers -------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.eps is None

    def to_approx(self, eps: float = DEFAULT_EPS) -> "Scalar":
        if self.eps is not None:
            return self._make(self.re, self.im, max(self.eps, eps))
        return self._make(float(self.re), float(self.im), eps)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    # -- arithmetic ------------------------------------------------------

    def _pair(self, other):
        """Return (self_re, self_im, other_re, other_im, eps) on a common backend."""
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        e1, e2 = self.eps, other.eps
        if e1 is None and e2 is None:
            return self.re, self.im, other.re, other.im, None
        eps = max(e for e in (e1, e2) if e is not None)
        return (float(self.re), float(self.im), float(other.re), float(other.im), eps)

    def __add__(self, other):
        try:
            a, b, c, d, eps = self._pair(other)
        except TypeError:
            return NotImplemented
        return self._make(a + c, b + d, eps)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            a, b, c, d, eps = self._pair(other)
        except TypeError:
            return NotImplemented
        return self._make(a - c, b - d, eps)

    def __rsub__(self, other):
        try:
            a, b, c, d, eps = self._pair(other)
        except TypeError:
            return NotImplemented
        return self._make(c - a, d - b, eps)

    def __mul__(self, other):
        try:
            a, b, c, d, eps = self._pair(other)
        except TypeError:
            return NotImplemented
        return self._make(a * c - b * d, a * d + b * c, eps)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            a, b, c, d, eps = self._pair(other)
        except TypeError:
            return NotImplemented
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("division by zero scalar")
        return self._make((a * c + b * d) / den, (b * c - a * d) / den, eps)

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def __neg__(self):
        return self._make(-self.re, -self.im, self.eps)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ONE / (self ** -k)
        out = ONE if self.eps is None else ONE.to_approx(self.eps)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return self._make(self.re, -self.im, self.eps)

    def abs2(self) -> "Scalar":
        """Squared modulus |z|^2, a real scalar on the same backend."""
        return self._make(self.re * self.re + self.im * self.im, self.re * 0, self.eps)

    @property
    def real(self) -> "Scalar":
        return self._make(self.re, self.im * 0, self.eps)

    @property
    def imag(self) -> "Scalar":
        return self._make(self.im, self.re * 0, self.eps)

    # -- predicates ------------------------------------------------------

    def __bool__(self) -> bool:
        if self.eps is None:
            return bool(self.re) or bool(self.im)
        return abs(self.re) > self.eps or abs(self.im) > self.eps

    def is_real(self) -> bool:
        if self.eps is None:
            return self.im == 0
        return abs(self.im) <= self.eps

    def sign(self) -> int:
        """Sign of a real scalar (-1, 0, 1); approximate zero counts as 0."""
        if not self.is_real():
            raise ValueError(f"sign() of non-real scalar {self}")
        if self.eps is None:
            return (self.re > 0) - (self.re < 0)
        if abs(self.re) <= self.eps:
            return 0
        return 1 if self.re > 0 else -1

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = as_scalar(other)
            except TypeError:
                return NotImplemented
        if self.eps is None and other.eps is None:
            return self.re == other.re and self.im == other.im
        eps = max(e for e in (self.eps, other.eps) if e is not None)
        return (abs(float(self.re) - float(other.re)) <= eps
                and abs(float(self.im) - float(other.im)) <= eps)

    def __hash__(self):
        if self.eps is not None:
            # approximate equality is not transitive; one bucket keeps eq/hash coherent
            return hash("approx-scalar")
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def _real_cmp(self, other):
        other = as_scalar(other)
        diff = self - other
        return diff.sign()

    def __lt__(self, other):
        return self._real_cmp(other) < 0

    def __le__(self, other):
        return self._real_cmp(other) <= 0

    def __gt__(self, other):
        return self._real_cmp(other) > 0

    def __ge__(self, other):
        return self._real_cmp(other) >= 0

    # -- text ------------------------------------------------------------

    def __str__(self) -> str:
        if self.eps is None:
            re, im = self.re, self.im
            if im == 0:
                return str(re)
            im_abs = abs(im)
            im_txt = "i" if im_abs == 1 else f"{im_abs}*i"
            if re == 0:
                return im_txt if im > 0 else "-" + im_txt
            return f"{re}{'+' if im > 0 else '-'}{im_txt}"
        re, im = self.re, self.im
        if im == 0:
            return repr(re)
        im_txt = f"{abs(im)!r}*i"
        if re == 0:
            return im_txt if im > 0 else "-" + im_txt
        return f"{re!r}{'+' if im > 0 else '-'}{im_txt}"

    def __repr__(self) -> str:
        if self.eps is None:
            return f"Scalar({self})"
        return f"Scalar.approx({self.re!r}, {self.im!r}, eps={self.eps!r})"


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (float, complex)):
        return Scalar(x)
    if isinstance(x, _RATIONAL_TYPES) or isinstance(x, numbers.Rational):
        return Scalar._make(to_rational(x), Q(0), None)
    raise TypeError(f"cannot interpret {x!r} as a Scalar")


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
