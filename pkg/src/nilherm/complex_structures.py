"""Complex structures given by a (1,0)-coframe and its structure equations.

The endomorphism on the real basis is fixed by ``w^j = e^{2j-1} + i e^{2j}``:
``J X_{2j-1} = X_{2j}`` and ``J X_{2j} = -X_{2j-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import linalg
from .forms import Form, StructureEquations, project_bidegree, word
from .kernels import substitute_terms
from .lie import AlgebraClass, LieAlgebra, algebra_from_mu
from .scalar import I, ONE, ZERO, Scalar, as_scalar

__all__ = [
    "InvariantError", "ComplexStructure", "NonNilpotentCoeffs", "NilpotentCoeffs",
    "TwoStepCoeffs", "JClass", "is_integrable", "ascending_series_adapted", "classify_J",
    "build_nonnilpotent", "build_nilpotent", "build_two_step", "classify_algebra_from_coeffs",
    "alpha_from_coeffs", "apply_basis_change", "normalize_two_step", "normalize_unit_B",
    "read_two_step", "h3_structure_type",
]


class InvariantError(ValueError):
    """Coefficients violate the invariants of their record type."""


def is_integrable(eqs: StructureEquations) -> bool:
    return all(not project_bidegree(m, 0, 2) for m in eqs.mu)


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    eqs: StructureEquations

    @property
    def n(self) -> int:
        return self.eqs.n

    @cached_property
    def algebra(self) -> LieAlgebra:
        return algebra_from_mu(self.eqs)

    def J(self, x: Sequence) -> list:
        """Apply J to a vector given on the real basis X_1..X_{2n}."""
        out = [ZERO] * len(x)
        for j in range(0, len(x), 2):
            out[j + 1] = x[j]
            out[j] = -x[j + 1]
        return out

    def J_matrix(self) -> list[list[Scalar]]:
        dim = 2 * self.n
        cols = [self.J([ONE if i == k else ZERO for i in range(dim)]) for k in range(dim)]
        return [[cols[k][i] for k in range(dim)] for i in range(dim)]

    def __eq__(self, other):
        if not isinstance(other, ComplexStructure):
            return NotImplemented
        return self.eqs == other.eqs

    __hash__ = None


# -- coefficient records ------------------------------------------------------

@dataclass(frozen=True)
class NonNilpotentCoeffs:
    A: Scalar
    E: Scalar
    b: Scalar

    def __post_init__(self):
        for name in ("A", "E", "b"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        if self.E.abs2() != ONE:
            raise InvariantError(f"|E| must be 1, got |E|^2 = {self.E.abs2()}")
        if not self.b.is_real():
            raise InvariantError("b must be real")
        if not self.b:
            raise InvariantError("b must be nonzero")


@dataclass(frozen=True)
class NilpotentCoeffs:
    epsilon: int
    rho: int
    A: Scalar = ZERO
    B: Scalar = ZERO
    C: Scalar = ZERO
    D: Scalar = ZERO

    def __post_init__(self):
        if self.epsilon not in (0, 1) or self.rho not in (0, 1):
            raise InvariantError("epsilon and rho must be 0 or 1")
        for name in ("A", "B", "C", "D"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))


@dataclass(frozen=True)
class TwoStepCoeffs:
    """``dw3 = rho w^{12} + w^{1 1bar} + B w^{1 2bar} + D w^{2 2bar}``.

    ``B_abs2``, ``y2`` and ``x_exact`` may carry exact values of |B|^2,
    (Im D)^2 and Re D when B or Im D are irrational; ``B`` and ``D`` then hold
    approximations used only to build forms.
    """

    rho: int
    B: Scalar = ZERO
    D: Scalar = ZERO
    B_abs2: Scalar | None = field(default=None)
    y2: Scalar | None = field(default=None)
    x_exact: Scalar | None = field(default=None)

    def __post_init__(self):
        if self.rho not in (0, 1):
            raise InvariantError("rho must be 0 or 1")
        object.__setattr__(self, "B", as_scalar(self.B))
        object.__setattr__(self, "D", as_scalar(self.D))
        if self.x_exact is not None:
            object.__setattr__(self, "x_exact", as_scalar(self.x_exact))
            if self.D.real != self.x_exact:
                raise InvariantError("Re D is inconsistent with x_exact")
        for name in ("B_abs2", "y2"):
            val = getattr(self, name)
            if val is not None:
                val = as_scalar(val)
                if not val.is_real() or val < 0:
                    raise InvariantError(f"{name} must be a nonnegative real")
                object.__setattr__(self, name, val)
        if self.B_abs2 is not None and self.B.abs2() != self.B_abs2:
            raise InvariantError("B is inconsistent with B_abs2")
        if self.y2 is not None and self.D.imag * self.D.imag != self.y2:
            raise InvariantError("Im D is inconsistent with y2")

    @classmethod
    def with_exact_squares(cls, rho: int, x, y2, B_abs2=0, eps: float = 1e-12) -> "TwoStepCoeffs":
        """Record with real B = sqrt(B_abs2) and D = x + i sqrt(y2); x and the squares stay exact."""
        x, y2, b2 = as_scalar(x), as_scalar(y2), as_scalar(B_abs2)

        def root(v: Scalar) -> Scalar:
            return Scalar(math.sqrt(float(v.re)), 0.0, eps)

        B = root(b2) if b2 else ZERO
        D = x.to_approx(eps) + root(y2) * I if y2 else x
        return cls(rho, B, D, B_abs2=b2, y2=y2, x_exact=x)

    @property
    def p(self) -> Scalar:
        return self.B.real

    @property
    def q(self) -> Scalar:
        return self.B.imag

    @property
    def x(self) -> Scalar:
        return self.x_exact if self.x_exact is not None else self.D.real

    @property
    def y(self) -> Scalar:
        return self.D.imag

    def abs2_B(self) -> Scalar:
        return self.B_abs2 if self.B_abs2 is not None else self.B.abs2()

    def y_squared(self) -> Scalar:
        return self.y2 if self.y2 is not None else self.y * self.y


# -- builders ---------------------------------------------------------------------

def _w(n: int, a: str, b: str = "") -> Form:
    return word(n, a, b)


def build_nonnilpotent(c: NonNilpotentCoeffs) -> ComplexStructure:
    n = 3
    mu = (
        Form(n),
        _w(n, "13") * c.E + _w(n, "1", "3"),
        _w(n, "1", "1") * c.A + _w(n, "1", "2") * (I * c.b) - _w(n, "2", "1") * (I * c.b * c.E.conjugate()),
    )
    return ComplexStructure(StructureEquations(n, mu))


def build_nilpotent(c: NilpotentCoeffs) -> ComplexStructure:
    n = 3
    e1 = 1 - c.epsilon
    mu = (
        Form(n),
        _w(n, "1", "1") * c.epsilon,
        _w(n, "12") * c.rho + _w(n, "1", "1") * (c.A * e1) + _w(n, "1", "2") * c.B
        + _w(n, "2", "1") * c.C + _w(n, "2", "2") * (c.D * e1),
    )
    return ComplexStructure(StructureEquations(n, mu))


def build_two_step(c: TwoStepCoeffs) -> ComplexStructure:
    n = 3
    mu = (
        Form(n),
        Form(n),
        _w(n, "12") * c.rho + _w(n, "1", "1") + _w(n, "1", "2") * c.B + _w(n, "2", "2") * c.D,
    )
    return ComplexStructure(StructureEquations(n, mu))


def read_two_step(J: ComplexStructure) -> TwoStepCoeffs | None:
    """Coefficients if ``J`` is literally in two-step reduced form, else None."""
    if J.n != 3:
        return None
    mu1, mu2, mu3 = J.eqs.mu
    if mu1 or mu2:
        return None
    target = {_bit_word("12"), _bit_word("1", "1"), _bit_word("1", "2"), _bit_word("2", "2")}
    if set(mu3.terms) - target:
        return None
    rho = mu3.coefficient(_bit_word("12"))
    if mu3.coefficient(_bit_word("1", "1")) != ONE or rho not in (ZERO, ONE):
        return None
    return TwoStepCoeffs(1 if rho else 0, mu3.coefficient(_bit_word("1", "2")),
                         mu3.coefficient(_bit_word("2", "2")))


def _bit_word(a: str, b: str = "", n: int = 3) -> int:
    w = 0
    for ch in a:
        w |= 1 << (int(ch) - 1)
    for ch in b:
        w |= 1 << (n + int(ch) - 1)
    return w


# -- series and classification ---------------------------------------------------------

def _annihilator(basis: list, dim: int) -> list:
    if not basis:
        return [[ONE if i == j else ZERO for i in range(dim)] for j in range(dim)]
    return linalg.nullspace(basis, ncols=dim, one=ONE, zero=ZERO)


def ascending_series_adapted(J: ComplexStructure) -> list[int]:
    """Dimensions of the J-adapted ascending series, l = 1, 2, ... until it stabilizes."""
    g = J.algebra
    dim = g.dim
    units = [[ONE if i == k else ZERO for i in range(dim)] for k in range(dim)]
    # ad matrices: column i of ad_j holds [X_i, X_j]
    brackets = [[g.bracket_vector(i, j) for j in range(1, dim + 1)] for i in range(1, dim + 1)]
    Jm = J.J_matrix()
    current: list = []
    dims: list[int] = []
    while True:
        ann = _annihilator(current, dim)
        rows = []
        for f in ann:
            for j in range(dim):
                # f([X, X_j]) as a linear functional of X
                lin = [sum((f[k] * brackets[i][j][k] for k in range(dim) if brackets[i][j][k]), ZERO)
                       for i in range(dim)]
                if any(lin):
                    rows.append(lin)
                    # f([JX, X_j]) = sum_i (J x)_i lin_i = sum_m x_m sum_i lin_i J[i][m]
                    rows.append([sum((lin[i] * Jm[i][m] for i in range(dim) if Jm[i][m]), ZERO)
                                 for m in range(dim)])
        nxt = linalg.nullspace(rows, ncols=dim, one=ONE, zero=ZERO) if rows else units
        nxt = linalg.span_basis(nxt) if nxt else []
        dims.append(len(nxt))
        if len(nxt) == len(current):
            return dims
        current = nxt
        if len(current) == dim:
            return dims


@dataclass(frozen=True)
class JClass:
    kind: str
    abelian: bool
    parallelizable: bool

    @property
    def nilpotent(self) -> bool:
        return self.kind == "nilpotent"


def is_abelian(J: ComplexStructure) -> bool:
    g = J.algebra
    dim = g.dim
    units = [[ONE if i == k else ZERO for i in range(dim)] for k in range(dim)]
    for a in range(dim):
        for b in range(a + 1, dim):
            if g.bracket(J.J(units[a]), J.J(units[b])) != g.bracket(units[a], units[b]):
                return False
    return True


def is_parallelizable(J: ComplexStructure) -> bool:
    return all(not (m - project_bidegree(m, 2, 0)) for m in J.eqs.mu)


def classify_J(J: ComplexStructure) -> JClass:
    if not is_integrable(J.eqs):
        raise ValueError("complex structure is not integrable")
    dims = ascending_series_adapted(J)
    kind = "nilpotent" if dims[-1] == 2 * J.n else "nonnilpotent"
    return JClass(kind, is_abelian(J), is_parallelizable(J))


def classify_algebra_from_coeffs(c: TwoStepCoeffs | NonNilpotentCoeffs) -> AlgebraClass:
    if isinstance(c, NonNilpotentCoeffs):
        return AlgebraClass.of("h19minus" if c.A.conjugate() == c.A * c.E else "h26plus")
    rho = as_scalar(c.rho)
    b2, x, y2 = c.abs2_B(), c.x, c.y_squared()
    if b2 == rho:
        if y2:
            return AlgebraClass.of("h2")
        if not x:
            return AlgebraClass.of("h6" if c.rho else "h8")
        return AlgebraClass.of("h4" if c.rho else "h3")
    k = rho - b2
    s = (y2 * 4 - k * (x * 4 + k)).sign()
    return AlgebraClass.of({1: "h2", 0: "h4", -1: "h5"}[s])


def alpha_from_coeffs(c: TwoStepCoeffs) -> int:
    """Exact-2-form decomposability count from the binary quadratic in Re/Im of the multiplier."""
    rho = as_scalar(c.rho)
    b2, x, y2 = c.abs2_B(), c.x, c.y_squared()
    if not rho and not b2 and not y2:
        return 1 if not x else 0
    k = rho - b2
    a, cc = k, k + x * 4
    if not a and not y2 and not cc:
        return 2
    disc = (y2 * 16 - a * cc * 4).sign()
    return 2 if disc > 0 else (1 if disc == 0 else 0)


def h3_structure_type(c: TwoStepCoeffs) -> str:
    """``J0+`` or ``J0-`` for a reduced structure on h3 (rho = B = 0, real D != 0)."""
    if c.rho or c.abs2_B() or c.y_squared() or not c.x:
        raise InvariantError("not a reduced complex structure on h3")
    return "J0+" if c.x > 0 else "J0-"


# -- basis changes --------------------------------------------------------------------

def _matrix(M) -> list[list[Scalar]]:
    return [[as_scalar(v) for v in row] for row in M]


def apply_basis_change(J: ComplexStructure, M, inverse: bool = False) -> ComplexStructure:
    """Rewrite ``J`` in the coframe w' with ``w = M w'`` (``w' = M w`` if ``inverse``)."""
    n = J.n
    M = _matrix(M)
    if len(M) != n or any(len(r) != n for r in M):
        raise ValueError(f"basis change must be {n}x{n}")
    try:
        Minv = linalg.inverse(M, one=ONE, zero=ZERO)
    except ZeroDivisionError:
        raise ValueError("basis change matrix is singular") from None
    if inverse:
        M, Minv = Minv, M
    images = []
    for i in range(n):
        images.append({1 << j: M[i][j] for j in range(n) if M[i][j]})
    for i in range(n):
        images.append({1 << (n + j): M[i][j].conjugate() for j in range(n) if M[i][j]})
    old = [Form._raw(n, substitute_terms(m.terms, images)) for m in J.eqs.mu]
    new = []
    for k in range(n):
        acc = Form(n)
        for i in range(n):
            if Minv[k][i]:
                acc = acc + old[i] * Minv[k][i]
        new.append(acc)
    return ComplexStructure(StructureEquations(n, tuple(new)))


def _mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]


def _general_coeffs(J: ComplexStructure) -> tuple[Scalar, ...]:
    mu1, mu2, mu3 = J.eqs.mu
    if mu1 or mu2:
        raise InvariantError("expected dw1 = dw2 = 0")
    allowed = {_bit_word(a, b): None for a, b in (("12", ""), ("1", "1"), ("1", "2"), ("2", "1"), ("2", "2"))}
    if set(mu3.terms) - set(allowed):
        raise InvariantError("dw3 is not of the form rho w12 + A w11b + B w12b + C w21b + D w22b")
    get = mu3.coefficient
    return (get(_bit_word("12")), get(_bit_word("1", "1")), get(_bit_word("1", "2")),
            get(_bit_word("2", "1")), get(_bit_word("2", "2")))


def normalize_two_step(c: NilpotentCoeffs) -> tuple[TwoStepCoeffs, list[list[Scalar]]]:
    """Reduce an epsilon = 0 structure to two-step form.

    Returns the reduced coefficients and the accumulated matrix ``M`` with
    ``w = M w'``.  Complex parallelizable inputs (A = B = C = D = 0) have no
    such form and raise.
    """
    if c.epsilon != 0:
        raise InvariantError("two-step reduction needs epsilon = 0")
    if not (c.A or c.B or c.C or c.D):
        raise InvariantError("complex parallelizable structure has no two-step reduced form")
    J = build_nilpotent(c)
    total = [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]

    def step(J, M, inverse=False):
        nonlocal total
        M = _matrix(M)
        if inverse:
            M = linalg.inverse(M, one=ONE, zero=ZERO)
        total = _mat_mul(total, M)
        return apply_basis_change(J, M)

    for _ in range(4):
        rho, A, B, C, D = _general_coeffs(J)
        if A == ONE and not C:
            out = read_two_step(J)
            if out is not None:
                return out, total
        if A:
            J = step(J, [[1, -C, 0], [0, A, 0], [0, 0, A]])
        elif D:
            J = step(J, [[0, 1, 0], [1, 0, 0], [0, 0, -1]])
        elif B + C:
            J = step(J, [[1, 1, 0], [1, -1, 0], [0, 0, -2]])
        else:
            J = step(J, [[1, 1, 0], [1, -1, 0], [0, 0, -2]])
            J = step(J, [[1, I, 0], [I, 1, 0], [0, 0, 2]], inverse=True)
    raise InvariantError("two-step reduction did not converge")  # pragma: no cover


def normalize_unit_B(c: TwoStepCoeffs) -> tuple[TwoStepCoeffs, list[list[Scalar]]]:
    """For |B| = 1 rescale the coframe so that B becomes 1; returns (coeffs, M) with ``w' = M w``."""
    if c.abs2_B() != ONE:
        raise InvariantError("needs |B| = 1")
    lam = I if c.B == -1 else ONE + c.B
    M = [[lam, ZERO, ZERO], [ZERO, lam.conjugate(), ZERO], [ZERO, ZERO, lam.abs2()]]
    J = apply_basis_change(build_two_step(c), M, inverse=True)
    out = read_two_step(J)
    if out is None:  # pragma: no cover
        raise InvariantError("rescaling left the two-step form")
    return out, M
