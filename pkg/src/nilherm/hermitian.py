"""Invariant Hermitian metrics and their SKT, balanced and LCK conditions.

A metric compatible with a (1,0)-coframe is stored as the Hermitian matrix
``h`` with fundamental form ``Omega = i sum h_jk w^j ^ wbar^k``.  For the
six-dimensional record (r, s, t, u, v, z)::

    h = [[r, -i u, -i z], [i conj(u), s, -i v], [i conj(z), i conj(v), t]]

The real metric is ``g(X, Y) = Omega(X, J Y)`` on the real basis, so
``g(X_1, X_1) = 2 r``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from math import comb

from . import linalg
from .complex_structures import ComplexStructure, NilpotentCoeffs, NonNilpotentCoeffs, TwoStepCoeffs
from .forms import (Form, conjugate, d_mu, from_real_terms, omega, omegabar, project_bidegree,
                    to_real_terms, word)
from .kernels import merge_sign
from .lie import LieAlgebra
from .scalar import I, ONE, ZERO, Q, Scalar, as_scalar

__all__ = [
    "PositivityError", "HermitianMetric", "HermitianMetric4", "LeeForm", "Connection",
    "fundamental_form", "del_omega", "delbar_del_omega", "is_skt", "is_pluriclosed",
    "is_balanced", "is_kahler", "hodge_star", "codifferential", "lee_form", "lee_form_trace",
    "solve_lck", "levi_civita", "is_parallel", "bismut_torsion", "kodaira_thurston_check",
    "del_omega_nonnilpotent_formula", "del_omega_nilpotent_formula", "skt_condition",
    "balanced_condition_nonnilpotent", "balanced_condition_two_step", "balanced_feasible",
    "hopf_condition", "hopf_lee_form", "hopf_metric", "random_metric", "real_metric_matrix",
    "connection_for", "LCKResult", "KTResult", "kodaira_thurston_structure",
    "kodaira_thurston_lee_formula",
]


class PositivityError(ValueError):
    pass


# -- metrics ------------------------------------------------------------------------

class _MetricBase:
    n: int

    def h_matrix(self) -> list[list[Scalar]]:
        raise NotImplementedError

    def positivity_violations(self) -> list[str]:
        raise NotImplementedError

    def is_positive(self) -> bool:
        return not self.positivity_violations()

    def require_positive(self) -> None:
        bad = self.positivity_violations()
        if bad:
            raise PositivityError("metric is not positive definite: " + "; ".join(bad))

    def det_h(self) -> Scalar:
        return linalg.det(self.h_matrix(), one=ONE).real

    @property
    def is_exact(self) -> bool:
        return all(v.is_exact for row in self.h_matrix() for v in row)


def _real(name: str, v) -> Scalar:
    v = as_scalar(v)
    if not v.is_real():
        raise ValueError(f"{name} must be real, got {v}")
    return v.real


@dataclass(frozen=True)
class HermitianMetric(_MetricBase):
    r: Scalar
    s: Scalar
    t: Scalar
    u: Scalar = ZERO
    v: Scalar = ZERO
    z: Scalar = ZERO

    n = 3

    def __post_init__(self):
        for name in ("r", "s", "t"):
            object.__setattr__(self, name, _real(name, getattr(self, name)))
        for name in ("u", "v", "z"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))

    @classmethod
    def canonical(cls) -> "HermitianMetric":
        return cls(1, 1, 1)

    def h_matrix(self) -> list[list[Scalar]]:
        r, s, t, u, v, z = self.r, self.s, self.t, self.u, self.v, self.z
        return [[r, -I * u, -I * z],
                [I * u.conjugate(), s, -I * v],
                [I * z.conjugate(), I * v.conjugate(), t]]

    def positivity_violations(self) -> list[str]:
        r, s, t, u, v, z = self.r, self.s, self.t, self.u, self.v, self.z
        bad = []
        for name, ok in (("r > 0", r > 0), ("s > 0", s > 0), ("t > 0", t > 0),
                         ("rs > |u|^2", r * s > u.abs2()), ("st > |v|^2", s * t > v.abs2()),
                         ("rt > |z|^2", r * t > z.abs2())):
            if not ok:
                bad.append(name)
        lhs = r * s * t + (I * u.conjugate() * v.conjugate() * z).real * 2
        rhs = t * u.abs2() + r * v.abs2() + s * z.abs2()
        if not lhs > rhs:
            bad.append("rst + 2Re(i conj(u) conj(v) z) > t|u|^2 + r|v|^2 + s|z|^2")
        return bad

    def fields(self) -> dict[str, Scalar]:
        return {k: getattr(self, k) for k in ("r", "s", "t", "u", "v", "z")}


@dataclass(frozen=True)
class HermitianMetric4(_MetricBase):
    """Metric on a four-dimensional algebra with (1,0)-coframe w^1, w^2."""

    r: Scalar
    s: Scalar
    u: Scalar = ZERO

    n = 2

    def __post_init__(self):
        object.__setattr__(self, "r", _real("r", self.r))
        object.__setattr__(self, "s", _real("s", self.s))
        object.__setattr__(self, "u", as_scalar(self.u))

    def h_matrix(self) -> list[list[Scalar]]:
        return [[self.r, -I * self.u], [I * self.u.conjugate(), self.s]]

    def positivity_violations(self) -> list[str]:
        bad = []
        if not self.r > 0:
            bad.append("r > 0")
        if not self.s > 0:
            bad.append("s > 0")
        if not self.r * self.s > self.u.abs2():
            bad.append("rs > |u|^2")
        return bad


def random_metric(rng: random.Random, max_num: int = 3, den: int = 4,
                  tries: int = 1000) -> HermitianMetric:
    """Seeded random exact positive metric (rejection sampling)."""
    def rat(lo, hi):
        return Q(rng.randint(lo * den, hi * den), den)

    for _ in range(tries):
        g = HermitianMetric(rat(1, max_num), rat(1, max_num), rat(1, max_num),
                            Scalar(rat(-1, 1), rat(-1, 1)), Scalar(rat(-1, 1), rat(-1, 1)),
                            Scalar(rat(-1, 1), rat(-1, 1)))
        if g.is_positive():
            return g
    raise RuntimeError("no positive metric sampled")  # pragma: no cover


# -- fundamental form and its derivatives -----------------------------------------------

def _check(J: ComplexStructure, g: _MetricBase) -> None:
    if J.n != g.n:
        raise ValueError(f"metric has dimension {g.n}, structure has {J.n}")
    g.require_positive()


def fundamental_form(g: _MetricBase) -> Form:
    n = g.n
    h = g.h_matrix()
    out = Form(n)
    for j in range(n):
        for k in range(n):
            if h[j][k]:
                out = out + (omega(n, j + 1) ^ omegabar(n, k + 1)) * (I * h[j][k])
    return out


def _domega(J: ComplexStructure, g: _MetricBase) -> Form:
    return d_mu(J.eqs, fundamental_form(g))


def del_omega(J: ComplexStructure, g: _MetricBase) -> Form:
    _check(J, g)
    return project_bidegree(_domega(J, g), 2, 1)


def delbar_del_omega(J: ComplexStructure, g: _MetricBase) -> Form:
    return project_bidegree(d_mu(J.eqs, del_omega(J, g)), 2, 2)


def is_pluriclosed(J: ComplexStructure, g: _MetricBase) -> bool:
    return not delbar_del_omega(J, g)


def is_skt(J: ComplexStructure, g: _MetricBase) -> bool:
    dd = del_omega(J, g)
    return bool(dd) and not project_bidegree(d_mu(J.eqs, dd), 2, 2)


def is_kahler(J: ComplexStructure, g: _MetricBase) -> bool:
    _check(J, g)
    return not _domega(J, g)


def is_balanced(J: ComplexStructure, g: _MetricBase) -> bool:
    omega_form = fundamental_form(g)
    acc = del_omega(J, g)
    for _ in range(g.n - 2):
        acc = acc ^ omega_form
    return not acc


def bismut_torsion(J: ComplexStructure, g: _MetricBase) -> Form:
    """J d Omega with J acting on every argument: a (p,q) word gains i^(p-q)."""
    _check(J, g)
    out = {}
    n = J.n
    lo = (1 << n) - 1
    for w, c in _domega(J, g).terms.items():
        p = bin(w & lo).count("1")
        q = bin(w >> n).count("1")
        out[w] = c * (I ** ((p - q) % 4))
    return Form(n, out)


# -- real metric, Hodge star, codifferential ---------------------------------------------

def _omega_matrix(form: Form) -> list[list[Scalar]]:
    dim = 2 * form.n
    m = [[ZERO] * dim for _ in range(dim)]
    for w, c in to_real_terms(form).items():
        a, b = [i for i in range(dim) if w >> i & 1]
        m[a][b] = c
        m[b][a] = -c
    return m


def real_metric_matrix(J: ComplexStructure, g: _MetricBase) -> list[list[Scalar]]:
    """G[a][b] = g(X_{a+1}, X_{b+1}) = Omega(X_a, J X_b)."""
    om = _omega_matrix(fundamental_form(g))
    Jm = J.J_matrix()
    dim = len(om)
    return [[sum((om[a][c] * Jm[c][b] for c in range(dim) if Jm[c][b]), ZERO).real
             for b in range(dim)] for a in range(dim)]


class _Hodge:
    def __init__(self, G: list[list[Scalar]], sqrt_det: Scalar):
        self.dim = len(G)
        self.Ginv = linalg.inverse(G, one=ONE, zero=ZERO)
        self.sqrt_det = sqrt_det
        self._gram: dict = {}

    def gram(self, a: int, b: int) -> Scalar:
        key = (a, b)
        val = self._gram.get(key)
        if val is None:
            ia = [i for i in range(self.dim) if a >> i & 1]
            ib = [i for i in range(self.dim) if b >> i & 1]
            val = linalg.det([[self.Ginv[i][j] for j in ib] for i in ia], one=ONE) if ia else ONE
            self._gram[key] = val
        return val

    def star_terms(self, terms: dict) -> dict:
        full = (1 << self.dim) - 1
        out: dict = {}
        for w, c in terms.items():
            k = bin(w).count("1")
            for v in _words_of_degree(self.dim, k):
                gv = self.gram(w, v)
                if not gv:
                    continue
                comp = full ^ v
                coef = c * gv * self.sqrt_det * merge_sign(v, comp)
                out[comp] = out.get(comp, ZERO) + coef
        return {w: c for w, c in out.items() if c}


_WORDS: dict = {}


def _words_of_degree(dim: int, k: int) -> list[int]:
    key = (dim, k)
    if key not in _WORDS:
        from itertools import combinations
        _WORDS[key] = [sum(1 << i for i in c) for c in combinations(range(dim), k)]
    return _WORDS[key]


def _hodge(J: ComplexStructure, g: _MetricBase) -> _Hodge:
    G = real_metric_matrix(J, g)
    sqrt_det = g.det_h() * (2 ** g.n)
    if sqrt_det * sqrt_det != linalg.det(G, one=ONE):  # pragma: no cover
        raise ArithmeticError("volume normalization mismatch")
    return _Hodge(G, sqrt_det)


def hodge_star(J: ComplexStructure, g: _MetricBase, a: Form) -> Form:
    """Hodge star of ``a`` (complex-linear), oriented by e^1 ^ ... ^ e^{2n}."""
    _check(J, g)
    hs = _hodge(J, g)
    return from_real_terms(hs.star_terms(to_real_terms(a)), J.n)


def codifferential(J: ComplexStructure, g: _MetricBase, a: Form) -> Form:
    """delta = -* d * (even real dimension)."""
    _check(J, g)
    hs = _hodge(J, g)
    star_a = from_real_terms(hs.star_terms(to_real_terms(a)), J.n)
    d_star = d_mu(J.eqs, star_a)
    return -from_real_terms(hs.star_terms(to_real_terms(d_star)), J.n)


def _J_on_one_form(a: Form) -> Form:
    """(J alpha)(X) = alpha(J X): w^j -> i w^j, wbar^j -> -i wbar^j."""
    n = a.n
    lo = (1 << n) - 1
    return Form(n, {w: c * (I if w & lo else -I) for w, c in a.terms.items()})


@dataclass(frozen=True)
class LeeForm:
    theta: Form
    lambdas: tuple[Scalar, ...]

    @classmethod
    def from_form(cls, theta: Form) -> "LeeForm":
        n = theta.n
        return cls(theta, tuple(theta.coefficient(1 << j) for j in range(n)))

    @classmethod
    def from_lambdas(cls, lambdas, n: int) -> "LeeForm":
        lambdas = tuple(as_scalar(x) for x in lambdas)
        theta = Form(n)
        for j, lam in enumerate(lambdas, 1):
            theta = theta + omega(n, j) * lam + omegabar(n, j) * lam.conjugate()
        return cls(theta, lambdas)

    def real_coefficients(self) -> list[Scalar]:
        """theta = sum_k c_k e^k on the real dual basis."""
        terms = to_real_terms(self.theta)
        return [terms.get(1 << k, ZERO).real for k in range(2 * self.theta.n)]


def lee_form(J: ComplexStructure, g: _MetricBase) -> LeeForm:
    """theta = (1/(1-n)) J delta Omega."""
    delta = codifferential(J, g, fundamental_form(g))
    theta = _J_on_one_form(delta) * Scalar(Q(1, 1 - J.n))
    return LeeForm.from_form(theta)


def lee_form_trace(J: ComplexStructure, g: _MetricBase) -> LeeForm:
    """Solve d(Omega^{n-1}) = (n-1) theta ^ Omega^{n-1} for the real 1-form theta."""
    _check(J, g)
    n = J.n
    om = fundamental_form(g)
    power = Form.scalar(n, 1)
    for _ in range(n - 1):
        power = power ^ om
    target = d_mu(J.eqs, power) * Scalar(Q(1, n - 1))
    basis = [omega(n, j) for j in range(1, n + 1)] + [omegabar(n, j) for j in range(1, n + 1)]
    cols = [(b ^ power).terms for b in basis]
    words = sorted(set(target.terms).union(*cols))
    A = [[c.get(w, ZERO) for c in cols] for w in words]
    rhs = [target.coefficient(w) for w in words]
    sol = linalg.solve(A, rhs, zero=ZERO)
    if sol is None:  # pragma: no cover
        raise ArithmeticError("wedge with Omega^{n-1} failed to be onto")
    theta = Form(n, {b_word: x for b_word, x in zip([1 << j for j in range(2 * n)], sol)})
    return LeeForm.from_form(theta)


# -- LCK -------------------------------------------------------------------------------

@dataclass(frozen=True)
class LCKResult:
    lee: LeeForm
    kahler: bool


def _is_approx(J: ComplexStructure, g: _MetricBase) -> bool:
    return not g.is_exact or any(not c.is_exact for m in J.eqs.mu for c in m.terms.values())


def solve_lck(J: ComplexStructure, g: _MetricBase) -> LCKResult | None:
    """The Lee form with d Omega = theta ^ Omega and d theta = 0, or None."""
    _check(J, g)
    n = J.n
    om = fundamental_form(g)
    d_om = d_mu(J.eqs, om)
    if not d_om:
        return LCKResult(LeeForm.from_lambdas([ZERO] * n, n), True)
    target = project_bidegree(d_om, 2, 1)
    cols = [(omega(n, j) ^ om).terms for j in range(1, n + 1)]
    words = sorted(set(target.terms).union(*cols))
    A = [[c.get(w, ZERO) for c in cols] for w in words]
    rhs = [target.coefficient(w) for w in words]
    if _is_approx(J, g):
        sol = _lstsq(A, rhs, max(_eps(J, g), 1e-12))
    else:
        sol = linalg.solve(A, rhs, zero=ZERO)
    if sol is None:
        return None
    lee = LeeForm.from_lambdas(sol, n)
    if d_om != (lee.theta ^ om) or d_mu(J.eqs, lee.theta):
        return None
    return LCKResult(lee, False)


def _eps(J: ComplexStructure, g: _MetricBase) -> float:
    vals = [c.eps for m in J.eqs.mu for c in m.terms.values() if c.eps is not None]
    vals += [v.eps for row in g.h_matrix() for v in row if v.eps is not None]
    return max(vals) if vals else 0.0


def _lstsq(A, rhs, eps: float):
    import numpy as np

    a = np.array([[complex(x) for x in row] for row in A])
    b = np.array([complex(x) for x in rhs])
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.max(np.abs(a @ sol - b), initial=0.0) > eps:
        return None
    return [Scalar(complex(x).real, complex(x).imag, eps) for x in sol]


# -- Levi-Civita connection --------------------------------------------------------------

@dataclass(frozen=True)
class Connection:
    """``gamma[i][j][k]``: coefficient of X_{k+1} in nabla_{X_{i+1}} X_{j+1}."""

    gamma: list
    metric: list

    def covariant(self, i: int, j: int) -> list[Scalar]:
        return self.gamma[i][j]


def levi_civita(g_matrix: list[list[Scalar]], algebra: LieAlgebra) -> Connection:
    """Koszul formula for a left-invariant metric given by its real Gram matrix."""
    dim = algebra.dim
    G = [[as_scalar(x) for x in row] for row in g_matrix]
    Ginv = linalg.inverse(G, one=ONE, zero=ZERO)
    br = [[algebra.bracket_vector(i + 1, j + 1) for j in range(dim)] for i in range(dim)]

    def gv(vec, k):
        return sum((vec[a] * G[a][k] for a in range(dim) if vec[a]), ZERO)

    half = Scalar(Q(1, 2))
    gamma = []
    for i in range(dim):
        row = []
        for j in range(dim):
            low = [(gv(br[i][j], k) - gv(br[j][k], i) + gv(br[k][i], j)) * half for k in range(dim)]
            row.append([sum((Ginv[m][k] * low[k] for k in range(dim) if low[k]), ZERO)
                        for m in range(dim)])
        gamma.append(row)
    return Connection(gamma, G)


def connection_for(J: ComplexStructure, g: _MetricBase) -> Connection:
    _check(J, g)
    return levi_civita(real_metric_matrix(J, g), J.algebra)


def is_parallel(conn: Connection, theta: LeeForm | list) -> bool:
    """nabla theta = 0, i.e. theta(nabla_{X_i} X_j) = 0 for all i, j."""
    coeffs = theta.real_coefficients() if isinstance(theta, LeeForm) else list(theta)
    for row in conn.gamma:
        for vec in row:
            if sum((c * x for c, x in zip(coeffs, vec) if c and x), ZERO):
                return False
    return True


# -- closed-form oracles and coefficient conditions ------------------------------------------

def del_omega_nonnilpotent_formula(c: NonNilpotentCoeffs, g: HermitianMetric) -> Form:
    A, E, b = c.A, c.E, c.b
    r, s, t, u, v, z = g.r, g.s, g.t, g.u, g.v, g.z
    Ab, ub = A.conjugate(), u.conjugate()
    return (
        -word(3, "12", "1") * (Ab * v + I * b * z)
        - word(3, "12", "2") * (I * b * E * v)
        - word(3, "13", "1") * (I * Ab * t - u + E * ub)
        + word(3, "13", "2") * ((I * s + b * t) * E)
        + word(3, "13", "3") * (E * v)
        + word(3, "23", "1") * (I * s - b * t)
    )


def del_omega_nilpotent_formula(c: NilpotentCoeffs, g: HermitianMetric) -> Form:
    e, rho = c.epsilon, c.rho
    e1 = 1 - e
    Ab, Bb, Cb, Db = c.A.conjugate(), c.B.conjugate(), c.C.conjugate(), c.D.conjugate()
    r, s, t, u, v, z = g.r, g.s, g.t, g.u, g.v, g.z
    return (
        -word(3, "12", "1") * (I * s * e + z.conjugate() * rho + Ab * v * e1 - Bb * z)
        - word(3, "12", "2") * (v.conjugate() * rho + Cb * v - Db * z * e1)
        + word(3, "12", "3") * (I * t * rho)
        + word(3, "13", "1") * (v.conjugate() * e - I * Ab * t * e1)
        - word(3, "13", "2") * (I * Cb * t)
        - word(3, "23", "1") * (I * Bb * t)
        - word(3, "23", "2") * (I * Db * t * e1)
    )


def skt_condition(c: TwoStepCoeffs) -> bool:
    """rho + |B|^2 = 2 Re D."""
    return as_scalar(c.rho) + c.abs2_B() == c.x * 2


def balanced_condition_nonnilpotent(c: NonNilpotentCoeffs, g: HermitianMetric) -> bool:
    z_ok = g.z * g.s == -I * g.u * g.v
    lin = c.A * g.s + c.b * c.E.conjugate() * g.u + c.b * g.u.conjugate()
    return z_ok and not lin


def balanced_condition_two_step(c: TwoStepCoeffs, g: HermitianMetric) -> bool:
    r, s, t, u, v, z = g.r, g.s, g.t, g.u, g.v, g.z
    lhs = s * t - v.abs2() + c.D * (r * t - z.abs2())
    rhs = c.B * (I * t * u.conjugate() - v * z.conjugate())
    return lhs == rhs


def balanced_feasible(c: TwoStepCoeffs) -> tuple[bool | None, HermitianMetric | None]:
    """Whether some positive metric is balanced for the two-step structure ``c``.

    Decided exactly for B = 0 (feasible iff Im D = 0 and Re D < 0).  For
    B != 0 a witness is searched in the family v = z = 0, t = r = 1; failing
    that the answer is None (undecided).
    """
    x = c.x
    if not c.abs2_B():
        if c.y_squared() or not x < 0:
            return False, None
        return True, HermitianMetric(1, -x, 1)
    B, D = c.B, c.D
    s = (c.abs2_B() - x * 2) * Scalar(Q(1, 2))
    if s > 0:
        u = I * (s + D.conjugate()) / B.conjugate()
        g = HermitianMetric(1, s, 1, u)
        if g.is_positive() and balanced_condition_two_step(c, g):
            return True, g
    return None, None


def hopf_condition(g: HermitianMetric) -> bool:
    """u = i conj(v) z / t and |v|^2 - st = |z|^2 - rt."""
    return (g.u * g.t == I * g.v.conjugate() * g.z
            and g.v.abs2() - g.s * g.t == g.z.abs2() - g.r * g.t)


def hopf_lee_form(g: HermitianMetric) -> LeeForm:
    den = g.z.abs2() - g.r * g.t
    lams = (I * g.t * g.z / den, I * g.t * g.v / den, -(g.t * g.t) / den)
    return LeeForm.from_lambdas(lams, 3)


def hopf_metric(r, t, v, z) -> HermitianMetric:
    """Complete (r, t, v, z) to a metric satisfying ``hopf_condition``."""
    r, t, v, z = as_scalar(r), as_scalar(t), as_scalar(v), as_scalar(z)
    u = I * v.conjugate() * z / t
    s = (v.abs2() - z.abs2() + r * t) / t
    return HermitianMetric(r, s, t, u, v, z)


# -- four-dimensional check -------------------------------------------------------------------

@dataclass(frozen=True)
class KTResult:
    skt: bool
    lck: bool
    theta: LeeForm | None


def kodaira_thurston_structure() -> ComplexStructure:
    from .forms import StructureEquations
    return ComplexStructure(StructureEquations(2, (Form(2), word(2, "1", "1"))))


def kodaira_thurston_lee_formula(g: HermitianMetric4) -> LeeForm:
    """theta = (2s / (|u|^2 - rs)) (Re(i u w^1) - s Re w^2)."""
    n = 2
    f = g.s * 2 / (g.u.abs2() - g.r * g.s)
    half = Scalar(Q(1, 2))
    a = omega(n, 1) * (I * g.u)
    inner = (a + conjugate(a)) * half - (omega(n, 2) + omegabar(n, 2)) * (g.s * half)
    return LeeForm.from_form(inner * f)


def kodaira_thurston_check(g: HermitianMetric4) -> KTResult:
    g.require_positive()
    J = kodaira_thurston_structure()
    lck = solve_lck(J, g)
    return KTResult(is_skt(J, g), lck is not None and not lck.kahler, lck.lee if lck else None)
