import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilherm.complex_structures import (ComplexStructure, NilpotentCoeffs, NonNilpotentCoeffs,
                                        TwoStepCoeffs, build_nilpotent, build_nonnilpotent,
                                        build_two_step)
from nilherm.forms import Form, StructureEquations, conjugate, d_mu, omega, omegabar, word
from nilherm.hermitian import (HermitianMetric, HermitianMetric4, LeeForm, PositivityError,
                               balanced_condition_nonnilpotent, balanced_condition_two_step,
                               balanced_feasible, bismut_torsion, connection_for, del_omega,
                               delbar_del_omega, fundamental_form, hodge_star, hopf_condition,
                               hopf_lee_form, hopf_metric, is_balanced, is_kahler, is_parallel,
                               is_skt, kodaira_thurston_check, kodaira_thurston_structure,
                               lee_form, lee_form_trace, random_metric, real_metric_matrix,
                               skt_condition, solve_lck)
from nilherm.scalar import I, ONE, ZERO, Q, Scalar

from conftest import scalars

small = scalars(2, 2)
UNIT = [Scalar(1), Scalar(-1), I, Scalar(0, -1), Scalar(Q(3, 5), Q(4, 5)), Scalar(Q(-5, 13), Q(12, 13))]
metrics = st.randoms(use_true_random=False).map(random_metric)
H3_PLUS = build_two_step(TwoStepCoeffs(0, 0, 1))


# -- closed forms transcribed independently -------------------------------------

def closed_form_nonnilpotent(A, E, b, g):
    r, s, t, u, v, z = g.r, g.s, g.t, g.u, g.v, g.z
    Ab, ub = A.conjugate(), u.conjugate()
    return (-word(3, "12", "1") * (Ab * v + I * b * z)
            - word(3, "12", "2") * (I * b * E * v)
            - word(3, "13", "1") * (I * Ab * t - u + E * ub)
            + word(3, "13", "2") * ((I * s + b * t) * E)
            + word(3, "13", "3") * (E * v)
            + word(3, "23", "1") * (I * s - b * t))


def closed_form_nilpotent(eps, rho, A, B, C, D, g):
    r, s, t, u, v, z = g.r, g.s, g.t, g.u, g.v, g.z
    e1 = 1 - eps
    Ab, Bb, Cb, Db = A.conjugate(), B.conjugate(), C.conjugate(), D.conjugate()
    return (-word(3, "12", "1") * (I * s * eps + rho * z.conjugate() + e1 * Ab * v - Bb * z)
            - word(3, "12", "2") * (rho * v.conjugate() + Cb * v - e1 * Db * z)
            + word(3, "12", "3") * (I * rho * t)
            + word(3, "13", "1") * (eps * v.conjugate() - I * e1 * Ab * t)
            - word(3, "13", "2") * (I * Cb * t)
            - word(3, "23", "1") * (I * Bb * t)
            - word(3, "23", "2") * (I * e1 * Db * t))


def wedge_nilpotent(eps, A, B, C, D, g):
    r, s, t, u, v, z = g.r, g.s, g.t, g.u, g.v, g.z
    e1 = 1 - eps
    c = (e1 * A.conjugate() * (s * t - v.abs2()) + B.conjugate() * (I * t * u + v.conjugate() * z)
         - C.conjugate() * (I * t * u.conjugate() - v * z.conjugate()) + e1 * D.conjugate() * (r * t - z.abs2()))
    return word(3, "123", "12") * c - word(3, "123", "13") * (eps * (s * t - v.abs2()))


def wedge_nonnilpotent(A, E, b, g):
    r, s, t, u, v, z = g.r, g.s, g.t, g.u, g.v, g.z
    c = (A.conjugate() * (s * t - v.abs2()) + b * (t * u - I * v.conjugate() * z)
         + b * E * (t * u.conjugate() + I * v * z.conjugate()))
    return word(3, "123", "12") * c + word(3, "123", "13") * (u * v - I * s * z)


# -- metric records ----------------------------------------------------------------

def test_positivity():
    assert HermitianMetric.canonical().is_positive()
    assert not HermitianMetric(1, 1, 1, u=1).is_positive()
    assert not HermitianMetric(1, -1, 1).is_positive()
    with pytest.raises(PositivityError):
        del_omega(H3_PLUS, HermitianMetric(1, 1, 1, u=2))
    with pytest.raises(PositivityError):
        kodaira_thurston_check(HermitianMetric4(1, 1, 1))


def test_fundamental_form_is_real_and_matches_display():
    g = HermitianMetric(2, 3, 1, Scalar(1, 1), Scalar(0, Q(1, 2)), Scalar(Q(1, 3)))
    om = fundamental_form(g)
    assert conjugate(om) == om
    r, s, t, u, v, z = g.r, g.s, g.t, g.u, g.v, g.z
    expected = (word(3, "1", "1") * (I * r) + word(3, "2", "2") * (I * s) + word(3, "3", "3") * (I * t)
                + word(3, "1", "2") * u - word(3, "2", "1") * u.conjugate()
                + word(3, "2", "3") * v - word(3, "3", "2") * v.conjugate()
                + word(3, "1", "3") * z - word(3, "3", "1") * z.conjugate())
    assert om == expected


@given(metrics)
def test_real_metric_is_symmetric_and_positive(g):
    G = real_metric_matrix(H3_PLUS, g)
    assert all(G[a][b] == G[b][a] for a in range(6) for b in range(6))
    assert all(G[a][a] > 0 for a in range(6))


# -- del Omega ---------------------------------------------------------------------

@given(small, st.sampled_from(UNIT), st.sampled_from([Q(1), Q(-2), Q(1, 2)]), metrics)
def test_closed_form_nonnilpotent(A, E, b, g):
    J = build_nonnilpotent(NonNilpotentCoeffs(A, E, b))
    assert del_omega(J, g) == closed_form_nonnilpotent(A, E, b, g)
    assert delbar_del_omega(J, g) == (word(3, "12", "12") * (b * b * g.t) + word(3, "13", "13") * g.s) * (2 * I)
    assert not is_skt(J, g)


@given(st.integers(0, 1), st.integers(0, 1), small, small, small, small, metrics)
def test_closed_form_nilpotent(eps, rho, A, B, C, D, g):
    J = build_nilpotent(NilpotentCoeffs(eps, rho, A, B, C, D))
    assert del_omega(J, g) == closed_form_nilpotent(eps, rho, A, B, C, D, g)
    e1 = 1 - eps
    ddbar = (rho * rho + B.abs2() + C.abs2()
             - (A * D.conjugate() + A.conjugate() * D) * (e1 * e1))
    assert delbar_del_omega(J, g) == word(3, "12", "12") * (I * g.t * ddbar)


def test_abelian_del_omega_vanishes():
    J = ComplexStructure(StructureEquations(3, (Form(3),) * 3))
    g = HermitianMetric(2, 1, 3, Scalar(0, Q(1, 2)))
    assert not del_omega(J, g)
    assert is_kahler(J, g) and not is_skt(J, g)
    assert not bismut_torsion(J, g)


# -- SKT ---------------------------------------------------------------------------

@pytest.mark.parametrize("coeffs, expected", [
    (TwoStepCoeffs(1, 0, Q(1, 2)), True),
    (TwoStepCoeffs(0), True),
    (TwoStepCoeffs(1, 1), False),
    (TwoStepCoeffs(0, 0, 1), False),
])
def test_skt_examples(coeffs, expected):
    J = build_two_step(coeffs)
    rng = random.Random(5)
    for g in [HermitianMetric.canonical()] + [random_metric(rng) for _ in range(5)]:
        assert is_skt(J, g) is expected
    assert skt_condition(coeffs) is expected


@settings(max_examples=30)
@given(st.integers(0, 1), small, small, st.lists(metrics, min_size=3, max_size=3))
def test_skt_metric_independent(rho, B, D, gs):
    c = TwoStepCoeffs(rho, B, D)
    J = build_two_step(c)
    assert {is_skt(J, g) for g in gs} == {skt_condition(c)}


def test_bismut_torsion():
    h8 = build_two_step(TwoStepCoeffs(0))
    g = HermitianMetric(1, 2, 1, z=Scalar(0, Q(1, 2)))
    T = bismut_torsion(h8, g)
    assert T and not d_mu(h8.eqs, T)
    h6 = build_two_step(TwoStepCoeffs(1, 1))
    assert d_mu(h6.eqs, bismut_torsion(h6, HermitianMetric.canonical()))


@given(st.integers(0, 1), small, small, metrics)
def test_bismut_torsion_characterizes_skt(rho, B, D, g):
    J = build_two_step(TwoStepCoeffs(rho, B, D))
    T = bismut_torsion(J, g)
    assert (bool(T) and not d_mu(J.eqs, T)) == is_skt(J, g)
    assert conjugate(T) == T


# -- balanced ----------------------------------------------------------------------

def _h19_witness(A, b):
    E = A.conjugate() / A
    u = -A.conjugate() / (2 * b)
    return NonNilpotentCoeffs(A, E, b), HermitianMetric(1 + u.abs2(), 1, 1, u)


def test_balanced_witnesses():
    J = build_two_step(TwoStepCoeffs(1, 0, -1))
    g = HermitianMetric.canonical()
    assert is_balanced(J, g) and not any(lee_form(J, g).lambdas)
    for A, b in [(Scalar(1), Q(1)), (Scalar(1, 2), Q(-3)), (I, Q(1, 2))]:
        c, g = _h19_witness(A, b)
        J = build_nonnilpotent(c)
        assert is_balanced(J, g)
        assert balanced_condition_nonnilpotent(c, g)
        assert not any(lee_form(J, g).lambdas)


@given(metrics)
def test_h3_plus_never_balanced(g):
    assert not is_balanced(H3_PLUS, g)


def test_balanced_feasibility_for_b_zero():
    assert balanced_feasible(TwoStepCoeffs(0, 0, 1)) == (False, None)
    assert balanced_feasible(TwoStepCoeffs(1, 0, I))[0] is False
    ok, g = balanced_feasible(TwoStepCoeffs(1, 0, Q(-3)))
    assert ok and is_balanced(build_two_step(TwoStepCoeffs(1, 0, Q(-3))), g)


@given(st.integers(0, 1), small, small, metrics)
def test_balanced_equivalences_two_step(rho, B, D, g):
    c = TwoStepCoeffs(rho, B, D)
    J = build_two_step(c)
    om = fundamental_form(g)
    assert (del_omega(J, g) ^ om) == wedge_nilpotent(0, ONE, B, ZERO, D, g)
    flags = {is_balanced(J, g), balanced_condition_two_step(c, g), not any(lee_form(J, g).lambdas),
             not d_mu(J.eqs, om ^ om)}
    assert len(flags) == 1


@given(small, st.sampled_from(UNIT), st.sampled_from([Q(1), Q(-1, 2)]), metrics)
def test_balanced_equivalences_nonnilpotent(A, E, b, g):
    c = NonNilpotentCoeffs(A, E, b)
    J = build_nonnilpotent(c)
    om = fundamental_form(g)
    assert (del_omega(J, g) ^ om) == wedge_nonnilpotent(A, E, b, g)
    flags = {is_balanced(J, g), balanced_condition_nonnilpotent(c, g),
             not any(lee_form(J, g).lambdas), not d_mu(J.eqs, om ^ om)}
    assert len(flags) == 1


# -- Hodge star and Lee form ----------------------------------------------------------

def test_star_omega_is_half_omega_squared():
    J = ComplexStructure(StructureEquations(3, (Form(3), Form(3), word(3, "12"))))
    rng = random.Random(11)
    for _ in range(10):
        g = random_metric(rng)
        om = fundamental_form(g)
        assert hodge_star(J, g, om) * 2 == (om ^ om)


@settings(max_examples=15)
@given(st.integers(0, 1), small, small, metrics, st.integers(0, 6))
def test_star_star_sign(rho, B, D, g, k):
    J = build_two_step(TwoStepCoeffs(rho, B, D))
    a = Form(3, {w: ONE for w in range(64) if bin(w).count("1") == k and w % 7 == 1})
    assert hodge_star(J, g, hodge_star(J, g, a)) == a * (-1) ** k


@settings(max_examples=20)
@given(st.integers(0, 1), small, small, metrics)
def test_lee_form_routes_agree(rho, B, D, g):
    J = build_two_step(TwoStepCoeffs(rho, B, D))
    assert lee_form(J, g).theta == lee_form_trace(J, g).theta


def test_h3_plus_canonical_lee_form():
    g = HermitianMetric.canonical()
    res = solve_lck(H3_PLUS, g)
    expected = omega(3, 3) + omegabar(3, 3)
    assert res is not None and not res.kahler
    assert res.lee.theta == expected
    assert lee_form(H3_PLUS, g).theta == expected
    assert hopf_lee_form(g).theta == expected


@pytest.mark.parametrize("r, t, v, z", [
    (1, 1, 0, 0), (2, 1, Scalar(0, 1), Scalar(Q(1, 2))), (3, 2, Scalar(1, 1), Scalar(0, -1)),
    (1, Q(1, 2), Scalar(Q(1, 3)), Scalar(Q(1, 4), Q(1, 4))),
])
def test_hopf_metrics_are_lck_and_parallel(r, t, v, z):
    g = hopf_metric(r, t, v, z)
    assert g.is_positive() and hopf_condition(g)
    res = solve_lck(H3_PLUS, g)
    assert res is not None and res.lee.theta == hopf_lee_form(g).theta
    assert d_mu(H3_PLUS.eqs, fundamental_form(g)) == (res.lee.theta ^ fundamental_form(g))
    assert is_parallel(connection_for(H3_PLUS, g), res.lee)


@given(metrics)
def test_non_hopf_metrics_are_not_lck(g):
    assert (solve_lck(H3_PLUS, g) is not None) == hopf_condition(g)


@given(small, st.sampled_from(UNIT), st.sampled_from([Q(1), Q(2)]), metrics)
def test_nonnilpotent_never_lck(A, E, b, g):
    assert solve_lck(build_nonnilpotent(NonNilpotentCoeffs(A, E, b)), g) is None


def test_parallel_examples():
    flat = ComplexStructure(StructureEquations(3, (Form(3),) * 3))
    g = HermitianMetric(2, 1, 1, Scalar(Q(1, 2)))
    res = solve_lck(flat, g)
    assert res.kahler and is_parallel(connection_for(flat, g), res.lee)
    theta = LeeForm.from_form((omega(3, 1) + omegabar(3, 1)) * Scalar(Q(1, 2)))
    assert not is_parallel(connection_for(H3_PLUS, HermitianMetric(1, 2, 1, Scalar(Q(1, 2)))), theta)


@given(metrics)
def test_levi_civita_metric_and_torsion_free(g):
    J = build_two_step(TwoStepCoeffs(1, Scalar(1, 1), Scalar(Q(1, 2))))
    conn = connection_for(J, g)
    G = conn.metric
    alg = J.algebra
    for i in range(6):
        for j in range(6):
            diff = [a - b for a, b in zip(conn.gamma[i][j], conn.gamma[j][i])]
            assert diff == alg.bracket_vector(i + 1, j + 1)
            for k in range(6):
                gik = sum((G[k][m] * conn.gamma[i][j][m] for m in range(6)), ZERO)
                gjk = sum((G[j][m] * conn.gamma[i][k][m] for m in range(6)), ZERO)
                assert gik + gjk == ZERO


# -- four-dimensional check -----------------------------------------------------------

def test_kodaira_thurston_examples():
    res = kodaira_thurston_check(HermitianMetric4(1, 1))
    assert res.skt and res.lck
    assert res.theta.theta == omega(2, 2) + omegabar(2, 2)
    g = HermitianMetric4(1, 2, I)
    res = kodaira_thurston_check(g)
    assert res.skt and res.lck
    J = kodaira_thurston_structure()
    s, u = g.s, g.u
    f = s * 2 / (u.abs2() - g.r * s)
    a = omega(2, 1) * (I * u)
    half = Scalar(Q(1, 2))
    expected = ((a + conjugate(a)) * half - (omega(2, 2) + omegabar(2, 2)) * (s * half)) * f
    assert res.theta.theta == expected
    assert not d_mu(J.eqs, expected)
    om = fundamental_form(g)
    assert d_mu(J.eqs, om) == (expected ^ om)
