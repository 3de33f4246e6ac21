import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nilherm.catalog import TAGS
from nilherm.complex_structures import (ComplexStructure, InvariantError, NilpotentCoeffs,
                                        NonNilpotentCoeffs, TwoStepCoeffs, alpha_from_coeffs,
                                        apply_basis_change, ascending_series_adapted, build_nilpotent,
                                        build_nonnilpotent, build_two_step, classify_algebra_from_coeffs,
                                        classify_J, h3_structure_type, is_integrable, normalize_two_step,
                                        normalize_unit_B, read_two_step)
from nilherm.forms import Form, StructureEquations, jacobi_holds, word
from nilherm.lie import alpha_invariant, center, classify_by_fingerprint, fingerprint
from nilherm.linalg import det
from nilherm.scalar import I, ONE, ZERO, Q, Scalar

from conftest import rationals, scalars

small = scalars(2, 2)


def two_step_coeffs():
    return st.builds(TwoStepCoeffs, st.integers(0, 1), small, small)


def test_integrability_examples():
    assert not is_integrable(StructureEquations(3, (Form(3), word(3, "", "12"), Form(3))))
    J = build_nilpotent(NilpotentCoeffs(1, 1, Scalar(2, 1), I, Scalar(-1), Scalar(Q(1, 3))))
    assert is_integrable(J.eqs)
    assert is_integrable(build_nonnilpotent(NonNilpotentCoeffs(I, Scalar(0, -1), Q(2))).eqs)


def test_J_squares_to_minus_identity():
    J = build_two_step(TwoStepCoeffs(1, 1, 1))
    v = [Scalar(k, -k) for k in range(1, 7)]
    assert J.J(J.J(v)) == [-c for c in v]


def test_ascending_series_examples():
    assert set(ascending_series_adapted(build_nonnilpotent(NonNilpotentCoeffs(1, 1, 1)))) == {0}
    dims = ascending_series_adapted(build_nilpotent(NilpotentCoeffs(1, 1)))
    assert dims[2] == 6 and dims[0] >= 2 and dims[1] >= 4
    abelian = ComplexStructure(StructureEquations(3, (Form(3),) * 3))
    assert ascending_series_adapted(abelian) == [6]


def test_classify_J_examples():
    h2 = build_nilpotent(NilpotentCoeffs(0, 1, B=1, C=1))
    cls = classify_J(h2)
    assert cls.nilpotent and not cls.abelian
    assert classify_by_fingerprint(h2.algebra).tag == "h2"
    iwasawa = ComplexStructure(StructureEquations(3, (Form(3), Form(3), word(3, "12"))))
    cls = classify_J(iwasawa)
    assert (cls.kind, cls.abelian, cls.parallelizable) == ("nilpotent", False, True)
    assert classify_by_fingerprint(iwasawa.algebra).tag == "h5"
    assert classify_J(build_nonnilpotent(NonNilpotentCoeffs(I, 1, 1))).kind == "nonnilpotent"


def test_nonnilpotent_builder_algebras():
    g19 = build_nonnilpotent(NonNilpotentCoeffs(0, 1, 1))
    assert fingerprint(g19.algebra).b1 == 3
    assert classify_by_fingerprint(g19.algebra).tag == "h19minus"
    assert classify_algebra_from_coeffs(NonNilpotentCoeffs(0, 1, 1)).tag == "h19minus"
    g26 = build_nonnilpotent(NonNilpotentCoeffs(I, 1, 1))
    assert classify_by_fingerprint(g26.algebra).tag == "h26plus"
    assert classify_algebra_from_coeffs(NonNilpotentCoeffs(I, 1, 1)).tag == "h26plus"


def test_coefficient_invariants():
    with pytest.raises(InvariantError):
        NonNilpotentCoeffs(1, Scalar(1, 1), 1)
    with pytest.raises(InvariantError):
        NonNilpotentCoeffs(1, 1, 0)
    with pytest.raises(InvariantError):
        NonNilpotentCoeffs(1, 1, I)
    with pytest.raises(InvariantError):
        NilpotentCoeffs(2, 0)
    with pytest.raises(InvariantError):
        TwoStepCoeffs(1, 0, I, y2=Q(2))


@pytest.mark.parametrize("coeffs, tag", [
    (TwoStepCoeffs(0), "h8"),
    (TwoStepCoeffs(0, 0, Q(3)), "h3"),
    (TwoStepCoeffs(0, 0, Q(-1, 2)), "h3"),
    (TwoStepCoeffs(1, Scalar(Q(3, 5), Q(4, 5))), "h6"),
    (TwoStepCoeffs(1, 1), "h6"),
    (TwoStepCoeffs(1, 0, Scalar(Q(1, 2), Q(1, 2))), "h5"),
    (TwoStepCoeffs(1, 0, Scalar(Q(1, 2), 1)), "h2"),
    (TwoStepCoeffs.with_exact_squares(1, Q(1, 2), Q(3, 4)), "h4"),
])
def test_coefficient_classifier_examples(coeffs, tag):
    assert classify_algebra_from_coeffs(coeffs).tag == tag


def test_boundary_is_exact():
    c = TwoStepCoeffs.with_exact_squares(1, Q(1, 2), Q(3, 4))
    assert c.y_squared() == Q(3, 4) and c.y_squared().is_exact
    assert alpha_from_coeffs(c) == 1


def test_h3_structure_types():
    assert h3_structure_type(TwoStepCoeffs(0, 0, 1)) == "J0+"
    assert h3_structure_type(TwoStepCoeffs(0, 0, -1)) == "J0-"
    with pytest.raises(InvariantError):
        h3_structure_type(TwoStepCoeffs(1, 0, 1))


def test_first_reduction_change():
    # w1 = w1' - C w2', w2 = A w2', w3 = A w3'
    A, B, C, D = Scalar(1, 2), Scalar(-1, 1), Scalar(Q(1, 2), -1), Scalar(2, Q(1, 3))
    J = build_nilpotent(NilpotentCoeffs(0, 1, A, B, C, D))
    new = apply_basis_change(J, [[1, -C, 0], [0, A, 0], [0, 0, A]])
    Ab = A.conjugate()
    expected = TwoStepCoeffs(1, (Ab * B - A * C.conjugate()) / A, Ab * (A * D - B * C) / A)
    assert read_two_step(new) == expected


def test_unit_B_normalization():
    for B in (I, Scalar(-1), Scalar(Q(3, 5), Q(-4, 5))):
        c = TwoStepCoeffs(1, B, Scalar(2, 1))
        out, _ = normalize_unit_B(c)
        assert out.B == ONE
        assert classify_algebra_from_coeffs(out) == classify_algebra_from_coeffs(c)


def test_identity_basis_change():
    J = build_two_step(TwoStepCoeffs(1, Scalar(1, 2), Scalar(0, 1)))
    assert apply_basis_change(J, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]).eqs == J.eqs


def test_singular_basis_change_rejected():
    with pytest.raises(ValueError):
        apply_basis_change(build_two_step(TwoStepCoeffs(1)), [[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_normalize_two_step_rejects_parallelizable():
    with pytest.raises(InvariantError):
        normalize_two_step(NilpotentCoeffs(0, 1))


@given(st.integers(0, 1), small, small, small, small)
def test_normalize_two_step_keeps_algebra(rho, A, B, C, D):
    c = NilpotentCoeffs(0, rho, A, B, C, D)
    assume(A or B or C or D)
    reduced, M = normalize_two_step(c)
    assert classify_by_fingerprint(build_two_step(reduced).algebra) == \
        classify_by_fingerprint(build_nilpotent(c).algebra)


@given(two_step_coeffs())
def test_builders_satisfy_postconditions(c):
    J = build_two_step(c)
    assert jacobi_holds(J.eqs) and is_integrable(J.eqs)
    cls = classify_J(J)
    assert cls.nilpotent
    assert cls.abelian == (c.rho == 0)
    assert read_two_step(J) == c


@given(small, st.sampled_from([Scalar(1), Scalar(-1), I, Scalar(Q(3, 5), Q(4, 5))]),
       rationals(3, 2).filter(bool))
def test_nonnilpotent_builder_postconditions(A, E, b):
    J = build_nonnilpotent(NonNilpotentCoeffs(A, E, b))
    assert jacobi_holds(J.eqs) and is_integrable(J.eqs)
    assert classify_J(J).kind == "nonnilpotent"
    assert len(center(J.algebra)) == 1


@settings(max_examples=100)
@given(two_step_coeffs())
def test_coefficient_and_fingerprint_classifiers_agree(c):
    assert classify_by_fingerprint(build_two_step(c).algebra) == classify_algebra_from_coeffs(c)
    assert alpha_invariant(build_two_step(c).algebra) == alpha_from_coeffs(c)


@given(two_step_coeffs())
def test_large_center_criterion(c):
    big = len(center(build_two_step(c).algebra)) >= 3
    assert big == (c.abs2_B() == c.rho and not c.D)


@given(two_step_coeffs(), st.lists(small, min_size=9, max_size=9))
def test_basis_change_invariance(c, entries):
    M = [entries[0:3], entries[3:6], entries[6:9]]
    assume(det(M, one=ONE))
    J = build_two_step(c)
    new = apply_basis_change(J, M)
    assert jacobi_holds(new.eqs) and is_integrable(new.eqs)
    assert classify_J(new) == classify_J(J)
    assert fingerprint(new.algebra).key() == fingerprint(J.algebra).key()
