import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracheat import lie
from fracheat.lie import GroupWord, LieElement, adjoint, classify, commutator

params = st.tuples(st.floats(0.05, 1.0), st.floats(0.05, 2.0))
coeff = st.floats(-3, 3)
vectors = st.lists(coeff, min_size=5, max_size=5)


def X(i, a=0.7, b=1.3):
    return LieElement.basis(i, a, b)


def test_table_entries():
    a, b = 0.7, 1.3
    assert np.array_equal(commutator(X(1), X(5)).a, [a, 0, 0, 0, 0])
    assert np.array_equal(commutator(X(2), X(5)).a, [0, b, 0, 0, 0])
    assert np.array_equal(commutator(X(5), X(3)).a, [0, 0, -b, 0, 0])
    for j in range(1, 6):
        assert not np.any(commutator(X(4), X(j)).a)
    assert not np.any(commutator(X(1), X(2)).a)
    combo = commutator(X(1) + 2 * X(2), X(5))
    assert np.allclose(combo.a, [a, 2 * b, 0, 0, 0])


def test_parameter_mismatch():
    with pytest.raises(ValueError):
        commutator(LieElement.basis(1, 0.5, 1.0), LieElement.basis(5, 0.6, 1.0))
    with pytest.raises(ValueError):
        LieElement([1, 2, 3], 1, 1)
    with pytest.raises(ValueError):
        LieElement([1, 0, 0, 0, np.nan])


@given(params, vectors, vectors)
def test_antisymmetry(p, u, v):
    x, y = LieElement(u, *p), LieElement(v, *p)
    assert np.array_equal(commutator(x, y).a, -commutator(y, x).a)


@given(params, vectors, vectors, vectors)
def test_jacobi(p, u, v, w):
    x, y, z = (LieElement(c, *p) for c in (u, v, w))
    total = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y))
    assert np.allclose(total.a, 0.0, atol=1e-12)


def test_ad_matrices():
    a, b = 0.7, 1.3
    assert not np.any(lie.ad_matrix(4, a, b))
    ad1 = lie.ad_matrix(1, a, b)
    assert np.count_nonzero(ad1) == 1 and ad1[0, 4] == a
    # [Y, X5] orientation: X1, X2, X3 scale by alpha, beta, beta
    assert np.allclose(np.diag(-lie.ad_matrix(5, a, b)), [a, b, b, 0, 0])


def test_adjoint_closed_forms():
    a, b, s = 0.7, 1.3, 0.4
    assert np.array_equal(adjoint(4, s, a, b), np.eye(5))
    A1 = adjoint(1, s, a, b)
    assert A1[:, 4] == pytest.approx([-s * a, 0, 0, 0, 1])
    A5 = adjoint(5, s, a, b)
    assert np.allclose(np.diag(A5), np.exp([a * s, b * s, b * s, 0, 0]))


@pytest.mark.parametrize("i", range(1, 6))
def test_series_matches_expm(i):
    for s in np.linspace(-1, 1, 11):
        assert np.allclose(adjoint(i, s, 0.9, 1.7), lie.lie_series(i, s, 0.9, 1.7), atol=1e-12, rtol=0)


@settings(max_examples=50)
@given(params, st.integers(1, 5), st.floats(-1, 1), st.floats(-1, 1))
def test_homomorphism(p, i, s, r):
    assert np.allclose(adjoint(i, s + r, *p), adjoint(i, s, *p) @ adjoint(i, r, *p), atol=1e-11)


@settings(max_examples=50)
@given(params, st.integers(1, 5), st.floats(-1, 1), vectors, vectors)
def test_bracket_invariance(p, i, s, u, v):
    A = adjoint(i, s, *p)
    x, y = LieElement(u, *p), LieElement(v, *p)
    lhs = A @ commutator(x, y).a
    rhs = commutator(x.with_coeffs(A @ x.a), y.with_coeffs(A @ y.a)).a
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_step_matrices_under_rescaling():
    a, b, s = 0.7, 1.3, 0.45
    for i in range(1, 5):
        assert np.allclose(lie.reduction_action(i, s, a, b), lie.step_matrix(i, s), atol=1e-15)
    assert np.allclose(lie.reduction_action(5, s, 1.0, 1.0), lie.step_matrix(5, s), atol=1e-14)
    assert not np.allclose(lie.reduction_action(5, s, a, b), lie.step_matrix(5, s))


def test_classify_examples():
    form = classify(LieElement([1, 0, 0, 2, 3]))
    assert form.case_id == 1
    assert np.array_equal(form.representative.a, [1, 0, 0, 2, 0])
    assert form.word.steps == ((1, 3.0),)

    form = classify(LieElement([0, 2, 0, 0, 4]))
    assert form.case_id == 3
    assert np.array_equal(form.representative.a, [0, 1, 0, 0, 0])
    assert form.word.steps == ((2, 2.0),) and form.word.scale == 0.5

    d = [0, 0, 0, 1.5, -2.5]
    form = classify(LieElement(d))
    assert form.case_id == 4
    assert np.array_equal(form.representative.a, d)

    form = classify(LieElement([1, 1, 1, 0, 1]))
    assert form.case_id == 8
    assert np.allclose(form.representative.a, form.word.apply(LieElement([1, 1, 1, 0, 1])).a)


def test_classify_zero_rejected():
    with pytest.raises(ValueError):
        classify(LieElement(np.zeros(5)))
    with pytest.raises(ValueError):
        classify(LieElement([1e-14, 0, 0, 0, 0]))


def test_group_word_validation():
    with pytest.raises(ValueError):
        GroupWord(scale=0.0)
    with pytest.raises(ValueError):
        GroupWord(sign=2)
    with pytest.raises(ValueError):
        GroupWord(steps=((1, 0.0),) * 6)


@settings(max_examples=300)
@given(params, vectors, st.lists(st.booleans(), min_size=3, max_size=3))
def test_classifier_soundness(p, v, mask):
    v = [c if keep else 0.0 for c, keep in zip(v[:3], mask)] + v[3:]
    if max(abs(c) for c in v) <= 1e-12:
        return
    x = LieElement(v, *p)
    form = classify(x)
    pattern = tuple(abs(c) > 1e-12 for c in v[:3])
    assert form.case_id == lie.CASE_PATTERNS[pattern]
    assert np.allclose(form.word.apply(x).a, form.representative.a, atol=1e-10)
