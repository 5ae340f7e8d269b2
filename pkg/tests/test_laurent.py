import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abelfb import LaurentMatrix, LaurentPoly, lp_add, lp_conjugate_transpose, lp_eval, lp_is_identity, lp_mul

coef = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


def polys(dim=2):
    exps = st.tuples(*[st.integers(-2, 2)] * dim)
    return st.dictionaries(exps, coef, max_size=4).map(lambda t: LaurentPoly(dim, t))


def random_matrix(rng, rows, cols, dim=2, taps=3):
    def entry():
        return LaurentPoly(dim, {tuple(rng.integers(-2, 3, size=dim)): complex(*rng.normal(size=2))
                                 for _ in range(taps)})
    return LaurentMatrix([[entry() for _ in range(cols)] for _ in range(rows)])


def test_product_example():
    z = LaurentPoly.var(1, 0)
    zi = LaurentPoly.monomial((-1,))
    assert (z + zi) * (z - zi) == LaurentPoly(1, {(2,): 1, (-2,): -1})


def test_adjoint_example():
    assert LaurentPoly.monomial((1,), 1j).adjoint() == LaurentPoly.monomial((-1,), -1j)


def test_evaluation_examples():
    assert np.isclose(LaurentPoly.var(1, 0)(0.25), 1j)
    C = np.array([[1, 2j], [3, 4]])
    assert np.allclose(lp_eval(LaurentMatrix.from_constant(C, 2), (0.3, 0.7)), C)


def test_identity_examples():
    assert lp_is_identity(LaurentMatrix.identity(3, 1))
    z = LaurentPoly.var(1, 0)
    one = LaurentPoly.constant(1, 1)
    zero = LaurentPoly.constant(1, 0)
    assert not lp_is_identity(LaurentMatrix([[one, zero], [zero, z]]))
    E = LaurentMatrix.from_constant(np.array([[1, 1], [1, -1]]) / np.sqrt(2), 1)
    assert lp_is_identity(lp_mul(lp_conjugate_transpose(E), E))


@settings(max_examples=50, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@settings(max_examples=50, deadline=None)
@given(polys(), polys(), st.tuples(st.floats(0, 1), st.floats(0, 1)))
def test_evaluation_is_a_homomorphism(a, b, theta):
    assert np.isclose((a * b)(theta), a(theta) * b(theta))
    assert np.isclose((a + b)(theta), a(theta) + b(theta))
    assert np.isclose(a.adjoint()(theta), np.conj(a(theta)))


def test_matrix_product_matches_pointwise(rng):
    A, B = random_matrix(rng, 2, 3), random_matrix(rng, 3, 2)
    thetas = rng.random((10, 2))
    AB = lp_mul(A, B).eval_grid(thetas)
    assert np.allclose(AB, A.eval_grid(thetas) @ B.eval_grid(thetas))
    assert np.allclose(lp_add(A, A).eval_grid(thetas), 2 * A.eval_grid(thetas))
    adj = lp_conjugate_transpose(A).eval_grid(thetas)
    assert np.allclose(adj, np.conj(np.swapaxes(A.eval_grid(thetas), 1, 2)))


def test_adjugate_and_determinant(rng):
    A = random_matrix(rng, 3, 3, taps=2)
    thetas = rng.random((8, 2))
    vals = A.eval_grid(thetas)
    assert np.allclose(A.det().eval_grid(thetas), np.linalg.det(vals))
    prod = (A @ A.adjugate()).eval_grid(thetas)
    dets = np.linalg.det(vals)
    assert np.allclose(prod, dets[:, None, None] * np.eye(3))


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        LaurentMatrix.identity(2, 1) @ LaurentMatrix.identity(3, 1)
