import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abelfb import (
    Group, GroupMismatchError, BackendError, Signal, character, convolve, fourier,
    fourier_at, involution, inverse_fourier, translate,
)


def test_character_values():
    z4 = Group.finite(4)
    assert np.isclose(character(z4, (1,), (1,)), 1j)
    assert np.isclose(character(z4, (2,), (2,)), 1)
    assert np.isclose(character(Group.finite(2, 2), (1, 1), (1, 0)), -1)


def test_character_on_torus():
    Z = Group.integer(1)
    assert np.isclose(character(Z, (3,), (0.25,)), np.exp(2j * np.pi * 0.75))


def test_character_group_mismatch():
    with pytest.raises(GroupMismatchError):
        character(Group.finite(4), (1, 0), (1,))


def test_group_invariants():
    with pytest.raises(ValueError):
        Group.finite(0)
    with pytest.raises(ValueError):
        Group.integer(0)
    assert Group.finite(3, 4).size == 12
    assert Group.integer(2).size is None
    assert Group.finite(4).element((5,)) == (1,)


def test_elements_are_colex_ordered():
    assert list(Group.finite(2, 2).elements()) == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_convolution_identity_and_wrap():
    G = Group.finite(4)
    x = Signal.from_array(G, [1, 2, 3, 4])
    assert convolve(Signal.delta(G), x) == x
    assert convolve(Signal.delta(G, (1,)), Signal.delta(G, (3,))) == Signal.delta(G)


def test_convolution_young_inequality(rng):
    G = Group.finite(8)
    for _ in range(20):
        x = Signal.from_array(G, rng.normal(size=8) + 1j * rng.normal(size=8))
        y = Signal.from_array(G, rng.normal(size=8))
        assert convolve(x, y).norm(2) <= x.norm(2) * y.norm(1) + 1e-12


def test_convolution_against_brute_force(rng):
    G = Group.finite(5, 3)
    x = Signal.from_array(G, rng.normal(size=(5, 3)))
    y = Signal.from_array(G, rng.normal(size=(5, 3)))
    expected = np.zeros((5, 3), dtype=complex)
    for m in G.elements():
        expected[m] = sum(x[n] * y[G.sub(m, n)] for n in G.elements())
    assert np.allclose(convolve(x, y).to_array(), expected)


def test_sparse_integer_convolution():
    Z = Group.integer(1)
    a = Signal.from_terms(Z, {(0,): 1, (1,): 1})
    b = Signal.from_terms(Z, {(0,): 1, (-1,): -1})
    assert convolve(a, b) == Signal.from_terms(Z, {(-1,): -1, (1,): 1})


def test_fourier_is_the_dft_of_the_definition(rng):
    G = Group.finite(3, 4)
    x = Signal.from_array(G, rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4)))
    X = fourier(x)
    for xi in G.dual_elements():
        direct = sum(x[n] * np.conj(character(G, n, xi)) for n in G.elements())
        assert np.isclose(X[xi], direct)
        assert np.isclose(fourier_at(x, xi), direct)


def test_fourier_round_trip_and_plancherel(rng):
    G = Group.finite(6, 2)
    x = Signal.from_array(G, rng.normal(size=(6, 2)) + 1j * rng.normal(size=(6, 2)))
    X = fourier(x)
    assert inverse_fourier(G, X).allclose(x)
    assert np.isclose(x.norm() ** 2, np.sum(np.abs(X) ** 2) / G.size)


def test_fourier_rejects_integer_group():
    with pytest.raises(BackendError):
        fourier(Signal.delta(Group.integer(1)))


def test_fourier_of_translate_and_involution(rng):
    G = Group.finite(8)
    x = Signal.from_array(G, rng.normal(size=8) + 1j * rng.normal(size=8))
    X = fourier(x)
    xi = np.arange(8)
    assert np.allclose(fourier(translate(x, (3,))), X * np.exp(-2j * np.pi * 3 * xi / 8))
    assert np.allclose(fourier(involution(x)), np.conj(X))


def test_translate_on_integer_group():
    Z = Group.integer(2)
    x = Signal.from_terms(Z, {(0, 0): 1.0, (1, -1): 2.0})
    assert translate(x, (2, 3)) == Signal.from_terms(Z, {(2, 3): 1.0, (3, 2): 2.0})


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=3), st.data())
def test_character_is_bimultiplicative(orders, data):
    G = Group.finite(*orders)
    el = st.tuples(*[st.integers(0, s - 1) for s in orders])
    n, m, xi = data.draw(el), data.draw(el), data.draw(el)
    assert np.isclose(character(G, G.add(n, m), xi), character(G, n, xi) * character(G, m, xi))
    assert np.isclose(abs(character(G, n, xi)), 1.0)
