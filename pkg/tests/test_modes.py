import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavityrcs.modes import (ApertureField, aperture_divergence, discrete_divergence_residual, index_sets,
                             synthesize_aperture)


def test_sets_for_one_mode():
    s = index_sets(1, 1)
    assert s.set1 == [(0, 1), (1, 1)]
    assert s.set2 == [(1, 0), (1, 1)]
    assert s.set3 == [(1, 1)]


def test_cardinalities():
    s = index_sets(2, 3)
    assert s.sizes == (9, 8, 6)
    assert s.order == 3 * 2 * 3 + 2 + 3


def test_flatten_examples():
    assert index_sets(1, 1).flatten(1, (0, 1)) == 0
    assert index_sets(1, 1).flatten(1, (1, 1)) == 1
    s = index_sets(2, 3)
    assert s.flatten(2, (2, 0)) == 4
    with pytest.raises(IndexError):
        s.flatten(3, (0, 1))
    with pytest.raises(IndexError):
        s.unflatten(1, 9)


def test_rejects_empty_truncation():
    with pytest.raises(ValueError):
        index_sets(0, 2)


@given(M=st.integers(1, 16), N=st.integers(1, 16))
def test_flatten_is_a_bijection(M, N):
    s = index_sets(M, N)
    for which in (1, 2, 3):
        modes = getattr(s, "set%d" % which)
        idx = [s.flatten(which, md) for md in modes]
        assert idx == list(range(len(modes)))
        assert [s.unflatten(which, i) for i in idx] == modes


def field_with(s, which, mode, value=1.0):
    coeffs = [np.zeros(n, dtype=complex) for n in s.sizes]
    coeffs[which - 1][s.flatten(which, mode)] = value
    return ApertureField(s, *coeffs)


def test_synthesis_examples():
    s = index_sets(3, 3)
    zero = ApertureField(s, *(np.zeros(n, dtype=complex) for n in s.sizes))
    assert np.all(synthesize_aperture(zero, 0.3, 0.4, 1.0, 1.0) == 0)
    e = synthesize_aperture(field_with(s, 3, (1, 1)), 0.5, 0.5, 1.0, 1.0)
    assert e[2] == pytest.approx(1.0, abs=1e-15)
    f = field_with(s, 1, (0, 1))
    for x1 in (0.0, 0.3, 1.0):
        assert synthesize_aperture(f, x1, 0.5, 1.0, 1.0)[0] == pytest.approx(1.0, abs=1e-15)


def test_synthesis_rejects_outside_points():
    s = index_sets(1, 1)
    with pytest.raises(ValueError):
        synthesize_aperture(field_with(s, 3, (1, 1)), 1.5, 0.5, 1.0, 1.0)


vec = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=33,
               max_size=33)


@given(u=vec, v=vec, alpha=st.complex_numbers(max_magnitude=5), beta=st.complex_numbers(max_magnitude=5),
       x1=st.floats(0, 1.3), x2=st.floats(0, 0.7))
def test_synthesis_is_linear(u, v, alpha, beta, x1, x2):
    s = index_sets(3, 3)
    fu = ApertureField.from_vector(s, u)
    fv = ApertureField.from_vector(s, v)
    fw = ApertureField.from_vector(s, alpha * np.array(u) + beta * np.array(v))
    lhs = synthesize_aperture(fw, x1, x2, 1.3, 0.7)
    rhs = alpha * synthesize_aperture(fu, x1, x2, 1.3, 0.7) + beta * synthesize_aperture(fv, x1, x2, 1.3, 0.7)
    scale = max(1.0, abs(alpha) * np.sum(np.abs(u)) + abs(beta) * np.sum(np.abs(v)))
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * scale


def test_vector_round_trip():
    s = index_sets(2, 3)
    x = np.arange(s.order) + 1j
    assert np.array_equal(ApertureField.from_vector(s, x).vector(), x)
    with pytest.raises(ValueError):
        ApertureField(s, np.zeros(3), np.zeros(8), np.zeros(6))


def test_divergence_examples():
    s = index_sets(1, 1)
    zero = ApertureField(s, *(np.zeros(n, dtype=complex) for n in s.sizes))
    assert discrete_divergence_residual(zero, np.zeros(1), 1.0, 1.0) == 0.0
    f = field_with(s, 1, (1, 1))
    assert discrete_divergence_residual(f, np.array([math.pi]), 1.0, 1.0) == 0.0
    assert aperture_divergence(f, np.array([0.0]), 1.0, 1.0)[0] == pytest.approx(-math.pi)
