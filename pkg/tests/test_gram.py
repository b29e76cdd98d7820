import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavityrcs import gram as G
from cavityrcs.bessel import bessel_osc_integral
from cavityrcs.oracle import oracle_gram
from conftest import panel_integral

KAPPA = 2 * math.pi


def quad2d(f, a, b, n=64):
    x, w = np.polynomial.legendre.leggauss(n)
    x1, w1 = 0.5 * a * (x + 1), 0.5 * a * w
    x2, w2 = 0.5 * b * (x + 1), 0.5 * b * w
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    return np.sum(np.outer(w1, w2) * f(X1, X2))


def rel_err(x, ref):
    return np.max(np.abs(x - ref)) / np.max(np.abs(ref))


def test_rect_transform_trivial_cases():
    assert G.rect_mode_transform(0, 0, 0, 0, 1.0, 1.0) == pytest.approx(1.0, abs=1e-15)
    # frequency 1 against mode index 2 on a unit interval is the resonant limit
    assert G.rect_mode_transform(1, 0, 2, 0, 1.0, 1.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("j1,j2,k1,k2,a,b", [(1, 1, 1, 1, 1.0, 1.0), (0.3, -2.2, 3, -1, 1.5, 0.7),
                                            (2.5, 0.0, -4, 2, 2.0, 1.0)])
def test_rect_transform_against_quadrature(j1, j2, k1, k2, a, b):
    f = lambda y1, y2: (np.exp(-2j * math.pi * (j1 * y1 + j2 * y2))
                        * np.exp(1j * k1 * math.pi * y1 / a) * np.exp(1j * k2 * math.pi * y2 / b))
    ref = quad2d(f, a, b)
    assert abs(G.rect_mode_transform(j1, j2, k1, k2, a, b) - ref) <= 1e-12 * max(abs(ref), 1e-3)


def test_kernel_transform_origin_is_disk_integral():
    # int over the disk |u| < R of exp(i kappa |u|) / (4 pi |u|) du = (1/2) int_0^R exp(i kappa r) dr
    table = G.kernel_transform_table(KAPPA, 1.0, 1.0, 64)
    R = table.grid.R
    expected = 0.5 * (np.exp(1j * KAPPA * R) - 1) / (1j * KAPPA)
    assert table.values[0, 0] == pytest.approx(expected, rel=1e-13)


def test_kernel_transform_normalization_against_direct_transform():
    # direct 2D transform of the truncated kernel at xi = (0.7, 0) in polar form
    R = math.sqrt(2.0)
    xi = 0.7
    r, wr = np.polynomial.legendre.leggauss(200)
    r, wr = 0.5 * R * (r + 1), 0.5 * R * wr
    t, wt = np.polynomial.legendre.leggauss(200)
    t, wt = math.pi * (t + 1), math.pi * wt
    Rr, T = np.meshgrid(r, t, indexing="ij")
    f = np.exp(1j * KAPPA * Rr) / (4 * math.pi) * np.exp(-2j * math.pi * xi * Rr * np.cos(T))
    direct = np.sum(np.outer(wr, wt) * f)
    assert direct == pytest.approx(0.5 * bessel_osc_integral(R, 2 * math.pi * xi, KAPPA), rel=1e-10)


def test_kernel_transform_radial_symmetry():
    table = G.kernel_transform_table(KAPPA, 1.0, 1.0, 128)
    v = table.values
    assert v[3, 4] == pytest.approx(v[5, 0], rel=1e-12)
    assert v[30, 40] == pytest.approx(v[50, 0], rel=1e-12)
    assert np.allclose(v[:20, :20], v[:20, :20].T, rtol=1e-12, atol=0)
    full = table.full()
    q1, q2 = table.grid.Q1, table.grid.Q2
    assert full[q1 - 7, q2 + 2] == v[7, 2]


def test_kernel_transform_far_entry_against_oracle():
    table = G.kernel_transform_table(KAPPA, 1.0, 1.0, 256)
    P = table.grid.P1
    c = 2 * math.pi * math.hypot(30, 40) / P
    ref = 0.5 * panel_integral(table.grid.R, c, KAPPA)
    assert abs(table.values[30, 40] - ref) <= 1e-6 * abs(ref)


def test_default_quad_grid():
    assert G.default_quad_grid(3, 3, KAPPA, 1.0, 1.0) == 64 * 3
    assert G.default_quad_grid(15, 15, KAPPA, 10.0, 10.0) == 64 * 20
    assert G.default_quad_grid(21, 21, KAPPA, 10.0, 10.0) == 64 * 21


def test_grid_too_small():
    with pytest.raises(ValueError, match="quad_grid too small"):
        G.trig_gram(8, 8, KAPPA, 1.0, 1.0, quad_grid=16)


def test_trig_gram_zero_patterns_and_symmetry():
    g = G.trig_gram(3, 2, KAPPA, 1.2, 0.8)
    assert np.all(g.I1[:, 0] == 0) and np.all(g.I1[:, :, :, 0] == 0)
    assert np.all(g.I2[0] == 0) and np.all(g.I2[:, :, 0] == 0)
    for name in ("I1", "I2", "I3"):
        t = getattr(g, name)
        assert rel_err(t, t.transpose(2, 3, 0, 1)) < 1e-10


def test_exp_route_equals_direct_route():
    a, b = 1.0, 1.3
    direct = G.trig_gram(3, 3, KAPPA, a, b)
    via_exp = G.trig_gram(3, 3, KAPPA, a, b, method="exp")
    for name in ("I1", "I2", "I3"):
        assert rel_err(getattr(via_exp, name), getattr(direct, name)) < 1e-12


def test_exp_gram_symmetry_and_origin():
    E = G.exp_gram(2, 2, KAPPA, 1.0, 1.0, 128)
    M = N = 2
    assert rel_err(E, E.transpose(2, 3, 0, 1)) < 1e-10
    g = G.trig_gram(2, 2, KAPPA, 1.0, 1.0, 128)
    assert g.I3[0, 0, 0, 0] == pytest.approx(E[M, N, M, N], rel=1e-12)


def test_exp_gram_against_oracle_entries(small_oracle_gram):
    # cos-cos origin entry equals the (0,0) exponential entry
    E = G.exp_gram(3, 3, KAPPA, 1.0, 1.0, G.default_quad_grid(3, 3, KAPPA, 1.0, 1.0))
    ref = small_oracle_gram.I3[0, 0, 0, 0]
    assert abs(E[3, 3, 3, 3] - ref) <= 1e-3 * abs(ref)


def test_trig_gram_against_oracle(small_oracle_gram):
    g = G.trig_gram(3, 3, KAPPA, 1.0, 1.0)
    for name in ("I1", "I2", "I3"):
        assert rel_err(getattr(g, name), getattr(small_oracle_gram, name)) < 1e-3
    ref = small_oracle_gram.I1[1, 1, 1, 1]
    assert abs(g.I1[1, 1, 1, 1] - ref) <= 1e-3 * abs(ref)


def test_extrapolation_improves_accuracy(small_oracle_gram):
    q = G.default_quad_grid(3, 3, KAPPA, 1.0, 1.0)
    plain = G.trig_gram(3, 3, KAPPA, 1.0, 1.0, q, extrapolate=False)
    extra = G.trig_gram(3, 3, KAPPA, 1.0, 1.0, q)
    finer = G.trig_gram(3, 3, KAPPA, 1.0, 1.0, 2 * q, extrapolate=False)
    e_plain = rel_err(plain.I3, small_oracle_gram.I3)
    e_finer = rel_err(finer.I3, small_oracle_gram.I3)
    assert e_finer < e_plain
    assert rel_err(extra.I3, small_oracle_gram.I3) < e_finer


@pytest.mark.parametrize("M,N,a,b,kappa", [(2, 3, 0.5, 1.0, 2 * math.pi), (3, 2, 1.5, 0.7, 3 * math.pi)])
def test_trig_gram_against_oracle_other_shapes(M, N, a, b, kappa):
    ref = oracle_gram(M, N, kappa, a, b)
    g = G.trig_gram(M, N, kappa, a, b)
    for name in ("I1", "I2", "I3"):
        assert rel_err(getattr(g, name), getattr(ref, name)) < 1e-3


@given(factor=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_scaled_is_linear(factor):
    g = G.trig_gram(1, 1, KAPPA, 1.0, 1.0, 64)
    s = g.scaled(factor)
    assert np.allclose(s.I2, factor * g.I2, rtol=1e-15, atol=0)
