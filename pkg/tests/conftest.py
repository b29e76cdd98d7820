import math

import numpy as np
import pytest
from hypothesis import settings
from scipy import integrate, special

from cavityrcs.config import CavityConfig

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

KAPPA = 2 * math.pi


def small_cavity(**overrides):
    """1 x 1 x 3 wavelength cavity at kappa0 = 2 pi with (M, N) = (3, 3)."""
    base = dict(a=1.0, b=1.0, depths=(3.0,), eps=(1 + 0j,), kappa0=KAPPA, M=3, N=3, J=1000)
    base.update(overrides)
    return CavityConfig(**base)


@pytest.fixture(scope="session")
def small_solver():
    from cavityrcs import CavitySolver
    return CavitySolver(small_cavity())


@pytest.fixture(scope="session")
def small_oracle_gram():
    from cavityrcs.oracle import oracle_gram
    return oracle_gram(3, 3, KAPPA, 1.0, 1.0)


def panel_integral(R, c, kappa):
    """Adaptive quadrature of J0(c r) exp(i kappa r) over [0, R] on half-oscillation panels."""
    f = lambda r: special.j0(c * r) * np.exp(1j * kappa * r)
    n = int(math.ceil((c + kappa) * R / math.pi)) + 4
    e = np.linspace(0.0, R, n + 1)
    re = sum(integrate.quad(lambda r: f(r).real, lo, hi, epsabs=1e-15, epsrel=1e-14)[0]
             for lo, hi in zip(e[:-1], e[1:]))
    im = sum(integrate.quad(lambda r: f(r).imag, lo, hi, epsabs=1e-15, epsrel=1e-14)[0]
             for lo, hi in zip(e[:-1], e[1:]))
    return re + 1j * im


def _gauss(n, lo, hi):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi + lo) + 0.5 * (hi - lo) * x, 0.5 * (hi - lo) * w


def potential(x, psi, kappa, a, b, n=24):
    """u(x) = int_G psi(y) exp(i kappa |x-y|) / (4 pi |x-y|) dy by polar quadrature centered at x.

    ``x`` has shape (P, 2); ``psi(y1, y2)`` returns an array (K, ...) of mode values.
    The rectangle is split into four triangles with apex x, one per edge.
    """
    corners = np.array([[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]])
    s, ws = _gauss(n, 0.0, 1.0)
    t, wt = _gauss(n, 0.0, 1.0)
    out = 0.0
    for i in range(4):
        c0, c1 = corners[i], corners[(i + 1) % 4]
        # points x + s * (c0 + t (c1 - c0) - x): Duffy map of the triangle (x, c0, c1)
        edge = c0[None, None, :] + t[None, :, None] * (c1 - c0)[None, None, :]      # (1, n, 2)
        d = edge - x[:, None, :]                                                      # (P, n, 2)
        area2 = np.abs(d[..., 0] * (c1 - c0)[1] - d[..., 1] * (c1 - c0)[0])           # |det|, (P, n)
        y = x[:, None, None, :] + s[None, None, :, None] * d[:, :, None, :]           # (P, n, n, 2)
        r = s[None, None, :] * np.linalg.norm(d, axis=-1)[:, :, None]
        jac = area2[:, :, None] * s[None, None, :]
        kern = np.exp(1j * kappa * r) / (4 * math.pi * r) * jac * wt[None, :, None] * ws[None, None, :]
        vals = psi(y[..., 0], y[..., 1])                                              # (K, P, n, n)
        out = out + np.einsum("kpij,pij->kp", vals, kern)
    return out


def gradient_form(M, N, kappa, a, b, axis, n_outer=20, n_inner=24, delta=1e-5):
    """D[m, n, k1, k2] = int test(x) d/dx_axis int cos cos(y) g(x, y) dy dx.

    The test mode is cos(m pi x1/a) sin(n pi x2/b) for axis 2 and
    sin(m pi x1/a) cos(n pi x2/b) for axis 1, i.e. the unreduced integrals.
    The derivative is a central difference of the potential.
    """
    x1, w1 = _gauss(n_outer, 0.0, a)
    x2, w2 = _gauss(n_outer, 0.0, b)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    pts = np.stack([X1.ravel(), X2.ravel()], axis=1)
    ks1, ks2 = np.meshgrid(np.arange(M + 1), np.arange(N + 1), indexing="ij")
    ks1, ks2 = ks1.ravel(), ks2.ravel()

    def psi(y1, y2):
        return (np.cos(ks1[:, None, None, None] * math.pi * y1[None] / a)
                * np.cos(ks2[:, None, None, None] * math.pi * y2[None] / b))

    step = np.array([0.0, delta]) if axis == 2 else np.array([delta, 0.0])
    du = (potential(pts + step, psi, kappa, a, b, n_inner)
          - potential(pts - step, psi, kappa, a, b, n_inner)) / (2 * delta)
    ms, ns = np.arange(M + 1), np.arange(N + 1)
    if axis == 2:
        t1 = np.cos(ms[:, None] * math.pi * x1[None, :] / a)
        t2 = np.sin(ns[:, None] * math.pi * x2[None, :] / b)
    else:
        t1 = np.sin(ms[:, None] * math.pi * x1[None, :] / a)
        t2 = np.cos(ns[:, None] * math.pi * x2[None, :] / b)
    du = du.reshape(M + 1, N + 1, n_outer, n_outer)
    return np.einsum("mi,nj,i,j,klij->mnkl", t1, t2, w1, w2, du)


ACCEPTANCE_LINES = []


def acceptance_report(number, title, ok, detail):
    """Record and print one pass/fail line for an acceptance criterion."""
    line = "acceptance %2d %-4s %s: %s" % (number, "PASS" if ok else "FAIL", title, detail)
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
