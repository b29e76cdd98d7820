"""Spectral evaluation of the aperture Gram integrals.

The Gram integrals pair two trigonometric aperture modes through the
free-space kernel g(r) = exp(i kappa r) / (4 pi r).  Truncating the kernel to a
disk of radius R = sqrt(2) max(a, b) does not change them, since no two
aperture points are farther apart than that.  The truncated kernel G is
compactly supported, so on a periodic box of side P_i >= L_i + R the product
"mode times (mode convolved with G)" equals its periodic counterpart, and
Parseval gives

    int phi (psi * G) = (1 / (P1 P2)) sum_j  phi^(-xi_j) psi^(xi_j) G^(xi_j),
    xi_j = (j1 / P1, j2 / P2),

with closed-form mode transforms phi^, psi^ and the radial kernel transform

    G^(xi) = (1/2) int_0^R J0(2 pi |xi| r) exp(i kappa r) dr.

The 2D sum is truncated to |j_i| <= Q_i and contracted one axis at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_osc_integrals


@dataclass(frozen=True)
class GramTensor:
    """Trigonometric Gram integrals over (m, n) x (k1, k2) in {0..M} x {0..N}.

    ``I1`` pairs cos(x1) sin(x2) modes, ``I2`` sin(x1) cos(x2) modes and ``I3``
    cos(x1) cos(x2) modes.  Arrays are indexed ``[m, n, k1, k2]``.
    """

    I1: np.ndarray
    I2: np.ndarray
    I3: np.ndarray
    kappa0: float
    a: float
    b: float
    quad_grid: int
    regime_threshold: int

    @property
    def M(self):
        return self.I1.shape[0] - 1

    @property
    def N(self):
        return self.I1.shape[1] - 1

    def scaled(self, factor):
        return GramTensor(self.I1 * factor, self.I2 * factor, self.I3 * factor, self.kappa0,
                          self.a, self.b, self.quad_grid, self.regime_threshold)


@dataclass(frozen=True)
class SpectralGrid:
    """Periodic box and frequency truncation used by the spectral sums."""

    P1: float
    P2: float
    Q1: int
    Q2: int
    R: float

    def freqs(self, axis):
        P, Q = (self.P1, self.Q1) if axis == 1 else (self.P2, self.Q2)
        return np.arange(-Q, Q + 1) / P


def spectral_grid(a, b, quad_grid):
    """Box sides P_i = 2 L_i rho_i (an integer multiple of the mode period) and cutoffs Q_i.

    With P_i a multiple of 2 L_i every mode frequency k / (2 L_i) lies on the
    frequency grid.  The cutoff keeps ``quad_grid / 4`` grid steps per mode
    index step, i.e. frequencies up to ``quad_grid / 4`` times the mode spacing.
    """
    if quad_grid < 4:
        raise ValueError("quad_grid must be at least 4")
    R = math.sqrt(2.0) * max(a, b)
    rho1 = math.ceil((a + R) / (2.0 * a))
    rho2 = math.ceil((b + R) / (2.0 * b))
    Q1 = int(round(quad_grid * rho1 / 4))
    Q2 = int(round(quad_grid * rho2 / 4))
    return SpectralGrid(2.0 * a * rho1, 2.0 * b * rho2, Q1, Q2, R)


def _exprel(z):
    """(exp(z) - 1) / z with the removable singularity at z = 0 filled in."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-5
    safe = np.where(small, 1.0, z)
    series = 1.0 + z / 2.0 + z * z / 6.0 + z**3 / 24.0
    return np.where(small, series, np.expm1(safe) / safe)


def exp_transform_1d(xi, k, L):
    """int_0^L exp(-2 pi i xi y) exp(i k pi y / L) dy, broadcast over xi and k."""
    w = -2.0 * math.pi * np.asarray(xi, dtype=float) + np.asarray(k, dtype=float) * math.pi / L
    return L * _exprel(1j * w * L)


def rect_mode_transform(j1, j2, k1, k2, a, b):
    """Fourier transform of the exponential mode exp(i k1 pi y1/a) exp(i k2 pi y2/b) on [0,a]x[0,b]."""
    return exp_transform_1d(j1, k1, a) * exp_transform_1d(j2, k2, b)


def trig_transform_1d(kind, xi, K, L):
    """Transforms of cos(k pi y / L) or sin(k pi y / L), k = 0..K, shape (K+1, len(xi))."""
    ks = np.arange(K + 1)[:, None]
    ep = exp_transform_1d(xi[None, :], ks, L)
    em = exp_transform_1d(xi[None, :], -ks, L)
    if kind == "cos":
        return 0.5 * (ep + em)
    return (ep - em) / 2j


@dataclass(frozen=True)
class KernelTransformTable:
    """Radial kernel transform on the nonnegative quadrant of the frequency grid."""

    values: np.ndarray  # [j1, j2] for j1 in 0..Q1, j2 in 0..Q2
    grid: SpectralGrid
    kappa0: float

    def full(self):
        """Values on the full signed grid j1 in -Q1..Q1, j2 in -Q2..Q2."""
        v = self.values
        v = np.concatenate([v[:0:-1], v], axis=0)
        return np.concatenate([v[:, :0:-1], v], axis=1)


def kernel_transform_table(kappa0, a, b, quad_grid, regime_threshold=10):
    grid = spectral_grid(a, b, quad_grid)
    j1 = np.arange(grid.Q1 + 1) / grid.P1
    j2 = np.arange(grid.Q2 + 1) / grid.P2
    rad2 = j1[:, None] ** 2 + j2[None, :] ** 2
    uniq, inverse = np.unique(rad2, return_inverse=True)
    c = 2.0 * math.pi * np.sqrt(uniq)
    vals = 0.5 * bessel_osc_integrals(grid.R, c, kappa0, regime_threshold)
    return KernelTransformTable(vals[inverse].reshape(rad2.shape), grid, kappa0)


def default_quad_grid(M, N, kappa0, a, b):
    """Default spectral grid: 64 frequency samples per unit of the widest band index.

    The band index is the larger of the mode truncation and kappa0 L / pi,
    the mode index whose frequency matches the free-space wavenumber.
    """
    band = max(M, N, math.ceil(kappa0 * max(a, b) / math.pi))
    return 64 * band


def _levels(g, extrapolate):
    """Truncation levels and weights of the (optional) Richardson combination.

    The truncated spectral sums converge like C / Q^2; combining cutoffs Q and
    Q/2 with weights 4/3 and -1/3 cancels the leading error term.
    """
    if not extrapolate:
        return [((g.Q1, g.Q2), 1.0)]
    return [((g.Q1, g.Q2), 4.0 / 3.0), ((g.Q1 // 2, g.Q2 // 2), -1.0 / 3.0)]


def exp_gram(M, N, kappa0, a, b, quad_grid, regime_threshold=10, table=None, extrapolate=True):
    """Exponential-mode Gram integrals over signed indices.

    Returns an array indexed ``[m + M, n + N, k1 + M, k2 + N]`` for
    m, k1 in -M..M and n, k2 in -N..N.
    """
    if table is None:
        table = kernel_transform_table(kappa0, a, b, quad_grid, regime_threshold)
    g = table.grid
    _check_grid(g, a, b, M, N, extrapolate)
    n1, n2 = 2 * M + 1, 2 * N + 1
    total = np.zeros((n1, n1, n2, n2), dtype=complex)
    Gfull = table.full()
    for (q1, q2), weight in _levels(g, extrapolate):
        x1 = np.arange(-q1, q1 + 1) / g.P1
        x2 = np.arange(-q2, q2 + 1) / g.P2
        t1 = exp_transform_1d(x1[None, :], np.arange(-M, M + 1)[:, None], a)   # [k, j1]
        t2 = exp_transform_1d(x2[None, :], np.arange(-N, N + 1)[:, None], b)
        # the test mode is transformed at -xi: reverse the frequency axis
        A = t1[:, None, ::-1] * t1[None, :, :]                                   # [m, k1, j1]
        B = t2[:, None, ::-1] * t2[None, :, :]                                   # [n, k2, j2]
        Gh = Gfull[g.Q1 - q1:g.Q1 + q1 + 1, g.Q2 - q2:g.Q2 + q2 + 1]
        I = (A.reshape(-1, A.shape[-1]) @ Gh) @ B.reshape(-1, B.shape[-1]).T
        total += weight * I.reshape(n1, n1, n2, n2)
    return total.transpose(0, 2, 1, 3) / (g.P1 * g.P2)


def _check_grid(g, a, b, M, N, extrapolate=False):
    # every mode frequency k / (2 L) must sit inside the (coarsest) truncated band
    q1, q2 = (g.Q1 // 2, g.Q2 // 2) if extrapolate else (g.Q1, g.Q2)
    if q1 / g.P1 < M / (2.0 * a) or q2 / g.P2 < N / (2.0 * b):
        raise ValueError("quad_grid too small for M=%d, N=%d" % (M, N))


def _folded(kind, K, L, P, Q):
    """Real frequency-folded products for the j >= 0 half of a symmetric sum.

    For real modes phi_m, phi_k the product phi_m^(-xi) phi_k^(xi) at -xi is the
    conjugate of its value at xi, and the kernel transform is even, so the
    signed sum collapses to sum_{j >= 0} w_j Re(...) with w_0 = 1, w_j = 2.
    """
    xi = np.arange(Q + 1) / P
    t = trig_transform_1d(kind, xi, K, L)
    prod = np.conj(t)[:, None, :] * t[None, :, :]
    w = np.full(Q + 1, 2.0)
    w[0] = 1.0
    return prod.real * w


def trig_gram(M, N, kappa0, a, b, quad_grid=None, regime_threshold=10, method="direct",
              table=None, extrapolate=True):
    """Gram tensors I1, I2, I3 of trigonometric modes.

    ``method="direct"`` contracts the cos/sin mode transforms directly.
    ``method="exp"`` forms each entry from 16 signed exponential-mode
    entries of :func:`exp_gram`; both are algebraically the same sum.
    """
    if quad_grid is None:
        quad_grid = default_quad_grid(M, N, kappa0, a, b)
    if table is None:
        table = kernel_transform_table(kappa0, a, b, quad_grid, regime_threshold)
    g = table.grid
    _check_grid(g, a, b, M, N, extrapolate)
    if method == "exp":
        E = exp_gram(M, N, kappa0, a, b, quad_grid, regime_threshold, table, extrapolate)
        return _trig_from_exp(E, M, N, kappa0, a, b, quad_grid, regime_threshold)
    if method != "direct":
        raise ValueError("unknown method %r" % method)
    A = {kind: _folded(kind, M, a, g.P1, g.Q1) for kind in ("cos", "sin")}
    B = {kind: _folded(kind, N, b, g.P2, g.Q2) for kind in ("cos", "sin")}
    out = {name: 0.0 for name in ("I1", "I2", "I3")}
    for (q1, q2), weight in _levels(g, extrapolate):
        Gh = table.values[:q1 + 1, :q2 + 1]
        stage1 = {k: A[k][:, :, :q1 + 1].reshape((M + 1) ** 2, -1) @ Gh for k in A}
        for name, (k1, k2) in (("I1", ("cos", "sin")), ("I2", ("sin", "cos")), ("I3", ("cos", "cos"))):
            out[name] = out[name] + weight * (stage1[k1] @ B[k2][:, :, :q2 + 1].reshape((N + 1) ** 2, -1).T)
    scale = 1.0 / (g.P1 * g.P2)

    def arrange(I):
        return (I * scale).reshape(M + 1, M + 1, N + 1, N + 1).transpose(0, 2, 1, 3).copy()

    return GramTensor(arrange(out["I1"]), arrange(out["I2"]), arrange(out["I3"]),
                      kappa0, a, b, quad_grid, regime_threshold)


def _trig_from_exp(E, M, N, kappa0, a, b, quad_grid, regime_threshold):
    mi = np.arange(M + 1)
    ni = np.arange(N + 1)
    out = {}
    for name, (f1, f2) in {"I1": ("cos", "sin"), "I2": ("sin", "cos"), "I3": ("cos", "cos")}.items():
        total = np.zeros((M + 1, N + 1, M + 1, N + 1), dtype=complex)
        for s_m in (1, -1):
            for s_n in (1, -1):
                for s_k1 in (1, -1):
                    for s_k2 in (1, -1):
                        coef = _coef(f1, s_m) * _coef(f2, s_n) * _coef(f1, s_k1) * _coef(f2, s_k2)
                        total += coef * E[np.ix_(s_m * mi + M, s_n * ni + N, s_k1 * mi + M, s_k2 * ni + N)]
        out[name] = total
    return GramTensor(out["I1"], out["I2"], out["I3"], kappa0, a, b, quad_grid, regime_threshold)


def _coef(kind, sign):
    # cos t = (e^{it} + e^{-it}) / 2,  sin t = (e^{it} - e^{-it}) / (2i)
    return 0.5 if kind == "cos" else sign / 2j
