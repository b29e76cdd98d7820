"""Radial oscillatory integrals of the form int_0^R J0(c r) exp(i kappa r) dr.

Two evaluation regimes are used.  For moderate radial frequency ``c`` the
integrand is resolved with composite Gauss-Legendre panels whose count grows
with the number of oscillations on ``[0, R]``.  For large ``c`` the integral
is split into the semi-infinite value, which has a closed form, minus a tail
on ``[R, inf)`` that is expanded with the large-argument asymptotics of J0.
Each tail term reduces to ``int_{R0}^inf exp(i p z) z^(-nu) dz`` with
half-integer ``nu``; the ``nu = 1/2`` member is a Fresnel integral and higher
members follow by integration by parts.

Closed forms used here (both checked against direct quadrature in the tests):

    int_0^inf J0(c r) exp(i kappa r) dr = 1 / sqrt(c^2 - kappa^2),  c > kappa
    int_{R0}^inf exp(i p z) / sqrt(z) dz
        = sqrt(pi / (2 p)) * (1 + i - 2 C(T) - 2 i S(T)),  T = sqrt(2 p R0 / pi)
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

FRESNEL_FLOOR = 20.0
"""Smallest ``p * R0`` for which the Fresnel asymptotic tail is trusted."""

RESONANCE_GUARD = 1e-6
"""Relative distance of ``c`` from ``kappa`` below which the large-c form degenerates."""

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


class RegimeError(ValueError):
    """Raised when the large-frequency form is requested outside its validity range."""


def _fresnel_aux(x):
    """Asymptotic auxiliary functions f, g of the Fresnel integrals at argument x.

    Uses the standard series in ``1 / (pi x^2)^2``, truncated at its smallest
    term (or at 1e-17 relative) instead of after the second term.
    """
    x = np.asarray(x, dtype=float)
    w = 1.0 / (math.pi * x * x) ** 2
    f_sum = np.ones_like(x)
    g_sum = np.ones_like(x)
    f_term = np.ones_like(x)
    g_term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 40):
        # (4k-1)!! / (4k-5)!! = (4k-3)(4k-1);  (4k+1)!! / (4k-3)!! = (4k-1)(4k+1)
        f_next = -f_term * (4 * k - 3) * (4 * k - 1) * w
        g_next = -g_term * (4 * k - 1) * (4 * k + 1) * w
        grow = (np.abs(f_next) > np.abs(f_term)) | (np.abs(g_next) > np.abs(g_term))
        active &= ~grow
        f_sum = np.where(active, f_sum + f_next, f_sum)
        g_sum = np.where(active, g_sum + g_next, g_sum)
        f_term, g_term = f_next, g_next
        active &= np.abs(f_term) > 1e-17
        if not active.any():
            break
    f = f_sum / (math.pi * x)
    g = g_sum / (math.pi**2 * x**3)
    return f, g


def fresnel_tail(p, R0):
    """Return int_{R0}^inf exp(i p z) / sqrt(z) dz for p > 0 and p * R0 >= 20.

    With T = sqrt(2 p R0 / pi) the Fresnel form reduces, through the
    asymptotic auxiliary functions, to sqrt(pi / (2p)) * 2 (g + i f) exp(i p R0),
    which avoids the cancellation in 1 - 2 C(T).
    """
    p = np.asarray(p, dtype=float)
    R0 = np.asarray(R0, dtype=float)
    if np.any(p <= 0) or np.any(p * R0 < FRESNEL_FLOOR):
        raise ValueError("fresnel_tail requires p > 0 and p*R0 >= %g" % FRESNEL_FLOOR)
    T = np.sqrt(2.0 * p * R0 / math.pi)
    f, g = _fresnel_aux(T)
    out = np.sqrt(math.pi / (2.0 * p)) * 2.0 * (g + 1j * f) * np.exp(1j * p * R0)
    return out[()] if out.ndim == 0 else out


def fresnel_tail_32(q, R0):
    """Return int_{R0}^inf exp(i q z) / z^(3/2) dz through integration by parts."""
    q = np.asarray(q, dtype=float)
    R0 = np.asarray(R0, dtype=float)
    out = 2.0 * np.exp(1j * q * R0) / np.sqrt(R0) + 2j * q * fresnel_tail(q, R0)
    return out[()] if np.ndim(out) == 0 else out


def power_tails(p, R0, count):
    """Tails int_{R0}^inf exp(i p z) z^(-1/2-s) dz for s = 0..count-1.

    ``p`` may be negative; the value is then the conjugate of the |p| case.
    Returns an array of shape ``(count,) + shape(p)``.
    """
    p = np.asarray(p, dtype=float)
    R0 = np.broadcast_to(np.asarray(R0, dtype=float), p.shape)
    ap = np.abs(p)
    out = np.empty((count,) + p.shape, dtype=complex)
    out[0] = fresnel_tail(ap, R0)
    phase = np.exp(1j * ap * R0)
    for s in range(1, count):
        nu = s - 0.5
        out[s] = phase * R0 ** (-nu) / nu + (1j * ap / nu) * out[s - 1]
    neg = p < 0
    if np.any(neg):
        out[:, neg] = np.conj(out[:, neg])
    return out


def _hankel_coeffs(count):
    """Coefficients a_k of the J0 large-argument expansion, k = 0..count-1.

    J0(z) ~ sqrt(2/(pi z)) (P cos chi - Q sin chi), chi = z - pi/4, with
    P = sum_k (-1)^k a_{2k} z^{-2k} and Q = sum_k (-1)^k a_{2k+1} z^{-2k-1}.
    """
    a = [1.0]
    for k in range(1, count):
        a.append(a[-1] * (-((2 * k - 1) ** 2)) / (k * 8.0))
    return a


_ASYM_TERMS = 8


def j0_asymptotic(z, terms=_ASYM_TERMS):
    """Large-argument approximation of J0 with ``terms`` expansion terms."""
    z = np.asarray(z, dtype=float)
    a = _hankel_coeffs(terms)
    P = np.zeros_like(z)
    Q = np.zeros_like(z)
    for s in range(terms):
        sign = (-1) ** (s // 2)
        if s % 2 == 0:
            P = P + sign * a[s] * z ** (-s)
        else:
            Q = Q + sign * a[s] * z ** (-s)
    chi = z - math.pi / 4
    return np.sqrt(2.0 / (math.pi * z)) * (P * np.cos(chi) - Q * np.sin(chi))


def infinite_integral(c, kappa):
    """Closed form of int_0^inf J0(c r) exp(i kappa r) dr for real kappa, c != kappa."""
    c = np.asarray(c, dtype=float)
    d = c * c - kappa * kappa
    out = np.where(d > 0, 1.0 / np.sqrt(np.abs(d)), 1j / np.sqrt(np.abs(d)))
    return out[()] if out.ndim == 0 else out


def regime2_valid(R, c, kappa):
    c = np.asarray(c, dtype=float)
    return (c > kappa * (1.0 + RESONANCE_GUARD)) & ((c - kappa) * R >= FRESNEL_FLOOR)


def _regime2(R, c, kappa):
    c = np.asarray(c, dtype=float)
    if not np.all(regime2_valid(R, c, kappa)):
        raise RegimeError("regime overlap required: c too close to kappa for the asymptotic tail")
    R0 = c * R
    p_plus = 1.0 + kappa / c
    p_minus = kappa / c - 1.0
    a = _hankel_coeffs(_ASYM_TERMS)
    k_plus = power_tails(p_plus, R0, _ASYM_TERMS)
    k_minus = power_tails(p_minus, R0, _ASYM_TERMS)
    e_m = np.exp(-0.25j * math.pi)
    e_p = np.exp(0.25j * math.pi)
    tail = np.zeros(c.shape, dtype=complex)
    for s in range(_ASYM_TERMS):
        coef = (-1) ** (s // 2) * a[s]
        if s % 2 == 0:
            # P cos(chi) = P/2 (e^{i chi} + e^{-i chi})
            tail += 0.5 * coef * (e_m * k_plus[s] + e_p * k_minus[s])
        else:
            # -Q sin(chi) = (i Q / 2)(e^{i chi} - e^{-i chi})
            tail += 0.5j * coef * (e_m * k_plus[s] - e_p * k_minus[s])
    tail *= math.sqrt(2.0 / math.pi) / c
    return infinite_integral(c, kappa) - tail


def _panel_count(c, kappa, R):
    """Panels per integral: about one per oscillation of J0(c r) exp(i kappa r)."""
    raw = np.ceil((c + abs(kappa)) * R / (2 * math.pi)).astype(int) + 2
    # round up to a coarse geometric ladder so nearby c share one node set
    return np.ceil(1.25 ** np.ceil(np.log(raw) / math.log(1.25))).astype(int)


def _regime1(R, c, kappa, chunk_nodes=4_000_000):
    """Composite Gauss-Legendre evaluation, vectorized over c."""
    c = np.asarray(c, dtype=float)
    flat = c.ravel()
    out = np.empty(flat.shape, dtype=complex)
    panels = _panel_count(flat, kappa, R)
    for count in np.unique(panels):
        idx = np.nonzero(panels == count)[0]
        edges = np.linspace(0.0, R, count + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        r = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        we = (half[:, None] * _GL_WEIGHTS[None, :]).ravel() * np.exp(1j * kappa * r)
        step = max(1, chunk_nodes // r.size)
        for s in range(0, idx.size, step):
            part = idx[s:s + step]
            out[part] = special.j0(np.outer(flat[part], r)) @ we
    return out.reshape(c.shape)


REFERENCE_RADIUS = math.sqrt(2.0)


def regime_switch(R, regime_threshold):
    """Smallest c handled by the asymptotic regime.

    The threshold is stated as c / (2 pi) for the unit-aperture radius sqrt(2);
    since the J0 expansion accuracy depends only on the argument c R, other
    radii use the same cutoff on c R.
    """
    return 2 * math.pi * regime_threshold * REFERENCE_RADIUS / R


def bessel_osc_integrals(R, c, kappa, regime_threshold=10, regime=None):
    """Vectorized int_0^R J0(c r) exp(i kappa r) dr over an array of c >= 0.

    ``regime`` forces 1 (panel quadrature) or 2 (infinite integral minus
    asymptotic tail); by default regime 2 is used above
    :func:`regime_switch` whenever the tail asymptotics are valid.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    c = np.asarray(c, dtype=float)
    if np.any(c < 0):
        raise ValueError("c must be nonnegative")
    if regime == 1:
        return _regime1(R, c, kappa)
    if regime == 2:
        return _regime2(R, c, kappa)
    use2 = (c >= regime_switch(R, regime_threshold)) & regime2_valid(R, c, kappa)
    out = np.empty(c.shape, dtype=complex)
    if np.any(use2):
        out[use2] = _regime2(R, c[use2], kappa)
    if np.any(~use2):
        out[~use2] = _regime1(R, c[~use2], kappa)
    return out


def bessel_osc_integral(R, c, kappa0, regime_threshold=10, regime=None):
    """Scalar version of :func:`bessel_osc_integrals`."""
    return complex(bessel_osc_integrals(R, np.array([float(c)]), kappa0, regime_threshold, regime)[0])
