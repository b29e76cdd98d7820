"""Scattered far field and backscatter radar cross section.

Above the ground plane the scattered field is radiated by the tangential
aperture field, E_s = curl int_G 2 (z x E)(y) g(x, y) dy.  Its far-field
pattern is

    E_s ~ exp(i kappa r) / r * A(rhat),   A = (i kappa / (2 pi)) rhat x V,
    V = (-E2^, E1^, 0),   El^ = int_G El(y) exp(-i kappa rhat . y) dy,

and the transforms El^ are closed-form sums over the trigonometric modes.
The radar cross section is sigma = 4 pi |A . e|^2 / |p|^2 for a receiving
polarization e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import build_incident_wave
from .gram import trig_transform_1d


@dataclass(frozen=True)
class RcsSample:
    """Backscatter values at one incidence direction.

    ``sigma`` is the co-polarized cross section for polarization angle
    ``alpha``; ``sigma_tt`` and ``sigma_pp`` are the theta-theta and phi-phi
    cross sections.  The dB values are 10 log10(sigma / lambda^2).
    """

    theta: float
    phi: float
    alpha: float
    sigma: float
    sigma_over_lambda2: float
    sigma_tt: float
    sigma_pp: float
    rcs_tt_db: float
    rcs_pp_db: float


def aperture_transforms(field, kx, ky, a, b):
    """(E1^, E2^) = int_G El(y) exp(-i (kx y1 + ky y2)) dy for the truncated series.

    ``kx`` and ``ky`` may be arrays of equal shape.
    """
    s = field.sets
    kx, ky = np.broadcast_arrays(np.asarray(kx, dtype=float), np.asarray(ky, dtype=float))
    xi1 = kx.ravel() / (2.0 * math.pi)
    xi2 = ky.ravel() / (2.0 * math.pi)
    cx = trig_transform_1d("cos", xi1, s.M, a)
    sx = trig_transform_1d("sin", xi1, s.M, a)
    cy = trig_transform_1d("cos", xi2, s.N, b)
    sy = trig_transform_1d("sin", xi2, s.N, b)
    m1, n1 = s.modes(1)
    m2, n2 = s.modes(2)
    e1 = (field.coeff1 @ (cx[m1] * sy[n1])).reshape(kx.shape)
    e2 = (field.coeff2 @ (sx[m2] * cy[n2])).reshape(kx.shape)
    return e1[()], e2[()]


def far_field(field, direction, kappa0, a, b):
    """Far-field amplitude vector A(rhat) of the field radiated by the aperture."""
    r = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(r)
    if not norm > 0:
        raise ValueError("direction must be nonzero")
    r = r / norm
    if not r[2] > 0:
        raise ValueError("observation direction must point into the upper half space")
    e1, e2 = aperture_transforms(field, kappa0 * r[0], kappa0 * r[1], a, b)
    V = np.array([-e2, e1, 0.0], dtype=complex)
    return (1j * kappa0 / (2.0 * math.pi)) * np.cross(r, V)


def sigma_from_amplitude(A, e):
    return 4.0 * math.pi * float(abs(np.dot(A, np.asarray(e))) ** 2)


def to_db(sigma, wavelength):
    with np.errstate(divide="ignore"):
        return float(10.0 * np.log10(sigma / wavelength**2))


def backscatter(solve, theta, phi, alpha, kappa0, a, b):
    """Backscatter sample at one incidence direction.

    ``solve(wave)`` must return the aperture field for an incident wave.
    Three solves are made: the theta and phi polarizations and ``alpha``
    itself unless it coincides with one of them.
    """
    wavelength = 2.0 * math.pi / kappa0
    fields = {}

    def amplitude(pol):
        if pol not in fields:
            wave = build_incident_wave(pol, theta, phi, kappa0)
            fields[pol] = (wave, far_field(solve(wave), -wave.d, kappa0, a, b))
        return fields[pol]

    w_t, A_t = amplitude(0.0)
    w_p, A_p = amplitude(0.5 * math.pi)
    theta_hat = w_t.p
    phi_hat = w_p.p
    sigma_tt = sigma_from_amplitude(A_t, theta_hat)
    sigma_pp = sigma_from_amplitude(A_p, phi_hat)
    if alpha == 0.0:
        sigma = sigma_tt
    elif alpha == 0.5 * math.pi:
        sigma = sigma_pp
    else:
        w_a, A_a = amplitude(alpha)
        sigma = sigma_from_amplitude(A_a, w_a.p)
    return RcsSample(theta, phi, alpha, sigma, sigma / wavelength**2, sigma_tt, sigma_pp,
                     to_db(sigma_tt, wavelength), to_db(sigma_pp, wavelength))


def backscatter_sweep(solve, thetas, phi, alpha, kappa0, a, b):
    return [backscatter(solve, t, phi, alpha, kappa0, a, b) for t in thetas]


def radiated_power(field, kappa0, a, b, nodes=64):
    """kappa0 * int |A|^2 over the upper hemisphere, by Gauss-Legendre in (theta, phi)."""
    xt, wt = np.polynomial.legendre.leggauss(nodes)
    th = 0.25 * math.pi * (xt + 1.0)
    wth = 0.25 * math.pi * wt
    xp, wp = np.polynomial.legendre.leggauss(2 * nodes)
    ph = math.pi * (xp + 1.0)
    wph = math.pi * wp
    T, P = np.meshgrid(th, ph, indexing="ij")
    r = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1)
    e1, e2 = aperture_transforms(field, kappa0 * r[..., 0], kappa0 * r[..., 1], a, b)
    V = np.stack([-e2, e1, np.zeros_like(e1)], axis=-1)
    A = (kappa0 / (2.0 * math.pi)) * np.cross(r, V)
    dens = np.sum(np.abs(A) ** 2, axis=-1) * np.sin(T)
    return kappa0 * float(wth @ dens @ wph)


def extinction_power(field, wave, a, b):
    """Power removed from the specular field: 2 Re[(beta p1 + alpha1 p3) E1^ + (alpha2 p3 + beta p2) E2^].

    The transforms are taken at the incident tangential wavenumber.  For a
    lossless filling this equals :func:`radiated_power`.
    """
    p = wave.p
    e1, e2 = aperture_transforms(field, wave.alpha1, wave.alpha2, a, b)
    return 2.0 * float(np.real((wave.beta * p[0] + wave.alpha1 * p[2]) * e1
                               + (wave.alpha2 * p[2] + wave.beta * p[1]) * e2))
