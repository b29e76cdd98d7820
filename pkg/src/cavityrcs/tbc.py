"""Discretized transparent boundary condition on the aperture.

Testing the exterior relation with each tangential mode and replacing the
vertical derivative by a one-sided difference gives, for (m, n) in set1,

    E1_J - E1_{J+1} + (m pi h / a) E3_{J+1} - F1 E1 - H1 E1 - G1 E2 = g1

and the analogous set2 rows, where F, G, H are dense blocks built from the
Gram tensor.  The divergence-free condition supplies the set3 rows

    E3_J + (m pi h / a) E1 + (n pi h / b) E2 - E3_{J+1} = 0.

Every dense block is taken from the by-parts reduced forms, which only involve
the weakly singular integrals I1, I2, I3 of the kernel itself.

``sign="physical"`` (the default) uses the sign of the integral operator that
follows from the scattered-field representation E_s = curl int 2 (z x E) g.
``sign="negated"`` flips all dense blocks; it is kept to compare against the
opposite convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gram import trig_transform_1d
from .modes import ModeIndexSets

SIGNS = {"physical": 1.0, "negated": -1.0}


@dataclass(frozen=True)
class TbcSystem:
    sets: ModeIndexSets
    h: float
    kappa0: float
    F1: np.ndarray
    G1: np.ndarray
    H1: np.ndarray
    F2: np.ndarray
    G2: np.ndarray
    H2: np.ndarray
    I1: np.ndarray
    I2: np.ndarray
    F3: np.ndarray
    G3: np.ndarray


def row_norms(m, n, a, b, zero_index):
    """int cos^2 sin^2-type normalization ab/4, doubled where the cosine index is 0."""
    return np.where(zero_index == 0, a * b / 2.0, a * b / 4.0)


def assemble_tbc(gram, a, b, h, sign="physical"):
    """Dense and sparse TBC blocks for grid spacing ``h`` from a :class:`GramTensor`."""
    if sign not in SIGNS:
        raise ValueError("sign must be one of %s" % sorted(SIGNS))
    if not (math.isclose(gram.a, a, rel_tol=1e-14) and math.isclose(gram.b, b, rel_tol=1e-14)):
        raise ValueError("Gram tensor was computed for a different aperture")
    s = SIGNS[sign]
    sets = ModeIndexSets(gram.M, gram.N)
    M, N = sets.M, sets.N
    kappa = gram.kappa0
    m1, n1 = sets.modes(1)
    m2, n2 = sets.modes(2)
    m3, n3 = sets.modes(3)
    pa, pb = math.pi / a, math.pi / b

    w1 = (h / row_norms(m1, n1, a, b, m1))[:, None]
    w2 = (h / row_norms(m2, n2, a, b, n2))[:, None]

    I1_11 = gram.I1[m1[:, None], n1[:, None], m1[None, :], n1[None, :]]
    I2_22 = gram.I2[m2[:, None], n2[:, None], m2[None, :], n2[None, :]]
    I3_11 = gram.I3[m1[:, None], n1[:, None], m1[None, :], n1[None, :]]
    I3_12 = gram.I3[m1[:, None], n1[:, None], m2[None, :], n2[None, :]]
    I3_22 = gram.I3[m2[:, None], n2[:, None], m2[None, :], n2[None, :]]
    I3_21 = gram.I3[m2[:, None], n2[:, None], m1[None, :], n1[None, :]]

    F1 = -s * w1 * 2.0 * kappa**2 * I1_11
    H1 = s * w1 * 2.0 * (n1[:, None] * pb) * (n1[None, :] * pb) * I3_11
    G1 = -s * w1 * 2.0 * (n1[:, None] * pb) * (m2[None, :] * pa) * I3_12
    F2 = -s * w2 * 2.0 * kappa**2 * I2_22
    G2 = s * w2 * 2.0 * (m2[:, None] * pa) * (m2[None, :] * pa) * I3_22
    H2 = -s * w2 * 2.0 * (m2[:, None] * pa) * (n1[None, :] * pb) * I3_21

    n1s, n2s, n3s = sets.sizes
    I1 = np.zeros((n1s, n3s))
    I2 = np.zeros((n2s, n3s))
    F3 = np.zeros((n3s, n1s))
    G3 = np.zeros((n3s, n2s))
    for col, (m, n) in enumerate(sets.set3):
        r1 = sets.flatten(1, (m, n))
        r2 = sets.flatten(2, (m, n))
        I1[r1, col] = m * math.pi * h / a
        I2[r2, col] = n * math.pi * h / b
        F3[col, r1] = m * math.pi * h / a
        G3[col, r2] = n * math.pi * h / b
    return TbcSystem(sets, h, kappa, F1, G1, H1, F2, G2, H2, I1, I2, F3, G3)


def _trig_exp_integral(kind, alpha, K, L):
    """int_0^L trig(k pi x / L) exp(i alpha x) dx for k = 0..K."""
    return trig_transform_1d(kind, np.array([-alpha / (2.0 * math.pi)]), K, L)[:, 0]


def incident_rhs(wave, sets, a, b, h):
    """Right-hand sides g1 (over set1) and g2 (over set2) for an incident plane wave."""
    al1, al2, beta = wave.alpha1, wave.alpha2, wave.beta
    p = wave.p
    m1, n1 = sets.modes(1)
    m2, n2 = sets.modes(2)
    cx = _trig_exp_integral("cos", al1, sets.M, a)
    sx = _trig_exp_integral("sin", al1, sets.M, a)
    cy = _trig_exp_integral("cos", al2, sets.N, b)
    sy = _trig_exp_integral("sin", al2, sets.N, b)
    g1 = (h / row_norms(m1, n1, a, b, m1)) * 2j * (al1 * p[2] + beta * p[0]) * cx[m1] * sy[n1]
    g2 = (h / row_norms(m2, n2, a, b, n2)) * 2j * (al2 * p[2] + beta * p[1]) * sx[m2] * cy[n2]
    return g1, g2
