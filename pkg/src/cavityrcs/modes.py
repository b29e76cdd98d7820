"""Truncated mode index sets, flattened orderings and field synthesis.

Tangential and normal aperture components expand as

    E1 = sum cos(m pi x1 / a) sin(n pi x2 / b),   (m, n) in set1 = {0..M} x {1..N}
    E2 = sum sin(m pi x1 / a) cos(n pi x2 / b),   (m, n) in set2 = {1..M} x {0..N}
    E3 = sum sin(m pi x1 / a) sin(n pi x2 / b),   (m, n) in set3 = {1..M} x {1..N}

Flattened vectors list modes with m as the outer (slow) index and n inner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModeIndexSets:
    M: int
    N: int

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be at least 1")

    @property
    def set1(self):
        return [(m, n) for m in range(self.M + 1) for n in range(1, self.N + 1)]

    @property
    def set2(self):
        return [(m, n) for m in range(1, self.M + 1) for n in range(self.N + 1)]

    @property
    def set3(self):
        return [(m, n) for m in range(1, self.M + 1) for n in range(1, self.N + 1)]

    @property
    def sizes(self):
        return ((self.M + 1) * self.N, self.M * (self.N + 1), self.M * self.N)

    @property
    def order(self):
        return sum(self.sizes)

    def modes(self, which):
        """Arrays (m, n) of mode numbers for set 1, 2 or 3 in flattened order."""
        pairs = np.array(getattr(self, "set%d" % which))
        return pairs[:, 0], pairs[:, 1]

    def flatten(self, which, mode):
        m, n = mode
        if which == 1 and 0 <= m <= self.M and 1 <= n <= self.N:
            return m * self.N + (n - 1)
        if which == 2 and 1 <= m <= self.M and 0 <= n <= self.N:
            return (m - 1) * (self.N + 1) + n
        if which == 3 and 1 <= m <= self.M and 1 <= n <= self.N:
            return (m - 1) * self.N + (n - 1)
        raise IndexError("mode %r not in set%s" % (mode, which))

    def unflatten(self, which, index):
        size = self.sizes[which - 1]
        if not 0 <= index < size:
            raise IndexError("index %d out of range for set%d" % (index, which))
        if which == 1:
            return divmod(index, self.N)[0], index % self.N + 1
        if which == 2:
            return index // (self.N + 1) + 1, index % (self.N + 1)
        return index // self.N + 1, index % self.N + 1


def index_sets(M, N):
    return ModeIndexSets(int(M), int(N))


@dataclass(frozen=True)
class ApertureField:
    """Modal coefficients of (E1, E2, E3) on the aperture plane."""

    sets: ModeIndexSets
    coeff1: np.ndarray
    coeff2: np.ndarray
    coeff3: np.ndarray

    def __post_init__(self):
        for arr, size, name in zip((self.coeff1, self.coeff2, self.coeff3), self.sets.sizes,
                                   ("coeff1", "coeff2", "coeff3")):
            if np.shape(arr) != (size,):
                raise ValueError("%s has shape %r, expected (%d,)" % (name, np.shape(arr), size))

    @classmethod
    def from_vector(cls, sets, x):
        n1, n2, _ = sets.sizes
        x = np.asarray(x, dtype=complex)
        return cls(sets, x[:n1].copy(), x[n1:n1 + n2].copy(), x[n1 + n2:].copy())

    def vector(self):
        return np.concatenate([self.coeff1, self.coeff2, self.coeff3])


@dataclass(frozen=True)
class VolumeField:
    """Vertical profiles of every mode on one layer's grid.

    ``E1[i, j]`` is the coefficient of set1 mode ``i`` at height ``x3[j]``,
    with ``x3`` increasing from the layer bottom to its top.
    """

    sets: ModeIndexSets
    x3: np.ndarray
    E1: np.ndarray
    E2: np.ndarray
    E3: np.ndarray


def synthesize_aperture(field, x1, x2, a, b):
    """Evaluate (E1, E2, E3) at the aperture point (x1, x2) from the truncated series."""
    tol = 1e-12 * max(a, b)
    if not (-tol <= x1 <= a + tol and -tol <= x2 <= b + tol):
        raise ValueError("point (%r, %r) lies outside the aperture" % (x1, x2))
    s = field.sets
    out = []
    for which, coeff, (f1, f2) in ((1, field.coeff1, (np.cos, np.sin)),
                                   (2, field.coeff2, (np.sin, np.cos)),
                                   (3, field.coeff3, (np.sin, np.sin))):
        m, n = s.modes(which)
        out.append(np.sum(coeff * f1(m * math.pi * x1 / a) * f2(n * math.pi * x2 / b)))
    return np.array(out, dtype=complex)


def aperture_divergence(field, dE3_dx3, a, b):
    """Per-mode divergence -(m pi/a) E1 - (n pi/b) E2 + dE3/dx3 over set3."""
    s = field.sets
    m, n = s.modes(3)
    e1 = field.coeff1[[s.flatten(1, (mi, ni)) for mi, ni in zip(m, n)]]
    e2 = field.coeff2[[s.flatten(2, (mi, ni)) for mi, ni in zip(m, n)]]
    return -(m * math.pi / a) * e1 - (n * math.pi / b) * e2 + np.asarray(dE3_dx3)


def discrete_divergence_residual(field, dE3_dx3, a, b, relative=False):
    """Max-norm of :func:`aperture_divergence`; optionally relative to the largest term."""
    r = aperture_divergence(field, dE3_dx3, a, b)
    res = float(np.max(np.abs(r))) if r.size else 0.0
    if not relative:
        return res
    s = field.sets
    m, n = s.modes(3)
    e1 = field.coeff1[[s.flatten(1, (mi, ni)) for mi, ni in zip(m, n)]]
    e2 = field.coeff2[[s.flatten(2, (mi, ni)) for mi, ni in zip(m, n)]]
    scale = max(np.max(np.abs(m * math.pi / a * e1)), np.max(np.abs(n * math.pi / b * e2)),
                np.max(np.abs(dE3_dx3)))
    return res / scale if scale > 0 else res
