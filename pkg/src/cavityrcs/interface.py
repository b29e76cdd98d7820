"""Aperture-only block system and its dense direct solve.

Substituting the vertical relation E_J = -r^-1 E_{J+1} (and, for two
layers, the E3 couplings) into the TBC rows leaves a square system in the
aperture coefficients alone, of order 3MN + M + N:

    [-I - R1^-1 - F1 - H1,   -G1,                 I1 + R1^-1 D1] [E1]   [g1]
    [-H2,                    -I - R2^-1 - F2 - G2, I2 + R2^-1 D2] [E2] = [g2]
    [F3,                     G3,                  -I - R3^-1   ] [E3]   [0 ]

D1 and D2 vanish for a homogeneous filling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.linalg import lapack

from .modes import ApertureField, ModeIndexSets

SINGULAR_TOL = 1e-14


class SingularSystemError(np.linalg.LinAlgError):
    """The aperture system is numerically singular."""


@dataclass(frozen=True)
class InterfaceSystem:
    sets: ModeIndexSets
    matrix: np.ndarray

    @property
    def order(self):
        return self.matrix.shape[0]

    def blocks(self):
        """Slices of the three block rows/columns."""
        n1, n2, n3 = self.sets.sizes
        return slice(0, n1), slice(n1, n1 + n2), slice(n1 + n2, n1 + n2 + n3)


def assemble_interface(tbc, dtn):
    """Dense aperture system from TBC blocks and a DtN table."""
    sets = tbc.sets
    if sets != dtn.sets:
        raise ValueError("TBC and DtN tables use different truncations")
    n1, n2, n3 = sets.sizes
    A = np.zeros((n1 + n2 + n3,) * 2, dtype=complex)
    s1, s2, s3 = slice(0, n1), slice(n1, n1 + n2), slice(n1 + n2, n1 + n2 + n3)
    inv1, inv2, inv3 = 1.0 / dtn.r1, 1.0 / dtn.r2, 1.0 / dtn.r3

    A[s1, s1] = -tbc.F1 - tbc.H1 - np.diag(1.0 + inv1)
    A[s1, s2] = -tbc.G1
    A[s1, s3] = tbc.I1
    A[s2, s1] = -tbc.H2
    A[s2, s2] = -tbc.F2 - tbc.G2 - np.diag(1.0 + inv2)
    A[s2, s3] = tbc.I2
    A[s3, s1] = tbc.F3
    A[s3, s2] = tbc.G3
    A[s3, s3] = -np.diag(1.0 + inv3)
    if dtn.layered:
        D1, D2 = dtn.coupling_blocks()
        A[s1, s3] += inv1[:, None] * D1
        A[s2, s3] += inv2[:, None] * D2
    return InterfaceSystem(sets, A)


@dataclass(frozen=True)
class Factorization:
    """LU factors of an interface matrix, reusable across right-hand sides."""

    sets: ModeIndexSets
    lu: np.ndarray
    piv: np.ndarray
    condition: float
    norm1: float

    def solve(self, g1, g2):
        rhs = np.concatenate([g1, g2, np.zeros(self.sets.sizes[2], dtype=complex)])
        x = linalg.lu_solve((self.lu, self.piv), rhs)
        return ApertureField.from_vector(self.sets, x)


def factorize(system):
    """Dense LU with partial pivoting plus a 1-norm condition estimate."""
    A = system.matrix
    norm1 = float(np.max(np.sum(np.abs(A), axis=0)))
    lu, piv = linalg.lu_factor(A, check_finite=True)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if not smallest > SINGULAR_TOL * norm1:
        raise SingularSystemError("aperture system is numerically singular (min pivot %.3e, norm %.3e)"
                                  % (smallest, norm1))
    rcond, info = lapack.zgecon(lu, norm1, norm="1")
    cond = 1.0 / rcond if info == 0 and rcond > 0 else np.inf
    return Factorization(system.sets, lu, piv, float(cond), norm1)


def solve_aperture(system, g1, g2, factorization=None):
    """Solve the interface system for the aperture field; returns (field, factorization)."""
    fac = factorization if factorization is not None else factorize(system)
    return fac.solve(g1, g2), fac


def residual(system, field, g1, g2):
    """Relative residual ||A x - b|| / ||b|| of a solved field."""
    rhs = np.concatenate([g1, g2, np.zeros(system.sets.sizes[2], dtype=complex)])
    r = system.matrix @ field.vector() - rhs
    nb = np.linalg.norm(rhs)
    return float(np.linalg.norm(r) / nb) if nb > 0 else float(np.linalg.norm(r))
