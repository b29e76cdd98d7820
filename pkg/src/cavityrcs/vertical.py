"""Per-mode vertical elimination inside the cavity.

Each Fourier mode of each field component satisfies the 1D Helmholtz equation
E'' + (kappa^2 - (m pi/a)^2 - (n pi/b)^2) E = 0 in x3, discretized on a
uniform grid with the three-point stencil

    E_{j-1} + (d - 2) E_j + E_{j+1} = 0,    d = h^2 (kappa^2 - (m pi/a)^2 - (n pi/b)^2).

E1 and E2 vanish on the cavity floor (first diagonal entry -2); E3 has a
zero normal derivative there (first entry -1).  Eliminating downward with the
Thomas algorithm leaves a single relation between the two topmost values,

    r_J E_J + E_{J+1} = 0,

where r_J is the last pivot.  The pivots are kept so that the interior can be
recovered by back-substitution once the aperture values are known.

For a two-layer filling the bottom layer is eliminated first; its last pivots
enter the first diagonal entry of the top layer through the interface
conditions, and E3 couples into the E1/E2 chains with a strength proportional
to eps_top/eps_bottom - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modes import ModeIndexSets, VolumeField

RESONANCE_TOL = 1e-12

DIRICHLET = -2.0
NEUMANN = -1.0

CLOSURES = ("balanced", "one_sided")


class ResonanceError(ArithmeticError):
    """A vertical elimination pivot vanished: the mode is (numerically) resonant."""

    def __init__(self, mode, step, value):
        super().__init__("near-zero pivot %.3e at step %d for mode (m, n) = %s" % (abs(value), step, mode))
        self.mode = mode


def mode_coefficient(m, n, a, b, kappa_sq, h):
    """Scaled vertical coefficient d = h^2 (kappa^2 - (m pi/a)^2 - (n pi/b)^2)."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    return h * h * (kappa_sq - (m * math.pi / a) ** 2 - (n * math.pi / b) ** 2)


@dataclass(frozen=True)
class TridiagChain:
    """Forward-sweep pivots of a family of tridiagonal systems (one column per mode).

    System i (a column) is tridiag(1, -2 + d_i, 1) of size J with first
    diagonal entry ``first_i + d_i``.  ``pivots[j, i]`` is the j-th pivot.
    """

    pivots: np.ndarray
    modes: tuple

    @property
    def last(self):
        return self.pivots[-1]

    @property
    def size(self):
        return self.pivots.shape[0]

    def log_product(self, upto=None):
        """Sum of complex logs of the first ``upto`` pivots (all by default)."""
        p = self.pivots if upto is None else self.pivots[:upto]
        return np.sum(np.log(p.astype(complex)), axis=0)

    def solve(self, top, first_rhs=None):
        """Solve T x = (b1, 0, ..., 0, -top) for every column; returns x of shape (J, modes)."""
        r = self.pivots
        J = r.shape[0]
        top = np.asarray(top, dtype=complex)
        x = np.empty(r.shape, dtype=complex)
        if first_rhs is None:
            # forward substitution leaves only the last entry nonzero
            x[-1] = -top / r[-1]
            for j in range(J - 2, -1, -1):
                x[j] = -x[j + 1] / r[j]
            return x
        y = np.empty(r.shape, dtype=complex)
        y[0] = first_rhs
        for j in range(1, J):
            y[j] = -y[j - 1] / r[j - 1]
        y[-1] = y[-1] - top
        x[-1] = y[-1] / r[-1]
        for j in range(J - 2, -1, -1):
            x[j] = (y[j] - x[j + 1]) / r[j]
        return x


def tridiag_lu_lastpivot(first, d, J, modes=None):
    """Thomas forward sweep of tridiag(1, -2 + d, 1) with first diagonal ``first + d``.

    ``first`` is ``DIRICHLET`` (-2), ``NEUMANN`` (-1) or an array of modified
    entries.  Returns a :class:`TridiagChain`; raises :class:`ResonanceError`
    when a pivot falls below ``RESONANCE_TOL`` relative to the largest one.
    """
    if J < 1:
        raise ValueError("J must be at least 1")
    d = np.atleast_1d(np.asarray(d, dtype=complex))
    first = np.broadcast_to(np.asarray(first, dtype=complex), d.shape)
    piv = np.empty((J,) + d.shape, dtype=complex)
    piv[0] = first + d
    diag = -2.0 + d
    for j in range(1, J):
        piv[j] = diag - 1.0 / piv[j - 1]
    scale = np.max(np.abs(piv), axis=0)
    bad = np.abs(piv) < RESONANCE_TOL * scale
    if np.any(bad):
        j, i = np.argwhere(bad)[0]
        mode = modes[i] if modes is not None else i
        raise ResonanceError(mode, int(j) + 1, piv[j, i])
    return TridiagChain(piv, tuple(modes) if modes is not None else tuple(range(d.size)))


@dataclass(frozen=True)
class DtnTable:
    """Last pivots of the aperture-adjacent chains and the layered couplings.

    ``r1``, ``r2``, ``r3`` are last pivots over set1, set2, set3 of the chains
    ending at the aperture.  ``s1`` (over set1) and ``s2`` (over set2) are the
    E3-to-E1/E2 couplings of a two-layer filling; they are zero otherwise.
    """

    sets: ModeIndexSets
    h: float
    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    chains: tuple                  # aperture-side chains for set1, set2, set3
    layered: bool = False
    bottom_chains: tuple = ()
    interface: dict | None = None  # tau1, tau2, gamma, c1, c2, eps_ratio, I_top

    def coupling_blocks(self):
        """Diagonal couplings as (set1 x set3) and (set2 x set3) matrices."""
        s = self.sets
        D1 = np.zeros((s.sizes[0], s.sizes[2]), dtype=complex)
        D2 = np.zeros((s.sizes[1], s.sizes[2]), dtype=complex)
        for col, mode in enumerate(s.set3):
            D1[s.flatten(1, mode), col] = self.s1[s.flatten(1, mode)]
            D2[s.flatten(2, mode), col] = self.s2[s.flatten(2, mode)]
        return D1, D2


def _set_coefficients(sets, a, b, kappa_sq, h):
    out = []
    for which in (1, 2, 3):
        m, n = sets.modes(which)
        out.append(mode_coefficient(m, n, a, b, kappa_sq, h))
    return out


def dtn_tables_homogeneous(sets, a, b, depth, J, kappa0, eps=1.0):
    """DtN table for a cavity of the given depth filled with one medium."""
    h = depth / (J + 1)
    d1, d2, d3 = _set_coefficients(sets, a, b, kappa0**2 * complex(eps), h)
    c1 = tridiag_lu_lastpivot(DIRICHLET, d1, J, sets.set1)
    c2 = tridiag_lu_lastpivot(DIRICHLET, d2, J, sets.set2)
    c3 = tridiag_lu_lastpivot(NEUMANN, d3, J, sets.set3)
    z1 = np.zeros(sets.sizes[0], dtype=complex)
    z2 = np.zeros(sets.sizes[1], dtype=complex)
    return DtnTable(sets, h, c1.last, c2.last, c3.last, z1, z2, (c1, c2, c3))


def dtn_tables_layered(sets, a, b, depths, J, I_top, kappa0, eps, closure="balanced"):
    """DtN table for a two-layer filling; ``depths`` and ``eps`` list the top layer first.

    ``closure="balanced"`` adds the half-cell curvature terms to the one-sided
    interface differences so that equal permittivities reproduce the
    homogeneous stencil exactly; ``closure="one_sided"`` uses the plain
    first-order differences.
    """
    if closure not in CLOSURES:
        raise ValueError("closure must be one of %s" % (CLOSURES,))
    c_top, c_bottom = depths
    eps_top, eps_bottom = (complex(e) for e in eps)
    h = c_bottom / (J + 1)
    h_top = c_top / (I_top + 1)
    if abs(h - h_top) > 1e-12 * max(h, h_top):
        raise ValueError("layer grids are not aligned: %r vs %r" % (h, h_top))
    e = eps_top / eps_bottom
    dt = _set_coefficients(sets, a, b, kappa0**2 * eps_top, h)
    db = _set_coefficients(sets, a, b, kappa0**2 * eps_bottom, h)
    bottom = (tridiag_lu_lastpivot(DIRICHLET, db[0], J, sets.set1),
              tridiag_lu_lastpivot(DIRICHLET, db[1], J, sets.set2),
              tridiag_lu_lastpivot(NEUMANN, db[2], J, sets.set3))
    half = 0.5 if closure == "balanced" else 0.0

    tau1 = 2.0 + 1.0 / bottom[0].last - half * (dt[0] + db[0])
    tau2 = 2.0 + 1.0 / bottom[1].last - half * (dt[1] + db[1])
    gamma = 1.0 + e * (1.0 + 1.0 / bottom[2].last) - half * (dt[2] + e * db[2])
    top = (tridiag_lu_lastpivot(1.0 / tau1 - 2.0, dt[0], I_top, sets.set1),
           tridiag_lu_lastpivot(1.0 / tau2 - 2.0, dt[1], I_top, sets.set2),
           tridiag_lu_lastpivot(1.0 / gamma - 2.0, dt[2], I_top, sets.set3))

    # E3 chain: u3_0 = u3_1 / gamma and u3_1 = (-1)^I u3_{I+1} / prod(r4)
    log_r4 = top[2].log_product()
    m1, n1 = sets.modes(1)
    m2, n2 = sets.modes(2)
    idx1 = np.array([sets.flatten(3, md) if md[0] >= 1 else -1 for md in sets.set1])
    idx2 = np.array([sets.flatten(3, md) if md[1] >= 1 else -1 for md in sets.set2])
    cpl1 = (e - 1.0) * (m1 * math.pi * h / a) / tau1
    cpl2 = (e - 1.0) * (n2 * math.pi * h / b) / tau2
    s1 = _coupling(cpl1, idx1, gamma, log_r4, top[0])
    s2 = _coupling(cpl2, idx2, gamma, log_r4, top[1])
    info = {"tau1": tau1, "tau2": tau2, "gamma": gamma, "cpl1": cpl1, "cpl2": cpl2,
            "idx1": idx1, "idx2": idx2, "eps_ratio": e, "I_top": I_top, "J": J}
    return DtnTable(sets, h, top[0].last, top[1].last, top[2].last, s1, s2, top,
                    layered=True, bottom_chains=bottom, interface=info)


def _coupling(cpl, idx, gamma, log_r4, chain):
    """s = cpl / (gamma prod_{i<I} r3_i prod_{i<=I} r4_i), evaluated in log form."""
    out = np.zeros(cpl.shape, dtype=complex)
    ok = (idx >= 0) & (cpl != 0)
    if not np.any(ok):
        return out
    log_r3 = chain.log_product(chain.size - 1)
    logs = log_r3[ok] + log_r4[idx[ok]] + np.log(gamma[idx[ok]])
    out[ok] = cpl[ok] * np.exp(-logs)
    return out


def recover_interior(aperture, dtn):
    """Back-substitute every mode from its aperture value down to the cavity floor.

    Returns a :class:`VolumeField` for a homogeneous filling, or a pair
    ``(top, bottom)`` of volume fields for two layers.  Grid heights run from
    the layer bottom (index 0) to its top.
    """
    sets = aperture.sets
    h = dtn.h
    tops = (aperture.coeff1, aperture.coeff2, aperture.coeff3)
    if not dtn.layered:
        J = dtn.chains[0].size
        x3 = -h * (J + 1) + h * np.arange(J + 2)
        cols = []
        for chain, top, floor in zip(dtn.chains, tops, ("dirichlet", "dirichlet", "neumann")):
            inner = chain.solve(top)
            bottom = np.zeros_like(top) if floor == "dirichlet" else inner[0]
            cols.append(np.vstack([bottom[None], inner, top[None]]).T)
        return VolumeField(sets, x3, *cols)

    info = dtn.interface
    I_top, J, e = info["I_top"], info["J"], info["eps_ratio"]
    u3 = dtn.chains[2].solve(aperture.coeff3)
    u3_0 = u3[0] / info["gamma"]
    top_cols = []
    interface_vals = []
    for k, (cpl, idx, tau) in enumerate(((info["cpl1"], info["idx1"], info["tau1"]),
                                         (info["cpl2"], info["idx2"], info["tau2"]))):
        src = np.where(idx >= 0, u3_0[np.maximum(idx, 0)], 0.0)
        rhs_first = -cpl * src
        inner = dtn.chains[k].solve(tops[k], first_rhs=rhs_first)
        u0 = inner[0] / tau + cpl * src
        interface_vals.append(u0)
        top_cols.append(np.vstack([u0[None], inner, tops[k][None]]).T)
    top_cols.append(np.vstack([u3_0[None], u3, aperture.coeff3[None]]).T)
    x3_top = -h * (I_top + 1) + h * np.arange(I_top + 2)

    bottom_tops = (interface_vals[0], interface_vals[1], e * u3_0)
    bottom_cols = []
    for chain, top, floor in zip(dtn.bottom_chains, bottom_tops, ("dirichlet", "dirichlet", "neumann")):
        inner = chain.solve(top)
        floor_val = np.zeros_like(top) if floor == "dirichlet" else inner[0]
        bottom_cols.append(np.vstack([floor_val[None], inner, top[None]]).T)
    c_top = h * (I_top + 1)
    x3_bottom = -c_top - h * (J + 1) + h * np.arange(J + 2)
    return VolumeField(sets, x3_top, *top_cols), VolumeField(sets, x3_bottom, *bottom_cols)
