"""Slow reference evaluation of the aperture Gram integrals.

Every Gram entry has the form

    int_G int_G phi(x) psi(y) g(|x - y|) dy dx,    g(r) = exp(i kappa r) / (4 pi r),

with separable mode products phi, psi on the rectangle G = [0,a] x [0,b].
Substituting u = x - y turns it into a single 2D integral over
[-a,a] x [-b,b] of g(|u|) C1(u1) C2(u2), where C1, C2 are 1D
cross-correlations of the mode factors.  Each quadrant of the u-rectangle is
split along its diagonal into two triangles and integrated in polar
coordinates centered at u = 0, where the Jacobian cancels the 1/r
singularity.  The correlations are smooth inside every quadrant, so tensor
Gauss-Legendre converges exponentially.

This path shares no code with the spectral evaluation in :mod:`gram`.
"""

from __future__ import annotations

import math

import numpy as np

from .gram import GramTensor

_FAMILIES = {
    # name: (x1 factor, x2 factor)
    "I1": ("cos", "sin"),
    "I2": ("sin", "cos"),
    "I3": ("cos", "cos"),
}


class OracleError(RuntimeError):
    pass


def _mode(kind, k, t, L):
    if kind == "cos":
        return np.cos(k * math.pi * t / L)
    return np.sin(k * math.pi * t / L)


def correlation(kind, K, u, L, nodes=48):
    """C[m, k, i] = int phi_m(y + u_i) phi_k(y) dy over the overlap of [0, L] and [-u_i, L - u_i]."""
    u = np.asarray(u, dtype=float)
    x, w = np.polynomial.legendre.leggauss(nodes)
    lo = np.maximum(0.0, -u)
    hi = np.minimum(L, L - u)
    half = 0.5 * (hi - lo)
    y = 0.5 * (hi + lo)[:, None] + half[:, None] * x[None, :]
    wy = half[:, None] * w[None, :]
    ks = np.arange(K + 1)
    shifted = _mode(kind, ks[:, None, None], y[None] + u[None, :, None], L)
    base = _mode(kind, ks[:, None, None], y[None], L) * wy[None]
    return np.einsum("mij,kij->mki", shifted, base)


def _polar_rule(A, B, n_theta, n_r):
    """Nodes and weights on [0,A] x [0,B] in polar form, r-weight included."""
    xt, wt = np.polynomial.legendre.leggauss(n_theta)
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    s = 0.5 * (xr + 1.0)
    ws = 0.5 * wr
    split = math.atan2(B, A)
    pts_r, pts_t, wts = [], [], []
    for t0, t1, edge in ((0.0, split, "A"), (split, 0.5 * math.pi, "B")):
        th = 0.5 * (t1 + t0) + 0.5 * (t1 - t0) * xt
        wth = 0.5 * (t1 - t0) * wt
        rmax = A / np.cos(th) if edge == "A" else B / np.sin(th)
        r = rmax[:, None] * s[None, :]
        # polar Jacobian r dr dtheta; the 1/r of the kernel is applied later
        w = wth[:, None] * rmax[:, None] * ws[None, :] * r
        pts_r.append(r.ravel())
        pts_t.append(np.repeat(th, n_r))
        wts.append(w.ravel())
    return np.concatenate(pts_r), np.concatenate(pts_t), np.concatenate(wts)


def _family_values(M, N, kappa, a, b, n_theta, n_r, corr_nodes):
    r, th, w = _polar_rule(a, b, n_theta, n_r)
    # kernel times polar Jacobian; r > 0 at every Gauss node
    kw = w * np.exp(1j * kappa * r) / (4.0 * math.pi * r)
    out = {}
    for name, (k1, k2) in _FAMILIES.items():
        total = np.zeros((M + 1, N + 1, M + 1, N + 1), dtype=complex)
        for s1 in (1.0, -1.0):
            c1 = correlation(k1, M, s1 * r * np.cos(th), a, corr_nodes)
            for s2 in (1.0, -1.0):
                c2 = correlation(k2, N, s2 * r * np.sin(th), b, corr_nodes)
                total += np.einsum("mki,nli,i->mnkl", c1, c2, kw)
        out[name] = total
    return out


def oracle_gram(M, N, kappa0, a, b, tol=1e-9, start=32, max_nodes=160):
    """Reference Gram tensor computed by desingularized polar quadrature.

    The rule is refined until two successive levels agree to ``tol`` relative
    to the largest entry; :class:`OracleError` is raised if ``max_nodes`` per
    direction is reached first.
    """
    if M > 8 or N > 8:
        raise ValueError("oracle_gram is meant for small truncations (M, N <= 8)")
    corr_nodes = 2 * max(M, N) + 24
    n = start
    prev = _family_values(M, N, kappa0, a, b, n, n, corr_nodes)
    while True:
        n2 = n + 16
        if n2 > max_nodes:
            raise OracleError("oracle quadrature did not reach tol=%g within %d nodes" % (tol, max_nodes))
        cur = _family_values(M, N, kappa0, a, b, n2, n2, corr_nodes)
        scale = max(np.max(np.abs(v)) for v in cur.values())
        diff = max(np.max(np.abs(cur[k] - prev[k])) for k in cur)
        if diff <= tol * scale:
            break
        prev, n = cur, n2
    return GramTensor(I1=cur["I1"], I2=cur["I2"], I3=cur["I3"], kappa0=kappa0, a=a, b=b,
                      quad_grid=0, regime_threshold=0)


def electrostatic_unit_square():
    """Closed form of int int 1/|x - y| over the unit square squared."""
    s = math.sqrt(2.0)
    return 4.0 * math.log(1.0 + s) - 4.0 / 3.0 * (s - 1.0)
