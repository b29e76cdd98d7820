"""End-to-end solver: Gram tensor, TBC blocks, vertical elimination, aperture solve, RCS."""

from __future__ import annotations

import math
import time
from contextlib import contextmanager

import numpy as np

from . import gram_cache
from .config import build_incident_wave
from .farfield import backscatter_sweep
from .gram import default_quad_grid, trig_gram
from .interface import assemble_interface, factorize, residual
from .modes import index_sets
from .tbc import assemble_tbc, incident_rhs
from .vertical import dtn_tables_homogeneous, dtn_tables_layered, recover_interior

PHASES = ("singular", "assemble", "solve", "rcs")


class CavitySolver:
    """Solver for one :class:`CavityConfig`.

    The Gram tensor, TBC blocks, DtN tables and LU factors are built lazily
    and reused across incidence angles.  ``gram`` may be supplied to bypass
    the spectral evaluation (for instance with a reference tensor).
    """

    def __init__(self, config, gram=None, cache_dir=None, tbc_sign="physical", closure="balanced"):
        self.config = config
        self.sets = index_sets(config.M, config.N)
        self.quad_grid = config.quad_grid or default_quad_grid(config.M, config.N, config.kappa0,
                                                               config.a, config.b)
        self.cache_dir = cache_dir
        self.tbc_sign = tbc_sign
        self.closure = closure
        self.timings = {p: 0.0 for p in PHASES}
        self.cache_hit = False
        self._gram = gram
        self._tbc = None
        self._dtn = None
        self._system = None
        self._fac = None

    @contextmanager
    def _timed(self, phase):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[phase] += time.perf_counter() - t0

    @property
    def gram(self):
        if self._gram is None:
            with self._timed("singular"):
                self._gram = self._load_or_compute_gram()
        return self._gram

    def _load_or_compute_gram(self):
        c = self.config
        key = (c.M, c.N, c.kappa0, c.a, c.b, self.quad_grid, c.regime_threshold)
        path = gram_cache.cache_path(self.cache_dir, *key) if self.cache_dir else None
        if path is not None:
            cached = gram_cache.load_gram(path, *key)
            if cached is not None:
                self.cache_hit = True
                return cached
        g = trig_gram(c.M, c.N, c.kappa0, c.a, c.b, self.quad_grid, c.regime_threshold)
        if path is not None:
            gram_cache.save_gram(path, g)
        return g

    @property
    def h(self):
        return self.config.h

    @property
    def tbc(self):
        if self._tbc is None:
            g = self.gram
            with self._timed("assemble"):
                self._tbc = assemble_tbc(g, self.config.a, self.config.b, self.h, self.tbc_sign)
        return self._tbc

    @property
    def dtn(self):
        if self._dtn is None:
            c = self.config
            with self._timed("assemble"):
                if c.layered:
                    self._dtn = dtn_tables_layered(self.sets, c.a, c.b, c.depths, c.J, c.I_top, c.kappa0,
                                                   c.eps, self.closure)
                else:
                    self._dtn = dtn_tables_homogeneous(self.sets, c.a, c.b, c.depths[0], c.J, c.kappa0,
                                                       c.eps[0])
        return self._dtn

    @property
    def system(self):
        if self._system is None:
            tbc, dtn = self.tbc, self.dtn
            with self._timed("assemble"):
                self._system = assemble_interface(tbc, dtn)
        return self._system

    @property
    def factorization(self):
        if self._fac is None:
            system = self.system
            with self._timed("solve"):
                self._fac = factorize(system)
        return self._fac

    def rhs(self, wave):
        return incident_rhs(wave, self.sets, self.config.a, self.config.b, self.h)

    def solve(self, wave):
        """Aperture field for an :class:`IncidentWave`."""
        fac = self.factorization
        g1, g2 = self.rhs(wave)
        return fac.solve(g1, g2)

    def residual(self, wave, field):
        g1, g2 = self.rhs(wave)
        return residual(self.system, field, g1, g2)

    def interior(self, field):
        return recover_interior(field, self.dtn)

    def aperture_divergence(self, field):
        """d/dx3 of E3 at the aperture from the one-sided difference, over set3."""
        dtn = self.dtn
        e3_below = -field.coeff3 / dtn.r3
        return (field.coeff3 - e3_below) / self.h

    def wave(self, theta_deg, alpha_deg=None):
        c = self.config
        alpha = c.alpha_deg if alpha_deg is None else alpha_deg
        return build_incident_wave(math.radians(alpha), math.radians(theta_deg), math.radians(c.phi_deg),
                                   c.kappa0)

    def sweep(self, thetas_deg=None):
        """Backscatter samples over the configured (or given) incidence angles in degrees."""
        c = self.config
        thetas = c.thetas_deg if thetas_deg is None else thetas_deg
        self.factorization
        with self._timed("rcs"):
            return backscatter_sweep(self.solve, [math.radians(t) for t in thetas], math.radians(c.phi_deg),
                                     math.radians(c.alpha_deg), c.kappa0, c.a, c.b)

    def condition(self):
        return self.factorization.condition


def rcs_db_table(samples):
    """(tt, pp) dB arrays of a sweep."""
    return (np.array([s.rcs_tt_db for s in samples]), np.array([s.rcs_pp_db for s in samples]))
