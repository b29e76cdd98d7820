"""Solver inputs: cavity geometry, media, incident wave and truncation parameters.

Configs are flat ``key = value`` text files (``#`` starts a comment).  Length
values may carry a ``lambda`` suffix, e.g. ``a = 10 lambda``, and are resolved
against the free-space wavelength 2 pi / kappa0.

Recognized keys::

    a, b                          aperture extents
    c | c1, c2                    depth (homogeneous) or top/bottom layer depths
    eps_re_1, eps_im_1            relative permittivity of the (top) layer
    eps_re_2, eps_im_2            bottom layer permittivity (layered only)
    kappa0 | wavelength           free-space wavenumber or wavelength
    M, N, J                       mode truncation and vertical grid parameter
    I_top                         top-layer grid parameter (layered only)
    alpha_deg, phi_deg            polarization and azimuthal angles (default 0)
    theta_deg | theta_start_deg, theta_end_deg, theta_step_deg
    quad_grid, regime_threshold   spectral grid size and Bessel regime switch
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

LENGTH_KEYS = ("a", "b", "c", "c1", "c2", "wavelength")
INT_KEYS = ("M", "N", "J", "I_top", "quad_grid", "regime_threshold")
FLOAT_KEYS = ("eps_re_1", "eps_im_1", "eps_re_2", "eps_im_2", "kappa0", "alpha_deg", "phi_deg",
              "theta_deg", "theta_start_deg", "theta_end_deg", "theta_step_deg")
KNOWN_KEYS = frozenset(LENGTH_KEYS + INT_KEYS + FLOAT_KEYS)

ALIGN_TOL = 1e-12

_LAMBDA = re.compile(r"^\s*(?P<num>[^\s*]+)\s*\*?\s*(lambda|λ)\s*$", re.IGNORECASE)


class ConfigError(ValueError):
    """Invalid or incomplete solver configuration."""

    def __init__(self, key, message):
        super().__init__("%s: %s" % (key, message))
        self.key = key


@dataclass(frozen=True)
class CavityConfig:
    a: float
    b: float
    depths: tuple          # (c,) or (c1, c2), top layer first
    eps: tuple             # complex relative permittivities, top layer first
    kappa0: float
    M: int
    N: int
    J: int
    I_top: int | None = None
    alpha_deg: float = 0.0
    phi_deg: float = 0.0
    theta_deg: float | None = 0.0
    theta_range: tuple | None = None   # (start, end, step) in degrees, end excluded
    quad_grid: int | None = None
    regime_threshold: int = 10

    @property
    def layered(self):
        return len(self.depths) == 2

    @property
    def depth(self):
        return float(sum(self.depths))

    @property
    def wavelength(self):
        return 2.0 * math.pi / self.kappa0

    @property
    def h(self):
        """Vertical grid spacing, shared by both layers in the layered case."""
        return self.depths[-1] / (self.J + 1)

    @property
    def thetas_deg(self):
        if self.theta_range is None:
            return (self.theta_deg,)
        start, end, step = self.theta_range
        count = int(math.floor((end - start) / step + 1e-9))
        if start + count * step < end - 1e-9 * abs(step):
            count += 1
        return tuple(start + i * step for i in range(count))

    def to_text(self):
        """Serialize to the key-value format; ``parse_config`` inverts it exactly."""
        lines = ["a = %r" % self.a, "b = %r" % self.b]
        if self.layered:
            lines += ["c1 = %r" % self.depths[0], "c2 = %r" % self.depths[1]]
        else:
            lines.append("c = %r" % self.depths[0])
        for i, e in enumerate(self.eps, start=1):
            lines += ["eps_re_%d = %r" % (i, complex(e).real), "eps_im_%d = %r" % (i, complex(e).imag)]
        lines += ["kappa0 = %r" % self.kappa0, "M = %d" % self.M, "N = %d" % self.N, "J = %d" % self.J]
        if self.I_top is not None:
            lines.append("I_top = %d" % self.I_top)
        lines += ["alpha_deg = %r" % self.alpha_deg, "phi_deg = %r" % self.phi_deg]
        if self.theta_range is None:
            lines.append("theta_deg = %r" % self.theta_deg)
        else:
            start, end, step = self.theta_range
            lines += ["theta_start_deg = %r" % start, "theta_end_deg = %r" % end,
                      "theta_step_deg = %r" % step]
        if self.quad_grid is not None:
            lines.append("quad_grid = %d" % self.quad_grid)
        lines.append("regime_threshold = %d" % self.regime_threshold)
        return "\n".join(lines) + "\n"


def _split_lines(text):
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("line %d" % lineno, "expected 'key = value', got %r" % raw.strip())
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(key, "unknown key")
        if key in entries:
            raise ConfigError(key, "duplicate key")
        entries[key] = value
    return entries


def _number(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(key, "not a number: %r" % text) from None


def _integer(key, text):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(key, "not an integer: %r" % text) from None
    if not value.is_integer():
        raise ConfigError(key, "not an integer: %r" % text)
    return int(value)


def _length(key, text, wavelength):
    m = _LAMBDA.match(text)
    if m is None:
        return _number(key, text)
    if wavelength is None:
        raise ConfigError(key, "lambda units need kappa0 or a plain wavelength")
    return _number(key, m.group("num")) * wavelength


def _require(entries, key):
    if key not in entries:
        raise ConfigError(key, "missing required key")
    return entries[key]


def parse_config(text):
    """Parse and validate a key-value config document into a :class:`CavityConfig`."""
    e = _split_lines(text)

    if ("kappa0" in e) == ("wavelength" in e):
        raise ConfigError("kappa0", "exactly one of kappa0 or wavelength is required")
    if "kappa0" in e:
        kappa0 = _number("kappa0", e["kappa0"])
        if not kappa0 > 0:
            raise ConfigError("kappa0", "kappa0 must be positive")
    else:
        if _LAMBDA.match(e["wavelength"]):
            raise ConfigError("wavelength", "wavelength cannot be given in lambda units")
        wl = _number("wavelength", e["wavelength"])
        if not wl > 0:
            raise ConfigError("wavelength", "wavelength must be positive")
        kappa0 = 2.0 * math.pi / wl
    wavelength = 2.0 * math.pi / kappa0

    a = _length("a", _require(e, "a"), wavelength)
    b = _length("b", _require(e, "b"), wavelength)
    if "c" in e:
        if "c1" in e or "c2" in e:
            raise ConfigError("c", "give either c or (c1, c2), not both")
        depths = (_length("c", e["c"], wavelength),)
    elif "c1" in e or "c2" in e:
        depths = (_length("c1", _require(e, "c1"), wavelength), _length("c2", _require(e, "c2"), wavelength))
    else:
        raise ConfigError("c", "missing required key (or c1, c2)")

    eps = [complex(_number("eps_re_1", _require(e, "eps_re_1")), _number("eps_im_1", _require(e, "eps_im_1")))]
    if len(depths) == 2:
        eps.append(complex(_number("eps_re_2", _require(e, "eps_re_2")),
                           _number("eps_im_2", _require(e, "eps_im_2"))))
    else:
        for key in ("eps_re_2", "eps_im_2", "I_top"):
            if key in e:
                raise ConfigError(key, "only valid for a two-layer cavity (c1, c2)")

    M = _integer("M", _require(e, "M"))
    N = _integer("N", _require(e, "N"))
    J = _integer("J", _require(e, "J"))
    I_top = _integer("I_top", _require(e, "I_top")) if len(depths) == 2 else None

    if "theta_deg" in e:
        for key in ("theta_start_deg", "theta_end_deg", "theta_step_deg"):
            if key in e:
                raise ConfigError(key, "give either theta_deg or a theta sweep, not both")
        theta_deg = _number("theta_deg", e["theta_deg"])
        theta_range = None
    elif any(k in e for k in ("theta_start_deg", "theta_end_deg", "theta_step_deg")):
        theta_range = tuple(_number(k, _require(e, k)) for k in ("theta_start_deg", "theta_end_deg", "theta_step_deg"))
        theta_deg = None
    else:
        raise ConfigError("theta_deg", "missing required key (or theta_start_deg/theta_end_deg/theta_step_deg)")

    cfg = CavityConfig(
        a=a, b=b, depths=depths, eps=tuple(eps), kappa0=kappa0, M=M, N=N, J=J, I_top=I_top,
        alpha_deg=_number("alpha_deg", e.get("alpha_deg", "0")),
        phi_deg=_number("phi_deg", e.get("phi_deg", "0")),
        theta_deg=theta_deg, theta_range=theta_range,
        quad_grid=_integer("quad_grid", e["quad_grid"]) if "quad_grid" in e else None,
        regime_threshold=_integer("regime_threshold", e.get("regime_threshold", "10")),
    )
    validate(cfg)
    return cfg


def validate(cfg):
    """Check every invariant of a config; raises :class:`ConfigError`."""
    for key in ("a", "b"):
        v = getattr(cfg, key)
        if not (np.isfinite(v) and v > 0):
            raise ConfigError(key, "%s must be positive" % key)
    names = ("c1", "c2") if len(cfg.depths) == 2 else ("c",)
    if len(cfg.depths) not in (1, 2):
        raise ConfigError("c", "one or two layers are supported")
    for name, v in zip(names, cfg.depths):
        if not (np.isfinite(v) and v > 0):
            raise ConfigError(name, "%s must be positive" % name)
    if len(cfg.eps) != len(cfg.depths):
        raise ConfigError("eps_re_1", "need exactly one permittivity per layer")
    if not cfg.kappa0 > 0:
        raise ConfigError("kappa0", "kappa0 must be positive")
    for key in ("M", "N", "J"):
        if getattr(cfg, key) < 1:
            raise ConfigError(key, "%s must be at least 1" % key)
    if cfg.layered:
        if cfg.I_top is None or cfg.I_top < 1:
            raise ConfigError("I_top", "I_top must be at least 1 for a two-layer cavity")
        h_bottom = cfg.depths[1] / (cfg.J + 1)
        h_top = cfg.depths[0] / (cfg.I_top + 1)
        if abs(h_bottom - h_top) > ALIGN_TOL * max(h_bottom, h_top):
            raise ConfigError("I_top", "grid spacings differ: c2/(J+1) = %r, c1/(I_top+1) = %r"
                              % (h_bottom, h_top))
    if cfg.quad_grid is not None and cfg.quad_grid < 4 * max(cfg.M, cfg.N):
        raise ConfigError("quad_grid", "quad_grid must be at least 4*max(M, N)")
    if cfg.regime_threshold < 1:
        raise ConfigError("regime_threshold", "regime_threshold must be at least 1")
    if cfg.theta_range is not None:
        start, end, step = cfg.theta_range
        if not step > 0:
            raise ConfigError("theta_step_deg", "theta_step_deg must be positive")
        if end < start:
            raise ConfigError("theta_end_deg", "theta_end_deg must not be below theta_start_deg")
    for t in cfg.thetas_deg:
        if not 0.0 <= t <= 90.0:
            raise ConfigError("theta_deg", "theta must lie in [0, 90] degrees, got %r" % t)


@dataclass(frozen=True)
class IncidentWave:
    """Plane wave p exp(i q.x) with q = kappa0 d, and its ground-plane reflection p* exp(i q*.x)."""

    alpha: float
    theta: float
    phi: float
    kappa0: float
    d: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)
    p_star: np.ndarray = field(repr=False)
    q_star: np.ndarray = field(repr=False)

    @property
    def alpha1(self):
        return float(self.q[0])

    @property
    def alpha2(self):
        return float(self.q[1])

    @property
    def beta(self):
        return float(-self.q[2])


def build_incident_wave(alpha, theta, phi, kappa0):
    """Incident wave for polarization angle alpha and direction angles (theta, phi), in radians."""
    if not 0.0 <= theta <= 0.5 * math.pi + 1e-15:
        raise ValueError("theta must lie in [0, pi/2], got %r" % theta)
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    d = -np.array([st * cp, st * sp, ct])
    q = kappa0 * d
    theta_hat = np.array([ct * cp, ct * sp, -st])
    phi_hat = np.array([-sp, cp, 0.0])
    p = math.cos(alpha) * theta_hat + math.sin(alpha) * phi_hat
    p_star = np.array([-p[0], -p[1], p[2]])
    q_star = np.array([q[0], q[1], -q[2]])
    return IncidentWave(alpha, theta, phi, kappa0, d, q, p, p_star, q_star)
