import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavityrcs.config import CavityConfig, ConfigError, build_incident_wave, parse_config

SMALL = """
a = 1
b = 1
c = 3
eps_re_1 = 1
eps_im_1 = 0
kappa0 = 6.283185307179586
M = 3
N = 3
J = 1000
theta_deg = 0
"""

LAYERED = """
wavelength = 1
a = 1 lambda
b = 1 lambda
c1 = 1 lambda
c2 = 2 lambda
eps_re_1 = 7
eps_im_1 = 1.5
eps_re_2 = 3
eps_im_2 = 0.05
M = 3
N = 3
J = 599
I_top = 299
theta_deg = 10
"""


def replace(text, key, value):
    lines = [l for l in text.strip().splitlines() if not l.startswith(key + " ")]
    if value is not None:
        lines.append("%s = %s" % (key, value))
    return "\n".join(lines)


def test_small_homogeneous_config():
    cfg = parse_config(SMALL)
    assert (cfg.a, cfg.b, cfg.depths, cfg.eps) == (1.0, 1.0, (3.0,), (1 + 0j,))
    assert (cfg.M, cfg.N, cfg.J) == (3, 3, 1000)
    assert not cfg.layered
    assert cfg.h == pytest.approx(3.0 / 1001)


def test_layered_config_with_lambda_units():
    cfg = parse_config(LAYERED)
    assert cfg.layered
    assert cfg.depths == (1.0, 2.0)
    assert cfg.eps == (7 + 1.5j, 3 + 0.05j)
    assert cfg.depth == 3.0
    assert cfg.h == pytest.approx(2.0 / 600)


def test_lambda_units_resolve_against_kappa0():
    cfg = parse_config(replace(SMALL, "a", "10 lambda").replace("kappa0 = 6.283185307179586", "kappa0 = 3.14159"))
    assert cfg.a == pytest.approx(10 * 2 * math.pi / 3.14159)


@pytest.mark.parametrize("key,value,match", [
    ("a", "-1", "a must be positive"),
    ("c", "0", "c must be positive"),
    ("M", "0", "M must be at least 1"),
    ("J", "2.5", "not an integer"),
    ("kappa0", "abc", "not a number"),
    ("theta_deg", "95", "theta must lie"),
    ("bogus", "1", "unknown key"),
    ("eps_re_2", "2", "only valid for a two-layer"),
    ("M", None, "missing required key"),
])
def test_invalid_values(key, value, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(replace(SMALL, key, value))


def test_kappa0_and_wavelength_exclusive():
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config(SMALL + "wavelength = 1\n")


def test_misaligned_layers_rejected():
    with pytest.raises(ConfigError, match="grid spacings differ"):
        parse_config(replace(LAYERED, "I_top", "300"))


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config(SMALL + "a = 2\n")


def test_sweep_count_matches_half_open_range():
    cfg = parse_config(replace(SMALL, "theta_deg", None)
                       + "\ntheta_start_deg = 0\ntheta_end_deg = 50\ntheta_step_deg = 0.5\n")
    thetas = cfg.thetas_deg
    assert len(thetas) == 100
    assert thetas[0] == 0.0 and thetas[-1] == pytest.approx(49.5)


def test_normal_incidence_wave():
    w = build_incident_wave(0.0, 0.0, 0.0, 2 * math.pi)
    assert np.allclose(w.q, [0.0, 0.0, -2 * math.pi], atol=1e-15)
    assert w.beta == pytest.approx(2 * math.pi)


def test_oblique_wave_components():
    w = build_incident_wave(0.0, math.pi / 6, 0.0, 2 * math.pi)
    assert w.alpha1 == pytest.approx(-math.pi, rel=1e-15)
    assert w.alpha2 == pytest.approx(0.0, abs=1e-15)
    assert w.beta == pytest.approx(2 * math.pi * math.cos(math.pi / 6), rel=1e-15)


def test_wave_rejects_theta_out_of_range():
    with pytest.raises(ValueError):
        build_incident_wave(0.0, 2.0, 0.0, 1.0)


@given(alpha=st.floats(0, 2 * math.pi), theta=st.floats(0, math.pi / 2), phi=st.floats(0, 2 * math.pi),
       kappa0=st.floats(0.1, 100.0))
def test_wave_invariants(alpha, theta, phi, kappa0):
    w = build_incident_wave(alpha, theta, phi, kappa0)
    assert abs(np.dot(w.p, w.q)) <= 1e-14 * kappa0
    assert abs(np.dot(w.p_star, w.q_star)) <= 1e-14 * kappa0
    assert abs(np.linalg.norm(w.q) - kappa0) <= 1e-14 * kappa0
    assert w.beta >= 0
    assert np.linalg.norm(w.p) == pytest.approx(1.0, rel=1e-15)


lengths = st.floats(1e-3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def configs(draw):
    layered = draw(st.booleans())
    M, N = draw(st.integers(1, 16)), draw(st.integers(1, 16))
    J = draw(st.integers(1, 3000))
    eps = lambda: complex(draw(st.floats(0.5, 20)), draw(st.floats(0, 5)))
    if layered:
        I_top = draw(st.integers(1, 3000))
        h = draw(lengths)
        depths = (h * (I_top + 1), h * (J + 1))
        extra = dict(depths=depths, eps=(eps(), eps()), I_top=I_top)
        # round-off in the products may misalign; skip those draws
        if abs(depths[1] / (J + 1) - depths[0] / (I_top + 1)) > 1e-12 * depths[1] / (J + 1):
            extra["I_top"] = None
    else:
        extra = dict(depths=(draw(lengths),), eps=(eps(),))
    sweep = draw(st.booleans())
    angles = dict(theta_deg=None, theta_range=(0.0, draw(st.floats(1, 90)), draw(st.floats(0.1, 10)))) \
        if sweep else dict(theta_deg=draw(st.floats(0, 90)))
    return CavityConfig(a=draw(lengths), b=draw(lengths), kappa0=draw(st.floats(0.01, 100)), M=M, N=N, J=J,
                        alpha_deg=draw(st.floats(-360, 360)), phi_deg=draw(st.floats(-360, 360)),
                        quad_grid=draw(st.sampled_from([None, 64 * max(M, N)])),
                        regime_threshold=draw(st.integers(1, 50)), **extra, **angles)


@given(configs())
def test_round_trip(cfg):
    if cfg.layered and cfg.I_top is None:
        return
    assert parse_config(cfg.to_text()) == cfg
