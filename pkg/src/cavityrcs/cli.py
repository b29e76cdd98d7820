"""Command-line driver: config in, backscatter CSV and phase timings out."""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time

import numpy as np

from .config import ConfigError, parse_config

CSV_HEADER = ("theta_deg", "phi_deg", "alpha_deg", "sigma", "sigma_over_lambda2", "rcs_tt_db", "rcs_pp_db")


def build_parser():
    p = argparse.ArgumentParser(prog="cavityrcs", description="Backscatter RCS of an open rectangular cavity.")
    p.add_argument("--config", help="key-value config file")
    p.add_argument("--out", help="CSV output path (default: standard output)")
    p.add_argument("--cache-dir", help="directory for cached Gram tensors")
    p.add_argument("--cache-only", action="store_true", help="compute and store the Gram tensor, then stop")
    p.add_argument("--threads", type=int, help="cap on BLAS/LAPACK threads")
    p.add_argument("--verify", action="store_true", help="run the small-instance reference checks and exit")
    p.add_argument("--tbc-sign", choices=("physical", "negated"), default="physical",
                   help="sign convention of the aperture integral operator")
    p.add_argument("--closure", choices=("balanced", "one_sided"), default="balanced",
                   help="interface closure for two-layer fillings")
    return p


def emit_csv(samples, path_or_file):
    """Write one row per sample, ordered by theta, with full double precision."""
    samples = sorted(samples, key=lambda s: s.theta)
    if not samples:
        raise ValueError("no samples")

    def write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for s in samples:
            w.writerow([repr(math.degrees(s.theta)), repr(math.degrees(s.phi)), repr(math.degrees(s.alpha)),
                        repr(s.sigma), repr(s.sigma_over_lambda2), repr(s.rcs_tt_db), repr(s.rcs_pp_db)])

    if hasattr(path_or_file, "write"):
        write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            write(fh)


def verify(out=None):
    """Compare the spectral Gram tensor and full pipeline against the reference quadrature."""
    out = sys.stdout if out is None else out
    from .config import CavityConfig
    from .oracle import oracle_gram
    from .pipeline import CavitySolver

    cfg = CavityConfig(a=1.0, b=1.0, depths=(3.0,), eps=(1 + 0j,), kappa0=2 * math.pi, M=3, N=3, J=1000)
    fast = CavitySolver(cfg)
    ref = oracle_gram(3, 3, cfg.kappa0, cfg.a, cfg.b)
    ok = True
    for name in ("I1", "I2", "I3"):
        x, y = getattr(fast.gram, name), getattr(ref, name)
        err = float(np.max(np.abs(x - y)) / np.max(np.abs(y)))
        good = err <= 1e-3
        ok &= good
        print("verify gram %s max_rel_err=%.3e %s" % (name, err, "PASS" if good else "FAIL"), file=out)
    slow = CavitySolver(cfg, gram=ref)
    wave = fast.wave(0.0)
    u, v = fast.solve(wave).vector(), slow.solve(wave).vector()
    err = float(np.linalg.norm(u - v) / np.linalg.norm(v))
    good = err <= 1e-3
    ok &= good
    print("verify aperture rel_err=%.3e %s" % (err, "PASS" if good else "FAIL"), file=out)
    return ok


def run(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 2
    if args.threads is not None:
        from threadpoolctl import threadpool_limits
        limiter = threadpool_limits(limits=args.threads)
    else:
        limiter = None
    try:
        if args.verify:
            return 0 if verify() else 1
        if not args.config:
            print("error: --config is required", file=sys.stderr)
            return 2
        return _run_config(args)
    finally:
        if limiter is not None:
            limiter.restore_original_limits()


def _run_config(args):
    from .pipeline import PHASES, CavitySolver

    try:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        print("error: cannot read config: %s" % exc, file=sys.stderr)
        return 2
    except ConfigError as exc:
        print("error: invalid config: %s" % exc, file=sys.stderr)
        return 2

    solver = CavitySolver(cfg, cache_dir=args.cache_dir, tbc_sign=args.tbc_sign, closure=args.closure)
    phase = "singular"
    t0 = time.perf_counter()
    try:
        solver.gram
        if args.cache_only:
            print("phase=singular seconds=%.6f" % solver.timings["singular"])
            return 0
        phase = "assemble"
        solver.system
        phase = "solve"
        solver.factorization
        phase = "rcs"
        samples = solver.sweep()
        if args.out:
            emit_csv(samples, args.out)
        else:
            emit_csv(samples, sys.stdout)
    except Exception as exc:  # report the failing phase, then exit nonzero
        print("error: phase %s failed: %s" % (phase, exc), file=sys.stderr)
        return 1
    total = time.perf_counter() - t0
    out = sys.stderr if not args.out else sys.stdout
    for name in PHASES:
        print("phase=%s seconds=%.6f" % (name, solver.timings[name]), file=out)
    print("total seconds=%.6f order=%d cache_hit=%s" % (total, solver.system.order, solver.cache_hit), file=out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
