"""Command-line front end.

    kahlerverify verify <suite> [--m F] [--samples N] [--resolution N] [--refine N]
                                [--seed N] [--out PATH] [--format json] [--a F --b F]
    kahlerverify profile <quantity> [--r-min F] [--r-max F] [--steps N] [--m F] [--out PATH]

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

import numpy as np

from . import catalog, curvature as cv
from .errors import SingularPoint
from .report import ConfigError, RunConfig, tol_scale_from_env
from .suites import SUITES, run_suite

PROFILES = ("scalar-g-plus", "scalar-g-minus", "ricci-g-minus-eigs", "w-plus-eigs")
PROFILE_ANGLES = (1.1, 0.7, 2.3)


def profile_rows(quantity: str, r_min: float, r_max: float, steps: int, m: float = 1.0):
    """Header and rows of ``r`` against ``quantity`` with a closed-form column."""
    if quantity not in PROFILES:
        raise ConfigError(f"unknown profile quantity {quantity!r}")
    if steps < 1 or not r_min <= r_max:
        raise ConfigError("need steps >= 1 and r_min <= r_max")
    tn = catalog.taub_nut(m)
    if r_min - m < tn.chart.margin:
        raise SingularPoint(f"profile range starts at r = {r_min}, within the margin of the nut r = m = {m}")
    rs = np.linspace(r_min, r_max, steps)
    rows = []
    for r in rs:
        p = tn.point(r, *PROFILE_ANGLES)
        if quantity == "scalar-g-plus":
            rows.append([r, cv.curvature_pack(tn.g_plus, p).scalar, 96 * m / (r + m)])
        elif quantity == "scalar-g-minus":
            rows.append([r, cv.curvature_pack(tn.g_minus, p).scalar, 0.0])
        elif quantity == "ricci-g-minus-eigs":
            eig = [e.value for e in cv.ricci_eigenstructure(tn.g_minus, p, tn.unit_coframe(tn.g_minus))]
            rows.append([r, *eig, 4 * ((r - m) / (r + m)) ** 2])
        else:
            pk = cv.curvature_pack(tn.g, p, tn.unit_coframe(tn.g))
            rows.append([r, *np.sort(np.linalg.eigvalsh(pk.w_plus)), 8 * m / (r + m) ** 3])
    header = {
        "scalar-g-plus": ["r", "scalar", "expected_96m_over_r_plus_m"],
        "scalar-g-minus": ["r", "scalar", "expected"],
        "ricci-g-minus-eigs": ["r", "eta0", "eta1", "eta2", "eta3", "expected_magnitude"],
        "w-plus-eigs": ["r", "eig_low", "eig_mid", "eig_high", "expected_factor_8m_over_r_plus_m_cubed"],
    }[quantity]
    return header, rows


def emit_profile(quantity: str, r_min: float, r_max: float, steps: int = 50, m: float = 1.0,
                 out: str | None = None) -> str:
    header, rows = profile_rows(quantity, r_min, r_max, steps, m)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    text = buf.getvalue()
    if out:
        Path(out).write_text(text)
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kahlerverify", description="Numerical checks of Kähler identities.")
    p.add_argument("-v", "--verbose", action="store_true", help="log each check as it runs")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite and emit a JSON report")
    v.add_argument("suite", choices=(*SUITES, "all"))
    v.add_argument("--m", type=float, default=1.0, help="Taub-NUT mass parameter")
    v.add_argument("--samples", type=int, default=256, help="sample points per check")
    v.add_argument("--resolution", type=int, default=48, help="quadrature nodes per aperiodic axis")
    v.add_argument("--refine", type=int, default=2, help="number of quadrature refinement levels")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--format", choices=("json",), default="json")
    v.add_argument("--a", type=float, default=1.0, help="inner annulus radius")
    v.add_argument("--b", type=float, default=2.0, help="outer annulus radius")

    pr = sub.add_parser("profile", help="write a Taub-NUT curvature profile as CSV")
    pr.add_argument("quantity", choices=PROFILES)
    pr.add_argument("--r-min", type=float, default=None, help="default 1.5 m")
    pr.add_argument("--r-max", type=float, default=None, help="default 10 m")
    pr.add_argument("--steps", type=int, default=50)
    pr.add_argument("--m", type=float, default=1.0)
    pr.add_argument("--out", help="CSV path (default: stdout)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            cfg = RunConfig(suite=args.suite, m=args.m, samples=args.samples, resolution=args.resolution,
                            refine=args.refine, seed=args.seed, out=args.out, a=args.a, b=args.b,
                            tol_scale=tol_scale_from_env())
            report, code = run_suite(args.suite, cfg)
            text = report.to_json()
            if cfg.out:
                Path(cfg.out).write_text(text + "\n")
            else:
                sys.stdout.write(text + "\n")
            s = report.summary()
            print(f"{args.suite}: {s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped",
                  file=sys.stderr)
            return code
        if args.m <= 0:
            raise ConfigError("m must be positive")
        r_min = 1.5 * args.m if args.r_min is None else args.r_min
        r_max = 10.0 * args.m if args.r_max is None else args.r_max
        text = emit_profile(args.quantity, r_min, r_max, args.steps, args.m, args.out)
        if not args.out:
            sys.stdout.write(text)
        return 0
    except (ConfigError, SingularPoint) as exc:
        print(f"kahlerverify: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
