"""Acceptance criteria: one PASS/FAIL line per criterion.

Each criterion maps onto check ids of the default ``verify all`` run; the run is
shared across the module. Run directly (``python tests/test_acceptance.py``) to
print the table without pytest.
"""

from __future__ import annotations

import functools
import sys

import pytest

from kahlerverify.report import RunConfig
from kahlerverify.suites import run_suite

CRITERIA: dict[int, tuple[str, tuple[str, ...]]] = {
    1: ("Taub-NUT base metric is Ricci-flat with W- = 0", ("taub-nut.base-curvature",)),
    2: ("W+ eigenvalues 8m/(r+m)^3 (2,-1,-1) at r = 2", ("taub-nut.w-plus-eigenvalues",)),
    3: ("scalar curvature of g+ is 96m/(r+m)", ("taub-nut.scalar-g-plus",)),
    4: ("g- is scalar-flat", ("taub-nut.scalar-g-minus",)),
    5: ("Ricci eigenvalues of g-", ("taub-nut.ricci-g-minus",)),
    6: ("W+ of g- matches the closed form", ("taub-nut.w-plus-g-minus",)),
    7: ("J_f integrable; deformed structure is not", ("identities.nijenhuis-jf", "identities.nijenhuis-deformed")),
    8: ("conformal Kähler closedness, unconformal residual, dlog identity",
        ("taub-nut.kahler-closed", "taub-nut.unconformal-not-closed", "taub-nut.dlog-identity")),
    9: ("star identity for dJdf", ("identities.star-flat", "identities.star-kahler")),
    10: ("Levi classification of model hypersurfaces",
         ("levi.affine-levi-flat", "levi.product-levi-flat", "levi.sphere-convex", "levi.normal-flip")),
    11: ("harmonic energy identity on the annulus (1, 2)",
         ("ibp.annulus-default", "ibp.annulus-refined", "ibp.annulus-oracle")),
    12: ("general energy identity on the unit ball", ("ibp.general-ball", "ibp.general-ball-oracle")),
    13: ("pluriharmonic exhibit f = Re z1", ("ibp.pluriharmonic-lhs", "ibp.pluriharmonic-boundary")),
}
DETERMINISM = 14


@functools.lru_cache(maxsize=None)
def default_run():
    report, code = run_suite("all", RunConfig())
    return report, code


def evaluate(n: int) -> tuple[bool, str]:
    report, _ = default_run()
    if n == DETERMINISM:
        again, _ = run_suite("all", RunConfig())
        same = again.checks_json() == report.checks_json()
        return same, "check sections byte-identical" if same else "check sections differ"
    by_id = {c.id: c for c in report.checks}
    _, ids = CRITERIA[n]
    missing = [i for i in ids if i not in by_id]
    if missing:
        return False, f"missing checks {missing}"
    bad = [f"{i} ({by_id[i].status}, residual {by_id[i].residual:.3g} vs tol {by_id[i].tolerance:.3g})"
           for i in ids if by_id[i].status != "pass"]
    worst = ", ".join(f"{i}={by_id[i].residual:.2g}" for i in ids)
    return not bad, "; ".join(bad) if bad else worst


def line(n: int, ok: bool, detail: str) -> str:
    title = "deterministic check section" if n == DETERMINISM else CRITERIA[n][0]
    return f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {title} [{detail}]"


def test_every_criterion_check_runs_once_in_all():
    report, _ = default_run()
    ids = [c.id for c in report.checks]
    for _, wanted in CRITERIA.values():
        for i in wanted:
            assert ids.count(i) == 1


@pytest.mark.parametrize("n", [*CRITERIA, DETERMINISM])
def test_criterion(n, capsys):
    ok, detail = evaluate(n)
    with capsys.disabled():
        print("\n" + line(n, ok, detail))
    assert ok, detail


def main() -> int:
    results = [evaluate(n) for n in (*CRITERIA, DETERMINISM)]
    for n, (ok, detail) in zip((*CRITERIA, DETERMINISM), results):
        print(line(n, ok, detail))
    return 0 if all(ok for ok, _ in results) else 1


if __name__ == "__main__":
    sys.exit(main())
