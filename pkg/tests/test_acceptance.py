"""Acceptance criteria, one test each, exact arithmetic throughout.

Every test prints a single ``PASS``/``FAIL`` line naming its criterion.
Run ``python tests/test_acceptance.py`` for the lines alone.
"""
from __future__ import annotations

import json
import random
import sys

import pytest

from coiso.cli import run_command
from coiso.hkr import hkr_psi
from coiso.hochschild import op_compatible
from coiso.parser import ParseError, parse_expr, parse_multivector
from coiso.polycore import CoisoContext
from coiso.sampling import random_constant_poisson
from coiso.starprod import build_standard_star, build_weyl_star, check_left_ideal, verify_star
from coiso.verify import Bounds, run_suite

SEEDS = (0, 20261015)
BOUNDS = Bounds()  # n <= 3, nu <= 2, degree <= 2, k <= 3, 50 instances per family


def _families(*names, minimum=50):
    """Run the named suite families for every seed; return (ok, detail)."""
    problems = []
    for seed in SEEDS:
        report = run_suite(seed, BOUNDS, only=lambda name: name in names)
        found = {f["name"]: f for f in report["families"]}
        for name in names:
            fam = found.get(name)
            if fam is None:
                problems.append(f"{name}: missing")
            elif fam["failures"]:
                problems.append(f"{name} seed {seed}: {fam['failures']} failures, "
                                f"first {fam['first_counterexample']}")
            elif fam["instances"] < minimum:
                problems.append(f"{name} seed {seed}: only {fam['instances']} instances")
    return not problems, "; ".join(problems) or f"{len(names)} families x {len(SEEDS)} seeds"


def graded_lie_laws():
    return _families("multivector.schouten_lie", "hochschild.gerstenhaber_lie")


def complex_laws():
    return _families("hochschild.b_squared", "hochschild.b_two_ways",
                     "resolutions.bar", "resolutions.koszul")


def compatible_subspaces():
    return _families("hochschild.compatible_ideal", "hochschild.compatible_oracle",
                     "hochschild.quotient_projection", "multivector.compatible_closure",
                     "multivector.compatible_oracle")


def resolution_identities():
    return _families("resolutions.bar", "resolutions.koszul", "resolutions.comparison")


def hkr_maps():
    ok, detail = _families("hkr.classical", "hkr.modified")
    ok2, detail2 = _families("hkr.bracket_defect", minimum=25)
    ctx = CoisoContext(2, 1)
    control = not op_compatible(hkr_psi(parse_multivector("e[1,2]", ctx)))
    return ok and ok2 and control, f"{detail}; {detail2}; negative control reproduced: {control}"


def brace_identity():
    return _families("hochschild.brace")


def star_representation():
    rng = random.Random(5)
    failures = []
    ns = [2, 3, 4, 2, 3, 4, 2, 3, 4, 3, 2, 4]
    for n in ns:
        ctx = CoisoContext(n, rng.randint(1, min(n - 1, 2)))
        p = random_constant_poisson(rng, ctx, 0.35 if n == 4 else 0.6)
        report = verify_star(build_standard_star(p, 6), rng)
        fine = (report["ok"] and report["associativity_defect_first_failure"] is None
                and report["left_ideal_structural"] and report["left_ideal_extensional"]
                and all(report["axioms"][a] for a in ("i", "ii", "iv")))
        if not fine:
            failures.append(f"n={n} nu={ctx.nu} P={p.format()}")
    codim_one = 0
    for _ in range(10):
        ctx = CoisoContext(rng.randint(2, 4), 1)
        p = random_constant_poisson(rng, ctx, 0.5)
        codim_one += verify_star(build_standard_star(p, 6), rng)["ok"]
    ctx = CoisoContext(2, 1)
    weyl = check_left_ideal(build_weyl_star(parse_multivector("e[1,2]", ctx), 6))
    weyl_ok = weyl["structural_first_failure"] == 1
    ok = not failures and codim_one == 10 and weyl_ok
    return ok, (f"{len(ns) - len(failures)}/{len(ns)} random products, {codim_one}/10 codimension one, "
                f"Weyl fails at order {weyl['structural_first_failure']}")


def brst():
    return _families("multivector.brst", minimum=10)


MALFORMED = [("poly", ""), ("poly", "x1 +"), ("poly", "x9"), ("poly", "1/0"), ("poly", "x1 x2"),
             ("poly", "(x1"), ("poly", "x1*e[1]"), ("multivector", "e[1,4]"),
             ("multivector", "e[1]*e[2]"), ("multivector", "(e[1])"),
             ("cochain", "D[(1,0)] + D[(1,0)|(0,1)]"), ("cochain", "D[(1,0,0,0)]"),
             ("cochain", "D[(1,0)|]"), ("poly", "x1 + é")]


def parser_round_trip():
    count = 0
    for seed in range(4):
        report = run_suite(seed, Bounds(instances=60), only=lambda n: n == "parser.round_trip")
        fam = report["families"][0]
        if fam["failures"]:
            return False, f"round trip failed: {fam['first_counterexample']}"
        count += fam["instances"]
    ctx = CoisoContext(3, 1)
    located = 0
    for kind, text in MALFORMED:
        try:
            parse_expr(text, kind, ctx)
        except ParseError as exc:
            located += 0 <= exc.offset <= len(text.encode("utf-8"))
    return count >= 200 and located == len(MALFORMED), (
        f"{count} round trips, {located}/{len(MALFORMED)} malformed inputs located")


CLI_SCENARIOS = [
    (["--n", "2", "--nu", "1", "schouten", "e[1]", "x1"], 0),
    (["--n", "2", "--nu", "1", "check-compatible", "--op", "D[(1,0)|(0,1)]"], 1),
    (["--n", "2", "--nu", "1", "star", "build", "--poisson", "e[1,2]", "--order", "6"], 0),
    (["star", "build", "--poisson", "e[1,2]", "--weyl"], 1),
    (["check-compatible", "--mv", "x2*e[2]"], 0),
    (["schouten", "e[1", "x1"], 2),
    (["star", "build"], 2),
    (["--nu", "5", "wedge", "1", "1"], 2),
]


def cli_contract():
    suite = ["--seed", "3", "verify", "--suite", "--instances", "10", "--star-instances", "3"]
    first, code = run_command(suite)
    same = run_command(suite) == (first, code) and code == 0
    star = ["--seed", "4", "star", "build", "--poisson", "e[1,2]"]
    same = same and run_command(star) == run_command(star)
    wrong = [(argv, got) for argv, want in CLI_SCENARIOS
             if (got := run_command(argv)[1]) != want]
    ok = same and not wrong and json.loads(first)["ok"]
    return ok, f"deterministic: {same}; exit-code mismatches: {wrong or 'none'}"


CRITERIA = [
    (1, "graded Lie laws for Schouten and Gerstenhaber brackets", graded_lie_laws),
    (2, "complex laws and the two coboundary formulas", complex_laws),
    (3, "compatible subspaces and their brute-force oracles", compatible_subspaces),
    (4, "resolution identities and comparison maps", resolution_identities),
    (5, "classical and modified HKR maps", hkr_maps),
    (6, "brace antisymmetrisation and closure", brace_identity),
    (7, "left-ideal standard star products", star_representation),
    (8, "BRST differential squares to zero, lift independent", brst),
    (9, "parser round trip and located errors", parser_round_trip),
    (10, "CLI determinism and exit codes", cli_contract),
]


def _line(number, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} ({detail})"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(n, t, *c()) for n, t, c in CRITERIA]
    for n, t, ok, detail in results:
        print(_line(n, t, ok, detail))
    sys.exit(0 if all(r[2] for r in results) else 1)
