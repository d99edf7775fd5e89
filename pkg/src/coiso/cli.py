"""Command-line front end: ``coiso [--n N] [--nu NU] [--json] <command> ...``.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import replace

from . import resolutions as res
from .hkr import bracket_defect, hkr_psi, hkr_psi_modified
from .hochschild import (brace, cup_product, gerstenhaber_bracket, hochschild_b, op_apply,
                         op_compatible)
from .multivector import QuotientMultiVector, brst_differential, mv_compatible, schouten_bracket
from .parser import (ParseError, parse_bar_chain, parse_cochain, parse_koszul_chain,
                     parse_multivector, parse_poly)
from .polycore import CoisoContext
from .starprod import StarProduct, build_standard_star, build_weyl_star, verify_star
from .verify import Bounds, run_suite

GRAMMAR_HINT = ("grammar: terms like 3/2*x1^2*x2, multivectors x1*e[1,2], "
                "cochains x2*D[(1,0)|(0,1)], bar chains in a<i>, x<i>_<r>, b<i>")


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("COISO_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"COISO_SEED must be an integer, got {env!r}")


# command handlers return (payload, ok); payload is text or a JSON-able dict

def _mv(ctx, s):
    return parse_multivector(s, ctx)


def _co(ctx, s):
    return parse_cochain(s, ctx)


def cmd_schouten(ctx, a):
    return schouten_bracket(_mv(ctx, a.x), _mv(ctx, a.y)).format(), True


def cmd_wedge(ctx, a):
    return _mv(ctx, a.x).wedge(_mv(ctx, a.y)).format(), True


def cmd_gbracket(ctx, a):
    return gerstenhaber_bracket(_co(ctx, a.phi), _co(ctx, a.psi)).format(), True


def cmd_cup(ctx, a):
    return cup_product(_co(ctx, a.phi), _co(ctx, a.psi)).format(), True


def cmd_brace(ctx, a):
    return brace(_co(ctx, a.e), [_co(ctx, f) for f in a.fs]).format(), True


def cmd_hoch_b(ctx, a):
    return hochschild_b(_co(ctx, a.phi)).format(), True


def cmd_apply(ctx, a):
    phi = _co(ctx, a.phi)
    fs = [parse_poly(f, ctx) for f in a.fs]
    if len(fs) != phi.arity:
        raise UsageError(f"a {phi.arity}-cochain needs {phi.arity} functions, got {len(fs)}")
    return op_apply(phi, fs).format(), True


def cmd_check_compatible(ctx, a):
    ok = mv_compatible(_mv(ctx, a.mv)) if a.mv is not None else op_compatible(_co(ctx, a.op))
    return ("true" if ok else "false"), ok


def cmd_hkr(ctx, a):
    x = _mv(ctx, a.x)
    try:
        phi = hkr_psi_modified(x) if a.modified else hkr_psi(x)
    except ValueError as exc:
        raise UsageError(str(exc))
    return phi.format(), True


def cmd_hkr_defect(ctx, a):
    x, y = _mv(ctx, a.x), _mv(ctx, a.y)
    which = "modified" if a.modified else "classical"
    try:
        delta, cocycle, vanishes = bracket_defect(x, y, which)
    except ValueError as exc:
        raise UsageError(str(exc))
    return {"defect": delta.format(), "is_cocycle": cocycle, "pi_vanishes": vanishes}, (
        cocycle and vanishes)


def _bar(ctx, a):
    return parse_bar_chain(a.chain, ctx.n, a.k)


def _koszul(ctx, a):
    return parse_koszul_chain(a.chain, ctx.n, a.k)


def _chain_text(c):
    return f"k={c.k}: {c.format()}"


def _degree_checked(fn, *args):
    try:
        return fn(*args)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_bar_d(ctx, a):
    c = _bar(ctx, a)
    if c.k == 0:
        return res.augmentation(c).format(), True
    return _chain_text(res.bar_boundary(c)), True


def cmd_koszul_d(ctx, a):
    c = _koszul(ctx, a)
    if c.k == 0:
        return res.augmentation(c).format(), True
    return _chain_text(res.koszul_boundary(c)), True


def cmd_map_f(ctx, a):
    return _chain_text(res.map_F(_koszul(ctx, a))), True


def cmd_map_g(ctx, a):
    return _chain_text(res.map_G(_bar(ctx, a))), True


def cmd_theta(ctx, a):
    return _chain_text(res.theta(_bar(ctx, a))), True


def cmd_homotopy(ctx, a):
    if a.bar:
        return _chain_text(res.bar_homotopy(_bar(ctx, a))), True
    return _chain_text(res.koszul_homotopy(_koszul(ctx, a))), True


def cmd_brst(ctx, a):
    p = _mv(ctx, a.poisson)
    x = _mv(ctx, a.a)
    q = _degree_checked(QuotientMultiVector.from_multivector, x)
    lift = _mv(ctx, a.lift) if a.lift else None
    return _degree_checked(brst_differential, p, q, lift).format(), True


def cmd_star(ctx, a, seed):
    rng = random.Random(seed)
    if a.action == "build":
        if not a.poisson:
            raise UsageError("star build needs --poisson")
        p = _mv(ctx, a.poisson)
        builder = build_weyl_star if a.weyl else build_standard_star
        s = _degree_checked(builder, p, a.order)
    else:
        if not a.cochains:
            raise UsageError("star verify needs --cochains FILE")
        try:
            with open(a.cochains, encoding="utf-8") as fh:
                lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        except OSError as exc:
            raise UsageError(str(exc))
        cochains = [_co(ctx, ln) for ln in lines]
        p = _mv(ctx, a.poisson) if a.poisson else None
        s = _degree_checked(StarProduct, ctx, cochains, p)
    report = verify_star(s, rng)
    report["cochains"] = [c.format() for c in s.cochains]
    return report, report["ok"]


def cmd_verify(ctx, a, seed):
    if not a.suite:
        raise UsageError("verify needs --suite")
    bounds = replace(Bounds(), instances=a.instances, order=min(a.order, Bounds().order))
    if a.star_instances is not None:
        bounds = replace(bounds, star_instances=a.star_instances)
    report = run_suite(seed, bounds)
    return report, report["ok"]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coiso", description="Exact calculus near a coisotropic subspace.",
                                 epilog=GRAMMAR_HINT)
    ap.add_argument("--n", type=int, default=2, help="ambient dimension (default 2)")
    ap.add_argument("--nu", type=int, default=1, help="codimension of C (default 1)")
    ap.add_argument("--order", type=int, default=6, help="star-product truncation (default 6)")
    ap.add_argument("--seed", type=int, default=None, help="random seed (fallback COISO_SEED, then 0)")
    ap.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_text, *positional):
        p = sub.add_parser(name, help=help_text, epilog=GRAMMAR_HINT)
        for arg in positional:
            p.add_argument(arg)
        p.set_defaults(handler=fn)
        return p

    add("schouten", cmd_schouten, "Schouten bracket of two multivectors", "x", "y")
    add("wedge", cmd_wedge, "wedge product of two multivectors", "x", "y")
    add("gbracket", cmd_gbracket, "Gerstenhaber bracket of two cochains", "phi", "psi")
    add("cup", cmd_cup, "cup product of two cochains", "phi", "psi")
    p = add("brace", cmd_brace, "brace E{F1, ..., Fp}", "e")
    p.add_argument("fs", nargs="+")
    add("hoch-b", cmd_hoch_b, "Hochschild coboundary", "phi")
    p = add("apply", cmd_apply, "evaluate a cochain on functions", "phi")
    p.add_argument("fs", nargs="*")
    p = add("check-compatible", cmd_check_compatible, "membership in the compatible subspaces")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--mv", metavar="MULTIVECTOR")
    g.add_argument("--op", metavar="COCHAIN")
    p = add("hkr", cmd_hkr, "HKR map from multivectors to cochains", "x")
    p.add_argument("--modified", action="store_true", help="transverse-first variant")
    p = add("hkr-defect", cmd_hkr_defect, "bracket defect of an HKR map", "x", "y")
    p.add_argument("--modified", action="store_true")
    for name, fn, text in [("bar-d", cmd_bar_d, "bar boundary (augmentation in degree 0)"),
                           ("koszul-d", cmd_koszul_d, "Koszul boundary (augmentation in degree 0)"),
                           ("map-f", cmd_map_f, "comparison map Koszul -> bar"),
                           ("map-g", cmd_map_g, "comparison map bar -> Koszul"),
                           ("theta", cmd_theta, "projection F o G on bar chains")]:
        p = add(name, fn, text, "chain")
        p.add_argument("--k", type=int, default=None, help="chain degree (default: inferred)")
    p = add("homotopy", cmd_homotopy, "contracting homotopy", "chain")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--bar", action="store_true")
    g.add_argument("--koszul", action="store_true")
    p.add_argument("--k", type=int, default=None)
    p = add("brst", cmd_brst, "BRST differential of a compatible Poisson bivector", "a")
    p.add_argument("--poisson", required=True)
    p.add_argument("--lift", default=None, help="alternative lift of a")
    p = sub.add_parser("star", help="build or verify a truncated star product", epilog=GRAMMAR_HINT)
    p.add_argument("action", choices=["build", "verify"])
    p.add_argument("--poisson", default=None)
    p.add_argument("--cochains", default=None, help="file with one cochain per hbar order")
    p.add_argument("--weyl", action="store_true", help="symmetric (Moyal) ordering instead")
    p.add_argument("--order", type=int, default=None, dest="star_order")
    p.set_defaults(handler=cmd_star, seeded=True)
    p = sub.add_parser("verify", help="run the randomised invariant suite")
    p.add_argument("--suite", action="store_true")
    p.add_argument("--instances", type=int, default=50)
    p.add_argument("--star-instances", type=int, default=None)
    p.set_defaults(handler=cmd_verify, seeded=True)
    return ap


def run_command(argv) -> tuple:
    """Return ``(output text, exit code)`` without printing."""
    argv = list(argv)
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return "", 2 if exc.code else 0
    try:
        if not 0 <= a.nu <= a.n or a.n < 1:
            raise UsageError(f"need 1 <= n and 0 <= nu <= n, got n={a.n}, nu={a.nu}")
        ctx = CoisoContext(a.n, a.nu)
        seed = _seed(a)
        if getattr(a, "star_order", None) is not None:
            a.order = a.star_order
        if getattr(a, "seeded", False):
            payload, ok = a.handler(ctx, a, seed)
        else:
            payload, ok = a.handler(ctx, a)
    except ParseError as exc:
        return f"error: {exc}\n{GRAMMAR_HINT}", 2
    except UsageError as exc:
        return f"error: {exc}", 2
    code = 0 if ok else 1
    if a.json or isinstance(payload, dict):
        report = {"command": argv, "context": {"n": ctx.n, "nu": ctx.nu}, "seed": seed,
                  "ok": ok, "result": payload}
        return json.dumps(report, indent=2, sort_keys=True), code
    return payload, code


def main(argv=None) -> int:
    out, code = run_command(sys.argv[1:] if argv is None else argv)
    if out:
        stream = sys.stderr if code == 2 else sys.stdout
        print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
