"""``skewstone`` command line.

Exit status: 0 when every check passes, 1 on a validation failure, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import adjunction as adj
from . import io
from .algebra import (algebra_from_stalks, as_boolean, count_homs, iter_homs, primitive)
from .biglambda import build_biglambda
from .errors import SkewStoneError
from .etale import sections_algebra, spectral_morphisms, spectrum_etale
from .hasse import emit_hasse
from .lambda_n import LambdaAlgebra
from .verify import SUITES, run_suite


class UsageError(Exception):
    pass


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.verb} needs {', '.join(missing)}")


def _n(args, default=None) -> int:
    if args.n is None:
        if default is None:
            raise UsageError(f"{args.verb} needs --n")
        return default
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    return args.n


def _emit(args, obj) -> None:
    text = io.dumps(obj)
    if args.json:
        Path(args.json).write_text(text)
    else:
        sys.stdout.write(text)


def _plain(v):
    return list(v) if isinstance(v, tuple) else v


def _algebra(args, attr="algebra"):
    _need(args, attr)
    return io.read_algebra(getattr(args, attr))


# -- verbs -------------------------------------------------------------------


def cmd_validate(args) -> int:
    S = _algebra(args)
    _emit(args, {"valid": True, "carrier": S.size,
                 "stalk_profile": sorted(S.stalk_profile, reverse=True),
                 "d_classes": [list(c) for c in S.classes]})
    return 0


def cmd_primitive(args) -> int:
    _emit(args, io.algebra_to_json(primitive(_n(args))))
    return 0


def cmd_from_stalks(args) -> int:
    if args.etale:
        E = io.etale_from_json(io.load(args.etale))
        _emit(args, io.algebra_to_json(sections_algebra(E).algebra))
        return 0
    _need(args, "stalks")
    try:
        profile = [int(k) for k in args.stalks.split(",") if k]
    except ValueError:
        raise UsageError("--stalks takes comma-separated positive integers") from None
    if any(k < 1 for k in profile):
        raise UsageError("stalk sizes must be positive")
    _emit(args, io.algebra_to_json(algebra_from_stalks(profile)))
    return 0


def cmd_dual(args) -> int:
    if args.etale:
        E = io.etale_from_json(io.load(args.etale))
        _emit(args, io.algebra_to_json(sections_algebra(E).algebra))
    else:
        _emit(args, io.etale_to_json(spectrum_etale(_algebra(args))))
    return 0


def cmd_lambda(args) -> int:
    _need(args, "space")
    L = LambdaAlgebra(io.read_space(args.space), _n(args))
    _emit(args, io.algebra_to_json(L.materialize()))
    return 0


def cmd_biglambda(args) -> int:
    _emit(args, io.biglambda_to_json(build_biglambda(_algebra(args), _n(args))))
    return 0


def cmd_homs(args) -> int:
    S, T = _algebra(args, "source"), _algebra(args, "target")
    if args.count:
        sys.stdout.write(f"{count_homs(S, T)}\n")
        return 0
    _emit(args, {"homs": [list(h.images) for h in iter_homs(S, T)]})
    return 0


def cmd_spectral(args) -> int:
    S, n = _algebra(args), _n(args)
    _emit(args, {"n": n, "maps": [list(h.images) for h in spectral_morphisms(S, n)]})
    return 0


def cmd_eta(args) -> int:
    S, n = _algebra(args), _n(args)
    Lam = build_biglambda(S, n)
    eta = adj.unit_eta(S, n)
    _emit(args, {"n": n, "points": [[F, list(f)] for F, f in Lam.labels],
                 "map": [list(eta(a)) for a in S.elements()]})
    return 0


def cmd_epsilon(args) -> int:
    _need(args, "space")
    X, n = io.read_space(args.space), _n(args)
    Lam = build_biglambda(LambdaAlgebra(X, n), n)
    eps = adj.counit_epsilon(X, n)
    _emit(args, {"n": n, "map": {str(x): [Lam.labels[j][0], list(Lam.labels[j][1])]
                                 for x, j in zip(X.points, eps)}})
    return 0


def cmd_mediate(args) -> int:
    _need(args, "hom", "space")
    X, n = io.read_space(args.space), _n(args)
    h = io.read_hom(args.hom)
    L = LambdaAlgebra(X, n)
    if h.target != L.materialize():
        raise UsageError("the hom target must be the table of lambda_n of --space")
    mu = type(h)(h.source, L, tuple(L.element(i) for i in h.images))
    r = adj.mediating_map(mu, X, n)
    Lam = build_biglambda(h.source, n)
    passed = r.factors and r.factoring_count == 1
    _emit(args, io.report("th25", {"points": len(X), "n": n, "carrier": h.source.size}, passed,
                          {"u": {str(x): [Lam.labels[j][0], list(Lam.labels[j][1])]
                                 for x, j in zip(X.points, r.u)},
                           "factors": r.factors, "factoring_maps": r.factoring_count,
                           "maps_scanned": r.candidate_count}))
    return 0 if passed else 1


def cmd_reflect(args) -> int:
    S, n = _algebra(args), _n(args)
    r = adj.reflect(S, n)
    certs = {"reflection_size": r.reflection.size, "points": r.reflection.width,
             "eta_injective": r.injective, "kernel": [list(c) for c in r.kernel],
             "kernel_is_d": r.kernel_is_d, "stalk_sizes": list(r.stalk_sizes)}
    if n == 0:
        iso = r.iso_to_quotient
        certs["quotient_to_reflection"] = list(iso.images) if iso else None
        certs["reflection"] = io.algebra_to_json(r.reflection.materialize())
        passed = iso is not None
    else:
        passed = r.injective and set(r.stalk_sizes) <= {n + 1}
    _emit(args, io.report("reflection", {"carrier": S.size, "n": n}, passed, certs))
    return 0 if passed else 1


def cmd_omega(args) -> int:
    _emit(args, io.algebra_to_json(adj.omega(as_boolean(_algebra(args))).algebra))
    return 0


def cmd_big_omega(args) -> int:
    _emit(args, io.algebra_to_json(adj.big_omega(_algebra(args))))
    return 0


def cmd_classify(args) -> int:
    n = _n(args)
    if args.space:
        S = LambdaAlgebra(io.read_space(args.space), n)
        instance = {"algebra": f"lambda_{n}", "points": S.width, "n": n}
    else:
        S = _algebra(args)
        instance = {"carrier": S.size, "n": n}
    classes = adj.classify_t_algebras(S, n)
    _emit(args, io.report("th33", instance, True, {
        "candidates": adj.count_candidates(S, n),
        "isomorphism_classes": len(classes),
        "structure_maps": sum(1 + len(c.transports) for c in classes),
        "representatives": [{"canonical": c.strict,
                             "layers": [[_plain(g) for g in layer] for layer in c.layers]}
                            for c in classes]}))
    return 0


def cmd_verify(args) -> int:
    order = list(SUITES)
    suite = args.suite
    if suite and suite.isdigit() and 1 <= int(suite) <= len(order):
        suite = order[int(suite) - 1]
    names = order if suite in (None, "all") else [suite]
    if any(name not in SUITES for name in names):
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    reports, ok = [], True
    for name in names:
        r = run_suite(name, max_size=args.max_size, n=args.n)
        ok &= r.passed
        reports.extend(r.reports)
        print(f"{'PASS' if r.passed else 'FAIL'} {name} ({len(r.reports)} instances)")
    if args.json:
        Path(args.json).write_text(io.dumps(reports))
    return 0 if ok else 1


def cmd_hasse(args) -> int:
    dot = emit_hasse(_algebra(args))
    if args.dot:
        Path(args.dot).write_text(dot)
    else:
        sys.stdout.write(dot)
    return 0


VERBS = {
    "validate": cmd_validate, "primitive": cmd_primitive, "from-stalks": cmd_from_stalks,
    "dual": cmd_dual, "lambda": cmd_lambda, "biglambda": cmd_biglambda, "homs": cmd_homs,
    "spectral": cmd_spectral, "eta": cmd_eta, "epsilon": cmd_epsilon, "mediate": cmd_mediate,
    "reflect": cmd_reflect, "omega": cmd_omega, "big-omega": cmd_big_omega,
    "classify-t-algebras": cmd_classify, "verify": cmd_verify, "hasse": cmd_hasse,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewstone",
                                description="Finite skew Boolean algebras and their dualities.")
    p.add_argument("verb", choices=list(VERBS))
    p.add_argument("--n", type=int)
    p.add_argument("--algebra")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--space")
    p.add_argument("--etale")
    p.add_argument("--hom")
    p.add_argument("--stalks", help="comma-separated stalk sizes, e.g. 2,1")
    p.add_argument("--count", action="store_true")
    p.add_argument("--json", help="write JSON output here instead of stdout")
    p.add_argument("--dot", help="write DOT output here instead of stdout")
    p.add_argument("--max-size", type=int)
    p.add_argument("--suite", help="suite name, criterion number 1-10, or 'all'")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return VERBS[args.verb](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"skewstone: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"skewstone: error: {exc}", file=sys.stderr)
        return 2
    except SkewStoneError as exc:
        print(f"skewstone: {type(exc).__name__}: {exc}", file=sys.stderr)
        violations = getattr(exc, "violations", None)
        for name, witness in violations or ():
            print(f"  {name}: {witness}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
