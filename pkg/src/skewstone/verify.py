"""Verification suites, one per acceptance criterion.

Each suite returns a :class:`SuiteResult` whose ``reports`` are JSON-ready
dicts ``{"theorem", "instance", "status", "certificates"}``.  Instances are
independent; ``SKEWSTONE_THREADS`` sets the worker count and reports come
back in instance order regardless.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import adjunction as adj
from .algebra import (algebra_from_stalks, as_boolean, boolean_power, count_homs, d_classes,
                      enumerate_homs_brute, enumerate_homs_search, hom_from_dual, is_bijective,
                      is_homomorphism, is_isomorphic, iter_homs, primitive)
from .biglambda import build_biglambda, preimage_law_failures, subbase_identity_check
from .etale import (Cohomomorphism, EtaleSpace, beta_iso, dualize_cohom, dualize_hom,
                    gamma_iso, is_spectral, sections_algebra, spectral_morphisms,
                    spectrum_etale)
from .io import report
from .lambda_n import LambdaAlgebra, d_and_order_lemmas, lambda_on_map
from .stone import FiniteBooleanSpace, dual_space_S

# morphisms 4 -> 3 standing for the three germs of 4, as value tables
SPECTRAL_4 = ((0, 1, 2, 2), (0, 2, 1, 2), (0, 2, 2, 1))
# above this many morphisms a hom-set is covered by a spanning family
FULL_HOMSET_LIMIT = 256


@dataclass
class SuiteResult:
    name: str
    reports: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r["status"] == "pass" for r in self.reports)

    def failures(self) -> list:
        return [r for r in self.reports if r["status"] != "pass"]


def _cap(default: int, given: int | None) -> int:
    return default if given is None else min(default, given)


def threads() -> int:
    try:
        return max(1, int(os.environ.get("SKEWSTONE_THREADS", "1")))
    except ValueError:
        return 1


def _run(name: str, fn: Callable, instances) -> SuiteResult:
    start = time.perf_counter()
    instances = list(instances)
    if threads() > 1:
        with ThreadPoolExecutor(threads()) as pool:
            reports = list(pool.map(fn, instances))
    else:
        reports = [fn(i) for i in instances]
    return SuiteResult(name, reports, time.perf_counter() - start)


# -- families ----------------------------------------------------------------


def partitions(k: int, largest: int | None = None):
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest or k), 0, -1):
        for rest in partitions(k - first, first):
            yield (first,) + rest


def profiles(max_germs: int) -> list:
    return [p for k in range(max_germs + 1) for p in partitions(k)]


def profile_size(p) -> int:
    out = 1
    for k in p:
        out *= k + 1
    return out


def generated_profiles(max_size: int) -> list:
    """Stalk profiles whose section algebra has at most ``max_size`` elements."""
    out = [p for k in range(max_size) for p in partitions(k)
           if profile_size(p) <= max_size]
    return sorted(out, key=lambda p: (profile_size(p), p))


def generated_algebras(max_size: int) -> list:
    return [(p, algebra_from_stalks(p)) for p in generated_profiles(max_size)]


def spaces(max_points: int) -> list:
    return [FiniteBooleanSpace(tuple("pqrs"[:k])) for k in range(max_points + 1)]


def all_maps(X: FiniteBooleanSpace, Y: FiniteBooleanSpace):
    for image in itertools.product(Y.points, repeat=len(X)):
        yield dict(zip(X.points, image))


def _elementary_components(dom, codomain) -> list:
    """A constant reference map ``dom -> codomain`` and every map that
    differs from it at exactly one point."""
    ref = {x: codomain[0] for x in dom}
    return [ref] + [{**ref, x: v} for x in dom for v in codomain[1:]]


def _spanning_choices(options: list):
    """Vary one coordinate at a time away from the first option of each."""
    reference = [o[0] for o in options]
    for k, opts in enumerate(options):
        for j, opt in enumerate(opts):
            if j or k == 0:
                yield reference[:k] + [opt] + reference[k + 1:]


def spanning_homs(S, T):
    """Morphisms ``S -> T`` covering every naturality square of the hom-set.

    At an element ``a`` and an atom class ``G`` of ``T``, both sides of a
    square depend only on the source class chosen for ``G`` and on the
    component's value at the one germ of ``a`` over that class.  The
    family realizes every such (class, germ, value) choice.
    """
    Gs = list(T.atom_classes)
    options = [[(F, c) for F in S.atom_classes
                for c in _elementary_components(S.stalk(F), T.stalk(G))] for G in Gs]
    if any(not o for o in options):
        return
    for choice in _spanning_choices(options):
        yield hom_from_dual(S, T, {G: F for G, (F, _) in zip(Gs, choice)},
                            {G: c for G, (_, c) in zip(Gs, choice)})


def homs_for_naturality(S, T):
    if count_homs(S, T) <= FULL_HOMSET_LIMIT:
        return "all", iter_homs(S, T)
    return "spanning", spanning_homs(S, T)


def cohoms_for_naturality(B: EtaleSpace, A: EtaleSpace):
    X = A.base.points
    full = [[(y, dict(zip(B.stalk(y), vals))) for y in B.base.points
             for vals in itertools.product(A.stalk(x), repeat=len(B.stalk(y)))] for x in X]
    total = 1
    for o in full:
        total *= len(o)
    if total <= FULL_HOMSET_LIMIT:
        choices, mode = itertools.product(*full), "all"
    else:
        options = [[(y, c) for y in B.base.points
                    for c in _elementary_components(B.stalk(y), A.stalk(x))] for x in X]
        choices, mode = _spanning_choices(options), "spanning"
    return mode, total, (Cohomomorphism(B, A, {x: y for x, (y, _) in zip(X, c)},
                                        {x: comp for x, (_, comp) in zip(X, c)})
                         for c in choices)


# -- 1. morphism count -------------------------------------------------------


def suite_morphism_count(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    def check(_):
        four, three = primitive(2), primitive(1)
        homs = list(iter_homs(four, three))
        search = [h.images for h in enumerate_homs_search(four, three)]
        brute = [h.images for h in enumerate_homs_brute(four, three)]
        spectral = tuple(h.images for h in spectral_morphisms(four, 1))
        minimal = [h.images for h in iter_homs(four, three) if is_spectral(h, 1)]
        ok = (len(homs) == 8 and len(search) == 8 and len(brute) == 8
              and set(h.images for h in homs) == set(search) == set(brute)
              and spectral == SPECTRAL_4 and set(minimal) == set(SPECTRAL_4))
        return report("morphism_count", {"source": "4", "target": "3", "n": 1}, ok,
                      {"homs": len(homs), "search": len(search), "brute": len(brute),
                       "spectral": [list(s) for s in spectral],
                       "minimal_preimage_of_1": sorted(map(list, minimal))})
    return _run("morphism-count", check, [None])


# -- 2. duality --------------------------------------------------------------


def _beta_square(h, betas) -> bool:
    S, T = h.source, h.target
    lhs = [betas[T](h(a)) for a in S.elements()]
    k = dualize_cohom(dualize_hom(h, check=False))
    rhs = [k(betas[S](a)) for a in S.elements()]
    return lhs == rhs


def _gamma_square(k: Cohomomorphism, gammas) -> bool:
    """``k** o gamma`` agrees with ``gamma o k`` on base points and germs."""
    B, A = k.source, k.target
    kk = dualize_hom(dualize_cohom(k), check=False)
    gB, gA = gammas[B], gammas[A]
    for x in A.base.points:
        if kk.base_map[gA.base_map[x]] != gB.base_map[k.base_map[x]]:
            return False
        comp = kk.components[gA.base_map[x]]
        for b, a in k.components[x].items():
            if comp[gB.germ_map[b]] != gA.germ_map[a]:
                return False
    return True


def suite_duality(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    """``max_size`` caps the total germ count (6)."""
    ps = profiles(_cap(6, max_size))
    algebras = {p: algebra_from_stalks(p) for p in ps}
    etales = {p: EtaleSpace.from_profile(p) for p in ps}
    betas, gammas = {}, {}

    def objects(p):
        S, E = algebras[p], etales[p]
        beta = beta_iso(S)
        SA = sections_algebra(spectrum_etale(S)).algebra
        beta_ok = is_homomorphism(beta.images, S, SA).is_morphism and is_bijective(beta, S, SA)
        g = gamma_iso(E)
        EE = g.double_dual
        germs_ok = sorted(g.germ_map.values()) == sorted(EE.germs)
        base_ok = sorted(g.base_map.values()) == sorted(EE.base.points)
        proj_ok = all(EE.project(g.germ_map[a]) == g.base_map[E.project(a)] for a in E.germs)
        ufs_ok = all(g.ultrafilter(a) == frozenset(
            s for s in sections_algebra(E).algebra.elements()
            if sections_algebra(E).algebra.leq(g.germ_map[a], s)) for a in E.germs)
        betas[S] = lambda a, beta=beta: beta(a)
        gammas[E] = g
        ok = beta_ok and germs_ok and base_ok and proj_ok and ufs_ok
        return report("duality", {"profile": list(p)}, ok,
                      {"beta_bijective_hom": beta_ok, "gamma_germs": germs_ok,
                       "gamma_base": base_ok, "gamma_projection": proj_ok,
                       "gamma_ultrafilters": ufs_ok})

    result = _run("duality", objects, ps)

    def squares(pair):
        p, q = pair
        S, T = algebras[p], algebras[q]
        mode, homs = homs_for_naturality(S, T)
        checked = bad = 0
        for h in homs:
            checked += 1
            bad += not _beta_square(h, betas)
        B, A = etales[p], etales[q]
        cmode, total, cohoms = cohoms_for_naturality(B, A)
        c_checked = c_bad = 0
        for k in cohoms:
            c_checked += 1
            c_bad += not _gamma_square(k, gammas)
        return report("duality", {"source": list(p), "target": list(q)}, not bad and not c_bad,
                      {"homs": count_homs(S, T), "hom_mode": mode, "homs_checked": checked,
                       "beta_failures": bad, "cohoms": total, "cohom_mode": cmode,
                       "cohoms_checked": c_checked, "gamma_failures": c_bad})

    more = _run("duality", squares, itertools.product(ps, ps))
    result.reports += more.reports
    result.elapsed += more.elapsed
    return result


# -- 3. adjunction -----------------------------------------------------------


def suite_adjunction(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    cases = [(p, S, X, m) for p, S in generated_algebras(_cap(4, max_size))
             for X in spaces(2) for m in range(_cap(1, n) + 1)]

    def check(case):
        p, S, X, m = case
        L = LambdaAlgebra(X, m)
        mus = list(iter_homs(S, L))
        bad = []
        for k, mu in enumerate(mus):
            r = adj.mediating_map(mu, X, m)
            if not (r.factors and r.factoring_count == 1):
                bad.append(k)
        tri = adj.check_triangle_identities(S, X, m)
        return report("th25", {"profile": list(p), "points": len(X), "n": m},
                      not bad and tri.passed,
                      {"morphisms": len(mus), "factorization_failures": bad,
                       "triangle_algebra_side": tri.algebra_side,
                       "triangle_space_side": [list(f) for f in tri.space_side]})

    return _run("adjunction", check, cases)


# -- 4. embedding ------------------------------------------------------------


def suite_embedding(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    def check(case):
        p, S = case
        r1 = adj.reflect(S, 1)
        r0 = adj.reflect(S, 0)
        commutative = S.is_commutative()
        ok = r1.injective and (commutative or (not r0.injective and r0.kernel_is_d))
        return report("th3", {"profile": list(p), "size": S.size}, ok,
                      {"n1_injective": r1.injective, "commutative": commutative,
                       "n0_injective": r0.injective,
                       "n0_kernel": [list(c) for c in r0.kernel],
                       "n0_kernel_is_d": r0.kernel_is_d})

    return _run("embedding", check, generated_algebras(_cap(8, max_size)))


# -- 5. reflection -----------------------------------------------------------


def suite_reflection(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    def check(case):
        p, S = case
        r = adj.reflect(S, 0)
        iso = r.iso_to_quotient
        return report("reflection", {"profile": list(p), "size": S.size, "n": 0},
                      iso is not None,
                      {"quotient_to_reflection": list(iso.images) if iso else None,
                       "reflection_size": r.reflection.size,
                       "classes": len(d_classes(S))})

    return _run("reflection", check, generated_algebras(_cap(8, max_size)))


# -- 6. monad ----------------------------------------------------------------


MONAD_ALGEBRAS = (("2", primitive(0)), ("3", primitive(1)), ("4", primitive(2)),
                  ("2x2", boolean_power(2)))


def suite_monad(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    cases = [(name, S, m) for name, S in MONAD_ALGEBRAS if S.size <= _cap(4, max_size)
             for m in range(_cap(1, n) + 1)]

    def check(case):
        name, S, m = case
        r = adj.check_monad_laws(S, m)
        duals = (adj.eta_dual_failures(S, m) + adj.epsilon_dual_failures(S, m)
                 + adj.mu_dual_failures(S, m))
        return report("monad_laws", {"algebra": name, "n": m}, r.passed and not duals,
                      {law: {"checked": c, "failures": len(bad)}
                       for law, (c, bad) in r.checks.items()} | {"dual_action_failures": duals})

    return _run("monad", check, cases)


# -- 7. classification -------------------------------------------------------


def suite_classification(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    n = _cap(1, n)

    def lambda_case(case):
        X, m = case
        L = LambdaAlgebra(X, m)
        found = adj.t_algebra_structures(L, m)
        classes = adj.classify_t_algebras(L, m)
        ok = (len(classes) == 1 and classes[0].strict
              and len(found) == 1 + len(classes[0].transports))
        return report("th33", {"algebra": f"lambda_{m}", "points": len(X), "n": m}, ok,
                      {"candidates": adj.count_candidates(L, m), "structure_maps": len(found),
                       "isomorphism_classes": len(classes),
                       "representative_is_canonical": bool(classes) and classes[0].strict,
                       "layers": [[list(map(list, layer)) for layer in c.layers]
                                  for c in classes]})

    def non_lambda_case(case):
        name, S = case
        classes = adj.classify_t_algebras(S, n)
        return report("th33", {"algebra": name, "n": n}, not classes,
                      {"candidates": adj.count_candidates(S, n), "structure_maps": len(classes)})

    def morphism_case(case):
        X1, X2 = case
        L1, L2 = LambdaAlgebra(X1, n), LambdaAlgebra(X2, n)
        lam = {}
        for f in all_maps(X2, X1):
            lam[tuple(lambda_on_map(f, X2, X1, n)(a) for a in L1.atoms())] = f
        wrong = 0
        for h in iter_homs(L1, L2):
            key = tuple(h(a) for a in L1.atoms())
            got = adj.check_t_morphism(h, X1, X2, n)
            wrong += got != lam.get(key)
        return report("th33", {"X1": len(X1), "X2": len(X2), "n": n}, not wrong,
                      {"morphisms": sum(1 for _ in iter_homs(L1, L2)),
                       "lambda_of_maps": len(lam), "mismatches": wrong})

    out = _run("classification", lambda_case, [(X, m) for X in spaces(2) for m in range(n + 1)])
    for fn, cases in ((non_lambda_case, [("4", primitive(2)), ("2x2", boolean_power(2))]),
                      (morphism_case, list(itertools.product(spaces(2), spaces(2))))):
        more = _run("classification", fn, cases)
        out.reports += more.reports
        out.elapsed += more.elapsed
    return out


# -- 8. lambda lemmas --------------------------------------------------------


def suite_lambda_lemmas(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    """``max_size`` caps the number of points (3)."""
    def check(case):
        X, m = case
        r = d_and_order_lemmas(X, m)
        return report("lambda_lemmas", {"points": len(X), "n": m}, r.passed, r.summary())

    return _run("lambda-lemmas", check,
                [(X, m) for X in spaces(_cap(3, max_size)) for m in range(_cap(2, n) + 1)])


# -- 9. subbase --------------------------------------------------------------


def suite_subbase(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    algebras = generated_algebras(_cap(6, max_size))
    cases = [(p, S, q, T, m) for p, S in algebras for q, T in algebras
             for m in range(_cap(1, n) + 1)]

    def check(case):
        p, S, q, T, m = case
        sub = subbase_identity_check(S, m) if p == q else None
        bad = 0
        homs = list(iter_homs(S, T))
        for h in homs:
            bad += bool(preimage_law_failures(h, m))
        ok = not bad and (sub is None or sub.passed)
        certs = {"morphisms": len(homs), "preimage_failures": bad}
        if sub is not None:
            certs |= {"points": len(build_biglambda(S, m)),
                      "identity_failures": sub.identity_failures,
                      "separation_failures": len(sub.separation_failures),
                      "singletons_certified": sum(1 for v in sub.discreteness.values() if v)}
        return report("subbase", {"source": list(p), "target": list(q), "n": m}, ok, certs)

    return _run("subbase", check, cases)


# -- 10. omega / Omega -------------------------------------------------------


def suite_omega_pair(max_size: int | None = None, n: int | None = None) -> SuiteResult:
    size = _cap(4, max_size)
    booleans = [(f"2^{k}", boolean_power(k)) for k in range(3) if 2 ** k <= size]
    cases = [(bname, B, p, S) for bname, B in booleans for p, S in generated_algebras(size)]

    def check(case):
        bname, B, p, S = case
        r = adj.check_omega_adjunction(S, B)
        O = adj.big_omega(S)
        points = len(build_biglambda(S, 1))
        powerset_ok = O.size == 2 ** points and len(as_boolean(O).atoms) == points
        W = adj.omega(B)
        iso = is_isomorphic(W.algebra, LambdaAlgebra(dual_space_S(B), 1).materialize())
        ok = r.passed and powerset_ok and iso is not None
        return report("omega_pair", {"boolean": bname, "profile": list(p)}, ok,
                      {"omega_iso_to_lambda_1": r.iso_ok, "omega_iso_search": iso is not None,
                       "unit_is_morphism": r.unit_is_morphism, "morphisms": r.homs_checked,
                       "factorization_failures": r.factorization_failures,
                       "Omega_size": O.size, "Lambda_1_points": points})

    return _run("omega-pair", check, cases)


SUITES = {
    "morphism-count": suite_morphism_count,
    "duality": suite_duality,
    "adjunction": suite_adjunction,
    "embedding": suite_embedding,
    "reflection": suite_reflection,
    "monad": suite_monad,
    "classification": suite_classification,
    "lambda-lemmas": suite_lambda_lemmas,
    "subbase": suite_subbase,
    "omega-pair": suite_omega_pair,
}


def run_suite(name: str, **kwargs) -> SuiteResult:
    return SUITES[name](**kwargs)
