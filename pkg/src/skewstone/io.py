"""JSON encodings for algebras, homomorphisms, spaces, etale spaces and
the derived objects the command line emits.

Every ``*_to_json`` output parses back through the matching reader.
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import SkewBA, SkewHom, validate_algebra
from .biglambda import BigLambdaSpace
from .errors import MalformedTable
from .etale import Cohomomorphism, EtaleSpace
from .lambda_n import LambdaAlgebra, LambdaElement
from .stone import FiniteBooleanSpace


def load(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _resolve(ref, base: Path | None):
    if isinstance(ref, str):
        p = Path(ref)
        if base is not None and not p.is_absolute():
            p = base / p
        return load(p), p.parent
    return ref, base


# -- algebras ----------------------------------------------------------------


def algebra_to_json(S) -> dict:
    if isinstance(S, LambdaAlgebra):
        S = S.materialize()
    out = {"carrier": S.size, "zero": S.zero,
           "meet": [list(r) for r in S.meet_table],
           "join": [list(r) for r in S.join_table]}
    if S.names is not None:
        out["names"] = list(S.names)
    return out


def algebra_from_json(data: dict) -> SkewBA:
    """Parse and validate; raises ``MalformedTable`` or ``AxiomViolation``."""
    try:
        m = data["carrier"]
        meet, join = data["meet"], data["join"]
    except (KeyError, TypeError) as exc:
        raise MalformedTable(f"missing field {exc}") from None
    if not isinstance(m, int) or len(meet) != m:
        raise MalformedTable("carrier does not match the table size")
    return validate_algebra(meet, join, data.get("zero", 0), data.get("names"))


def read_algebra(path) -> SkewBA:
    return algebra_from_json(load(path))


def hom_to_json(h: SkewHom) -> dict:
    return {"source": algebra_to_json(h.source), "target": algebra_to_json(h.target),
            "map": list(h.images)}


def hom_from_json(data: dict, base: Path | None = None) -> SkewHom:
    src, _ = _resolve(data["source"], base)
    tgt, _ = _resolve(data["target"], base)
    S, T = algebra_from_json(src), algebra_from_json(tgt)
    images = tuple(data["map"])
    if len(images) != S.size or not all(isinstance(v, int) and 0 <= v < T.size for v in images):
        raise MalformedTable("map must list one target index per source element")
    return SkewHom(S, T, images)


def read_hom(path) -> SkewHom:
    return hom_from_json(load(path), Path(path).parent)


# -- spaces ------------------------------------------------------------------


def space_to_json(X: FiniteBooleanSpace) -> dict:
    return {"points": list(X.points)}


def space_from_json(data: dict) -> FiniteBooleanSpace:
    return FiniteBooleanSpace(tuple(data["points"]))


def read_space(path) -> FiniteBooleanSpace:
    return space_from_json(load(path))


def map_to_json(f: dict) -> dict:
    return {"map": dict(f)}


def map_from_json(data: dict) -> dict:
    return dict(data["map"])


def etale_to_json(E: EtaleSpace) -> dict:
    return {"base": list(E.base.points),
            "stalks": {str(x): len(E.stalk(x)) for x in E.base.points}}


def etale_from_json(data: dict) -> EtaleSpace:
    base = FiniteBooleanSpace(tuple(data["base"]))
    return EtaleSpace.from_stalks(base, {x: data["stalks"][str(x)] for x in base.points})


def cohom_to_json(k: Cohomomorphism) -> dict:
    return {"base_map": {str(x): y for x, y in k.base_map.items()},
            "components": {str(x): dict(c) for x, c in k.components.items()}}


def cohom_from_json(data: dict, B: EtaleSpace, A: EtaleSpace) -> Cohomomorphism:
    base_map = {x: data["base_map"][str(x)] for x in A.base.points}
    comps = {x: dict(data["components"][str(x)]) for x in A.base.points}
    return Cohomomorphism(B, A, base_map, comps)


# -- lambda and Lambda -------------------------------------------------------


def lambda_element_to_json(e: LambdaElement) -> dict:
    return {"n": e.n, "values": {str(x): v for x, v in e.mapping.items()},
            "flag": [sorted(map(str, part)) for part in e.flag]}


def lambda_element_from_json(data: dict, X: FiniteBooleanSpace) -> LambdaElement:
    values = data["values"]
    return LambdaElement.from_mapping(X, data["n"], {x: values.get(str(x), 0) for x in X.points})


def biglambda_to_json(Lam: BigLambdaSpace) -> dict:
    S = Lam.source
    points = []
    for p, label in zip(Lam.points, Lam.labels):
        F, f = label
        entry = {"map": [p(a) for a in S.elements()], "F": F}
        if isinstance(S, LambdaAlgebra):
            entry["f"] = {str(i): v for i, v in enumerate(f, 1)}
        else:
            entry["f"] = {str(c): v for c, v in zip(S.stalk(F), f)}
        points.append(entry)

    def key(s):
        return "".join(map(str, s)) if isinstance(s, tuple) else str(s)

    subbase = {f"({key(s)},{i})": sorted(js) for (s, i), js in Lam.subbase.items() if i > 0}
    return {"points": points, "subbase": subbase}


def report(theorem: str, instance: dict, passed: bool, certificates: dict) -> dict:
    return {"theorem": theorem, "instance": instance,
            "status": "pass" if passed else "fail", "certificates": certificates}
