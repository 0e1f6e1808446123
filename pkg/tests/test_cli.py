import json

import pytest

from skewstone import io
from skewstone.algebra import SkewHom, algebra_from_stalks, primitive
from skewstone.biglambda import build_biglambda
from skewstone.cli import main
from skewstone.etale import spectrum_etale
from skewstone.hasse import covers, emit_hasse
from skewstone.lambda_n import LambdaAlgebra, LambdaElement
from skewstone.stone import space


@pytest.fixture
def files(tmp_path, three, four):
    def put(name, obj):
        p = tmp_path / name
        p.write_text(io.dumps(obj))
        return str(p)

    bad = io.algebra_to_json(three)
    bad["join"][1][2] = 1
    iso = {"source": "three.json", "target": "lam.json", "map": [0, 1, 2]}
    return {
        "three": put("three.json", io.algebra_to_json(three)),
        "four": put("four.json", io.algebra_to_json(four)),
        "bad": put("bad.json", bad),
        "X1": put("x1.json", {"points": ["p"]}),
        "lam": put("lam.json", io.algebra_to_json(LambdaAlgebra(space("p"), 1))),
        "iso": put("iso.json", iso),
        "garbage": put("garbage.json", {"carrier": 3}),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- io ----------------------------------------------------------------------


def test_algebra_round_trip(six):
    assert io.algebra_from_json(json.loads(io.dumps(io.algebra_to_json(six)))) == six


def test_hom_round_trip(four, three):
    h = SkewHom(four, three, (0, 1, 2, 2))
    assert io.hom_from_json(json.loads(io.dumps(io.hom_to_json(h)))) == h


def test_etale_and_lambda_round_trips(six, X2):
    E = spectrum_etale(six)
    assert io.etale_from_json(io.etale_to_json(E)).profile == E.profile
    e = LambdaElement.from_mapping(X2, 1, {"p": 2, "q": 0})
    data = io.lambda_element_to_json(e)
    assert data["flag"] == [["p"], []]
    assert io.lambda_element_from_json(data, X2) == e


def test_biglambda_json_lists_every_point(three):
    data = io.biglambda_to_json(build_biglambda(three, 1))
    assert [p["map"] for p in data["points"]] == [[0, 1, 1], [0, 1, 2], [0, 2, 1], [0, 2, 2]]
    assert data["subbase"]["(1,1)"] == [0, 1]


# -- hasse -------------------------------------------------------------------


def test_hasse_of_three(three):
    assert covers(three) == [(0, 1), (0, 2)]
    dot = emit_hasse(three)
    assert dot.startswith("digraph hasse {") and "rankdir=BT" in dot
    assert dot.count("rank=same") == 2


def test_hasse_of_lambda_table(X2):
    S = LambdaAlgebra(X2, 1).materialize()
    assert len(covers(S)) == 12
    assert emit_hasse(S).count("rank=same") == 4


# -- command line ------------------------------------------------------------


def test_validate_ok(capsys, files):
    code, out, _ = run(capsys, "validate", "--algebra", files["three"])
    assert code == 0 and json.loads(out)["d_classes"] == [[0], [1, 2]]


def test_validate_reports_violations(capsys, files):
    code, _, err = run(capsys, "validate", "--algebra", files["bad"])
    assert code == 1 and "(1, 2)" in err


@pytest.mark.parametrize("argv", [
    ["validate"],
    ["homs", "--source", "nope.json", "--target", "nope.json"],
    ["verify", "--suite", "nope"],
    ["primitive", "--n", "-1"],
    ["from-stalks", "--stalks", "2,x"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_malformed_table_fails_validation(capsys, files):
    assert run(capsys, "validate", "--algebra", files["garbage"])[0] == 1


def test_homs_count(capsys, files):
    assert run(capsys, "homs", "--source", files["four"], "--target", files["three"],
               "--count")[1] == "8\n"


def test_homs_listing(capsys, files):
    code, out, _ = run(capsys, "homs", "--source", files["three"], "--target", files["three"])
    assert code == 0 and json.loads(out)["homs"] == [[0, 1, 1], [0, 1, 2], [0, 2, 1], [0, 2, 2]]


def test_spectral(capsys, files):
    out = json.loads(run(capsys, "spectral", "--algebra", files["four"], "--n", "1")[1])
    assert out["maps"] == [[0, 1, 2, 2], [0, 2, 1, 2], [0, 2, 2, 1]]


def test_mediate(capsys, files):
    code, out, _ = run(capsys, "mediate", "--hom", files["iso"], "--space", files["X1"],
                       "--n", "1")
    report = json.loads(out)
    assert code == 0 and report["theorem"] == "th25" and report["status"] == "pass"
    assert report["certificates"]["u"] == {"p": [1, [1, 2]]}
    assert report["certificates"]["factoring_maps"] == 1


def test_reflect_at_zero(capsys, files):
    code, out, _ = run(capsys, "reflect", "--algebra", files["four"], "--n", "0")
    certs = json.loads(out)["certificates"]
    assert code == 0 and certs["kernel"] == [[0], [1, 2, 3]]
    assert certs["quotient_to_reflection"] == [0, 1]


def test_classify(capsys, files):
    code, out, _ = run(capsys, "classify-t-algebras", "--space", files["X1"], "--n", "1")
    certs = json.loads(out)["certificates"]
    assert code == 0
    assert (certs["candidates"], certs["isomorphism_classes"], certs["structure_maps"]) == \
        (16, 1, 2)
    out = json.loads(run(capsys, "classify-t-algebras", "--algebra", files["four"],
                         "--n", "1")[1])
    assert out["certificates"]["isomorphism_classes"] == 0


def test_output_is_byte_identical(capsys, files, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        assert main(["biglambda", "--algebra", files["four"], "--n", "1",
                     "--json", str(target)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_omega_and_big_omega(capsys, tmp_path):
    two = tmp_path / "two.json"
    two.write_text(io.dumps(io.algebra_to_json(primitive(0))))
    assert json.loads(run(capsys, "omega", "--algebra", str(two))[1])["carrier"] == 3
    three = tmp_path / "three.json"
    three.write_text(io.dumps(io.algebra_to_json(primitive(1))))
    assert json.loads(run(capsys, "big-omega", "--algebra", str(three))[1])["carrier"] == 16
    assert run(capsys, "omega", "--algebra", str(three))[0] == 1


def test_from_stalks_and_dual(capsys, tmp_path):
    code, out, _ = run(capsys, "from-stalks", "--stalks", "2,1")
    assert code == 0 and json.loads(out) == io.algebra_to_json(algebra_from_stalks([2, 1]))
    p = tmp_path / "s.json"
    p.write_text(out)
    dual = json.loads(run(capsys, "dual", "--algebra", str(p))[1])
    assert dual == {"base": [1, 2], "stalks": {"1": 1, "2": 2}}


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "morphism-count")
    assert code == 0 and out.startswith("PASS morphism-count")
    code, out, _ = run(capsys, "verify", "--suite", "7")
    assert code == 0 and out.startswith("PASS classification")


def test_hasse_to_file(capsys, files, tmp_path):
    dot = tmp_path / "h.dot"
    assert main(["hasse", "--algebra", files["three"], "--dot", str(dot)]) == 0
    assert "0 -> 1" in dot.read_text()
