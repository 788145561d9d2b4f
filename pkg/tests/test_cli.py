import json

import pytest

from complicial.cli import EXIT, ExpressionError, evaluate, main, parse
from complicial.serialize import set_from_json
from complicial.strata import Subset, isomorphic
from complicial.zoo import build_complicial


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def build_file(capsys, tmp_path, expr, name, *extra):
    path = tmp_path / name
    assert run(capsys, "build", expr, "--out", str(path), *extra)[0] == 0
    return path


# -- expressions ----------------------------------------------------------------------------------


def test_parse_nested():
    assert parse("gray(deltat(1),delta(2))") == ("gray", [("deltat", ["1"]), ("delta", ["2"])])
    assert parse("gen(4,[0,2])") == ("gen", ["4", ["0", "2"]])


@pytest.mark.parametrize("text", ["comp(2", "comp(2,1))", "comp(2,1) x", "(1,2)"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ExpressionError):
        evaluate(text)


@pytest.mark.parametrize("text", ["comp(2)", "comp(2,3)", "delta(x)", "nope(1)", "mystery", "gen(3,1)"])
def test_evaluate_rejects_bad_arguments(text):
    with pytest.raises(ExpressionError):
        evaluate(text)


def test_evaluate_inclusion():
    e = evaluate("incl(chorn(2,1),comp(2,1))")
    assert isinstance(e, Subset)
    assert e.members == build_complicial(2, 1, "horn").dim_of.keys()


# -- build ---------------------------------------------------------------------------------------------


def test_build_complicial_simplex(capsys):
    code, out, _ = run(capsys, "build", "comp(2,1)")
    doc = json.loads(out)
    assert code == 0
    assert set_from_json(doc).thin == {"012"}


def test_build_gray_of_thin_edges(capsys):
    code, out, _ = run(capsys, "build", "gray(deltat(1),deltat(1))", "--trunc", "2")
    X = set_from_json(json.loads(out))
    assert code == 0
    assert all(g in X.thin for d in (1, 2) for g in X.generators[d])


def test_build_join_matches_complicial_simplex(capsys, tmp_path):
    a = build_file(capsys, tmp_path, "join(comp(1,0),delta(1))", "a.json")
    b = build_file(capsys, tmp_path, "comp(3,0)", "b.json")
    assert run(capsys, "check", "iso", str(a), str(b))[0] == EXIT["pass"]


def test_build_is_byte_identical(capsys, tmp_path):
    a = build_file(capsys, tmp_path, "lax(comp(2,1),delta(1))", "a.json")
    b = build_file(capsys, tmp_path, "lax(comp(2,1),delta(1))", "b.json")
    assert a.read_bytes() == b.read_bytes()


def test_build_summary(capsys):
    code, out, _ = run(capsys, "build", "delta(2)", "--format", "summary")
    assert code == 0 and out.strip() == "counts=[3, 3, 1] thin=0 truncation=2"


def test_build_reads_set_files(capsys, tmp_path):
    a = build_file(capsys, tmp_path, "delta(1)", "a.json")
    code, out, _ = run(capsys, "build", f"dual({a})")
    assert code == 0 and isomorphic(set_from_json(json.loads(out)), evaluate("delta(1)"))


# -- check -------------------------------------------------------------------------------------------------


def test_check_compliciality_of_poset_nerve(capsys, tmp_path):
    X = build_file(capsys, tmp_path, "nerve(poset(2),natural)", "nerve_poset2.json")
    code, out, _ = run(capsys, "check", "compliciality", str(X), "--flavor", "all", "--dim", "3")
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_check_well_tempered_thin_edge(capsys, tmp_path):
    X = build_file(capsys, tmp_path, "deltat(1)", "deltat1.json")
    code, out, _ = run(capsys, "check", "well-tempered", str(X))
    doc = json.loads(out)
    assert code == EXIT["fail"]
    assert doc["witness"][0] == "01"


def test_check_iso_identical_files(capsys, tmp_path):
    a = build_file(capsys, tmp_path, "comp(3,1)", "a.json")
    code, out, _ = run(capsys, "check", "iso", str(a), str(a))
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_check_iso_distinct(capsys):
    assert run(capsys, "check", "iso", "comp(2,0)", "comp(2,1)")[0] == EXIT["fail"]


def test_check_rlp(capsys):
    code, out, _ = run(capsys, "check", "rlp", "incl(chorn(2,1),comp(2,1))", "delta(2)")
    assert code == EXIT["fail"]
    assert run(capsys, "check", "rlp", "incl(chorn(2,1),comp(2,1))", "nerve(poset(2),natural)")[0] == 0


def test_check_budget_is_inconclusive(capsys):
    code, out, _ = run(capsys, "check", "compliciality", "nerve(poset(2),natural)", "--dim", "3", "--budget", "5")
    assert code == EXIT["inconclusive"] and json.loads(out)["verdict"] == "inconclusive"


def test_check_summary_and_report_file(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", "validate", "delta(2)", "--format", "summary", "--out", str(out_file))
    assert code == 0 and out.strip() == "check=validate verdict=pass truncation=2"
    assert json.loads(out_file.read_text())["schema"] == "report/1"


def test_check_strict_and_quasi_category(capsys):
    assert run(capsys, "check", "strict", "nerve(poset(2),natural)", "--dim", "3")[0] == 0
    assert run(capsys, "check", "strict", "deltat(1)")[0] == EXIT["fail"]
    assert run(capsys, "check", "quasi-category", "nerve(cyclic(3))", "--dim", "3")[0] == 0


# -- certify and replay -----------------------------------------------------------------------------------


def test_certify_then_replay(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "certify", "compPP(3,1)", "--start", "chornP(3,1)", "--flavor", "inner",
                     "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert [s["elementary"] for s in doc["steps"]] == [
        {"kind": "horn", "n": 3, "k": 1}, {"kind": "thinness", "n": 3, "k": 1}]
    code, out, _ = run(capsys, "replay", str(path))
    assert code == 0 and json.loads(out)["verdict"] == "pass"
    code, _, _ = run(capsys, "replay", str(path), "--target", "compPP(3,1)", "--start", "chornP(3,1)")
    assert code == 0


def test_replay_against_the_wrong_inclusion(capsys, tmp_path):
    path = tmp_path / "cert.json"
    run(capsys, "certify", "compPP(3,1)", "--start", "chornP(3,1)", "--flavor", "inner", "--out", str(path))
    code, out, _ = run(capsys, "replay", str(path), "--target", "compPP(3,2)", "--start", "chornP(3,2)")
    assert code == EXIT["fail"]


def test_replay_rejects_a_tampered_certificate(capsys, tmp_path):
    path = tmp_path / "cert.json"
    run(capsys, "certify", "compPP(3,1)", "--start", "chornP(3,1)", "--flavor", "inner", "--out", str(path))
    doc = json.loads(path.read_text())
    doc["steps"].reverse()
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "replay", str(path))
    assert code == EXIT["fail"] and json.loads(out)["witness"]["step"] == 0


def test_certify_with_tiny_budget(capsys):
    code, out, _ = run(capsys, "certify", "compPP(3,1)", "--start", "chornP(3,1)", "--flavor", "inner",
                       "--budget", "1")
    assert code == EXIT["inconclusive"]


def test_certify_failure(capsys):
    code, _, _ = run(capsys, "certify", "compPP(3,0)", "--start", "chornP(3,0)", "--flavor", "inner")
    assert code == EXIT["fail"]


def test_certify_summary(capsys):
    code, out, _ = run(capsys, "certify", "compPP(2,1)", "--start", "chornP(2,1)", "--format", "summary")
    assert code == 0 and out.strip() == "verdict=pass steps=2 flavor=inner"


# -- maps and closures ----------------------------------------------------------------------------------------


def test_maps_count_vertices(capsys, tmp_path):
    a = build_file(capsys, tmp_path, "delta(0)", "delta0.json")
    b = build_file(capsys, tmp_path, "delta(2)", "delta2.json")
    code, out, _ = run(capsys, "maps", str(a), str(b), "--count")
    assert code == 0 and out.strip() == "3"


def test_maps_into_group_nerve(capsys, tmp_path):
    e = build_file(capsys, tmp_path, "minimal(E2)", "E2tilde.json")
    z = build_file(capsys, tmp_path, "nerve(cyclic(2),zero_trivial)", "nerveZ2.json")
    code, out, _ = run(capsys, "maps", str(e), str(z), "--count")
    assert code == 0 and int(out) >= 1


def test_maps_list(capsys):
    code, out, _ = run(capsys, "maps", "point", "delta(1)", "--list")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 2 and len(doc["maps"]) == 2


def test_closure_hom_from_point(capsys, tmp_path):
    A = build_file(capsys, tmp_path, "nerve(poset(2),natural)", "A.json")
    code, out, _ = run(capsys, "closure", "hom", "delta(0)", str(A), "--dim", "2")
    H = set_from_json(json.loads(out))
    assert code == 0
    assert isomorphic(H, evaluate(str(A)).retruncate(2))


# -- usage errors ------------------------------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["build", "comp(9"],
    ["build", "nope(1)"],
    ["check", "iso", "delta(1)"],
    ["check", "compliciality", "missing.json"],
    ["replay", "cert.json", "--target", "delta(1)"],
    ["frobnicate"],
    ["check", "bogus", "delta(1)"],
])
def test_usage_errors_exit_three(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == EXIT["usage"]
