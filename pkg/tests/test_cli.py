import io
import json

import pytest

from surfalg import corpus
from surfalg.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    text = out.getvalue()
    try:
        return code, json.loads(text)
    except json.JSONDecodeError:
        return code, text


def test_build_disc():
    code, rep = run("build", "corpus:disc", "--m", "O(alpha)=1", "--c", "O(alpha)=1")
    assert code == 0 and rep["dimension"] == 40 and rep["schema"] == "surfalg/1"


def test_build_parametric_disc():
    code, rep = run("build", "corpus:disc", "--m", "3")
    assert code == 0 and rep["dimension"] == 36 * 3 + 4


def test_malformed_f_map(tmp_path):
    doc = corpus.load("disc.quiver.json")
    doc["f"]["alpha"], doc["f"]["beta"] = doc["f"]["beta"], doc["f"]["alpha"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, rep = run("build", str(p))
    assert code == 2 and rep["error"] == "FNotFollowingArrows"


def test_singular_spherical_rejected():
    code, rep = run("build", "corpus:sphere", "--m", "1", "1", "--c", "2", "1/2")
    assert code == 2 and rep["error"] == "SingularSpherical"


def test_deform_torus():
    code, rep = run("deform", "corpus:torus", "--I", "2,3", "--eps", "2=1,3=1")
    assert code == 0 and rep["dimension"] == 196


def test_deform_ex66():
    code, rep = run("deform", "corpus:ex66", "--I", "1,2,3", "--eps", "1=1,2=1,3=-1", "--m", "2")
    assert code == 0 and rep["dimension"] == 24 * 2 + 256


def test_blowup_then_build(tmp_path):
    code, doc = run("blowup", "corpus:torus", "--I", "2,3")
    assert code == 0
    p = tmp_path / "blown.json"
    p.write_text(json.dumps(doc))
    code, rep = run("build", str(p))
    assert code == 0 and rep["dimension"] == 204


def test_validate_reports_violations():
    code, rep = run("validate", "corpus:ex66", "--m", "1")
    assert code == 0 and not rep["admissible"] and rep["violations"]


def test_mutate_and_tilting_check():
    code, rep = run("mutate", "corpus:disc", "--xi", "xi", "--show-star")
    assert code == 0 and rep["dimension"] == 36 and "tau.1" in rep["star_arrows"]
    code, rep = run("tilting-check", "corpus:disc", "--xi", "xi")
    assert code == 0 and rep["t1_holds"] and rep["cartan_match"]


def test_oracle_check_on_emitted_algebra(tmp_path):
    code, doc = run("build", "corpus:ex42", "--m", "2", "--emit-algebra")
    assert code == 0
    p = tmp_path / "alg.json"
    p.write_text(json.dumps(doc))
    code, rep = run("oracle-check", str(p))
    assert code == 0 and rep["agrees"] and rep["oracle_dimension"] == 63 and rep["certified"]


def test_gabriel_and_basis():
    code, rep = run("gabriel", "corpus:disc")
    assert code == 0 and set(rep["removed_arrows"]) == {"xi", "mu"}
    code, rep = run("basis", "corpus:disc")
    assert code == 0 and sum(len(v) for v in rep["basis"].values()) == 40


def test_error_exit_codes(tmp_path):
    code, rep = run("build", str(tmp_path / "missing.json"))
    assert code == 2
    code, rep = run("mutate", "corpus:disc", "--xi", "alpha")
    assert code == 2 and rep["error"] == "NotVirtualOrbit"
    p = tmp_path / "junk.json"
    p.write_text("{not json")
    assert run("build", str(p))[0] == 2
    assert run("build", "corpus:nosuch")[0] == 2
    with pytest.raises(SystemExit) as ei:
        main(["nosuchcommand"], out=io.StringIO())
    assert ei.value.code == 2


def test_outputs_are_byte_stable():
    a = io.StringIO()
    b = io.StringIO()
    main(["--format", "text", "mutate", "corpus:sphere", "--xi", "xi,eta"], out=a)
    main(["mutate", "corpus:sphere", "--xi", "xi,eta", "--format", "text"], out=b)
    assert a.getvalue() == b.getvalue() and a.getvalue()


def test_text_mode_relations():
    code, text = run("--format", "text", "build", "corpus:disc")
    assert code == 0 and "cartan" in text and "alpha beta gamma" in text


def test_regress_only_dims():
    code, rep = run("regress", "--only", "dims")
    assert code == 0 and rep["ok"]
    assert {r["category"] for r in rep["rows"]} == {"dims"}


def test_regress_corrupted_golden(tmp_path):
    from importlib.resources import files
    gold = json.loads(files("surfalg").joinpath("corpus/golden.json").read_text())
    gold["cartan"][0]["matrix"][0][0] = "999"
    p = tmp_path / "golden.json"
    p.write_text(json.dumps(gold))
    code, rep = run("regress", "--only", "cartan", "--golden", str(p))
    assert code == 1 and not rep["ok"]
    failed = [r for r in rep["rows"] if not r["ok"]]
    assert failed and all(r["category"] == "cartan" for r in failed)


def test_regress_unknown_category():
    assert run("regress", "--only", "nosuch")[0] == 2


def test_mutate_audit_lists_suppressed_zero_relations():
    code, rep = run("mutate", "corpus:disc", "--xi", "xi", "--audit")
    assert code == 0
    supp = {(r["clause"], r["arrow"]) for r in rep["zero_relation_audit"] if not r["emitted"]}
    assert supp == {("zero2", "nu"), ("zero2", "gamma")}
