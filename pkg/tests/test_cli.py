import json
import subprocess
import sys

import pytest

import toricmmp.puffing as puffing
from toricmmp import documents as docs
from toricmmp.cli import main
from toricmmp.corpus import octant_fan
from toricmmp.errors import DocumentError


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def example_files(tmp_path, capsys):
    assert main(["examples", "-d", str(tmp_path)]) == 0
    capsys.readouterr()
    return {n: tmp_path / f"{n}.json" for n in ("example-1", "example-2")}


def test_example_document_loads(example_files):
    fan, X = docs.load_pair(example_files["example-1"])
    assert len(fan.rays) == 14 and len(fan.cones) == 24


def test_round_trip_is_byte_exact(example_files, tmp_path):
    text = example_files["example-2"].read_text()
    doc = docs.loads(text)
    again = tmp_path / "again.json"
    fan, coeffs = docs.pair_from_dict(doc)
    docs.save(docs.pair_to_dict(fan, coeffs), again)
    assert again.read_text() == text
    assert docs.dumps(docs.canonicalize(doc)) == text


def test_fan_canonicalisation():
    doc = {"dimension": 2, "rays": [[2, 0], [0, 3], [-1, -1]], "maximal_cones": [[1, 0], [2, 1], [0, 2]]}
    canon = docs.canonicalize(doc)
    assert canon["rays"] == [[1, 0], [0, 1], [-1, -1]]
    assert canon["maximal_cones"] == [[0, 1], [0, 2], [1, 2]]
    assert docs.canonicalize(canon) == canon


def test_decimals_are_rejected():
    doc = docs.pair_to_dict(octant_fan(), [1] * 6)
    doc["class_coefficients"]["0"] = "0.5"
    with pytest.raises(DocumentError) as err:
        docs.pair_from_dict(doc)
    assert "class_coefficients['0']" in str(err.value)
    doc["class_coefficients"]["0"] = 0.5
    with pytest.raises(DocumentError):
        docs.pair_from_dict(doc)
    assert docs.parse_rational("-3/4") == docs.parse_rational(" -3 / 4 ")


def test_schema_errors_name_the_field():
    with pytest.raises(DocumentError) as err:
        docs.fan_from_dict({"dimension": 2, "rays": [[1, 0], [0, 1]], "maximal_cones": [[0, 5]]})
    assert err.value.where == "fan.maximal_cones[0][1]"
    with pytest.raises(DocumentError) as err:
        docs.fan_from_dict({"dimension": 2, "rays": [[1, 0, 0]], "maximal_cones": []})
    assert "fan.rays[0]" in str(err.value)
    with pytest.raises(DocumentError) as err:
        docs.loads('{"dimension": 2,\n "rays": [}')
    assert "line 2" in str(err.value)


def test_puff_report_for_example_one(example_files, capsys):
    code, out, _ = run(["minimal-model", str(example_files["example-1"]), "--method", "puff"], capsys)
    assert code == 0
    rep = json.loads(out)
    rays = {tuple(r) for r in rep["fan"]["rays"]}
    assert rays == {(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)}
    assert rep["kappa"] == 0 and all(rep["checks"].values())


def test_mmp_report_for_example_one(example_files, capsys):
    code, out, _ = run(["minimal-model", str(example_files["example-1"]), "--method", "mmp"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["steps"] == {"divisorial": 8, "flip": 0}
    assert sum(1 for s in rep["trace"] if s["kind"] == "divisorial") == 8


def test_kappa_example_two(example_files, capsys):
    code, out, _ = run(["kappa", str(example_files["example-2"])], capsys)
    assert code == 0 and json.loads(out)["kappa"] == 1


def test_verify_reports(example_files, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    f = str(example_files["example-2"])
    assert main(["minimal-model", f, "--method", "puff", "-o", str(a)]) == 0
    assert main(["minimal-model", f, "--method", "mmp", "-o", str(b)]) == 0
    capsys.readouterr()
    code, out, _ = run(["verify", str(a), str(b)], capsys)
    assert code == 0 and json.loads(out)["agree"]
    # a report from a different pair disagrees
    c = tmp_path / "c.json"
    assert main(["minimal-model", str(example_files["example-1"]), "-o", str(c)]) == 0
    capsys.readouterr()
    code, _, err = run(["verify", str(a), str(c)], capsys)
    assert code == 3 and err.strip() == "claim: adjoint_polytopes_agree"


def test_verify_single_pair(example_files, capsys):
    code, out, _ = run(["verify", str(example_files["example-1"])], capsys)
    assert code == 0 and json.loads(out)["kappa"] == 0


def test_exit_codes(example_files, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dimension": 2, "rays": [[1, 0], [0, 1], [1, 1]],
                               "maximal_cones": [[0, 1], [0, 2]]}))
    code, _, err = run(["validate", str(bad)], capsys)
    assert code == 2 and "invalid input" in err
    code, _, err = run(["minimal-model", str(example_files["example-1"]), "--method", "mmp",
                        "--max-steps", "2"], capsys)
    assert code == 4 and "resource limit" in err


def test_claim_failure_exit(example_files, capsys, monkeypatch):
    monkeypatch.setattr(puffing, "is_nef", lambda h: False)
    code, _, err = run(["minimal-model", str(example_files["example-1"])], capsys)
    assert code == 3 and err.strip() == "claim: nef"


def test_output_is_deterministic(example_files, capsys):
    f = str(example_files["example-2"])
    first = run(["minimal-model", f, "--seed", "5"], capsys)[1]
    second = run(["minimal-model", f, "--seed", "5"], capsys)[1]
    assert first == second


def test_other_commands(example_files, capsys):
    f = str(example_files["example-2"])
    code, out, _ = run(["box", f], capsys)
    box = json.loads(out)["adjoint_polytope"]
    assert code == 0 and box["vertices"] == [["-1", "0", "0"], ["1", "0", "0"]]
    code, out, _ = run(["validate", f], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["smooth"] and rep["terminal"]
    code, out, _ = run(["resolve", f], capsys)
    assert code == 0 and json.loads(out)["added_rays"] == []
    code, out, _ = run(["kappa", f, "--pretty"], capsys)
    assert out == "kappa: 1\n"


def test_example_reference_in_pair_document(tmp_path, capsys):
    p = tmp_path / "ref.json"
    p.write_text(json.dumps({"fan": {"example": "example-1"},
                             "class_coefficients": {str(i): "1" if i < 6 else "2" for i in range(14)}}))
    code, out, _ = run(["kappa", str(p)], capsys)
    assert code == 0 and json.loads(out)["kappa"] == 0


def test_module_entry_point(example_files):
    proc = subprocess.run([sys.executable, "-m", "toricmmp", "kappa", str(example_files["example-1"])],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["kappa"] == 0


def test_resolve_summary(tmp_path, capsys):
    f = tmp_path / "fan.json"
    f.write_text(json.dumps({"dimension": 2, "rays": [[1, 0], [1, 2], [-1, -1]],
                             "maximal_cones": [[0, 1], [1, 2], [0, 2]]}))
    code, out, _ = run(["resolve", str(f), "--pretty"], capsys)
    assert code == 0 and out.startswith("fan: ") and "added rays: (1, 1)" in out
