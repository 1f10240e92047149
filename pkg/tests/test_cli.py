import io
import json
import subprocess
import sys

import pytest

from linfpost import fileio
from linfpost.cli import main
from linfpost.mc_integration import LForm, PolyForm, heisenberg, maurer_cartan_of


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip().startswith("{") else text)


@pytest.fixture
def string_file(tmp_path):
    p = tmp_path / "str.json"
    code, rep = run("examples", "str-so3", "--save", str(p))
    assert code == 0 and rep["saved"] == str(p)
    return p


def test_examples_list():
    code, rep = run("examples", "--list")
    assert code == 0 and "str-so3" in rep["examples"] and "k-z2-2" in rep["examples"]


def test_verify_passes(string_file):
    code, rep = run("verify", str(string_file), "--jacobi", "--coalgebra", "--up-to", "4")
    assert code == 0 and rep["ok"]


def test_verify_reports_corruption(string_file, tmp_path):
    doc = json.loads(string_file.read_text())
    # send [e1, e2] to e1 instead of e3
    for e in doc["brackets"]:
        if e["arity"] == 2 and e["inputs"] == ["e1", "e2"]:
            e["output"] = "e1"
    bad = tmp_path / "bad.json"
    bad.write_text(fileio.dumps(doc))
    code, rep = run("verify", str(bad), "--jacobi", "--up-to", "4")
    assert code == 1 and not rep["ok"]
    assert rep["jacobi"]["witness"]["arity"] == 3


def test_verify_input_error(string_file, tmp_path):
    doc = json.loads(string_file.read_text())
    doc["brackets"][0]["coeff"] = "x/2"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    out = io.StringIO()
    assert main(["verify", str(bad)], out=out) == 2


def test_missing_file_is_input_error(tmp_path):
    assert main(["verify", str(tmp_path / "none.json")], out=io.StringIO()) == 2


def test_postnikov_with_morphism(string_file):
    code, rep = run("postnikov", str(string_file), "--morphism", "str->g", "--m", "1")
    assert code == 0
    psi = rep["k_invariant"]["psi"]["3"]
    assert psi == [{"coeff": "-2", "inputs": ["e1", "e2", "e3"], "output": "a0[2]"}]


def test_postnikov_tower_only(string_file):
    code, rep = run("postnikov", str(string_file))
    assert code == 0 and rep["ok"]


def test_kinv_on_algebra_file(string_file):
    code, rep = run("kinv", str(string_file), "--morphism", "str->g")
    assert code == 0 and rep["ok"]


def test_kinv_simplicial_low_levels():
    code, rep = run("kinv", "k-z2-2", "--up-to", "3")
    assert code == 0 and rep["ok"] and rep["fiber_group"]


@pytest.mark.parametrize("argv", [
    ["simplicial", "--build", "K", "--group", "Z2", "--n", "2", "--check-identities", "--kan", "--up-to", "3"],
    ["simplicial", "--build", "N", "--group", "S3", "--pi", "1", "--tau1", "--up-to", "3"],
    ["simplicial", "--build", "N", "--group", "Z4", "--iso", "nerve_coords"],
    ["simplicial", "--build", "K", "--group", "Z3", "--n", "1", "--iso", "wbarK_to_K"],
])
def test_simplicial_commands(argv):
    code, rep = run(*argv)
    assert code == 0 and rep["ok"], rep


def test_simplicial_save_and_reload(tmp_path):
    p = tmp_path / "n.json"
    code, _ = run("simplicial", "--build", "N", "--group", "Z3", "--save", str(p), "--up-to", "3")
    assert code == 0
    code, rep = run("simplicial", "--file", str(p), "--check-identities", "--up-to", "3")
    assert code == 0 and rep["ok"]


def test_simplicial_dot():
    out = io.StringIO()
    assert main(["simplicial", "--build", "N", "--group", "Z2", "--dot"], out=out) == 0
    assert "digraph" in out.getvalue()


def test_integrate_flat_connection(tmp_path):
    h = heisenberg()
    X = LForm(h.space, 2, {"x": PolyForm.coord(2, 1), "y": PolyForm.coord(2, 2)})
    th = maurer_cartan_of(h, X)
    alg, forms = tmp_path / "h.json", tmp_path / "th.json"
    fileio.save_algebra(alg, h)
    forms.write_text(fileio.dumps(fileio.forms_to_doc(th)))
    code, rep = run("integrate", str(alg), str(forms))
    assert code == 0 and rep["is_mc"] and rep["flat_section"]["round_trip"]
    # exponential coordinates t1 x + t2 y read off at vertices 1 and 2
    assert rep["flat_section"]["vertices"] == [{"x": "1"}, {"y": "1"}]


def test_integrate_non_flat(tmp_path):
    h = heisenberg()
    th = LForm(h.space, 2, {"x": PolyForm.dcoord(2, 1), "y": PolyForm.dcoord(2, 2)})
    alg, forms = tmp_path / "h.json", tmp_path / "th.json"
    fileio.save_algebra(alg, h)
    forms.write_text(fileio.dumps(fileio.forms_to_doc(th)))
    code, rep = run("integrate", str(alg), str(forms))
    assert code == 1 and not rep["is_mc"]


def test_console_script_version():
    r = subprocess.run([sys.executable, "-m", "linfpost.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()
