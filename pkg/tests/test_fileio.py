import json

import pytest

from linfpost import corpus, fileio
from linfpost.fileio import SchemaError
from linfpost.graded_core import GradedSpace
from linfpost.linfty_core import LInfinityAlgebra
from linfpost.mc_integration import LForm, PolyForm, heisenberg
from linfpost.simplicial_core import cyclic, em_inhomog, nerve, verify_identities


def test_algebra_round_trip_is_byte_identical(tmp_path):
    p = tmp_path / "str.json"
    text = fileio.save_algebra(p, corpus.string_algebra(), [corpus.string_projection()])
    L, ms = fileio.load_algebra(p)
    assert L.same_as(corpus.string_algebra())
    assert ms[0].taylor == corpus.string_projection().taylor
    assert fileio.save_algebra(tmp_path / "again.json", L, ms) == text


def test_empty_algebra(tmp_path):
    L = LInfinityAlgebra(GradedSpace({}), {}, name="empty")
    p = tmp_path / "e.json"
    fileio.save_algebra(p, L)
    M, ms = fileio.load_algebra(p)
    assert M.space.dim() == 0 and not M.brackets and ms == []


def test_rationals_survive():
    L = LInfinityAlgebra(GradedSpace({0: ["a"], 1: ["b"]}), {1: {("b",): {"a": fileio.rational("-3/7")}}})
    doc = fileio.algebra_to_doc(L)
    assert doc["brackets"][0]["coeff"] == "-3/7"
    assert fileio.algebra_from_doc(json.loads(fileio.dumps(doc)))[0].brackets == L.brackets


@pytest.mark.parametrize("bad", ["1.5", "abc", "", "1/0"])
def test_malformed_rational_names_its_path(bad):
    doc = fileio.algebra_to_doc(corpus.so3())
    doc["brackets"][1]["coeff"] = bad
    with pytest.raises(SchemaError) as exc:
        fileio.algebra_from_doc(doc)
    assert exc.value.path == "brackets[1].coeff"


def test_unknown_label_rejected():
    doc = fileio.algebra_to_doc(corpus.so3())
    doc["brackets"][0]["output"] = "nope"
    with pytest.raises(SchemaError):
        fileio.algebra_from_doc(doc)


def test_arity_mismatch_rejected():
    doc = fileio.algebra_to_doc(corpus.so3())
    doc["brackets"][0]["arity"] = 3
    with pytest.raises(SchemaError) as exc:
        fileio.algebra_from_doc(doc)
    assert exc.value.path.endswith(".inputs")


def test_invalid_json_reports_position():
    with pytest.raises(SchemaError) as exc:
        fileio.parse_json('{"a": 1,,}', "x.json")
    assert "line 1" in str(exc.value)


def test_simplicial_round_trip():
    X = nerve(cyclic(3), "inhomog")
    doc = json.loads(fileio.dumps(fileio.simplicial_to_doc(X, 3, group=cyclic(3))))
    Y, G, top = fileio.simplicial_from_doc(doc)
    assert top == 3 and [Y.size(k) for k in range(4)] == [X.size(k) for k in range(4)]
    assert verify_identities(Y, 3).ok
    assert G.order() == 3


def test_coskeletal_file_extends_levels():
    K = em_inhomog(cyclic(2), 2)
    # K(A, n) is (n+1)-coskeletal; the 2-coskeleton would be too big
    doc = fileio.simplicial_to_doc(K, 4, coskeletal=3)
    Y, _, _ = fileio.simplicial_from_doc(doc)
    assert Y.size(5) == K.size(5) == 2 ** 10
    assert verify_identities(Y, 5).ok
    Z, _, _ = fileio.simplicial_from_doc(fileio.simplicial_to_doc(K, 3, coskeletal=2))
    assert Z.size(4) > K.size(4)


def test_bad_group_table():
    doc = fileio.simplicial_to_doc(nerve(cyclic(2), "inhomog"), 2, group=cyclic(2))
    doc["group"]["table"] = [[0, 0], [1, 1]]
    with pytest.raises(SchemaError) as exc:
        fileio.simplicial_from_doc(doc)
    assert exc.value.path == "group.table"


def test_bad_face_index():
    doc = fileio.simplicial_to_doc(nerve(cyclic(2), "inhomog"), 2)
    doc["faces"][0][0][0] = 9
    with pytest.raises(SchemaError):
        fileio.simplicial_from_doc(doc)


def test_forms_round_trip():
    h = heisenberg()
    a = LForm(h.space, 2, {"x": PolyForm(2, {((1, 0), (2,)): "1/3"}), "z": PolyForm.dcoord(2, 0)})
    doc = json.loads(fileio.dumps(fileio.forms_to_doc(a)))
    assert fileio.forms_from_doc(doc, h.space) == a


def test_forms_bad_dt():
    h = heisenberg()
    doc = {"format": "linfpost-forms", "version": 1, "m": 1,
           "components": {"x": [{"exponents": [0], "dt": [2], "coeff": "1"}]}}
    with pytest.raises(SchemaError) as exc:
        fileio.forms_from_doc(doc, h.space)
    assert exc.value.path == "components.x[0].dt"
