import json

import numpy as np
import pytest

from coh2ent import catalog, matrixfile
from coh2ent.errors import MatrixFileError, NotComplete, NotPSD, ValidationError
from coh2ent.measure import DensityMatrix, POVM, ProjectiveMeasurement
from coh2ent.naimark import NaimarkExtension, canonical_extension
from coh2ent.sampling import random_density_matrix, random_projective, random_unitary


def roundtrip(doc):
    return matrixfile.parse(matrixfile.loads(matrixfile.dumps(doc)))


def test_state_roundtrip(rng):
    rho = random_density_matrix(4, rng)
    back = roundtrip(matrixfile.matrix_document("state", rho.mat))
    assert isinstance(back, DensityMatrix)
    assert np.max(np.abs(back.mat - rho.mat)) < 1e-12


def test_povm_roundtrip_keeps_labels():
    povm = catalog.trine_povm()
    doc = matrixfile.matrix_document("povm", povm.effects, labels=["a", "b", "c"])
    assert doc["labels"] == ["a", "b", "c"]
    back = roundtrip(doc)
    assert isinstance(back, POVM)
    for e, f in zip(back, povm):
        assert np.max(np.abs(e - f)) < 1e-12


def test_projective_and_unitary_roundtrip(rng):
    p = random_projective(3, rng)
    back = roundtrip(matrixfile.matrix_document("projective", p.projectors))
    assert isinstance(back, ProjectiveMeasurement)
    u = random_unitary(3, rng)
    assert np.max(np.abs(roundtrip(matrixfile.matrix_document("unitary", u)) - u)) < 1e-12


def test_extension_bundle_roundtrip():
    ext, kraus = canonical_extension(catalog.example1_povm(0.25))
    doc = matrixfile.extension_document(ext, kraus.unitary())
    back = roundtrip(doc)
    assert isinstance(back, NaimarkExtension)
    assert back.embedding == ext.embedding and back.source_dim == 2
    for p, q in zip(back.measurement, ext.measurement):
        assert np.max(np.abs(p - q)) < 1e-12


def test_direct_sum_bundle(tmp_path):
    path = tmp_path / "ext.json"
    matrixfile.write_document(path, matrixfile.extension_document(catalog.trine_extension()))
    p, ext = matrixfile.load_measurement(path)
    assert ext.embedding.target_dim == 3 and p.outcomes == 3


def test_layout_is_pairs():
    doc = matrixfile.matrix_document("state", np.array([[0.5, 0.5j], [-0.5j, 0.5]]))
    assert doc["data"][0][1] == [0.0, 0.5]
    assert doc["dim"] == 2


@pytest.mark.parametrize("text", ['{"kind": "state", "dim": 1, "data": [[[NaN, 0]]]}',
                                  '{"kind": "state", "dim": 1, "data": [[[Infinity, 0]]]}'])
def test_rejects_non_finite(text):
    with pytest.raises(MatrixFileError):
        matrixfile.loads(text)


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "bogus", "dim": 2, "data": []},
        {"kind": "state", "dim": 0, "data": []},
        {"kind": "state", "dim": 2, "data": [[[1, 0]]]},
        {"kind": "state", "dim": 1, "data": [[["x", 0]]]},
        {"kind": "povm", "dim": 1, "data": []},
        {"kind": "povm", "dim": 1, "data": [[[[1, 0]]]], "labels": ["a", "b"]},
    ],
)
def test_malformed(doc):
    with pytest.raises(MatrixFileError):
        matrixfile.parse(doc)


def test_not_json():
    with pytest.raises(MatrixFileError):
        matrixfile.loads("{nope")
    with pytest.raises(MatrixFileError):
        matrixfile.loads("[1, 2]")


def test_validation_propagates():
    bad = matrixfile.matrix_document("povm", [np.diag([0.5, 0.5]), np.diag([0.4, 0.5])])
    with pytest.raises(NotComplete):
        matrixfile.parse(bad)
    with pytest.raises(NotPSD):
        matrixfile.parse(matrixfile.matrix_document("povm", [np.diag([1.5, 1]), np.diag([-0.5, 0])]))
    with pytest.raises(ValidationError):
        matrixfile.parse(matrixfile.matrix_document("unitary", np.diag([1, 2])))


def test_wrong_kind_for_loader(tmp_path):
    path = tmp_path / "u.json"
    matrixfile.write_document(path, matrixfile.matrix_document("unitary", np.eye(2)))
    with pytest.raises(MatrixFileError):
        matrixfile.load_state(path)
    with pytest.raises(MatrixFileError):
        matrixfile.load_povm(path)
    with pytest.raises(MatrixFileError):
        matrixfile.load_measurement(path)


def test_projective_file_loads_as_povm(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(matrixfile.matrix_document("projective", [np.diag([1, 0]), np.diag([0, 1])])))
    assert isinstance(matrixfile.load_povm(path), POVM)


def test_missing_file(tmp_path):
    with pytest.raises(MatrixFileError):
        matrixfile.read_document(tmp_path / "absent.json")
