"""JSON matrix files.

A matrix file is a JSON object::

    {"kind": "state" | "povm" | "projective" | "unitary",
     "dim": d,
     "data": ...,
     "labels": [...]}            # optional, povm/projective only

``data`` holds one matrix (state, unitary) or a list of matrices (povm,
projective). A matrix is a list of rows; each entry is an ``[re, im]`` pair.

Naimark extensions are written as a bundle document::

    {"kind": "naimark_extension", "source_dim": d0,
     "embedding": {"type": "direct_sum", "target_dim": d}
                | {"type": "ancilla", "dim": m, "reference": a},
     "measurement": <projective matrix file>,
     "unitary": <unitary matrix file>}  # optional
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import MatrixFileError, ValidationError
from .measure import DensityMatrix, POVM, ProjectiveMeasurement, validate_povm, validate_projective
from .naimark import Ancilla, DirectSum, NaimarkExtension

KINDS = ("state", "povm", "projective", "unitary")
BUNDLE_KIND = "naimark_extension"


def encode_matrix(m) -> list:
    arr = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def decode_matrix(data, dim: int) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MatrixFileError(f"matrix entries must be numeric [re, im] pairs: {exc}") from exc
    if arr.shape != (dim, dim, 2):
        raise MatrixFileError(f"expected a {dim}x{dim} matrix of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MatrixFileError("matrix contains NaN or Inf entries")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_document(kind: str, mats, labels=None) -> dict:
    if kind not in KINDS:
        raise MatrixFileError(f"unknown kind {kind!r}")
    if kind in ("state", "unitary"):
        m = np.asarray(mats)
        doc = {"kind": kind, "dim": int(m.shape[0]), "data": encode_matrix(m)}
    else:
        mats = [np.asarray(m) for m in mats]
        doc = {"kind": kind, "dim": int(mats[0].shape[0]), "data": [encode_matrix(m) for m in mats]}
        if labels is not None:
            doc["labels"] = [str(x) for x in labels]
    return doc


def extension_document(ext: NaimarkExtension, unitary=None) -> dict:
    emb = ext.embedding
    if isinstance(emb, DirectSum):
        emb_doc = {"type": "direct_sum", "target_dim": emb.target_dim}
    else:
        emb_doc = {"type": "ancilla", "dim": emb.dim, "reference": emb.reference}
    doc = {
        "kind": BUNDLE_KIND,
        "source_dim": ext.source_dim,
        "embedding": emb_doc,
        "measurement": matrix_document("projective", ext.measurement.projectors),
    }
    if unitary is not None:
        doc["unitary"] = matrix_document("unitary", unitary)
    return doc


def _reject_constant(name):
    raise MatrixFileError(f"non-finite number {name} is not allowed")


def loads(text: str) -> dict:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise MatrixFileError("document must be an object with a 'kind' field")
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1)


def read_document(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write_document(path, doc: dict) -> None:
    Path(path).write_text(dumps(doc) + "\n")


def _dim(doc: dict) -> int:
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MatrixFileError(f"'dim' must be a positive integer, got {dim!r}")
    return dim


def decode_matrices(doc: dict) -> list[np.ndarray]:
    kind = doc.get("kind")
    if kind not in KINDS:
        raise MatrixFileError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    dim = _dim(doc)
    data = doc.get("data")
    if kind in ("state", "unitary"):
        return [decode_matrix(data, dim)]
    if not isinstance(data, list) or not data:
        raise MatrixFileError("'data' must be a nonempty list of matrices")
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != len(data)):
        raise MatrixFileError("'labels' must list one label per outcome")
    return [decode_matrix(m, dim) for m in data]


def parse_extension(doc: dict) -> NaimarkExtension:
    if doc.get("kind") != BUNDLE_KIND:
        raise MatrixFileError(f"expected a {BUNDLE_KIND} bundle")
    meas_doc = doc.get("measurement")
    if not isinstance(meas_doc, dict) or meas_doc.get("kind") != "projective":
        raise MatrixFileError("bundle needs a projective 'measurement' document")
    meas = validate_projective(decode_matrices(meas_doc))
    emb = doc.get("embedding") or {}
    try:
        if emb.get("type") == "direct_sum":
            embedding = DirectSum(int(emb["target_dim"]))
        elif emb.get("type") == "ancilla":
            embedding = Ancilla(int(emb["dim"]), int(emb.get("reference", 0)))
        else:
            raise MatrixFileError(f"unknown embedding type {emb.get('type')!r}")
        return NaimarkExtension(meas, embedding, int(doc["source_dim"]))
    except (KeyError, TypeError) as exc:
        raise MatrixFileError(f"malformed extension bundle: {exc}") from exc


def parse(doc: dict):
    """Validated object for a document: DensityMatrix, POVM, ProjectiveMeasurement,
    unitary ndarray, or NaimarkExtension."""
    kind = doc.get("kind")
    if kind == BUNDLE_KIND:
        return parse_extension(doc)
    mats = decode_matrices(doc)
    if kind == "state":
        return DensityMatrix(mats[0])
    if kind == "povm":
        return validate_povm(mats)
    if kind == "projective":
        return validate_projective(mats)
    u = mats[0]
    err = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
    if err > 1e-9:
        raise ValidationError(f"NotUnitary: U^dagger U deviates from identity by {err:.3e}")
    return u


def load(path):
    return parse(read_document(path))


def load_state(path) -> DensityMatrix:
    obj = load(path)
    if not isinstance(obj, DensityMatrix):
        raise MatrixFileError(f"{path} does not hold a state")
    return obj


def load_povm(path) -> POVM:
    obj = load(path)
    if isinstance(obj, ProjectiveMeasurement):
        return obj.as_povm()
    if not isinstance(obj, POVM):
        raise MatrixFileError(f"{path} does not hold a POVM")
    return obj


def load_measurement(path) -> tuple[ProjectiveMeasurement, NaimarkExtension | None]:
    """A projective measurement, plus its extension when the file is a bundle."""
    obj = load(path)
    if isinstance(obj, NaimarkExtension):
        return obj.measurement, obj
    if not isinstance(obj, ProjectiveMeasurement):
        raise MatrixFileError(f"{path} does not hold a projective measurement")
    return obj, None
