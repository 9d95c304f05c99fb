"""JSON and CSV encodings for models, reports, vectors and sample traces.

Complex scalars are two-element arrays [re, im]; matrices are row-major lists
of rows.  Model files are validated against the bundled JSON schema before
any array is built.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from .diag_sampling import DiagonalModel
from .disk import DiskSequence
from .errors import DomainError, SchemaError
from .fd_sampling import FdInstance
from .op_sampling import ModelTag, OperatorInstance

SAMPLE_COLUMNS = ["i", "n", "re", "im"]


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("dynsamp.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def _validate(doc, name):
    schema = load_schema(name)
    validator = jsonschema.Draft202012Validator(schema)
    errors = list(validator.iter_errors(doc))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise SchemaError(err.message, err.json_path)


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def encode_complex(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).reshape(-1)]


def encode_matrix(M) -> list:
    return [encode_vector(row) for row in np.atleast_2d(np.asarray(M))]


def decode_vector(v) -> np.ndarray:
    return np.array([complex(a, b) for a, b in v], dtype=complex)


def decode_matrix(M) -> np.ndarray:
    rows = [decode_vector(r) for r in M]
    if len({len(r) for r in rows}) != 1:
        raise SchemaError("matrix rows have different lengths")
    return np.vstack(rows)


def _decode_vectors(vs):
    arr = [decode_vector(v) for v in vs]
    if len({len(v) for v in arr}) != 1:
        raise SchemaError("vectors have different lengths")
    return np.vstack(arr)


def parse_model(doc):
    """Validate a decoded model document and build the matching object."""
    _validate(doc, "model_file")
    kind = doc["kind"]
    p = doc["payload"]
    if kind == "fd_dense":
        return FdInstance(decode_matrix(p["A"]), _decode_vectors(p["vectors"]))
    if kind == "operator_instance":
        t = p.get("model_tag", {"kind": "Dense"})
        tag = ModelTag(t["kind"], t.get("m"), t.get("d"))
        return OperatorInstance(decode_matrix(p["A"]), _decode_vectors(p["vectors"]), tag)
    if kind == "diagonal_model":
        blocks = tuple(decode_matrix(b) for b in p["blocks"])
        return DiagonalModel(DiskSequence(decode_vector(p["points"])), blocks, tuple(p.get("block_dims", ())))
    return DiskSequence(decode_vector(p["points"]))


def read_model(path):
    """(kind, model object, digest of the raw bytes)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    return doc.get("kind") if isinstance(doc, dict) else None, parse_model(doc), digest(raw)


def model_document(obj) -> dict:
    """Inverse of :func:`parse_model`."""
    if isinstance(obj, FdInstance):
        return {"kind": "fd_dense", "payload": {"A": encode_matrix(obj.A), "vectors": [encode_vector(f) for f in obj.vectors]}}
    if isinstance(obj, OperatorInstance):
        return {
            "kind": "operator_instance",
            "payload": {
                "A": encode_matrix(obj.A),
                "vectors": [encode_vector(f) for f in obj.vectors],
                "model_tag": obj.model_tag.to_dict(),
            },
        }
    if isinstance(obj, DiagonalModel):
        return {
            "kind": "diagonal_model",
            "payload": {
                "points": encode_vector(obj.points.points),
                "blocks": [encode_matrix(C) for C in obj.components],
                "block_dims": list(obj.block_dims),
            },
        }
    if isinstance(obj, DiskSequence):
        return {"kind": "disk_sequence", "payload": {"points": encode_vector(obj.points)}}
    raise DomainError(f"cannot serialize {type(obj).__name__}")


def write_model(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(model_document(obj)))


def to_jsonable(x):
    """Recursively convert numpy and complex values; non-finite floats become null."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [to_jsonable(float(x.real)), to_jsonable(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def dumps(doc) -> str:
    return json.dumps(to_jsonable(doc), sort_keys=True, indent=2) + "\n"


def validate_report(doc):
    _validate(doc, "report")


def read_vector(path) -> np.ndarray:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}") from exc
    _validate(doc, "vector")
    return decode_vector(doc["vector"])


def trace_to_csv(trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SAMPLE_COLUMNS)
    m, n_iter = trace.shape
    for i in range(m):
        for n in range(n_iter):
            z = complex(trace[i, n])
            w.writerow([i, n, repr(z.real), repr(z.imag)])
    return buf.getvalue()


def trace_from_csv(text: str, shape) -> np.ndarray:
    """Parse (i, n, re, im) rows into an (m, d) trace; every cell exactly once."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != SAMPLE_COLUMNS:
        raise SchemaError(f"sample header must be exactly {','.join(SAMPLE_COLUMNS)}, got {header}")
    m, n_iter = shape
    trace = np.zeros(shape, dtype=complex)
    seen = np.zeros(shape, dtype=bool)
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise SchemaError(f"line {lineno}: expected 4 fields, got {len(row)}")
        try:
            i, n = int(row[0]), int(row[1])
            re_, im_ = float(row[2]), float(row[3])
        except ValueError as exc:
            raise SchemaError(f"line {lineno}: {exc}") from exc
        if not (0 <= i < m and 0 <= n < n_iter):
            raise SchemaError(f"line {lineno}: index ({i}, {n}) outside trace shape {shape}")
        if seen[i, n]:
            raise SchemaError(f"line {lineno}: duplicate sample ({i}, {n})")
        if not (math.isfinite(re_) and math.isfinite(im_)):
            raise SchemaError(f"line {lineno}: non-finite sample")
        trace[i, n] = complex(re_, im_)
        seen[i, n] = True
    if not seen.all():
        missing = np.argwhere(~seen)[0]
        raise SchemaError(f"missing sample ({missing[0]}, {missing[1]}); trace shape is {shape}")
    return trace
