"""Regenerate the model files under tests/data used by the CLI tests.

    python3 scripts/make_corpus.py [outdir]

Output is deterministic (fixed seed), so rerunning leaves the files unchanged.
"""

import json
import sys
from pathlib import Path

import numpy as np

from dynsamp import diag_sampling as ds
from dynsamp import fd_sampling as fd
from dynsamp import serialization as ser
from dynsamp.disk import DiskSequence
from dynsamp.fd_sampling import FdInstance
from dynsamp.op_sampling import OperatorInstance, make_shift_power, shift_power_matrix


def jordan_frame():
    A = np.array([[0.5, 1.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, -0.25]])
    return FdInstance(A, [[0.0, 1.0, 1.0]])


def riesz_instance(rng):
    V = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)) + 3 * np.eye(6)
    A = V @ shift_power_matrix(2, 6) @ np.linalg.inv(V)
    return OperatorInstance(A, V[:, :2].T)


def build(rng):
    models = {
        "fd_diag_frame": FdInstance(np.diag([0.5, 1 / 3]), [[1, 1]]),
        "fd_diag_repeated": FdInstance(np.diag([0.5, 0.5]), [[1, 1]]),
        "fd_jordan_frame": jordan_frame(),
        "op_shift_2_4": make_shift_power(2, 4),
        "op_shift_3_6": make_shift_power(3, 6),
        "op_riesz_2_6": riesz_instance(rng),
        "diag_one_dim": ds.scalar_model([0.5]),
        "diag_block_union": ds.make_block_union_model(2, ds.interleaved_geometric_classes(2, 8, rotation=0.5)),
        "diag_jojo": ds.make_jojo_f_model(2, 8, 1e-3),
        "diag_multiplicity": ds.DiagonalModel(DiskSequence([0.1, 0.4]), ([[1.0]], [[1.0], [2.0]])),
        "disk_two_points": DiskSequence([0.0, 0.9]),
        "disk_near_duplicates": DiskSequence([0.0, 0.01, 0.5, 0.505]),
    }
    for k in range(6):
        d = 2 + k % 5
        models[f"fd_random_{k}"] = fd.random_instance(rng, d, 1 + k % 3)
    return models


def main(outdir):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240501)
    for name, obj in build(rng).items():
        ser.write_model(obj, out / f"{name}.json")
    # hand-written invalid inputs
    (out / "bad_malformed.json").write_text('{"kind": "fd_dense", "payload": {"A": [[[1, 0]]]\n')
    (out / "bad_empty_vectors.json").write_text(
        json.dumps({"kind": "fd_dense", "payload": {"A": [[[0.5, 0]]], "vectors": []}}) + "\n"
    )
    (out / "bad_boundary_point.json").write_text(
        json.dumps({"kind": "disk_sequence", "payload": {"points": [[0, 0], [1, 0]]}}) + "\n"
    )


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "data")
