"""Command-line front end.

Exit status: 0 Frame (or success), 1 NotFrame, 2 InconclusiveTruncation,
3 input error.  Reports are JSON with sorted keys and no timestamps, so the
same input always yields the same bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np
from scipy.linalg import circulant, expm

from . import __version__
from . import diag_sampling as ds
from . import disk
from . import fd_sampling as fd
from . import numerics as nx
from . import op_sampling as op
from . import serialization as ser
from .diag_sampling import DiagonalModel, Verdict
from .disk import DiskSequence
from .errors import DynsampError, SchemaError
from .fd_sampling import FdInstance
from .op_sampling import OperatorInstance

log = logging.getLogger("dynsamp")

EXIT_CODES = {Verdict.FRAME: 0, Verdict.NOT_FRAME: 1, Verdict.INCONCLUSIVE: 2}
EXIT_INPUT_ERROR = 3


class InputError(DynsampError):
    pass


def _configure_logging():
    level = os.environ.get("DYNSAMP_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _tolerances(args) -> nx.TolerancePolicy:
    return nx.TolerancePolicy(rank_rel_tol=args.tol_rank, residual_tol=args.tol_residual)


def _as_fd(obj) -> FdInstance:
    if isinstance(obj, FdInstance):
        return obj
    if isinstance(obj, OperatorInstance):
        return FdInstance(obj.A, obj.vectors)
    if isinstance(obj, DiagonalModel):
        A, F = obj.to_dense()
        return FdInstance(A, F)
    raise InputError(f"a matrix model is required, got {type(obj).__name__}")


def _report(command, args, digest, result, verdict=None, kind=None, operation=None):
    doc = {
        "tool": "dynsamp",
        "version": __version__,
        "command": command,
        "input_digest": digest,
        "tolerances": _tolerances(args).to_dict(),
        "result": result,
    }
    if verdict is not None:
        doc["verdict"] = Verdict(verdict).value
    if kind is not None:
        doc["input_kind"] = kind
    if operation is not None:
        doc["operation"] = operation
    return doc


def _emit(text: str, output):
    if output and output != "-":
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(doc, args):
    text = ser.dumps(doc)
    ser.validate_report(json.loads(text))
    _emit(text, args.output)


def cmd_check_frame(args) -> int:
    kind, obj, dig = ser.read_model(args.input)
    tol = _tolerances(args)
    if isinstance(obj, DiagonalModel):
        kwargs = {}
        if args.truncation:
            kwargs["N_list"] = sorted({max(1, args.truncation // k) for k in (8, 4, 2, 1)})
        if args.radius is not None:
            kwargs["radii"] = [args.radius]
        rep = ds.characterize(obj, **kwargs)
        _emit_report(_report("check-frame", args, dig, rep.to_dict(), rep.overall, kind, "characterize"), args)
        return EXIT_CODES[rep.overall]
    inst = _as_fd(obj)
    verdict = fd.eigen_kernel_check(inst, tol)
    v = Verdict.FRAME if verdict.is_frame else Verdict.NOT_FRAME
    result = verdict.to_dict()
    result["bruteforce_rank_check"] = fd.is_frame_bruteforce(inst, tol)
    _emit_report(_report("check-frame", args, dig, result, v, kind, "eigen_kernel_check"), args)
    return EXIT_CODES[v]


def cmd_frame_bounds(args) -> int:
    kind, obj, dig = ser.read_model(args.input)
    tol = _tolerances(args)
    if isinstance(obj, DiagonalModel):
        alpha, beta = ds.riesz_bounds_phi(obj)
        result = {"alpha": alpha, "beta": beta, "method": "riesz_bounds_phi"}
        if args.truncation:
            a_n, b_n = ds.synthesis_truncated(obj, args.truncation)
            result["truncated"] = {
                "N": args.truncation,
                "alpha": a_n,
                "beta": b_n,
                "tail_bound": ds.truncation_tail(obj, args.truncation),
            }
    elif isinstance(obj, (FdInstance, OperatorInstance)):
        if isinstance(obj, OperatorInstance):
            W = op.orbit_matrix(obj, args.truncation)
        else:
            W = fd.orbit_matrix(obj.A, obj.vectors, args.truncation or obj.d)
        alpha, beta = nx.extreme_sq_singular_values(W, rows=W.shape[0])
        result = {"alpha": alpha, "beta": beta, "method": "orbit_singular_values", "iterations": W.shape[1] // obj.vectors.shape[0]}
    else:
        raise InputError("frame-bounds needs a matrix or diagonal model")
    is_frame = alpha > tol.rank_rel_tol * max(beta, 1.0)
    v = Verdict.FRAME if is_frame else Verdict.NOT_FRAME
    _emit_report(_report("frame-bounds", args, dig, result, v, kind, result["method"]), args)
    return EXIT_CODES[v]


def _signal(args, d):
    if args.signal:
        f = ser.read_vector(args.signal)
        if f.shape[0] != d:
            raise InputError(f"signal has dimension {f.shape[0]}, model has {d}")
        return f
    rng = np.random.default_rng(args.seed)
    return rng.normal(size=d) + 1j * rng.normal(size=d)


def _sampling_length(obj, args) -> int:
    """Orbit length for sample/reconstruct: --truncation, else d.

    Diagonal models default to the truncation used by ``characterize``, since
    eigenvalues near the circle make the length-d orbit nearly singular.
    """
    if args.truncation:
        return args.truncation
    if isinstance(obj, DiagonalModel):
        return max(ds.default_truncations(obj)[-1], obj.dim)
    return _as_fd(obj).d


def cmd_sample(args) -> int:
    _, obj, _ = ser.read_model(args.input)
    inst = _as_fd(obj)
    trace = fd.sample(inst, _signal(args, inst.d), _sampling_length(obj, args))
    _emit(ser.trace_to_csv(trace), args.output)
    return 0


def cmd_reconstruct(args) -> int:
    _, obj, dig = ser.read_model(args.input)
    inst = _as_fd(obj)
    n_iter = _sampling_length(obj, args)
    with open(args.samples) as fh:
        trace = ser.trace_from_csv(fh.read(), (inst.m, n_iter))
    rec = fd.reconstruct(inst, trace, _tolerances(args), n_iter)
    doc = {
        "tool": "dynsamp",
        "version": __version__,
        "input_digest": dig,
        "vector": ser.encode_vector(rec.vector),
        "residual": rec.residual,
    }
    _emit(ser.dumps(doc), args.output)
    return 0


def cmd_disk_analyze(args) -> int:
    kind, obj, dig = ser.read_model(args.input)
    if not isinstance(obj, DiskSequence):
        raise InputError("disk-analyze needs a disk_sequence input")
    result = {"points": len(obj)}
    if len(obj) >= 2:
        result["separation_constant"] = disk.separation_constant(obj)
        result["uniform_separation_constant"] = disk.uniform_separation_constant(obj)
    if args.sweep or args.radius is None:
        parts = disk.index_sweep(obj)
    else:
        parts = [disk.sequence_index_greedy(obj, args.radius)]
    result["partitions"] = [p.to_dict() for p in parts]
    _emit_report(_report("disk-analyze", args, dig, result, kind=kind, operation="sequence_index_greedy"), args)
    return 0


def diffusion_instance(dim: int, sensors: int, t0: float, placement: str = "equispaced") -> FdInstance:
    """One heat-semigroup step on a cycle graph, observed at point sensors.

    A* = expm(t0 L) with L the circulant Laplacian; L is symmetric, so A = A*.
    """
    if not (dim >= sensors >= 1):
        raise InputError(f"need dim >= sensors >= 1, got dim={dim}, sensors={sensors}")
    if not (t0 > 0):
        raise InputError(f"t0 must be positive, got {t0}")
    col = np.zeros(dim)
    col[0] = -2.0
    col[1 % dim] += 1.0
    col[-1 % dim] += 1.0
    L = circulant(col)
    Astar = expm(t0 * L)
    A = Astar.conj().T
    if placement == "equispaced":
        nodes = [(k * dim) // sensors for k in range(sensors)]
    elif placement == "asymmetric":
        nodes = list(range(sensors))
    else:
        raise InputError(f"unknown placement {placement!r}")
    F = np.eye(dim)[nodes]
    return FdInstance(A, F)


def cmd_demo_diffusion(args) -> int:
    params = {"dim": args.dim, "sensors": args.sensors, "t0": args.t0, "placement": args.placement, "seed": args.seed}
    dig = ser.digest(json.dumps(params, sort_keys=True).encode())
    inst = diffusion_instance(args.dim, args.sensors, args.t0, args.placement)
    tol = _tolerances(args)
    verdict = fd.eigen_kernel_check(inst, tol)
    rng = np.random.default_rng(args.seed)
    f = rng.normal(size=inst.d)
    rec = fd.reconstruct(inst, fd.sample(inst, f), tol)
    err = float(np.linalg.norm(rec.vector - f) / np.linalg.norm(f))
    v = Verdict.FRAME if verdict.is_frame else Verdict.NOT_FRAME
    result = {
        "parameters": params,
        "sensor_nodes": [int(np.argmax(row)) for row in inst.vectors.real],
        "frame_check": verdict.to_dict(),
        "round_trip_relative_error": err,
        "residual": rec.residual,
    }
    _emit_report(_report("demo-diffusion", args, dig, result, v, operation="eigen_kernel_check"), args)
    return EXIT_CODES[v]


def cmd_nullity_grid(args) -> int:
    _, obj, _ = ser.read_model(args.input)
    if isinstance(obj, OperatorInstance):
        inst = obj
    else:
        f = _as_fd(obj)
        inst = OperatorInstance(f.A, f.vectors)
    grid = op.disk_grid(args.grid_radii, args.grid_angles, args.grid_rmax)
    counts = op.nullity_grid(inst, grid, _tolerances(args))
    _emit(op.nullity_csv(grid, counts), args.output)
    return 0


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _positive_int(text):
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=_positive_float, default=nx.DEFAULT_TOL.rank_rel_tol)
    common.add_argument("--tol-residual", type=_positive_float, default=nx.DEFAULT_TOL.residual_tol)
    common.add_argument("--truncation", type=_positive_int, default=None, help="orbit length N")
    common.add_argument("--radius", type=float, default=None)
    common.add_argument("--sweep", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=["json"], default="json")

    p = argparse.ArgumentParser(prog="dynsamp", description="Frame checks for dynamical sampling systems.")
    p.add_argument("--version", action="version", version=f"dynsamp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-frame", parents=[common], help="decide whether the orbit system is a frame")
    s.add_argument("input")
    s.set_defaults(func=cmd_check_frame)

    s = sub.add_parser("frame-bounds", parents=[common], help="report frame bounds")
    s.add_argument("input")
    s.set_defaults(func=cmd_frame_bounds)

    s = sub.add_parser("sample", parents=[common], help="write space-time samples as CSV")
    s.add_argument("input")
    s.add_argument("--signal", default=None, help="JSON vector file; random signal from --seed otherwise")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("reconstruct", parents=[common], help="recover a signal from CSV samples")
    s.add_argument("input")
    s.add_argument("--samples", required=True)
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("disk-analyze", parents=[common], help="separation and index of a disk sequence")
    s.add_argument("input")
    s.set_defaults(func=cmd_disk_analyze)

    s = sub.add_parser("demo-diffusion", parents=[common], help="heat diffusion on a cycle with point sensors")
    s.add_argument("--dim", type=_positive_int, default=4)
    s.add_argument("--sensors", type=_positive_int, default=1)
    s.add_argument("--t0", type=_positive_float, default=0.1)
    s.add_argument("--placement", choices=["equispaced", "asymmetric"], default="equispaced")
    s.set_defaults(func=cmd_demo_diffusion)

    s = sub.add_parser("nullity-grid", parents=[common], help="dim ker(A* - lambda) on a polar grid, as CSV")
    s.add_argument("input")
    s.add_argument("--grid-radii", type=_positive_int, default=10)
    s.add_argument("--grid-angles", type=_positive_int, default=10)
    s.add_argument("--grid-rmax", type=float, default=0.95)
    s.set_defaults(func=cmd_nullity_grid)
    return p


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which would read as Inconclusive
        return 0 if exc.code == 0 else EXIT_INPUT_ERROR
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"dynsamp: schema error: {exc}", file=sys.stderr)
    except (DynsampError, ValueError, OSError) as exc:
        print(f"dynsamp: {exc}", file=sys.stderr)
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
