"""Finite stand-ins for general bounded operators.

Stability diagnostics, the frame-operator identity A S A* = S - F with its
truncated telescoping form, the similarity that turns A* into a contraction,
kernel-dimension grids of A* - lambda over the disk, and shift-power models
whose orbits are orthonormal bases.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .errors import DomainError, StabilityError
from .fd_sampling import orbit_matrix as fd_orbit_matrix
from .numerics import DEFAULT_TOL, TolerancePolicy

STABILITY_MARGIN = 1e-12
MODEL_KINDS = ("Dense", "DiagonalTruncation", "ShiftPowerTruncation")


@dataclass(frozen=True)
class ModelTag:
    kind: str = "Dense"
    m: int | None = None
    d: int | None = None

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise DomainError(f"unknown model tag {self.kind!r}")
        if self.kind == "ShiftPowerTruncation":
            if self.m is None or self.d is None or self.m < 1 or self.d % self.m:
                raise DomainError("ShiftPowerTruncation needs m >= 1 dividing d")

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == "ShiftPowerTruncation":
            out.update(m=self.m, d=self.d)
        return out


@dataclass(frozen=True)
class OperatorInstance:
    A: np.ndarray
    vectors: np.ndarray  # (m, d)
    model_tag: ModelTag = ModelTag()

    def __post_init__(self):
        A = nx.as_matrix(self.A, "A")
        if A.shape[0] != A.shape[1]:
            raise DomainError(f"A must be square, got {A.shape}")
        F = np.atleast_2d(np.array(self.vectors, dtype=complex))
        if F.ndim != 2 or F.shape[0] < 1 or F.shape[1] != A.shape[0]:
            raise DomainError(f"vectors must have shape (m, {A.shape[0]}), got {F.shape}")
        if not np.all(np.isfinite(F)):
            raise DomainError("vectors have non-finite entries")
        tag = self.model_tag if isinstance(self.model_tag, ModelTag) else ModelTag(self.model_tag)
        if tag.kind == "ShiftPowerTruncation" and tag.d != A.shape[0]:
            raise DomainError(f"tag says d = {tag.d}, A is {A.shape[0]}x{A.shape[0]}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "vectors", F)
        object.__setattr__(self, "model_tag", tag)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    def vector_frame_operator(self) -> np.ndarray:
        """F = sum_i f_i f_i^H."""
        return self.vectors.T @ self.vectors.conj()


@dataclass(frozen=True)
class StabilityReport:
    spectral_radius: float
    power_norms: list
    strongly_stable: bool

    def to_dict(self):
        return {
            "spectral_radius": self.spectral_radius,
            "power_norms": list(self.power_norms),
            "strongly_stable_indicator": self.strongly_stable,
        }


def stability_report(inst: OperatorInstance, n_max: int = 50) -> StabilityReport:
    """Spectral radius and ||(A*)^n|| for n = 0..n_max."""
    r = nx.spectral_radius(inst.A)
    Astar = inst.A.conj().T
    P = np.eye(inst.d, dtype=complex)
    norms = []
    for _ in range(n_max + 1):
        norms.append(nx.opnorm(P))
        P = Astar @ P
    return StabilityReport(r, norms, r < 1.0 - STABILITY_MARGIN)


def frame_operator_truncated(inst: OperatorInstance, N: int) -> np.ndarray:
    """S_N = sum_{n<N} sum_i (A^n f_i)(A^n f_i)^H."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    S = np.zeros((inst.d, inst.d), dtype=complex)
    V = inst.vectors.T.copy()  # column i is A^n f_i
    for _ in range(N):
        S += V @ V.conj().T
        V = inst.A @ V
    return S


def lyapunov_residual(inst: OperatorInstance, S) -> float:
    """||A S A* - S + F||."""
    S = nx.as_matrix(S, "S")
    A = inst.A
    return nx.opnorm(A @ S @ A.conj().T - S + inst.vector_frame_operator())


def telescoping_tail(inst: OperatorInstance, N: int) -> float:
    """||A^N F (A*)^N||, the exact residual of S_N."""
    P = np.linalg.matrix_power(inst.A, N)
    return nx.opnorm(P @ inst.vector_frame_operator() @ P.conj().T)


def solve_lyapunov(inst: OperatorInstance) -> np.ndarray:
    """Unique solution of S - A S A* = F from the vectorized d^2 x d^2 system.

    With column-major vec, vec(A S A*) = (conj(A) kron A) vec(S).
    """
    r = nx.spectral_radius(inst.A)
    if r >= 1.0 - STABILITY_MARGIN:
        raise StabilityError(f"spectral radius {r:.6g} is not below 1; no unique solution")
    d = inst.d
    A = inst.A
    K = np.eye(d * d, dtype=complex) - np.kron(A.conj(), A)
    F = inst.vector_frame_operator()
    S = np.linalg.solve(K, F.reshape(-1, order="F")).reshape((d, d), order="F")
    return 0.5 * (S + S.conj().T)


@dataclass(frozen=True)
class GramianFactor:
    """S = Z Z^H with Z = U diag(sigma), held in SVD form."""

    U: np.ndarray
    sigma: np.ndarray
    iterations: int = 0

    @property
    def matrix(self) -> np.ndarray:
        return (self.U * self.sigma**2) @ self.U.conj().T

    def sqrt(self) -> np.ndarray:
        return (self.U * self.sigma) @ self.U.conj().T

    def inv_sqrt(self) -> np.ndarray:
        return (self.U / self.sigma) @ self.U.conj().T


def _compress(W):
    U, s, _ = np.linalg.svd(W, full_matrices=False)
    return U * s


def gramian_factor(inst: OperatorInstance, max_iter: int = 200000, block: int = 256) -> GramianFactor:
    """Square-root form of the solution of S - A S A* = F.

    Accumulates the orbit blocks A^n [f_1 ... f_m] until they fall below
    rounding level relative to the running factor, compressing to d columns
    every ``block`` steps.  Small eigenvalues of S come out with much better
    relative accuracy than from a dense solve, since the factor has the
    square root of the condition number of S.
    """
    r = nx.spectral_radius(inst.A)
    if r >= 1.0 - STABILITY_MARGIN:
        raise StabilityError(f"spectral radius {r:.6g} is not below 1; no unique solution")
    V = inst.vectors.T.copy()
    Z = np.zeros((inst.d, 0), dtype=complex)
    pending = []
    total = 0.0
    n = 0
    while n < max_iter:
        nv = float(np.linalg.norm(V))
        total += nv**2
        pending.append(V)
        n += 1
        if nv**2 <= (nx.EPS * 1e-2) ** 2 * total:
            break
        V = inst.A @ V
        if len(pending) == block:
            Z = _compress(np.hstack([Z] + pending))
            pending = []
    else:
        raise StabilityError(f"orbit did not decay within {max_iter} steps")
    U, s, _ = np.linalg.svd(np.hstack([Z] + pending), full_matrices=False)
    return GramianFactor(U, s, n)


@dataclass(frozen=True)
class ContractionResult:
    T: np.ndarray
    norm_T: float
    defect_rank: int


def _root_pair(S, tol):
    """(S^{1/2}, S^{-1/2}) from a matrix or a :class:`GramianFactor`."""
    if isinstance(S, GramianFactor):
        if S.sigma.size < S.U.shape[0] or S.sigma[-1] <= tol.rank_rel_tol * max(S.sigma[0], 1.0):
            raise DomainError("S is not positive definite")
        return S.sqrt(), S.inv_sqrt()
    S = nx.as_matrix(S, "S")
    w = nx._hermitian_eig(S, "S")[0]
    if w[0] <= tol.rank_rel_tol * max(w[-1], 1.0):
        raise DomainError(f"S is not positive definite (smallest eigenvalue {w[0]:.3g})")
    return nx.psd_sqrt(S), nx.psd_inv_sqrt(S)


def contraction_similarity(
    inst: OperatorInstance, S, tol: TolerancePolicy = DEFAULT_TOL
) -> ContractionResult:
    """T = S^{1/2} A* S^{-1/2}, its norm and rank(Id - T* T).

    ``S`` may be a Hermitian matrix or a :class:`GramianFactor`; the factor
    is preferred when S is badly conditioned.
    """
    R, Rinv = _root_pair(S, tol)
    T = R @ inst.A.conj().T @ Rinv
    defect = np.eye(inst.d) - T.conj().T @ T
    rank = nx.svd_rank(defect, tol, scale=1.0).rank
    return ContractionResult(T, nx.opnorm(T), rank)


def spectral_radius_norm_check(inst: OperatorInstance, S, tol: TolerancePolicy = DEFAULT_TOL):
    """(r(A), ||S^{-1/2} A S^{1/2}||); the first never exceeds the second."""
    R, Rinv = _root_pair(S, tol)
    return nx.spectral_radius(inst.A), nx.opnorm(Rinv @ inst.A @ R)


def disk_grid(n_radii: int = 10, n_angles: int = 10, r_max: float = 0.95) -> np.ndarray:
    """Polar grid with n_radii * n_angles points inside the disk."""
    radii = np.linspace(0.0, r_max, n_radii)
    angles = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)
    return (radii[:, None] * np.exp(1j * angles)[None, :]).reshape(-1)


def nullity_grid(inst: OperatorInstance, grid, tol: TolerancePolicy = DEFAULT_TOL) -> list:
    """dim ker(A* - lambda) at each grid point."""
    Astar = inst.A.conj().T
    scale = nx.opnorm(inst.A) or 1.0
    eye = np.eye(inst.d)
    return [nx.svd_rank(Astar - complex(lam) * eye, tol, scale=scale).kernel.dim for lam in grid]


def nullity_csv(grid, counts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda_re", "lambda_im", "nullity"])
    for lam, c in zip(grid, counts):
        lam = complex(lam)
        w.writerow([repr(lam.real), repr(lam.imag), int(c)])
    return buf.getvalue()


def shift_power_matrix(m: int, d: int) -> np.ndarray:
    if m < 1 or d < 1 or d % m:
        raise DomainError(f"d = {d} must be a positive multiple of m = {m}")
    A = np.zeros((d, d), dtype=complex)
    idx = np.arange(d - m)
    A[idx + m, idx] = 1.0
    return A


def make_shift_power(m: int, d: int) -> OperatorInstance:
    """Truncated m-th power of the right shift with f_i = e_i."""
    A = shift_power_matrix(m, d)
    return OperatorInstance(A, np.eye(d, dtype=complex)[:m], ModelTag("ShiftPowerTruncation", m, d))


def orbit_length(inst: OperatorInstance) -> int:
    """Iterations per vector: d/m for shift-power models, d otherwise."""
    tag = inst.model_tag
    return inst.d // tag.m if tag.kind == "ShiftPowerTruncation" else inst.d


def orbit_matrix(inst: OperatorInstance, n_iter: int | None = None) -> np.ndarray:
    """Columns A^n f_i ordered i outer, n inner."""
    return fd_orbit_matrix(inst.A, inst.vectors, orbit_length(inst) if n_iter is None else n_iter)


def interleave_orbit(W: np.ndarray, m: int) -> np.ndarray:
    """Reorder columns (i, n) -> position i + n m."""
    per = W.shape[1] // m
    order = [i * per + n for n in range(per) for i in range(m)]
    return W[:, order]


@dataclass(frozen=True)
class RieszSimilarityResult:
    passed: bool
    intertwining_residual: float
    vector_residual: float
    bounds: tuple
    orbit_is_riesz: bool

    def to_dict(self):
        return {
            "passed": self.passed,
            "intertwining_residual": self.intertwining_residual,
            "vector_residual": self.vector_residual,
            "bounds": list(self.bounds),
            "orbit_is_riesz": self.orbit_is_riesz,
        }


def riesz_basis_similarity_check(
    inst: OperatorInstance, V, m: int, tol: TolerancePolicy = DEFAULT_TOL, rtol: float = 1e-10
) -> RieszSimilarityResult:
    """Is A = V R^m V^{-1} with f_i = V e_i on the truncation?

    The intertwining A V = V R^m is tested on every column, including the
    last m where the truncated shift vanishes.  The orbit matrix, reordered
    to e_{i + n m} order, is reported as a Riesz basis when invertible.
    """
    V = nx.as_matrix(V, "V")
    d = inst.d
    if V.shape != (d, d):
        raise DomainError(f"V must be {d}x{d}, got {V.shape}")
    if m < 1 or d % m:
        raise DomainError(f"d = {d} must be a multiple of m = {m}")
    s = np.linalg.svd(V, compute_uv=False)
    if s[-1] <= tol.rank_rel_tol * max(s[0], 1.0):
        raise DomainError("V is singular")
    Rm = shift_power_matrix(m, d)
    scale = max(nx.opnorm(inst.A), 1.0) * s[0]
    inter = nx.opnorm(inst.A @ V - V @ Rm) / scale
    if inst.m != m:
        vec_res = np.inf
    else:
        vec_res = float(np.linalg.norm(inst.vectors.T - V[:, :m])) / s[0]
    W = interleave_orbit(orbit_matrix(inst, d // m), inst.m) if inst.m == m else None
    riesz = W is not None and nx.svd_rank(W, tol).rank == d
    passed = bool(inter <= rtol and vec_res <= rtol)
    return RieszSimilarityResult(passed, float(inter), float(vec_res), (float(s[-1] ** 2), float(s[0] ** 2)), riesz)


def random_stable_instance(rng, d: int, m: int, radius_range=(0.3, 0.95)) -> OperatorInstance:
    """Gaussian A rescaled to a norm drawn from ``radius_range``, unit f_i."""
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    A = rng.uniform(*radius_range) * G / nx.opnorm(G)
    F = rng.normal(size=(m, d)) + 1j * rng.normal(size=(m, d))
    F /= np.linalg.norm(F, axis=1, keepdims=True)
    return OperatorInstance(A, F)
