"""Dynamical sampling in C^d with the orbit n = 0, ..., d-1.

Three equivalent frame tests are provided: the brute-force rank test on the
orbit matrix, the eigen-kernel test on ker(A* - mu) for every eigenvalue mu of
A*, and the cyclic-subspace test through root subspaces of A.  They are kept
independent so that each can serve as an oracle for the others.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from .errors import DecompositionError, DomainError
from .numerics import DEFAULT_TOL, Subspace, TolerancePolicy


@dataclass(frozen=True)
class FdInstance:
    A: np.ndarray
    vectors: np.ndarray  # shape (m, d), one row per f_i

    def __post_init__(self):
        A = nx.as_matrix(self.A, "A")
        if A.shape[0] != A.shape[1]:
            raise DomainError(f"A must be square, got {A.shape}")
        F = np.array(self.vectors, dtype=complex)
        if F.ndim == 1:
            F = F[None, :]
        if F.ndim != 2 or F.shape[0] < 1:
            raise DomainError("need at least one vector f_i")
        if F.shape[1] != A.shape[0]:
            raise DomainError(f"vectors have dimension {F.shape[1]}, A is {A.shape[0]}x{A.shape[0]}")
        if not np.all(np.isfinite(F)):
            raise DomainError("vectors have non-finite entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "vectors", F)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def iteration_count(self) -> int:
        return self.d

    def family_norm(self) -> float:
        return nx.opnorm(self.vectors)


@dataclass(frozen=True)
class EigenCheck:
    value: complex
    kernel_dim: int
    projected_rank: int
    passed: bool
    margin: float

    def to_dict(self):
        return {
            "eigenvalue": [self.value.real, self.value.imag],
            "kernel_dim": self.kernel_dim,
            "projected_rank": self.projected_rank,
            "passed": self.passed,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class FrameVerdict:
    is_frame: bool
    alpha: float
    beta: float
    per_eigenvalue: list = field(default_factory=list)
    tolerances: TolerancePolicy = DEFAULT_TOL
    method: str = ""

    def to_dict(self):
        return {
            "is_frame": self.is_frame,
            "alpha": self.alpha,
            "beta": self.beta,
            "per_eigenvalue": [e.to_dict() for e in self.per_eigenvalue],
            "tolerances": self.tolerances.to_dict(),
            "method": self.method,
        }


def orbit_matrix(A, vectors, n_iter: int) -> np.ndarray:
    """Columns A^n f_i for n < n_iter, column index i * n_iter + n."""
    A = np.asarray(A, dtype=complex)
    F = np.atleast_2d(np.asarray(vectors, dtype=complex))
    m, d = F.shape
    out = np.empty((d, m * n_iter), dtype=complex)
    for i in range(m):
        v = F[i].copy()
        for n in range(n_iter):
            out[:, i * n_iter + n] = v
            v = A @ v
    return out


def frame_matrix(inst: FdInstance) -> np.ndarray:
    return orbit_matrix(inst.A, inst.vectors, inst.d)


def frame_bounds(inst: FdInstance):
    """Squared extreme singular values of the orbit matrix."""
    return nx.extreme_sq_singular_values(frame_matrix(inst), rows=inst.d)


def is_frame_bruteforce(inst: FdInstance, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return nx.svd_rank(frame_matrix(inst), tol).rank == inst.d


def _family_rank(coords, tol, scale):
    """Rank of a projected family given in subspace coordinates (dim x m)."""
    if coords.shape[0] == 0:
        return nx.RankInfo(0, Subspace.zero(coords.shape[1]), Subspace.zero(0), np.zeros(0), 0.0)
    return nx.svd_rank(coords, tol, scale=scale)


def _adjoint_spectrum(A, tol):
    # one decomposition of A; the eigenvalues of A* are the conjugates
    return [complex(np.conj(p.value)) for p in nx.eig(A, tol)]


def eigen_kernel_check(inst: FdInstance, tol: TolerancePolicy = DEFAULT_TOL) -> FrameVerdict:
    """Frame test through orthogonal projections onto ker(A* - mu)."""
    A = inst.A
    Astar = A.conj().T
    d = inst.d
    scale_A = nx.opnorm(A) or 1.0
    scale_F = inst.family_norm()
    entries = []
    for mu in _adjoint_spectrum(A, tol):
        K = nx.svd_rank(Astar - mu * np.eye(d), tol, scale=scale_A).kernel
        coords = K.basis.conj().T @ inst.vectors.T
        info = _family_rank(coords, tol, scale_F)
        entries.append(EigenCheck(mu, K.dim, info.rank, info.rank == K.dim, info.margin))
    alpha, beta = frame_bounds(inst)
    return FrameVerdict(all(e.passed for e in entries), alpha, beta, entries, tol, "eigen_kernel_check")


def range_of_shift(A, lam, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """ran(A - lam) as an orthonormal basis."""
    d = A.shape[0]
    return nx.svd_rank(A - lam * np.eye(d), tol, scale=nx.opnorm(A) or 1.0).range


def complement_projection_check(
    inst: FdInstance, lam, V: Subspace, tol: TolerancePolicy = DEFAULT_TOL
) -> EigenCheck:
    """Do the projections of f_i onto V along ran(A - lam) span V?"""
    lam = complex(lam)
    R = range_of_shift(inst.A, lam, tol)
    if V.ambient_dim != inst.d:
        raise DomainError("complement lives in the wrong ambient space")
    if not nx.direct_sum_check(V, R, tol):
        raise DecompositionError(
            f"V (dim {V.dim}) is not a complement of ran(A - lam) (dim {R.dim})"
        )
    if V.dim == 0:
        return EigenCheck(lam, 0, 0, True, 0.0)
    Q = nx.oblique_projector(V, R, tol)
    coords = V.basis.conj().T @ (Q @ inst.vectors.T)
    info = _family_rank(coords, tol, nx.opnorm(Q) * inst.family_norm())
    return EigenCheck(lam, V.dim, info.rank, info.rank == V.dim, info.margin)


def default_complement(inst: FdInstance, lam, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """ker(A* - conj(lam)), the orthogonal complement of ran(A - lam)."""
    return range_of_shift(inst.A, complex(lam), tol).orthogonal_complement()


def random_complement(inst: FdInstance, lam, rng, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """A generic complement of ran(A - lam): ker(A* - conj(lam)) tilted into the range."""
    R = range_of_shift(inst.A, complex(lam), tol)
    K = R.orthogonal_complement()
    if K.dim == 0:
        return K
    X = rng.normal(size=(R.dim, K.dim)) + 1j * rng.normal(size=(R.dim, K.dim))
    tilted = K.basis + R.basis @ X
    return Subspace(np.linalg.qr(tilted)[0])


def root_subspace(A, lam, tol: TolerancePolicy = DEFAULT_TOL, multiplicity=None) -> Subspace:
    """Root subspace ker (A - lam)^k.

    With ``multiplicity`` known (from :func:`numerics.eig`) the basis is the
    trailing ``multiplicity`` right singular vectors of (A - lam)^k.  Without
    it the power grows until the kernel dimension stabilizes.
    """
    A = nx.as_matrix(A, "A")
    d = A.shape[0]
    lam = complex(lam)
    if multiplicity is not None:
        P = nx._matrix_power_shift(A, lam, multiplicity)
        Vh = np.linalg.svd(P)[2]
        return Subspace(Vh[d - multiplicity :].conj().T)
    dim = 0
    for k in range(1, d + 1):
        nxt = nx._root_dim(A, lam, k, tol)
        if nxt == dim:
            break
        dim = nxt
    if dim == 0:
        return Subspace.zero(d)
    return root_subspace(A, lam, tol, multiplicity=dim)


def _root_decomposition(A, tol):
    points = nx.eig(A, tol)
    d = A.shape[0]
    blocks = []
    for p in points:
        blocks.append((p.value, root_subspace(A, p.value, tol, p.multiplicity)))
    B = np.hstack([L.basis for _, L in blocks]) if blocks else np.zeros((d, 0))
    if B.shape[1] != d or nx.svd_rank(B, tol).rank != d:
        raise DecompositionError("root subspaces do not decompose the space")
    return blocks, B


def cyclic_subspace_check(inst: FdInstance, tol: TolerancePolicy = DEFAULT_TOL) -> FrameVerdict:
    """Frame test through subspaces of cyclic vectors in each root subspace."""
    A = inst.A
    blocks, B = _root_decomposition(A, tol)
    Binv = np.linalg.inv(B)
    scale_F = inst.family_norm()
    entries = []
    offset = 0
    for lam, L in blocks:
        k = L.dim
        # projection onto L along the other root subspaces
        P_lam = L.basis @ Binv[offset : offset + k]
        offset += k
        image = (A - lam * np.eye(inst.d)) @ L.basis
        img = nx.svd_rank(image, tol, scale=nx.opnorm(A) or 1.0).range
        # W: orthogonal complement of (A - lam) L inside L
        coords_img = L.basis.conj().T @ img.basis
        comp = Subspace(coords_img).orthogonal_complement() if img.dim else Subspace.full(k)
        W = Subspace(L.basis @ comp.basis)
        # inside L, W is orthogonal to (A - lam) L, so Q_lam is orthogonal there
        coords = W.basis.conj().T @ (P_lam @ inst.vectors.T)
        info = _family_rank(coords, tol, nx.opnorm(P_lam) * scale_F)
        entries.append(
            EigenCheck(complex(lam), W.dim, info.rank, info.rank == W.dim, info.margin)
        )
    alpha, beta = frame_bounds(inst)
    return FrameVerdict(all(e.passed for e in entries), alpha, beta, entries, tol, "cyclic_subspace_check")


def sample(inst: FdInstance, f, n_iter: int | None = None) -> np.ndarray:
    """Trace[i, n] = <f, A^n f_i> for n < n_iter (default d)."""
    f = nx.as_vector(f, "f")
    if f.shape[0] != inst.d:
        raise DomainError(f"signal has dimension {f.shape[0]}, expected {inst.d}")
    n_iter = _orbit_length(inst, n_iter)
    cols = orbit_matrix(inst.A, inst.vectors, n_iter)
    return (cols.conj().T @ f).reshape(inst.m, n_iter)


def _orbit_length(inst, n_iter):
    if n_iter is None:
        return inst.d
    if n_iter < 1:
        raise DomainError(f"orbit length must be >= 1, got {n_iter}")
    return int(n_iter)


@dataclass(frozen=True)
class Reconstruction:
    vector: np.ndarray
    residual: float


def reconstruct(
    inst: FdInstance, trace, tol: TolerancePolicy = DEFAULT_TOL, n_iter: int | None = None
) -> Reconstruction:
    """Minimum-norm solution of (orbit matrix)^H f = vec(trace)."""
    trace = np.asarray(trace, dtype=complex)
    n_iter = _orbit_length(inst, n_iter)
    if trace.shape != (inst.m, n_iter):
        raise DomainError(f"trace has shape {trace.shape}, expected {(inst.m, n_iter)}")
    M = orbit_matrix(inst.A, inst.vectors, n_iter).conj().T
    b = trace.reshape(-1)
    f = nx.lstsq(M, b, tol)
    return Reconstruction(f, float(np.linalg.norm(M @ f - b)))


def random_instance(rng, d, m) -> FdInstance:
    """Standard complex Gaussian A and vectors."""
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    F = rng.normal(size=(m, d)) + 1j * rng.normal(size=(m, d))
    return FdInstance(A, F)
