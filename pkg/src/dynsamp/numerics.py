"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Rank decisions
use a singular-value threshold relative to the largest singular value, with
an optional floor ``scale`` so that matrices which are pure rounding noise
(e.g. ``A - lam*I`` for a scalar ``A``) are not mistaken for full rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DecompositionError, DomainError

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class TolerancePolicy:
    rank_rel_tol: float = 1e-10
    eig_cluster_tol: float = 1e-8
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel_tol", "eig_cluster_tol", "residual_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be strictly positive, got {value!r}")

    def to_dict(self):
        return {
            "rank_rel_tol": self.rank_rel_tol,
            "eig_cluster_tol": self.eig_cluster_tol,
            "residual_tol": self.residual_tol,
        }


DEFAULT_TOL = TolerancePolicy()


def as_matrix(M, name="matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    arr = np.array(M, dtype=complex)
    if arr.ndim != 2:
        raise DomainError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def as_vector(v, name="vector") -> np.ndarray:
    arr = np.array(v, dtype=complex)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def opnorm(M) -> float:
    """Spectral norm; 0 for empty matrices."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^n stored by an orthonormal basis (columns)."""

    basis: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=complex)
        if basis.ndim != 2:
            raise DomainError("basis must be a 2-D array (ambient_dim x dim)")
        object.__setattr__(self, "basis", basis)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0), dtype=complex))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim, dtype=complex))

    @classmethod
    def span(cls, vectors, tol: TolerancePolicy = DEFAULT_TOL, scale=None) -> "Subspace":
        """Orthonormal basis for the column span of ``vectors``."""
        V = as_matrix(vectors, "vectors")
        return svd_rank(V, tol, scale=scale).range

    def is_orthonormal(self, atol=1e-12) -> bool:
        G = self.basis.conj().T @ self.basis
        return bool(np.allclose(G, np.eye(self.dim), atol=atol, rtol=0))

    def orthogonal_complement(self) -> "Subspace":
        n, k = self.basis.shape
        if k == 0:
            return Subspace.full(n)
        U, _, _ = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(U[:, k:])


@dataclass(frozen=True)
class RankInfo:
    rank: int
    kernel: Subspace
    range: Subspace
    singular_values: np.ndarray
    threshold: float

    @property
    def margin(self) -> float:
        """Smallest retained singular value (0 when rank is 0)."""
        if self.rank == 0:
            return 0.0
        return float(self.singular_values[self.rank - 1])


def _svd(M, full_matrices=True):
    try:
        return np.linalg.svd(M, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc


def svd_rank(M, tol: TolerancePolicy = DEFAULT_TOL, scale=None) -> RankInfo:
    """Numerical rank, kernel and range of ``M``.

    The threshold is ``tol.rank_rel_tol * max(sigma_max, scale)``.  Passing
    ``scale`` (typically the norm of the operator ``M`` was derived from)
    keeps rounding-level matrices at rank 0.
    """
    M = as_matrix(M)
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        s = np.zeros(0)
        return RankInfo(
            0,
            Subspace.full(cols),
            Subspace.zero(rows),
            s,
            0.0,
        )
    U, s, Vh = _svd(M, full_matrices=True)
    ref = s[0] if scale is None else max(s[0], float(scale))
    threshold = tol.rank_rel_tol * ref
    rank = int(np.sum(s > threshold)) if ref > 0 else 0
    kernel = Subspace(Vh[rank:].conj().T)
    rng = Subspace(U[:, :rank])
    return RankInfo(rank, kernel, rng, s, threshold)


@dataclass(frozen=True)
class SpectralPoint:
    """A clustered eigenvalue with its algebraic multiplicity and eigenspace."""

    value: complex
    multiplicity: int
    eigenspace: Subspace
    members: tuple = field(default=())


def _single_linkage(values, radius):
    """Group indices of ``values`` whose chains of gaps are all <= radius."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def _matrix_power_shift(M, mu, k):
    d = M.shape[0]
    B = M - mu * np.eye(d)
    P = np.eye(d, dtype=complex)
    for _ in range(k):
        P = B @ P
    return P


def _root_dim(M, mu, k, tol):
    """dim ker (M - mu)^k with a floor at the rounding level of the power."""
    P = _matrix_power_shift(M, mu, k)
    s = np.linalg.svd(P, compute_uv=False)
    noise = 1e3 * k * EPS * opnorm(M - mu * np.eye(M.shape[0])) ** k
    threshold = max(tol.rank_rel_tol * s[0], noise)
    return int(np.sum(s <= threshold))


def cluster_eigenvalues(M, values, tol: TolerancePolicy = DEFAULT_TOL):
    """Merge numerically split eigenvalues into spectral points.

    Eigenvalues within ``eig_cluster_tol * max(1, ||M||)`` are always merged.
    A wider group of ``k`` eigenvalues is merged only if its spread is
    consistent with the ``eps**(1/k)`` splitting of a defective eigenvalue and
    ``ker (M - mu)^k`` has dimension exactly ``k`` at the centroid ``mu``.
    Groups failing either test are split by single linkage at half the radius.
    """
    values = np.asarray(values, dtype=complex)
    n = len(values)
    scale = max(1.0, opnorm(M))
    strict = tol.eig_cluster_tol * scale

    def cap(k):
        # splitting of a k-fold defective eigenvalue under O(eps*||M||) noise
        return max(strict, 10.0 * (EPS * scale) ** (1.0 / k))

    def accept(idx):
        k = len(idx)
        mu = values[idx].mean()
        if np.max(np.abs(values[idx] - mu)) > cap(k):
            return False
        return _root_dim(M, mu, k, tol) == k

    out = []
    stack = [(list(range(n)), cap(max(n, 1)) * 2)]
    while stack:
        idx, radius = stack.pop()
        sub = values[idx]
        for g in _single_linkage(sub, radius):
            members = [idx[i] for i in g]
            if len(members) == 1 or radius <= strict or accept(members):
                out.append(members)
            else:
                stack.append((members, max(radius / 2, strict)))
    out.sort(key=lambda g: g[0])
    return [(complex(values[g].mean()), tuple(sorted(g))) for g in out]


def eig(M, tol: TolerancePolicy = DEFAULT_TOL) -> list:
    """Clustered eigen-decomposition of a square matrix.

    Returns a list of :class:`SpectralPoint`, ordered by decreasing modulus
    and then by argument.  Eigenspaces are computed as kernels of
    ``M - value`` via SVD, not from LAPACK eigenvectors.
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DomainError(f"eig needs a square matrix, got shape {M.shape}")
    d = M.shape[0]
    if d == 0:
        return []
    try:
        values = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc
    scale = opnorm(M) or 1.0
    points = []
    for value, members in cluster_eigenvalues(M, values, tol):
        ker = svd_rank(M - value * np.eye(d), tol, scale=scale).kernel
        points.append(SpectralPoint(value, len(members), ker, members))
    points.sort(key=lambda p: (-abs(p.value), np.angle(p.value)))
    return points


def spectral_radius(M) -> float:
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def orth_project(S: Subspace, v) -> np.ndarray:
    v = as_vector(v)
    if v.shape[0] != S.ambient_dim:
        raise DomainError(f"vector has dimension {v.shape[0]}, subspace lives in {S.ambient_dim}")
    B = S.basis
    return B @ (B.conj().T @ v)


def direct_sum_check(V: Subspace, W: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True iff ``V`` and ``W`` together span the ambient space with trivial intersection."""
    if V.ambient_dim != W.ambient_dim:
        raise DomainError("subspaces live in different ambient spaces")
    n = V.ambient_dim
    if V.dim + W.dim != n:
        return False
    if n == 0:
        return True
    B = np.hstack([V.basis, W.basis])
    return svd_rank(B, tol, scale=1.0).rank == n


def oblique_projector(V: Subspace, W: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Matrix of the projection onto ``V`` along ``W``."""
    if not direct_sum_check(V, W, tol):
        raise DecompositionError(
            f"subspaces of dims {V.dim} and {W.dim} do not decompose C^{V.ambient_dim}"
        )
    n = V.ambient_dim
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    B = np.hstack([V.basis, W.basis])
    coeffs = np.linalg.solve(B, np.eye(n, dtype=complex))
    return V.basis @ coeffs[: V.dim]


def oblique_project(V: Subspace, W: Subspace, v, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Unique ``v1`` in ``V`` with ``v - v1`` in ``W``."""
    v = as_vector(v)
    if v.shape[0] != V.ambient_dim:
        raise DomainError("dimension mismatch between vector and subspaces")
    return oblique_projector(V, W, tol) @ v


def pinv(M, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    M = as_matrix(M)
    rows, cols = M.shape
    if M.size == 0:
        return np.zeros((cols, rows), dtype=complex)
    U, s, Vh = _svd(M, full_matrices=False)
    keep = s > tol.rank_rel_tol * s[0] if s[0] > 0 else np.zeros_like(s, dtype=bool)
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (Vh.conj().T * inv) @ U.conj().T


def lstsq(M, b, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Minimum-norm least-squares solution through the thresholded pseudoinverse."""
    M = as_matrix(M)
    b = as_vector(b)
    if M.shape[0] != b.shape[0]:
        raise DomainError(f"M has {M.shape[0]} rows but b has length {b.shape[0]}")
    return pinv(M, tol) @ b


def _hermitian_eig(M, name):
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise DomainError(f"{name} must be square")
    norm = opnorm(M)
    if opnorm(M - M.conj().T) > 1e-10 * max(norm, EPS):
        raise DomainError(f"{name} is not Hermitian")
    H = (M + M.conj().T) / 2
    w, Q = np.linalg.eigh(H)
    if w.size and w[0] < -1e-10 * norm:
        raise DomainError(f"{name} is indefinite (smallest eigenvalue {w[0]:.3e})")
    return np.clip(w, 0.0, None), Q, norm


def psd_sqrt(M) -> np.ndarray:
    """Hermitian PSD square root; tiny negative eigenvalues are clipped to 0."""
    w, Q, _ = _hermitian_eig(M, "M")
    return (Q * np.sqrt(w)) @ Q.conj().T


def psd_inv_sqrt(M, floor=1e-14) -> np.ndarray:
    """Inverse square root of a Hermitian positive definite matrix."""
    w, Q, norm = _hermitian_eig(M, "M")
    if w.size and w[0] <= floor * max(norm, EPS):
        raise DomainError(f"M is not positive definite (smallest eigenvalue {w[0]:.3e})")
    return (Q / np.sqrt(w)) @ Q.conj().T


def extreme_sq_singular_values(M, rows=None):
    """Squared smallest and largest singular values of a wide matrix.

    For a ``k x n`` matrix with ``n < k`` the smallest squared singular value
    is 0 (the columns cannot span ``C^k``).
    """
    M = as_matrix(M)
    k = M.shape[0] if rows is None else rows
    if M.size == 0:
        return 0.0, 0.0
    s = np.linalg.svd(M, compute_uv=False)
    smax = float(s[0] ** 2)
    smin = float(s[k - 1] ** 2) if len(s) >= k else 0.0
    return smin, smax
