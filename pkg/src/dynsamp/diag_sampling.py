"""Diagonal (normal-form) operator models A = sum_j lambda_j P_j.

A model stores, for each distinct eigenvalue lambda_j, an n_j x m block C_j
whose column i holds the coordinates of P_j f_i in an orthonormal basis of
P_j H.  Everything here is exact linear algebra on that finite model; the
asymptotic conditions (separation, the range condition) are reported as
profiles across truncation lengths and radii rather than as certificates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from . import disk
from .disk import DiskSequence
from .errors import DomainError


class Verdict(str, enum.Enum):
    FRAME = "Frame"
    NOT_FRAME = "NotFrame"
    INCONCLUSIVE = "InconclusiveTruncation"


TAIL_TARGET = 1e-12
MAX_TRUNCATION = 20000
SIGMA_THRESHOLD = 1e-3
FLAT_RTOL = 0.05


@dataclass(frozen=True)
class DiagonalModel:
    points: DiskSequence
    components: tuple  # C_j, shape (n_j, m)
    block_dims: tuple = ()

    def __post_init__(self):
        pts = disk.as_sequence(self.points)
        if len(pts) == 0:
            raise DomainError("a diagonal model needs at least one block")
        if len(np.unique(pts.points)) != len(pts):
            raise DomainError("eigenvalues of a normal form must be pairwise distinct")
        comps = []
        for j, C in enumerate(self.components):
            C = np.array(C, dtype=complex)
            if C.ndim != 2:
                raise DomainError(f"block {j} must be a 2-d array, got shape {C.shape}")
            if not np.all(np.isfinite(C)):
                raise DomainError(f"block {j} has non-finite entries")
            C.setflags(write=False)
            comps.append(C)
        if len(comps) != len(pts):
            raise DomainError(f"{len(pts)} points but {len(comps)} blocks")
        m = comps[0].shape[1]
        if m < 1 or any(C.shape[1] != m for C in comps):
            raise DomainError("every block needs the same number m >= 1 of columns")
        dims = tuple(C.shape[0] for C in comps)
        if any(n < 1 for n in dims):
            raise DomainError("block dimensions must be >= 1")
        if self.block_dims and tuple(self.block_dims) != dims:
            raise DomainError(f"block_dims {tuple(self.block_dims)} disagree with block shapes {dims}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "components", tuple(comps))
        object.__setattr__(self, "block_dims", dims)

    @property
    def m(self) -> int:
        return self.components[0].shape[1]

    @property
    def dim(self) -> int:
        return int(sum(self.block_dims))

    @property
    def eps(self) -> np.ndarray:
        return self.points.eps

    def stacked(self) -> np.ndarray:
        """All blocks stacked: row (j, l), column i."""
        return np.vstack(self.components)

    def row_points(self) -> np.ndarray:
        """lambda_j repeated n_j times, aligned with :meth:`stacked`."""
        return np.repeat(self.points.points, self.block_dims)

    def to_dense(self):
        """(A, F) in the e_jl basis, F with one row per f_i."""
        A = np.diag(self.row_points())
        return A, self.stacked().T.copy()

    def vector_norms(self) -> np.ndarray:
        return np.linalg.norm(self.stacked(), axis=0)


def multiplicity(model: DiagonalModel) -> int:
    return max(model.block_dims)


@dataclass(frozen=True)
class BlockBounds:
    alpha: float
    beta: float
    per_block: list

    @property
    def passed(self) -> bool:
        return self.alpha > 0


def condition_iii_bounds(model: DiagonalModel, rank_rel_tol: float = 1e-10) -> BlockBounds:
    """Frame bounds of {P_j f_i / eps_j}_i on each P_j H.

    The per-block bounds are the extreme eigenvalues of C_j C_j^H / eps_j^2;
    the smallest is clipped to 0 below ``rank_rel_tol`` times the largest.
    """
    per = []
    for C, e in zip(model.components, model.eps):
        w = np.linalg.eigvalsh(C @ C.conj().T / e**2)
        lo, hi = float(w[0]), float(w[-1])
        if lo <= rank_rel_tol * max(hi, 1.0):
            lo = 0.0
        per.append((lo, hi))
    return BlockBounds(min(p[0] for p in per), max(p[1] for p in per), per)


def e_system_matrix(model: DiagonalModel) -> np.ndarray:
    """Synthesis matrix of E = (P_j f_i / eps_j), columns indexed by (j, i)."""
    cols = [C / e for C, e in zip(model.components, model.eps)]
    return block_diag(*cols)


def E_system_frame_bounds(model: DiagonalModel, rank_rel_tol: float = 1e-10):
    """Frame bounds of the whole E-system, from one SVD of its synthesis matrix."""
    M = e_system_matrix(model)
    s = np.linalg.svd(M, compute_uv=False)
    hi = float(s[0] ** 2)
    lo = float(s[-1] ** 2) if M.shape[1] >= M.shape[0] else 0.0
    if lo <= rank_rel_tol * max(hi, 1.0):
        lo = 0.0
    return lo, hi


def bessel_bound(model: DiagonalModel, f_index: int, N: int) -> float:
    """Squared norm of the J x N matrix with rows ||P_j f_i|| lambda_j^n."""
    if not (0 <= f_index < model.m):
        raise DomainError(f"f_index {f_index} out of range for m = {model.m}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    weights = np.array([np.linalg.norm(C[:, f_index]) for C in model.components])
    rows = weights[:, None] * model.points.points[:, None] ** np.arange(N)[None, :]
    return float(np.linalg.norm(rows, 2) ** 2)


def phi_vectors(model: DiagonalModel) -> np.ndarray:
    """Rows y_jl = conj(C_j[l, :]) / eps_j."""
    return np.vstack([C.conj() / e for C, e in zip(model.components, model.eps)])


def phi_gram(model: DiagonalModel) -> np.ndarray:
    """Entry ((j,l),(k,s)) = <y_jl, y_ks> <K_{lambda_j}, K_{lambda_k}>."""
    Y = phi_vectors(model)
    lam = model.row_points()
    return (Y @ Y.conj().T) * disk.kernel_inner(lam[:, None], lam[None, :])


def riesz_bounds_phi(model: DiagonalModel):
    w = np.linalg.eigvalsh(phi_gram(model))
    return float(w[0]), float(w[-1])


def synthesis_matrix(model: DiagonalModel, N: int) -> np.ndarray:
    """Entry ((j,l),(i,n)) = lambda_j^n C_j[l, i], column index i*N + n."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    C = model.stacked()
    powers = model.row_points()[:, None] ** np.arange(N)[None, :]
    return (C[:, :, None] * powers[:, None, :]).reshape(C.shape[0], -1)


def synthesis_truncated(model: DiagonalModel, N: int):
    """Squared extreme singular values of the truncated orbit synthesis."""
    M = synthesis_matrix(model, N)
    s = np.linalg.svd(M, compute_uv=False)
    lo = float(s[-1] ** 2) if M.shape[1] >= M.shape[0] else 0.0
    return lo, float(s[0] ** 2)


def truncation_tail(model: DiagonalModel, N: int) -> float:
    """Bound on how far the truncated bounds can sit below the limit."""
    r = float(np.max(np.abs(model.points.points)))
    return r ** (2 * N) * float(np.sum(model.vector_norms() ** 2)) / (1.0 - r**2)


def default_truncations(model: DiagonalModel, tail: float = TAIL_TARGET) -> list:
    """Four truncation lengths ending where max|lambda|^(2N) drops below ``tail``."""
    r = float(np.max(np.abs(model.points.points)))
    if r == 0.0:
        n_max = 8
    else:
        n_max = int(np.ceil(np.log(tail) / (2.0 * np.log(r))))
    n_max = int(min(max(n_max, 8), MAX_TRUNCATION))
    return sorted({max(1, n_max // 8), max(1, n_max // 4), max(1, n_max // 2), n_max})


def condition_iv_profile(model: DiagonalModel, N_list=None) -> list:
    """Smallest singular value of C_E^* T_{Lambda,I} restricted to degree < N.

    The composite matrix coincides entrywise with :func:`synthesis_matrix`
    (the eps_j factors cancel).  Requires the E-system to be a frame.
    """
    if not condition_iii_bounds(model).passed:
        raise DomainError("condition_iv_profile needs condition (iii) to hold")
    if N_list is None:
        N_list = default_truncations(model)
    out = []
    for N in N_list:
        M = synthesis_matrix(model, int(N))
        if M.shape[1] < M.shape[0]:
            out.append(0.0)
            continue
        out.append(float(np.linalg.svd(M, compute_uv=False)[-1]))
    return out


@dataclass
class CharacterizationReport:
    cond_i: dict
    cond_ii: dict
    cond_iii: dict
    cond_iv: dict
    overall: Verdict
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "cond_i": self.cond_i,
            "cond_ii": self.cond_ii,
            "cond_iii": self.cond_iii,
            "cond_iv": self.cond_iv,
            "overall": self.overall.value,
            **self.extra,
        }


def _index_proxy(model, radii):
    seq = model.points
    radii = disk.default_radius_grid() if radii is None else np.asarray(radii)
    counts = [disk.sequence_index_greedy(seq, float(r)).index_estimate for r in radii]
    best = int(np.argmin(counts))
    return {
        "radii": [float(r) for r in radii],
        "class_counts": counts,
        "best_radius": float(radii[best]),
        "best_count": counts[best],
        "pass_proxy": counts[best] <= model.m,
    }


def _profile_flat(profile, threshold, flat_rtol):
    if not profile or profile[-1] < threshold:
        return False
    # evidence of a plateau: the last two readings agree to flat_rtol
    if len(profile) == 1:
        return True
    a, b = profile[-2], profile[-1]
    return abs(a - b) <= flat_rtol * max(a, b)


def characterize(
    model: DiagonalModel,
    N_list=None,
    sigma_threshold: float = SIGMA_THRESHOLD,
    flat_rtol: float = FLAT_RTOL,
    radii=None,
) -> CharacterizationReport:
    """Check conditions (i)-(iv) for a diagonal model on a finite truncation.

    Parameters
    ----------
    model : DiagonalModel
    N_list : sequence of int, optional
        Truncation lengths for the condition (iv) profile, increasing.
        Defaults to :func:`default_truncations`.
    sigma_threshold : float
        The profile must end at or above this value to count as bounded away
        from zero.
    flat_rtol : float
        Relative change allowed between the last two profile readings.
    radii : array_like, optional
        Radius grid for the index sweep; defaults to a log grid on [1e-4, 0.9].

    Returns
    -------
    CharacterizationReport
        ``NotFrame`` if multiplicity exceeds m or the block bounds degenerate,
        ``Frame`` if the index proxy passes and the profile is flat above
        threshold, ``InconclusiveTruncation`` otherwise.
    """
    mult = multiplicity(model)
    cond_i = {"multiplicity": mult, "m": model.m, "pass": mult <= model.m}
    b3 = condition_iii_bounds(model)
    cond_iii = {
        "alpha": b3.alpha,
        "beta": b3.beta,
        "per_block": [list(p) for p in b3.per_block],
        "pass": b3.passed,
    }
    cond_ii = _index_proxy(model, radii)
    if N_list is None:
        N_list = default_truncations(model)
    extra = {"N_list": [int(n) for n in N_list], "sigma_threshold": sigma_threshold}
    if not (cond_i["pass"] and cond_iii["pass"]):
        cond_iv = {"sigma_min": [], "warning": True, "skipped": True}
        return CharacterizationReport(cond_i, cond_ii, cond_iii, cond_iv, Verdict.NOT_FRAME, extra)
    profile = condition_iv_profile(model, N_list)
    flat = _profile_flat(profile, sigma_threshold, flat_rtol)
    cond_iv = {"sigma_min": profile, "warning": not flat, "skipped": False}
    overall = Verdict.FRAME if (cond_ii["pass_proxy"] and flat) else Verdict.INCONCLUSIVE
    return CharacterizationReport(cond_i, cond_ii, cond_iii, cond_iv, overall, extra)


def theorem_one_verdict(model: DiagonalModel, **kwargs) -> CharacterizationReport:
    """Single-vector specialization: one-dimensional blocks, bounded weights, separation.

    The weights ||P_j f||^2 / (1 - |lambda_j|^2) are reported exactly, along
    with the separation constants of the eigenvalue sequence.  The verdict is
    taken from :func:`characterize` so both always agree.
    """
    if model.m != 1:
        raise DomainError(f"single-vector verdict needs m = 1, got m = {model.m}")
    rep = characterize(model, **kwargs)
    weights = [float(np.sum(np.abs(C) ** 2) / e**2) for C, e in zip(model.components, model.eps)]
    seq = model.points
    sep = disk.separation_constant(seq) if len(seq) > 1 else 1.0
    usep = disk.uniform_separation_constant(seq) if len(seq) > 1 else 1.0
    rep.extra.update(
        {
            "one_dimensional_blocks": all(n == 1 for n in model.block_dims),
            "weights": weights,
            "weight_bounds": [min(weights), max(weights)],
            "separation_constant": sep,
            "uniform_separation_constant": usep,
        }
    )
    return rep


def scalar_model(points, weights=None) -> DiagonalModel:
    """m = 1, one-dimensional blocks, ||P_j f||^2 = weight_j (default 1 - |lambda_j|^2)."""
    seq = disk.as_sequence(points)
    w = seq.eps**2 if weights is None else np.asarray(weights, dtype=float)
    return DiagonalModel(seq, tuple(np.array([[np.sqrt(x)]]) for x in w))


def jojo_points(pair_count: int, gap: float) -> np.ndarray:
    """Base points 1 - 2^-(k+1) and partners at pseudo-hyperbolic distance gap * 2^-k."""
    k = np.arange(pair_count)
    base = 1.0 - 2.0 ** -(k + 1.0)
    delta = gap * 2.0**-k
    partner = (base + delta) / (1.0 + base * delta)
    return np.ravel(np.column_stack([base, partner]))


def make_jojo_f_model(m: int, pair_count: int, gap: float = 1e-3) -> DiagonalModel:
    """Union of two uniformly separated sequences with pair distances shrinking to 0.

    Each block has dimension m and C_j = eps_j I, so the normalized system E
    is orthonormal while the merged sequence is not uniformly separated.
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    if pair_count < 1:
        raise DomainError(f"pair_count must be >= 1, got {pair_count}")
    if not (0.0 < gap < 1.0):
        raise DomainError(f"gap must lie in (0, 1), got {gap}")
    pts = jojo_points(pair_count, gap)
    seq = DiskSequence(pts)
    return DiagonalModel(seq, tuple(e * np.eye(m) for e in seq.eps))


def make_block_union_model(m: int, per_class_points, weights_rule=None) -> DiagonalModel:
    """Direct sum of m single-vector models, f_i supported on the i-th class.

    ``weights_rule(lam)`` gives ||P_j f_i||^2; the default 1 - |lam|^2 makes
    every class a tight frame with bound 1.
    """
    classes = [disk.as_sequence(c).points for c in per_class_points]
    if m < 1 or len(classes) != m:
        raise DomainError(f"need exactly m = {m} point classes, got {len(classes)}")
    merged = np.concatenate(classes)
    if len(np.unique(merged)) != len(merged):
        raise DomainError("point classes must be pairwise disjoint (and duplicate free)")
    rule = weights_rule or (lambda lam: 1.0 - abs(lam) ** 2)
    comps = []
    for i, pts in enumerate(classes):
        for lam in pts:
            row = np.zeros((1, m), dtype=complex)
            row[0, i] = np.sqrt(rule(lam))
            comps.append(row)
    return DiagonalModel(DiskSequence(merged), tuple(comps))


def interleaved_geometric_classes(m: int, count: int, rotation: float = 0.0):
    """Class i holds 1 - c_i 2^-k, with c_i spread in (1/2, 1], optionally rotated."""
    ks = np.arange(1, count + 1)
    out = []
    for i in range(m):
        c = 1.0 - i / (2.0 * m)
        out.append((1.0 - c * 2.0**-ks) * np.exp(1j * rotation * i))
    return out


def random_model(rng, n_blocks: int, m: int, r_max: float = 0.8, max_dim: int = 2) -> DiagonalModel:
    pts = disk.random_disk_points(rng, n_blocks, r_max)
    comps = []
    for _ in range(n_blocks):
        n = int(rng.integers(1, max_dim + 1))
        comps.append(rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m)))
    return DiagonalModel(DiskSequence(pts), tuple(comps))
