"""Finite sequences in the open unit disk.

Pseudo-hyperbolic geometry, separation constants, the greedy index
partition, normalized Hardy-space kernels, truncated evaluation matrices and
finite Blaschke products.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeError

log = logging.getLogger(__name__)

BOUNDARY_MARGIN = 1e-14
BRUTEFORCE_MAX = 12


def _check_in_disk(*zs):
    for z in zs:
        a = np.abs(np.asarray(z, dtype=complex))
        if np.any(~np.isfinite(a)) or np.any(a >= 1.0 - BOUNDARY_MARGIN):
            raise DomainError(f"point(s) not in the open unit disk: {z!r}")


@dataclass(frozen=True)
class DiskSequence:
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex).reshape(-1)
        _check_in_disk(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, j):
        return self.points[j]

    @property
    def eps(self) -> np.ndarray:
        """Weights sqrt(1 - |lambda_j|^2)."""
        return np.sqrt(1.0 - np.abs(self.points) ** 2)

    def subsequence(self, indices) -> "DiskSequence":
        return DiskSequence(self.points[list(indices)])


def as_sequence(seq) -> DiskSequence:
    return seq if isinstance(seq, DiskSequence) else DiskSequence(seq)


def pseudo_metric(z, w):
    """|z - w| / |1 - z conj(w)|.  Broadcasts over arrays."""
    _check_in_disk(z, w)
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = np.abs(z - w) / np.abs(1.0 - z * np.conj(w))
    return float(out) if out.ndim == 0 else out


def pairwise_metric(seq) -> np.ndarray:
    p = as_sequence(seq).points
    return np.abs(p[:, None] - p[None, :]) / np.abs(1.0 - p[:, None] * np.conj(p[None, :]))


def _check_radius(r):
    if not (0.0 < r < 1.0):
        raise DomainError(f"radius must lie in (0, 1), got {r!r}")


def count_in_ball(seq, r, z) -> int:
    """Number of points at pseudo-hyperbolic distance < r from z."""
    _check_radius(r)
    seq = as_sequence(seq)
    _check_in_disk(z)
    if len(seq) == 0:
        return 0
    return int(np.sum(pseudo_metric(seq.points, z) < r))


def max_ball_count(seq, r) -> int:
    """Largest ball count over centers taken from the sequence itself."""
    _check_radius(r)
    seq = as_sequence(seq)
    if len(seq) == 0:
        return 0
    return int(np.max(np.sum(pairwise_metric(seq) < r, axis=1)))


def _need_two(seq):
    if len(seq) < 2:
        raise DomainError("separation constants need at least two points")


def separation_constant(seq) -> float:
    seq = as_sequence(seq)
    _need_two(seq)
    R = pairwise_metric(seq)
    np.fill_diagonal(R, np.inf)
    return float(R.min())


def uniform_separation_constant(seq) -> float:
    """min_k prod_{j != k} rho(lambda_j, lambda_k), accumulated in log space."""
    seq = as_sequence(seq)
    _need_two(seq)
    R = pairwise_metric(seq)
    np.fill_diagonal(R, 1.0)
    if np.any(R == 0.0):
        return 0.0
    logs = np.log(R).sum(axis=1)
    return float(np.exp(logs.min()))


@dataclass(frozen=True)
class IndexPartition:
    radius: float
    classes: tuple
    index_estimate: int
    max_ball_count: int

    def to_dict(self):
        return {
            "radius": self.radius,
            "classes": [list(c) for c in self.classes],
            "index_estimate": self.index_estimate,
            "max_ball_count": self.max_ball_count,
        }


def sequence_index_greedy(seq, r) -> IndexPartition:
    """Split the sequence into r-separated classes by repeated greedy sweeps.

    Each sweep starts a class at the first unassigned index and takes every
    later unassigned point whose distance to all current class members is at
    least ``r``.  Ties are broken by input order.
    """
    _check_radius(r)
    seq = as_sequence(seq)
    R = pairwise_metric(seq)
    remaining = list(range(len(seq)))
    classes = []
    while remaining:
        cls = [remaining[0]]
        for j in remaining[1:]:
            if all(R[j, k] >= r for k in cls):
                cls.append(j)
        classes.append(tuple(cls))
        taken = set(cls)
        remaining = [j for j in remaining if j not in taken]
    return IndexPartition(float(r), tuple(classes), len(classes), max_ball_count(seq, r))


def sequence_index_bruteforce(seq, r) -> int:
    """Exact minimum number of r-separated classes (exhaustive, <= 12 points)."""
    _check_radius(r)
    seq = as_sequence(seq)
    n = len(seq)
    if n > BRUTEFORCE_MAX:
        raise SizeError(f"bruteforce index limited to {BRUTEFORCE_MAX} points, got {n}")
    if n == 0:
        return 0
    conflict = pairwise_metric(seq) < r
    np.fill_diagonal(conflict, False)
    # most constrained vertices first keeps the search tree small
    order = sorted(range(n), key=lambda j: -int(conflict[j].sum()))

    def colorable(k):
        color = [-1] * n

        def place(pos, used):
            if pos == n:
                return True
            v = order[pos]
            bad = {color[u] for u in range(n) if conflict[v, u] and color[u] >= 0}
            # a fresh class is interchangeable with any other unused one
            for c in range(min(used + 1, k)):
                if c in bad:
                    continue
                color[v] = c
                if place(pos + 1, max(used, c + 1)):
                    return True
                color[v] = -1
            return False

        return place(0, 0)

    for k in range(1, n + 1):
        if colorable(k):
            return k
    return n  # unreachable: n classes always suffice


def default_radius_grid(num=25, r_min=1e-4, r_max=0.9) -> np.ndarray:
    return np.geomspace(r_min, r_max, num)


def index_sweep(seq, radii=None) -> list:
    """Greedy partitions across a logarithmic grid of radii."""
    seq = as_sequence(seq)
    radii = default_radius_grid() if radii is None else radii
    return [sequence_index_greedy(seq, float(r)) for r in radii]


def compare_greedy_bruteforce(seq, r):
    """Return (greedy, bruteforce) class counts and log when greedy is worse."""
    g = sequence_index_greedy(seq, r).index_estimate
    b = sequence_index_bruteforce(seq, r)
    if g > b:
        log.warning("greedy index %d exceeds optimum %d at r=%g", g, b, r)
    return g, b


def kernel_eval(lam, z):
    """Normalized reproducing kernel K_lam(z) of H^2."""
    _check_in_disk(lam, z)
    lam = np.asarray(lam, dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = np.sqrt(1.0 - np.abs(lam) ** 2) / (1.0 - np.conj(lam) * z)
    return complex(out) if out.ndim == 0 else out


def kernel_inner(lam, mu):
    """<K_lam, K_mu> in H^2, i.e. eps_lam eps_mu / (1 - conj(lam) mu)."""
    _check_in_disk(lam, mu)
    lam = np.asarray(lam, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    out = np.sqrt((1.0 - np.abs(lam) ** 2) * (1.0 - np.abs(mu) ** 2)) / (1.0 - np.conj(lam) * mu)
    return complex(out) if out.ndim == 0 else out


def kernel_gram(seq) -> np.ndarray:
    """Matrix G[j, k] = <K_{lambda_k}, K_{lambda_j}>."""
    p = as_sequence(seq).points
    e = np.sqrt(1.0 - np.abs(p) ** 2)
    return np.outer(e, e) / (1.0 - p[:, None] * np.conj(p[None, :]))


def kernel_distance(z, w) -> float:
    """||K_z - K_w|| from the closed form in terms of rho(z, w)."""
    rho = pseudo_metric(z, w)
    sz = np.sqrt(1.0 - abs(z) ** 2)
    sw = np.sqrt(1.0 - abs(w) ** 2)
    sq = (2.0 - sz * sw) * rho**2 - (1.0 - rho**2) * (sz - sw) ** 2 / (sz * sw)
    # cancellation can leave a tiny negative number when z ~ w
    return float(np.sqrt(max(sq, 0.0)))


def evaluation_matrix(seq, N: int) -> np.ndarray:
    """Rows eps_j * (1, lambda_j, ..., lambda_j^(N-1))."""
    if N < 1:
        raise DomainError(f"N must be at least 1, got {N}")
    seq = as_sequence(seq)
    n = np.arange(N)
    return seq.eps[:, None] * seq.points[:, None] ** n[None, :]


def blaschke_eval(seq, exclude: int, z) -> complex:
    """Finite Blaschke product vanishing at every point except ``exclude``."""
    seq = as_sequence(seq)
    _check_in_disk(z)
    p = seq.points
    if len(np.unique(p)) != len(p):
        raise DomainError("Blaschke product needs pairwise distinct points")
    if not (0 <= exclude < len(p)):
        raise DomainError(f"exclude index {exclude} out of range")
    z = complex(z)
    value = 1.0 + 0.0j
    for j, lam in enumerate(p):
        if j == exclude:
            continue
        if lam == 0:
            value *= z
        else:
            # |lam| / lam written as a phase so tiny |lam| cannot overflow
            value *= (lam - z) / (1.0 - np.conj(lam) * z) * np.exp(-1j * np.angle(lam))
    return complex(value)


def random_disk_points(rng, n, r_max=0.95) -> np.ndarray:
    """Points uniform (by area) in the disk of radius ``r_max``."""
    rad = r_max * np.sqrt(rng.uniform(size=n))
    ang = rng.uniform(0, 2 * np.pi, size=n)
    return rad * np.exp(1j * ang)


__all__ = [
    "DiskSequence",
    "IndexPartition",
    "pseudo_metric",
    "count_in_ball",
    "max_ball_count",
    "separation_constant",
    "uniform_separation_constant",
    "sequence_index_greedy",
    "sequence_index_bruteforce",
    "index_sweep",
    "kernel_eval",
    "kernel_inner",
    "kernel_gram",
    "kernel_distance",
    "evaluation_matrix",
    "blaschke_eval",
]

