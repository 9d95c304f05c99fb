"""Independent reference computations used only by the tests."""

import itertools

import numpy as np
from scipy.linalg import block_diag


def set_partitions(items):
    """Every partition of ``items`` into nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]
        yield [[first]] + part


def min_separated_partition(points, r):
    """Fewest r-separated blocks, by enumerating all set partitions."""
    p = np.asarray(points, dtype=complex)
    rho = np.abs(p[:, None] - p[None, :]) / np.abs(1 - p[:, None] * np.conj(p[None, :]))
    best = len(p)
    for part in set_partitions(range(len(p))):
        if len(part) >= best:
            continue
        if all(rho[a, b] >= r for blk in part for a, b in itertools.combinations(blk, 2)):
            best = len(part)
    return best


def kernel_distance_by_gram(z, w):
    """||K_z - K_w||^2 expanded through the reproducing property."""
    kzz = 1.0
    kww = 1.0
    kzw = np.sqrt((1 - abs(z) ** 2) * (1 - abs(w) ** 2)) / (1 - np.conj(z) * w)
    return float(np.sqrt(max(kzz + kww - 2 * kzw.real, 0.0)))


def kernel_inner_by_series(lam, mu, terms=4000):
    """<K_lam, K_mu> from the Taylor coefficients eps * conj(lam)^n."""
    n = np.arange(terms)
    a = np.sqrt(1 - abs(lam) ** 2) * np.conj(lam) ** n
    b = np.sqrt(1 - abs(mu) ** 2) * np.conj(mu) ** n
    return complex(np.sum(a * np.conj(b)))


def blaschke_taylor(points, exclude, N):
    """Taylor coefficients (degree < N) of the Blaschke product skipping ``exclude``."""
    coef = np.zeros(N, dtype=complex)
    coef[0] = 1.0
    n = np.arange(N)
    for j, lam in enumerate(points):
        if j == exclude:
            continue
        if lam == 0:
            fac = np.zeros(N, dtype=complex)
            fac[1] = 1.0
        else:
            # (lam - z) * sum (conj(lam) z)^n, times |lam| / lam
            geo = np.conj(lam) ** n
            fac = lam * geo
            fac[1:] -= geo[:-1]
            fac *= abs(lam) / lam
        coef = np.convolve(coef, fac)[:N]
    return coef


def jordan(value, size):
    return value * np.eye(size) + np.diag(np.ones(size - 1), 1)


def jordan_instance(rng, blocks, m, similarity="random", kill=None):
    """A = V J V^{-1} for J = direct sum of Jordan blocks [(value, size), ...].

    ``kill`` lists Jordan-basis coordinates zeroed in every f_i, which makes
    the frame property fail or hold in a controlled way.
    """
    J = block_diag(*[jordan(v, k) for v, k in blocks])
    d = J.shape[0]
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    if similarity == "unitary":
        V = np.linalg.qr(G)[0]
    elif similarity == "identity":
        V = np.eye(d)
    else:
        V = G + 2 * np.eye(d)
    A = V @ J @ np.linalg.inv(V)
    coords = rng.normal(size=(d, m)) + 1j * rng.normal(size=(d, m))
    for k in kill or ():
        coords[k] = 0
    return A, (V @ coords).T


def orbit_rank_oracle(A, F, tol=1e-9):
    """Rank of [f, Af, ..., A^{d-1} f] via matrix_power, a different code path."""
    d = A.shape[0]
    cols = [np.linalg.matrix_power(A, n) @ f for f in F for n in range(d)]
    M = np.column_stack(cols)
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * max(s[0], 1e-300)))
