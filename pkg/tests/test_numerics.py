import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dynsamp import numerics as nx
from dynsamp.errors import DecompositionError, DomainError
from dynsamp.numerics import Subspace, TolerancePolicy
from tests.oracles import jordan, jordan_instance


def cgauss(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_tolerance_policy_rejects_nonpositive():
    with pytest.raises(DomainError):
        TolerancePolicy(rank_rel_tol=0.0)
    with pytest.raises(DomainError):
        TolerancePolicy(eig_cluster_tol=-1.0)
    assert TolerancePolicy().to_dict()["rank_rel_tol"] == 1e-10


def test_as_matrix_rejects_nan():
    with pytest.raises(DomainError):
        nx.as_matrix([[np.nan]])


# eigenvalue clustering


def test_eig_diagonal():
    pts = nx.eig(np.diag([0.5, 1 / 3]))
    assert [round(p.value.real, 12) for p in pts] == [0.5, round(1 / 3, 12)]
    assert all(p.multiplicity == 1 and p.eigenspace.dim == 1 for p in pts)


def test_eig_identity_single_cluster():
    (p,) = nx.eig(np.eye(3))
    assert p.multiplicity == 3 and p.eigenspace.dim == 3
    assert abs(p.value - 1) < 1e-14


def test_eig_jordan_block_defective():
    (p,) = nx.eig(jordan(0.5, 2))
    assert p.multiplicity == 2
    assert p.eigenspace.dim == 1
    assert abs(abs(p.eigenspace.basis[0, 0]) - 1) < 1e-12


def test_eig_companion_double_root():
    # z^2 - z + 1/4 has the double root 1/2
    (p,) = nx.eig(np.array([[0, -0.25], [1, 1]]))
    assert p.multiplicity == 2 and abs(p.value - 0.5) < 1e-7


@pytest.mark.parametrize("size", [2, 3, 4, 5])
@pytest.mark.parametrize("similarity", ["unitary", "random"])
def test_eig_jordan_under_similarity(size, similarity):
    rng = np.random.default_rng(size)
    for _ in range(20):
        A, _ = jordan_instance(rng, [(0.3 + 0.2j, size)], 1, similarity)
        pts = nx.eig(A)
        assert len(pts) == 1
        assert pts[0].multiplicity == size
        assert pts[0].eigenspace.dim == 1


def test_eig_derogatory_mix():
    rng = np.random.default_rng(7)
    blocks = [(0.5, 3), (0.5, 1), (-0.2, 2)]
    for _ in range(20):
        A, _ = jordan_instance(rng, blocks, 1, "random")
        pts = {round(p.value.real, 4): p for p in nx.eig(A)}
        assert pts[0.5].multiplicity == 4 and pts[0.5].eigenspace.dim == 2
        assert pts[-0.2].multiplicity == 2 and pts[-0.2].eigenspace.dim == 1


def test_eig_does_not_merge_random_spectra():
    rng = np.random.default_rng(3)
    for _ in range(300):
        d = int(rng.integers(1, 8))
        pts = nx.eig(cgauss(rng, d, d))
        assert sum(p.multiplicity for p in pts) == d
        assert len(pts) == d


@given(seeds)
def test_eig_residuals(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 9))
    M = cgauss(rng, d, d)
    norm = nx.opnorm(M)
    for p in nx.eig(M):
        for v in p.eigenspace.basis.T:
            assert np.linalg.norm(M @ v - p.value * v) <= 1e-8 * norm


# rank, kernel, range


@given(seeds)
def test_rank_nullity(seed):
    rng = np.random.default_rng(seed)
    r, c, k = (int(x) for x in rng.integers(1, 7, size=3))
    M = cgauss(rng, r, k) @ cgauss(rng, k, c)
    info = nx.svd_rank(M)
    assert info.rank + info.kernel.dim == c
    assert info.rank == min(r, c, k)
    assert info.kernel.is_orthonormal() and info.range.is_orthonormal()
    if info.kernel.dim:
        assert nx.opnorm(M @ info.kernel.basis) <= 1e-9 * nx.opnorm(M)


def test_rank_scale_floor_keeps_noise_at_zero():
    noise = np.array([[1e-17]])
    assert nx.svd_rank(noise).rank == 1
    assert nx.svd_rank(noise, scale=1.0).rank == 0


def test_rank_empty_matrix():
    info = nx.svd_rank(np.zeros((3, 0)))
    assert info.rank == 0 and info.kernel.dim == 0 and info.range.dim == 0


def test_orthogonal_complement():
    S = Subspace.span(np.array([[1, 0], [0, 1], [0, 0]]))
    C = S.orthogonal_complement()
    assert C.dim == 1
    assert abs(abs(C.basis[2, 0]) - 1) < 1e-14


# projections


def test_orth_project_examples():
    S = Subspace(np.array([[1.0], [0.0]]))
    assert np.allclose(nx.orth_project(S, [3, 4]), [3, 0])
    assert np.allclose(nx.orth_project(Subspace.zero(2), [3, 4]), [0, 0])


def test_oblique_project_example():
    V = Subspace(np.array([[1.0], [0.0]]))
    W = Subspace(np.array([[1.0], [1.0]]) / np.sqrt(2))
    # (1, 1) lies in W, so its component along V is zero; (1, 0) is in V
    assert np.allclose(nx.oblique_project(V, W, [1, 1]), [0, 0])
    assert np.allclose(nx.oblique_project(V, W, [2, 1]), [1, 0])


def test_oblique_project_not_complementary():
    V = Subspace(np.array([[1.0], [0.0]]))
    with pytest.raises(DecompositionError):
        nx.oblique_project(V, V, [1, 0])


@given(seeds)
def test_oblique_projector_idempotent(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    k = int(rng.integers(1, n))
    B = cgauss(rng, n, n)
    V = Subspace.span(B[:, :k])
    W = Subspace.span(B[:, k:])
    v = cgauss(rng, n)
    q = nx.oblique_project(V, W, v)
    assert np.linalg.norm(nx.oblique_project(V, W, q) - q) <= 1e-10 * np.linalg.norm(v) * np.linalg.cond(B)
    assert np.linalg.norm(q - nx.orth_project(V, q)) <= 1e-10 * np.linalg.norm(q) * np.linalg.cond(B)


# least squares and square roots


@given(seeds)
def test_lstsq_matches_solve(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    M = cgauss(rng, n, n) + 3 * np.eye(n)
    b = cgauss(rng, n)
    x = nx.lstsq(M, b)
    ref = np.linalg.solve(M, b)
    assert np.linalg.norm(x - ref) <= 1e-10 * np.linalg.norm(ref) * np.linalg.cond(M)


def test_lstsq_minimum_norm():
    M = np.array([[1.0, 0.0], [0.0, 0.0]])
    assert np.allclose(nx.lstsq(M, [2.0, 5.0]), [2.0, 0.0])


def test_psd_sqrt_examples():
    assert np.allclose(nx.psd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(nx.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    assert np.allclose(nx.psd_sqrt([[1.0]]), [[1.0]])


def test_psd_sqrt_rejects_bad_input():
    with pytest.raises(DomainError):
        nx.psd_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DomainError):
        nx.psd_sqrt(np.diag([1.0, -1.0]))


@given(seeds)
def test_psd_sqrt_squares_back(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    G = cgauss(rng, n, n)
    M = G @ G.conj().T
    R = nx.psd_sqrt(M)
    assert nx.opnorm(R @ R - M) <= 1e-8 * nx.opnorm(M)
    assert nx.opnorm(R - R.conj().T) <= 1e-12 * nx.opnorm(R)


def test_extreme_sq_singular_values_wide_and_tall():
    assert nx.extreme_sq_singular_values(np.diag([2.0, 3.0])) == pytest.approx((4.0, 9.0))
    assert nx.extreme_sq_singular_values(np.ones((3, 1)), rows=3)[0] == 0.0
