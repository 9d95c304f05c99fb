import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dynsamp import diag_sampling as ds
from dynsamp import disk
from dynsamp import fd_sampling as fd
from dynsamp.diag_sampling import DiagonalModel, Verdict
from dynsamp.disk import DiskSequence
from dynsamp.errors import DomainError
from dynsamp.fd_sampling import FdInstance

seeds = st.integers(min_value=0, max_value=2**32 - 1)

HALF = ds.scalar_model([0.5])  # C = [sqrt(0.75)]


def test_model_validation():
    with pytest.raises(DomainError):
        DiagonalModel(DiskSequence([0.1, 0.1]), ([[1]], [[1]]))
    with pytest.raises(DomainError):
        DiagonalModel(DiskSequence([0.1, 0.2]), ([[1]],))
    with pytest.raises(DomainError):
        DiagonalModel(DiskSequence([0.1, 0.2]), ([[1, 0]], [[1]]))
    with pytest.raises(DomainError):
        DiagonalModel(DiskSequence([0.1]), ([[1]],), block_dims=(2,))
    model = DiagonalModel(DiskSequence([0.1, 0.2]), ([[1, 0]], [[1, 2], [3, 4]]))
    assert model.block_dims == (1, 2) and model.m == 2 and model.dim == 3


def test_to_dense_layout():
    model = DiagonalModel(DiskSequence([0.1, 0.2]), ([[1, 0]], [[1, 2], [3, 4]]))
    A, F = model.to_dense()
    assert np.allclose(A, np.diag([0.1, 0.2, 0.2]))
    assert np.allclose(F, [[1, 1, 3], [0, 2, 4]])


def test_multiplicity_examples():
    assert ds.multiplicity(ds.scalar_model([0.1, 0.2, 0.3])) == 1
    model = DiagonalModel(DiskSequence([0.1, 0.2, 0.3]), ([[1]], [[1], [1]], [[1]]))
    assert ds.multiplicity(model) == 2
    rep = ds.characterize(model)
    assert not rep.cond_i["pass"] and rep.overall is Verdict.NOT_FRAME


# condition (iii) and the E-system


def test_condition_iii_examples():
    b = ds.condition_iii_bounds(HALF)
    assert b.alpha == pytest.approx(1.0, abs=1e-15) and b.beta == pytest.approx(1.0, abs=1e-15)
    rank_one = DiagonalModel(DiskSequence([0.3]), ([[1.0], [2.0]],))
    b = ds.condition_iii_bounds(rank_one)
    assert b.alpha == 0 and not b.passed
    jojo = ds.make_jojo_f_model(2, 8, 1e-3)
    b = ds.condition_iii_bounds(jojo)
    assert abs(b.alpha - 1) <= 1e-14 and abs(b.beta - 1) <= 1e-14


@given(seeds)
def test_condition_iii_equals_e_system(seed):
    rng = np.random.default_rng(seed)
    model = ds.random_model(rng, int(rng.integers(1, 6)), int(rng.integers(1, 4)))
    b = ds.condition_iii_bounds(model)
    lo, hi = ds.E_system_frame_bounds(model)
    assert abs(b.beta - hi) <= 1e-12 * max(hi, 1)
    assert abs(b.alpha - lo) <= 1e-12 * max(hi, 1)


# Bessel bound


def test_bessel_examples():
    zero = ds.scalar_model([0.0], weights=[1.0])
    assert all(ds.bessel_bound(zero, 0, N) == pytest.approx(1.0) for N in (1, 5, 50))
    lam = 0.7
    model = ds.scalar_model([lam])
    for N in (1, 10, 200):
        assert ds.bessel_bound(model, 0, N) == pytest.approx(1 - lam ** (2 * N), rel=1e-12)
    with pytest.raises(DomainError):
        ds.bessel_bound(model, 1, 5)


def test_bessel_monotone_on_random(rng):
    for _ in range(30):
        model = ds.random_model(rng, int(rng.integers(1, 8)), 2)
        vals = [ds.bessel_bound(model, 0, N) for N in (1, 2, 5, 10, 40, 100)]
        assert all(b >= a * (1 - 1e-12) for a, b in zip(vals, vals[1:]))


def test_bessel_plateau_for_separated_model():
    model = ds.scalar_model(1 - 2.0 ** -np.arange(1, 9))
    vals = [ds.bessel_bound(model, 0, N) for N in (100, 3000, 6000)]
    assert np.isfinite(vals).all()
    assert vals[-1] - vals[-2] <= 1e-3 * vals[-1]


# Gram of the Phi system


def test_phi_gram_examples():
    assert np.allclose(ds.phi_gram(HALF), [[1.0]])
    model = ds.scalar_model([0.0, 0.5])
    G = ds.phi_gram(model)
    assert G[0, 1] == pytest.approx(np.sqrt(0.75), abs=1e-15)
    assert np.allclose(np.diag(G), 1.0)


@given(seeds)
def test_phi_gram_hermitian_psd(seed):
    rng = np.random.default_rng(seed)
    model = ds.random_model(rng, int(rng.integers(1, 7)), int(rng.integers(1, 3)), r_max=0.95)
    G = ds.phi_gram(model)
    assert np.max(np.abs(G - G.conj().T)) <= 1e-10 * max(1, np.max(np.abs(G)))
    assert np.linalg.eigvalsh(G)[0] >= -1e-10 * max(1, np.max(np.abs(G)))


def test_riesz_bounds_one_dim():
    assert ds.riesz_bounds_phi(HALF) == pytest.approx((1.0, 1.0), abs=1e-15)


def test_synthesis_one_dim():
    assert ds.synthesis_truncated(HALF, 1) == pytest.approx((0.75, 0.75))
    lo, hi = ds.synthesis_truncated(HALF, 100)
    assert abs(lo - 1) <= 0.25**100 * 10 + 1e-15 and abs(hi - 1) <= 0.25**100 * 10 + 1e-15


def test_synthesis_zero_point_stabilizes_at_one():
    model = DiagonalModel(DiskSequence([0.0, 0.5]), ([[1.0, 0.0]], [[0.0, 0.5]]))
    zero_only = DiagonalModel(DiskSequence([0.0]), ([[2.0]],))
    assert ds.synthesis_truncated(zero_only, 1) == ds.synthesis_truncated(zero_only, 7)
    assert np.allclose(ds.synthesis_matrix(model, 3)[0], [1, 0, 0, 0, 0, 0])


def test_synthesis_matches_dense_orbit(rng):
    model = ds.random_model(rng, 4, 2)
    A, F = model.to_dense()
    M = ds.synthesis_matrix(model, 5)
    assert np.allclose(M, fd.orbit_matrix(A, F, 5))


def test_synthesis_converges_to_riesz_bounds(rng):
    for _ in range(50):
        model = ds.random_model(rng, int(rng.integers(1, 7)), int(rng.integers(1, 4)), r_max=0.8)
        a, b = ds.riesz_bounds_phi(model)
        for N in (25, 50, 100):
            lo, hi = ds.synthesis_truncated(model, N)
            tail = ds.truncation_tail(model, N)
            assert abs(hi - b) <= tail + 1e-10
            if model.dim <= model.m * N:
                assert abs(lo - a) <= tail + 1e-10


# condition (iv)


def test_truncations_adapt_to_radius():
    near = ds.default_truncations(ds.scalar_model([0.999]))
    far = ds.default_truncations(ds.scalar_model([0.5]))
    assert near[-1] > far[-1]
    assert 0.999 ** (2 * near[-1]) <= ds.TAIL_TARGET
    assert near == sorted(near)


def test_profile_requires_condition_iii():
    rank_one = DiagonalModel(DiskSequence([0.3]), ([[1.0], [2.0]],))
    with pytest.raises(DomainError):
        ds.condition_iv_profile(rank_one)


def test_profile_zero_below_dimension_count():
    model = ds.scalar_model([0.1, 0.2, 0.3])
    assert ds.condition_iv_profile(model, [1, 2, 3])[:2] == [0.0, 0.0]


def test_profile_separated_two_block_stabilizes():
    model = ds.scalar_model([0.0, 0.9])
    prof = ds.condition_iv_profile(model, [50, 100, 200, 400])
    assert prof[-1] > 0.1
    assert abs(prof[-1] - prof[-2]) <= 1e-6 * prof[-1]


def test_jojo_model_shape():
    model = ds.make_jojo_f_model(3, 4, 1e-3)
    assert ds.multiplicity(model) == 3 and model.m == 3
    assert disk.separation_constant(model.points) == pytest.approx(1e-3 * 2.0**-3, rel=1e-6)
    for bad in ((1, 4, 1e-3), (2, 0, 1e-3), (2, 4, 1.5)):
        with pytest.raises(DomainError):
            ds.make_jojo_f_model(*bad)


def test_jojo_profile_decays_and_is_not_certified():
    one = ds.condition_iv_profile(ds.make_jojo_f_model(2, 1))[-1]
    eight = ds.condition_iv_profile(ds.make_jojo_f_model(2, 8))[-1]
    assert eight <= one / 10
    rep = ds.characterize(ds.make_jojo_f_model(2, 8))
    assert rep.cond_i["pass"] and rep.cond_iii["pass"]
    assert rep.overall is Verdict.INCONCLUSIVE
    assert rep.cond_iv["warning"]


def test_block_union_is_frame():
    classes = ds.interleaved_geometric_classes(2, 8, rotation=0.5)
    model = ds.make_block_union_model(2, classes)
    rep = ds.characterize(model)
    assert rep.overall is Verdict.FRAME
    assert rep.cond_ii["pass_proxy"] and 2 in rep.cond_ii["class_counts"]
    # frame bounds are the worst of the per-class bounds
    a, _ = ds.riesz_bounds_phi(model)
    per = [ds.riesz_bounds_phi(ds.scalar_model(c))[0] for c in classes]
    assert a == pytest.approx(min(per), rel=1e-8)


def test_block_union_greedy_count_at_clustered_radius():
    classes = ds.interleaved_geometric_classes(2, 8)
    merged = DiskSequence(np.concatenate(classes))
    assert disk.sequence_index_greedy(merged, 0.2).index_estimate == 2


def test_block_union_rejects_overlap():
    with pytest.raises(DomainError):
        ds.make_block_union_model(2, [[0.1, 0.2], [0.2, 0.3]])
    with pytest.raises(DomainError):
        ds.make_block_union_model(2, [[0.1, 0.2]])


def test_block_union_m1_is_scalar_model():
    pts = [0.1, 0.5, -0.3j]
    a = ds.make_block_union_model(1, [pts])
    b = ds.scalar_model(pts)
    assert np.allclose(ds.phi_gram(a), ds.phi_gram(b))


def test_characterize_separated_scalar_is_frame():
    rep = ds.characterize(ds.scalar_model([0.0, 0.9, -0.9, 0.9j]))
    assert rep.overall is Verdict.FRAME
    assert rep.cond_ii["pass_proxy"]


def test_square_frame_models_have_riesz_gram(rng):
    for _ in range(20):
        pts = disk.random_disk_points(rng, 3, 0.6)
        model = DiagonalModel(
            DiskSequence(pts), tuple(rng.normal(size=(2, 2)) + 2 * np.eye(2) for _ in pts)
        )
        if ds.characterize(model).overall is Verdict.FRAME:
            assert ds.riesz_bounds_phi(model)[0] > 0
            assert ds.e_system_matrix(model).shape[0] == ds.e_system_matrix(model).shape[1]


def test_report_serializes():
    d = ds.characterize(HALF).to_dict()
    assert d["overall"] == "Frame" and d["cond_iii"]["pass"]


# single-vector verdict


def test_theorem_one_examples():
    rep = ds.theorem_one_verdict(ds.scalar_model([0.2, 0.7]))
    assert rep.extra["weight_bounds"] == pytest.approx([1.0, 1.0])
    rep = ds.theorem_one_verdict(ds.scalar_model([0.2, 0.7], weights=[0.5, 0.0]))
    assert rep.overall is Verdict.NOT_FRAME
    two = DiagonalModel(DiskSequence([0.3]), ([[1.0], [2.0]],))
    assert ds.theorem_one_verdict(two).overall is Verdict.NOT_FRAME
    with pytest.raises(DomainError):
        ds.theorem_one_verdict(ds.make_jojo_f_model(2, 1))


def test_theorem_one_agrees_with_characterize(rng):
    for _ in range(30):
        model = ds.random_model(rng, int(rng.integers(1, 6)), 1, r_max=0.9)
        assert ds.theorem_one_verdict(model).overall == ds.characterize(model).overall


def test_characterize_matches_fd_for_not_frame(rng):
    # a NotFrame verdict is finitely refutable, so the dense truncation agrees
    for _ in range(40):
        model = ds.random_model(rng, int(rng.integers(1, 5)), int(rng.integers(1, 3)))
        A, F = model.to_dense()
        if ds.characterize(model).overall is Verdict.NOT_FRAME:
            assert not fd.is_frame_bruteforce(FdInstance(A, F))
        else:
            assert fd.is_frame_bruteforce(FdInstance(A, F))
