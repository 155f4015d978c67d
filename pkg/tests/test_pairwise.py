import numpy as np
import pytest

from spdid import MetricSpec, both_directions, cross_distances, validate_spd
from spdid.core import DimensionMismatch, InvalidParameter, NumericalError
from support import spd_pool


def scalar(v):
    return validate_spd([[float(v)]])


def test_singleton_identity():
    d = cross_distances([validate_spd(np.eye(2))], [validate_spd(np.eye(2))], MetricSpec("euclid"))
    np.testing.assert_array_equal(d.values, [[0.0]])


def test_bw_scalar_cross_matrix():
    mats = [scalar(1.0), scalar(4.0)]
    d = cross_distances(mats, mats, MetricSpec("bw"))
    # scalar bw closed form |sqrt(a) - sqrt(b)|
    np.testing.assert_allclose(d.values, [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)


def test_alpha_z_scalar_cross_matrix_asymmetric():
    alpha, z = 0.99, 1.0
    mats = [scalar(1.0), scalar(np.e)]
    d = cross_distances(mats, mats, MetricSpec("alpha_z", alpha, z))

    def oracle(a, b):
        return (1 - alpha) * a + alpha * b - a ** (1 - alpha) * b**alpha

    expected = [[0.0, oracle(1.0, np.e)], [oracle(np.e, 1.0), 0.0]]
    np.testing.assert_allclose(d.values, expected, atol=1e-12)
    assert d.values[0, 1] != pytest.approx(d.values[1, 0], rel=1e-3)


def test_both_directions_symmetric_metric_transposes():
    rng = np.random.default_rng(1)
    s1 = spd_pool(rng, 4, 3)
    s2 = spd_pool(rng, 4, 3)
    d12, d21 = both_directions(s1, s2, MetricSpec("log"))
    np.testing.assert_allclose(d21.values, d12.values.T, rtol=1e-10)


def test_both_directions_alpha_z_not_transpose():
    rng = np.random.default_rng(2)
    s1 = spd_pool(rng, 4, 3)
    s2 = spd_pool(rng, 4, 3)
    d12, d21 = both_directions(s1, s2, MetricSpec("alpha_z", 0.99, 1.0))
    assert np.abs(d21.values - d12.values.T).max() > 1e-6


def test_both_directions_singleton_identical():
    a = [validate_spd(np.eye(3))]
    d12, d21 = both_directions(a, a, MetricSpec("ai"))
    assert d12.values[0, 0] == pytest.approx(0.0, abs=1e-10)
    assert d21.values[0, 0] == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("kind,alpha,z", [
    ("euclid", None, None),
    ("log", None, None),
    ("ai", None, None),
    ("bw", None, None),
    ("alpha_pro", 0.3, None),
    ("alpha_z", 0.99, 1.0),
])
def test_worker_count_never_changes_bits(kind, alpha, z):
    rng = np.random.default_rng(3)
    probe = spd_pool(rng, 6, 4)
    gallery = spd_pool(rng, 6, 5)
    spec = MetricSpec(kind, alpha, z)
    baseline = cross_distances(probe, gallery, spec, workers=1).values
    for w in (2, 8):
        # fresh matrices so cached spectra from the serial run cannot leak in
        probe_w = [validate_spd(m.entries) for m in probe]
        gallery_w = [validate_spd(m.entries) for m in gallery]
        again = cross_distances(probe_w, gallery_w, spec, workers=w).values
        np.testing.assert_array_equal(again, baseline)


def test_spectrum_reuse_matches_cold_computation():
    from spdid.metrics import dispatch

    rng = np.random.default_rng(4)
    probe = spd_pool(rng, 5, 3)
    gallery = spd_pool(rng, 5, 3)
    spec = MetricSpec("alpha_z", 0.99, 1.0)
    warm = cross_distances(probe, gallery, spec).values
    cold = np.array(
        [
            [
                dispatch(spec, validate_spd(a.entries), validate_spd(b.entries))
                for b in gallery
            ]
            for a in probe
        ]
    )
    np.testing.assert_array_equal(warm, cold)


def test_permutation_equivariance():
    rng = np.random.default_rng(5)
    probe = spd_pool(rng, 4, 4)
    gallery = spd_pool(rng, 4, 4)
    spec = MetricSpec("log")
    base = cross_distances(probe, gallery, spec).values
    perm = [2, 0, 3, 1]
    shuffled = cross_distances([probe[i] for i in perm], gallery, spec).values
    np.testing.assert_array_equal(shuffled, base[perm, :])
    shuffled_cols = cross_distances(probe, [gallery[j] for j in perm], spec).values
    np.testing.assert_array_equal(shuffled_cols, base[:, perm])


def test_mixed_orders_rejected():
    with pytest.raises(DimensionMismatch):
        cross_distances(
            [validate_spd(np.eye(2))], [validate_spd(np.eye(3))], MetricSpec("euclid")
        )


def test_empty_lists_rejected():
    with pytest.raises(InvalidParameter):
        cross_distances([], [validate_spd(np.eye(2))], MetricSpec("euclid"))


def test_kernel_error_annotated_with_position():
    mats = [validate_spd(2 * np.eye(3)), validate_spd(np.eye(3) + 0.1)]
    with pytest.raises(Exception) as err:
        cross_distances(mats, mats, MetricSpec("pearson"), ["p0", "p1"], ["g0", "g1"])
    assert "p0" in str(err.value) and "g0" in str(err.value)


def test_labels_default_to_indices():
    d = cross_distances(
        [validate_spd(np.eye(2))], [validate_spd(np.eye(2))], MetricSpec("euclid")
    )
    assert d.probe_labels == ("0",)
    assert d.gallery_labels == ("0",)
