import numpy as np
import pytest

from triso.independence import (
    GENERIC_VOLUME_FLOOR,
    HYPERPLANE_MARGIN,
    RANK_THRESHOLD,
    IndependenceReport,
    JacobianReport,
    det_jacobian_closed_form,
    gradient_volume,
    independence_report,
    jacobian_canonical,
    jacobian_report,
)
from triso.invariants import CanonicalParams, canonical_invariants
from triso.polynomials import CANONICAL_BASIS


def fd_jacobian(point, h_scale=1e-6):
    """Plain central differences straight off the polynomial tables."""
    point = np.asarray(point, dtype=float)
    jac = np.zeros((4, 4))
    for i, poly in enumerate(CANONICAL_BASIS):
        for j in range(4):
            h = h_scale * max(1.0, abs(point[j]))
            up = point.copy()
            dn = point.copy()
            up[j] += h
            dn[j] -= h
            jac[i, j] = (poly(up) - poly(dn)) / (2.0 * h)
    return jac


@pytest.mark.parametrize("seed", range(6))
def test_analytic_jacobian_matches_fd(seed):
    rng = np.random.default_rng(seed)
    p = rng.uniform(-2, 2, size=4)
    analytic = jacobian_canonical(p)
    fd = fd_jacobian(p)
    scale = np.maximum(1.0, np.abs(analytic))
    assert np.max(np.abs(analytic - fd) / scale) < 1e-4


def test_jacobian_row_i2_by_hand():
    # I2 = 4 a^2 + 6 ab + 6 b^2 + 6 c^2 + 4 d^2 for (a, b, c, d); at
    # (1, 0, 0, 0) the gradient is (8, 6, 0, 0)
    jac = jacobian_canonical([1.0, 0.0, 0.0, 0.0])
    assert jac[0].tolist() == [8.0, 6.0, 0.0, 0.0]


def test_jacobian_zero_point():
    assert np.array_equal(jacobian_canonical(np.zeros(4)), np.zeros((4, 4)))


def test_jacobian_modes():
    p = np.array([1.0, -0.5, 0.8, 1.2])
    a = jacobian_canonical(p, mode="analytic")
    f1 = jacobian_canonical(p, mode="fd")
    f2 = jacobian_canonical(p, mode="finite-difference")
    assert np.array_equal(f1, f2)
    assert np.max(np.abs(a - f1)) < 1e-3
    with pytest.raises(ValueError):
        jacobian_canonical(p, mode="symbolic")


def test_closed_form_det_matches_numeric_det():
    rng = np.random.default_rng(10)
    for _ in range(25):
        p = rng.uniform(-2, 2, size=4)
        det = float(np.linalg.det(jacobian_canonical(p)))
        closed = det_jacobian_closed_form(p)
        assert abs(det - closed) <= 1e-8 * max(1.0, abs(det))


def test_det_vanishes_exactly_on_hyperplanes():
    rng = np.random.default_rng(11)
    for _ in range(10):
        p = rng.uniform(-2, 2, size=4)
        for idx in (2, 3):  # d123 = 0 and d223 = 0
            q = p.copy()
            q[idx] = 0.0
            assert det_jacobian_closed_form(q) == 0.0


def test_gradient_volume_unit_rows():
    # identity has volume 1 after row normalization; any zero row gives 0
    assert gradient_volume(np.eye(4)) == 1.0
    assert gradient_volume(5.0 * np.eye(4)) == pytest.approx(1.0)
    m = np.eye(4)
    m[2] = 0.0
    assert gradient_volume(m) == 0.0


def test_report_fields_and_genericity():
    p = np.array([1.0, -0.7, 1.3, 0.9])
    rep = jacobian_report(p)
    assert isinstance(rep, JacobianReport)
    assert rep.rank() == 4
    assert rep.is_generic()
    assert rep.volume() > GENERIC_VOLUME_FLOOR
    assert rep.fd_deviation <= 1e-6
    assert abs(rep.det - det_jacobian_closed_form(p)) <= 1e-8 * max(1.0, abs(rep.det))
    with pytest.raises(ValueError):
        rep.jac[0, 0] = 99.0  # read-only


def test_report_on_hyperplane_point_is_degenerate():
    rep = jacobian_report(np.array([1.0, -0.7, 0.0, 0.9]))
    assert det_jacobian_closed_form([1.0, -0.7, 0.0, 0.9]) == 0.0
    assert not rep.is_generic()


def test_independence_report_sampling():
    rep = independence_report(sample_count=200, seed=0)
    assert isinstance(rep, IndependenceReport)
    assert rep.samples == 200
    assert rep.degenerate == 0  # sampler filters degenerates out
    assert rep.rank4_fraction == 1.0
    assert rep.min_abs_det > 0.0
    assert rep.max_fd_deviation <= 1e-6
    assert rep.max_det_mismatch <= 1e-8


def test_independence_report_deterministic():
    a = independence_report(sample_count=100, seed=5)
    b = independence_report(sample_count=100, seed=5)
    assert a == b
    c = independence_report(sample_count=100, seed=6)
    assert a != c


def test_independence_report_json_keys():
    rep = independence_report(sample_count=50, seed=1)
    obj = rep.to_json_obj()
    assert list(obj) == ["samples", "rank4_fraction", "min_abs_det", "max_fd_deviation"]


def test_caller_points_with_degenerates_are_flagged():
    pts = np.array(
        [
            [1.0, -0.7, 1.3, 0.9],   # generic
            [1.0, -0.7, 0.0, 0.9],   # on the d123 = 0 hyperplane
            [0.5, 0.25, -1.0, 1.5],  # generic
        ]
    )
    rep = independence_report(points=pts)
    # samples counts the points the statistics cover, i.e. the generic ones
    assert rep.samples == 2
    assert rep.degenerate == 1
    assert rep.rank4_fraction == 1.0


def test_independence_report_rejects_empty():
    with pytest.raises(ValueError):
        independence_report(sample_count=0)
    with pytest.raises(ValueError):
        independence_report(points=np.zeros((0, 4)))


def test_hyperplane_margin_rejects_near_zero_coordinates():
    # sampled points keep both |d123| and |d223| clear of the margin
    rep = independence_report(sample_count=300, seed=3)
    assert rep.min_abs_det > 0
    assert HYPERPLANE_MARGIN == 1e-6
    assert RANK_THRESHOLD == 1e-10


def test_rank_threshold_is_provably_met_at_the_volume_floor():
    # with unit rows sigma_1 <= 2 and sigma_1 sigma_2 sigma_3 <= 8, so
    # volume > floor forces sigma_4 >= floor / 8, far above the SVD cut
    assert GENERIC_VOLUME_FLOOR / 8.0 > RANK_THRESHOLD * 2.0


def test_invariants_consistent_with_jacobian_degrees():
    # Euler's identity: for a degree-k homogeneous polynomial,
    # x . grad = k f; checks rows against the invariant values
    p = np.array([0.9, -1.1, 0.6, 1.4])
    jac = jacobian_canonical(p)
    tup = canonical_invariants(CanonicalParams(*p)).as_array()
    degrees = np.array([2.0, 4.0, 6.0, 10.0])
    euler = jac @ p
    assert np.max(np.abs(euler - degrees * tup) / np.maximum(1.0, np.abs(tup))) < 1e-12
