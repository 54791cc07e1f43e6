import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triso.invariants import (
    CanonicalParams,
    InvariantTuple,
    canonical_invariants,
    moment_matrix,
    relative_error,
    smith_bao,
    v_vector,
)
from triso.tensor_core import (
    SymTraceless3,
    act,
    compress,
    expand,
    random_orthogonal,
    random_tensor,
)

components = st.floats(min_value=-5, max_value=5, allow_nan=False)


def brute_invariants(t):
    """Loop-only transcription of the four contractions, the slow oracle."""
    d = expand(t).entries
    r3 = range(3)
    i2 = sum(d[i, j, k] ** 2 for i, j, k in itertools.product(r3, repeat=3))
    m = np.zeros((3, 3))
    for k, l in itertools.product(r3, repeat=2):
        m[k, l] = sum(d[i, j, k] * d[i, j, l] for i, j in itertools.product(r3, repeat=2))
    i4 = sum(m[k, l] ** 2 for k, l in itertools.product(r3, repeat=2))
    v = np.zeros(3)
    for p in r3:
        v[p] = sum(m[k, l] * d[k, l, p] for k, l in itertools.product(r3, repeat=2))
    i6 = float(v @ v)
    i10 = sum(
        d[i, j, k] * v[i] * v[j] * v[k] for i, j, k in itertools.product(r3, repeat=3)
    )
    return np.array([i2, i4, i6, i10])


@pytest.mark.parametrize("seed", range(8))
def test_smith_bao_matches_loop_oracle(seed):
    t = random_tensor(seed)
    got = smith_bao(t).as_array()
    want = brute_invariants(t)
    assert np.all(np.abs(got - want) <= 1e-10 * np.maximum(1.0, np.abs(want)))


def test_known_tuple_d111_d112():
    # integer tensor, integer invariants, exact in floats
    tup = smith_bao(SymTraceless3(d111=1.0, d112=1.0))
    assert (tup.i2, tup.i4, tup.i6, tup.i10) == (10.0, 44.0, 16.0, 64.0)


def test_known_tuple_d111_d123():
    tup = smith_bao(SymTraceless3(d111=1.0, d123=1.0))
    assert (tup.i2, tup.i4, tup.i6, tup.i10) == (10.0, 44.0, 16.0, -64.0)


def test_zero_tensor():
    tup = smith_bao(SymTraceless3())
    assert tup.as_array().tolist() == [0.0, 0.0, 0.0, 0.0]


def test_moment_matrix_is_symmetric_psd():
    for seed in range(5):
        m = moment_matrix(random_tensor(seed))
        assert np.array_equal(m, m.T)
        assert np.min(np.linalg.eigvalsh(m)) >= -1e-12


def test_moment_matrix_trace_is_i2():
    t = random_tensor(12)
    assert abs(np.trace(moment_matrix(t)) - smith_bao(t).i2) < 1e-12


def test_v_vector_matches_loop():
    t = random_tensor(6)
    d = expand(t).entries
    m = moment_matrix(t)
    want = np.array(
        [
            sum(m[k, l] * d[k, l, p] for k in range(3) for l in range(3))
            for p in range(3)
        ]
    )
    assert np.max(np.abs(v_vector(t) - want)) < 1e-12


@pytest.mark.parametrize("seed", range(20))
def test_rotation_invariance(seed):
    t = random_tensor(seed)
    g = random_orthogonal(seed + 1000, proper=(seed % 2 == 0))
    before = smith_bao(t).as_array()
    after = smith_bao(compress(act(g, expand(t)))).as_array()
    for x, y in zip(before, after):
        assert relative_error(float(x), float(y)) < 1e-12


@settings(max_examples=30)
@given(st.lists(components, min_size=7, max_size=7), st.floats(0.1, 3.0))
def test_homogeneity_degrees(vals, s):
    t = SymTraceless3(*vals)
    scaled = SymTraceless3.from_array(s * t.as_array())
    a = smith_bao(t).as_array()
    b = smith_bao(scaled).as_array()
    want = a * s ** np.array([2.0, 4.0, 6.0, 10.0])
    assert np.all(np.abs(b - want) <= 1e-10 * np.maximum(1.0, np.abs(want)))


def test_canonical_invariants_agrees_with_smith_bao():
    rng = np.random.default_rng(3)
    for _ in range(10):
        params = CanonicalParams(*rng.uniform(-2, 2, size=4))
        a = canonical_invariants(params).as_array()
        b = smith_bao(params.to_tensor()).as_array()
        assert np.all(np.abs(a - b) <= 1e-11 * np.maximum(1.0, np.abs(b)))


def test_canonical_params_tensor_layout():
    p = CanonicalParams(1.0, 2.0, 3.0, 4.0)
    t = p.to_tensor()
    assert (t.d111, t.d122, t.d123, t.d223) == (1.0, 2.0, 3.0, 4.0)
    assert (t.d112, t.d113, t.d222) == (0.0, 0.0, 0.0)


def test_relative_error_semantics():
    # absolute below 1, relative above
    assert relative_error(0.0, 1e-12) == 1e-12
    assert relative_error(100.0, 110.0) == pytest.approx(10.0 / 110.0)
    assert relative_error(3.0, 3.0) == 0.0


def test_invariant_tuple_json_keys():
    tup = smith_bao(random_tensor(4))
    assert list(tup.to_json_obj()) == ["I2", "I4", "I6", "I10"]


def test_i2_is_squared_frobenius():
    t = random_tensor(8)
    assert abs(smith_bao(t).i2 - expand(t).frobenius() ** 2) < 1e-12
