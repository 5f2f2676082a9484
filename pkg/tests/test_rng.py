import numpy as np
import pytest

from demigronwall.rng import (
    StreamSeed,
    normal_matrix,
    path_keys,
    raw_uint64,
    uniform_matrix,
    uniform_stream,
)


def test_bit_identical_reproducibility():
    a = uniform_matrix(12345, 64, 32)
    b = uniform_matrix(12345, 64, 32)
    assert np.array_equal(a, b)


def test_per_path_determinism_across_batch_sizes():
    small = uniform_matrix(99, 5, 40)
    large = uniform_matrix(99, 500, 40)
    assert np.array_equal(small, large[:5])


def test_counter_offset_is_a_pure_shift():
    full = uniform_matrix(7, 8, 60)
    tail = uniform_matrix(7, 8, 40, first_counter=20)
    assert np.array_equal(full[:, 20:], tail)


def test_uniforms_open_interval_and_moments():
    u = uniform_matrix(3, 400, 250)
    assert u.min() > 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 4.0 * u.std() / np.sqrt(u.size)


def test_normals_standardized():
    z = normal_matrix(17, 500, 200)
    n = z.size
    assert abs(z.mean()) < 4.0 / np.sqrt(n)
    assert abs(z.std() - 1.0) < 4.0 / np.sqrt(n)


def test_distinct_seeds_and_paths_decorrelate():
    keys = path_keys(5, np.arange(1000))
    assert np.unique(keys).size == 1000
    assert not np.array_equal(uniform_matrix(1, 4, 16), uniform_matrix(2, 4, 16))


def test_stream_seed_matches_matrix_row():
    row = uniform_stream(StreamSeed(321, 3), 25)
    assert np.array_equal(row, uniform_matrix(321, 8, 25)[3])
    assert StreamSeed(321, 3).key() == path_keys(321, 3)


def test_raw_words_cover_uint64_range():
    bits = raw_uint64(0, 32, 64)
    assert bits.dtype == np.uint64
    # top bit set about half the time
    top = (bits >> np.uint64(63)).astype(float).mean()
    assert 0.45 < top < 0.55


@pytest.mark.parametrize("bad", [-1, 2 ** 64])
def test_seed_must_fit_in_64_bits(bad):
    with pytest.raises(ValueError):
        uniform_matrix(bad, 2, 2)
