import json

import numpy as np
import pytest

from gitcluster.datagen import (
    NOISE_LABEL,
    NOISE_LEVELS,
    RNG_NAME,
    SCALE_FACTORS,
    SyntheticSpec,
    generate,
    multiscale_mix,
    split_counts,
)
from gitcluster.dataset import Dataset


def test_circle_radii_exact():
    ds, y = generate(SyntheticSpec("circles", 1000, seed=4))
    r = np.linalg.norm(ds.points, axis=1)
    assert np.all(np.abs(r[y == 0] - 1.0) < 1e-9)
    assert np.all(np.abs(r[y == 1] - 0.5) < 1e-9)
    assert np.bincount(y).tolist() == [500, 500]


def test_determinism():
    spec = SyntheticSpec("moons", 1000, seed=7, gaussian_noise=0.06, uniform_noise_fraction=0.1)
    (a, ya), (b, yb) = generate(spec), generate(spec)
    assert a.points.tobytes() == b.points.tobytes()
    assert ya.tobytes() == yb.tobytes()
    c, _ = generate(SyntheticSpec("moons", 1000, seed=8, gaussian_noise=0.06))
    assert not np.array_equal(a.points[:900], c.points[:900])
    assert a.metadata["rng"] == RNG_NAME and a.metadata["seed"] == 7


def test_noise_grid():
    assert len(NOISE_LEVELS) == 13
    assert NOISE_LEVELS[0] == 0.02 and NOISE_LEVELS[-1] == 0.26
    assert np.allclose(np.diff(NOISE_LEVELS), 0.02)
    sets = [generate(SyntheticSpec("moons", 300, seed=1, gaussian_noise=s)) for s in NOISE_LEVELS]
    assert len(sets) == 13
    assert SCALE_FACTORS[0] == 1 and SCALE_FACTORS[-1] == 100


def test_uniform_noise_points():
    ds, y = generate(SyntheticSpec("blobs", 500, seed=2, uniform_noise_fraction=0.2))
    assert ds.n == 500
    assert int((y == NOISE_LABEL).sum()) == 100
    assert np.bincount(y[y >= 0]).tolist() == split_counts(400, 3)
    core = ds.points[y >= 0]
    noise = ds.points[y == NOISE_LABEL]
    assert np.all(noise >= core.min(axis=0) - 1e-12) and np.all(noise <= core.max(axis=0) + 1e-12)


def test_scale_factor():
    a, _ = generate(SyntheticSpec("moons", 200, seed=3))
    b, _ = generate(SyntheticSpec("moons", 200, seed=3, scale_factor=20))
    assert np.allclose(b.points, 20 * a.points, rtol=1e-15)


def test_split_counts():
    assert split_counts(10, 3) == [4, 3, 3]
    assert split_counts(9, 3) == [3, 3, 3]
    assert sum(split_counts(1001, 7)) == 1001


@pytest.mark.parametrize("kwargs", [
    dict(shape="spiral"), dict(n=1), dict(n=2.5), dict(gaussian_noise=-0.1),
    dict(uniform_noise_fraction=1.0), dict(scale_factor=0), dict(circle_factor=1.5),
    dict(mix_scale=-2),
])
def test_invalid_spec(kwargs):
    with pytest.raises(ValueError):
        SyntheticSpec(**kwargs)


def test_spec_json():
    doc = json.loads(SyntheticSpec("circles", 100, seed=5).to_json())
    assert doc["shape"] == "circles" and doc["seed"] == 5 and doc["rng"] == RNG_NAME


def test_mix_identity_copy():
    base, y = generate(SyntheticSpec("moons", 200, seed=0))
    mixed, ym = multiscale_mix(base, y, 1.0, offset=(100.0, 0.0))
    assert mixed.n == 400
    assert np.array_equal(mixed.points[200:], base.points + [100.0, 0.0])
    assert sorted(set(ym.tolist())) == [0, 1, 2, 3]


def test_mix_hundredfold_circles():
    ds, y = generate(SyntheticSpec("circles", 1000, seed=0, mix_scale=100))
    assert ds.n == 2000
    assert np.bincount(y).tolist() == [500] * 4
    lo1, hi1 = ds.points[:1000].min(0), ds.points[:1000].max(0)
    lo2, hi2 = ds.points[1000:].min(0), ds.points[1000:].max(0)
    assert (hi2 - lo2).max() / (hi1 - lo1).max() == pytest.approx(100)
    assert lo2[0] > hi1[0]


def test_mix_overlap_error():
    base = Dataset(np.array([[0.0, 0.0], [1.0, 1.0]]))
    with pytest.raises(ValueError, match="overlaps"):
        multiscale_mix(base, [0, 1], 2.0, offset=(0.5, 0.0))


def test_mix_keeps_noise_label():
    ds, y = generate(SyntheticSpec("moons", 200, seed=0, uniform_noise_fraction=0.1))
    _, ym = multiscale_mix(ds, y, 5.0)
    assert int((ym == NOISE_LABEL).sum()) == 2 * int((y == NOISE_LABEL).sum())
