import numpy as np
import pytest

from volmrf import ParameterError, PhantomSpec, argmax_labeling, make_phantom


def test_eta_zero_prior_is_exact():
    gt, prob, intensity = make_phantom(PhantomSpec(eta=0.0, seed=3))
    np.testing.assert_array_equal(argmax_labeling(prob).data, gt.data)
    assert set(np.unique(gt.data)) == {0, 1, 2}


def test_same_seed_same_phantom():
    a = make_phantom(PhantomSpec(seed=7))
    b = make_phantom(PhantomSpec(seed=7))
    c = make_phantom(PhantomSpec(seed=8))
    for x, y in zip(a, b):
        assert x.data.tobytes() == y.data.tobytes()
    assert a[1].data.tobytes() != c[1].data.tobytes()


def test_corruption_flips_labels():
    gt, prob, _ = make_phantom(PhantomSpec(eta=0.4, seed=1))
    wrong = np.mean(argmax_labeling(prob).data != gt.data)
    assert 0.05 < wrong < 0.5


def test_intensity_means_per_structure():
    gt, _, intensity = make_phantom(PhantomSpec(seed=2, contrast=50.0, noise=1.0))
    for k in range(3):
        assert intensity.data[gt.data == k].mean() == pytest.approx(50.0 * k, abs=0.5)


def test_geometry():
    gt, _, _ = make_phantom(PhantomSpec(dims=(20, 20, 20), centers=[(10, 10, 10)], radii=[3], seed=0))
    assert np.count_nonzero(gt.data == 1) == sum(
        1 for x in range(-3, 4) for y in range(-3, 4) for z in range(-3, 4) if x * x + y * y + z * z <= 9)


@pytest.mark.parametrize("kw", [dict(centers=[(2, 16, 16)], radii=[5]), dict(eta=1.0), dict(radii=[5]),
                                dict(dims=(0, 32, 32)), dict(seed=-1)])
def test_invalid_specs(kw):
    with pytest.raises(ParameterError):
        make_phantom(PhantomSpec(**kw))


def test_two_sphere_spec_default_geometry():
    from volmrf.phantom import two_sphere_spec
    spec = two_sphere_spec((32, 32, 32), seed=4)
    assert spec.centers == ((10, 16, 16), (22, 16, 16)) and spec.radii == (5, 5)
    gt, _, _ = make_phantom(two_sphere_spec((12, 16, 10)))
    assert set(np.unique(gt.data)) == {0, 1, 2}
    with pytest.raises(ParameterError):
        two_sphere_spec((4, 4, 4))
