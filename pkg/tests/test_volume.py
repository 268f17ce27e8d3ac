import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volmrf import (BoundsError, Dims, LabelVolume, ParameterError, ProbabilityVolume, ShapeError,
                    ValidationError, argmax_labeling, linear_index, neighbors6, upsample_bilinear)
from volmrf.volume import coord_from_index, grid_edges

from oracles import brute_edges

dims_st = st.tuples(*[st.integers(1, 8)] * 3)


def test_linear_index_examples():
    assert linear_index((0, 0, 0), Dims(4, 4, 4)) == 0
    assert linear_index((1, 0, 0), Dims(4, 4, 4)) == 1
    assert linear_index((1, 2, 3), Dims(4, 5, 6)) == 69


@pytest.mark.parametrize("coord", [(4, 0, 0), (0, 5, 0), (0, 0, 6), (-1, 0, 0)])
def test_linear_index_out_of_bounds(coord):
    with pytest.raises(BoundsError):
        linear_index(coord, Dims(4, 5, 6))


@given(dims_st)
@settings(max_examples=40, deadline=None)
def test_linear_index_roundtrip(shape):
    dims = Dims(*shape)
    seen = set()
    for x in range(shape[0]):
        for y in range(shape[1]):
            for z in range(shape[2]):
                k = linear_index((x, y, z), dims)
                assert coord_from_index(k, dims) == (x, y, z)
                seen.add(k)
    assert seen == set(range(dims.size))


def test_neighbors6_examples():
    assert len(neighbors6((2, 2, 2), Dims(5, 5, 5))) == 6
    assert sorted(neighbors6((0, 0, 0), Dims(5, 5, 5))) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert neighbors6((0, 0, 0), Dims(1, 1, 1)) == []


@given(dims_st)
@settings(max_examples=30, deadline=None)
def test_neighbors6_symmetric_and_edge_count(shape):
    dims = Dims(*shape)
    count = 0
    for x in range(shape[0]):
        for y in range(shape[1]):
            for z in range(shape[2]):
                for nb in neighbors6((x, y, z), dims):
                    assert (x, y, z) in neighbors6(nb, dims)
                    count += nb > (x, y, z)
    X, Y, Z = shape
    assert count == 3 * X * Y * Z - X * Y - Y * Z - X * Z == dims.num_edges


@given(dims_st)
@settings(max_examples=30, deadline=None)
def test_grid_edges_match_enumeration(shape):
    i, j = grid_edges(Dims(*shape))
    assert sorted(zip(i.tolist(), j.tolist())) == sorted(brute_edges(shape))
    assert list(zip(i.tolist(), j.tolist())) == sorted(zip(i.tolist(), j.tolist()))


def test_dims_rejects_bad_values():
    with pytest.raises(ParameterError):
        Dims(0, 1, 1)
    with pytest.raises(ParameterError):
        Dims(1, 1, 1, (1.0, 0.0, 1.0))


def _prob(voxel_probs):
    return ProbabilityVolume(np.asarray(voxel_probs, dtype=float).reshape(1, 1, 1, -1))


@pytest.mark.parametrize("probs, label", [
    ([0.1, 0.7, 0.2], 1),
    ([0.5, 0.5], 0),
    ([0.25] * 4, 0),
])
def test_argmax_examples(probs, label):
    assert argmax_labeling(_prob(probs)).data[0, 0, 0] == label


def test_probability_validation_names_voxel():
    data = np.full((2, 2, 1, 2), 0.5)
    data[1, 0, 0] = [0.9, 0.6]
    with pytest.raises(ValidationError, match=r"\(1, 0, 0\)"):
        ProbabilityVolume(data)
    data[1, 0, 0] = [1.5, -0.5]
    with pytest.raises(ValidationError):
        ProbabilityVolume(data)
    with pytest.raises(ShapeError):
        ProbabilityVolume(np.ones((2, 2, 2, 1)))


def test_label_volume_range():
    with pytest.raises(ValidationError):
        LabelVolume(np.array([[[3]]]), num_labels=3)
    assert LabelVolume(np.array([[[2]]]), num_labels=3).data[0, 0, 0] == 2


def test_volumes_are_immutable():
    vol = _prob([0.3, 0.7])
    with pytest.raises(ValueError):
        vol.data[0, 0, 0, 0] = 1.0


def test_upsample_constant_volume():
    data = np.empty((3, 2, 2, 3))
    data[...] = [0.2, 0.3, 0.5]
    for f in (1, 2, 3):
        out = upsample_bilinear(ProbabilityVolume(data), f)
        assert out.data.shape == (3 * f, 2 * f, 2, 3)
        np.testing.assert_allclose(out.data, np.broadcast_to([0.2, 0.3, 0.5], out.data.shape), atol=1e-15)


def test_upsample_row_example():
    data = np.zeros((2, 1, 1, 2))
    data[:, 0, 0, 0] = [0.0, 1.0]
    data[:, 0, 0, 1] = [1.0, 0.0]
    out = upsample_bilinear(ProbabilityVolume(data), 2)
    np.testing.assert_allclose(out.data[:, 0, 0, 0], [0.0, 0.25, 0.75, 1.0], atol=1e-15)
    np.testing.assert_allclose(out.data[:, 0, 0, 1], [1.0, 0.75, 0.25, 0.0], atol=1e-15)


def _ref_upsample_slice(img, f):
    """Direct per-pixel bilinear evaluation of one 2D channel."""
    nx, ny = img.shape
    out = np.empty((nx * f, ny * f))
    for gx in range(nx * f):
        for gy in range(ny * f):
            cx = min(max((gx + 0.5) / f - 0.5, 0), nx - 1)
            cy = min(max((gy + 0.5) / f - 0.5, 0), ny - 1)
            x0, y0 = int(np.floor(cx)), int(np.floor(cy))
            x1, y1 = min(x0 + 1, nx - 1), min(y0 + 1, ny - 1)
            tx, ty = cx - x0, cy - y0
            out[gx, gy] = ((1 - tx) * (1 - ty) * img[x0, y0] + tx * (1 - ty) * img[x1, y0]
                           + (1 - tx) * ty * img[x0, y1] + tx * ty * img[x1, y1])
    return out


def test_upsample_matches_direct_bilinear():
    rng = np.random.default_rng(3)
    p = rng.dirichlet(np.ones(3), size=(4, 3, 2))
    out = upsample_bilinear(ProbabilityVolume(p), 3)
    for z in range(2):
        for c in range(3):
            np.testing.assert_allclose(out.data[:, :, z, c], _ref_upsample_slice(p[:, :, z, c], 3), atol=1e-12)


@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_upsample_properties(factor, L_extra, seed):
    rng = np.random.default_rng(seed)
    L = 1 + L_extra
    p = rng.dirichlet(np.ones(L), size=(3, 4, 2))
    vol = ProbabilityVolume(p)
    out = upsample_bilinear(vol, factor)
    assert out.data.min() >= 0 and out.data.max() <= 1
    np.testing.assert_allclose(out.data.sum(axis=3), 1.0, atol=1e-6)
    assert np.array_equal(argmax_labeling(upsample_bilinear(vol, 1)).data, argmax_labeling(vol).data)


def test_upsample_spacing_and_errors():
    vol = ProbabilityVolume(np.full((2, 2, 1, 2), 0.5), (1.0, 1.0, 1.3))
    assert upsample_bilinear(vol, 4).spacing_mm == (0.25, 0.25, 1.3)
    with pytest.raises(ParameterError):
        upsample_bilinear(vol, 0)
