"""Volume containers, grid indexing and the slice-wise resampling helpers.

Arrays are indexed ``[x, y, z]`` (plus a trailing channel axis for
probabilities).  Linear voxel indices are x-fastest, i.e. the Fortran-order
flattening of that array, and channels are the slowest axis on disk.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import BoundsError, ParameterError, ShapeError, ValidationError

Coord = Tuple[int, int, int]

PROB_SUM_TOL = 1e-4


def _spacing_tuple(spacing) -> Tuple[float, float, float]:
    sp = tuple(float(s) for s in spacing)
    if len(sp) != 3 or not all(np.isfinite(s) and s > 0 for s in sp):
        raise ParameterError(f"spacing must be three positive lengths, got {spacing!r}")
    return sp


@dataclass(frozen=True)
class Dims:
    x: int
    y: int
    z: int
    spacing_mm: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ParameterError(f"dimension {name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        object.__setattr__(self, "spacing_mm", _spacing_tuple(self.spacing_mm))

    @classmethod
    def from_shape(cls, shape: Sequence[int], spacing_mm=(1.0, 1.0, 1.0)) -> "Dims":
        return cls(shape[0], shape[1], shape[2], spacing_mm)

    @property
    def shape(self) -> Coord:
        return (self.x, self.y, self.z)

    @property
    def size(self) -> int:
        return self.x * self.y * self.z

    @property
    def num_edges(self) -> int:
        """Number of undirected 6-neighborhood edges."""
        x, y, z = self.shape
        return 3 * x * y * z - x * y - y * z - x * z


def _first_bad_voxel(bad: np.ndarray) -> Coord:
    idx = int(np.flatnonzero(bad.ravel(order="F"))[0])
    return tuple(int(c) for c in np.unravel_index(idx, bad.shape, order="F"))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ProbabilityVolume:
    """Per-voxel class probabilities, ``data[x, y, z, label]``."""

    data: np.ndarray
    spacing_mm: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 4:
            raise ShapeError(f"probability volume must be 4D (x, y, z, L), got shape {data.shape}")
        if data.shape[3] < 2:
            raise ShapeError("probability volume needs at least 2 channels")
        if not np.issubdtype(data.dtype, np.floating):
            data = data.astype(np.float64)
        finite = np.isfinite(data).all(axis=3)
        if not finite.all():
            raise ValidationError(f"non-finite probability at voxel {_first_bad_voxel(~finite)}")
        in_range = ((data >= 0) & (data <= 1)).all(axis=3)
        if not in_range.all():
            raise ValidationError(f"probability outside [0, 1] at voxel {_first_bad_voxel(~in_range)}")
        sums = data.sum(axis=3, dtype=np.float64)
        bad = np.abs(sums - 1.0) > PROB_SUM_TOL
        if bad.any():
            v = _first_bad_voxel(bad)
            raise ValidationError(f"channel sum {sums[v]:.6g} at voxel {v} is not 1")
        object.__setattr__(self, "data", _readonly(data))
        object.__setattr__(self, "spacing_mm", _spacing_tuple(self.spacing_mm))

    @property
    def dims(self) -> Dims:
        return Dims.from_shape(self.data.shape, self.spacing_mm)

    @property
    def channels(self) -> int:
        return self.data.shape[3]

    def flat(self) -> np.ndarray:
        """``(L, n)`` view with voxels in linear-index order."""
        L = self.channels
        return np.moveaxis(self.data, 3, 0).reshape(L, -1, order="F")


@dataclass(frozen=True)
class IntensityVolume:
    data: np.ndarray
    spacing_mm: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3:
            raise ShapeError(f"intensity volume must be 3D, got shape {data.shape}")
        if not np.issubdtype(data.dtype, np.floating):
            data = data.astype(np.float64)
        finite = np.isfinite(data)
        if not finite.all():
            raise ValidationError(f"non-finite intensity at voxel {_first_bad_voxel(~finite)}")
        object.__setattr__(self, "data", _readonly(data))
        object.__setattr__(self, "spacing_mm", _spacing_tuple(self.spacing_mm))

    @property
    def dims(self) -> Dims:
        return Dims.from_shape(self.data.shape, self.spacing_mm)

    def flat(self) -> np.ndarray:
        return self.data.ravel(order="F")


@dataclass(frozen=True)
class LabelVolume:
    """A labeling: one label index per voxel.

    ``num_labels`` is optional; when given, every label must be below it.
    """

    data: np.ndarray
    spacing_mm: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    num_labels: Optional[int] = field(default=None)

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3:
            raise ShapeError(f"label volume must be 3D, got shape {data.shape}")
        if not np.issubdtype(data.dtype, np.integer):
            if not np.all(np.isfinite(data)) or np.any(data != np.round(data)):
                raise ValidationError("label volume must hold integer labels")
        data = data.astype(np.int64)
        neg = data < 0
        if neg.any():
            raise ValidationError(f"negative label at voxel {_first_bad_voxel(neg)}")
        if self.num_labels is not None:
            big = data >= self.num_labels
            if big.any():
                v = _first_bad_voxel(big)
                raise ValidationError(f"label {data[v]} at voxel {v} is not below {self.num_labels}")
        object.__setattr__(self, "data", _readonly(data))
        object.__setattr__(self, "spacing_mm", _spacing_tuple(self.spacing_mm))

    @property
    def dims(self) -> Dims:
        return Dims.from_shape(self.data.shape, self.spacing_mm)

    def flat(self) -> np.ndarray:
        return self.data.ravel(order="F")

    @classmethod
    def from_flat(cls, flat, dims: Dims, num_labels=None) -> "LabelVolume":
        return cls(np.asarray(flat).reshape(dims.shape, order="F"), dims.spacing_mm, num_labels)


def _as_dims(dims) -> Dims:
    return dims if isinstance(dims, Dims) else Dims.from_shape(dims)


def linear_index(coord: Sequence[int], dims) -> int:
    """Row-major index with x varying fastest."""
    dims = _as_dims(dims)
    x, y, z = (int(c) for c in coord)
    if not (0 <= x < dims.x and 0 <= y < dims.y and 0 <= z < dims.z):
        raise BoundsError(f"coordinate {(x, y, z)} outside grid {dims.shape}")
    return x + dims.x * (y + dims.y * z)


def coord_from_index(index: int, dims) -> Coord:
    dims = _as_dims(dims)
    index = int(index)
    if not 0 <= index < dims.size:
        raise BoundsError(f"index {index} outside grid of {dims.size} voxels")
    x = index % dims.x
    rest = index // dims.x
    return (x, rest % dims.y, rest // dims.y)


_OFFSETS = ((-1, 0, 0), (1, 0, 0), (0, -1, 0), (0, 1, 0), (0, 0, -1), (0, 0, 1))


def neighbors6(coord: Sequence[int], dims) -> List[Coord]:
    dims = _as_dims(dims)
    linear_index(coord, dims)  # bounds check
    x, y, z = (int(c) for c in coord)
    out = []
    for dx, dy, dz in _OFFSETS:
        c = (x + dx, y + dy, z + dz)
        if 0 <= c[0] < dims.x and 0 <= c[1] < dims.y and 0 <= c[2] < dims.z:
            out.append(c)
    return out


def grid_edges(dims) -> Tuple[np.ndarray, np.ndarray]:
    """All undirected 6-neighborhood edges as index arrays ``(i, j)``, i < j.

    Edges are sorted lexicographically by ``(i, j)``.
    """
    dims = _as_dims(dims)
    idx = np.arange(dims.size, dtype=np.int64).reshape(dims.shape, order="F")
    heads, tails = [], []
    for axis in range(3):
        lo = [slice(None)] * 3
        hi = [slice(None)] * 3
        lo[axis] = slice(0, -1)
        hi[axis] = slice(1, None)
        heads.append(idx[tuple(lo)].ravel())
        tails.append(idx[tuple(hi)].ravel())
    i = np.concatenate(heads)
    j = np.concatenate(tails)
    order = np.lexsort((j, i))
    return i[order], j[order]


def argmax_labeling(prob: ProbabilityVolume) -> LabelVolume:
    """Most probable label per voxel; ties go to the lowest label index."""
    labels = np.argmax(prob.data, axis=3)
    return LabelVolume(labels, prob.spacing_mm, prob.channels)


def _resample_axis(a: np.ndarray, axis: int, factor: int) -> np.ndarray:
    n = a.shape[axis]
    g = np.arange(n * factor, dtype=np.float64)
    src = np.clip((g + 0.5) / factor - 0.5, 0.0, n - 1)
    lo = np.floor(src).astype(np.int64)
    hi = np.minimum(lo + 1, n - 1)
    frac = src - lo
    shape = [1] * a.ndim
    shape[axis] = -1
    frac = frac.reshape(shape)
    return (1.0 - frac) * np.take(a, lo, axis=axis) + frac * np.take(a, hi, axis=axis)


def upsample_bilinear(prob: ProbabilityVolume, factor: int) -> ProbabilityVolume:
    """Bilinear upsampling of every z-slice and channel by an integer factor.

    Output sample ``g`` reads input coordinate ``(g + 0.5) / factor - 0.5``,
    clamped to the border; z is left untouched.  Voxel spacing in x and y
    shrinks by ``factor``.
    """
    if int(factor) != factor or factor < 1:
        raise ParameterError(f"upsampling factor must be a positive integer, got {factor!r}")
    factor = int(factor)
    data = np.asarray(prob.data, dtype=np.float64)
    if factor > 1:
        data = _resample_axis(_resample_axis(data, 0, factor), 1, factor)
        np.clip(data, 0.0, 1.0, out=data)
    sx, sy, sz = prob.spacing_mm
    return ProbabilityVolume(data, (sx / factor, sy / factor, sz))
