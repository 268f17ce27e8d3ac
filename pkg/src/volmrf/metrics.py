"""Overlap and surface-distance scores for label volumes.

Distances are measured between voxel centres scaled by the voxel spacing.
A distance involving an empty boundary is undefined and returned as None.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import ShapeError
from .volume import LabelVolume, _spacing_tuple


@dataclass(frozen=True)
class BoundarySet:
    coords: np.ndarray  # (k, 3) integer voxel coordinates
    spacing_mm: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __len__(self):
        return len(self.coords)

    def points_mm(self) -> np.ndarray:
        return self.coords * np.asarray(self.spacing_mm)


@dataclass(frozen=True)
class StructureScore:
    label: int
    dice: float
    hausdorff_mm: Optional[float]
    contour_mean_mm: Optional[float]


def _same_shape(a: LabelVolume, b: LabelVolume):
    if a.data.shape != b.data.shape:
        raise ShapeError(f"volumes differ in shape: {a.data.shape} vs {b.data.shape}")


def dice(pred: LabelVolume, gt: LabelVolume, label: int) -> float:
    _same_shape(pred, gt)
    a = pred.data == label
    b = gt.data == label
    total = int(a.sum()) + int(b.sum())
    if total == 0:
        return 1.0
    return 2.0 * int(np.logical_and(a, b).sum()) / total


def extract_boundary(vol: LabelVolume, label: int, spacing=None) -> BoundarySet:
    """Voxels of ``label`` touching another label or the volume border."""
    spacing = vol.spacing_mm if spacing is None else _spacing_tuple(spacing)
    mask = vol.data == label
    padded = np.pad(mask, 1, constant_values=False)
    interior = mask.copy()
    for axis in range(3):
        for shift in (-1, 1):
            interior &= np.roll(padded, shift, axis=axis)[1:-1, 1:-1, 1:-1]
    coords = np.argwhere(mask & ~interior)
    return BoundarySet(coords, spacing)


def _directed(a: BoundarySet, b: BoundarySet) -> np.ndarray:
    """Distance from every point of ``a`` to its nearest point of ``b``."""
    d, _ = cKDTree(b.points_mm()).query(a.points_mm())
    return d


def _check_spacing(a: BoundarySet, b: BoundarySet):
    if tuple(a.spacing_mm) != tuple(b.spacing_mm):
        raise ShapeError("boundary sets use different voxel spacing")


def hausdorff(a: BoundarySet, b: BoundarySet) -> Optional[float]:
    _check_spacing(a, b)
    if len(a) == 0 or len(b) == 0:
        return None
    return float(max(_directed(a, b).max(), _directed(b, a).max()))


def contour_mean_distance(a: BoundarySet, b: BoundarySet) -> Optional[float]:
    """Average symmetric surface distance."""
    _check_spacing(a, b)
    if len(a) == 0 or len(b) == 0:
        return None
    return float((_directed(a, b).sum() + _directed(b, a).sum()) / (len(a) + len(b)))


def score_all(pred: LabelVolume, gt: LabelVolume, labels: Sequence[int], spacing=None) -> List[StructureScore]:
    _same_shape(pred, gt)
    spacing = gt.spacing_mm if spacing is None else spacing
    scores = []
    for label in labels:
        bp = extract_boundary(pred, label, spacing)
        bg = extract_boundary(gt, label, spacing)
        scores.append(StructureScore(int(label), dice(pred, gt, label),
                                     hausdorff(bp, bg), contour_mean_distance(bp, bg)))
    return scores
