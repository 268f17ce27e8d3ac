"""Unary and contrast-sensitive Potts terms of the labeling energy.

    E(S) = sum_i -log P_i(l_i) + lambda * sum_(i,j) w_ij [l_i != l_j]
    w_ij = exp(-(I_i - I_j)^2 / (2 sigma^2))
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ParameterError, ShapeError
from .volume import IntensityVolume, LabelVolume, ProbabilityVolume, grid_edges

DEFAULT_EPSILON = 1e-12

# estimate_sigma returns this for a constant volume; every weight becomes 1.
FLAT_SIGMA = math.inf


@dataclass(frozen=True)
class EnergyParams:
    lam: float = 1.0
    sigma: Union[float, str] = "auto"
    epsilon: float = DEFAULT_EPSILON
    labels: Optional[int] = None

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ParameterError(f"lambda must be finite and >= 0, got {self.lam!r}")
        if isinstance(self.sigma, str):
            if self.sigma != "auto":
                raise ParameterError(f"sigma must be a positive number or 'auto', got {self.sigma!r}")
        elif not (self.sigma > 0):
            raise ParameterError(f"sigma must be > 0, got {self.sigma!r}")
        if not (0 < self.epsilon <= 1e-3):
            raise ParameterError(f"epsilon must lie in (0, 1e-3], got {self.epsilon!r}")
        if self.labels is not None and self.labels < 2:
            raise ParameterError("label count must be at least 2")


@dataclass(frozen=True)
class EdgeWeights:
    """Per-edge contrast weights aligned with :func:`volmrf.volume.grid_edges`."""

    i: np.ndarray
    j: np.ndarray
    w: np.ndarray
    sigma: float

    def __len__(self):
        return len(self.w)


def unary(prob: ProbabilityVolume, voxel: int, label: int, epsilon: float = DEFAULT_EPSILON) -> float:
    p = float(prob.flat()[label, voxel])
    return -math.log(max(p, epsilon))


def unary_table(prob: ProbabilityVolume, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """``(L, n)`` array of unary costs in linear voxel order."""
    p = np.asarray(prob.flat(), dtype=np.float64)
    return -np.log(np.maximum(p, epsilon))


def pairwise_weight(intensity_i: float, intensity_j: float, sigma: float) -> float:
    if not sigma > 0:
        raise ParameterError(f"sigma must be > 0, got {sigma!r}")
    d = float(intensity_i) - float(intensity_j)
    return math.exp(-(d * d) / (2.0 * sigma * sigma))


def _edge_differences(intensity: IntensityVolume):
    i, j = grid_edges(intensity.dims)
    flat = np.asarray(intensity.flat(), dtype=np.float64)
    return i, j, flat[i] - flat[j]


def estimate_sigma(intensity: IntensityVolume) -> float:
    """Root-mean-square intensity difference over all grid edges."""
    if intensity.dims.num_edges == 0:
        raise ParameterError("cannot estimate sigma on a volume without edges")
    _, _, d = _edge_differences(intensity)
    msd = float(np.mean(d * d))
    if msd == 0.0:
        return FLAT_SIGMA
    return math.sqrt(msd)


def resolve_sigma(intensity: IntensityVolume, sigma) -> float:
    if sigma == "auto" or sigma is None:
        if intensity.dims.num_edges == 0:
            return FLAT_SIGMA
        return estimate_sigma(intensity)
    return float(sigma)


def edge_weights(intensity: IntensityVolume, sigma="auto") -> EdgeWeights:
    sigma = resolve_sigma(intensity, sigma)
    if not sigma > 0:
        raise ParameterError(f"sigma must be > 0, got {sigma!r}")
    i, j, d = _edge_differences(intensity)
    w = np.exp(-(d * d) / (2.0 * sigma * sigma))
    return EdgeWeights(i, j, w, sigma)


def labeling_energy(labels: np.ndarray, unaries: np.ndarray, ei: np.ndarray,
                    ej: np.ndarray, cw: np.ndarray) -> float:
    """Energy of flat ``labels`` given a unary table and lambda-scaled weights ``cw``."""
    n = unaries.shape[1]
    data = float(np.sum(unaries[labels, np.arange(n)]))
    if len(cw) == 0:
        return data
    cut = labels[ei] != labels[ej]
    return data + float(np.sum(np.where(cut, cw, 0.0)))


def total_energy(labeling: LabelVolume, prob: ProbabilityVolume, weights: EdgeWeights,
                 params: EnergyParams) -> float:
    dims = labeling.data.shape
    if prob.data.shape[:3] != dims:
        raise ShapeError(f"labeling {dims} and probabilities {prob.data.shape[:3]} differ in shape")
    n = labeling.data.size
    if len(weights) != labeling.dims.num_edges or (len(weights) and weights.j.max() >= n):
        raise ShapeError("edge weights do not match the labeling grid")
    labels = labeling.flat()
    if labels.size and labels.max() >= prob.channels:
        raise ShapeError(f"labeling uses label {labels.max()} but only {prob.channels} channels exist")
    unaries = unary_table(prob, params.epsilon)
    return labeling_energy(labels, unaries, weights.i, weights.j, params.lam * weights.w)
