"""Synthetic ground truth, noisy priors and intensities for desk testing.

All randomness comes from ``numpy.random.PCG64`` seeded with the 64-bit
``seed``: first the prior perturbation is drawn, then the intensity noise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ParameterError
from .volume import Dims, IntensityVolume, LabelVolume, ProbabilityVolume


@dataclass(frozen=True)
class PhantomSpec:
    """Spheres of labels 1..k over background 0.

    ``eta`` mixes the one-hot prior with i.i.d. unit-exponential channel
    noise (an unnormalized Dirichlet draw) before renormalizing, so larger
    values flip more argmax labels.  Later spheres overwrite earlier ones.
    """

    dims: Tuple[int, int, int] = (32, 32, 32)
    centers: Sequence[Tuple[float, float, float]] = ((10.0, 16.0, 16.0), (22.0, 16.0, 16.0))
    radii: Sequence[float] = (5.0, 5.0)
    eta: float = 0.4
    contrast: float = 100.0
    noise: float = 10.0
    seed: int = 0
    spacing_mm: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    @property
    def num_labels(self) -> int:
        return len(self.centers) + 1


def _validate(spec: PhantomSpec) -> Dims:
    try:
        dims = Dims(*spec.dims, spacing_mm=spec.spacing_mm)
    except TypeError as exc:
        raise ParameterError(f"dims must be three integers, got {spec.dims!r}") from exc
    if len(spec.centers) != len(spec.radii):
        raise ParameterError("need exactly one radius per center")
    if not 0 <= spec.eta < 1:
        raise ParameterError(f"eta must lie in [0, 1), got {spec.eta!r}")
    if spec.noise < 0:
        raise ParameterError("noise amplitude must be >= 0")
    if not 0 <= spec.seed < 2**64:
        raise ParameterError("seed must be a 64-bit unsigned integer")
    for c, r in zip(spec.centers, spec.radii):
        if r <= 0:
            raise ParameterError(f"radius must be positive, got {r!r}")
        for ci, n in zip(c, dims.shape):
            if ci - r < 0 or ci + r > n - 1:
                raise ParameterError(f"sphere at {tuple(c)} with radius {r} leaves the {dims.shape} grid")
    return dims


def make_phantom(spec: PhantomSpec) -> Tuple[LabelVolume, ProbabilityVolume, IntensityVolume]:
    dims = _validate(spec)
    L = spec.num_labels
    gx, gy, gz = np.meshgrid(*(np.arange(n) for n in dims.shape), indexing="ij")
    gt = np.zeros(dims.shape, dtype=np.int64)
    for k, (c, r) in enumerate(zip(spec.centers, spec.radii), start=1):
        inside = (gx - c[0]) ** 2 + (gy - c[1]) ** 2 + (gz - c[2]) ** 2 <= r * r
        gt[inside] = k

    rng = np.random.Generator(np.random.PCG64(spec.seed))
    perturb = rng.exponential(1.0, size=dims.shape + (L,))
    onehot = np.eye(L)[gt]
    mixed = (1.0 - spec.eta) * onehot + spec.eta * perturb
    prob = (mixed / mixed.sum(axis=3, keepdims=True)).astype(np.float32)

    intensity = gt * spec.contrast + spec.noise * rng.standard_normal(dims.shape)
    sp = dims.spacing_mm
    return (LabelVolume(gt, sp, L), ProbabilityVolume(prob, sp),
            IntensityVolume(intensity.astype(np.float32), sp))


def two_sphere_spec(dims=(32, 32, 32), **kw) -> PhantomSpec:
    """Two equal spheres side by side along x, sized to fit ``dims``."""
    X, Y, Z = (int(d) for d in dims)
    r = min(X // 6, Y // 2 - 1, Z // 2 - 1)
    if r < 1:
        raise ParameterError(f"grid {tuple(dims)} is too small for the two-sphere phantom")
    centers = ((X // 2 - r - 1, Y // 2, Z // 2), (X // 2 + r + 1, Y // 2, Z // 2))
    return PhantomSpec(dims=(X, Y, Z), centers=centers, radii=(r, r), **kw)
