"""
From coarse class maps to full-resolution labels
================================================

A network with total stride 4 turns a 256x256 slice into a 64x64xL score
map.  Upsample it back slice by slice and take the argmax.
"""

import numpy as np

from volmrf import ProbabilityVolume, argmax_labeling, upsample_bilinear

rng = np.random.default_rng(1)
L = 4
logits = rng.normal(size=(64, 64, 3, L))
p = np.exp(logits)
p /= p.sum(axis=3, keepdims=True)
coarse = ProbabilityVolume(p, spacing_mm=(4.0, 4.0, 1.3))

fine = upsample_bilinear(coarse, 4)
print("coarse", coarse.data.shape, coarse.spacing_mm)
print("fine  ", fine.data.shape, fine.spacing_mm)

# Bilinear weights sum to one, so every pixel is still a distribution.
print("max |channel sum - 1|:", np.abs(fine.data.sum(axis=3) - 1).max())

labels = argmax_labeling(fine)
print("label counts:", np.bincount(labels.data.ravel(), minlength=L))

# Sample g of the output reads input coordinate (g + 0.5) / factor - 0.5.
row = np.zeros((2, 1, 1, 2))
row[:, 0, 0, 0] = [0.0, 1.0]
row[:, 0, 0, 1] = [1.0, 0.0]
print("[0, 1] upsampled x2:", upsample_bilinear(ProbabilityVolume(row), 2).data[:, 0, 0, 0])
