"""
Refining a noisy probability volume
===================================

Build a synthetic two-structure volume whose per-voxel class probabilities
are heavily corrupted, then clean it up with alpha-expansion.
"""

import numpy as np

from volmrf import EnergyParams, argmax_labeling, dice, make_phantom, optimize
from volmrf.phantom import two_sphere_spec

# Two spheres (labels 1 and 2) over background 0.  eta controls how much
# random mass is mixed into the one-hot prior; 0.4 flips roughly a fifth
# of the argmax labels.
gt, prob, intensity = make_phantom(two_sphere_spec((32, 32, 32), eta=0.4, seed=0))
print("prior shape (x, y, z, L):", prob.data.shape)

# The unrefined answer: most probable label per voxel.
raw = argmax_labeling(prob)

# Minimize unary (-log p) plus contrast-sensitive Potts smoothing.
# sigma="auto" uses the RMS intensity difference across grid edges.
refined, report = optimize(prob, intensity, EnergyParams(lam=1.0, sigma="auto"))

print(f"sigma = {report.sigma:.3f}")
print(f"energy {report.initial_energy:.1f} -> {report.final_energy:.1f} "
      f"in {report.sweeps_executed} sweeps (converged: {report.converged})")
for label in (1, 2):
    print(f"label {label}: Dice argmax {dice(raw, gt, label):.4f}, refined {dice(refined, gt, label):.4f}")

# Every expansion move is non-increasing in energy.
energies = [report.initial_energy] + [e for _, e in report.trace]
assert np.all(np.diff(energies) <= 1e-9)

# Larger lambda smooths harder; lambda = 0 is exactly the argmax labeling.
for lam in (0.0, 0.1, 1.0, 5.0):
    lab, rep = optimize(prob, intensity, EnergyParams(lam=lam))
    print(f"lambda {lam:>4}: mean Dice {np.mean([dice(lab, gt, l) for l in (1, 2)]):.4f}")
