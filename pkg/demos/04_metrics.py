"""
Scoring a segmentation
======================

Dice overlap plus Hausdorff and contour mean distances between boundaries,
with anisotropic voxel spacing.
"""

import numpy as np

from volmrf import LabelVolume, extract_boundary, hausdorff, score_all
from volmrf.io import scores_to_csv

spacing = (1.0, 1.0, 1.3)
gt = np.zeros((20, 20, 12), dtype=int)
gt[4:10, 4:10, 3:9] = 1
gt[12:17, 5:15, 2:10] = 2

pred = gt.copy()
pred[4:10, 4:10, 8] = 0      # lose the top slab of structure 1
pred[17, 5:15, 2:10] = 2     # structure 2 grows by one plane
pred[1, 1, 1] = 2            # one far-away false positive

P, G = LabelVolume(pred, spacing), LabelVolume(gt, spacing)
scores = score_all(P, G, [1, 2, 3])
print(scores_to_csv(scores))

# The single stray voxel dominates the Hausdorff distance of label 2.
b_pred, b_gt = extract_boundary(P, 2), extract_boundary(G, 2)
print(f"{len(b_pred)} predicted / {len(b_gt)} reference boundary voxels, "
      f"Hausdorff {hausdorff(b_pred, b_gt):.3f} mm")
