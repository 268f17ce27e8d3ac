"""MRF refinement of per-voxel class probabilities with alpha-expansion graph cuts."""

__version__ = "0.1.0"

from .energy import EdgeWeights, EnergyParams, edge_weights, estimate_sigma, pairwise_weight, total_energy, unary
from .errors import (BoundsError, FormatError, ParameterError, ShapeError, TruncationError,
                     ValidationError, VolMRFError)
from .expansion import OptimizeReport, expansion_move, optimize
from .io import read_volume, write_volume
from .maxflow import CutResult, FlowGraph, max_flow
from .metrics import (BoundarySet, StructureScore, contour_mean_distance, dice, extract_boundary,
                      hausdorff, score_all)
from .phantom import PhantomSpec, make_phantom
from .volume import (Dims, IntensityVolume, LabelVolume, ProbabilityVolume, argmax_labeling,
                     linear_index, neighbors6, upsample_bilinear)
