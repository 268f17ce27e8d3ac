"""Alpha-expansion minimization of the contrast-sensitive Potts energy."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .energy import EdgeWeights, EnergyParams, edge_weights, labeling_energy, unary_table
from .errors import ParameterError, ShapeError
from .maxflow import FlowGraph, max_flow
from .volume import IntensityVolume, LabelVolume, ProbabilityVolume, argmax_labeling

log = logging.getLogger(__name__)

CONVERGENCE_TOL = 1e-9
DEFAULT_MAX_SWEEPS = 10


@dataclass
class OptimizeReport:
    initial_energy: float
    final_energy: float
    sweeps_executed: int = 0
    trace: List[Tuple[int, float]] = field(default_factory=list)
    converged: bool = False
    sigma: float = float("nan")


@dataclass
class ExpansionGraph:
    """Flow graph of one expansion move plus what is needed to decode it.

    Node ``k < len(variables)`` stands for voxel ``variables[k]``; source side
    keeps the current label, sink side switches to alpha.  Any remaining nodes
    are auxiliaries for edges whose endpoints currently disagree.  The energy
    of the decoded labeling equals ``constant + cut value``.
    """

    graph: FlowGraph
    variables: np.ndarray
    constant: float


def build_expansion_graph(labels: np.ndarray, alpha: int, unaries: np.ndarray,
                          ei: np.ndarray, ej: np.ndarray, cw: np.ndarray,
                          graph: Optional[FlowGraph] = None) -> ExpansionGraph:
    n = labels.size
    var_mask = labels != alpha
    variables = np.flatnonzero(var_mask)
    node_of = np.full(n, -1, dtype=np.int64)
    node_of[variables] = np.arange(len(variables))
    constant = float(np.sum(unaries[alpha, ~var_mask]))

    if graph is None:
        graph = FlowGraph(len(variables))
    else:
        graph.reset(len(variables))
    nv = len(variables)
    if nv == 0:
        return ExpansionGraph(graph, variables, constant)

    cap_src = unaries[alpha, variables].copy()
    cap_snk = unaries[labels[variables], variables].copy()

    vi, vj = var_mask[ei], var_mask[ej]
    # one endpoint already alpha: keeping the other costs cw
    m = vi & ~vj
    np.add.at(cap_snk, node_of[ei[m]], cw[m])
    m = vj & ~vi
    np.add.at(cap_snk, node_of[ej[m]], cw[m])
    graph.add_tedges(np.arange(nv), cap_src, cap_snk)

    both = vi & vj
    same = both & (labels[ei] == labels[ej])
    a, b = node_of[ei[same]], node_of[ej[same]]
    graph.add_edges(a, b, cw[same], cw[same])

    diff = both & ~same
    k = int(np.count_nonzero(diff))
    if k:
        aux = graph.add_nodes(k) + np.arange(k)
        c = cw[diff]
        graph.add_edges(node_of[ei[diff]], aux, c, c)
        graph.add_edges(aux, node_of[ej[diff]], c, c)
        graph.add_tedges(aux, 0.0, c)
    return ExpansionGraph(graph, variables, constant)


def _expand(labels, alpha, unaries, ei, ej, cw, energy, graph=None):
    eg = build_expansion_graph(labels, alpha, unaries, ei, ej, cw, graph)
    if len(eg.variables) == 0:
        return labels, energy
    cut = max_flow(eg.graph)
    switch = ~cut.source_side[: len(eg.variables)]
    if not switch.any():
        return labels, energy
    new = labels.copy()
    new[eg.variables[switch]] = alpha
    new_energy = labeling_energy(new, unaries, ei, ej, cw)
    if new_energy >= energy:
        # tied cuts resolve toward alpha; keep the current labeling instead
        return labels, energy
    return new, new_energy


def _check_alpha(alpha, num_labels):
    if int(alpha) != alpha or not 0 <= alpha < num_labels:
        raise ParameterError(f"alpha {alpha!r} outside label range 0..{num_labels - 1}")


def expansion_move(labeling: LabelVolume, alpha: int, prob: ProbabilityVolume,
                   weights: EdgeWeights, params: EnergyParams) -> Tuple[LabelVolume, float]:
    """Best labeling reachable by letting any voxel switch to ``alpha``."""
    _check_alpha(alpha, prob.channels)
    if labeling.data.shape != prob.data.shape[:3]:
        raise ShapeError("labeling and probabilities differ in shape")
    labels = labeling.flat()
    if labels.size and labels.max() >= prob.channels:
        raise ShapeError("labeling uses more labels than the probability volume has")
    unaries = unary_table(prob, params.epsilon)
    cw = params.lam * weights.w
    energy = labeling_energy(labels, unaries, weights.i, weights.j, cw)
    new, new_energy = _expand(labels, int(alpha), unaries, weights.i, weights.j, cw, energy)
    return LabelVolume.from_flat(new, labeling.dims, prob.channels), new_energy


def optimize(prob: ProbabilityVolume, intensity: IntensityVolume, params: EnergyParams = EnergyParams(),
             max_sweeps: int = DEFAULT_MAX_SWEEPS,
             init: Optional[LabelVolume] = None) -> Tuple[LabelVolume, OptimizeReport]:
    """Minimize the energy by sweeping expansion moves over labels 0..L-1.

    Starts from ``init`` or, by default, the argmax labeling.  Stops after a
    sweep that lowers the energy by less than ``CONVERGENCE_TOL`` or after
    ``max_sweeps`` sweeps.
    """
    if prob.data.shape[:3] != intensity.data.shape:
        raise ShapeError(f"probabilities {prob.data.shape[:3]} and intensities "
                         f"{intensity.data.shape} differ in shape")
    if max_sweeps < 1:
        raise ParameterError("max_sweeps must be >= 1")
    if params.labels is not None and params.labels != prob.channels:
        raise ShapeError(f"params declare {params.labels} labels, probabilities have {prob.channels}")
    if init is None:
        init = argmax_labeling(prob)
    elif init.data.shape != intensity.data.shape:
        raise ShapeError("initial labeling differs in shape")

    L = prob.channels
    weights = edge_weights(intensity, params.sigma)
    unaries = unary_table(prob, params.epsilon)
    ei, ej, cw = weights.i, weights.j, params.lam * weights.w
    labels = np.array(init.flat())
    if labels.size and labels.max() >= L:
        raise ShapeError("initial labeling uses more labels than the probability volume has")

    energy = labeling_energy(labels, unaries, ei, ej, cw)
    report = OptimizeReport(energy, energy, sigma=weights.sigma)
    graph = FlowGraph(labels.size, arc_hint=3 * len(ei))
    for sweep in range(max_sweeps):
        start = energy
        for alpha in range(L):
            labels, energy = _expand(labels, alpha, unaries, ei, ej, cw, energy, graph)
            report.trace.append((alpha, energy))
        report.sweeps_executed = sweep + 1
        log.debug("sweep %d: energy %.9g", sweep + 1, energy)
        if start - energy < CONVERGENCE_TOL:
            report.converged = True
            break
    report.final_energy = energy
    return LabelVolume.from_flat(labels, init.dims, L), report
