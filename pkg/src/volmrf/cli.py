"""Command line front end: ``volmrf {refine,argmax,upsample,evaluate,phantom}``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .energy import DEFAULT_EPSILON, EnergyParams
from .errors import FormatError, ParameterError, ShapeError, ValidationError
from .expansion import DEFAULT_MAX_SWEEPS, optimize
from .io import read_volume, scores_to_csv, write_volume
from .metrics import score_all
from .phantom import make_phantom, two_sphere_spec
from .volume import IntensityVolume, LabelVolume, ProbabilityVolume, argmax_labeling, upsample_bilinear

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_SHAPE = 4


def _floats(text, n=None):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _ints(text):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _sigma(text):
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"sigma must be a number or 'auto', got {text!r}")


def _load(path, kind):
    vol = read_volume(path)
    if not isinstance(vol, kind):
        raise FormatError(f"{path}: expected a {kind.__name__}, found {type(vol).__name__}")
    return vol


def cmd_refine(args) -> int:
    prob = _load(args.prob, ProbabilityVolume)
    intensity = _load(args.intensity, IntensityVolume)
    params = EnergyParams(args.lam, args.sigma, args.epsilon)
    t0 = time.perf_counter()
    labels, report = optimize(prob, intensity, params, args.max_sweeps)
    elapsed = time.perf_counter() - t0
    write_volume(labels, args.out)
    summary = {
        "initial_energy": report.initial_energy,
        "final_energy": report.final_energy,
        "sweeps_executed": report.sweeps_executed,
        "converged": report.converged,
        "sigma": report.sigma if np.isfinite(report.sigma) else "flat",
        "lambda": args.lam,
        "epsilon": args.epsilon,
        "trace": [{"alpha": a, "energy": e} for a, e in report.trace],
        "wall_time_s": elapsed,
    }
    report_path = args.report or os.fspath(args.out) + ".report.json"
    with open(report_path, "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def cmd_argmax(args) -> int:
    write_volume(argmax_labeling(_load(args.prob, ProbabilityVolume)), args.out)
    return EXIT_OK


def cmd_upsample(args) -> int:
    write_volume(upsample_bilinear(_load(args.prob, ProbabilityVolume), args.factor), args.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    pred = _load(args.pred, LabelVolume)
    gt = _load(args.gt, LabelVolume)
    labels = args.labels
    if labels is None:
        present = np.union1d(np.unique(pred.data), np.unique(gt.data))
        labels = [int(v) for v in present if v != 0]
    csv = scores_to_csv(score_all(pred, gt, labels, args.spacing))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    return EXIT_OK


def cmd_phantom(args) -> int:
    if len(args.dims) != 3:
        raise ParameterError("--dims needs three integers")
    spec = two_sphere_spec(args.dims, eta=args.eta, seed=args.seed, spacing_mm=tuple(args.spacing))
    gt, prob, intensity = make_phantom(spec)
    os.makedirs(args.out, exist_ok=True)
    write_volume(gt, os.path.join(args.out, "gt.vol"))
    write_volume(prob, os.path.join(args.out, "prob.vol"))
    write_volume(intensity, os.path.join(args.out, "intensity.vol"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="volmrf", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("refine", help="alpha-expansion refinement of a probability volume")
    p.add_argument("--prob", required=True)
    p.add_argument("--intensity", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="run report path (default: OUT.report.json)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--sigma", type=_sigma, default="auto")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--max-sweeps", type=int, default=DEFAULT_MAX_SWEEPS)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("argmax", help="most probable label per voxel")
    p.add_argument("--prob", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_argmax)

    p = sub.add_parser("upsample", help="slice-wise bilinear upsampling")
    p.add_argument("--prob", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--factor", type=int, default=4)
    p.set_defaults(func=cmd_upsample)

    p = sub.add_parser("evaluate", help="Dice / Hausdorff / contour mean distance CSV")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--labels", type=_ints, help="comma list (default: all non-zero labels present)")
    p.add_argument("--spacing", type=lambda s: _floats(s, 3), help="default: spacing from the gt header")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("phantom", help="write gt.vol, prob.vol and intensity.vol for a synthetic volume")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=_ints, default=[32, 32, 32])
    p.add_argument("--eta", type=float, default=0.4)
    p.add_argument("--spacing", type=lambda s: _floats(s, 3), default=[1.0, 1.0, 1.0])
    p.set_defaults(func=cmd_phantom)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ShapeError as exc:
        print(f"volmrf: shape error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except (FormatError, ValidationError) as exc:
        kind = "format" if isinstance(exc, FormatError) else "validation"
        print(f"volmrf: {kind} error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ParameterError as exc:
        print(f"volmrf: parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"volmrf: I/O error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
