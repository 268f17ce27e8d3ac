"""Reading and writing the ``volmrf`` volume container.

Layout: one line of JSON header, a newline, then the raw little-endian
payload with x varying fastest, then y, z and finally the channel::

    {"magic": "volmrf", "version": 1, "dtype": "f32le", "dims": [64, 64, 1],
     "channels": 39, "spacing_mm": [1.0, 1.0, 1.3], "order": "xyzc"}

``f32le`` with one channel is an intensity volume, with two or more a
probability volume; ``u16le`` is a label volume.
"""
from __future__ import annotations

import json
import os
from typing import Union

import numpy as np

from .errors import FormatError, TruncationError, ValidationError
from .volume import IntensityVolume, LabelVolume, ProbabilityVolume

MAGIC = "volmrf"
VERSION = 1
ORDER = "xyzc"
_DTYPES = {"f32le": np.dtype("<f4"), "u16le": np.dtype("<u2")}

Volume = Union[ProbabilityVolume, IntensityVolume, LabelVolume]


def _header(vol: Volume) -> dict:
    if isinstance(vol, ProbabilityVolume):
        dtype, channels = "f32le", vol.channels
    elif isinstance(vol, IntensityVolume):
        dtype, channels = "f32le", 1
    elif isinstance(vol, LabelVolume):
        dtype, channels = "u16le", 1
    else:
        raise TypeError(f"cannot write {type(vol).__name__}")
    header = {
        "magic": MAGIC,
        "version": VERSION,
        "dtype": dtype,
        "dims": list(vol.data.shape[:3]),
        "channels": channels,
        "spacing_mm": list(vol.spacing_mm),
        "order": ORDER,
    }
    if isinstance(vol, LabelVolume) and vol.num_labels is not None:
        header["labels"] = vol.num_labels
    return header


def write_volume(vol: Volume, path) -> None:
    header = _header(vol)
    data = vol.data
    if isinstance(vol, LabelVolume) and data.size and data.max() > np.iinfo(np.uint16).max:
        raise ValidationError("labels above 65535 do not fit the u16le format")
    payload = np.asarray(data).astype(_DTYPES[header["dtype"]]).ravel(order="F").tobytes()
    line = json.dumps(header, separators=(", ", ": ")).encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(line + b"\n" + payload)
    except OSError as exc:
        raise OSError(f"cannot write volume to {os.fspath(path)}: {exc.strerror}") from exc


def _parse_header(raw: bytes, path) -> dict:
    try:
        header = json.loads(raw.decode("ascii"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: header is not a JSON object") from exc
    if not isinstance(header, dict) or header.get("magic") != MAGIC:
        raise FormatError(f"{path}: bad magic, not a volmrf file")
    if header.get("version") != VERSION:
        raise FormatError(f"{path}: unsupported version {header.get('version')!r}")
    if header.get("dtype") not in _DTYPES:
        raise FormatError(f"{path}: unknown dtype {header.get('dtype')!r}")
    if header.get("order", ORDER) != ORDER:
        raise FormatError(f"{path}: unsupported data order {header.get('order')!r}")
    dims = header.get("dims")
    channels = header.get("channels")
    if (not isinstance(dims, list) or len(dims) != 3
            or not all(isinstance(d, int) and d >= 1 for d in dims)):
        raise FormatError(f"{path}: dims must be three positive integers")
    if not isinstance(channels, int) or channels < 1:
        raise FormatError(f"{path}: channels must be a positive integer")
    if header["dtype"] == "u16le" and channels != 1:
        raise FormatError(f"{path}: label volumes have exactly one channel")
    spacing = header.get("spacing_mm", [1.0, 1.0, 1.0])
    if not isinstance(spacing, list) or len(spacing) != 3:
        raise FormatError(f"{path}: spacing_mm must hold three numbers")
    return header


def read_volume(path) -> Volume:
    with open(path, "rb") as fh:
        blob = fh.read()
    nl = blob.find(b"\n")
    if nl < 0:
        raise FormatError(f"{path}: missing header line")
    header = _parse_header(blob[:nl], path)
    dtype = _DTYPES[header["dtype"]]
    x, y, z = header["dims"]
    channels = header["channels"]
    expected = x * y * z * channels * dtype.itemsize
    payload = blob[nl + 1:]
    if len(payload) < expected:
        raise TruncationError(f"{path}: payload has {len(payload)} bytes, needs {expected}")
    if len(payload) > expected:
        raise FormatError(f"{path}: payload has {len(payload) - expected} trailing bytes")
    flat = np.frombuffer(payload, dtype=dtype)
    spacing = header["spacing_mm"]
    if header["dtype"] == "u16le":
        data = flat.reshape((x, y, z), order="F")
        return LabelVolume(data, spacing, header.get("labels"))
    data = flat.astype(np.float32).reshape((x, y, z, channels), order="F")
    if channels == 1:
        return IntensityVolume(data[..., 0], spacing)
    return ProbabilityVolume(data, spacing)


CSV_HEADER = "label,dice,hausdorff_mm,contour_mean_mm"


def _fmt(v) -> str:
    return "NA" if v is None else f"{v:.6f}"


def scores_to_csv(scores) -> str:
    """Render :class:`volmrf.metrics.StructureScore` rows; undefined distances become NA."""
    lines = [CSV_HEADER]
    for s in scores:
        lines.append(f"{s.label},{_fmt(s.dice)},{_fmt(s.hausdorff_mm)},{_fmt(s.contour_mean_mm)}")
    return "\n".join(lines) + "\n"
