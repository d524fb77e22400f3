"""File formats: run configuration, signal ingestion, coefficient tensors, images.

Coefficient binary layout (little endian)::

    b"QWOL"  uint32 version  uint32 nu1 nu2 nw1 nw2
    float64 tgrid[6] ugrid[6] A1[6] A2[6] dw[2] w1[nw1] w2[nw2]
    float64 data[nu1, nu2, nw1, nw2, 4]      # (w, x, y, z), row major
"""
from __future__ import annotations

import csv
import dataclasses
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np
from PIL import Image

from .errors import CorruptTensor, DimensionMismatch, MalformedInput
from .grid import GridSpec, QField
from .kernel import OlctParams
from .qolct import FreqGrid
from .qwolct import CoeffTensor

MAGIC = b"QWOL"
VERSION = 1
_HEAD = struct.Struct("<4sIIIII")


# -- configuration ---------------------------------------------------------


@dataclass
class RunConfig:
    """Flat ``key = value`` run description.

    Parameter sets are written as six comma-separated numbers
    ``a,b,c,d,p,q``.
    """

    n1: int = 32
    n2: int = 32
    dt1: float = 0.5
    dt2: float = 0.5
    A1: tuple = (0.0, 1.0, -1.0, 0.0, 0.0, 0.0)
    A2: tuple = (0.0, 1.0, -1.0, 0.0, 0.0, 0.0)
    window: str = "gaussian"
    window_sigma: float = 1.5
    window_a: float = 2.0
    window_file: str = ""
    u_stride: int = 1
    seed: int = 0
    input_mode: str = "csv"
    reference: str = ""
    spectrograms: str = "none"
    extras: dict = field(default_factory=dict)

    @property
    def grid(self) -> GridSpec:
        return GridSpec.symmetric(self.n1, self.dt1, self.n2, self.dt2)

    @property
    def params(self) -> tuple[OlctParams, OlctParams]:
        return OlctParams(*self.A1), OlctParams(*self.A2)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            if f.name == "extras":
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(repr(float(x)) for x in v)
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name} = {v}")
        lines += [f"{k} = {v}" for k, v in self.extras.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        types = {f.name: f for f in dataclasses.fields(cls)}
        kw, extras = {}, {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise MalformedInput(f"config line {lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in types or key == "extras":
                extras[key] = val
                continue
            default = types[key].default
            try:
                if isinstance(default, tuple):
                    parts = tuple(float(x) for x in val.split(","))
                    if len(parts) != 6:
                        raise ValueError("need six numbers")
                    kw[key] = parts
                elif isinstance(default, bool):
                    kw[key] = val.lower() in ("1", "true", "yes")
                elif isinstance(default, int):
                    kw[key] = int(val)
                elif isinstance(default, float):
                    kw[key] = float(val)
                else:
                    kw[key] = val
            except ValueError as exc:
                raise MalformedInput(f"config line {lineno}: bad value for {key}: {exc}") from exc
        return cls(**kw, extras=extras)

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_text(Path(path).read_text())

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


# -- signal ingestion ------------------------------------------------------


def read_csv_field(path, grid: GridSpec) -> QField:
    """Rows ``m1, m2, w, x, y, z``; a non-numeric first row is taken as a header."""
    samples = np.zeros(grid.shape + (4,))
    seen = np.zeros(grid.shape, dtype=bool)
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 6:
                raise MalformedInput(f"{path}:{lineno}: expected 6 columns, got {len(row)}")
            try:
                m1, m2 = int(row[0]), int(row[1])
                vals = [float(c) for c in row[2:]]
            except ValueError:
                if lineno == 1:
                    continue
                raise MalformedInput(f"{path}:{lineno}: non-numeric entry") from None
            if not (0 <= m1 < grid.n1 and 0 <= m2 < grid.n2):
                raise DimensionMismatch(f"{path}:{lineno}: index ({m1}, {m2}) outside {grid.shape}")
            samples[m1, m2] = vals
            seen[m1, m2] = True
    if not seen.all():
        raise DimensionMismatch(f"{path}: {int((~seen).sum())} grid samples missing")
    return QField(grid, samples)


def write_csv_field(f: QField, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m1", "m2", "w", "x", "y", "z"])
        for m1 in range(f.grid.n1):
            for m2 in range(f.grid.n2):
                w.writerow([m1, m2, *(repr(float(v)) for v in f.samples[m1, m2])])


def read_png_field(path, grid: GridSpec) -> QField:
    """RGB image to a pure quaternion field, channels scaled to [0, 1]."""
    try:
        img = Image.open(path).convert("RGB")
    except OSError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc
    rgb = np.asarray(img, dtype=float) / 255.0
    if rgb.shape[:2] != grid.shape:
        raise DimensionMismatch(f"{path}: image {rgb.shape[:2]} does not match grid {grid.shape}")
    samples = np.zeros(grid.shape + (4,))
    samples[..., 1:] = rgb
    return QField(grid, samples)


def ingest(path, mode: str, grid: GridSpec) -> QField:
    if mode == "csv":
        return read_csv_field(path, grid)
    if mode == "png":
        return read_png_field(path, grid)
    raise MalformedInput(f"unknown input mode {mode!r}")


# -- coefficient tensors ---------------------------------------------------


def _grid_block(g: GridSpec) -> list[float]:
    return [g.n1, g.n2, g.dt1, g.dt2, g.origin1, g.origin2]


def _grid_from(block) -> GridSpec:
    return GridSpec(int(block[0]), int(block[1]), *map(float, block[2:]))


def write_tensor_header(fh, tgrid: GridSpec, ugrid: GridSpec, wgrid: FreqGrid, A1: OlctParams, A2: OlctParams):
    fh.write(_HEAD.pack(MAGIC, VERSION, ugrid.n1, ugrid.n2, len(wgrid.w1), len(wgrid.w2)))
    meta = _grid_block(tgrid) + _grid_block(ugrid) + list(A1.as_tuple()) + list(A2.as_tuple())
    meta += [wgrid.dw1, wgrid.dw2]
    fh.write(np.asarray(meta, dtype="<f8").tobytes())
    fh.write(np.asarray(wgrid.w1, dtype="<f8").tobytes())
    fh.write(np.asarray(wgrid.w2, dtype="<f8").tobytes())


def write_tensor(path, C: CoeffTensor) -> None:
    write_tensor_stream(path, C.tgrid, C.ugrid, C.wgrid, C.A1, C.A2, [C.samples])


def write_tensor_stream(path, tgrid, ugrid, wgrid, A1, A2, blocks: Iterable[np.ndarray]) -> None:
    """Write the header, then coefficient blocks in u1-row order."""
    rows = 0
    with open(path, "wb") as fh:
        write_tensor_header(fh, tgrid, ugrid, wgrid, A1, A2)
        for b in blocks:
            fh.write(np.ascontiguousarray(b, dtype="<f8").tobytes())
            rows += b.shape[0]
    if rows != ugrid.n1:
        raise CorruptTensor(f"wrote {rows} u rows, expected {ugrid.n1}")


def read_tensor(path) -> CoeffTensor:
    raw = Path(path).read_bytes()
    if len(raw) < _HEAD.size:
        raise CorruptTensor("file too short for header")
    magic, version, nu1, nu2, nw1, nw2 = _HEAD.unpack_from(raw)
    if magic != MAGIC:
        raise CorruptTensor(f"bad magic {magic!r}")
    if version != VERSION:
        raise CorruptTensor(f"unsupported version {version}")
    nmeta = 6 + 6 + 6 + 6 + 2 + nw1 + nw2
    ndata = nu1 * nu2 * nw1 * nw2 * 4
    expect = _HEAD.size + 8 * (nmeta + ndata)
    if len(raw) != expect:
        raise CorruptTensor(f"size {len(raw)} bytes, expected {expect}")
    vals = np.frombuffer(raw, dtype="<f8", offset=_HEAD.size)
    meta, data = vals[:nmeta], vals[nmeta:]
    try:
        tgrid, ugrid = _grid_from(meta[0:6]), _grid_from(meta[6:12])
        A1, A2 = OlctParams(*meta[12:18]), OlctParams(*meta[18:24])
    except ValueError as exc:
        raise CorruptTensor(f"invalid header block: {exc}") from exc
    if (ugrid.n1, ugrid.n2) != (nu1, nu2):
        raise CorruptTensor("u grid does not match the declared dimensions")
    w1 = np.array(meta[26 : 26 + nw1])
    w2 = np.array(meta[26 + nw1 :])
    wgrid = FreqGrid(w1, w2, float(meta[24]), float(meta[25]))
    aligned = FreqGrid.aligned_for(tgrid, A1, A2)
    if len(w1) == len(aligned.w1) and len(w2) == len(aligned.w2) and aligned.matches(tgrid, A1, A2):
        if np.allclose(w1, aligned.w1, rtol=0, atol=1e-12) and np.allclose(w2, aligned.w2, rtol=0, atol=1e-12):
            wgrid = aligned
    samples = data.reshape(nu1, nu2, nw1, nw2, 4).copy()
    return CoeffTensor(tgrid, ugrid, wgrid, samples, A1, A2)


# -- images ----------------------------------------------------------------


def write_magnitude_png(mag: np.ndarray, path, meta: dict | None = None) -> float:
    """Grayscale PNG scaled by the image maximum, plus a JSON sidecar recording it."""
    mag = np.asarray(mag, dtype=float)
    peak = float(mag.max(initial=0.0))
    scaled = np.zeros_like(mag) if peak == 0 else mag / peak * 255.0
    Image.fromarray(np.rint(scaled).astype(np.uint8), mode="L").save(path)
    side = {"max": peak, "shape": list(mag.shape), **(meta or {})}
    Path(path).with_suffix(".json").write_text(json.dumps(side, indent=2, sort_keys=True))
    return peak


def write_rgb_png(f: QField, path) -> None:
    """Vector part of a field as an 8-bit RGB image, clipped to [0, 1]."""
    rgb = np.clip(f.samples[..., 1:], 0.0, 1.0)
    Image.fromarray(np.rint(rgb * 255.0).astype(np.uint8), mode="RGB").save(path)
