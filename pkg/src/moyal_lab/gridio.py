"""Flat binary serialization with a JSON sidecar for grid-valued data.

Layout: row-major complex samples as interleaved little-endian float64
pairs (re, im) in ``<path>.bin``, and a sidecar ``<path>.json`` holding
{"kind", "shape", "N", "L", "hbar"}.  Grid symbols, operator matrices and
wavefunctions all share the format; ``kind`` tells them apart.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

_KINDS = ("grid", "operator", "wave")


def _write(path: Path, kind: str, arr: np.ndarray, n: int, box: float, hbar: float) -> None:
    data = np.ascontiguousarray(arr, dtype=complex)
    flat = np.empty(data.size * 2, dtype="<f8")
    flat[0::2] = data.real.ravel()
    flat[1::2] = data.imag.ravel()
    path = Path(path)
    path.with_suffix(".bin").write_bytes(flat.tobytes())
    sidecar = {"kind": kind, "shape": list(data.shape), "N": n, "L": box, "hbar": hbar}
    path.with_suffix(".json").write_text(json.dumps(sidecar, sort_keys=True) + "\n")


def _read(path: Path):
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    if meta["kind"] not in _KINDS:
        raise ValueError(f"unknown payload kind {meta['kind']!r}")
    raw = np.frombuffer(path.with_suffix(".bin").read_bytes(), dtype="<f8")
    arr = (raw[0::2] + 1j * raw[1::2]).reshape(meta["shape"])
    return meta, arr


def save_grid_symbol(g, path) -> None:
    _write(Path(path), "grid", g.samples, g.spec.n, g.spec.box, g.spec.hbar)


def load_grid_symbol(path):
    from .grid import GridSpec, GridSymbol

    meta, arr = _read(Path(path))
    if meta["kind"] != "grid":
        raise ValueError(f"expected a grid payload, found {meta['kind']!r}")
    return GridSymbol(GridSpec(meta["N"], meta["L"], meta["hbar"]), arr)


def save_operator(m, path) -> None:
    _write(Path(path), "operator", m.entries, m.grid.n, m.grid.box, m.grid.hbar)


def load_operator(path):
    from .weylop import OperatorMatrix, XGrid

    meta, arr = _read(Path(path))
    if meta["kind"] != "operator":
        raise ValueError(f"expected an operator payload, found {meta['kind']!r}")
    return OperatorMatrix(XGrid(meta["N"], meta["L"], meta["hbar"]), arr)


def save_wave(w, path) -> None:
    _write(Path(path), "wave", w.values, w.grid.n, w.grid.box, w.grid.hbar)


def load_wave(path):
    from .weylop import WaveVector, XGrid

    meta, arr = _read(Path(path))
    if meta["kind"] != "wave":
        raise ValueError(f"expected a wave payload, found {meta['kind']!r}")
    return WaveVector(XGrid(meta["N"], meta["L"], meta["hbar"]), arr)
