"""Minimal deterministic PNG heatmap writer for distance matrices.

Grayscale mapping: matrix minimum -> white, maximum -> black, one cell drawn
as an 8x8 pixel block. The minimum cell of each row gets a red outline so
correct within-subject matches show up along the diagonal. The PNG is encoded
with the stdlib (zlib level 9), so identical inputs give identical bytes.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

CELL = 8


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload))
    )


def write_png(path, rgb: np.ndarray) -> None:
    """Write an (H, W, 3) uint8 array as an 8-bit RGB PNG."""
    h, w, _ = rgb.shape
    raw = b"".join(b"\x00" + rgb[y].tobytes() for y in range(h))
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    with open(path, "wb") as fh:
        fh.write(b"\x89PNG\r\n\x1a\n")
        fh.write(_chunk(b"IHDR", ihdr))
        fh.write(_chunk(b"IDAT", zlib.compress(raw, 9)))
        fh.write(_chunk(b"IEND", b""))


def render_heatmap(values: np.ndarray) -> np.ndarray:
    """Render a distance matrix to RGB pixels, outlining each row's minimum."""
    v = np.asarray(values, dtype=float)
    vmin, vmax = float(v.min()), float(v.max())
    if vmax > vmin:
        gray = np.round(255.0 * (1.0 - (v - vmin) / (vmax - vmin))).astype(np.uint8)
    else:
        gray = np.full(v.shape, 255, dtype=np.uint8)
    big = np.kron(gray, np.ones((CELL, CELL), dtype=np.uint8))
    rgb = np.stack([big, big, big], axis=-1)
    for i in range(v.shape[0]):
        j = int(np.argmin(v[i]))
        y0, x0 = i * CELL, j * CELL
        red = np.array([255, 0, 0], dtype=np.uint8)
        rgb[y0, x0 : x0 + CELL] = red
        rgb[y0 + CELL - 1, x0 : x0 + CELL] = red
        rgb[y0 : y0 + CELL, x0] = red
        rgb[y0 : y0 + CELL, x0 + CELL - 1] = red
    return rgb


def save_heatmap(path, values: np.ndarray) -> None:
    write_png(path, render_heatmap(values))
