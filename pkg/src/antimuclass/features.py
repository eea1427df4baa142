"""Per-pixel feature vectors and their binary encoding.

A pixel is described by 3 values per band: the pixel intensity itself plus
the mean and (population) standard deviation of a small square neighborhood.
Feature vectors live in [0, 1]^(3*B) and can be quantized to fixed-length
bit strings for the clonal-selection engine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Raster:
    """Multiband image with intensities normalized to [0, 1].

    ``data`` has shape (bands, height, width); all bands share the same grid.
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 3:
            raise ValueError(f"raster data must be (bands, height, width), got shape {data.shape}")
        if data.shape[0] < 1:
            raise ValueError("raster needs at least one band")
        if data.size and (data.min() < 0.0 or data.max() > 1.0):
            raise ValueError("raster intensities must lie in [0, 1]")
        object.__setattr__(self, "data", data)

    @property
    def band_count(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def feature_length(self) -> int:
        return 3 * self.band_count


def _window_offsets(window: int) -> range:
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be an odd integer >= 1, got {window}")
    return range(-(window // 2), window // 2 + 1)


def extract_features(raster: Raster, x: int, y: int, window: int = 3) -> np.ndarray:
    """Feature vector [center, mean, std] per band at pixel (x, y).

    The neighborhood is the window x window square centered on (x, y),
    clipped at raster borders; only in-bounds pixels contribute.
    """
    offsets = _window_offsets(window)
    if not (0 <= x < raster.width and 0 <= y < raster.height):
        raise IndexError(
            f"pixel ({x}, {y}) outside raster {raster.width}x{raster.height}"
        )
    out = np.empty(3 * raster.band_count, dtype=np.float64)
    for b in range(raster.band_count):
        band = raster.data[b]
        # Accumulation order must match feature_grid so both paths agree bitwise.
        s = 0.0
        c = 0.0
        for dy in offsets:
            for dx in offsets:
                yy, xx = y + dy, x + dx
                if 0 <= yy < raster.height and 0 <= xx < raster.width:
                    s = s + band[yy, xx]
                    c = c + 1.0
        mean = s / c
        ss = 0.0
        for dy in offsets:
            for dx in offsets:
                yy, xx = y + dy, x + dx
                if 0 <= yy < raster.height and 0 <= xx < raster.width:
                    d = band[yy, xx] - mean
                    ss = ss + d * d
        out[3 * b] = band[y, x]
        out[3 * b + 1] = mean
        out[3 * b + 2] = np.sqrt(ss / c)
    return out


def feature_grid(raster: Raster, window: int = 3) -> np.ndarray:
    """Feature vectors for every pixel, shape (height, width, 3*bands).

    Bitwise identical to calling :func:`extract_features` per pixel; the two
    share the same accumulation order.
    """
    offsets = list(_window_offsets(window))
    h, w = raster.height, raster.width
    out = np.empty((h, w, 3 * raster.band_count), dtype=np.float64)
    for b in range(raster.band_count):
        band = raster.data[b]
        s = np.zeros((h, w))
        c = np.zeros((h, w))
        shifted = []
        for dy in offsets:
            for dx in offsets:
                v = np.zeros((h, w))
                ys = slice(max(0, -dy), min(h, h - dy))
                xs = slice(max(0, -dx), min(w, w - dx))
                v[ys, xs] = band[
                    slice(max(0, dy), min(h, h + dy)), slice(max(0, dx), min(w, w + dx))
                ]
                inb = np.zeros((h, w), dtype=bool)
                inb[ys, xs] = True
                shifted.append((v, inb))
                s = s + v
                c = c + inb
        mean = s / c
        ss = np.zeros((h, w))
        for v, inb in shifted:
            d = v - mean
            ss = ss + np.where(inb, d * d, 0.0)
        out[:, :, 3 * b] = band
        out[:, :, 3 * b + 1] = mean
        out[:, :, 3 * b + 2] = np.sqrt(ss / c)
    return out


def encode(fv: np.ndarray, quant_bits: int = 8) -> np.ndarray:
    """Quantize each component to ``quant_bits`` bits, MSB first, concatenated."""
    fv = np.asarray(fv, dtype=np.float64)
    if quant_bits < 1:
        raise ValueError(f"quant_bits must be >= 1, got {quant_bits}")
    if fv.size and (fv.min() < 0.0 or fv.max() > 1.0):
        raise ValueError("feature components must lie in [0, 1] to be encoded")
    levels = (1 << quant_bits) - 1
    codes = np.floor(fv * levels).astype(np.int64)
    bits = np.empty(fv.size * quant_bits, dtype=np.uint8)
    for i, g in enumerate(codes):
        for k in range(quant_bits):
            bits[i * quant_bits + k] = (g >> (quant_bits - 1 - k)) & 1
    return bits


def decode(bits: np.ndarray, components: int, quant_bits: int = 8) -> np.ndarray:
    """Inverse of :func:`encode` up to quantization: group g maps to g/(2^Q - 1)."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size != components * quant_bits:
        raise ValueError(
            f"bit string length {bits.size} != {components} components x {quant_bits} bits"
        )
    levels = (1 << quant_bits) - 1
    out = np.empty(components, dtype=np.float64)
    weights = 1 << np.arange(quant_bits - 1, -1, -1, dtype=np.int64)
    for i in range(components):
        g = int(np.dot(bits[i * quant_bits : (i + 1) * quant_bits], weights))
        out[i] = g / levels
    return out
