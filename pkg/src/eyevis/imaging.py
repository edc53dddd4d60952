"""Pixel-level primitives shared by every downstream module.

Array conventions used throughout the toolkit:

* RGB image: ``uint8`` array of shape ``(H, W, 3)``, sRGB channel order.
* Gray image: ``uint8`` array of shape ``(H, W)``.
* HSV values: ``float64`` array of shape ``(..., 3)`` with hue in degrees
  ``[0, 360)`` and saturation/value scaled to ``[0, 255]``.  Achromatic
  pixels take hue 0 so equality tests stay deterministic.

All pixel math rounds half-away-from-zero before clamping, which keeps
results bit-reproducible regardless of platform rounding modes.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import InvalidArgumentError, InvalidImageError


@dataclass(frozen=True)
class Box:
    """Axis-aligned pixel rectangle, half-open: [x0, x1) x [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def width(self) -> int:
        return self.x1 - self.x0

    @property
    def height(self) -> int:
        return self.y1 - self.y0

    def contains_point(self, x: float, y: float) -> bool:
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1


def round_half_away(values):
    """Round to nearest integer, ties away from zero (unlike np.round)."""
    values = np.asarray(values, dtype=np.float64)
    return np.where(values >= 0.0, np.floor(values + 0.5), np.ceil(values - 0.5))


def _to_u8(values) -> np.ndarray:
    return np.clip(round_half_away(values), 0, 255).astype(np.uint8)


def validate_rgb(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise InvalidArgumentError(
            f"expected uint8 RGB array of shape (H, W, 3), got {img.dtype} {img.shape}"
        )
    if img.shape[0] == 0 or img.shape[1] == 0:
        raise InvalidArgumentError("image dimensions must be positive")
    return img


def validate_gray(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise InvalidArgumentError(
            f"expected uint8 gray array of shape (H, W), got {img.dtype} {img.shape}"
        )
    return img


def new_image(width: int, height: int, color=(255, 255, 255)) -> np.ndarray:
    if width <= 0 or height <= 0:
        raise InvalidArgumentError("image dimensions must be positive")
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:, :] = np.asarray(color, dtype=np.uint8)
    return img


# ---------------------------------------------------------------------------
# Color-space conversions
# ---------------------------------------------------------------------------

def rgb_to_hsv(rgb) -> np.ndarray:
    """Convert RGB in [0,255] to HSV (h degrees [0,360), s/v in [0,255]).

    Accepts any (..., 3) array; single triples work too.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.shape[-1] != 3:
        raise InvalidArgumentError("last axis must hold RGB triples")
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    delta = maxc - minc

    # Hue sextants; delta==0 stays 0 (canonical achromatic hue).
    with np.errstate(invalid="ignore", divide="ignore"):
        h_r = np.mod((g - b) / delta, 6.0)
        h_g = (b - r) / delta + 2.0
        h_b = (r - g) / delta + 4.0
        s = np.where(maxc > 0.0, delta / maxc * 255.0, 0.0)
    h = np.zeros_like(maxc)
    chrom = delta > 0.0
    h = np.where(chrom & (maxc == r), h_r, h)
    h = np.where(chrom & (maxc == g) & (maxc != r), h_g, h)
    h = np.where(chrom & (maxc == b) & (maxc != r) & (maxc != g), h_b, h)
    h = np.mod(h * 60.0, 360.0)
    h = np.where(chrom, h, 0.0)
    return np.stack([h, s, maxc], axis=-1)


def hsv_to_rgb(hsv) -> np.ndarray:
    """Inverse of :func:`rgb_to_hsv`; returns uint8, exact up to 8-bit rounding."""
    hsv = np.asarray(hsv, dtype=np.float64)
    if hsv.shape[-1] != 3:
        raise InvalidArgumentError("last axis must hold HSV triples")
    h = np.mod(hsv[..., 0], 360.0) / 60.0
    s = hsv[..., 1] / 255.0
    v = hsv[..., 2]
    c = v * s
    x = c * (1.0 - np.abs(np.mod(h, 2.0) - 1.0))
    m = v - c
    sextant = np.floor(h).astype(np.int64) % 6
    zeros = np.zeros_like(c)
    r = np.choose(sextant, [c, x, zeros, zeros, x, c])
    g = np.choose(sextant, [x, c, c, x, zeros, zeros])
    b = np.choose(sextant, [zeros, zeros, x, c, c, x])
    return _to_u8(np.stack([r + m, g + m, b + m], axis=-1))


def rgb_to_gray(img: np.ndarray) -> np.ndarray:
    """Luma: round(0.299 R + 0.587 G + 0.114 B), half-away-from-zero."""
    img = validate_rgb(img)
    rgb = img.astype(np.float64)
    luma = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return _to_u8(luma)


# ---------------------------------------------------------------------------
# Channel enhancement / geometry
# ---------------------------------------------------------------------------

def enhance_blue(img: np.ndarray, factor: float) -> np.ndarray:
    """Scale the blue channel by ``factor``; red/green untouched."""
    img = validate_rgb(img)
    if not math.isfinite(factor) or factor < 0.0:
        raise InvalidArgumentError(f"blue factor must be finite and >= 0, got {factor}")
    out = img.copy()
    out[..., 2] = _to_u8(img[..., 2].astype(np.float64) * factor)
    return out


def resize(img: np.ndarray, width: int, height: int) -> np.ndarray:
    """Bilinear resize with half-pixel centers and edge clamping."""
    img = validate_rgb(img)
    if width <= 0 or height <= 0:
        raise InvalidArgumentError("target dimensions must be positive")
    src_h, src_w = img.shape[:2]
    if (src_w, src_h) == (width, height):
        return img.copy()

    def _axis_coords(dst_n: int, src_n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        src = (np.arange(dst_n, dtype=np.float64) + 0.5) * (src_n / dst_n) - 0.5
        src = np.clip(src, 0.0, src_n - 1.0)
        lo = np.floor(src).astype(np.int64)
        hi = np.minimum(lo + 1, src_n - 1)
        return lo, hi, src - lo

    x0, x1, fx = _axis_coords(width, src_w)
    y0, y1, fy = _axis_coords(height, src_h)
    pix = img.astype(np.float64)
    top = pix[y0][:, x0] * (1 - fx)[None, :, None] + pix[y0][:, x1] * fx[None, :, None]
    bot = pix[y1][:, x0] * (1 - fx)[None, :, None] + pix[y1][:, x1] * fx[None, :, None]
    out = top * (1 - fy)[:, None, None] + bot * fy[:, None, None]
    return _to_u8(out)


def paste(base: np.ndarray, box: Box, patch: np.ndarray) -> np.ndarray:
    """Return a copy of ``base`` with ``patch`` occupying ``box``."""
    base = validate_rgb(base)
    patch = validate_rgb(patch)
    h, w = base.shape[:2]
    if box.x0 < 0 or box.y0 < 0 or box.x1 > w or box.y1 > h:
        raise InvalidArgumentError(f"region {box} exceeds base bounds {w}x{h}")
    if patch.shape[0] != box.height or patch.shape[1] != box.width:
        raise InvalidArgumentError(
            f"patch is {patch.shape[1]}x{patch.shape[0]}, region needs {box.width}x{box.height}"
        )
    out = base.copy()
    out[box.y0:box.y1, box.x0:box.x1] = patch
    return out


def crop(img: np.ndarray, box: Box) -> np.ndarray:
    img = validate_rgb(img)
    h, w = img.shape[:2]
    if box.x0 < 0 or box.y0 < 0 or box.x1 > w or box.y1 > h or box.width <= 0 or box.height <= 0:
        raise InvalidArgumentError(f"crop region {box} invalid for {w}x{h} image")
    return img[box.y0:box.y1, box.x0:box.x1].copy()


# ---------------------------------------------------------------------------
# Codecs (PNG and baseline JPEG only)
# ---------------------------------------------------------------------------

_ALLOWED_FORMATS = {"PNG", "JPEG"}


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG/JPEG bytes to an RGB array."""
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.format not in _ALLOWED_FORMATS:
                raise InvalidImageError(f"unsupported image format: {im.format}")
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except InvalidImageError:
        raise
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise InvalidImageError(f"could not decode image: {exc}") from exc


def encode_image(img: np.ndarray, fmt: str = "png") -> bytes:
    img = validate_rgb(img)
    fmt = fmt.upper()
    if fmt == "JPG":
        fmt = "JPEG"
    if fmt not in _ALLOWED_FORMATS:
        raise InvalidArgumentError(f"unsupported image format: {fmt}")
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format=fmt)
    return buf.getvalue()


def load_image(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode_image(fh.read())


def save_image(img: np.ndarray, path) -> None:
    path = str(path)
    fmt = "JPEG" if path.lower().endswith((".jpg", ".jpeg")) else "PNG"
    with open(path, "wb") as fh:
        fh.write(encode_image(img, fmt))
