"""Pipeline configuration: segmentation ranges, thresholds, colormaps.

Defaults are embedded; a JSON config file overrides fields individually.
Calibrating the ranges to a troupe's actual face paints is a config
exercise, not a code change.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class HsvRange:
    """Inclusive HSV bounds; ``h_lo > h_hi`` wraps through 0 degrees."""

    h_lo: float
    h_hi: float
    s_lo: float
    s_hi: float
    v_lo: float
    v_hi: float

    def __post_init__(self):
        if not (0.0 <= self.h_lo <= 360.0 and 0.0 <= self.h_hi <= 360.0):
            raise InvalidArgumentError("hue bounds must lie in [0, 360]")
        if self.s_lo > self.s_hi or self.v_lo > self.v_hi:
            raise InvalidArgumentError("saturation/value lower bound exceeds upper bound")
        for bound in (self.s_lo, self.s_hi, self.v_lo, self.v_hi):
            if not 0.0 <= bound <= 255.0:
                raise InvalidArgumentError("saturation/value bounds must lie in [0, 255]")

    def contains(self, hsv: np.ndarray) -> np.ndarray:
        """Boolean membership per pixel for an (..., 3) HSV array."""
        hsv = np.asarray(hsv, dtype=np.float64)
        h, s, v = hsv[..., 0], hsv[..., 1], hsv[..., 2]
        if self.h_lo <= self.h_hi:
            hue_ok = (h >= self.h_lo) & (h <= self.h_hi)
        else:
            hue_ok = (h >= self.h_lo) | (h <= self.h_hi)
        return hue_ok & (s >= self.s_lo) & (s <= self.s_hi) & (v >= self.v_lo) & (v <= self.v_hi)


# Dark pixels regardless of hue read as black paint; the pink paint band
# wraps through 0 degrees to cover magenta-through-warm-pink shades.
DEFAULT_BLACK_RANGE = HsvRange(h_lo=0, h_hi=360, s_lo=0, s_hi=255, v_lo=0, v_hi=60)
DEFAULT_PINK_RANGE = HsvRange(h_lo=300, h_hi=15, s_lo=80, s_hi=255, v_lo=60, v_hi=255)


@dataclass(frozen=True)
class PipelineConfig:
    black_range: HsvRange = DEFAULT_BLACK_RANGE
    pink_range: HsvRange = DEFAULT_PINK_RANGE
    blue_factor: float = 1.2
    threshold_lo: int = 0
    threshold_hi: int = 100
    openness_threshold: float = 0.18
    pad_frac: float = 0.25
    colormap: str = "inferno"
    edge_color: tuple[int, int, int] = (0, 255, 0)
    workers: int = 4

    def __post_init__(self):
        if self.threshold_lo > self.threshold_hi:
            raise InvalidArgumentError("threshold_lo exceeds threshold_hi")
        if not 0 <= self.threshold_lo <= 255 or not 0 <= self.threshold_hi <= 255:
            raise InvalidArgumentError("threshold bounds must be 8-bit values")
        if self.blue_factor < 0:
            raise InvalidArgumentError("blue_factor must be >= 0")
        if self.pad_frac < 0:
            raise InvalidArgumentError("pad_frac must be >= 0")
        if self.workers < 1:
            raise InvalidArgumentError("workers must be >= 1")


def _parse_range(raw: dict) -> HsvRange:
    try:
        return HsvRange(
            h_lo=float(raw["h"][0]), h_hi=float(raw["h"][1]),
            s_lo=float(raw["s"][0]), s_hi=float(raw["s"][1]),
            v_lo=float(raw["v"][0]), v_hi=float(raw["v"][1]),
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise InvalidArgumentError(f"malformed HSV range: {raw!r}") from exc


def _range_to_json(rng: HsvRange) -> dict:
    return {"h": [rng.h_lo, rng.h_hi], "s": [rng.s_lo, rng.s_hi], "v": [rng.v_lo, rng.v_hi]}


def config_from_dict(raw: dict, base: PipelineConfig | None = None) -> PipelineConfig:
    cfg = base or PipelineConfig()
    updates: dict = {}
    if "black_range" in raw:
        updates["black_range"] = _parse_range(raw["black_range"])
    if "pink_range" in raw:
        updates["pink_range"] = _parse_range(raw["pink_range"])
    for key in ("blue_factor", "openness_threshold", "pad_frac"):
        if key in raw:
            updates[key] = float(raw[key])
    for key in ("threshold_lo", "threshold_hi", "workers"):
        if key in raw:
            updates[key] = int(raw[key])
    if "colormap" in raw:
        updates["colormap"] = str(raw["colormap"])
    if "edge_color" in raw:
        updates["edge_color"] = tuple(int(c) for c in raw["edge_color"])
    return replace(cfg, **updates)


def config_to_dict(cfg: PipelineConfig) -> dict:
    return {
        "black_range": _range_to_json(cfg.black_range),
        "pink_range": _range_to_json(cfg.pink_range),
        "blue_factor": cfg.blue_factor,
        "threshold_lo": cfg.threshold_lo,
        "threshold_hi": cfg.threshold_hi,
        "openness_threshold": cfg.openness_threshold,
        "pad_frac": cfg.pad_frac,
        "colormap": cfg.colormap,
        "edge_color": list(cfg.edge_color),
        "workers": cfg.workers,
    }


def load_config(path=None) -> PipelineConfig:
    """Defaults, with fields individually overridden by a JSON file."""
    if path is None:
        return PipelineConfig()
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


_LUT_CACHE: dict[str, np.ndarray] = {}


def colormap_lut(name: str) -> np.ndarray:
    """256x3 uint8 lookup table for a named ramp shipped as data."""
    if name not in _LUT_CACHE:
        try:
            text = resources.files("eyevis.data").joinpath(f"colormap_{name}.json").read_text()
        except FileNotFoundError:
            raise InvalidArgumentError(f"unknown colormap: {name!r}") from None
        lut = np.asarray(json.loads(text), dtype=np.uint8)
        if lut.shape != (256, 3):
            raise InvalidArgumentError(f"colormap {name!r} is not a 256-entry RGB table")
        _LUT_CACHE[name] = lut
    return _LUT_CACHE[name]
