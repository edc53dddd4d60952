"""Residue visualization: paint segmentation and the two renderings.

The first rendering recolors segmented paint the way UV fluorescence would
highlight it (blue for black paint, red for pink paint, pink where both
ranges fire); the second thresholds luma into black/white classes, marks the
class-transition contour, and replaces the white area with a colormap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import imaging, landmarks as lm
from .config import HsvRange, PipelineConfig, colormap_lut
from .errors import InvalidArgumentError

BLACK_PAINT_COLOR = (0, 0, 255)     # detected black paint -> blue
PINK_PAINT_COLOR = (255, 0, 0)      # detected pink paint -> red
OVERLAP_COLOR = (255, 105, 180)     # both ranges -> pink
NEUTRAL_COLOR = (255, 255, 255)

PAINT_CLASSES = ("black", "pink")


@dataclass(frozen=True)
class ResidueMask:
    """Binary paint mask plus the fraction of the image it covers."""

    paint: str
    mask: np.ndarray
    ratio: float


@dataclass(frozen=True)
class VisualizationSet:
    """The full per-capture rendering bundle; all images share dimensions."""

    original: np.ndarray
    black_vis: np.ndarray
    pink_vis: np.ndarray
    combined: np.ndarray
    contour_vis: np.ndarray


def segment_paint(img: np.ndarray, hsv_range: HsvRange, blue_factor: float = 1.2) -> np.ndarray:
    """Boolean mask of pixels whose HSV (after blue boost) is in range."""
    boosted = imaging.enhance_blue(img, blue_factor)
    return hsv_range.contains(imaging.rgb_to_hsv(boosted))


def residue_ratio(mask: np.ndarray) -> float:
    """Set-pixel count over total pixels."""
    mask = np.asarray(mask)
    if mask.size == 0:
        raise InvalidArgumentError("mask is empty")
    return float(np.count_nonzero(mask) / mask.size)


def make_residue_mask(paint: str, mask: np.ndarray) -> ResidueMask:
    if paint not in PAINT_CLASSES:
        raise InvalidArgumentError(f"paint class must be one of {PAINT_CLASSES}, got {paint!r}")
    return ResidueMask(paint=paint, mask=mask, ratio=residue_ratio(mask))


def segment_both(img: np.ndarray, cfg: PipelineConfig) -> dict[str, ResidueMask]:
    return {
        "black": make_residue_mask("black", segment_paint(img, cfg.black_range, cfg.blue_factor)),
        "pink": make_residue_mask("pink", segment_paint(img, cfg.pink_range, cfg.blue_factor)),
    }


def _recolor(shape, mask: np.ndarray, color) -> np.ndarray:
    out = np.empty(shape, dtype=np.uint8)
    out[:, :] = NEUTRAL_COLOR
    out[mask] = color
    return out


def hsv_uv_simulate(img: np.ndarray, cfg: PipelineConfig | None = None):
    """Single-color renderings of both paint masks plus their combination.

    Returns ``(black_vis, pink_vis, combined)``.  In the combined image a
    pixel's color depends only on which masks contain it: blue for black
    paint alone, red for pink alone, pink for the intersection, white
    elsewhere.
    """
    cfg = cfg or PipelineConfig()
    img = imaging.validate_rgb(img)
    in_black = segment_paint(img, cfg.black_range, cfg.blue_factor)
    in_pink = segment_paint(img, cfg.pink_range, cfg.blue_factor)
    black_vis = _recolor(img.shape, in_black, BLACK_PAINT_COLOR)
    pink_vis = _recolor(img.shape, in_pink, PINK_PAINT_COLOR)
    combined = _recolor(img.shape, in_black & ~in_pink, BLACK_PAINT_COLOR)
    combined[in_pink & ~in_black] = PINK_PAINT_COLOR
    combined[in_black & in_pink] = OVERLAP_COLOR
    return black_vis, pink_vis, combined


def binary_threshold_mask(gray: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """In-bound luma pixels (the black class of the rendering)."""
    if lo > hi:
        raise InvalidArgumentError(f"threshold lower bound {lo} exceeds upper bound {hi}")
    gray = imaging.validate_gray(gray)
    return (gray >= lo) & (gray <= hi)


def _boundary_pixels(in_bound: np.ndarray) -> np.ndarray:
    """Out-of-bound pixels with at least one in-bound 4-neighbor."""
    has_in_neighbor = np.zeros_like(in_bound)
    has_in_neighbor[1:, :] |= in_bound[:-1, :]
    has_in_neighbor[:-1, :] |= in_bound[1:, :]
    has_in_neighbor[:, 1:] |= in_bound[:, :-1]
    has_in_neighbor[:, :-1] |= in_bound[:, 1:]
    return ~in_bound & has_in_neighbor


def binary_threshold_vis(
    img: np.ndarray,
    lo: int | None = None,
    hi: int | None = None,
    cfg: PipelineConfig | None = None,
) -> np.ndarray:
    """Dual-bound luma threshold with contour marking and colormap fill.

    In-bound pixels render black; out-of-bound pixels take the configured
    colormap applied to their luma, except class-boundary pixels which are
    overdrawn in the edge highlight color.
    """
    cfg = cfg or PipelineConfig()
    lo = cfg.threshold_lo if lo is None else lo
    hi = cfg.threshold_hi if hi is None else hi
    img = imaging.validate_rgb(img)
    gray = imaging.rgb_to_gray(img)
    in_bound = binary_threshold_mask(gray, lo, hi)
    lut = colormap_lut(cfg.colormap)
    out = lut[gray]
    out[in_bound] = (0, 0, 0)
    out[_boundary_pixels(in_bound)] = cfg.edge_color
    return out


def visualize(img: np.ndarray, cfg: PipelineConfig | None = None) -> VisualizationSet:
    """Assemble all renderings for one capture."""
    cfg = cfg or PipelineConfig()
    img = imaging.validate_rgb(img)
    black_vis, pink_vis, combined = hsv_uv_simulate(img, cfg)
    return VisualizationSet(
        original=img.copy(),
        black_vis=black_vis,
        pink_vis=pink_vis,
        combined=combined,
        contour_vis=binary_threshold_vis(img, cfg=cfg),
    )


@dataclass(frozen=True)
class RemovalCheckResult:
    """The two comparison rows: live capture and its matched baseline."""

    localization: lm.EyeLocalization
    eye_state: lm.EyeState
    baseline_kind: str  # "open" | "closed"
    capture_vis: VisualizationSet
    capture_masks: dict[str, ResidueMask]
    baseline_vis: VisualizationSet
    baseline_masks: dict[str, ResidueMask]


def removal_check(
    provider: lm.LandmarkProvider,
    face_img: np.ndarray,
    eye_img: np.ndarray,
    baselines: dict[str, np.ndarray],
    cfg: PipelineConfig | None = None,
    indices: lm.EyeContourIndices | None = None,
) -> RemovalCheckResult:
    """Run one live check: localize, match the no-makeup baseline, render both.

    ``baselines`` maps "open"/"closed" to the stored baseline eye images;
    a missing entry for the matched state raises missing-baseline.
    """
    cfg = cfg or PipelineConfig()
    loc = lm.localize_eye_features(provider, face_img, eye_img, indices=indices, pad_frac=cfg.pad_frac)
    state = lm.classify_eye_state(loc.mean_openness, cfg.openness_threshold)
    baseline_img = lm.match_baseline(state, baselines)
    return RemovalCheckResult(
        localization=loc,
        eye_state=state,
        baseline_kind=state.classification,
        capture_vis=visualize(eye_img, cfg),
        capture_masks=segment_both(eye_img, cfg),
        baseline_vis=visualize(baseline_img, cfg),
        baseline_masks=segment_both(baseline_img, cfg),
    )
