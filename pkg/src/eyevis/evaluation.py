"""Quantitative evaluation: illumination stability, annotation overlap, ratio stats.

Works over a corpus directory of (image, polygon annotation, landmark
fixture) triples and over the bundled deployment-study ratio table.
Polygon overlap is computed at image resolution via pixel-center even-odd
rasterization, which is deterministic and directly checkable against a
brute-force point-in-polygon pass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import imaging, landmarks as lm, residue
from .config import PipelineConfig
from .errors import InvalidArgumentError, MissingAnnotationError

ANNOTATION_LABELS = ("eye", "pink", "black")


# ---------------------------------------------------------------------------
# Annotations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolygonAnnotation:
    label: str
    points: np.ndarray  # (N, 2) pixel vertices, N >= 3

    def __post_init__(self):
        if self.label not in ANNOTATION_LABELS:
            raise InvalidArgumentError(f"label must be one of {ANNOTATION_LABELS}, got {self.label!r}")
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise InvalidArgumentError("polygon needs at least 3 (x, y) vertices")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class AnnotationSet:
    image: str
    annotations: tuple[PolygonAnnotation, ...]

    def with_label(self, label: str) -> list[PolygonAnnotation]:
        return [a for a in self.annotations if a.label == label]


def parse_annotation_set(raw: dict) -> AnnotationSet:
    shapes = raw.get("shapes")
    if shapes is None:
        raise InvalidArgumentError("annotation document has no shapes array")
    anns = tuple(PolygonAnnotation(label=s["label"], points=s["points"]) for s in shapes)
    return AnnotationSet(image=str(raw.get("image", "")), annotations=anns)


def load_annotation_file(path) -> AnnotationSet:
    with open(path) as fh:
        return parse_annotation_set(json.load(fh))


def save_annotation_file(path, ann: AnnotationSet) -> None:
    doc = {
        "image": ann.image,
        "shapes": [
            {"label": a.label, "points": [[float(x), float(y)] for x, y in a.points]}
            for a in ann.annotations
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


# ---------------------------------------------------------------------------
# Rasterization
# ---------------------------------------------------------------------------

def rasterize_polygon(points, dims: tuple[int, int]) -> np.ndarray:
    """Scanline fill, even-odd rule: a pixel is set iff its center is inside."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise InvalidArgumentError("polygon needs at least 3 (x, y) vertices")
    width, height = int(dims[0]), int(dims[1])
    mask = np.zeros((height, width), dtype=bool)
    x1, y1 = pts[:, 0], pts[:, 1]
    x2, y2 = np.roll(x1, -1), np.roll(y1, -1)
    for row in range(height):
        yc = row + 0.5
        crossing = (y1 <= yc) != (y2 <= yc)
        if not crossing.any():
            continue
        t = (yc - y1[crossing]) / (y2[crossing] - y1[crossing])
        xs = np.sort(x1[crossing] + t * (x2[crossing] - x1[crossing]))
        for i in range(0, len(xs) - 1, 2):
            lo = max(0, int(np.ceil(xs[i] - 0.5)))
            hi = min(width, int(np.ceil(xs[i + 1] - 0.5)))
            if hi > lo:
                mask[row, lo:hi] = True
    return mask


def rasterize_label(ann: AnnotationSet, label: str, dims: tuple[int, int]) -> np.ndarray:
    """Union mask of every polygon carrying the label."""
    polys = ann.with_label(label)
    if not polys:
        raise MissingAnnotationError(f"annotation set {ann.image!r} has no {label!r} polygons")
    mask = np.zeros((dims[1], dims[0]), dtype=bool)
    for poly in polys:
        mask |= rasterize_polygon(poly.points, dims)
    return mask


# ---------------------------------------------------------------------------
# Illumination stability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IlluminationReport:
    """Mean per-pixel HSV distance between two captures of the same eye."""

    d: float
    d_h: float
    d_s: float
    d_v: float


def hsv_pixel_distance(hsv0: np.ndarray, hsv1: np.ndarray):
    """Per-pixel (d, d_h, d_s, d_v) between two HSV arrays.

    Hue distance wraps around the circle and is scaled by 180; value is
    scaled by 255; saturation stays a raw [0, 255] difference, which is why
    distances can exceed 1 under strong lighting shifts.
    """
    hsv0 = np.asarray(hsv0, dtype=np.float64)
    hsv1 = np.asarray(hsv1, dtype=np.float64)
    if hsv0.shape != hsv1.shape:
        raise InvalidArgumentError(f"shape mismatch: {hsv0.shape} vs {hsv1.shape}")
    dh_raw = np.abs(np.mod(hsv1[..., 0], 360.0) - np.mod(hsv0[..., 0], 360.0))
    d_h = np.minimum(dh_raw, 360.0 - dh_raw) / 180.0
    d_s = np.abs(hsv1[..., 1] - hsv0[..., 1])
    d_v = np.abs(hsv1[..., 2] - hsv0[..., 2]) / 255.0
    d = np.sqrt(d_h ** 2 + d_s ** 2 + d_v ** 2)
    return d, d_h, d_s, d_v


def hsv_distance(img0: np.ndarray, img1: np.ndarray) -> IlluminationReport:
    """Mean per-pixel HSV distance between two equally sized RGB images."""
    img0 = imaging.validate_rgb(img0)
    img1 = imaging.validate_rgb(img1)
    if img0.shape != img1.shape:
        raise InvalidArgumentError(f"dimension mismatch: {img0.shape} vs {img1.shape}")
    d, d_h, d_s, d_v = hsv_pixel_distance(imaging.rgb_to_hsv(img0), imaging.rgb_to_hsv(img1))
    return IlluminationReport(
        d=float(d.mean()), d_h=float(d_h.mean()), d_s=float(d_s.mean()), d_v=float(d_v.mean())
    )


# ---------------------------------------------------------------------------
# Overlap rates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OverlapReport:
    """Areas (pixels) and the four rates for one image.

    ``r_bin`` is None when no thresholded pixels fall outside the eye area
    (the rate is undefined, deliberately distinct from 0 or 1).
    """

    a1: int
    a2: int
    a3: int
    a4: int
    a5: int
    a6: int
    n1: int
    n2: int
    r_eye: float
    r_pink: float
    r_black: float
    r_bin: float | None


def overlap_rate_eye(
    contours, ann: AnnotationSet, dims: tuple[int, int]
) -> tuple[float, int, int]:
    """Fraction of the manual eye area covered by the contour polygons.

    ``contours`` is an iterable of polygons (the two 16-point eye rings).
    Returns (rate, covered_pixels, manual_pixels).
    """
    manual = rasterize_label(ann, "eye", dims)
    a2 = int(np.count_nonzero(manual))
    if a2 == 0:
        raise MissingAnnotationError("eye annotation rasterizes to zero area")
    algo = np.zeros_like(manual)
    for poly in contours:
        algo |= rasterize_polygon(poly, dims)
    a1 = int(np.count_nonzero(algo & manual))
    return a1 / a2, a1, a2


def overlap_rate_paint(
    mask: np.ndarray, ann: AnnotationSet, paint: str
) -> tuple[float, int, int]:
    """Fraction of the manual paint area covered by the segmentation mask."""
    if paint not in ("pink", "black"):
        raise InvalidArgumentError(f"paint must be 'pink' or 'black', got {paint!r}")
    mask = np.asarray(mask, dtype=bool)
    manual = rasterize_label(ann, paint, (mask.shape[1], mask.shape[0]))
    denom = int(np.count_nonzero(manual))
    if denom == 0:
        raise MissingAnnotationError(f"{paint} annotation rasterizes to zero area")
    inter = int(np.count_nonzero(mask & manual))
    return inter / denom, inter, denom


def binary_success_rate(
    threshold_mask: np.ndarray, ann: AnnotationSet
) -> tuple[float | None, int, int]:
    """Of thresholded pixels outside the eye area, the fraction inside black paint.

    Returns (rate, n1, n2); rate is None when n2 == 0.
    """
    threshold_mask = np.asarray(threshold_mask, dtype=bool)
    dims = (threshold_mask.shape[1], threshold_mask.shape[0])
    eye = rasterize_label(ann, "eye", dims)
    black = rasterize_label(ann, "black", dims)
    outside_eye = threshold_mask & ~eye
    n2 = int(np.count_nonzero(outside_eye))
    n1 = int(np.count_nonzero(outside_eye & black))
    if n2 == 0:
        return None, n1, n2
    return n1 / n2, n1, n2


def evaluate_image(
    img: np.ndarray,
    ann: AnnotationSet,
    landmarks: lm.FaceLandmarks,
    cfg: PipelineConfig | None = None,
    indices: lm.EyeContourIndices | None = None,
) -> OverlapReport:
    """All four rates for one eye image against its manual annotation."""
    cfg = cfg or PipelineConfig()
    indices = indices or lm.default_eye_indices()
    img = imaging.validate_rgb(img)
    h, w = img.shape[:2]
    rings = lm.eye_ring_points(landmarks, indices)
    contours = [rings["left"] * (w, h), rings["right"] * (w, h)]
    r_eye, a1, a2 = overlap_rate_eye(contours, ann, (w, h))
    pink_mask = residue.segment_paint(img, cfg.pink_range, cfg.blue_factor)
    black_mask = residue.segment_paint(img, cfg.black_range, cfg.blue_factor)
    r_pink, a3, a4 = overlap_rate_paint(pink_mask, ann, "pink")
    r_black, a5, a6 = overlap_rate_paint(black_mask, ann, "black")
    thresh = residue.binary_threshold_mask(imaging.rgb_to_gray(img), cfg.threshold_lo, cfg.threshold_hi)
    r_bin, n1, n2 = binary_success_rate(thresh, ann)
    return OverlapReport(
        a1=a1, a2=a2, a3=a3, a4=a4, a5=a5, a6=a6, n1=n1, n2=n2,
        r_eye=r_eye, r_pink=r_pink, r_black=r_black, r_bin=r_bin,
    )


# ---------------------------------------------------------------------------
# Corpus evaluation
# ---------------------------------------------------------------------------

RATE_NAMES = ("r_eye", "r_pink", "r_black", "r_bin")


def find_corpus_items(corpus_dir) -> list[dict]:
    """Image/annotation/landmark triples, matched by file stem."""
    corpus = Path(corpus_dir)
    items = []
    for img_path in sorted(corpus.iterdir()):
        if img_path.suffix.lower() not in (".png", ".jpg", ".jpeg"):
            continue
        stem = img_path.stem
        items.append(
            {
                "image": img_path,
                "annotation": corpus / f"{stem}.ann.json",
                "landmarks": corpus / f"{stem}.landmarks.json",
            }
        )
    return items


def run_corpus_eval(
    corpus_dir,
    cfg: PipelineConfig | None = None,
    indices: lm.EyeContourIndices | None = None,
    provider: lm.LandmarkProvider | None = None,
) -> dict:
    """Evaluate every triple in a directory; per-item failures never abort.

    Landmarks come from each item's fixture file unless a provider is given.
    Returns the report document: per-image rates, corpus averages over the
    defined rates, and the failure list.
    """
    cfg = cfg or PipelineConfig()
    indices = indices or lm.default_eye_indices()
    items = []
    failures = []
    for triple in find_corpus_items(corpus_dir):
        name = triple["image"].name
        try:
            img = imaging.load_image(triple["image"])
            ann = load_annotation_file(triple["annotation"])
            if provider is not None:
                marks = provider.detect(img)
            else:
                marks = lm.load_landmark_file(triple["landmarks"])
            report = evaluate_image(img, ann, marks, cfg, indices)
        except Exception as exc:  # noqa: BLE001 - isolation is the contract
            failures.append({"image": name, "error": f"{type(exc).__name__}: {exc}"})
            continue
        items.append(
            {
                "image": name,
                "r_eye": report.r_eye,
                "r_pink": report.r_pink,
                "r_black": report.r_black,
                "r_bin": report.r_bin,
            }
        )
    averages = {}
    for rate in RATE_NAMES:
        defined = [item[rate] for item in items if item[rate] is not None]
        averages[rate] = float(np.mean(defined)) if defined else None
    return {"items": items, "averages": averages, "failures": failures}


def write_report(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=1)


# ---------------------------------------------------------------------------
# Ratio statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AggregateStats:
    avg: float
    std: float  # sample standard deviation (n-1 denominator)


@dataclass(frozen=True)
class ParticipantRatios:
    """One participant's row: unassisted final ratios and five assisted trials."""

    participant: str
    r_p_baseline: float
    r_b_baseline: float
    r_p_trials: tuple[float, ...]
    r_b_trials: tuple[float, ...]

    @property
    def r_p_mean(self) -> float:
        return float(np.mean(self.r_p_trials))

    @property
    def r_b_mean(self) -> float:
        return float(np.mean(self.r_b_trials))


def aggregate_ratios(values) -> AggregateStats:
    """Arithmetic mean and sample (n-1) standard deviation."""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size < 2:
        raise InvalidArgumentError("need at least 2 values to aggregate")
    return AggregateStats(avg=float(arr.mean()), std=float(arr.std(ddof=1)))


RATIO_COLUMNS = ("r_p_baseline", "r_p_eyevis_mean", "r_b_baseline", "r_b_eyevis_mean")


def load_ratio_fixture(path=None) -> dict[str, list[float]]:
    """Column vectors of the deployment ratio table (bundled file by default)."""
    if path is None:
        text = resources.files("eyevis.data").joinpath("deployment_ratios.json").read_text()
        raw = json.loads(text)
    else:
        with open(path) as fh:
            raw = json.load(fh)
    participants = raw.get("participants")
    if not participants:
        raise InvalidArgumentError("ratio fixture has no participants table")
    columns: dict[str, list[float]] = {col: [] for col in RATIO_COLUMNS}
    for _, row in sorted(participants.items(), key=lambda kv: _participant_order(kv[0])):
        for col in RATIO_COLUMNS:
            columns[col].append(float(row[col]))
    return columns


def _participant_order(pid: str):
    digits = "".join(ch for ch in pid if ch.isdigit())
    return (int(digits) if digits else 0, pid)


def ratio_fixture_stats(path=None) -> dict[str, AggregateStats]:
    return {col: aggregate_ratios(vals) for col, vals in load_ratio_fixture(path).items()}
