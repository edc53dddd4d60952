"""Eye localization from a 468-point face-landmark topology.

The pipeline runs two detection passes: one over the whole-face reference to
find the padded eye bounding box, then one over a composite where the eye
close-up has been resized into that box.  The second pass's 16-point eye
rings are mapped back onto the close-up through the inverse affine of the
compositing step.

Landmark detection itself is behind :class:`LandmarkProvider`; the shipped
implementations are a fixture provider (JSON files, used by all tests) and an
adapter that shells out to an external detector process.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import tempfile
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Protocol, TypeVar

import numpy as np

from . import imaging
from .errors import (
    DegenerateGeometryError,
    DetectionFailureError,
    InvalidArgumentError,
    MissingBaselineError,
)
from .imaging import Box

LANDMARK_COUNT = 468
EYE_RING_SIZE = 16

DEFAULT_PAD_FRAC = 0.25
DEFAULT_OPENNESS_THRESHOLD = 0.18


@dataclass(frozen=True)
class FaceLandmarks:
    """468 (x, y) points normalized to [0, 1] of the analyzed image."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.shape != (LANDMARK_COUNT, 2):
            raise InvalidArgumentError(
                f"expected {LANDMARK_COUNT} (x, y) landmarks, got shape {pts.shape}"
            )
        if np.any(pts < 0.0) or np.any(pts > 1.0):
            raise InvalidArgumentError("landmark coordinates must lie in [0, 1]")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class EyeContourIndices:
    """The two 16-element index rings delineating the eyes."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        for side, ring in (("left", self.left), ("right", self.right)):
            ring = tuple(int(i) for i in ring)
            if len(ring) != EYE_RING_SIZE or len(set(ring)) != EYE_RING_SIZE:
                raise InvalidArgumentError(f"{side} ring needs {EYE_RING_SIZE} distinct indices")
            if min(ring) < 0 or max(ring) >= LANDMARK_COUNT:
                raise InvalidArgumentError(f"{side} ring indices must be in [0, {LANDMARK_COUNT - 1}]")
            object.__setattr__(self, side, ring)
        if set(self.left) & set(self.right):
            raise InvalidArgumentError("left and right rings must be disjoint")


def default_eye_indices() -> EyeContourIndices:
    """Eye rings shipped as configuration data, not code."""
    text = resources.files("eyevis.data").joinpath("eye_contour_indices.json").read_text()
    raw = json.loads(text)
    return EyeContourIndices(left=tuple(raw["left"]), right=tuple(raw["right"]))


@dataclass(frozen=True)
class EyeState:
    classification: str  # "open" | "closed"
    openness: float


@dataclass(frozen=True)
class EyeLocalization:
    """Output of the two-pass pipeline.

    ``box`` is in whole-face pixel coordinates (after padding); ``contours``
    maps "left"/"right" to (16, 2) float arrays in close-up pixel
    coordinates; ``openness`` holds the per-eye height/width ratio.
    """

    box: Box
    contours: dict[str, np.ndarray]
    openness: dict[str, float]

    @property
    def mean_openness(self) -> float:
        return (self.openness["left"] + self.openness["right"]) / 2.0


class LandmarkProvider(Protocol):
    """Detector contract: deterministic for identical input pixels."""

    def detect(self, img: np.ndarray) -> FaceLandmarks: ...


# ---------------------------------------------------------------------------
# Landmark file format + providers
# ---------------------------------------------------------------------------

def parse_landmarks(raw) -> FaceLandmarks:
    if isinstance(raw, dict):
        raw = raw.get("points")
    if raw is None:
        raise InvalidArgumentError("landmark document has no points array")
    return FaceLandmarks(points=np.asarray(raw, dtype=np.float64))


def load_landmark_file(path) -> FaceLandmarks:
    with open(path) as fh:
        return parse_landmarks(json.load(fh))


def save_landmark_file(path, landmarks: FaceLandmarks, image_name: str | None = None) -> None:
    doc: dict = {"points": [[float(x), float(y)] for x, y in landmarks.points]}
    if image_name is not None:
        doc["image"] = image_name
    with open(path, "w") as fh:
        json.dump(doc, fh)


def pixel_digest(img: np.ndarray) -> str:
    """Content key for an image's exact pixel grid."""
    img = imaging.validate_rgb(img)
    h = hashlib.sha256()
    h.update(f"{img.shape[1]}x{img.shape[0]}:".encode())
    h.update(img.tobytes())
    return h.hexdigest()


class StaticLandmarkProvider:
    """Returns one fixed landmark set for every image (stub/testing)."""

    def __init__(self, landmarks: FaceLandmarks):
        self._landmarks = landmarks

    def detect(self, img: np.ndarray) -> FaceLandmarks:
        imaging.validate_rgb(img)
        return self._landmarks


class FixtureLandmarkProvider:
    """Serves landmarks from JSON files keyed by pixel digest.

    ``<digest>.json`` wins; ``default.json`` is the fallback so a whole
    session can run against one canned landmark set.
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    def detect(self, img: np.ndarray) -> FaceLandmarks:
        keyed = self.directory / f"{pixel_digest(img)}.json"
        if keyed.exists():
            return load_landmark_file(keyed)
        fallback = self.directory / "default.json"
        if fallback.exists():
            return load_landmark_file(fallback)
        raise DetectionFailureError(
            f"no landmark fixture for image (looked for {keyed.name} and default.json)"
        )


class ExternalProcessProvider:
    """Adapter that invokes an external landmark detector.

    The command receives the image as a PNG path appended to its argv (or
    substituted for a ``{input}`` placeholder) and must print a landmark
    document (468 [x, y] pairs) on stdout.  Results are cached as landmark
    files when ``cache_dir`` is set.
    """

    def __init__(self, command: list[str], cache_dir=None):
        if not command:
            raise InvalidArgumentError("external provider needs a command")
        self.command = list(command)
        self.cache_dir = Path(cache_dir) if cache_dir else None

    def detect(self, img: np.ndarray) -> FaceLandmarks:
        digest = pixel_digest(img)
        if self.cache_dir is not None:
            cached = self.cache_dir / f"{digest}.json"
            if cached.exists():
                return load_landmark_file(cached)
        with tempfile.TemporaryDirectory() as tmp:
            png = Path(tmp) / "input.png"
            imaging.save_image(img, png)
            if any("{input}" in part for part in self.command):
                argv = [part.replace("{input}", str(png)) for part in self.command]
            else:
                argv = self.command + [str(png)]
            proc = subprocess.run(argv, capture_output=True, text=True)
        if proc.returncode != 0:
            raise DetectionFailureError(
                f"external detector exited {proc.returncode}: {proc.stderr.strip()[:200]}"
            )
        try:
            landmarks = parse_landmarks(json.loads(proc.stdout))
        except (json.JSONDecodeError, InvalidArgumentError) as exc:
            raise DetectionFailureError(f"external detector output unusable: {exc}") from exc
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            save_landmark_file(self.cache_dir / f"{digest}.json", landmarks)
        return landmarks


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

def detect_landmarks(provider: LandmarkProvider, img: np.ndarray) -> FaceLandmarks:
    imaging.validate_rgb(img)
    return provider.detect(img)


def eye_ring_points(landmarks: FaceLandmarks, indices: EyeContourIndices) -> dict[str, np.ndarray]:
    """Normalized 16-point rings per eye, keyed "left"/"right"."""
    return {
        "left": landmarks.points[list(indices.left)].copy(),
        "right": landmarks.points[list(indices.right)].copy(),
    }


def eye_bounding_box(
    landmarks: FaceLandmarks,
    indices: EyeContourIndices,
    dims: tuple[int, int],
    pad_frac: float = DEFAULT_PAD_FRAC,
) -> Box:
    """Padded pixel box covering both eye rings.

    ``dims`` is (width, height) of the image the landmarks refer to; the box
    is expanded by ``pad_frac`` of its size on each side, then clamped.
    """
    if pad_frac < 0.0:
        raise InvalidArgumentError("pad_frac must be >= 0")
    width, height = dims
    rings = eye_ring_points(landmarks, indices)
    pts = np.vstack([rings["left"], rings["right"]])
    xs = pts[:, 0] * width
    ys = pts[:, 1] * height
    x_lo, x_hi = xs.min(), xs.max()
    y_lo, y_hi = ys.min(), ys.max()
    pad_x = pad_frac * (x_hi - x_lo)
    pad_y = pad_frac * (y_hi - y_lo)
    x0 = int(np.clip(imaging.round_half_away(x_lo - pad_x), 0, width))
    x1 = int(np.clip(imaging.round_half_away(x_hi + pad_x), 0, width))
    y0 = int(np.clip(imaging.round_half_away(y_lo - pad_y), 0, height))
    y1 = int(np.clip(imaging.round_half_away(y_hi + pad_y), 0, height))
    if x1 <= x0 or y1 <= y0:
        raise DegenerateGeometryError("eye landmarks span a zero-area region")
    return Box(x0, y0, x1, y1)


def localize_eye_features(
    provider: LandmarkProvider,
    face_img: np.ndarray,
    eye_img: np.ndarray,
    indices: EyeContourIndices | None = None,
    pad_frac: float = DEFAULT_PAD_FRAC,
) -> EyeLocalization:
    """Two-pass localization mapping eye rings onto the close-up image."""
    face_img = imaging.validate_rgb(face_img)
    eye_img = imaging.validate_rgb(eye_img)
    if indices is None:
        indices = default_eye_indices()

    try:
        first = provider.detect(face_img)
    except DetectionFailureError as exc:
        raise DetectionFailureError(str(exc), stage="first-pass") from exc
    face_h, face_w = face_img.shape[:2]
    box = eye_bounding_box(first, indices, (face_w, face_h), pad_frac)

    patch = imaging.resize(eye_img, box.width, box.height)
    composite = imaging.paste(face_img, box, patch)
    try:
        second = provider.detect(composite)
    except DetectionFailureError as exc:
        raise DetectionFailureError(str(exc), stage="second-pass") from exc

    eye_h, eye_w = eye_img.shape[:2]
    scale_x = eye_w / box.width
    scale_y = eye_h / box.height
    contours: dict[str, np.ndarray] = {}
    openness: dict[str, float] = {}
    for side, ring in eye_ring_points(second, indices).items():
        pix = np.empty_like(ring)
        pix[:, 0] = (ring[:, 0] * face_w - box.x0) * scale_x
        pix[:, 1] = (ring[:, 1] * face_h - box.y0) * scale_y
        pix[:, 0] = np.clip(pix[:, 0], 0.0, eye_w)
        pix[:, 1] = np.clip(pix[:, 1], 0.0, eye_h)
        contours[side] = pix
        openness[side] = openness_ratio(pix)
    return EyeLocalization(box=box, contours=contours, openness=openness)


def openness_ratio(points: np.ndarray) -> float:
    """Vertical over horizontal extent of one eye ring."""
    pts = np.asarray(points, dtype=np.float64)
    spread_x = pts[:, 0].max() - pts[:, 0].min()
    spread_y = pts[:, 1].max() - pts[:, 1].min()
    if spread_x <= 0.0:
        raise DegenerateGeometryError("eye ring has zero horizontal extent")
    return float(spread_y / spread_x)


def eye_openness(contours: Mapping[str, np.ndarray]) -> float:
    """Mean openness over both eyes."""
    return (openness_ratio(contours["left"]) + openness_ratio(contours["right"])) / 2.0


def classify_eye_state(openness: float, threshold: float = DEFAULT_OPENNESS_THRESHOLD) -> EyeState:
    if openness < 0.0:
        raise InvalidArgumentError("openness must be >= 0")
    return EyeState(classification="open" if openness >= threshold else "closed", openness=openness)


T = TypeVar("T")


def match_baseline(state: EyeState, baselines: Mapping[str, T]) -> T:
    """Pick the stored no-makeup capture whose eye state matches."""
    try:
        return baselines[state.classification]
    except KeyError:
        raise MissingBaselineError(
            f"no {state.classification}-eye baseline captured yet; record baselines first"
        ) from None
