"""Synthetic images, landmark sets, and corpus builders shared across tests."""

import json

import numpy as np

from eyevis import imaging
from eyevis.evaluation import AnnotationSet, PolygonAnnotation, save_annotation_file
from eyevis.landmarks import (
    LANDMARK_COUNT,
    FaceLandmarks,
    default_eye_indices,
    save_landmark_file,
)

PINK_PAINT = (240, 80, 160)   # stays in the default pink band after blue boost
BLACK_PAINT = (10, 10, 10)


def solid(width, height, color=(255, 255, 255)):
    return imaging.new_image(width, height, color)


def ellipse_ring(cx, cy, rx, ry, n=16):
    ang = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return np.stack([cx + rx * np.cos(ang), cy + ry * np.sin(ang)], axis=1)


def rect_ring(x0, y0, x1, y1):
    """16 points walking a rectangle's perimeter, corners included."""
    top = [(x, y0) for x in np.linspace(x0, x1, 6)[:-1]]
    right = [(x1, y) for y in np.linspace(y0, y1, 4)[:-1]]
    bottom = [(x, y1) for x in np.linspace(x1, x0, 6)[:-1]]
    left = [(x0, y) for y in np.linspace(y1, y0, 4)[:-1]]
    return np.asarray(top + right + bottom + left, dtype=np.float64)


def make_landmarks(left_pts, right_pts, indices=None, fill=(0.5, 0.5)):
    """Full 468-point set with the given normalized rings planted at the eye indices."""
    indices = indices or default_eye_indices()
    pts = np.full((LANDMARK_COUNT, 2), fill, dtype=np.float64)
    pts[list(indices.left)] = left_pts
    pts[list(indices.right)] = right_pts
    return FaceLandmarks(points=pts)


class SequenceProvider:
    """Stub returning one queued landmark set per detect call."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.calls = 0

    def detect(self, img):
        if not self.responses:
            raise AssertionError("SequenceProvider exhausted")
        self.calls += 1
        return self.responses.pop(0)


def star_polygon(rng, cx, cy, r_min, r_max, n_min=3, n_max=10):
    """Random simple (star-convex) polygon around a center."""
    n = int(rng.integers(n_min, n_max + 1))
    angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
    radii = rng.uniform(r_min, r_max, n)
    return np.stack([cx + radii * np.cos(angles), cy + radii * np.sin(angles)], axis=1)


def perfect_corpus_item(corpus_dir, name, width=64, height=64, indices=None, offset=0):
    """Image + annotation + landmarks constructed for exact 1.0 on all rates.

    The eye annotation equals the planted landmark rings; the paint patches
    equal their annotations pixel-for-pixel; the only thresholded pixels
    outside the eye lie inside the black annotation.  ``offset`` (0..4)
    shifts all the geometry to vary items within one corpus.
    """
    indices = indices or default_eye_indices()
    if not 0 <= offset <= 4:
        raise ValueError("offset must stay within the image margins")
    img = solid(width, height)
    o = int(offset)
    img[4 + o:14 + o, 4 + o:14 + o] = PINK_PAINT     # luma 137, outside the [0, 100] threshold band
    img[4 + o:14 + o, 50 + o:60 + o] = BLACK_PAINT   # luma 10, inside it
    eye_pts = rect_ring(18 + o, 22 + o, 46 + o, 42 + o)

    imaging.save_image(img, corpus_dir / f"{name}.png")
    ann = AnnotationSet(
        image=f"{name}.png",
        annotations=(
            PolygonAnnotation(label="eye", points=eye_pts),
            PolygonAnnotation(
                label="pink",
                points=[[4 + o, 4 + o], [14 + o, 4 + o], [14 + o, 14 + o], [4 + o, 14 + o]],
            ),
            PolygonAnnotation(
                label="black",
                points=[[50 + o, 4 + o], [60 + o, 4 + o], [60 + o, 14 + o], [50 + o, 14 + o]],
            ),
        ),
    )
    save_annotation_file(corpus_dir / f"{name}.ann.json", ann)
    norm_ring = eye_pts / (width, height)
    landmarks = make_landmarks(norm_ring, norm_ring, indices)
    save_landmark_file(corpus_dir / f"{name}.landmarks.json", landmarks, image_name=f"{name}.png")
    return img, ann, landmarks


def face_and_eye_fixture(tmp_path, face_size=200, eye_size=80):
    """A face image, eye close-up, and a landmark dir with default.json.

    The planted rings sit mid-face with enough vertical spread that every
    capture classifies as eyes-open, so both detection passes succeed with
    the same canned landmark set.
    """
    face = solid(face_size, face_size, (200, 180, 170))
    eye = solid(eye_size, eye_size)
    eye[10:30, 10:30] = PINK_PAINT
    eye[40:60, 40:60] = BLACK_PAINT
    left = ellipse_ring(0.35, 0.5, 0.10, 0.04)
    right = ellipse_ring(0.65, 0.5, 0.10, 0.04)
    landmarks = make_landmarks(left, right)
    lm_dir = tmp_path / "landmark-fixtures"
    lm_dir.mkdir(parents=True, exist_ok=True)
    save_landmark_file(lm_dir / "default.json", landmarks)
    return face, eye, lm_dir


def write_config(path, overrides):
    with open(path, "w") as fh:
        json.dump(overrides, fh)
    return path
