"""Eye localization: providers, bounding boxes, the two-pass pipeline."""

import json
import sys

import numpy as np
import pytest

from eyevis import landmarks as lm
from eyevis.errors import (
    DegenerateGeometryError,
    DetectionFailureError,
    InvalidArgumentError,
    MissingBaselineError,
)
from eyevis.imaging import Box

from helpers import SequenceProvider, ellipse_ring, make_landmarks, rect_ring, solid


@pytest.fixture
def indices():
    return lm.default_eye_indices()


def span_landmarks(indices, x_lo, x_hi, y_lo, y_hi):
    """Both rings jointly spanning exactly the given normalized rectangle."""
    ring = rect_ring(x_lo, y_lo, x_hi, y_hi)
    return make_landmarks(ring, ring, indices, fill=((x_lo + x_hi) / 2, (y_lo + y_hi) / 2))


class TestTypes:
    def test_landmark_count_enforced(self):
        with pytest.raises(InvalidArgumentError):
            lm.FaceLandmarks(points=np.zeros((100, 2)))

    def test_coordinates_must_be_normalized(self):
        pts = np.zeros((468, 2))
        pts[0] = (1.5, 0.2)
        with pytest.raises(InvalidArgumentError):
            lm.FaceLandmarks(points=pts)

    def test_default_indices_are_valid_rings(self, indices):
        assert len(indices.left) == 16 and len(indices.right) == 16
        assert not set(indices.left) & set(indices.right)
        assert all(0 <= i < 468 for i in indices.left + indices.right)

    def test_rings_must_be_disjoint(self):
        ring = tuple(range(16))
        with pytest.raises(InvalidArgumentError):
            lm.EyeContourIndices(left=ring, right=ring)


class TestProviders:
    def test_fixture_passthrough(self, tmp_path, indices):
        marks = span_landmarks(indices, 0.2, 0.8, 0.3, 0.7)
        img = solid(10, 10)
        key = lm.pixel_digest(img)
        lm.save_landmark_file(tmp_path / f"{key}.json", marks)
        provider = lm.FixtureLandmarkProvider(tmp_path)
        got = provider.detect(img)
        assert np.array_equal(got.points, marks.points)

    def test_fixture_default_fallback(self, tmp_path, indices):
        marks = span_landmarks(indices, 0.2, 0.8, 0.3, 0.7)
        lm.save_landmark_file(tmp_path / "default.json", marks)
        provider = lm.FixtureLandmarkProvider(tmp_path)
        assert np.array_equal(provider.detect(solid(4, 4)).points, marks.points)

    def test_fixture_miss_is_detection_failure(self, tmp_path):
        with pytest.raises(DetectionFailureError):
            lm.FixtureLandmarkProvider(tmp_path).detect(solid(4, 4))

    def test_fixture_deterministic(self, tmp_path, indices):
        lm.save_landmark_file(tmp_path / "default.json", span_landmarks(indices, 0.1, 0.9, 0.2, 0.8))
        provider = lm.FixtureLandmarkProvider(tmp_path)
        img = solid(6, 6, (3, 14, 15))
        assert np.array_equal(provider.detect(img).points, provider.detect(img).points)

    def test_landmark_file_accepts_bare_array(self, tmp_path):
        pts = np.full((468, 2), 0.25)
        with open(tmp_path / "bare.json", "w") as fh:
            json.dump(pts.tolist(), fh)
        assert lm.load_landmark_file(tmp_path / "bare.json").points.shape == (468, 2)

    def test_external_process_provider(self, tmp_path, indices):
        marks = span_landmarks(indices, 0.2, 0.8, 0.3, 0.7)
        doc = tmp_path / "canned.json"
        lm.save_landmark_file(doc, marks)
        script = tmp_path / "detector.py"
        script.write_text(
            "import sys\n"
            f"print(open({str(doc)!r}).read())\n"
        )
        cache = tmp_path / "cache"
        provider = lm.ExternalProcessProvider([sys.executable, str(script)], cache_dir=cache)
        got = provider.detect(solid(5, 5))
        assert np.allclose(got.points, marks.points)
        assert len(list(cache.glob("*.json"))) == 1  # cached for reuse
        again = provider.detect(solid(5, 5))
        assert np.allclose(again.points, marks.points)

    def test_external_process_failure(self, tmp_path):
        script = tmp_path / "broken.py"
        script.write_text("import sys; sys.exit(3)\n")
        provider = lm.ExternalProcessProvider([sys.executable, str(script)])
        with pytest.raises(DetectionFailureError):
            provider.detect(solid(5, 5))


class TestEyeBoundingBox:
    def test_no_padding_worked_example(self, indices):
        marks = span_landmarks(indices, 0.4, 0.5, 0.45, 0.5)
        box = lm.eye_bounding_box(marks, indices, (1000, 1000), pad_frac=0.0)
        assert box == Box(400, 450, 500, 500)

    def test_quarter_padding_worked_example(self, indices):
        marks = span_landmarks(indices, 0.4, 0.5, 0.45, 0.5)
        box = lm.eye_bounding_box(marks, indices, (1000, 1000), pad_frac=0.25)
        assert box == Box(375, 438, 525, 513)

    def test_full_span_clamps_to_image(self, indices):
        marks = span_landmarks(indices, 0.0, 1.0, 0.0, 1.0)
        box = lm.eye_bounding_box(marks, indices, (640, 480), pad_frac=0.3)
        assert box == Box(0, 0, 640, 480)

    def test_contains_all_points_when_unclamped(self, indices):
        rng = np.random.default_rng(21)
        for _ in range(50):
            x_lo, y_lo = rng.uniform(0.1, 0.5, 2)
            x_hi = x_lo + rng.uniform(0.05, 0.4)
            y_hi = y_lo + rng.uniform(0.05, 0.4)
            marks = span_landmarks(indices, x_lo, x_hi, y_lo, y_hi)
            box = lm.eye_bounding_box(marks, indices, (800, 600), pad_frac=rng.uniform(0, 0.3))
            rings = lm.eye_ring_points(marks, indices)
            pts = np.vstack([rings["left"], rings["right"]]) * (800, 600)
            assert np.all(pts[:, 0] >= box.x0 - 0.5) and np.all(pts[:, 0] <= box.x1 + 0.5)
            assert np.all(pts[:, 1] >= box.y0 - 0.5) and np.all(pts[:, 1] <= box.y1 + 0.5)

    def test_degenerate_spread(self, indices):
        pts = np.full((468, 2), 0.5)
        marks = lm.FaceLandmarks(points=pts)
        with pytest.raises(DegenerateGeometryError):
            lm.eye_bounding_box(marks, indices, (100, 100), pad_frac=0.0)


class TestLocalizePipeline:
    def test_identity_composite(self, indices):
        # box = whole face, eye image same size: contour equals first pass
        marks = span_landmarks(indices, 0.0, 1.0, 0.0, 1.0)
        provider = SequenceProvider([marks, marks])
        face = solid(120, 120, (80, 80, 80))
        eye = solid(120, 120, (90, 90, 90))
        loc = lm.localize_eye_features(provider, face, eye, indices=indices, pad_frac=0.0)
        assert loc.box == Box(0, 0, 120, 120)
        rings = lm.eye_ring_points(marks, indices)
        for side in ("left", "right"):
            assert np.allclose(loc.contours[side], rings[side] * 120, atol=1e-9)

    def test_affine_worked_example(self, indices):
        # first pass spans x [0.1, 0.3], y [0.1, 0.2] of a 1000x1000 face -> box (100,100)-(300,200)
        first = span_landmarks(indices, 0.1, 0.3, 0.1, 0.2)
        second_ring = ellipse_ring(0.2, 0.15, 0.05, 0.02)
        second = make_landmarks(second_ring, second_ring + (0.02, 0.0), indices, fill=(0.2, 0.15))
        provider = SequenceProvider([first, second])
        face = solid(1000, 1000, (50, 50, 50))
        eye = solid(400, 200)
        loc = lm.localize_eye_features(provider, face, eye, indices=indices, pad_frac=0.0)
        assert loc.box == Box(100, 100, 300, 200)
        rings2 = lm.eye_ring_points(second, indices)
        for side in ("left", "right"):
            expected = (rings2[side] * 1000 - (100, 100)) * (2.0, 2.0)
            assert np.allclose(loc.contours[side], expected, atol=1e-9)

    def test_first_pass_failure_stage(self, indices):
        class Failing:
            def detect(self, img):
                raise DetectionFailureError("no face")

        with pytest.raises(DetectionFailureError) as err:
            lm.localize_eye_features(Failing(), solid(50, 50), solid(20, 20), indices=indices)
        assert err.value.stage == "first-pass"

    def test_second_pass_failure_stage(self, indices):
        marks = span_landmarks(indices, 0.2, 0.8, 0.3, 0.7)

        class SecondFails:
            calls = 0

            def detect(self, img):
                self.calls += 1
                if self.calls > 1:
                    raise DetectionFailureError("lost it")
                return marks

        with pytest.raises(DetectionFailureError) as err:
            lm.localize_eye_features(SecondFails(), solid(50, 50), solid(20, 20), indices=indices)
        assert err.value.stage == "second-pass"

    def test_roundtrip_random_boxes(self, indices):
        # box-local -> composite -> back is identity within a pixel
        rng = np.random.default_rng(42)
        for _ in range(100):
            face_w, face_h = rng.integers(100, 600, 2)
            x0, y0 = rng.integers(0, 40, 2)
            bw = rng.integers(20, face_w - x0 - 1)
            bh = rng.integers(20, face_h - y0 - 1)
            eye_w, eye_h = rng.integers(10, 400, 2)
            first = span_landmarks(indices, x0 / face_w, (x0 + bw) / face_w, y0 / face_h, (y0 + bh) / face_h)
            eye_pts = rng.uniform((0, 0), (eye_w, eye_h), (32, 2))
            composite_pts = eye_pts / (eye_w / bw, eye_h / bh) + (x0, y0)
            second = make_landmarks(
                composite_pts[:16] / (face_w, face_h),
                composite_pts[16:] / (face_w, face_h),
                indices,
                fill=(0.5, 0.5),
            )
            provider = SequenceProvider([first, second])
            loc = lm.localize_eye_features(
                provider,
                solid(int(face_w), int(face_h)),
                solid(int(eye_w), int(eye_h)),
                indices=indices,
                pad_frac=0.0,
            )
            got = np.vstack([loc.contours["left"], loc.contours["right"]])
            assert np.max(np.abs(got - eye_pts)) < 1.0


class TestOpennessAndBaselines:
    def test_flat_line_is_closed(self):
        pts = np.stack([np.linspace(0, 100, 16), np.full(16, 40.0)], axis=1)
        assert lm.openness_ratio(pts) == 0.0

    def test_square_extent(self):
        pts = rect_ring(0, 0, 50, 50)
        assert lm.openness_ratio(pts) == 1.0

    def test_mean_over_both_eyes(self):
        eye = rect_ring(0, 0, 100, 20)
        assert lm.eye_openness({"left": eye, "right": eye}) == pytest.approx(0.2)

    def test_zero_horizontal_extent(self):
        pts = np.stack([np.full(16, 10.0), np.linspace(0, 10, 16)], axis=1)
        with pytest.raises(DegenerateGeometryError):
            lm.openness_ratio(pts)

    def test_scale_and_translation_invariance(self):
        rng = np.random.default_rng(17)
        pts = rng.uniform(0, 50, (16, 2))
        base = lm.openness_ratio(pts)
        assert lm.openness_ratio(pts * 3.7) == pytest.approx(base)
        assert lm.openness_ratio(pts + (120.0, -40.0)) == pytest.approx(base)

    def test_classify_threshold_tie_is_open(self):
        assert lm.classify_eye_state(0.30, 0.18).classification == "open"
        assert lm.classify_eye_state(0.05, 0.18).classification == "closed"
        assert lm.classify_eye_state(0.18, 0.18).classification == "open"

    def test_match_baseline(self):
        baselines = {"open": "img-open", "closed": "img-closed"}
        assert lm.match_baseline(lm.EyeState("open", 0.3), baselines) == "img-open"
        assert lm.match_baseline(lm.EyeState("closed", 0.1), baselines) == "img-closed"
        with pytest.raises(MissingBaselineError):
            lm.match_baseline(lm.EyeState("open", 0.3), {"closed": "x"})
