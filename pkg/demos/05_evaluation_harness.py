"""
Evaluation harness walkthrough
==============================

Illumination stability distances, polygon-overlap rates against manual
annotations, corpus-level evaluation, and the deployment ratio statistics.
"""

import tempfile
from pathlib import Path

import numpy as np

from eyevis import evaluation, imaging

# --- illumination stability ------------------------------------------------
# Mean per-pixel HSV distance; hue wraps the circle, value is scaled, and
# saturation stays a raw 0..255 difference.
steady_a = imaging.new_image(40, 40, (180, 160, 150))
steady_b = imaging.new_image(40, 40, (182, 161, 150))     # near-identical lighting
shifted = imaging.new_image(40, 40, (230, 215, 205))      # strong lighting change

print("d(stable pair)  = %.3f" % evaluation.hsv_distance(steady_a, steady_b).d)
print("d(shifted pair) = %.3f" % evaluation.hsv_distance(steady_a, shifted).d)

# --- polygon overlap -------------------------------------------------------
# Rates are computed at image resolution from pixel-center rasterization.
ann = evaluation.AnnotationSet(
    image="demo",
    annotations=(
        evaluation.PolygonAnnotation("eye", [[10, 10], [50, 10], [50, 40], [10, 40]]),
        evaluation.PolygonAnnotation("pink", [[12, 12], [30, 12], [30, 25], [12, 25]]),
        evaluation.PolygonAnnotation("black", [[32, 12], [48, 12], [48, 25], [32, 25]]),
    ),
)
algo_eye = [[12, 10], [50, 10], [50, 40], [12, 40]]  # slightly narrow on the left
rate, covered, manual = evaluation.overlap_rate_eye([algo_eye], ann, (60, 50))
print("r_eye = %.3f (%d of %d annotated pixels covered)" % (rate, covered, manual))

pink_mask = np.zeros((50, 60), dtype=bool)
pink_mask[12:25, 12:24] = True  # misses the right edge of the annotation
print("r_pink = %.3f" % evaluation.overlap_rate_paint(pink_mask, ann, "pink")[0])

# --- corpus evaluation -----------------------------------------------------
# A corpus directory holds image/.ann.json/.landmarks.json triples; per-item
# failures are reported without aborting the run.
from eyevis import landmarks as lm

indices = lm.default_eye_indices()

with tempfile.TemporaryDirectory() as tmp:
    corpus = Path(tmp)
    for i, name in enumerate(("capture0", "capture1", "capture2")):
        img = imaging.new_image(64, 64)
        img[4 + i:14 + i, 4 + i:14 + i] = (240, 80, 160)
        img[4 + i:14 + i, 50 + i:60 + i] = (10, 10, 10)
        imaging.save_image(img, corpus / f"{name}.png")

        eye_box = [[18 + i, 22 + i], [46 + i, 22 + i], [46 + i, 42 + i], [18 + i, 42 + i]]
        evaluation.save_annotation_file(
            corpus / f"{name}.ann.json",
            evaluation.AnnotationSet(
                image=f"{name}.png",
                annotations=(
                    evaluation.PolygonAnnotation("eye", eye_box),
                    evaluation.PolygonAnnotation(
                        "pink", [[4 + i, 4 + i], [14 + i, 4 + i], [14 + i, 14 + i], [4 + i, 14 + i]]
                    ),
                    evaluation.PolygonAnnotation(
                        "black", [[50 + i, 4 + i], [60 + i, 4 + i], [60 + i, 14 + i], [50 + i, 14 + i]]
                    ),
                ),
            ),
        )
        pts = np.full((468, 2), 0.5)
        ring = np.asarray(eye_box, dtype=float) / 64.0
        ring16 = np.vstack([np.linspace(ring[k], ring[(k + 1) % 4], 4, endpoint=False) for k in range(4)])
        pts[list(indices.left)] = ring16
        pts[list(indices.right)] = ring16
        lm.save_landmark_file(corpus / f"{name}.landmarks.json", lm.FaceLandmarks(points=pts))

    report = evaluation.run_corpus_eval(corpus)
    print("corpus averages:", {k: round(v, 3) for k, v in report["averages"].items()})

# --- deployment ratio statistics -------------------------------------------
# The bundled 12-participant table: unassisted final ratios vs. the mean of
# five assisted trials, aggregated with mean and sample (n-1) deviation.
for column, agg in evaluation.ratio_fixture_stats().items():
    print("%-18s avg %5.2f%%  std %4.2f%%" % (column, agg.avg, agg.std))
