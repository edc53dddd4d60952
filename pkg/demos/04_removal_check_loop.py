"""
Removal-check loop
==================

The live comparison a performer sees while wiping off makeup: capture,
match the no-makeup baseline by eye state, render both rows, compare
ratios, wipe, and check again.  Grids land in ./demo-output/.
"""

from pathlib import Path

import numpy as np

from eyevis import imaging, landmarks as lm, residue
from eyevis.config import PipelineConfig

out_dir = Path("demo-output")
out_dir.mkdir(exist_ok=True)
indices = lm.default_eye_indices()

# Canned landmarks again; see 03_eye_localization.py.
ang = np.linspace(0, 2 * np.pi, 16, endpoint=False)
points = np.full((468, 2), 0.5)
points[list(indices.left)] = np.stack([0.36 + 0.09 * np.cos(ang), 0.5 + 0.03 * np.sin(ang)], axis=1)
points[list(indices.right)] = np.stack([0.64 + 0.09 * np.cos(ang), 0.5 + 0.03 * np.sin(ang)], axis=1)
canned = lm.FaceLandmarks(points=points)


class CannedProvider:
    def detect(self, img):
        return canned


face = imaging.new_image(240, 240, (205, 185, 175))
baseline_eye = imaging.new_image(120, 80, (250, 244, 240))
baselines = {"open": baseline_eye, "closed": baseline_eye}

# First check: plenty of paint left around the eye.
capture = baseline_eye.copy()
capture[10:50, 10:60] = (240, 80, 160)
capture[10:50, 70:110] = (15, 12, 14)

cfg = PipelineConfig()
first = residue.removal_check(CannedProvider(), face, capture, baselines, cfg)
print("check 1: matched %s baseline" % first.baseline_kind)
print("  capture  pink %.4f  black %.4f" % (
    first.capture_masks["pink"].ratio, first.capture_masks["black"].ratio))
print("  baseline pink %.4f  black %.4f" % (
    first.baseline_masks["pink"].ratio, first.baseline_masks["black"].ratio))

# Wipe most of it off and check again; ratios should drop toward baseline.
wiped = capture.copy()
wiped[10:50, 10:60] = (249, 242, 238)
wiped[10:50, 70:95] = (248, 243, 241)
second = residue.removal_check(CannedProvider(), face, wiped, baselines, cfg)
print("check 2 after wiping:")
print("  capture  pink %.4f  black %.4f" % (
    second.capture_masks["pink"].ratio, second.capture_masks["black"].ratio))

# Persist the 2x3 grid of the first check the way the service does.
for row, vis in (("capture", first.capture_vis), ("baseline", first.baseline_vis)):
    imaging.save_image(vis.original, out_dir / f"grid_{row}_original.png")
    imaging.save_image(vis.combined, out_dir / f"grid_{row}_hsv_uv.png")
    imaging.save_image(vis.contour_vis, out_dir / f"grid_{row}_binary.png")
print("wrote the six grid panels to %s/" % out_dir)
