"""
Two-pass eye localization
=========================

Find the padded eye bounding box on a whole-face reference, composite the
close-up into it, re-detect, and map the 16-point eye rings back onto the
close-up.  A canned landmark set stands in for a live detector.
"""

import numpy as np

from eyevis import imaging, landmarks as lm

indices = lm.default_eye_indices()


def ring(cx, cy, rx, ry):
    ang = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    return np.stack([cx + rx * np.cos(ang), cy + ry * np.sin(ang)], axis=1)


# Canned landmarks: eyes as two flat ellipses mid-face, everything else
# parked at the center.  Real deployments plug in an external detector via
# ExternalProcessProvider; tests and demos use fixtures.
points = np.full((468, 2), 0.5)
points[list(indices.left)] = ring(0.36, 0.46, 0.09, 0.03)
points[list(indices.right)] = ring(0.64, 0.46, 0.09, 0.03)
canned = lm.FaceLandmarks(points=points)


class CannedProvider:
    def detect(self, img):
        return canned


face = imaging.new_image(300, 300, (205, 185, 175))
eye = imaging.new_image(160, 90, (250, 244, 240))

# Pass 1 only needs the face reference; the composite re-detection then
# anchors the rings in close-up coordinates.
box = lm.eye_bounding_box(canned, indices, (300, 300), pad_frac=0.25)
print("padded eye box on face:  (%d,%d)-(%d,%d)" % (box.x0, box.y0, box.x1, box.y1))

loc = lm.localize_eye_features(CannedProvider(), face, eye, indices=indices, pad_frac=0.25)
print("contour points per eye:  %d / %d" % (len(loc.contours["left"]), len(loc.contours["right"])))
print("left ring x-span:        %.1f .. %.1f px" % (
    loc.contours["left"][:, 0].min(), loc.contours["left"][:, 0].max()))
print("openness (height/width): left %.3f, right %.3f" % (
    loc.openness["left"], loc.openness["right"]))

state = lm.classify_eye_state(loc.mean_openness)
print("classified eye state:    %s (mean openness %.3f)" % (state.classification, state.openness))

# The matching baseline is simply the stored capture with the same state.
baseline = lm.match_baseline(state, {"open": "open-baseline.png", "closed": "closed-baseline.png"})
print("baseline to compare:     %s" % baseline)
