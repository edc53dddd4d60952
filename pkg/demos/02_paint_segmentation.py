"""
Paint segmentation and the two renderings
=========================================

Segment black and pink face paint by HSV range, render the single-color
fluorescence-style images plus the combined view, and produce the
threshold-with-contours rendering.  Panels land in ./demo-output/.
"""

from pathlib import Path

from eyevis import imaging, residue
from eyevis.config import PipelineConfig

out_dir = Path("demo-output")
out_dir.mkdir(exist_ok=True)

# Synthetic eye close-up: white skin, one pink patch, one black patch,
# and a region where both bands fire (dark bluish pixels are inside the
# black band; after the blue boost they can reach the pink band too).
img = imaging.new_image(120, 80, (245, 235, 230))
img[20:60, 10:50] = (240, 80, 160)   # pink face paint
img[20:60, 70:110] = (15, 12, 14)    # black face paint
img[62:72, 40:80] = (40, 5, 35)      # dark magenta smear

cfg = PipelineConfig()
masks = residue.segment_both(img, cfg)
print("pink ratio:  %.4f" % masks["pink"].ratio)
print("black ratio: %.4f" % masks["black"].ratio)

# Single-color renderings: blue marks black paint, red marks pink paint,
# and the combined panel shows their intersection in pink.
black_vis, pink_vis, combined = residue.hsv_uv_simulate(img, cfg)
imaging.save_image(black_vis, out_dir / "seg_black.png")
imaging.save_image(pink_vis, out_dir / "seg_pink.png")
imaging.save_image(combined, out_dir / "seg_combined.png")

# Threshold rendering: luma in [lo, hi] turns black, the rest takes the
# colormap, and the class boundary is overdrawn in the highlight color.
contour = residue.binary_threshold_vis(img, cfg=cfg)
imaging.save_image(contour, out_dir / "seg_binary.png")
imaging.save_image(img, out_dir / "seg_original.png")

print("wrote 5 panels to %s/" % out_dir)
