"""
Pixel primitives walkthrough
============================

Color conversions, blue-channel enhancement, bilinear resize, and paste --
the building blocks every other capability sits on.
"""

import numpy as np

from eyevis import imaging
from eyevis.imaging import Box

# A tiny gradient image to play with.
img = np.zeros((60, 90, 3), dtype=np.uint8)
img[..., 0] = np.linspace(0, 255, 90, dtype=np.uint8)[None, :]
img[..., 1] = 80
img[..., 2] = np.linspace(255, 0, 60, dtype=np.uint8)[:, None]

# RGB -> HSV (hue in degrees, saturation/value on the 0..255 scale).
hsv = imaging.rgb_to_hsv(img)
print("hue range:       %.1f .. %.1f degrees" % (hsv[..., 0].min(), hsv[..., 0].max()))
print("value range:     %.0f .. %.0f" % (hsv[..., 2].min(), hsv[..., 2].max()))

# The conversion inverts exactly up to 8-bit rounding.
back = imaging.hsv_to_rgb(hsv)
print("roundtrip error: %d levels max" % np.abs(back.astype(int) - img.astype(int)).max())

# Boosting the blue channel shifts dark bluish pixels further into the
# segmentation bands without touching red or green.
boosted = imaging.enhance_blue(img, 1.2)
print("blue boost:      mean B %.1f -> %.1f" % (img[..., 2].mean(), boosted[..., 2].mean()))

# Luma conversion drives the threshold rendering.
gray = imaging.rgb_to_gray(img)
print("luma range:      %d .. %d" % (gray.min(), gray.max()))

# Resize is bilinear with half-pixel centers; constant regions stay exact.
small = imaging.resize(img, 30, 20)
big = imaging.resize(small, 90, 60)
print("resized shapes:  %s -> %s -> %s" % (img.shape, small.shape, big.shape))

# Paste composites a patch into a region and leaves everything else alone.
canvas = imaging.new_image(90, 60, (255, 255, 255))
composite = imaging.paste(canvas, Box(30, 20, 60, 40), imaging.resize(img, 30, 20))
changed = np.any(composite != canvas, axis=-1).sum()
print("pasted pixels:   %d (expected %d)" % (changed, 30 * 20))
