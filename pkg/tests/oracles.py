"""Independent brute-force oracles the implementation is checked against.

Everything here recomputes results from first principles (per-pixel loops,
direct ray casting) and deliberately shares no code with the package
internals beyond the public array conventions.
"""

import math

import numpy as np


def ray_cast_inside(xc: float, yc: float, pts) -> bool:
    """Classic even-odd crossing test for one point."""
    inside = False
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        if (y1 <= yc) != (y2 <= yc):
            x_cross = x1 + (yc - y1) * (x2 - x1) / (y2 - y1)
            if xc < x_cross:
                inside = not inside
    return inside


def rasterize_bruteforce(pts, dims) -> np.ndarray:
    """Vectorized per-pixel-center ray cast over the whole grid."""
    pts = np.asarray(pts, dtype=np.float64)
    width, height = int(dims[0]), int(dims[1])
    xc = np.arange(width) + 0.5
    yc = np.arange(height) + 0.5
    xg, yg = np.meshgrid(xc, yc)
    crossings = np.zeros((height, width), dtype=np.int64)
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        if y1 == y2:
            continue
        spans = (y1 <= yg) != (y2 <= yg)
        x_cross = x1 + (yg - y1) * (x2 - x1) / (y2 - y1)
        crossings += (spans & (xg < x_cross)).astype(np.int64)
    return crossings % 2 == 1


def rasterize_pointwise(pts, dims) -> np.ndarray:
    """Pure-Python double loop; slow, for small grids."""
    width, height = int(dims[0]), int(dims[1])
    mask = np.zeros((height, width), dtype=bool)
    for row in range(height):
        for col in range(width):
            mask[row, col] = ray_cast_inside(col + 0.5, row + 0.5, pts)
    return mask


def scalar_rgb_to_hsv(r: float, g: float, b: float):
    """One pixel's HSV (h degrees, s/v in [0,255])."""
    maxc = max(r, g, b)
    minc = min(r, g, b)
    delta = maxc - minc
    v = maxc
    s = 0.0 if maxc == 0 else delta / maxc * 255.0
    if delta == 0:
        h = 0.0
    elif maxc == r:
        h = ((g - b) / delta) % 6.0 * 60.0
    elif maxc == g:
        h = ((b - r) / delta + 2.0) * 60.0
    else:
        h = ((r - g) / delta + 4.0) * 60.0
    return h % 360.0, s, v


def scalar_round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else int(math.ceil(x - 0.5))


def segment_bruteforce(img: np.ndarray, bounds: dict, blue_factor: float) -> np.ndarray:
    """Per-pixel loop applying blue boost, HSV conversion, and bound checks.

    ``bounds`` carries h_lo/h_hi/s_lo/s_hi/v_lo/v_hi; h_lo > h_hi wraps.
    """
    height, width = img.shape[:2]
    mask = np.zeros((height, width), dtype=bool)
    for row in range(height):
        for col in range(width):
            r, g, b = (float(c) for c in img[row, col])
            b = float(min(max(scalar_round_half_away(b * blue_factor), 0), 255))
            h, s, v = scalar_rgb_to_hsv(r, g, b)
            if bounds["h_lo"] <= bounds["h_hi"]:
                hue_ok = bounds["h_lo"] <= h <= bounds["h_hi"]
            else:
                hue_ok = h >= bounds["h_lo"] or h <= bounds["h_hi"]
            mask[row, col] = (
                hue_ok
                and bounds["s_lo"] <= s <= bounds["s_hi"]
                and bounds["v_lo"] <= v <= bounds["v_hi"]
            )
    return mask


def edge_pixels_bruteforce(in_bound: np.ndarray) -> np.ndarray:
    """Out-of-bound pixels whose 4-neighborhood mixes classes."""
    height, width = in_bound.shape
    edges = np.zeros_like(in_bound)
    for row in range(height):
        for col in range(width):
            if in_bound[row, col]:
                continue
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                rr, cc = row + dr, col + dc
                if 0 <= rr < height and 0 <= cc < width and in_bound[rr, cc]:
                    edges[row, col] = True
                    break
    return edges


def overlap_rates_bruteforce(
    eye_polys, pink_poly, black_poly, algo_polys, pink_mask, black_mask, thresh_mask, dims
):
    """All four rates recomputed from ray-cast rasterization and counting."""
    manual_eye = np.zeros((dims[1], dims[0]), dtype=bool)
    for poly in eye_polys:
        manual_eye |= rasterize_bruteforce(poly, dims)
    manual_pink = rasterize_bruteforce(pink_poly, dims)
    manual_black = rasterize_bruteforce(black_poly, dims)
    algo_eye = np.zeros_like(manual_eye)
    for poly in algo_polys:
        algo_eye |= rasterize_bruteforce(poly, dims)

    r_eye = np.count_nonzero(algo_eye & manual_eye) / np.count_nonzero(manual_eye)
    r_pink = np.count_nonzero(pink_mask & manual_pink) / np.count_nonzero(manual_pink)
    r_black = np.count_nonzero(black_mask & manual_black) / np.count_nonzero(manual_black)
    outside = thresh_mask & ~manual_eye
    n2 = np.count_nonzero(outside)
    r_bin = None if n2 == 0 else np.count_nonzero(outside & manual_black) / n2
    return r_eye, r_pink, r_black, r_bin
