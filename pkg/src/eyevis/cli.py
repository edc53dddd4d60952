"""Batch CLI: corpus evaluation, illumination tables, ratio stats, visualization.

Settings resolve as defaults < config file < environment < flags; the
environment knobs are EYEVIS_DATA_DIR and EYEVIS_PORT.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
from itertools import combinations
from pathlib import Path

from . import __version__, evaluation, imaging, landmarks as lm, residue
from .config import load_config
from .errors import EyeVisError

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")

_COLUMN_TITLES = {
    "r_p_baseline": "pink-baseline",
    "r_p_eyevis_mean": "pink-eyevis",
    "r_b_baseline": "black-baseline",
    "r_b_eyevis_mean": "black-eyevis",
}


def cmd_stats(args) -> int:
    """Mean and sample std for each column of the ratio table."""
    stats = evaluation.ratio_fixture_stats(args.fixture)
    for column, agg in stats.items():
        title = _COLUMN_TITLES.get(column, column)
        print(f"{title:<16} avg {agg.avg:.2f}  std {agg.std:.2f}")
    return 0


def _group_images(group_dir: Path) -> list:
    paths = sorted(p for p in group_dir.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
    if len(paths) < 3:
        raise EyeVisError(f"group {group_dir} needs >= 3 images (one per lighting condition)")
    return [imaging.load_image(p) for p in paths[:3]]


def cmd_illum(args) -> int:
    """Pairwise mean HSV distance per group: d_ab, d_ac, d_bc."""
    header = f"{'group':<24} {'d_ab':>8} {'d_ac':>8} {'d_bc':>8}"
    print(header)
    totals = [0.0, 0.0, 0.0]
    rows = 0
    for group in args.groups:
        group_dir = Path(group)
        if not group_dir.is_dir():
            print(f"error: {group} is not a directory", file=sys.stderr)
            return 2
        imgs = _group_images(group_dir)
        dists = [evaluation.hsv_distance(x, y).d for x, y in combinations(imgs, 2)]
        totals = [t + d for t, d in zip(totals, dists)]
        rows += 1
        print(f"{group_dir.name:<24} {dists[0]:>8.2f} {dists[1]:>8.2f} {dists[2]:>8.2f}")
    if rows > 1:
        print(f"{'avg':<24} {totals[0] / rows:>8.2f} {totals[1] / rows:>8.2f} {totals[2] / rows:>8.2f}")
    return 0


def cmd_evaluate(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        print(f"error: corpus directory {corpus} does not exist", file=sys.stderr)
        return 2
    cfg = load_config(args.config)
    report = evaluation.run_corpus_eval(corpus, cfg)
    evaluation.write_report(report, args.out)
    n_items = len(report["items"])
    n_fail = len(report["failures"])
    if n_items == 0 and n_fail == 0:
        print(f"warning: corpus {corpus} is empty; wrote empty report to {args.out}", file=sys.stderr)
        return 0
    print(f"evaluated {n_items} image(s), {n_fail} failure(s) -> {args.out}")
    for rate in evaluation.RATE_NAMES:
        avg = report["averages"][rate]
        print(f"  {rate:<8} {'undefined' if avg is None else f'{avg:.4f}'}")
    for failure in report["failures"]:
        print(f"warning: {failure['image']}: {failure['error']}", file=sys.stderr)
    if n_fail and not args.allow_item_failures:
        return 1
    return 0


def cmd_visualize(args) -> int:
    image_path = Path(args.image)
    if not image_path.exists():
        print(f"error: image {image_path} does not exist", file=sys.stderr)
        return 2
    cfg = load_config(args.config)
    img = imaging.load_image(image_path)
    vis = residue.visualize(img, cfg)
    masks = residue.segment_both(img, cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = image_path.stem
    for panel, arr in (
        ("original", vis.original),
        ("black", vis.black_vis),
        ("pink", vis.pink_vis),
        ("combined", vis.combined),
        ("binary", vis.contour_vis),
    ):
        imaging.save_image(arr, out_dir / f"{stem}_{panel}.png")
    print(f"wrote 5 panels to {out_dir}")
    print(f"black ratio {masks['black'].ratio:.4f}")
    print(f"pink ratio {masks['pink'].ratio:.4f}")
    return 0


def _resolve(flag, env_name, file_value, default):
    if flag is not None:
        return flag
    env = os.environ.get(env_name)
    if env:
        return env
    if file_value is not None:
        return file_value
    return default


def cmd_serve(args) -> int:
    raw_file: dict = {}
    if args.config:
        with open(args.config) as fh:
            raw_file = json.load(fh)
    data_dir = _resolve(args.data_dir, "EYEVIS_DATA_DIR", raw_file.get("data_dir"), "./eyevis-data")
    port = int(_resolve(args.port, "EYEVIS_PORT", raw_file.get("port"), 8000))
    cfg = load_config(args.config)

    if args.provider == "fixture":
        if not args.landmarks:
            print("error: --landmarks <dir> is required with --provider fixture", file=sys.stderr)
            return 2
        provider = lm.FixtureLandmarkProvider(args.landmarks)
    else:
        if not args.detector_cmd:
            print("error: --detector-cmd is required with --provider external", file=sys.stderr)
            return 2
        provider = lm.ExternalProcessProvider(shlex.split(args.detector_cmd), cache_dir=args.landmarks)

    from .service import create_app
    from .store import SessionStore

    try:
        store = SessionStore(data_dir)
    except OSError as exc:
        print(f"error: data directory {data_dir} unusable: {exc}", file=sys.stderr)
        return 2
    app = create_app(store, provider, cfg)

    import uvicorn

    try:
        uvicorn.run(app, host=args.host, port=port)
    except SystemExit as exc:  # uvicorn signals startup failure (e.g. busy port) this way
        return int(exc.code or 1)
    except OSError as exc:
        print(f"error: could not bind {args.host}:{port}: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eyevis", description=__doc__)
    parser.add_argument("--version", action="version", version=f"eyevis {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="aggregate the deployment ratio table")
    p.add_argument("fixture", nargs="?", default=None, help="ratio table JSON (default: bundled)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("illum", help="pairwise illumination distances per group directory")
    p.add_argument("groups", nargs="+", help="directories of 3 captures (one per lighting condition)")
    p.set_defaults(func=cmd_illum)

    p = sub.add_parser("evaluate", help="run the overlap-rate harness over a corpus directory")
    p.add_argument("corpus", help="directory of image + .ann.json + .landmarks.json triples")
    p.add_argument("--out", required=True, help="report JSON output path")
    p.add_argument("--config", default=None)
    p.add_argument(
        "--allow-item-failures",
        action="store_true",
        help="exit 0 even when individual corpus items fail",
    )
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("visualize", help="write the visualization panels for one image")
    p.add_argument("image")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_visualize)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--data-dir", default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--port", default=None, type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--provider", choices=("fixture", "external"), default="fixture")
    p.add_argument("--landmarks", default=None, help="landmark fixture dir (or cache dir for external)")
    p.add_argument("--detector-cmd", default=None, help="external detector command line")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EyeVisError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
