"""plot <manifest.json> --out DIR [--overwrite]

Renders one figure bundle to PNG (plus a .meta.json describing the panel
composition and title fields). Never touches the input CSVs; refuses to
replace an existing image unless --overwrite is given.
"""

import argparse
import sys
from pathlib import Path

from .bundle import BundleError, load_bundle
from .render import render_panel_figure, render_phi_curves


def build_parser():
    p = argparse.ArgumentParser(
        prog="plot", description="Render a frmod figure bundle.")
    p.add_argument("manifest", type=Path, help="path to a bundle manifest.json")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--overwrite", action="store_true",
                   help="replace an existing output image")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        bundle = load_bundle(args.manifest)
        args.out.mkdir(parents=True, exist_ok=True)
        out_path = args.out / f"figure{bundle.figure}.png"
        if out_path.exists() and not args.overwrite:
            print(f"error: {out_path} exists (use --overwrite)", file=sys.stderr)
            return 2
        if bundle.figure == 7:
            render_phi_curves(bundle, out_path)
        else:
            render_panel_figure(bundle, out_path)
    except BundleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
