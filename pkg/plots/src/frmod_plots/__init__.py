"""Figure rendering for frmod CSV bundles.

Reads the manifest + CSV files written by `frmod figure` and renders the
figure panels with matplotlib. Every number shown comes from the bundle;
nothing is recomputed here.
"""

from .bundle import BundleError, FigureBundle, load_bundle
from .render import render_panel_figure, render_phi_curves

__version__ = "0.1.0"
