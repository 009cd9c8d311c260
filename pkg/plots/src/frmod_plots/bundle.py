"""Loading and validation of figure bundles (manifest + CSV files)."""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class BundleError(ValueError):
    """Manifest or CSV content not matching the bundle schema."""


# columns each file role must provide (extras like sample overlays optional)
REQUIRED_COLUMNS = {
    "series": ("n", "x"),
    "acvf": ("h", "gamma_true"),
    "spectrum": ("lambda", "f_true"),
    "phi_curve_by_d": ("q1", "phi"),
    "phi_curve_by_q0": ("q1", "phi"),
}


@dataclass(frozen=True)
class FigureBundle:
    manifest_path: Path
    manifest: dict
    tables: dict = field(repr=False)

    @property
    def figure(self):
        return self.manifest.get("figure")

    def table(self, path_name):
        return self.tables[path_name]


def _read_csv(path):
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise BundleError(f"cannot parse CSV {path}: {exc}") from exc
    if data.shape[1] != len(header):
        raise BundleError(f"{path}: header names {header} do not match row width")
    return {name: data[:, i] for i, name in enumerate(header)}


def load_bundle(manifest_path):
    """Load a manifest and every CSV it names, validating the column schema."""
    manifest_path = Path(manifest_path)
    try:
        manifest = json.loads(manifest_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BundleError(f"cannot read manifest {manifest_path}: {exc}") from exc
    if "figure" not in manifest or "files" not in manifest:
        raise BundleError(f"{manifest_path}: manifest needs 'figure' and 'files'")
    tables = {}
    for entry in manifest["files"]:
        role, rel = entry.get("role"), entry.get("path")
        path = manifest_path.parent / rel
        if not path.exists():
            raise BundleError(f"bundle file missing: {path}")
        cols = _read_csv(path)
        for required in REQUIRED_COLUMNS.get(role, ()):
            if required not in cols:
                raise BundleError(f"{path}: missing column {required!r} for role {role!r}")
        tables[rel] = cols
    return FigureBundle(manifest_path=manifest_path, manifest=manifest,
                        tables=tables)
