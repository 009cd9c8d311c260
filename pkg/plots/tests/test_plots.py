import hashlib
import json

import numpy as np
import pytest

from frmod_plots.bundle import BundleError, load_bundle
from frmod_plots.cli import main
from frmod_plots.render import render_panel_figure, render_phi_curves


def _hash_tree(root):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(root.iterdir()) if p.is_file()}


def test_all_seven_bundles_render(bundles, tmp_path):
    from conftest import record_acceptance

    inspected = 0
    for which, manifest in bundles.items():
        out = tmp_path / f"out{which}"
        assert main([str(manifest), "--out", str(out)]) == 0, f"figure {which}"
        image = out / f"figure{which}.png"
        assert image.exists() and image.stat().st_size > 10_000
        meta = json.loads((out / f"figure{which}.png.meta.json").read_text())
        assert meta["figure"] == which
        if which == 7:
            assert [p["role"] for p in meta["panels"]] == [
                "phi_curve_by_d", "phi_curve_by_q0", "phi_curve_by_q0"]
        else:
            assert meta["panels"] == ["series", "acvf overlay", "spectrum overlay"]
            assert all(k in meta["title_fields"] for k in
                       ("d", "q0", "q1", "lambda0", "c_gamma", "phi",
                        "interval", "cf_plus", "cf_minus"))
        inspected += 1
    record_acceptance(
        12, "plots renders all seven bundles; metadata verified",
        inspected == 7, f"{inspected} bundles")


def test_panel_metadata_fields(bundles, tmp_path):
    meta = render_panel_figure(load_bundle(bundles[1]), tmp_path / "f1.png")
    assert meta["panels"] == ["series", "acvf overlay", "spectrum overlay"]
    fields = meta["title_fields"]
    for key in ("d", "q0", "q1", "lambda0", "c_gamma", "phi", "interval",
                "cf_plus", "cf_minus"):
        assert key in fields
    for key in ("d", "q0", "q1", "lambda0", "c_gamma", "phi"):
        assert format(fields[key], ".4g") in meta["title"].replace("$", "")


def test_boundary_bundle_side_check(bundles, tmp_path):
    meta = render_panel_figure(load_bundle(bundles[5]), tmp_path / "f5.png")
    assert meta["boundary_side_checked"] is True
    # tampering with the declared side must be caught before rendering
    bundle = load_bundle(bundles[5])
    tampered = dict(bundle.manifest)
    tampered["boundary_side"] = "+"
    bad = type(bundle)(manifest_path=bundle.manifest_path, manifest=tampered,
                       tables=bundle.tables)
    with pytest.raises(BundleError):
        render_panel_figure(bad, tmp_path / "bad.png")


def test_theory_only_panels(bundles, tmp_path):
    bundle = load_bundle(bundles[2])
    stripped = {}
    for name, cols in bundle.tables.items():
        cols = dict(cols)
        cols.pop("gamma_sample", None)
        cols.pop("periodogram_mean", None)
        stripped[name] = cols
    lean = type(bundle)(manifest_path=bundle.manifest_path,
                        manifest=bundle.manifest, tables=stripped)
    meta = render_panel_figure(lean, tmp_path / "lean.png")
    assert meta["panels"] == ["series", "acvf theory-only", "spectrum theory-only"]


def test_phi_curves_metadata(bundles, tmp_path):
    meta = render_phi_curves(load_bundle(bundles[7]), tmp_path / "f7.png")
    assert len(meta["panels"]) == 3
    assert meta["panels"][0]["role"] == "phi_curve_by_d"
    assert len(meta["panels"][0]["curves"]) == 4
    for panel in meta["panels"][1:]:
        assert panel["role"] == "phi_curve_by_q0"
        assert len(panel["curves"]) == 3


def test_rerender_deterministic(bundles, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main([str(bundles[3]), "--out", str(out)]) == 0
    assert (a / "figure3.png").read_bytes() == (b / "figure3.png").read_bytes()


def test_inputs_never_mutated(bundles, tmp_path):
    src = bundles[4].parent
    before = _hash_tree(src)
    assert main([str(bundles[4]), "--out", str(tmp_path / "out")]) == 0
    assert _hash_tree(src) == before


def test_overwrite_refusal(bundles, tmp_path):
    out = tmp_path / "out"
    assert main([str(bundles[6]), "--out", str(out)]) == 0
    assert main([str(bundles[6]), "--out", str(out)]) == 2
    assert main([str(bundles[6]), "--out", str(out), "--overwrite"]) == 0


def test_missing_file_and_column_errors(bundles, tmp_path):
    import shutil
    src = bundles[1].parent
    broken = tmp_path / "broken"
    shutil.copytree(src, broken)
    (broken / "acvf.csv").unlink()
    with pytest.raises(BundleError, match="missing"):
        load_bundle(broken / "manifest.json")
    shutil.copy(src / "acvf.csv", broken / "acvf.csv")
    (broken / "series.csv").write_text("a,b\n1,2\n")
    with pytest.raises(BundleError, match="column"):
        load_bundle(broken / "manifest.json")


def test_phi_curve_symmetry_check_rejects_tampering(bundles, tmp_path):
    bundle = load_bundle(bundles[7])
    tampered = {k: dict(v) for k, v in bundle.tables.items()}
    first = next(iter(tampered))
    col = tampered[first]["phi"].copy()
    col[0] += 0.1
    tampered[first]["phi"] = col
    bad = type(bundle)(manifest_path=bundle.manifest_path,
                       manifest=bundle.manifest, tables=tampered)
    with pytest.raises(BundleError, match="odd-symmetric"):
        render_phi_curves(bad, tmp_path / "bad7.png")
