"""Figure rendering from validated bundles.

Panel figures (bundles 1-6): series trace on top, ACVF overlay bottom-left,
log-spectrum overlay bottom-right with a vertical marker at the cyclical
frequency; the title carries the parameter values from the manifest.

Phi-curve figures (bundle 7): q1 against the cyclical phase for several
memory parameters at fixed q0, plus per-d panels over several q0, each with
dashed admissible-bound lines.
"""

import json
import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bundle import BundleError

_NUM = "{:.4g}".format


def _title_from_params(p):
    lo, hi = p["interval"]
    return (f"d={_NUM(p['d'])}, q0={_NUM(p['q0'])}, q1={_NUM(p['q1'])}, "
            f"$\\lambda_0$={_NUM(p['lambda0'])}, "
            f"$c_\\gamma$={_NUM(p['c_gamma'])}, $\\phi$={_NUM(p['phi'])}, "
            f"$I_d$=[{_NUM(lo)}, {_NUM(hi)}], "
            f"$c_f^+$={_NUM(p['cf_plus'])}, $c_f^-$={_NUM(p['cf_minus'])}")


def _table_for_role(bundle, role):
    for entry in bundle.manifest["files"]:
        if entry["role"] == role:
            return bundle.table(entry["path"])
    raise BundleError(f"bundle has no file with role {role!r}")


def _check_boundary_side(bundle, spectrum):
    """A declared one-sided bundle must put its largest ordinate on that side."""
    side = bundle.manifest.get("boundary_side")
    if side is None:
        return False
    lam0 = bundle.manifest["params"]["lambda0"]
    lams, f = spectrum["lambda"], spectrum["f_true"]
    peak = lams[np.argmax(f)]
    if side == "-" and peak >= lam0:
        raise BundleError("manifest declares left-sided divergence but the "
                          "spectrum peaks right of lambda0")
    if side == "+" and peak <= lam0:
        raise BundleError("manifest declares right-sided divergence but the "
                          "spectrum peaks left of lambda0")
    return True


def render_panel_figure(bundle, out_path):
    """Render a three-panel bundle; returns the emitted metadata dict."""
    if bundle.figure not in (1, 2, 3, 4, 5, 6):
        raise BundleError(f"panel rendering expects figures 1-6, got {bundle.figure}")
    params = bundle.manifest.get("params")
    if params is None:
        raise BundleError("panel bundles need a 'params' block in the manifest")
    series = _table_for_role(bundle, "series")
    acvf = _table_for_role(bundle, "acvf")
    spectrum = _table_for_role(bundle, "spectrum")
    boundary_checked = _check_boundary_side(bundle, spectrum)

    title = _title_from_params(params)
    fig = plt.figure(figsize=(11, 6))
    gs = fig.add_gridspec(2, 2, height_ratios=(1.0, 1.2))

    ax = fig.add_subplot(gs[0, :])
    ax.plot(series["n"], series["x"], lw=0.6, color="tab:blue")
    ax.set_xlabel("n")
    ax.set_ylabel("$X_n$")
    ax.margins(x=0)

    panels = ["series"]
    ax = fig.add_subplot(gs[1, 0])
    ax.plot(acvf["h"], acvf["gamma_true"], "-", color="tab:red", label="theory")
    if "gamma_sample" in acvf:
        ax.plot(acvf["h"], acvf["gamma_sample"], "o", ms=3, mfc="none",
                color="tab:blue", label="sample")
        panels.append("acvf overlay")
    else:
        panels.append("acvf theory-only")
    ax.axhline(0.0, color="0.7", lw=0.5)
    ax.set_xlabel("h")
    ax.set_ylabel("$\\gamma_X(h)$")
    ax.legend(frameon=False, fontsize=8)

    ax = fig.add_subplot(gs[1, 1])
    if "periodogram_mean" in spectrum:
        ax.semilogy(spectrum["lambda"], spectrum["periodogram_mean"], ".",
                    ms=2, color="0.6", label="periodogram")
        panels.append("spectrum overlay")
    else:
        panels.append("spectrum theory-only")
    ax.semilogy(spectrum["lambda"], spectrum["f_true"], "-", color="tab:red",
                label="spectral density")
    ax.axvline(params["lambda0"], color="tab:green", ls="--", lw=0.8)
    ax.set_xlabel("$\\lambda$")
    ax.set_ylabel("$f_X(\\lambda)$")
    ax.legend(frameon=False, fontsize=8)

    fig.suptitle(title, fontsize=9)
    fig.tight_layout(rect=(0, 0, 1, 0.96))
    fig.savefig(out_path, dpi=130)
    plt.close(fig)

    meta = {
        "figure": bundle.figure,
        "image": str(out_path),
        "title": title,
        "title_fields": {k: params[k] for k in
                         ("d", "q0", "q1", "lambda0", "c_gamma", "phi",
                          "interval", "cf_plus", "cf_minus")},
        "panels": panels,
        "boundary_side_checked": boundary_checked,
    }
    _write_meta(out_path, meta)
    return meta


def _check_odd_symmetry(cols):
    phi = cols["phi"]
    if not np.allclose(phi, -phi[::-1], atol=1e-9):
        raise BundleError("phi curve is not odd-symmetric through the origin")


def render_phi_curves(bundle, out_path):
    """Render the q1-phi curve panels; returns the emitted metadata dict."""
    if bundle.figure != 7:
        raise BundleError(f"phi-curve rendering expects figure 7, got {bundle.figure}")
    panels = bundle.manifest.get("panels")
    if not panels:
        raise BundleError("figure-7 bundles need a 'panels' block in the manifest")
    fig, axes = plt.subplots(1, len(panels), figsize=(4.2 * len(panels), 3.6))
    axes = np.atleast_1d(axes)
    meta_panels = []
    for ax, panel in zip(axes, panels):
        labels = []
        for curve in panel["curves"]:
            cols = bundle.table(curve["path"])
            _check_odd_symmetry(cols)
            label = (f"d={_NUM(curve['d'])}" if panel["role"] == "phi_curve_by_d"
                     else f"q0={_NUM(curve['q0'])}")
            line, = ax.plot(cols["phi"], cols["q1"], lw=1.0, label=label)
            # dashed lower admissible-bound line at (d - 1/2) pi
            ax.axvline(curve["bound"][0], ls="--", lw=0.8,
                       color=line.get_color(), alpha=0.6)
            labels.append(label)
        if panel["role"] == "phi_curve_by_d":
            ax.set_title(f"fixed q0={_NUM(panel['q0'])}", fontsize=9)
        else:
            ax.set_title(f"fixed d={_NUM(panel['d'])}", fontsize=9)
        ax.set_xlabel("$\\phi$")
        ax.set_ylabel("$q_1$")
        ax.legend(frameon=False, fontsize=8)
        meta_panels.append({"role": panel["role"], "curves": labels})
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
    meta = {"figure": 7, "image": str(out_path), "panels": meta_panels}
    _write_meta(out_path, meta)
    return meta


def _write_meta(out_path, meta):
    with open(f"{out_path}.meta.json", "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=1)
        fh.write("\n")
