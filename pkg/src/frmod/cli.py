"""Command-line front end.

Subcommands: params | acvf | spectrum | simulate | figure | demodulate.
Common flags: --config PATH, --out PATH, --seed U64, --replicates N,
--format csv|json. Every command is deterministic given config and seed;
exit codes are 0 (success), 2 (configuration error), 3 (numeric failure).

Configurations are strict JSON: unknown keys are rejected. CSV output uses
a header row, comma separators, and 17 significant digits.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (ConfigError, DomainError, InadmissiblePhaseError,
                     InfeasibleLimitError, InvalidPolynomialError,
                     NotPositiveDefiniteError, QuadratureFailureError,
                     SingularityError)
from .estimate import (periodogram, remodulate, rice_demodulate, sample_acvf,
                       sample_cross_acvf)
from .model import (AsymSpec, FrmodSpec, MultiFactorSpec, frmod_spec,
                    model_acvf)
from .params import (QPair, admissible_interval, boundary_q0, phi_curve,
                     q_to_a, q_to_r, r_to_g, r_to_timelimit, SpecLimit,
                     speclimit_to_timelimit, target_phase_to_q,
                     timelimit_to_speclimit)
from .simulate import (apply_arma, arma_burn_in, simulate_exact_many,
                       simulate_modulated, simulate_truncated)
from .spectrum import model_spectrum, singularities, spectrum_grid

DEFAULT_GRID_POINTS = 4096
DEFAULT_EXCLUSION = 1e-4
FIGURE_PHI_CURVE_DS = (0.2, 0.3, 0.35, 0.45)


# ---------------------------------------------------------------------------
# configuration parsing

@dataclass(frozen=True)
class SimBlock:
    n: int
    seed: int
    method: str = "exact"
    replicates: int = 1
    K: int = 10_000


@dataclass(frozen=True)
class GridBlock:
    points: int = DEFAULT_GRID_POINTS
    exclusion: float = DEFAULT_EXCLUSION


@dataclass(frozen=True)
class ModelConfig:
    spec: object
    simulation: SimBlock | None
    grid: GridBlock
    raw: dict


def _take(mapping, context, required, optional=()):
    unknown = set(mapping) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {context}")
    missing = [k for k in required if k not in mapping]
    if missing:
        raise ConfigError(f"missing keys {missing} in {context}")


def _parse_spec(obj, context="config"):
    if not isinstance(obj, dict):
        raise ConfigError(f"{context} must be a JSON object")
    kind = obj.get("kind")
    if kind == "frmod":
        _take(obj, context, ("kind", "d", "lambda0", "q0", "q1"), ("ar", "ma"))
        return frmod_spec(obj["d"], obj["lambda0"], obj["q0"], obj["q1"],
                          ar=tuple(obj.get("ar", ())), ma=tuple(obj.get("ma", ())))
    if kind == "asym":
        _take(obj, context, ("kind", "lambda0", "d_plus", "d_minus",
                             "q1_plus", "q1_minus"))
        return AsymSpec(lambda0=obj["lambda0"], d_plus=obj["d_plus"],
                        d_minus=obj["d_minus"], q1_plus=obj["q1_plus"],
                        q1_minus=obj["q1_minus"])
    if kind == "multifactor":
        _take(obj, context, ("kind", "components"))
        comps = obj["components"]
        if not isinstance(comps, list) or not comps:
            raise ConfigError("multifactor components must be a nonempty list")
        return MultiFactorSpec(tuple(
            _parse_spec(c, f"{context}.components[{i}]") for i, c in enumerate(comps)))
    raise ConfigError(f"{context}: kind must be frmod, asym or multifactor, got {kind!r}")


def parse_config(obj):
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    model_keys = {k: v for k, v in obj.items() if k not in ("simulation", "grid")}
    spec = _parse_spec(model_keys)
    sim = None
    if "simulation" in obj:
        s = obj["simulation"]
        _take(s, "simulation", ("n", "seed"), ("method", "replicates", "K"))
        sim = SimBlock(n=int(s["n"]), seed=int(s["seed"]),
                       method=s.get("method", "exact"),
                       replicates=int(s.get("replicates", 1)),
                       K=int(s.get("K", 10_000)))
        if sim.method not in ("exact", "truncated", "modulated"):
            raise ConfigError(f"simulation method must be exact, truncated or "
                              f"modulated, got {sim.method!r}")
        if sim.n < 2 or sim.replicates < 1:
            raise ConfigError("simulation block needs n >= 2 and replicates >= 1")
    grid = GridBlock()
    if "grid" in obj:
        g = obj["grid"]
        _take(g, "grid", (), ("points", "exclusion"))
        grid = GridBlock(points=int(g.get("points", DEFAULT_GRID_POINTS)),
                         exclusion=float(g.get("exclusion", DEFAULT_EXCLUSION)))
    return ModelConfig(spec=spec, simulation=sim, grid=grid, raw=obj)


def load_config(path):
    if path is None:
        raise ConfigError("this command requires --config PATH")
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(obj)


# ---------------------------------------------------------------------------
# output helpers

def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _write_table(out, header, columns, fmt):
    rows = zip(*columns)
    if fmt == "json":
        doc = {name: [float(v) for v in col] for name, col in zip(header, columns)}
        _write_text(out, json.dumps(doc, sort_keys=True, indent=1) + "\n")
        return
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _write_text(out, "\n".join(lines) + "\n")


def _write_text(out, text):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def _write_json(out, doc):
    _write_text(out, json.dumps(doc, sort_keys=True, indent=1) + "\n")


# ---------------------------------------------------------------------------
# parameter reporting

def _frmod_param_doc(spec):
    q = spec.q
    a = q_to_a(q, spec.d)
    r = q_to_r(q, spec.d)
    g = r_to_g(r, spec.d)
    t = r_to_timelimit(r)
    s = timelimit_to_speclimit(t, spec.d)
    lo, hi = admissible_interval(spec.d)
    return {
        "kind": "frmod", "d": spec.d, "lambda0": spec.lambda0,
        "q0": q.q0, "q1": q.q1, "a0": a.a0, "a1": a.a1,
        "r0": r.r0, "r1": r.r1, "g0": g.g0, "g1": g.g1,
        "c_gamma": t.c_gamma, "phi": t.phi, "interval": [lo, hi],
        "cf_plus": s.cf_plus, "cf_minus": s.cf_minus,
        "ar": list(spec.ar), "ma": list(spec.ma),
    }


def param_doc(spec):
    if isinstance(spec, FrmodSpec):
        return _frmod_param_doc(spec)
    if isinstance(spec, AsymSpec):
        plus, minus = spec.components()
        return {"kind": "asym", "lambda0": spec.lambda0,
                "plus": _frmod_param_doc(plus), "minus": _frmod_param_doc(minus)}
    if isinstance(spec, MultiFactorSpec):
        return {"kind": "multifactor",
                "components": [param_doc(c) for c in spec.components]}
    raise ConfigError(f"unknown spec type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# simulation plumbing

def _simulate_paths(spec, sim):
    """(replicates, n) array of paths following the simulation block."""
    if sim.method == "exact":
        return simulate_exact_many(spec, sim.n, sim.seed, sim.replicates)
    if not isinstance(spec, FrmodSpec):
        raise ConfigError(f"method {sim.method!r} supports only the frmod kind")
    core = frmod_spec(spec.d, spec.lambda0, spec.q.q0, spec.q.q1)
    burn = arma_burn_in(spec.ar) if (spec.ar or spec.ma) else 0
    rows = []
    routine = simulate_truncated if sim.method == "truncated" else simulate_modulated
    for r in range(sim.replicates):
        s = routine(core, sim.n + burn, (sim.seed, r), sim.K)
        x = s.values
        if burn:
            x = apply_arma(x, spec.ar, spec.ma)[burn:]
        rows.append(x)
    meta = {"method": sim.method, "K": sim.K}
    if burn:
        meta["burn_in"] = burn
    return np.asarray(rows), meta


# ---------------------------------------------------------------------------
# subcommands

def cmd_params(args):
    config = load_config(args.config)
    _write_json(args.out, param_doc(config.spec))
    return 0


def cmd_acvf(args):
    config = load_config(args.config)
    hmax = args.hmax
    hs = np.arange(hmax + 1)
    gamma = np.asarray(model_acvf(config.spec, hs), dtype=float)
    header = ["h", "gamma_true"]
    cols = [hs, gamma]
    if args.with_sample:
        if config.simulation is None:
            raise ConfigError("--with-sample needs a simulation block in the config")
        sim = _override_sim(config.simulation, args)
        if sim.n <= hmax:
            raise ConfigError("simulation n must exceed hmax for the sample column")
        paths, _ = _simulate_paths(config.spec, sim)
        header.append("gamma_sample")
        cols.append(sample_acvf(paths[0], hmax).values)
    _write_table(args.out, header, cols, args.format)
    return 0


def _override_sim(sim, args):
    seed = args.seed if args.seed is not None else sim.seed
    reps = args.replicates if args.replicates is not None else sim.replicates
    return SimBlock(n=sim.n, seed=seed, method=sim.method, replicates=reps, K=sim.K)


def cmd_spectrum(args):
    config = load_config(args.config)
    points = args.points if args.points is not None else config.grid.points
    if points < 16:
        raise ConfigError(f"need at least 16 spectrum points, got {points}")
    excl = config.grid.exclusion
    header = ["lambda", "f_true"]
    if args.with_periodogram:
        if config.simulation is None:
            raise ConfigError("--with-periodogram needs a simulation block in the config")
        sim = _override_sim(config.simulation, args)
        paths, _ = _simulate_paths(config.spec, sim)
        ords = np.mean([periodogram(p).ordinates for p in paths], axis=0)
        lams = periodogram(paths[0]).frequencies
        keep = np.ones(len(lams), dtype=bool)
        for s, _, _ in singularities(config.spec):
            keep &= np.abs(lams - s) > excl
        lams, ords = lams[keep], ords[keep]
        cols = [lams, model_spectrum(config.spec, lams), ords]
        header.append("periodogram_mean")
    else:
        grid = spectrum_grid(config.spec, points=points, exclusion=excl)
        cols = [grid.lambdas, grid.values]
    _write_table(args.out, header, cols, args.format)
    return 0


def cmd_simulate(args):
    config = load_config(args.config)
    if config.simulation is None:
        raise ConfigError("simulate needs a simulation block in the config")
    sim = _override_sim(config.simulation, args)
    paths, meta = _simulate_paths(config.spec, sim)
    doc = {"seed": sim.seed, "n": sim.n, "replicates": sim.replicates, **meta}
    _write_table(args.out, ["n", "x"], [np.arange(sim.n), paths[0]], args.format)
    if args.out is not None:
        _write_json(Path(str(args.out) + ".meta.json"), doc)
    else:
        sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
    return 0


def cmd_demodulate(args):
    data = _read_csv_columns(args.input)
    if "x" not in data:
        raise ConfigError(f"input {args.input} has no column named 'x'")
    x = data["x"]
    if args.companion == "independent" and args.seed is None:
        raise ConfigError("companion=independent needs --seed")
    y1, y2 = rice_demodulate(x, args.lambda0, companion=args.companion,
                             seed=args.seed)
    resid = remodulate(y1, y2, args.lambda0) - x
    _write_table(args.out, ["n", "y1", "y2", "residual"],
                 [np.arange(len(x)), y1, y2, resid], args.format)
    probe = _pt_probe(y1, y2)
    probe["max_reconstruction_residual"] = float(np.abs(resid).max())
    if args.out is not None:
        _write_json(Path(str(args.out) + ".meta.json"), probe)
    else:
        sys.stderr.write(json.dumps(probe, sort_keys=True) + "\n")
    return 0


def _pt_probe(y1, y2, hmax=10):
    """Covariance-symmetry diagnostics of a demodulated pair."""
    g11 = sample_cross_acvf(y1, y1, hmax)
    g22 = sample_cross_acvf(y2, y2, hmax)
    g12 = sample_cross_acvf(y1, y2, hmax)
    g21 = sample_cross_acvf(y2, y1, hmax)
    scale = 0.5 * (g11[0] + g22[0])
    return {
        "lags": hmax,
        "diag_asymmetry": float(np.abs(g11 - g22).max() / scale),
        "cross_asymmetry": float(np.abs(g12 + g21).max() / scale),
    }


def _read_csv_columns(path):
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read CSV {path}: {exc}") from exc
    if raw.shape[1] != len(header):
        raise ConfigError(f"CSV {path}: header and rows disagree")
    return {name: raw[:, i] for i, name in enumerate(header)}


# ---------------------------------------------------------------------------
# figure bundles

def _figure1_spec():
    """Model whose spectral divergence constants are (6.2, 25.6).

    The memory parameter is recovered by solving for the d that makes the
    phase of that constant pair equal -0.42, then the q-pair is built from
    the phase-targeting construction.
    """
    from scipy.optimize import brentq

    s = SpecLimit(6.2, 25.6)
    d = brentq(lambda dd: speclimit_to_timelimit(s, dd).phi + 0.42,
               0.05, 0.45, xtol=1e-13)
    t = speclimit_to_timelimit(s, d)
    q = target_phase_to_q(t, d)
    return frmod_spec(d, math.pi / 4, q.q0, q.q1)


def figure_config(which, seed=None):
    """Built-in model configuration for figure `which` (1..6)."""
    if which == 1:
        spec = _figure1_spec()
    elif which == 2:
        f1 = _figure1_spec()
        spec = frmod_spec(f1.d, f1.lambda0, f1.q.q0, -f1.q.q1)
    elif which == 3:
        spec = frmod_spec(0.25, 2 * math.pi / 3, 1.0, 1.0)
    elif which == 4:
        spec = frmod_spec(0.35, math.pi / 4, 1.0, -1.45)
    elif which == 5:
        spec = frmod_spec(0.4, math.pi / 4, boundary_q0(0.4, 3.0, -1), 3.0)
    elif which == 6:
        spec = frmod_spec(0.4, math.pi / 4, boundary_q0(0.4, 3.0, +1), 3.0)
    else:
        raise ConfigError(f"figure must be 1..7, got {which}")
    sim = SimBlock(n=4096, seed=(100 + which) if seed is None else seed,
                   method="exact", replicates=64)
    return spec, sim


def _spec_to_raw(spec):
    if isinstance(spec, FrmodSpec):
        return {"kind": "frmod", "d": spec.d, "lambda0": spec.lambda0,
                "q0": spec.q.q0, "q1": spec.q.q1,
                "ar": list(spec.ar), "ma": list(spec.ma)}
    if isinstance(spec, AsymSpec):
        return {"kind": "asym", "lambda0": spec.lambda0,
                "d_plus": spec.d_plus, "d_minus": spec.d_minus,
                "q1_plus": spec.q1_plus, "q1_minus": spec.q1_minus}
    return {"kind": "multifactor",
            "components": [_spec_to_raw(c) for c in spec.components]}


def _panel_figure_bundle(which, outdir, seed):
    spec, sim = figure_config(which, seed)
    outdir.mkdir(parents=True, exist_ok=True)
    paths, meta = _simulate_paths(spec, sim)
    x = paths[0]

    series_path = outdir / "series.csv"
    _write_table(series_path, ["n", "x"], [np.arange(sim.n), x], "csv")

    hmax = 60
    hs = np.arange(hmax + 1)
    acvf_path = outdir / "acvf.csv"
    _write_table(acvf_path, ["h", "gamma_true", "gamma_sample"],
                 [hs, np.asarray(model_acvf(spec, hs)),
                  sample_acvf(x, hmax).values], "csv")

    ords = np.mean([periodogram(p).ordinates for p in paths], axis=0)
    lams = periodogram(x).frequencies
    keep = np.abs(lams - spec.lambda0) > DEFAULT_EXCLUSION
    lams, ords = lams[keep], ords[keep]
    spectrum_path = outdir / "spectrum.csv"
    _write_table(spectrum_path, ["lambda", "f_true", "periodogram_mean"],
                 [lams, model_spectrum(spec, lams), ords], "csv")

    params = param_doc(spec)
    boundary_side = None
    if abs(params["cf_minus"]) < 1e-12 * params["cf_plus"]:
        boundary_side = "+"
    elif abs(params["cf_plus"]) < 1e-12 * params["cf_minus"]:
        boundary_side = "-"
    manifest = {
        "figure": which,
        "seed": sim.seed,
        "config": {**_spec_to_raw(spec),
                   "simulation": {"n": sim.n, "seed": sim.seed,
                                  "method": sim.method,
                                  "replicates": sim.replicates}},
        "params": params,
        "boundary_side": boundary_side,
        "simulation_meta": meta,
        "files": [{"role": "series", "path": series_path.name},
                  {"role": "acvf", "path": acvf_path.name},
                  {"role": "spectrum", "path": spectrum_path.name}],
    }
    _write_json(outdir / "manifest.json", manifest)
    return 0


def _phi_curve_files(outdir, label, q0, ds, npts=401, q1_span=5.0):
    """One q1-phi CSV per d at fixed q0; monotone on the admissible range."""
    curves = []
    for d in ds:
        grid = np.linspace(-q1_span, q1_span, npts)
        rows = phi_curve(d, q0, grid)
        q1_bound = q0 * (1.0 + math.cos(math.pi * d)) / math.sin(math.pi * d)
        inside = np.abs(rows[:, 0]) <= q1_bound
        dphi = np.diff(rows[inside, 1])
        if not np.all(dphi > 0):
            raise QuadratureFailureError(
                f"phi curve for d={d}, q0={q0} is not monotone on the admissible range")
        path = outdir / f"phi_curve_{label}_d{int(round(d * 100)):03d}.csv"
        _write_table(path, ["q1", "phi"], [rows[:, 0], rows[:, 1]], "csv")
        lo, hi = admissible_interval(d)
        curves.append({"d": d, "q0": q0, "path": path.name,
                       "bound": [lo, hi], "q1_admissible": q1_bound})
    return curves


def _phi_figure_bundle(outdir):
    outdir.mkdir(parents=True, exist_ok=True)
    panels = [
        {"role": "phi_curve_by_d", "q0": 1.0,
         "curves": _phi_curve_files(outdir, "bydq0-1", 1.0, FIGURE_PHI_CURVE_DS)},
        {"role": "phi_curve_by_q0", "d": 0.25, "curves": []},
        {"role": "phi_curve_by_q0", "d": 0.4, "curves": []},
    ]
    for panel, d in ((panels[1], 0.25), (panels[2], 0.4)):
        for q0 in (0.5, 1.0, 2.0):
            panel["curves"].extend(
                _phi_curve_files(outdir, f"byq0-{q0:g}".replace(".", "p"), q0, (d,)))
    files = [{"role": p["role"], "path": c["path"]}
             for p in panels for c in p["curves"]]
    manifest = {"figure": 7, "seed": None, "config": {"q1_span": 5.0},
                "panels": panels, "files": files}
    _write_json(outdir / "manifest.json", manifest)
    return 0


def cmd_figure(args):
    if args.out is None:
        raise ConfigError("figure needs --out DIR")
    outdir = Path(args.out)
    if args.which == 7:
        return _phi_figure_bundle(outdir)
    return _panel_figure_bundle(args.which, outdir, args.seed)


# ---------------------------------------------------------------------------
# entry point

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON model configuration")
    common.add_argument("--out", type=Path, help="output path (default stdout)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--replicates", type=int, help="override config replicates")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = argparse.ArgumentParser(
        prog="frmod",
        description="Cyclical long-memory models: parameters, autocovariances, "
                    "spectra, simulation, figure bundles, demodulation.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("params", parents=[common],
                        help="report all limiting parameterizations")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("acvf", parents=[common], help="autocovariances as CSV")
    sp.add_argument("--hmax", type=int, default=60)
    sp.add_argument("--with-sample", action="store_true")
    sp.set_defaults(func=cmd_acvf)

    sp = sub.add_parser("spectrum", parents=[common], help="spectral density as CSV")
    sp.add_argument("--points", type=int)
    sp.add_argument("--with-periodogram", action="store_true")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("simulate", parents=[common], help="simulate one path")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("figure", parents=[common],
                        help="write a reproducible figure data bundle")
    sp.add_argument("which", type=int, choices=range(1, 8))
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("demodulate", parents=[common],
                        help="recover the driver pair from a series CSV")
    sp.add_argument("input", type=Path)
    sp.add_argument("--lambda0", type=float, required=True)
    sp.add_argument("--companion", default="hilbert",
                    choices=("hilbert", "independent"))
    sp.set_defaults(func=cmd_demodulate)
    return p


CONFIG_ERRORS = (ConfigError, DomainError, InadmissiblePhaseError,
                 InfeasibleLimitError, InvalidPolynomialError, SingularityError)
NUMERIC_ERRORS = (NotPositiveDefiniteError, QuadratureFailureError,
                  FloatingPointError, np.linalg.LinAlgError)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
