"""Configuration-driven experiment runner.

A run is described by a single JSON file (schema below, unknown keys
rejected), or by a named preset mirroring the standard experiment
configurations; `--config` on top of `--preset` applies overrides.

Outputs per run: field.csv + field.pgm + manifest.json (reconstruction
modes; disk modes additionally write the companion indicator), or
chain.csv + summary.json + manifest.json (bayes mode).  Exit codes:
0 success, 2 configuration error, 3 numerical error.
"""

import argparse
import copy
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bayes as bayes_mod
from . import disk as disk_mod
from .born import add_noise, assemble_multistatic
from .errors import ConfigError, NearscatError
from .fields import IndicatorField, write_field_csv, write_field_pgm
from .geometry import (
    Disk,
    Ellipse,
    Rectangle,
    ScattererSpec,
    constant_index,
    make_grid,
    make_sensor_array,
)
from .linalg import nsharp
from .music import build_music, music_field
from .sampling import FilterSpec, fm_field, make_picard_data, mlsm_field

# ---------------------------------------------------------------------------
# Presets: the standard experiment configurations at desk scale.

PRESETS = {
    "figure1": {
        "mode": "born-music",
        "k": 1.0,
        "sensors": {"count": 32, "radius": 1.0},
        "scatterers": [
            {
                "shape": {"type": "disk", "center": [-0.5, 0.5], "radius": 0.2},
                "index": {"kind": "constant", "value": [5.0, 0.0]},
            },
            {
                "shape": {"type": "ellipse", "center": [0.5, -0.5], "a": 0.2, "b": 0.1},
                "index": {"kind": "constant", "value": [5.0, 0.0]},
            },
        ],
        "rule_order": 16,
        "grid": {"bounds": [-0.9, 0.9, -0.9, 0.9], "nx": 101, "ny": 101},
        "noise": {"delta": 0.0, "seed": 7},
        "rank_override": None,
    },
    "figure2": {
        "mode": "born-music",
        "k": 1.0,
        "sensors": {"count": 32, "radius": 1.0},
        "scatterers": [
            {
                "shape": {"type": "ellipse", "center": [0.5, -0.5], "a": 0.2, "b": 0.1},
                "index": {"kind": "constant", "value": [2.0, 1.0]},
            }
        ],
        "rule_order": 16,
        "grid": {"bounds": [-0.9, 0.9, -0.9, 0.9], "nx": 101, "ny": 101},
        "noise": {"delta": 0.0, "seed": 7},
        "rank_override": None,
    },
    "figure3": {
        "mode": "born-music",
        "k": 1.0,
        "sensors": {"count": 32, "radius": 1.0},
        "scatterers": [
            {
                "shape": {
                    "type": "rectangle",
                    "corner_min": [-0.2, -0.2],
                    "corner_max": [0.2, 0.2],
                },
                "index": {"kind": "poly_x1", "coeffs": [2.0, 0.0, 1.0]},
            }
        ],
        "rule_order": 16,
        "grid": {"bounds": [-0.9, 0.9, -0.9, 0.9], "nx": 101, "ny": 101},
        "noise": {"delta": 0.0, "seed": 7},
        "rank_override": None,
    },
    "figure4": {
        "mode": "bayes",
        "k": 1.0,
        "sensors": {"count": 32, "radius": 1.0},
        "scatterers": [
            {
                "shape": {
                    "type": "rectangle",
                    "corner_min": [-0.2, -0.2],
                    "corner_max": [0.2, 0.2],
                },
                "index": {"kind": "poly_x1", "coeffs": [2.0, 0.0, 1.0]},
            }
        ],
        "rule_order": 16,
        "noise": {"delta": 0.15, "seed": 11},
        "bayes": {
            "support": {
                "type": "rectangle",
                "corner_min": [-0.2, -0.2],
                "corner_max": [0.2, 0.2],
            },
            "rule_order": 3,
            "h": None,
            "prior_sd": 1e5,
            "iterations": 20000,
            "burn_in": 5000,
            "thinning": 1,
            "seed": 101,
        },
    },
    "figure6": {
        "mode": "disk-fm",
        "k": 1.0,
        "disk_medium": {"a": [0.5, 0.0], "n": [5.0, 0.0]},
        "regime": "nonabsorbing",
        "truncation": 20,
        "quad_points": 64,
        "grid": {"bounds": [-1.8, 1.8, -1.8, 1.8], "nx": 101, "ny": 101},
        "filter": None,
    },
    "figure7": {
        "mode": "disk-fm",
        "k": 1.0,
        "disk_medium": {"a": [3.0, -1.0], "n": [0.25, 2.0]},
        "regime": "absorbing",
        "truncation": 20,
        "quad_points": 64,
        "grid": {"bounds": [-1.8, 1.8, -1.8, 1.8], "nx": 101, "ny": 101},
        "filter": None,
    },
}
PRESETS["figure5"] = copy.deepcopy(PRESETS["figure4"])
PRESETS["figure5"]["bayes"]["support"] = {
    "type": "rectangle",
    "corner_min": [-0.265, -0.265],
    "corner_max": [0.265, 0.265],
}


# ---------------------------------------------------------------------------
# Config parsing / validation


def _require_keys(d, allowed, context):
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {context}")


def _complex_of(v, context):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(v[0], v[1])
    raise ConfigError(f"{context}: expected number or [re, im], got {v!r}")


def _shape_of(d, context):
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigError(f"{context}: shape must be an object with a 'type'")
    t = d["type"]
    if t == "disk":
        _require_keys(d, {"type", "center", "radius"}, context)
        return Disk(center=tuple(d["center"]), radius=float(d["radius"]))
    if t == "ellipse":
        _require_keys(d, {"type", "center", "a", "b"}, context)
        return Ellipse(center=tuple(d["center"]), a=float(d["a"]), b=float(d["b"]))
    if t == "rectangle":
        _require_keys(d, {"type", "corner_min", "corner_max"}, context)
        return Rectangle(
            corner_min=tuple(d["corner_min"]), corner_max=tuple(d["corner_max"])
        )
    raise ConfigError(f"{context}: unknown shape type {t!r}")


def _index_of(d, context):
    _require_keys(d, {"kind", "value", "coeffs"}, context)
    kind = d.get("kind")
    if kind == "constant":
        n = _complex_of(d["value"], context)
        return constant_index(n)
    if kind == "poly_x1":
        coeffs = [float(c) for c in d["coeffs"]]

        def fn(x1, x2):
            out = np.zeros(np.broadcast(x1, x2).shape, dtype=complex)
            for p, c in enumerate(coeffs):
                out += c * np.asarray(x1) ** p
            return out

        return fn
    raise ConfigError(f"{context}: unknown index kind {kind!r}")


def _scatterers_of(cfg):
    specs = []
    for i, s in enumerate(cfg["scatterers"]):
        ctx = f"scatterers[{i}]"
        _require_keys(s, {"shape", "index", "epsilon_scale"}, ctx)
        specs.append(
            ScattererSpec(
                shape=_shape_of(s["shape"], ctx),
                index_fn=_index_of(s["index"], ctx),
                epsilon_scale=float(s.get("epsilon_scale", 1.0)),
            )
        )
    return specs


TOP_KEYS = {
    "mode",
    "k",
    "sensors",
    "scatterers",
    "rule_order",
    "grid",
    "noise",
    "rank_override",
    "disk_medium",
    "regime",
    "truncation",
    "quad_points",
    "filter",
    "bayes",
    "output_dir",
}


def validate_config(cfg):
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    _require_keys(cfg, TOP_KEYS, "config")
    mode = cfg.get("mode")
    if mode not in ("born-music", "disk-fm", "disk-mlsm", "bayes"):
        raise ConfigError(f"unknown mode {mode!r}")
    if mode in ("disk-fm", "disk-mlsm"):
        m = int(cfg.get("truncation", 20))
        q = int(cfg.get("quad_points", 64))
        if q < 2 * m + 2:
            raise ConfigError(
                f"quad_points = {q} cannot resolve truncation {m}; need >= {2 * m + 2}"
            )
    return cfg


# ---------------------------------------------------------------------------
# Runners


def _grid_of(cfg):
    g = cfg["grid"]
    _require_keys(g, {"bounds", "nx", "ny"}, "grid")
    return make_grid(tuple(g["bounds"]), int(g["nx"]), int(g["ny"]))


def export_field(fld, out_dir, stem="field"):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_field_csv(fld, out_dir / f"{stem}.csv")
    write_field_pgm(fld, out_dir / f"{stem}.pgm")


def _write_manifest(out_dir, cfg, t0):
    manifest = {
        "config": cfg,
        "git_describe": None,
        "wall_time_s": time.monotonic() - t0,
    }
    with open(Path(out_dir) / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


def _run_born_music(cfg, out_dir):
    sensors = make_sensor_array(cfg["sensors"]["count"], cfg["sensors"]["radius"])
    specs = _scatterers_of(cfg)
    k = float(cfg.get("k", 1.0))
    matrix = assemble_multistatic(specs, sensors, k, int(cfg.get("rule_order", 16)))
    noise = cfg.get("noise", {"delta": 0.0, "seed": 0})
    if noise.get("delta", 0.0) > 0.0:
        matrix = add_noise(matrix, float(noise["delta"]), int(noise["seed"]))
    model = build_music(matrix, rank_override=cfg.get("rank_override"))
    fld = music_field(model, _grid_of(cfg))
    export_field(fld, out_dir)
    return {"rank": model.rank}


def _run_disk(cfg, out_dir):
    dm = cfg["disk_medium"]
    _require_keys(dm, {"a", "n"}, "disk_medium")
    medium = disk_mod.DiskMedium(
        a=_complex_of(dm["a"], "disk_medium.a"),
        n=_complex_of(dm["n"], "disk_medium.n"),
        k=float(cfg.get("k", 1.0)),
    )
    m = int(cfg.get("truncation", 20))
    q = int(cfg.get("quad_points", 64))
    matrix = disk_mod.assemble_nearfield_matrix(medium, m, q)
    regime = cfg.get("regime", "nonabsorbing")
    data = make_picard_data(
        nsharp(matrix, regime), weight=2.0 * np.pi * disk_mod.SENSOR_RADIUS / q
    )
    sensors = make_sensor_array(q, disk_mod.SENSOR_RADIUS)
    grid = _grid_of(cfg)
    filt = None
    if cfg.get("filter"):
        fdict = cfg["filter"]
        _require_keys(fdict, {"kind", "eps", "a"}, "filter")
        filt = FilterSpec(
            kind=fdict["kind"], eps=float(fdict["eps"]),
            a=float(fdict["a"]) if fdict.get("a") is not None else None,
        )
    w_field = fm_field(data, sensors, medium.k, grid)
    p_field = mlsm_field(data, sensors, medium.k, grid, filt)
    primary, companion, stem = (
        (w_field, p_field, "mlsm") if cfg["mode"] == "disk-fm" else (p_field, w_field, "fm")
    )
    export_field(primary, out_dir)
    export_field(companion, out_dir, stem=stem)
    return {"retained_modes": int(data.size)}


def _run_bayes(cfg, out_dir):
    sensors = make_sensor_array(cfg["sensors"]["count"], cfg["sensors"]["radius"])
    specs = _scatterers_of(cfg)
    k = float(cfg.get("k", 1.0))
    noise = cfg.get("noise", {"delta": 0.15, "seed": 0})
    readings = bayes_mod.synthesize_readings(
        specs, sensors, k,
        noise_frac=float(noise["delta"]),
        seed=int(noise["seed"]),
        rule_order=int(cfg.get("rule_order", 16)),
    )
    bc = cfg["bayes"]
    _require_keys(
        bc,
        {"support", "rule_order", "h", "prior_sd", "iterations", "burn_in",
         "thinning", "seed", "proposal_sd_gamma", "proposal_sd_eta"},
        "bayes",
    )
    model = bayes_mod.make_bayes_model(
        _shape_of(bc["support"], "bayes.support"),
        k,
        rule_order=int(bc.get("rule_order", 3)),
        h=bc.get("h"),
        prior_sd=float(bc.get("prior_sd", 1e5)),
        proposal_sd_gamma=bc.get("proposal_sd_gamma"),
        proposal_sd_eta=bc.get("proposal_sd_eta"),
        iterations=int(bc.get("iterations", 20000)),
        burn_in=int(bc.get("burn_in", 5000)),
        thinning=int(bc.get("thinning", 1)),
        seed=int(bc.get("seed", 0)),
    )
    summary = bayes_mod.run_mh(model, readings)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ["iteration,gamma,log_post"]
    for it, (g, lp) in enumerate(zip(summary.chain_gamma, summary.chain_logpost)):
        lines.append(f"{it},{g:.17g},{lp:.17g}")
    (out_dir / "chain.csv").write_text("\n".join(lines) + "\n")
    stats = {
        "mean": summary.mean,
        "sd": summary.sd,
        "map": summary.map_estimate,
        "acceptance_rate": summary.acceptance_rate,
    }
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(stats, fh, indent=2)
        fh.write("\n")
    return stats


def run(config=None, preset=None, out_dir=None, seed=None):
    """Execute one experiment; returns a result dict.  Raises ConfigError /
    NearscatError on invalid input or numerical failure."""
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; have {sorted(PRESETS)}")
        cfg = copy.deepcopy(PRESETS[preset])
        if config:
            cfg.update(copy.deepcopy(config))
    elif config is not None:
        cfg = copy.deepcopy(config)
    else:
        raise ConfigError("either a config or a preset is required")
    if seed is not None:
        cfg.setdefault("noise", {"delta": 0.0})["seed"] = int(seed)
        if "bayes" in cfg:
            cfg["bayes"]["seed"] = int(seed)
    if out_dir is None:
        out_dir = cfg.get("output_dir", "out")
    validate_config(cfg)
    t0 = time.monotonic()
    mode = cfg["mode"]
    if mode == "born-music":
        result = _run_born_music(cfg, out_dir)
    elif mode in ("disk-fm", "disk-mlsm"):
        result = _run_disk(cfg, out_dir)
    else:
        result = _run_bayes(cfg, out_dir)
    _write_manifest(out_dir, cfg, t0)
    return result


def main(argv=None):
    parser = argparse.ArgumentParser(prog="nearscat")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run one experiment")
    runp.add_argument("--config", type=Path, default=None)
    runp.add_argument("--out", type=Path, default=None)
    runp.add_argument("--seed", type=int, default=None)
    runp.add_argument("--preset", type=str, default=None)
    args = parser.parse_args(argv)

    cfg = None
    if args.config is not None:
        try:
            cfg = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
            return 2
    try:
        result = run(config=cfg, preset=args.preset, out_dir=args.out, seed=args.seed)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except (NearscatError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(json.dumps({"error": "numerical", "message": str(exc)}), file=sys.stderr)
        return 3
    print(json.dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
