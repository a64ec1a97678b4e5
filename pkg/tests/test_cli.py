"""CLI tests: config validation, presets, output formats, exit codes."""

import json

import numpy as np
import pytest

from nearscat.cli import PRESETS, main, run, validate_config
from nearscat.errors import ConfigError
from nearscat.fields import read_field_csv


def small_music_config():
    return {
        "mode": "born-music",
        "k": 1.0,
        "sensors": {"count": 16, "radius": 1.0},
        "scatterers": [
            {
                "shape": {"type": "disk", "center": [-0.5, 0.5], "radius": 0.2},
                "index": {"kind": "constant", "value": [5.0, 0.0]},
            }
        ],
        "rule_order": 8,
        "grid": {"bounds": [-0.9, 0.9, -0.9, 0.9], "nx": 21, "ny": 21},
        "noise": {"delta": 0.0, "seed": 0},
        "rank_override": None,
    }


def small_disk_config():
    return {
        "mode": "disk-fm",
        "k": 1.0,
        "disk_medium": {"a": [0.5, 0.0], "n": [5.0, 0.0]},
        "regime": "nonabsorbing",
        "truncation": 10,
        "quad_points": 32,
        "grid": {"bounds": [-1.8, 1.8, -1.8, 1.8], "nx": 15, "ny": 15},
        "filter": None,
    }


def test_presets_cover_all_figures():
    assert set(PRESETS) == {f"figure{i}" for i in range(1, 8)}


def test_validate_rejects_unknown_keys():
    cfg = small_music_config()
    cfg["mystery"] = 1
    with pytest.raises(ConfigError):
        validate_config(cfg)


def test_validate_rejects_unknown_mode():
    with pytest.raises(ConfigError):
        validate_config({"mode": "nope"})


def test_validate_rejects_underresolved_truncation():
    cfg = small_disk_config()
    cfg["truncation"] = 40
    with pytest.raises(ConfigError):
        validate_config(cfg)


def test_run_born_music_outputs(tmp_path):
    result = run(config=small_music_config(), out_dir=tmp_path)
    assert result["rank"] >= 1
    assert (tmp_path / "field.csv").exists()
    assert (tmp_path / "field.pgm").exists()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["mode"] == "born-music"
    assert "wall_time_s" in manifest


def test_run_disk_writes_companion(tmp_path):
    run(config=small_disk_config(), out_dir=tmp_path)
    assert (tmp_path / "field.csv").exists()
    assert (tmp_path / "mlsm.csv").exists()
    assert (tmp_path / "mlsm.pgm").exists()


def test_run_unknown_preset():
    with pytest.raises(ConfigError):
        run(preset="figure99")


def test_run_requires_config_or_preset():
    with pytest.raises(ConfigError):
        run()


def test_determinism_byte_identical(tmp_path):
    run(config=small_music_config(), out_dir=tmp_path / "a")
    run(config=small_music_config(), out_dir=tmp_path / "b")
    assert (tmp_path / "a" / "field.csv").read_bytes() == (
        tmp_path / "b" / "field.csv"
    ).read_bytes()


def test_csv_full_precision_roundtrip(tmp_path):
    run(config=small_disk_config(), out_dir=tmp_path)
    data = read_field_csv(tmp_path / "field.csv")
    assert data.shape == (225, 3)
    assert np.all(np.isfinite(data))


def validate_pgm(path):
    tokens = path.read_text().split()
    assert tokens[0] == "P2"
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    pixels = [int(t) for t in tokens[4:]]
    assert len(pixels) == w * h
    assert all(0 <= p <= maxval for p in pixels)
    assert maxval == 255


def test_pgm_grammar(tmp_path):
    run(config=small_disk_config(), out_dir=tmp_path)
    validate_pgm(tmp_path / "field.pgm")
    validate_pgm(tmp_path / "mlsm.pgm")


# ---------------------------------------------------------------------------
# process-level interface


def test_main_success(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(small_disk_config()))
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["retained_modes"] >= 1


def test_main_config_error_exit_2(tmp_path, capsys):
    cfg_dict = small_disk_config()
    cfg_dict["truncation"] = 40
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(cfg_dict))
    code = main(["run", "--config", str(cfg)])
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "config"


def test_main_numerical_error_exit_3(tmp_path, capsys):
    cfg_dict = small_disk_config()
    # a numerically exact resonance of the m = 0 series denominator
    cfg_dict["disk_medium"] = {"a": [1.0, 0.0], "n": [1.2522593555094796, -1.625069365435874]}
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(cfg_dict))
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert code == 3
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "numerical"


def test_main_unreadable_config(tmp_path, capsys):
    cfg = tmp_path / "nope.json"
    code = main(["run", "--config", str(cfg)])
    assert code == 2


def test_preset_with_seed_override(tmp_path):
    run(preset="figure1", out_dir=tmp_path / "a", seed=9)
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["config"]["noise"]["seed"] == 9
