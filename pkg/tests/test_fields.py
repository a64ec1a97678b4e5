"""Indicator-field container and CSV/PGM format tests."""

import numpy as np
import pytest

from nearscat.fields import (
    IndicatorField,
    local_maxima,
    read_field_csv,
    write_field_csv,
    write_field_pgm,
)
from nearscat.geometry import make_grid


def small_field():
    grid = make_grid((0.0, 1.0, 0.0, 1.0), 2, 2)
    return IndicatorField(grid=grid, values=np.array([0.0, 1.0, 2.0, 3.0]))


def test_as_image_row_major():
    fld = small_field()
    assert np.array_equal(fld.as_image(), [[0.0, 1.0], [2.0, 3.0]])


def test_argmax_point():
    fld = small_field()
    assert np.allclose(fld.argmax_point(), [1.0, 1.0])


def test_csv_roundtrip(tmp_path):
    grid = make_grid((-0.3, 0.7, 0.1, 0.9), 4, 3)
    rng = np.random.default_rng(40)
    fld = IndicatorField(grid=grid, values=rng.uniform(0, 5, 12))
    path = tmp_path / "field.csv"
    write_field_csv(fld, path)
    txt = path.read_text().splitlines()
    assert txt[0] == "x,y,value"
    back = read_field_csv(path)
    assert np.array_equal(back[:, 0], grid.points[:, 0])
    assert np.array_equal(back[:, 1], grid.points[:, 1])
    assert np.array_equal(back[:, 2], fld.values)


def test_pgm_linear_scale(tmp_path):
    fld = small_field()
    path = tmp_path / "f.pgm"
    write_field_pgm(fld, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "P2"
    assert lines[1] == "2 2"
    assert lines[2] == "255"
    pixels = [int(v) for row in lines[3:] for v in row.split()]
    assert pixels == [0, 85, 170, 255]


def test_pgm_constant_field_midgray(tmp_path):
    grid = make_grid((0, 1, 0, 1), 2, 2)
    fld = IndicatorField(grid=grid, values=np.full(4, 7.0))
    path = tmp_path / "c.pgm"
    write_field_pgm(fld, path)
    pixels = [int(v) for row in path.read_text().splitlines()[3:] for v in row.split()]
    assert pixels == [128, 128, 128, 128]


def test_local_maxima_ordering():
    grid = make_grid((0, 4, 0, 4), 5, 5)
    values = np.zeros(25)
    values[6] = 3.0  # (1, 1)
    values[18] = 5.0  # (3, 3)
    fld = IndicatorField(grid=grid, values=values)
    pts, vals = local_maxima(fld, top=2)
    assert np.allclose(vals, [5.0, 3.0])
    assert np.allclose(pts[0], [3.0, 3.0])
    assert np.allclose(pts[1], [1.0, 1.0])
