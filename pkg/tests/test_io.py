import numpy as np
import pytest

from nsfpen.io import (
    VTK_FIELDS,
    read_csv,
    read_diagnostics,
    read_vtk,
    write_csv,
    write_diagnostics,
    write_vtk,
)
from nsfpen.solver import DiagnosticsRecord


def _fields(N, seed=0):
    rng = np.random.default_rng(seed)
    data = {name: rng.standard_normal((N, N)) * 10.0 ** rng.integers(-20, 20) for name in VTK_FIELDS}
    data["mask"] = (rng.random((N, N)) < 0.5).astype(float)
    return data


def test_vtk_header(tmp_path):
    path = tmp_path / "f.vtk"
    write_vtk(path, 4, 0.01, _fields(4))
    lines = path.read_text().splitlines()
    assert lines[:8] == [
        "# vtk DataFile Version 3.0",
        "nsf-pen t=0.01",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        "DIMENSIONS 5 5 1",
        "ORIGIN -1 -1 0",
        "SPACING 0.5 0.5 1",
        "CELL_DATA 16",
    ]
    assert lines[8:10] == ["SCALARS rho double 1", "LOOKUP_TABLE default"]
    names = [ln.split()[1] for ln in lines if ln.startswith("SCALARS")]
    assert names == list(VTK_FIELDS)
    assert len(lines) == 8 + 5 * (2 + 16)


def test_vtk_x_fastest(tmp_path):
    N = 3
    data = {name: np.zeros((N, N)) for name in VTK_FIELDS}
    data["rho"] = np.arange(9.0).reshape(N, N)  # [i1, i2]
    write_vtk(tmp_path / "f.vtk", N, 0.0, data)
    values = [float(v) for v in (tmp_path / "f.vtk").read_text().splitlines()[10:19]]
    assert values[:3] == [0.0, 3.0, 6.0]  # i1 varies at fixed i2 = 0


def test_vtk_round_trip_bitwise(tmp_path):
    data = _fields(7, seed=3)
    write_vtk(tmp_path / "f.vtk", 7, 0.1 + 0.2, data)
    time, back = read_vtk(tmp_path / "f.vtk")
    assert time == 0.1 + 0.2
    for name in VTK_FIELDS:
        assert back[name].tobytes() == data[name].tobytes()


def test_vtk_shape_check(tmp_path):
    data = _fields(4)
    data["rho"] = np.zeros((3, 3))
    with pytest.raises(ValueError):
        write_vtk(tmp_path / "f.vtk", 4, 0.0, data)


def test_csv_round_trip(tmp_path):
    write_csv(tmp_path / "t.csv", ["a", "b", "c"], [[1, 0.1, "x"], [2, None, "failed"]])
    assert (tmp_path / "t.csv").read_text() == "a,b,c\n1,0.10000000000000001,x\n2,,failed\n"
    rows = read_csv(tmp_path / "t.csv")
    assert float(rows[0]["b"]) == 0.1 and rows[1]["b"] == ""


def test_diagnostics_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    series = [DiagnosticsRecord(i, *rng.standard_normal(11)) for i in range(5)]
    write_diagnostics(tmp_path / "d.csv", series)
    header = (tmp_path / "d.csv").read_text().splitlines()[0]
    assert header == ("step,time,total_mass,total_momentum_x,total_momentum_y,total_energy,"
                      "ballistic_energy,solid_kinetic,solid_theta_mismatch,advisory_adv,"
                      "advisory_diff,advisory_pen")
    assert read_diagnostics(tmp_path / "d.csv") == series
