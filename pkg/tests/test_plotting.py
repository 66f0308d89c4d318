import numpy as np

from slidefield.fields import PiecewiseField
from slidefield.geometry import flat_surface
from slidefield.integrator import IntegratorOptions, integrate
from slidefield.laws import FILIPPOV
from slidefield.plotting import render_series_figure, render_trajectory_figure
from slidefield.trajfile import attach_gaps, table_from_trajectory, write_plotdata

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def make_table(x0):
    pf = PiecewiseField(flat_surface(2),
                        lambda x: np.array([1.0, 1.5]),
                        lambda x: np.array([1.0, -0.5]))
    traj = integrate(pf, FILIPPOV, np.array(x0), 0.0,
                     IntegratorOptions(step=0.05, t_end=1.0))
    return attach_gaps(table_from_trajectory(traj, ("x1", "x2"), {}, 0), pf.surface)


def test_trajectory_figure_is_png(tmp_path):
    table = make_table([0.0, -1.0])  # hits and slides: shaded spans included
    path = tmp_path / "fig.png"
    render_trajectory_figure(table, path)
    assert path.read_bytes()[:8] == PNG_MAGIC


def test_trajectory_figure_without_sliding(tmp_path):
    table = make_table([0.0, -10.0])  # never reaches the surface
    assert set(table.modes) == {"1"}
    path = tmp_path / "fig.png"
    render_trajectory_figure(table, path)
    assert path.read_bytes()[:8] == PNG_MAGIC


def test_series_figure_is_png(tmp_path):
    table = make_table([0.0, -1.0])
    series = write_plotdata(table, ["x2"], tmp_path / "series.csv")
    path = tmp_path / "series.png"
    render_series_figure(series, path)
    assert path.read_bytes()[:8] == PNG_MAGIC
