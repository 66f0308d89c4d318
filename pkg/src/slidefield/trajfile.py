"""Trajectory CSV files, event logs, and plot-data extraction.

The CSV carries a comment header (config echo, package version, seed), a
column-name row ``t,<coords...>,mode,gap``, and one row per stored state.
Floats are written with 17 significant digits so a read-back reproduces the
binary values exactly; identical config and seed therefore give
byte-identical files.  Mode codes are ``1`` (free below), ``2`` (free
above), and ``S`` (sliding).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import __version__
from .integrator import EventKind, Mode, Trajectory

PLOT_MODE_LEVELS = {"S": 0, "1": 1, "2": 2}


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class TrajectoryTable:
    """Row-oriented view of a trajectory as stored on disk."""

    config: dict
    version: str
    seed: int
    labels: tuple
    times: np.ndarray
    states: np.ndarray
    modes: list
    gaps: np.ndarray

    def column(self, name: str) -> np.ndarray:
        if name == "t":
            return self.times
        if name == "gap":
            return self.gaps
        if name in self.labels:
            return self.states[:, self.labels.index(name)]
        raise KeyError(f"no column {name!r}; available: t, "
                       f"{', '.join(self.labels)}, mode, gap")


def table_from_trajectory(traj: Trajectory, labels, config: dict,
                          seed: int) -> TrajectoryTable:
    times, rows, modes, gaps = [], [], [], []
    for seg in traj.segments:
        for tt, xx in zip(seg.times, seg.states):
            times.append(float(tt))
            rows.append(np.asarray(xx, dtype=float))
            modes.append(seg.mode.value)
            gaps.append(0.0)
    n = len(labels)
    states = np.vstack(rows) if rows else np.zeros((0, n))
    return TrajectoryTable(config=config, version=__version__, seed=seed,
                           labels=tuple(labels), times=np.asarray(times),
                           states=states, modes=modes,
                           gaps=np.asarray(gaps))


def attach_gaps(table: TrajectoryTable, surface) -> TrajectoryTable:
    table.gaps = np.array([surface.gap(x) for x in table.states]) \
        if len(table.times) else np.zeros(0)
    return table


def write_trajectory_csv(table: TrajectoryTable, path) -> None:
    lines = [
        "# slidefield-trajectory",
        f"# version={table.version}",
        f"# seed={table.seed}",
        f"# config={canonical_json(table.config)}",
        ",".join(("t",) + table.labels + ("mode", "gap")),
    ]
    for i in range(len(table.times)):
        cells = [fmt(table.times[i])]
        cells += [fmt(v) for v in table.states[i]]
        cells.append(table.modes[i])
        cells.append(fmt(table.gaps[i]))
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> TrajectoryTable:
    meta = {}
    header = None
    times, rows, modes, gaps = [], [], [], []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value
                continue
            cells = line.split(",")
            if header is None:
                header = cells
                continue
            if len(cells) != len(header):
                raise ValueError(f"malformed row in {path}: {line!r}")
            times.append(float(cells[0]))
            rows.append([float(c) for c in cells[1:-2]])
            modes.append(cells[-2])
            gaps.append(float(cells[-1]))
    if header is None or len(header) < 3 or header[0] != "t" \
            or header[-2:] != ["mode", "gap"]:
        raise ValueError(f"{path} is not a trajectory CSV")
    labels = tuple(header[1:-2])
    config = json.loads(meta["config"]) if "config" in meta else {}
    seed = int(meta.get("seed", 0))
    states = np.asarray(rows, dtype=float) if rows else np.zeros((0, len(labels)))
    return TrajectoryTable(config=config, version=meta.get("version", ""),
                           seed=seed, labels=labels,
                           times=np.asarray(times, dtype=float), states=states,
                           modes=modes, gaps=np.asarray(gaps, dtype=float))


def validate_table(table: TrajectoryTable) -> None:
    """Sanity checks on a stored trajectory: time must move forward, equal
    stamps may only repeat across a mode change (segment boundary)."""
    t = table.times
    for i in range(1, len(t)):
        if t[i] < t[i - 1]:
            raise ValueError(f"time decreases at row {i}")
        if t[i] == t[i - 1] and table.modes[i] == table.modes[i - 1]:
            raise ValueError(f"duplicate time stamp inside a segment at row {i}")
    for code in table.modes:
        if code not in PLOT_MODE_LEVELS:
            raise ValueError(f"unknown mode code {code!r}")


def write_events_json(traj: Trajectory, config: dict, seed: int, path) -> None:
    events = []
    for ev in traj.events:
        a, b = (ev.normal_rates if ev.normal_rates is not None else (None, None))
        events.append({
            "time": float(ev.time),
            "state": [float(v) for v in ev.state],
            "kind": ev.kind.value,
            "lower_rate": None if a is None else float(a),
            "upper_rate": None if b is None else float(b),
        })
    final = None
    if traj.final_state is not None:
        final = {
            "time": traj.final_time,
            "state": [float(v) for v in traj.final_state],
            "mode": traj.final_mode.value if traj.final_mode else None,
        }
    payload = {
        "version": __version__,
        "seed": seed,
        "config": config,
        "events": events,
        "final": final,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_plotdata(table: TrajectoryTable, cols, path) -> list:
    """Write the selected coordinates plus the mode trace in a
    two-column-per-series layout ``t_<name>,<name>,...``; returns the series
    as (name, times, values) triples.  Mode levels: 0 sliding, 1 below, 2 above.
    """
    series = [(name, table.times, table.column(name)) for name in cols]
    levels = np.array([PLOT_MODE_LEVELS[m] for m in table.modes], dtype=float)
    series.append(("mode", table.times, levels))
    header = []
    for name, _, _ in series:
        header += [f"t_{name}", name]
    lines = ["# slidefield-plotdata",
             "# mode levels: 0=sliding 1=below 2=above",
             ",".join(header)]
    for i in range(len(table.times)):
        cells = []
        for _, tt, vv in series:
            cells += [fmt(tt[i]), fmt(vv[i])]
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return series
