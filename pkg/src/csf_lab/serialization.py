"""CSV and JSON formats for profiles, curves, trajectories and classifications.

Floats are written with ``repr`` (shortest round-trip decimal), so files
reload bit for bit and identical runs give identical bytes.  Run-dependent
data such as timestamps only ever go into manifest JSON, never into CSV.
"""

import csv
import datetime
import json
import os

import numpy as np

from .geometry import CURVATURE, PRESSURE, AngleGrid, CurvatureProfile, PlanarCurve


def _fmt(x):
    return repr(float(x))


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _read_rows(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = [[float(v) for v in row] for row in reader if row]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))


def write_profile_csv(profile, path):
    col = "p" if profile.representation == PRESSURE else "kappa"
    _write_rows(path, ["theta", col], zip(profile.theta, profile.values))


def read_profile_csv(path, time=0.0):
    header, data = _read_rows(path)
    if header[:1] != ["theta"] or len(header) != 2:
        raise ValueError(f"{path}: expected columns theta,p or theta,kappa")
    rep = PRESSURE if header[1] == "p" else CURVATURE
    return CurvatureProfile(AngleGrid(len(data)), data[:, 1], time, rep)


def profile_to_json(profile):
    return json.dumps({
        "n": profile.grid.n,
        "time": profile.time,
        "representation": profile.representation,
        "values": [float(v) for v in profile.values],
    })


def profile_from_json(text):
    d = json.loads(text)
    values = d["values"]
    if len(values) != d["n"]:
        raise ValueError("'n' does not match the number of values")
    return CurvatureProfile(AngleGrid(d["n"]), values, d.get("time", 0.0),
                            d.get("representation", PRESSURE))


def write_curve_csv(curve, path):
    _write_rows(path, ["x", "y"], curve.points)


def read_curve_csv(path, closed=True):
    header, data = _read_rows(path)
    if header != ["x", "y"]:
        raise ValueError(f"{path}: expected columns x,y")
    return PlanarCurve(data, closed)


def write_snapshots_csv(profiles, path):
    """Several pressure profiles in long format: time,theta,p."""
    rows = []
    for prof in profiles:
        for th, v in zip(prof.theta, prof.pressure):
            rows.append((prof.time, th, v))
    _write_rows(path, ["time", "theta", "p"], rows)


def read_snapshots_csv(path):
    header, data = _read_rows(path)
    if header != ["time", "theta", "p"]:
        raise ValueError(f"{path}: expected columns time,theta,p")
    profiles = []
    for t in np.unique(data[:, 0]):
        block = data[data[:, 0] == t]
        block = block[np.argsort(block[:, 1])]
        profiles.append(CurvatureProfile(AngleGrid(len(block)), block[:, 2], float(t)))
    return profiles


def dump_trajectory(trajectory, directory, prefix="", extra=None):
    """Write one CSV per diagnostic and per retained state, plus a manifest.

    Returns the list of written paths (manifest last).
    """
    os.makedirs(directory, exist_ok=True)
    files = []
    times = trajectory.times
    for name in sorted(trajectory.diagnostics):
        path = os.path.join(directory, f"{prefix}diag_{name}.csv")
        _write_rows(path, ["time", "value"], zip(times, trajectory.diagnostics[name]))
        files.append(path)
    for i, state in enumerate(trajectory.states):
        if hasattr(state, "curve"):
            path = os.path.join(directory, f"{prefix}curve_{i:04d}.csv")
            write_curve_csv(state.curve, path)
        else:
            path = os.path.join(directory, f"{prefix}profile_{i:04d}.csv")
            write_profile_csv(state.profile, path)
        files.append(path)
    manifest = {
        "frame": trajectory.frame,
        "status": trajectory.status,
        "grid_size": trajectory.metadata.get("n"),
        "controls": trajectory.metadata.get("controls", {}),
        "times": [float(t) for t in times],
        "files": [os.path.basename(f) for f in files],
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        manifest.update(extra)
    path = os.path.join(directory, f"{prefix}manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=_json_default)
    files.append(path)
    return files


def write_series_csv(path, header, columns):
    _write_rows(path, header, zip(*columns))


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)
