"""Experiment configuration: a flat ``key = value`` format with optional sections.

Example::

    # one section per experiment run; the section label names the
    # experiment unless a ``name`` key overrides it
    [oval-verify]
    grid_n = 256
    t_start = -2
    t_end = -0.2
    control.lambda = 1.0
    tol.l_inf_err = 1e-6

Keys outside any section configure a single experiment and must include
``name``.  ``control.*`` entries go to the solver/experiment control map,
``tol.*`` entries override pass/fail tolerances.

Defaults
--------
=====================  ========  ====================
experiment             grid_n    (t_start, t_end)
=====================  ========  ====================
circle-verify          256       (-1, -0.1)
oval-verify            256       (-2, -0.2)
lyapunov-monotone      256       (-2, -0.2)
I-functional-zero      256       (-10, -0.1)
normalized-rate        128       (0, 3)       tau
backward-limit         256       (-15, -5)
classify               256       (-3, -1)
grayson-convexify      128       (0, 1)       points
sturm-monotone         128       (0, 1)       points
tac-monotone           128       (0, 0.3)     points
grim-reaper-soliton    400       (0, 0.1)     points
=====================  ========  ====================

``output_dir`` defaults to ``csf_lab_out``.
"""

import os
from dataclasses import dataclass, field

from .errors import ConfigInvalid, UnknownExperiment

DEFAULT_OUTPUT_DIR = "csf_lab_out"

DEFAULTS = {
    "circle-verify": (256, (-1.0, -0.1)),
    "oval-verify": (256, (-2.0, -0.2)),
    "lyapunov-monotone": (256, (-2.0, -0.2)),
    "I-functional-zero": (256, (-10.0, -0.1)),
    "normalized-rate": (128, (0.0, 3.0)),
    "backward-limit": (256, (-15.0, -5.0)),
    "classify": (256, (-3.0, -1.0)),
    "grayson-convexify": (128, (0.0, 1.0)),
    "sturm-monotone": (128, (0.0, 1.0)),
    "tac-monotone": (128, (0.0, 0.3)),
    "grim-reaper-soliton": (400, (0.0, 0.1)),
}


@dataclass
class ExperimentConfig:
    name: str
    grid_n: int
    time_window: tuple
    controls: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    output_dir: str = DEFAULT_OUTPUT_DIR
    label: str = ""

    def __post_init__(self):
        if not self.label:
            self.label = self.name

    def control(self, key, default=None):
        return self.controls.get(key, default)

    def tol(self, key, default):
        return float(self.tolerances.get(key, default))


def _value(text):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _build(label, entries, section_line):
    name = entries.get("name", (label, section_line))[0]
    if not name:
        raise ConfigInvalid("experiment name missing", line=section_line, field="name")
    if name not in DEFAULTS:
        raise UnknownExperiment(f"unknown experiment {name!r}")
    grid_n, (t_start, t_end) = DEFAULTS[name]
    out = DEFAULT_OUTPUT_DIR
    controls, tols = {}, {}
    for key, (raw, line) in entries.items():
        if key == "name":
            continue
        try:
            if key == "grid_n":
                grid_n = int(raw)
            elif key == "t_start":
                t_start = float(raw)
            elif key == "t_end":
                t_end = float(raw)
            elif key == "output_dir":
                out = raw
            elif key.startswith("control."):
                controls[key[len("control."):]] = _value(raw)
            elif key.startswith("tol."):
                tols[key[len("tol."):]] = float(raw)
            else:
                raise ConfigInvalid("unknown key", line=line, field=key)
        except ValueError as exc:
            if isinstance(exc, ConfigInvalid):
                raise
            raise ConfigInvalid(f"bad value {raw!r}", line=line, field=key) from None
    if grid_n < 64 or grid_n % 2:
        line = entries.get("grid_n", (None, section_line))[1]
        raise ConfigInvalid(f"grid_n must be even and >= 64, got {grid_n}",
                            line=line, field="grid_n")
    if not t_start < t_end:
        line = entries.get("t_end", entries.get("t_start", (None, section_line)))[1]
        raise ConfigInvalid(f"t_start ({t_start}) must be < t_end ({t_end})",
                            line=line, field="t_start")
    return ExperimentConfig(name, grid_n, (t_start, t_end), controls, tols, out, label)


def _read_source(source):
    if isinstance(source, os.PathLike) or (
            "\n" not in source and "=" not in source and os.path.isfile(source)):
        with open(source) as fh:
            return fh.read()
    return source


def parse_configs(source):
    """Parse config text (or a path to it) into fully defaulted ExperimentConfigs."""
    text = _read_source(source)
    sections = []
    current = None
    top = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]") or len(line) < 3:
                raise ConfigInvalid("malformed section header", line=lineno)
            current = (line[1:-1].strip(), {}, lineno)
            sections.append(current)
            continue
        if "=" not in line:
            raise ConfigInvalid("expected 'key = value'", line=lineno)
        key, val = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigInvalid("empty key", line=lineno)
        target = top if current is None else current[1]
        if key in target:
            raise ConfigInvalid("duplicate key", line=lineno, field=key)
        target[key] = (val, lineno)
    configs = []
    if top:
        if "name" not in top:
            if sections:
                # top-level keys act as defaults for every section
                for _, entries, _ in sections:
                    for k, v in top.items():
                        entries.setdefault(k, v)
            else:
                raise ConfigInvalid("no experiment named", line=1, field="name")
        else:
            configs.append(_build(top["name"][0], top, 1))
    for label, entries, lineno in sections:
        configs.append(_build(label, entries, lineno))
    if not configs:
        raise ConfigInvalid("config names no experiment")
    labels = [c.label for c in configs]
    if len(set(labels)) != len(labels):
        raise ConfigInvalid("duplicate section label")
    return configs


def parse_config(source):
    """Parse text (or a path) describing exactly one experiment."""
    configs = parse_configs(source)
    if len(configs) != 1:
        raise ConfigInvalid(f"expected one experiment, found {len(configs)}")
    return configs[0]
