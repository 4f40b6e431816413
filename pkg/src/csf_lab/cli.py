"""Command line entry point ``csf-lab``.

::

    csf-lab run <config> [--jobs N] [--out DIR]
    csf-lab list
    csf-lab classify <snapshots.csv> [--tol TOL]

``run`` prints a JSON summary and exits 0 exactly when every experiment
passed.  ``classify`` prints the classification as JSON.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import config as config_mod
from .asymptotics import classify_ancient
from .errors import CSFLabError
from .experiments import REGISTRY, run_experiment
from .serialization import read_snapshots_csv


def _run_one(args):
    cfg, out = args
    return run_experiment(cfg, out)


def run_configs(configs, jobs=1, out=None):
    """Run experiments in config order, optionally in worker processes."""
    work = [(cfg, out) for cfg in configs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, work))
    return [_run_one(w) for w in work]


def _cmd_run(ns):
    configs = config_mod.parse_configs(ns.config)
    results = run_configs(configs, ns.jobs, ns.out)
    summary = {"pass": all(r["pass"] for r in results), "experiments": results}
    print(json.dumps(summary, indent=2))
    return 0 if summary["pass"] else 1


def _cmd_list(ns):
    for name in REGISTRY:
        grid_n, (t0, t1) = config_mod.DEFAULTS[name]
        print(f"{name:22s} grid_n={grid_n:<4d} window=({t0!r}, {t1!r})")
    return 0


def _cmd_classify(ns):
    result = classify_ancient(read_snapshots_csv(ns.snapshots), ns.tol)
    out = result.to_dict()
    out["details"] = result.details
    print(json.dumps(out, indent=2))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="csf-lab", description="Curve shortening flow experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the experiments named in a config file")
    p.add_argument("config", help="config file")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", default=None, help="output directory (overrides the config)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("list", help="list registered experiments and their defaults")
    p.set_defaults(func=_cmd_list)

    p = sub.add_parser("classify", help="classify pressure snapshots (time,theta,p CSV)")
    p.add_argument("snapshots")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=_cmd_classify)
    return parser


def main(argv=None):
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except (CSFLabError, OSError) as exc:
        print(f"csf-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
