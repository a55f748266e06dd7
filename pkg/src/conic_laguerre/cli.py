"""Command line driver: ``conic-laguerre run`` and ``conic-laguerre list-experiments``.

A run reads an INI file.  The optional ``[run]`` section holds ``seed``,
``threads`` and ``out``; every ``[experiment:NAME]`` section holds a ``kind``
plus parameter grids.  Each experiment writes ``NAME.csv``.  The run also
writes ``summary.json`` (deterministic) and ``timing.json`` (wall times).

Exit status: 0 when every row passes (including an empty grid), 1 when
some row fails, 2 for configuration or I/O errors.
"""
import argparse
import configparser
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .experiments import (
    BOOL_KEYS,
    INT_KEYS,
    KINDS,
    STR_KEYS,
    CaseResult,
    Row,
    expand_grid,
)

ENV_THREADS = "CONIC_LAGUERRE_THREADS"
SCHEMA = "conic-laguerre-summary/1"


class ConfigError(ValueError):
    """Raised for anything wrong with a run configuration."""


# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------

@dataclass
class Experiment:
    name: str
    kind: str
    params: dict


@dataclass
class RunConfig:
    experiments: list
    seed: int = 0
    threads: int = 1
    out: str = "conic-laguerre-out"


def _number(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def _split(text, sep=","):
    return [part.strip() for part in text.split(sep) if part.strip()]


def _int_list(text):
    """Comma list of integers; ``a..b`` expands to the inclusive range."""
    out = []
    for part in _split(text):
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _parse_value(kind, key, text):
    spec = KINDS[kind]
    try:
        if key == "kappa":
            return [tuple(float(v) for v in _split(vec)) for vec in _split(text, ";")]
        if key in STR_KEYS:
            vals = _split(text)
            return vals if key in spec.grid else vals[0]
        if key in BOOL_KEYS:
            low = text.strip().lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise ConfigError(f"{key} must be a boolean")
            return low in ("true", "yes", "1")
        if isinstance(spec.defaults.get(key), list):
            if key in INT_KEYS or key == "ns":
                return _int_list(text)
            return [float(_number(v)) for v in _split(text)]
        if key in INT_KEYS:
            return int(text)
        return float(_number(text))
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {exc}") from None


def _validate(name, kind, params):
    p = params
    for d in p.get("d", []):
        if d < 1:
            raise ConfigError(f"[{name}] d must be at least 1")
    for kap in p.get("kappa", []):
        if any(k <= -0.5 for k in kap):
            raise ConfigError(f"[{name}] kappa entries must exceed -1/2")
    for mu in p.get("mu", []):
        if mu <= -0.5:
            raise ConfigError(f"[{name}] mu must exceed -1/2")
    for key in ("n", "ns"):
        if any(v < 0 for v in p.get(key, [])):
            raise ConfigError(f"[{name}] {key} must be nonnegative")
    for r in p.get("r", []) if isinstance(p.get("r"), list) else [p.get("r", 0.0)]:
        if not 0 <= r < 1:
            raise ConfigError(f"[{name}] r must lie in [0, 1)")
    for key, val in p.items():
        if (key == "tol" or key.endswith("_tol")) and val < 0:
            raise ConfigError(f"[{name}] {key} must be nonnegative")
    for dom in p.get("domain", []):
        allowed = {
            "basis-validate": {"surface", "solid", "jacobi"},
            "kernel-compare": {"surface", "solid", "jacobi", "apex", "sphere"},
            "poisson-compare": {"surface", "solid", "mehler"},
            "translation-bounds": {"surface", "solid"},
            "cesaro-scan": {"surface", "solid"},
        }[kind]
        if dom not in allowed:
            raise ConfigError(f"[{name}] domain {dom!r} not one of {sorted(allowed)}")
    for target in p.get("target", []):
        if target not in ("basis", "norm", "kernel"):
            raise ConfigError(f"[{name}] unknown target {target!r}")


def parse_config(text):
    """Parse INI text into a :class:`RunConfig`."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    cfg = RunConfig([])
    if cp.has_section("run"):
        sec = cp["run"]
        unknown = set(sec) - {"seed", "threads", "out"}
        if unknown:
            raise ConfigError(f"unknown keys in [run]: {sorted(unknown)}")
        try:
            cfg.seed = int(sec.get("seed", "0"))
            cfg.threads = int(sec.get("threads", "1"))
        except ValueError as exc:
            raise ConfigError(f"[run]: {exc}") from None
        cfg.out = sec.get("out", cfg.out)
    for section in cp.sections():
        if section == "run":
            continue
        if not section.startswith("experiment:") or not section[len("experiment:"):].strip():
            raise ConfigError(f"unexpected section [{section}]")
        name = section[len("experiment:"):].strip()
        if not all(c.isalnum() or c in "-_." for c in name):
            raise ConfigError(f"experiment name {name!r} may only use letters, digits, '-', '_', '.'")
        sec = cp[section]
        kind = sec.get("kind", "").strip()
        if kind not in KINDS:
            raise ConfigError(f"[{section}] unknown or missing kind {kind!r}")
        params = {k: (list(v) if isinstance(v, list) else v) for k, v in KINDS[kind].defaults.items()}
        for key, text in sec.items():
            if key == "kind":
                continue
            if key not in params:
                raise ConfigError(f"[{section}] unknown key {key!r} for kind {kind}")
            params[key] = _parse_value(kind, key, text)
        _validate(section, kind, params)
        cfg.experiments.append(Experiment(name, kind, params))
    return cfg


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)


# ----------------------------------------------------------------------------
# running
# ----------------------------------------------------------------------------

@dataclass
class ExperimentReport:
    name: str
    kind: str
    columns: tuple
    rows: list = field(default_factory=list)
    fits: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    seconds: float = 0.0


def _run_case(kind, case, seed):
    rng = np.random.default_rng(seed)
    try:
        return KINDS[kind].func(case, rng)
    except Exception as exc:  # numeric failures become failed rows
        tol = case.get("tol", 0.0)
        row = Row(dict(case), math.nan, math.nan, math.nan, float(tol))
        return CaseResult([row], [{"error": f"{type(exc).__name__}: {exc}"}])


def run(cfg, threads=None):
    """Execute every experiment; rows come back in grid order."""
    threads = max(1, int(threads if threads is not None else cfg.threads))
    root = np.random.default_rng(cfg.seed)
    reports = []
    try:
        plans = [(exp, expand_grid(exp.kind, exp.params)) for exp in cfg.experiments]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for exp, cases in plans:
            seeds = root.integers(0, 2 ** 63 - 1, size=len(cases))
            start = time.perf_counter()
            results = list(pool.map(_run_case, [exp.kind] * len(cases), cases, seeds))
            rep = ExperimentReport(exp.name, exp.kind, KINDS[exp.kind].columns,
                                   seconds=time.perf_counter() - start)
            for res in results:
                rep.rows.extend(res.rows)
                for fit in res.fits:
                    (rep.errors if "error" in fit else rep.fits).append(fit)
            reports.append(rep)
    return reports


# ----------------------------------------------------------------------------
# output
# ----------------------------------------------------------------------------

def fmt(value):
    """Text form of a report cell; floats keep 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (tuple, list)):
        return ";".join(fmt(v) for v in value)
    return str(value)


def _max_error(rows):
    errs = [r.error for r in rows if np.isfinite(r.error)]
    return max(errs) if errs else None


def write_csv(rep, path):
    header = ["experiment", *rep.columns, "value", "reference", "rel_error", "pass"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rep.rows:
            w.writerow([rep.name, *(fmt(r.params.get(c, "")) for c in rep.columns),
                        fmt(r.value), fmt(r.reference), fmt(r.error), fmt(r.passed)])


def to_json(obj, indent=0):
    """JSON text with every float written to 17 significant digits (NaN and inf become null)."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(to_json(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in seq) + "\n" + end + "]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    return json.dumps(str(obj))


def summary(reports, seed):
    exps = []
    for rep in reports:
        passed = sum(r.passed for r in rep.rows)
        exps.append({
            "name": rep.name,
            "kind": rep.kind,
            "error_measure": KINDS[rep.kind].error,
            "rows": len(rep.rows),
            "passed": passed,
            "failed": len(rep.rows) - passed,
            "max_rel_error": _max_error(rep.rows),
            "fits": rep.fits,
            "errors": rep.errors,
        })
    rows = [r for rep in reports for r in rep.rows]
    passed = sum(r.passed for r in rows)
    return {
        "schema": SCHEMA,
        "seed": seed,
        "rows": len(rows),
        "passed": passed,
        "failed": len(rows) - passed,
        "all_passed": passed == len(rows),
        "max_rel_error": _max_error(rows),
        "experiments": exps,
    }


def emit(reports, out, seed):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for rep in reports:
        write_csv(rep, out / f"{rep.name}.csv")
    summ = summary(reports, seed)
    (out / "summary.json").write_text(to_json(summ) + "\n")
    timing = {rep.name: rep.seconds for rep in reports}
    (out / "timing.json").write_text(to_json(timing) + "\n")
    return summ


# ----------------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------------

def _threads(arg, cfg):
    if arg is not None:
        return arg
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{ENV_THREADS} must be an integer, got {env!r}") from None
    return cfg.threads


def list_experiments(stream=None):
    stream = sys.stdout if stream is None else stream
    for name, kind in KINDS.items():
        print(f"{name}: {kind.summary}", file=stream)
        print(f"    grid: {', '.join(kind.grid)}", file=stream)
        extra = [k for k in kind.defaults if k not in kind.grid]
        if extra:
            print(f"    settings: {', '.join(extra)}", file=stream)
        print(f"    error: {kind.error}", file=stream)


def build_parser():
    ap = argparse.ArgumentParser(prog="conic-laguerre",
                                 description="Laguerre expansions on cones: batch experiments")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the experiments of a config file")
    r.add_argument("--config", required=True, help="INI file with [experiment:NAME] sections")
    r.add_argument("--out", help="output directory (default from config)")
    r.add_argument("--threads", type=int, help=f"worker threads (fallback ${ENV_THREADS})")
    r.add_argument("--seed", type=int, help="random seed (default from config, else 0)")
    sub.add_parser("list-experiments", help="describe the experiment kinds")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list-experiments":
        list_experiments()
        return 0
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        threads = _threads(args.threads, cfg)
        if threads < 1:
            raise ConfigError("threads must be at least 1")
        reports = run(cfg, threads)
        summ = emit(reports, args.out or cfg.out, cfg.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 2
    for exp in summ["experiments"]:
        print(f"{exp['name']} ({exp['kind']}): {exp['passed']}/{exp['rows']} passed, "
              f"max error {fmt(exp['max_rel_error']) if exp['max_rel_error'] is not None else '-'}")
    return 0 if summ["all_passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
