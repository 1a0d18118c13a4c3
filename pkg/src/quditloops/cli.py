"""Command-line entry point: lattice facts, Monte-Carlo scans, fits, twirl checks.

Data goes to files or stdout; progress and warnings go to stderr. Exit code 2
means an invalid configuration, 3 an I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import model
from .errors import ResourceError
from .lattice import CodeShape, build, lattice_summary
from .metrics import ExperimentRecord, aggregate
from .runner import default_workers, run_point, run_samples

EXIT_CONFIG = 2
EXIT_IO = 3

CSV_HEADER = (
    "n_h", "n_v", "p", "n_samples", "seed",
    "p_loop_edge_mean", "p_loop_edge_std", "p_loop_edge_stderr",
    "p_ntw_mean", "p_ntw_std", "L_max_mean", "L_max_std", "N_max_mean", "N_max_std",
    "zero_error_skipped",
    "model_eq3", "model_eq3_powerlaw", "model_eq3_sixloop", "model_pntw",
)
SAMPLE_HEADER = ("sample_index", "n_err", "n_loop_qudits", "has_loop", "L_max", "N_max")


class ConfigError(Exception):
    pass


# ----------------------------------------------------------------------------
# formatting

def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.9g" % float(v)


def record_row(rec: ExperimentRecord) -> dict:
    n_h, n_v, p = rec.n_h, rec.n_v, rec.p
    with warnings.catch_warnings():
        # clamping above threshold is expected in scans; the value still is 1
        warnings.simplefilter("ignore", model.ModelWarning)
        models = (
            model.p_loop_edge_eq3(n_h, n_v, p),
            model.p_loop_edge_corrected(n_h, n_v, p, "powerlaw"),
            model.p_loop_edge_corrected(n_h, n_v, p, "sixloop"),
            model.p_not_pauli_twirled(n_h, n_v, p),
        )
    values = (
        n_h, n_v, float(p), rec.n_samples, rec.seed,
        rec.p_loop_edge.mean, rec.p_loop_edge.std, rec.p_loop_edge.stderr,
        rec.p_ntw.mean, rec.p_ntw.std, rec.L_max.mean, rec.L_max.std,
        rec.N_max.mean, rec.N_max.std, rec.zero_error_skipped, *models,
    )
    return dict(zip(CSV_HEADER, values))


def _json_value(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    v = float(fmt(v))
    return None if math.isnan(v) else v


def json_summary(rows: list, meta: dict) -> str:
    body = {"columns": list(CSV_HEADER), "meta": meta,
            "rows": [{k: _json_value(r[k]) for k in CSV_HEADER} for r in rows]}
    return json.dumps(body, indent=2, sort_keys=False) + "\n"


class RowSink:
    """Append-and-flush CSV writer with an optional JSON mirror written at close."""

    def __init__(self, out, fmt_name: str, meta: dict):
        self.fmt = fmt_name
        self.meta = meta
        self.rows: list = []
        self.path = Path(out) if out not in (None, "-") else None
        if self.path is None:
            self.fh = sys.stdout
        else:
            self.fh = open(self.path, "w", newline="")
        self.writer = csv.writer(self.fh, lineterminator="\n")
        if self.fmt == "csv":
            self.writer.writerow(CSV_HEADER)
            self.fh.flush()

    def add(self, row: dict):
        self.rows.append(row)
        if self.fmt == "csv":
            self.writer.writerow([fmt(row[k]) for k in CSV_HEADER])
            self.fh.flush()

    def close(self):
        if self.fmt == "json":
            self.fh.write(json_summary(self.rows, self.meta))
        elif self.path is not None:
            self.path.with_suffix(".json").write_text(json_summary(self.rows, self.meta))
        self.fh.flush()
        if self.path is not None:
            self.fh.close()


# ----------------------------------------------------------------------------
# configuration

def read_config(path) -> dict:
    """Plain ``key=value`` lines; ``#`` starts a comment; keys use dashes or underscores."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _int_list(text) -> list:
    if isinstance(text, list):
        return text
    return [int(t) for t in str(text).replace(";", ",").split(",") if t.strip()]


def _float_list(text) -> list:
    """Comma list, or ``start:stop:step`` with an inclusive stop."""
    if isinstance(text, list):
        return text
    text = str(text).strip()
    if ":" in text:
        start, stop, step = (float(t) for t in text.split(":"))
        if step <= 0:
            raise ConfigError("p-grid step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]


_CONVERT = {
    "nh": int, "nv": int, "perimeter": int, "samples": int, "seed": int, "workers": int,
    "d": int, "p": float, "theta": float, "unitary_seed": int,
    "max_qudits": int, "max_dimension": int,
    "sizes": _int_list, "p_grid": _float_list,
}

DEFAULTS = {
    "samples": 2000, "seed": 0, "workers": 1, "format": "csv", "out": None,
    "d": 2, "theta": math.pi / 4, "unitary_seed": 0, "unitary": None,
    "max_qudits": 8, "max_dimension": 1 << 20,
}


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge config-file values under command-line flags, then defaults."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    merged = vars(args).copy()
    for key, raw in cfg.items():
        if key not in merged:
            raise ConfigError(f"unknown config key {key!r} for '{args.command}'")
        if merged[key] is None:
            try:
                merged[key] = _CONVERT.get(key, str)(raw)
            except ValueError as exc:
                raise ConfigError(f"config key {key}: {exc}") from exc
    for key, value in DEFAULTS.items():
        if key in merged and merged[key] is None:
            merged[key] = value
    if "workers" in merged and merged["workers"] == 0:
        merged["workers"] = default_workers()
    return argparse.Namespace(**merged)


def _need(ns, *keys):
    missing = [k for k in keys if getattr(ns, k, None) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise ConfigError(f"'{ns.command}' requires {flags}")


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"p must lie in [0, 1], got {p}")


def _check_run(ns):
    if ns.samples < 1:
        raise ConfigError("--samples must be positive")
    if ns.workers < 1:
        raise ConfigError("--workers must be positive (0 means all cores)")
    if ns.format not in ("csv", "json"):
        raise ConfigError(f"unknown format {ns.format!r}")


# ----------------------------------------------------------------------------
# subcommands

def _progress(label):
    last = [0.0]

    def report(done, total):
        now = time.monotonic()
        if done == total or now - last[0] > 2.0:
            last[0] = now
            print(f"[{label}] {done}/{total}", file=sys.stderr, flush=True)

    return report


def grid_points(ns) -> list:
    """``(n_h, n_v, p)`` triples of a scan, in emission order."""
    if ns.mode == "symmetric":
        _need(ns, "sizes", "p_grid")
        return [(n, n + 1, p) for n in ns.sizes for p in ns.p_grid]
    if ns.mode == "aspect":
        _need(ns, "perimeter")
        ps = ns.p_grid if ns.p_grid is not None else ([ns.p] if ns.p is not None else None)
        if ps is None:
            raise ConfigError("'scan aspect' requires --p or --p-grid")
        sizes = ns.sizes if ns.sizes is not None else list(range(2, ns.perimeter - 1))
        for n_h in sizes:
            if not 2 <= n_h <= ns.perimeter - 2:
                raise ConfigError(f"n_h={n_h} incompatible with perimeter {ns.perimeter}")
        return [(n_h, ns.perimeter - n_h, p) for n_h in sizes for p in ps]
    _need(ns, "nh", "nv", "p_grid")
    return [(ns.nh, ns.nv, p) for p in ns.p_grid]


def _run_grid(ns, points):
    _check_run(ns)
    for n_h, n_v, p in points:
        CodeShape(n_h, n_v)
        _check_p(p)
    meta = {"command": ns.command, "mode": getattr(ns, "mode", None),
            "samples": ns.samples, "seed": ns.seed}
    sink = RowSink(ns.out, ns.format, meta)
    try:
        lattice = None
        for k, (n_h, n_v, p) in enumerate(points):
            if lattice is None or (lattice.shape.n_h, lattice.shape.n_v) != (n_h, n_v):
                lattice = build((n_h, n_v))
            label = f"{k + 1}/{len(points)} n_h={n_h} n_v={n_v} p={p:g}"
            rec = run_point((n_h, n_v), p, ns.samples, ns.seed, ns.workers, lattice,
                            _progress(label))
            sink.add(record_row(rec))
    finally:
        sink.close()
    return 0


def cmd_lattice_info(ns):
    _need(ns, "nh", "nv")
    info = lattice_summary(build((ns.nh, ns.nv)))
    if ns.format == "json":
        print(json.dumps(info, indent=2))
    else:
        for k, v in info.items():
            print(f"{k}={v}")
    return 0


def cmd_sample(ns):
    _need(ns, "nh", "nv", "p")
    _check_run(ns)
    _check_p(ns.p)
    if ns.records is None:
        return _run_grid(ns, [(ns.nh, ns.nv, ns.p)])
    lattice = build((ns.nh, ns.nv))
    recs = run_samples((ns.nh, ns.nv), ns.p, ns.samples, ns.seed, ns.workers, lattice,
                       _progress(f"n_h={ns.nh} n_v={ns.nv} p={ns.p:g}"))
    with open(ns.records, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SAMPLE_HEADER)
        for r in recs:
            w.writerow([fmt(getattr(r, k)) for k in SAMPLE_HEADER])
    meta = {"command": "sample", "samples": ns.samples, "seed": ns.seed}
    sink = RowSink(ns.out, ns.format, meta)
    try:
        sink.add(record_row(aggregate(recs, ns.nh, ns.nv, ns.p, ns.seed)))
    finally:
        sink.close()
    return 0


def cmd_scan(ns):
    return _run_grid(ns, grid_points(ns))


def read_fit_points(path, subtract_boundary: bool):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    col = "p_loop_edge" if "p_loop_edge" in rows[0] else "p_loop_edge_mean"
    if col not in rows[0] or "p" not in rows[0]:
        raise ConfigError(f"{path}: need columns p and p_loop_edge (or p_loop_edge_mean)")
    pts = []
    for r in rows:
        p, y = float(r["p"]), float(r[col])
        if subtract_boundary:
            if "n_h" not in r or "n_v" not in r:
                raise ConfigError("--subtract-boundary needs n_h and n_v columns")
            y -= model.boundary_term(int(r["n_h"]), int(r["n_v"]), p)
        pts.append((p, y))
    return pts


def cmd_fit(ns):
    res = model.loglog_fit(read_fit_points(ns.input, ns.subtract_boundary))
    print(f"slope={fmt(res.slope)}")
    print(f"intercept={fmt(res.intercept)}")
    print(f"coefficient={fmt(res.coefficient)}")
    print(f"rss={fmt(res.rss)}")
    print(f"n_points={res.n_points}")
    return 0


def syndrome_key(s) -> str:
    return "-".join(str(int(v)) for v in s)


def cmd_twirl_verify(ns):
    from .graph import betti, build_subgraph
    from .sampling import read_pattern_file
    from .twirl import (
        ErrorModel, builtin_unitary, coherent_distribution, dense_oracle, expand_error,
        kernel_and_windings, pta_distribution, read_matrix_file, syndrome_map,
        total_variation,
    )
    from .twirl.dense import ORACLE_SHAPES

    _need(ns, "nh", "nv", "pattern")
    if (ns.unitary is None) == (ns.matrix is None):
        raise ConfigError("give exactly one of --unitary and --matrix")
    u = (read_matrix_file(ns.matrix) if ns.matrix is not None
         else builtin_unitary(ns.unitary, ns.d, ns.theta, ns.unitary_seed))
    em = ErrorModel.from_matrix(u)
    lattice = build((ns.nh, ns.nv))
    pattern = read_pattern_file(lattice, ns.pattern)
    expansion = expand_error(pattern, em, max_qudits=ns.max_qudits)
    smap = syndrome_map(lattice, pattern, em.d)
    coh = coherent_distribution(expansion, smap)
    pta = pta_distribution(expansion, smap)
    b1 = sum(betti(build_subgraph(lattice, pattern, s)) for s in ("primal", "dual"))
    print(f"n_h={ns.nh}")
    print(f"n_v={ns.nv}")
    print(f"d={em.d}")
    print(f"qudits={pattern.to_line()}")
    print(f"b1={b1}")
    print(f"kernel_size={kernel_and_windings(smap).size}")
    print(f"forest={'true' if b1 == 0 else 'false'}")
    for name, dist in (("coherent", coh), ("pta", pta)):
        for key in sorted(dist):
            print(f"{name}.{syndrome_key(key)}={fmt(dist[key])}")
    print(f"tv_distance={fmt(total_variation(coh, pta))}")
    if ns.oracle:
        if (ns.nh, ns.nv) not in ORACLE_SHAPES:
            raise ConfigError(f"--oracle supports shapes {ORACLE_SHAPES}")
        dense = dense_oracle((ns.nh, ns.nv), em, pattern, ns.max_dimension)
        for key in sorted(dense):
            print(f"oracle.{syndrome_key(key)}={fmt(dense[key])}")
        print(f"oracle_tv_distance={fmt(total_variation(dense, coh))}")
    return 0


# ----------------------------------------------------------------------------
# parser

def _add_shape(p):
    p.add_argument("--nh", type=int, help="horizontal size n_h")
    p.add_argument("--nv", type=int, help="vertical size n_v")


def _add_run(p):
    p.add_argument("--samples", type=int, help="samples per grid point (default 2000)")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--workers", type=int, help="worker processes; 0 uses all cores (default 1)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"),
                   help="csv (with a .json summary next to --out) or json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quditloops", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags take precedence")

    p = sub.add_parser("lattice-info", parents=[common], help="shape, qudits, checks, loops")
    _add_shape(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_lattice_info)

    p = sub.add_parser("sample", parents=[common], help="Monte-Carlo at a single point")
    _add_shape(p)
    p.add_argument("--p", type=float, help="per-qudit error probability")
    p.add_argument("--records", help="also write per-sample records to this CSV")
    _add_run(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("scan", parents=[common], help="grid of Monte-Carlo points")
    p.add_argument("mode", choices=("symmetric", "aspect", "p"))
    _add_shape(p)
    p.add_argument("--sizes", type=_int_list, help="n_h list; symmetric uses n_v = n_h + 1")
    p.add_argument("--perimeter", type=int, help="fixed n_h + n_v for the aspect scan")
    p.add_argument("--p", type=float, help="single p (aspect scan)")
    p.add_argument("--p-grid", dest="p_grid", type=_float_list,
                   help="comma list or start:stop:step (inclusive)")
    _add_run(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fit", parents=[common], help="log-log fit of p_loop_edge against p")
    p.add_argument("input", help="CSV with columns p and p_loop_edge (or a scan CSV)")
    p.add_argument("--subtract-boundary", action="store_true",
                   help="subtract the shape-dependent boundary term first")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("twirl-verify", parents=[common],
                       help="coherent vs twirled syndrome distributions of one pattern")
    _add_shape(p)
    p.add_argument("--d", type=int, help="qudit dimension for built-in unitaries (default 2)")
    p.add_argument("--pattern", help="file with one line of comma-separated qudit indices")
    p.add_argument("--unitary", choices=("identity", "shift", "phase", "clock-rotation", "random"))
    p.add_argument("--matrix", help="unitary as rows of comma-separated re,im pairs")
    p.add_argument("--theta", type=float, help="clock-rotation angle (default pi/4)")
    p.add_argument("--unitary-seed", dest="unitary_seed", type=int,
                   help="seed of the random unitary")
    p.add_argument("--max-qudits", dest="max_qudits", type=int, help="expansion limit (default 8)")
    p.add_argument("--oracle", action="store_true", help="also run the dense oracle")
    p.add_argument("--max-dimension", dest="max_dimension", type=int,
                   help="dense oracle state-size limit (default 2**20)")
    p.set_defaults(func=cmd_twirl_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        ns = resolve(args)
        return ns.func(ns)
    except (ConfigError, ValueError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
