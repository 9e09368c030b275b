"""Command line harness: snapshots, bases, bound sweeps, ROM runs and figure tables.

Every option can also be given in an INI file passed with ``--config``.
Options of the wave model live in a ``[model]`` section, the rest in a
section named after the subcommand; keys use underscores (``p_ovs``,
``q_pow``).  A flag on the command line always wins over the file.

Exit codes
----------
0 success, 2 bad arguments, 3 rank deficiency, 4 no singular-value gap,
5 bound assumption violated, 6 I/O or file-format error, 7 a factorization
did not converge, 8 structure violation.
"""
import argparse
import configparser
import logging
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

from . import io as rio
from . import wave2d
from .bounds import BoundReport, bound_report, optimal_tail, projection_error
from .errors import RandSympError, SnapshotFormatError
from .numerics import svd
from .sketching import SketchConfig, draw_sketch, srft_threshold
from .symplectic import METHODS, build_basis, check_structure, complexify

log = logging.getLogger("randsymp")

OUTPUT_ENV = "RANDSYMP_OUTPUT_DIR"
EXIT_ARGUMENT = 2
EXIT_IO = 6
THRESHOLD = "threshold"


class ArgumentError(Exception):
    """Invalid combination of options."""


# ---------------------------------------------------------------- options

def _bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _p_token(text):
    text = str(text).strip()
    if text == THRESHOLD:
        return THRESHOLD
    value = int(text)
    if value < 0:
        raise ValueError(f"p_ovs must be >= 0, got {value}")
    return value


def _split(text):
    return str(text).replace(",", " ").split()


# name -> (section, element type, is_list, default, help)
MODEL_OPTIONS = {
    "profile": ("model", str, False, "desk", "grid profile: desk (10x60 interior) or full (50x300 incl. boundary)"),
    "n_xi1": ("model", int, False, None, "grid count in xi1 (overrides the profile)"),
    "n_xi2": ("model", int, False, None, "grid count in xi2 (overrides the profile)"),
    "nt": ("model", int, False, None, "time steps per trajectory (overrides the profile)"),
    "counts_include_boundary": ("model", _bool, False, None, "grid counts include the two boundary nodes"),
    "L1": ("model", float, False, 0.5, "domain extent in xi1"),
    "L2": ("model", float, False, 3.0, "domain extent in xi2"),
    "u0_sup": ("model", float, False, 2.0, "bump width parameter"),
    "bump_center_offset": ("model", float, False, 3.0, "offset in the bump argument (centre = (u0_sup - offset)/2)"),
}

COMMAND_OPTIONS = {
    "snapshots": {
        "mu": (float, True, None, "parameter values (default 1.0, 1.1, ..., 2.0)"),
        "include_initial": (_bool, False, False, "store steps 0..nt-1 instead of 1..nt"),
        "output": (str, False, None, "snapshot file (default OUT/snapshots.bin)"),
        "jobs": (int, False, 1, "worker processes"),
    },
    "basis": {
        "snapshots": (str, False, None, "snapshot file (default OUT/snapshots.bin)"),
        "method": (str, False, "rcsvd", f"one of {', '.join(METHODS)}"),
        "k": (int, False, None, "number of symplectic pairs"),
        "p_ovs": (_p_token, False, 5, "oversampling, or 'threshold'"),
        "q_pow": (int, False, 0, "power iterations"),
        "kind": (str, False, "srft", "sketch kind: srft or gaussian"),
        "stabilize": (_bool, False, False, "re-orthonormalize between power iterations"),
        "seed": (int, False, None, "random seed (required for randomized methods)"),
        "repeat": (int, False, 5, "timing repetitions (median reported)"),
        "output": (str, False, None, "basis file (default derived from the parameters)"),
    },
    "bounds": {
        "snapshots": (str, False, None, "snapshot file (default OUT/snapshots.bin)"),
        "method": (str, False, "rcsvd", "rcsvd or rcsvd-real"),
        "k": (int, True, [10, 20, 40, 80, 160], "pair counts"),
        "p_ovs": (_p_token, True, [5, 20, THRESHOLD], "oversampling values or 'threshold'"),
        "q_pow": (int, True, [0, 2, 5], "power-iteration counts"),
        "seeds": (int, True, None, "random seeds, one row per seed"),
        "kind": (str, False, "srft", "sketch kind: srft or gaussian"),
        "stabilize": (_bool, False, False, "re-orthonormalize between power iterations"),
        "s": (int, False, 0, "block split for the advanced deterministic bound"),
        "repeat": (int, False, 1, "timing repetitions of the cSVD reference"),
        "jobs": (int, False, 1, "worker processes"),
    },
    "rom": {
        "basis": (str, False, None, "basis file"),
        "mu_test": (float, False, 1.5, "parameter of the test trajectory"),
        "output": (str, False, None, "CSV file (default OUT/rom_mu<mu>.csv)"),
    },
    "figures": {
        "results": (str, False, None, "directory with the sweep CSVs (default OUT)"),
        "figures_dir": (str, False, None, "output directory (default RESULTS/figures)"),
        "render": (_bool, False, False, "also draw PNG files (needs matplotlib)"),
    },
}

MODEL_COMMANDS = ("snapshots", "rom")


def _flag(name):
    return "--" + name.replace("_", "-")


def _add_option(parser, name, typ, is_list, help_text):
    if typ is _bool:
        parser.add_argument(_flag(name), dest=name, action="store_const", const=True,
                            default=None, help=help_text)
        return
    kwargs = {"dest": name, "default": None, "help": help_text, "type": typ}
    if is_list:
        kwargs["nargs"] = "+"
    parser.add_argument(_flag(name), **kwargs)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="randsymp",
        description="Randomized ortho-symplectic bases for Hamiltonian model reduction.",
    )
    parser.add_argument("--config", help="INI file with [model] and per-command sections")
    parser.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./results)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "snapshots": "integrate the wave model and store the snapshot matrix",
        "basis": "build and time one basis",
        "bounds": "sweep randomized bases, record errors, bounds and effectivities",
        "rom": "compare a reduced trajectory with the full one",
        "figures": "write plot tables from sweep results",
    }
    for cmd, opts in COMMAND_OPTIONS.items():
        p = sub.add_parser(cmd, help=helps[cmd], description=helps[cmd])
        if cmd in MODEL_COMMANDS:
            for name, (_, typ, is_list, _, h) in MODEL_OPTIONS.items():
                _add_option(p, name, typ, is_list, h)
        for name, (typ, is_list, _, h) in opts.items():
            _add_option(p, name, typ, is_list, h)
    return parser


def _convert(raw, typ, is_list):
    if is_list:
        return [typ(x) for x in _split(raw)]
    return typ(raw)


def resolve_options(args):
    """Merge flags, config file and defaults into a plain dict."""
    cp = configparser.ConfigParser()
    cp.optionxform = str
    if args.config:
        if not cp.read(args.config):
            raise SnapshotFormatError(f"cannot read config file {args.config}")
    table = {}
    if args.command in MODEL_COMMANDS:
        for name, (section, typ, is_list, default, _) in MODEL_OPTIONS.items():
            table[name] = (section, typ, is_list, default)
    for name, (typ, is_list, default, _) in COMMAND_OPTIONS[args.command].items():
        table[name] = (args.command, typ, is_list, default)
    opts = {}
    for name, (section, typ, is_list, default) in table.items():
        value = getattr(args, name, None)
        if value is None and cp.has_option(section, name):
            try:
                value = _convert(cp.get(section, name), typ, is_list)
            except ValueError as exc:
                raise ArgumentError(f"config [{section}] {name}: {exc}") from exc
        opts[name] = default if value is None else value
    out = args.out or (cp.get("paths", "out") if cp.has_option("paths", "out") else None)
    opts["out"] = Path(out or os.environ.get(OUTPUT_ENV) or "results")
    return opts


def model_config(opts):
    if opts["profile"] not in ("desk", "full"):
        raise ArgumentError(f"unknown profile {opts['profile']!r}")
    base = wave2d.WaveModelConfig.full() if opts["profile"] == "full" else wave2d.WaveModelConfig.desk()
    over = {k: opts[k] for k in ("n_xi1", "n_xi2", "nt", "counts_include_boundary",
                                  "L1", "L2", "u0_sup", "bump_center_offset") if opts[k] is not None}
    return replace(base, **over)


def resolve_p(token, k, n_s):
    """Oversampling for ``token``; ``None`` if the threshold is undefined."""
    if token != THRESHOLD:
        return token
    if k < 2 or n_s < k:
        return None
    return max(srft_threshold(k, n_s) - k, 0)


# ---------------------------------------------------------------- snapshots

def _snapshot_block(args):
    cfg, mu, include_initial = args
    return wave2d.snapshot_block(cfg, mu, include_initial)


def _pool_map(fn, items, jobs, initializer=None, initargs=()):
    if jobs <= 1:
        if initializer is not None:
            initializer(*initargs)
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs, initializer=initializer, initargs=initargs) as ex:
        return list(ex.map(fn, items))


def cmd_snapshots(opts):
    cfg = model_config(opts)
    mus = opts["mu"] or wave2d.mu_values()
    if any(m <= 0 for m in mus):
        raise ArgumentError("parameter values must be positive")
    output = Path(opts["output"] or opts["out"] / "snapshots.bin")
    log.info("integrating %d trajectories, 2N=%d, nt=%d", len(mus), 2 * cfg.N, cfg.nt)
    blocks = _pool_map(_snapshot_block, [(cfg, m, opts["include_initial"]) for m in mus], opts["jobs"])
    X = np.hstack(blocks)
    rio.write_matrix(output, X)
    meta = {"format_version": rio.VERSION, "rows": X.shape[0], "cols": X.shape[1]}
    meta.update({f.name: getattr(cfg, f.name) for f in fields(cfg)})
    meta.update(wave2d.grid_size_summary(cfg))
    meta.update({"mu": mus, "include_initial": opts["include_initial"]})
    rio.write_sidecar(rio.sidecar_path(output), meta)
    print(f"snapshots={output} rows={X.shape[0]} cols={X.shape[1]}")
    return 0


# ---------------------------------------------------------------- basis

def _sketch_config(opts, k, p, q, seed):
    return SketchConfig(k=k, p_ovs=p, q_pow=q, kind=opts["kind"],
                        stabilize=opts["stabilize"], seed=seed, s=opts.get("s", 0))


def _timed_basis(Xs, method, cfg):
    t0 = time.perf_counter()
    V = build_basis(Xs, method, cfg=cfg)
    return V, time.perf_counter() - t0


def cmd_basis(opts):
    method = opts["method"]
    if method not in METHODS:
        raise ArgumentError(f"unknown method {method!r}; expected one of {METHODS}")
    if opts["k"] is None:
        raise ArgumentError("--k is required")
    randomized = method != "csvd"
    if randomized and opts["seed"] is None:
        raise ArgumentError(f"--seed is required for method {method}")
    if opts["repeat"] < 1:
        raise ArgumentError("--repeat must be >= 1")
    snap = Path(opts["snapshots"] or opts["out"] / "snapshots.bin")
    Xs = rio.read_snapshots(snap)
    k = opts["k"]
    p = resolve_p(opts["p_ovs"], k, Xs.n_s)
    if p is None:
        raise ArgumentError(f"threshold oversampling undefined for k={k}")
    seed = opts["seed"] if randomized else 0
    cfg = _sketch_config(opts, k, p, opts["q_pow"], seed)
    times = []
    for _ in range(opts["repeat"]):
        V, dt = _timed_basis(Xs, method, cfg)
        times.append(dt)
    tag = f"basis_{method}_k{k}" + (f"_p{p}_q{cfg.q_pow}_seed{seed}" if randomized else "")
    output = Path(opts["output"] or opts["out"] / f"{tag}.bin")
    rio.write_basis(output, V)
    tol = 1e-10 * np.sqrt(2 * k)
    structure = check_structure(V, tol)
    err = projection_error(Xs, V)
    meta = {"method": method, "k": k, "p_ovs": p if randomized else "", "q_pow": cfg.q_pow if randomized else "",
            "kind": cfg.kind if randomized else "", "stabilize": cfg.stabilize, "seed": seed if randomized else "",
            "snapshots": str(snap), "rows": 2 * V.N, "cols": V.k, "repeat": opts["repeat"],
            "time_median_s": statistics.median(times), "times_s": times,
            "e_proj_sq": err["squared"], "e_proj_frob": err["frob"],
            "orthonormality_defect": structure["orthonormality_defect"],
            "symplecticity_defect": structure["symplecticity_defect"]}
    rio.write_sidecar(rio.sidecar_path(output), meta)
    print(f"basis={output} e_proj_sq={err['squared']!r} time_median_s={meta['time_median_s']:.6g} "
          f"structure={'pass' if structure['pass'] else 'FAIL'}")
    return 0


# ---------------------------------------------------------------- bounds

ROW_COLUMNS = (
    ["k", "p_label", "p_ovs", "q_pow", "s", "seed", "method", "kind", "stabilize", "status", "time_s"]
    + [f.name for f in fields(BoundReport) if f.name not in ("k", "p_ovs", "q_pow", "s", "seed")]
    + ["assumption_violation"]
)
MEAN_FIELDS = [
    "time_s", "e_proj_sq", "e_proj_frob", "tail",
    "eta_det", "eta_det_adv", "eta_det_adv_sharp", "eta_prob", "eta_prob_adv", "eta_prob_adv_sharp",
    "eff_det", "eff_det_adv", "eff_det_adv_sharp", "eff_prob", "eff_prob_adv", "eff_prob_adv_sharp",
]
MEAN_COLUMNS = ["k", "p_label", "p_ovs", "q_pow", "n_ok", "n_rows"] + MEAN_FIELDS
CSVD_COLUMNS = ["k", "status", "e_proj_sq", "e_proj_frob", "tail", "time_s"]

_WORKER = {}


def _init_worker(snapshot_path):
    Xs = rio.read_snapshots(snapshot_path)
    _WORKER["Xs"] = Xs
    _WORKER["factors"] = svd(complexify(Xs))


def _bounds_cell(cell):
    opts, k, p_label, q, seed = cell
    Xs, factors = _WORKER["Xs"], _WORKER["factors"]
    row = {"k": k, "p_label": p_label, "q_pow": q, "s": opts["s"], "seed": seed,
           "method": opts["method"], "kind": opts["kind"], "stabilize": opts["stabilize"],
           "assumption_violation": False}
    p = resolve_p(p_label, k, Xs.n_s)
    row["p_ovs"] = p
    if p is None or k > Xs.N or k + p > Xs.n_s or opts["s"] > p:
        row["status"] = "infeasible"
        return row
    cfg = _sketch_config(opts, k, p, q, seed)
    try:
        t0 = time.perf_counter()
        omega = draw_sketch(cfg, Xs.n_s)
        V = build_basis(Xs, opts["method"], cfg=cfg, omega=omega)
        row["time_s"] = time.perf_counter() - t0
        rep = bound_report(Xs, V, omega, cfg, factors=factors)
    except RandSympError as exc:
        row["status"] = type(exc).__name__
        log.warning("k=%d p=%s q=%d seed=%d: %s", k, p_label, q, seed, exc)
        return row
    row.update(rep.as_row())
    row["status"] = "ok"
    row["assumption_violation"] = bool(rep.violations)
    return row


def _csvd_cell(cell):
    k, repeat = cell
    Xs, factors = _WORKER["Xs"], _WORKER["factors"]
    row = {"k": k}
    if k > min(Xs.N, Xs.n_s):
        row["status"] = "infeasible"
        return row
    try:
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            V = build_basis(Xs, "csvd", k=k)
            times.append(time.perf_counter() - t0)
    except RandSympError as exc:
        row["status"] = type(exc).__name__
        return row
    err = projection_error(Xs, V)
    tail = optimal_tail(factors.sigma, k)
    row.update({"status": "ok", "e_proj_sq": err["squared"], "e_proj_frob": err["frob"],
                "tail": tail, "time_s": statistics.median(times)})
    return row


def _p_sort_key(label):
    return (1, 0) if label == THRESHOLD else (0, int(label))


def aggregate(rows):
    """Per-(k, p, q) means over the rows with status ``ok``."""
    groups = {}
    for row in rows:
        key = (int(row["k"]), str(row["p_label"]), int(row["q_pow"]))
        groups.setdefault(key, []).append(row)
    out = []
    for key in sorted(groups, key=lambda t: (t[0], _p_sort_key(t[1]), t[2])):
        members = groups[key]
        ok = [r for r in members if r.get("status") == "ok"]
        agg = {"k": key[0], "p_label": key[1], "q_pow": key[2],
               "p_ovs": members[0].get("p_ovs"), "n_ok": len(ok), "n_rows": len(members)}
        for name in MEAN_FIELDS:
            vals = [float(r[name]) for r in ok if r.get(name) not in (None, "")]
            agg[name] = float(np.mean(vals)) if vals else None
        out.append(agg)
    return out


def cmd_bounds(opts):
    if not opts["seeds"]:
        raise ArgumentError("--seeds is required")
    if opts["method"] not in ("rcsvd", "rcsvd-real"):
        raise ArgumentError("bounds sweeps need method rcsvd or rcsvd-real")
    if opts["jobs"] < 1 or opts["repeat"] < 1:
        raise ArgumentError("--jobs and --repeat must be >= 1")
    snap = Path(opts["snapshots"] or opts["out"] / "snapshots.bin")
    if not snap.exists():
        raise SnapshotFormatError(f"snapshot file {snap} not found")
    ks, ps, qs, seeds = opts["k"], opts["p_ovs"], opts["q_pow"], opts["seeds"]
    cells = [(opts, k, p, q, seed) for k in ks for p in ps for q in qs for seed in seeds]
    log.info("bounds sweep: %d cells", len(cells))
    rows = _pool_map(_bounds_cell, cells, opts["jobs"], _init_worker, (str(snap),))
    csvd_rows = _pool_map(_csvd_cell, [(k, opts["repeat"]) for k in ks], 1, _init_worker, (str(snap),))
    out = opts["out"]
    rio.write_csv(out / "bounds.csv", ROW_COLUMNS, rows)
    rio.write_csv(out / "bounds_mean.csv", MEAN_COLUMNS, aggregate(rows))
    rio.write_csv(out / "csvd.csv", CSVD_COLUMNS, csvd_rows)
    n_ok = sum(r["status"] == "ok" for r in rows)
    print(f"bounds={out / 'bounds.csv'} rows={len(rows)} ok={n_ok}")
    return 0


# ---------------------------------------------------------------- rom

ROM_COLUMNS = ["step", "time", "state_error", "relative_error", "hamiltonian_fom", "hamiltonian_rom"]


def cmd_rom(opts):
    if not opts["basis"]:
        raise ArgumentError("--basis is required")
    V = rio.read_basis(opts["basis"])
    cfg = replace(model_config(opts), c=opts["mu_test"])
    if V.N != cfg.N:
        raise ArgumentError(f"basis has N={V.N}, model has N={cfg.N}")
    full = wave2d.build_system(cfg)
    x0 = wave2d.initial_state(cfg)
    fom = wave2d.implicit_midpoint(full, x0, 0.0, cfg.t_end, cfg.nt)
    red = wave2d.reduce(full, V)
    rom = wave2d.implicit_midpoint(red, wave2d.reduce_state(V, x0), 0.0, cfg.t_end, cfg.nt)
    lifted = V.assemble() @ rom.states
    err = np.linalg.norm(fom.states - lifted, axis=0)
    scale = np.linalg.norm(fom.states, axis=0)
    rel = np.divide(err, scale, out=np.zeros_like(err), where=scale > 0)
    rows = [{"step": n, "time": float(fom.times[n]), "state_error": float(err[n]),
             "relative_error": float(rel[n]), "hamiltonian_fom": float(fom.hamiltonian_trace[n]),
             "hamiltonian_rom": float(rom.hamiltonian_trace[n])} for n in range(len(err))]
    output = Path(opts["output"] or opts["out"] / f"rom_mu{opts['mu_test']:g}.csv")
    rio.write_csv(output, ROM_COLUMNS, rows)
    print(f"rom={output} max_state_error={err.max():.6e} rom_energy_drift={rom.relative_drift():.3e} "
          f"fom_energy_drift={fom.relative_drift():.3e}")
    return 0


# ---------------------------------------------------------------- figures

def _num(text):
    return rio.parse_float(text) if text is not None else None


def _fmt(v):
    return "nan" if v is None else repr(float(v))


def _table(header, rows):
    lines = [" ".join(header)]
    lines += [" ".join(str(c) if i == 0 else _fmt(c) for i, c in enumerate(r)) for r in rows]
    return "\n".join(lines) + "\n"


def figure_tables(mean_rows, csvd_rows):
    """Whitespace tables keyed by file name.

    ``fig1`` projection errors, ``fig2`` runtimes, ``fig3`` deterministic and
    ``fig4`` probabilistic effectivities; one file per power-iteration count.
    """
    csvd = {int(r["k"]): r for r in csvd_rows}
    ks = sorted({int(r["k"]) for r in mean_rows} | set(csvd))
    qs = sorted({int(r["q_pow"]) for r in mean_rows})
    ps = sorted({r["p_label"] for r in mean_rows}, key=_p_sort_key)
    cell = {(int(r["k"]), r["p_label"], int(r["q_pow"])): r for r in mean_rows}

    def val(k, p, q, name):
        r = cell.get((k, p, q))
        return _num(r.get(name)) if r else None

    def csvd_val(k, name):
        r = csvd.get(k)
        return _num(r.get(name)) if r else None

    tables = {}
    for q in qs:
        tables[f"fig1_errors_q{q}.dat"] = _table(
            ["k", "csvd"] + [f"rcsvd_p{p}" for p in ps],
            [[k, csvd_val(k, "e_proj_sq")] + [val(k, p, q, "e_proj_sq") for p in ps] for k in ks])
        tables[f"fig2_runtimes_q{q}.dat"] = _table(
            ["k", "csvd"] + [f"rcsvd_p{p}" for p in ps],
            [[k, csvd_val(k, "time_s")] + [val(k, p, q, "time_s") for p in ps] for k in ks])
        for fig, pair in (("fig3_eff_det", ("eff_det", "eff_det_adv")),
                          ("fig4_eff_prob", ("eff_prob", "eff_prob_adv"))):
            header = ["k"] + [f"{name}_p{p}" for p in ps for name in pair]
            rows = [[k] + [val(k, p, q, name) for p in ps for name in pair] for k in ks]
            tables[f"{fig}_q{q}.dat"] = _table(header, rows)
    return tables


def cmd_figures(opts):
    results = Path(opts["results"] or opts["out"])
    needed = [results / "bounds_mean.csv", results / "csvd.csv"]
    missing = [str(p) for p in needed if not p.is_file()]
    if missing:
        raise SnapshotFormatError("missing inputs: " + ", ".join(missing))
    mean_rows = rio.read_csv(needed[0])
    csvd_rows = rio.read_csv(needed[1])
    if not mean_rows:
        raise SnapshotFormatError(f"{needed[0]} has no data rows")
    tables = figure_tables(mean_rows, csvd_rows)
    fig_dir = Path(opts["figures_dir"] or results / "figures")
    images = {}
    if opts["render"]:
        from .plotting import render_tables  # optional matplotlib dependency

        images = render_tables(tables)
    for name, text in tables.items():
        rio.atomic_write_text(fig_dir / name, text)
    for name, data in images.items():
        rio.atomic_write_bytes(fig_dir / name, data)
    print(f"figures={fig_dir} tables={len(tables)} images={len(images)}")
    return 0


COMMANDS = {"snapshots": cmd_snapshots, "basis": cmd_basis, "bounds": cmd_bounds,
            "rom": cmd_rom, "figures": cmd_figures}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        opts = resolve_options(args)
        return COMMANDS[args.command](opts)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except RandSympError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
