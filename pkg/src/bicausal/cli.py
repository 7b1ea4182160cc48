"""Command-line interface: ``bicausal {discover,simulate,eval,mpi}``.

Options resolve as command-line flag, then config file, then built-in
default. Config files are INI; keys in ``[common]`` apply to every command
and keys in a section named after the command override them. Key names are
the long flag names with or without dashes (``negative-orientation`` or
``negative_orientation``).

Every command that writes files also writes ``manifest.json`` next to them.
The manifest records the fully resolved argument list (including the seed),
so running ``bicausal`` with ``manifest["argv"]`` regenerates the other files
byte for byte.

Exit codes: 0 success, 1 input error, 2 configuration error, 3 internal error.
"""

from __future__ import annotations

import argparse
import configparser
import datetime as _dt
import hashlib
import json
import logging
import os
import secrets
import sys
import warnings
from pathlib import Path

from . import __version__
from .dataset import DatasetError, load_csv, mpi_index, save_csv
from .discovery import (CONSTANT_POLICIES, NEGATIVE_ORIENTATIONS, TESTS, DiscoveryConfig,
                        DiscoveryError, discover)
from .evaluate import (METHODS, TASKS, format_tables, read_edge_records, results_to_csv, run_benchmark,
                       score, summarize, summary_to_csv)
from .graph import CausalGraph
from .report import dumps, edges_csv, to_dot, to_report
from .simulate import ModelError, benchmark_model, ground_truth, parse_model, sample

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

logger = logging.getLogger("bicausal")


class InputError(Exception):
    pass


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _csv_list(cast):
    def parse(text):
        items = [t.strip() for t in str(text).split(",") if t.strip()]
        return [cast(t) for t in items]
    return parse


def _bool(text):
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# name -> (type, default); defaults of None are resolved per command
COMMON = {
    "alpha": (float, 0.05),
    "replicates": (int, 100),
    "seed": (int, None),
    "jobs": (int, 1),
    "format": (str, "json"),
    "out": (str, None),
}
OPTIONS = {
    "discover": {
        "header": (_bool, True),
        "test": (str, "resampling"),
        "negative_orientation": (str, "undirected"),
        "constant_columns": (str, "skip"),
        "association_check": (_bool, True),
    },
    "simulate": {
        "benchmark": (float, None),
        "model": (str, None),
        "n": (int, 500),
    },
    "eval": {
        "methods": (_csv_list(str), list(METHODS)),
        "p": (_csv_list(float), [0.5, 0.3, 0.1, 0.05]),
        "n": (_csv_list(int), [500]),
        "seeds": (int, 10),
        "tables": (_bool, False),
        "min_support": (float, 0.01),
        "min_confidence": (float, 1.0),
        "edges": (str, None),
        "truth": (str, None),
    },
    "mpi": {
        "header": (_bool, True),
        "threshold": (float, None),
        "per_row": (str, None),
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bicausal", description="Causal discovery for binary indicator data.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("json", "dot", "csv")):
        p.add_argument("--alpha", type=float, help="significance level (default 0.05)")
        p.add_argument("--replicates", type=int, help="bootstrap replicates q (default 100)")
        p.add_argument("--seed", type=int, help="master seed; generated and printed when omitted")
        p.add_argument("--jobs", type=int, help="worker count (default 1)")
        p.add_argument("--format", choices=formats, help="extra output format")
        p.add_argument("--out", help="output directory (default runs/<command>-seed<seed>)")
        p.add_argument("--config", help="INI config file")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("discover", help="infer a causal graph from a binary CSV")
    p.add_argument("input")
    common(p)
    p.add_argument("--no-header", dest="header", action="store_const", const=False)
    p.add_argument("--test", choices=TESTS)
    p.add_argument("--negative-orientation", choices=NEGATIVE_ORIENTATIONS)
    p.add_argument("--constant-columns", choices=CONSTANT_POLICIES)
    p.add_argument("--no-association-check", dest="association_check", action="store_const", const=False)

    p = sub.add_parser("simulate", help="sample a dataset from a b-SCM")
    common(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--benchmark", type=float, metavar="P", help="ten-variable benchmark with noise P")
    src.add_argument("--model", help="model file")
    p.add_argument("--n", type=int, help="rows to draw (default 500)")

    p = sub.add_parser("eval", help="benchmark methods, or score an external edge list")
    common(p)
    p.add_argument("--methods", type=_csv_list(str), help=f"comma list from {','.join(METHODS)}")
    p.add_argument("--p", type=_csv_list(float), help="comma list of noise probabilities")
    p.add_argument("--n", type=_csv_list(int), help="comma list of sample sizes")
    p.add_argument("--seeds", type=int, help="datasets per cell (default 10)")
    p.add_argument("--tables", action="store_const", const=True, help="also render summary tables")
    p.add_argument("--min-support", type=float)
    p.add_argument("--min-confidence", type=float)
    p.add_argument("--edges", help="score this src,dst CSV instead of running the benchmark")
    p.add_argument("--truth", help="ground-truth src,dst CSV for --edges")

    p = sub.add_parser("mpi", help="multidimensional poverty index of a binary CSV")
    p.add_argument("input")
    common(p, formats=("json", "csv"))
    p.add_argument("--no-header", dest="header", action="store_const", const=False)
    p.add_argument("--threshold", type=float, help="deprivation cutoff in (0, 1)")
    p.add_argument("--per-row", metavar="FILE", help="write per-row deprivation CSV ('-' for stdout)")
    return parser


def _read_config(path, command) -> dict:
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config {path}: {exc}") from exc
    out = {}
    for section in ("common", command):
        if cp.has_section(section):
            for k, v in cp.items(section):
                out[k.replace("-", "_")] = v
    return out


def resolve(args) -> dict:
    """Merge flags, config file and defaults into one typed option dict."""
    known = {**COMMON, **OPTIONS[args.command]}
    file_values = _read_config(args.config, args.command) if args.config else {}
    unknown = set(file_values) - set(known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    opts = {}
    for name, (cast, default) in known.items():
        value = getattr(args, name, None)
        if value is None and name in file_values:
            try:
                value = cast(file_values[name])
            except ValueError as exc:
                raise ConfigError(f"config key {name}: {exc}") from exc
        opts[name] = default if value is None else value
    if opts["seed"] is None and args.command != "mpi":
        opts["seed"] = secrets.randbits(32)
        print(f"seed: {opts['seed']}", file=sys.stderr)
    if not 0.0 < opts["alpha"] < 1.0:
        raise ConfigError(f"--alpha must lie in (0, 1), got {opts['alpha']}")
    if opts["replicates"] < 8:
        raise ConfigError("--replicates must be >= 8")
    if opts["jobs"] < 1:
        raise ConfigError("--jobs must be >= 1")
    if opts["seed"] is not None and opts["seed"] < 0:
        raise ConfigError("--seed must be non-negative")
    return opts


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _argv(command, positional, opts) -> list:
    """Fully resolved argument list reproducing this run."""
    argv = [command, *positional]
    for name, value in opts.items():
        if value is None or name in ("input",):
            continue
        flag = "--" + name.replace("_", "-")
        if name in ("header", "association_check"):
            if not value:
                argv.append(f"--no-{name.replace('_', '-')}")
        elif name == "tables":
            if value:
                argv.append(flag)
        elif isinstance(value, list):
            argv += [flag, ",".join(str(v) for v in value)]
        else:
            argv += [flag, str(value)]
    return argv


class _Run:
    """Output directory plus manifest bookkeeping for one command."""

    def __init__(self, command, opts, positional=(), inputs=()):
        self.command = command
        self.opts = opts
        self.positional = list(positional)
        self.inputs = [p for p in inputs if p]
        self.started = _now()
        out = opts["out"] or os.path.join("runs", f"{command}-seed{opts['seed']}")
        self.dir = Path(out)
        self.files = []

    def write(self, name, text):
        self.dir.mkdir(parents=True, exist_ok=True)
        path = self.dir / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        self.files.append(name)
        return path

    def finish(self):
        manifest = {
            "command": self.command,
            "argv": _argv(self.command, self.positional, self.opts),
            "config": self.opts,
            "seed": self.opts["seed"],
            "tool_version": __version__,
            "inputs": {os.fspath(p): _sha256(p) for p in self.inputs},
            "outputs": {name: _sha256(self.dir / name) for name in self.files},
            "started_at": self.started,
            "finished_at": _now(),
        }
        self.dir.mkdir(parents=True, exist_ok=True)
        with open(self.dir / "manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")


def _now():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _load(path, header):
    try:
        return load_csv(path, has_header=header)
    except DatasetError as exc:
        raise InputError(str(exc)) from exc


def cmd_discover(args, opts) -> int:
    ds = _load(args.input, opts["header"])
    try:
        cfg = DiscoveryConfig(alpha=opts["alpha"], q=opts["replicates"], seed=opts["seed"],
                              constant_column_policy=opts["constant_columns"],
                              require_association_sign=opts["association_check"], test=opts["test"],
                              negative_orientation=opts["negative_orientation"], jobs=opts["jobs"])
    except DiscoveryError as exc:
        raise ConfigError(str(exc)) from exc
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            result = discover(ds, cfg)
        except DiscoveryError as exc:
            raise InputError(str(exc)) from exc
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    run = _Run("discover", opts, [args.input], [args.input])
    run.write("report.json", dumps(to_report(result)))
    if opts["format"] == "dot":
        run.write("graph.dot", to_dot(result))
    elif opts["format"] == "csv":
        run.write("edges.csv", edges_csv(result))
    run.finish()
    names = result.node_names
    print(f"{len(result.e_hat.edges)} edges ({len(result.e0) // 2} dependent pairs, "
          f"{len(result.confounded) // 2} confounded)")
    for s, t in sorted(result.e_hat.edges):
        print(f"  {names[s]} -> {names[t]}")
    print(f"wrote {run.dir}")
    return EXIT_OK


def cmd_simulate(args, opts) -> int:
    if (opts["benchmark"] is None) == (opts["model"] is None):
        raise ConfigError("give exactly one of --benchmark P or --model FILE")
    if opts["n"] < 1:
        raise ConfigError("--n must be >= 1")
    if opts["model"] is not None:
        try:
            text = Path(opts["model"]).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {opts['model']}: {exc.strerror or exc}") from exc
        try:
            model = parse_model(text)
        except ModelError as exc:
            raise InputError(f"{opts['model']}: {exc}") from exc
    else:
        try:
            model = benchmark_model(opts["benchmark"])
        except ModelError as exc:
            raise ConfigError(str(exc)) from exc
    ds = sample(model, opts["n"], opts["seed"])
    run = _Run("simulate", opts, inputs=[opts["model"]])
    run.dir.mkdir(parents=True, exist_ok=True)
    save_csv(ds, run.dir / "data.csv")
    run.files.append("data.csv")
    lines = ["task,src,dst"]
    for task in TASKS:
        lines += [f"{task},{s},{t}" for s, t in ground_truth(model, task).named_edges()]
    run.write("truth.csv", "\n".join(lines) + "\n")
    run.finish()
    print(f"wrote {ds.n} x {ds.d} dataset and ground truth to {run.dir}")
    return EXIT_OK


def _score_external(opts) -> int:
    if not opts["truth"]:
        raise ConfigError("--edges needs --truth")
    try:
        inferred = read_edge_records(opts["edges"])
        truth = read_edge_records(opts["truth"], task="directed")
    except OSError as exc:
        raise InputError(f"cannot read {exc.filename}: {exc.strerror}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    names = list(dict.fromkeys([v for e in truth + inferred for v in e]))
    index = {v: k for k, v in enumerate(names)}
    to_graph = lambda es: CausalGraph(tuple(names), frozenset((index[s], index[t]) for s, t in es))  # noqa: E731
    try:
        g_inf, g_true = to_graph(inferred), to_graph(truth)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    method = Path(opts["edges"]).stem
    lines = ["method,task,tp,fp,fn,precision,recall,f1"]
    for task in TASKS:
        r = score(g_inf, g_true, task, method)
        lines.append(f"{method},{task},{r.tp},{r.fp},{r.fn},{r.precision!r},{r.recall!r},{r.f1!r}")
    text = "\n".join(lines) + "\n"
    run = _Run("eval", opts, inputs=[opts["edges"], opts["truth"]])
    run.write("scores.csv", text)
    run.finish()
    sys.stdout.write(text)
    return EXIT_OK


def cmd_eval(args, opts) -> int:
    if opts["edges"]:
        return _score_external(opts)
    if not opts["methods"]:
        raise ConfigError("--methods is empty")
    bad = [m for m in opts["methods"] if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown methods {bad}; choose from {list(METHODS)}")
    if not opts["p"] or not opts["n"]:
        raise ConfigError("--p and --n need at least one value")
    try:
        rows = run_benchmark(opts["methods"], opts["p"], opts["n"], seeds=opts["seeds"],
                             q=opts["replicates"], alpha=opts["alpha"], base_seed=opts["seed"],
                             jobs=opts["jobs"], min_support=opts["min_support"],
                             min_confidence=opts["min_confidence"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    summary = summarize(rows)
    run = _Run("eval", opts)
    run.write("results.csv", results_to_csv(rows))
    run.write("summary.csv", summary_to_csv(summary))
    if opts["tables"]:
        tables = format_tables(summary)
        run.write("tables.txt", tables)
        print(tables)
    run.finish()
    failed = sum(1 for r in rows if r.error)
    if failed:
        print(f"{failed} result rows carry errors; see results.csv", file=sys.stderr)
    print(f"wrote {run.dir}")
    return EXIT_OK


def cmd_mpi(args, opts) -> int:
    t = opts["threshold"]
    if t is None or not 0.0 < t < 1.0:
        raise ConfigError(f"--threshold must lie in (0, 1), got {t}")
    ds = _load(args.input, opts["header"])
    res = mpi_index(ds, t)
    if opts["format"] == "json":
        print(json.dumps({"m0": res.m0, "q0": res.q0, "a0": res.a0, "threshold": t, "n": ds.n}))
    else:
        print("m0,q0,a0")
        print(f"{res.m0!r},{res.q0!r},{res.a0!r}")
    if opts["per_row"]:
        lines = ["row,deprivation,deprived"]
        lines += [f"{k},{s!r},{int(s > t)}" for k, s in enumerate(res.per_row_deprivation.tolist())]
        text = "\n".join(lines) + "\n"
        if opts["per_row"] == "-":
            sys.stdout.write(text)
        else:
            Path(opts["per_row"]).write_text(text, encoding="utf-8")
    return EXIT_OK


COMMANDS = {"discover": cmd_discover, "simulate": cmd_simulate, "eval": cmd_eval, "mpi": cmd_mpi}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        opts = resolve(args)
        return COMMANDS[args.command](args, opts)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"bicausal: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"bicausal: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        logger.debug("internal error", exc_info=True)
        print(f"bicausal: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
