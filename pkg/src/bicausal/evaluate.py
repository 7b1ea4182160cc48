"""Baseline method, edge-set scoring and the synthetic benchmark harness.

Scores compare directed edge sets. On the ``transitive`` task both graphs are
transitively closed first, so a method that returns direct edges only is
credited for every causal path it implies.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .dataset import BinaryDataset
from .discovery import DiscoveryConfig, discover
from .graph import CausalGraph
from .simulate import benchmark_model, ground_truth, sample

TASKS = ("directed", "transitive")
METHODS = ("proposed", "freqpat")
DEFAULT_P_GRID = (0.5, 0.3, 0.1, 0.05)
DEFAULT_N_GRID = (500,)

FREQPAT_MIN_SUPPORT = 0.01
FREQPAT_MIN_CONFIDENCE = 1.0


@dataclass(frozen=True)
class EvaluationReport:
    method_name: str
    task: str
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


def frequent_pattern_baseline(ds: BinaryDataset, min_support: float = FREQPAT_MIN_SUPPORT,
                              min_confidence: float = FREQPAT_MIN_CONFIDENCE) -> CausalGraph:
    """Association-rule orientation without confounder filtering or testing.

    Emits ``i -> j`` when the joint support of ``X_i = 1, X_j = 1`` reaches
    ``min_support``, the confidence ``P(X_j=1 | X_i=1)`` reaches
    ``min_confidence`` and exceeds the reverse confidence. Pairs whose
    antecedent or consequent never equals 1 are skipped.
    """
    for name, t in (("min_support", min_support), ("min_confidence", min_confidence)):
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {t}")
    x = ds.values.astype(np.int64)
    co = x.T @ x  # co[i, j] = #rows with X_i = X_j = 1
    ones = np.diag(co)
    edges = set()
    for i in range(ds.d):
        for j in range(ds.d):
            if i == j or ones[i] == 0 or ones[j] == 0:
                continue
            conf = co[i, j] / ones[i]
            reverse = co[i, j] / ones[j]
            if co[i, j] / ds.n >= min_support and conf >= min_confidence and conf > reverse:
                edges.add((i, j))
    return CausalGraph(tuple(ds.column_names), frozenset(edges))


def score(inferred: CausalGraph, truth: CausalGraph, task: str = "directed",
          method_name: str = "") -> EvaluationReport:
    """Edge-set TP/FP/FN of ``inferred`` against ``truth``."""
    if task not in TASKS:
        raise ValueError(f"task must be one of {TASKS}, got {task!r}")
    if inferred.node_names != truth.node_names:
        raise ValueError(f"node sets differ: {inferred.node_names} vs {truth.node_names}")
    a, b = inferred.edges, truth.edges
    if task == "transitive":
        a, b = inferred.transitive_closure().edges, truth.transitive_closure().edges
    return EvaluationReport(method_name, task, len(a & b), len(a - b), len(b - a))


# ---------------------------------------------------------------- benchmark

@dataclass(frozen=True)
class BenchmarkRow:
    method: str
    task: str
    p: float
    n: int
    seed: int
    tp: int | None = None
    fp: int | None = None
    fn: int | None = None
    precision: float | None = None
    recall: float | None = None
    f1: float | None = None
    error: str = ""


RESULT_COLUMNS = tuple(f.name for f in fields(BenchmarkRow))


def cell_seeds(base_seed: int, p: float, n: int, replicate: int) -> tuple:
    """``(data_seed, method_seed)`` for one benchmark cell.

    The dataset depends on ``(p, n, replicate)`` only, so every method is
    scored on the same samples.
    """
    key = (round(p * 1_000_000), int(n), int(replicate))
    data = np.random.SeedSequence(base_seed, spawn_key=(0, *key)).generate_state(1)[0]
    method = np.random.SeedSequence(base_seed, spawn_key=(1, *key)).generate_state(1)[0]
    return int(data), int(method)


def _run_cell(args):
    method, p, n, replicate, base_seed, q, alpha, fp_params = args
    data_seed, method_seed = cell_seeds(base_seed, p, n, replicate)
    rows = []
    try:
        model = benchmark_model(p)
        ds = sample(model, n, data_seed)
        if method == "proposed":
            graph = discover(ds, DiscoveryConfig(alpha=alpha, q=q, seed=method_seed)).e_hat
        elif method == "freqpat":
            graph = frequent_pattern_baseline(ds, **fp_params)
        else:
            raise ValueError(f"unknown method {method!r}")
        for task in TASKS:
            rep = score(graph, ground_truth(model, task), task, method)
            rows.append(BenchmarkRow(method, task, p, n, replicate, rep.tp, rep.fp, rep.fn,
                                     rep.precision, rep.recall, rep.f1))
    except Exception as exc:  # recorded per cell; the run continues
        rows = [BenchmarkRow(method, task, p, n, replicate, error=f"{type(exc).__name__}: {exc}")
                for task in TASKS]
    return rows


def run_benchmark(methods=METHODS, p_grid=DEFAULT_P_GRID, n_grid=DEFAULT_N_GRID, seeds: int = 10,
                  q: int = 100, alpha: float = 0.05, base_seed: int = 0, jobs: int = 1,
                  min_support: float = FREQPAT_MIN_SUPPORT,
                  min_confidence: float = FREQPAT_MIN_CONFIDENCE) -> list:
    """Score each method on ``seeds`` benchmark samples per ``(p, n)`` cell.

    Returns
    -------
    list of BenchmarkRow
        Ordered by ``(method, p, n, seed, task)`` with methods and grids in the
        order given; identical for any ``jobs``.
    """
    methods = list(methods)
    if not methods:
        raise ValueError("at least one method is required")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {METHODS}")
    if seeds < 1:
        raise ValueError("seeds must be >= 1")
    for p in p_grid:
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p}")
    for n in n_grid:
        if int(n) < 1:
            raise ValueError(f"n must be >= 1, got {n}")
    fp_params = {"min_support": min_support, "min_confidence": min_confidence}
    cells = [(m, float(p), int(n), s, base_seed, q, alpha, fp_params)
             for m in methods for p in p_grid for n in n_grid for s in range(seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            chunks = list(pool.map(_run_cell, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    else:
        chunks = [_run_cell(c) for c in cells]
    return [row for chunk in chunks for row in chunk]


@dataclass(frozen=True)
class SummaryRow:
    method: str
    task: str
    p: float
    n: int
    runs: int
    errors: int
    precision: float
    recall: float
    f1: float


def summarize(rows) -> list:
    """Median precision, recall and F1 per ``(method, task, p, n)``, first-seen order."""
    groups = {}
    for r in rows:
        groups.setdefault((r.method, r.task, r.p, r.n), []).append(r)
    out = []
    for (method, task, p, n), rs in groups.items():
        ok = [r for r in rs if not r.error]

        def med(attr):
            return float(np.median([getattr(r, attr) for r in ok])) if ok else math.nan

        out.append(SummaryRow(method, task, p, n, len(rs), len(rs) - len(ok),
                              med("precision"), med("recall"), med("f1")))
    return out


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def results_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in asdict(r).values()])
    return buf.getvalue()


def summary_to_csv(summary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = [f.name for f in fields(SummaryRow)]
    w.writerow(cols)
    for s in summary:
        w.writerow([_fmt(v) for v in asdict(s).values()])
    return buf.getvalue()


def read_results_csv(text: str) -> list:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        def num(key, cast):
            return cast(rec[key]) if rec.get(key) not in (None, "") else None

        rows.append(BenchmarkRow(rec["method"], rec["task"], float(rec["p"]), int(rec["n"]),
                                 int(rec["seed"]), num("tp", int), num("fp", int), num("fn", int),
                                 num("precision", float), num("recall", float), num("f1", float),
                                 rec.get("error", "") or ""))
    return rows


def format_tables(summary) -> str:
    """Plain-text tables: transitive F1 first, then directed precision/recall/F1."""
    lines = []
    by_task = {t: [s for s in summary if s.task == t] for t in TASKS}
    methods = list(dict.fromkeys(s.method for s in summary))
    for task, title in (("transitive", "Transitive causal graph (median F1)"),
                        ("directed", "Directed causal graph (median precision / recall / F1)")):
        rows = by_task[task]
        if not rows:
            continue
        lines.append(title)
        cells = sorted({(s.n, s.p) for s in rows}, key=lambda c: (c[0], -c[1]))
        lines.append(f"{'n':>6} {'p':>6}  " + "  ".join(f"{m:>20}" for m in methods))
        for n, p in cells:
            vals = []
            for m in methods:
                s = next((s for s in rows if s.method == m and s.n == n and s.p == p), None)
                if s is None:
                    vals.append(f"{'-':>20}")
                elif task == "transitive":
                    vals.append(f"{s.f1:>20.2f}")
                else:
                    vals.append(f"{s.precision:.2f} / {s.recall:.2f} / {s.f1:.2f}".rjust(20))
            lines.append(f"{n:>6} {p:>6}  " + "  ".join(vals))
        lines.append("")
    return "\n".join(lines)


def read_edge_records(path, task=None) -> list:
    """``(src, dst)`` string pairs from an edge-list CSV.

    When the file has a ``task`` column (as written by the simulator) and
    ``task`` is given, only rows for that task are returned.
    """
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"src", "dst"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected columns src,dst")
        for rec in reader:
            if task is not None and "task" in rec and rec["task"] != task:
                continue
            out.append((rec["src"].strip(), rec["dst"].strip()))
    return out


def read_edge_list(path, node_names, task=None) -> CausalGraph:
    """Load an external ``src,dst`` CSV; endpoints are names or 0-based indices."""
    node_names = tuple(node_names)
    index = {name: k for k, name in enumerate(node_names)}
    edges = set()
    for lineno, ends in enumerate(read_edge_records(path, task), start=2):
        pair = []
        for v in ends:
            if v in index:
                pair.append(index[v])
            elif v.isdigit() and int(v) < len(node_names):
                pair.append(int(v))
            else:
                raise ValueError(f"{path}: unknown node {v!r}")
        edges.add(tuple(pair))
    return CausalGraph(node_names, frozenset(edges))
