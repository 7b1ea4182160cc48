"""JSON and CSV renderings of a discovery result.

The JSON layout is described by ``docs/report.schema.json``.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .discovery import DiscoveryResult

SCHEMA_VERSION = "1"


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _test(h, with_reject=True):
    if h is None:
        return None
    out = {"mean": _num(h.mean), "ci": [_num(v) for v in h.ci.as_list()], "p": _num(h.p_value)}
    if with_reject:
        out["reject"] = bool(h.reject_null)
        out["method"] = h.method
    return out


def _oriented(h, s, t):
    """causal_dir of an edge read from source to target."""
    out = _test(h, False)
    if s > t:  # diagnostics store the statistic for the (low, high) index order
        lo, hi = out["ci"]
        out["mean"] = None if out["mean"] is None else -out["mean"]
        out["ci"] = [None if hi is None else -hi, None if lo is None else -lo]
    return out


def _pairs(names, ordered):
    return [[names[a], names[b]] for a, b in sorted({(min(p), max(p)) for p in ordered})]


def to_report(result: DiscoveryResult) -> dict:
    """Plain-data report: inferred edges with their statistics, plus every tested pair.

    Edge entries give ``causal_dir`` read from source to target (positive for
    every inferred edge); diagnostics keep the value for the listed pair order.
    """
    names = result.node_names
    diags = result.diagnostics
    edges = []
    for s, t in sorted(result.e_hat.edges):
        dg = diags[(min(s, t), max(s, t))]
        cp = dg.cond_prob
        edges.append({
            "source": names[s],
            "target": names[t],
            "association_sign": dg.association_sign,
            "dependency": _test(dg.dependency, False),
            "odd_diff": _test(dg.odd_diff, False),
            "causal_dir": _oriented(dg.causal_dir, s, t),
            "cond_prob": {
                "event": {names[cp["event"][0]]: cp["event"][1]},
                "given": {names[cp["given"][0]]: cp["given"][1]},
                "mean": _num(cp["mean"]),
                "ci": [_num(v) for v in cp["ci"]],
                "interventional": bool(cp.get("interventional", False)),
            },
        })
    diagnostics = []
    for (i, j), dg in diags.items():
        diagnostics.append({
            "pair": [names[i], names[j]],
            "status": dg.status,
            "dependency": _test(dg.dependency),
            "conditioning": [dict(given=names[c.z], **_test(c.test)) for c in dg.conditioning],
            "association_sign": dg.association_sign,
            "odd_diff": _test(dg.odd_diff),
            "values": list(dg.values) if dg.values is not None else None,
            "causal_dir": _test(dg.causal_dir),
            "skipped_fraction": _num(dg.skipped_fraction),
            "direction": [names[k] for k in dg.direction] if dg.direction else None,
            "note": dg.note,
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "nodes": list(names),
        "edges": edges,
        "e0": _pairs(names, result.e0),
        "e1": _pairs(names, result.e1),
        "e2": _pairs(names, result.e2),
        "diagnostics": diagnostics,
        "skipped_columns": [names[k] for k in result.skipped_columns],
        # worker count never changes results, so it stays in the run manifest only
        "config": {k: v for k, v in result.config.as_dict().items() if k != "jobs"},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def edges_csv(result: DiscoveryResult) -> str:
    """``src,dst`` edge list with headline statistics; readable by the evaluation harness."""
    names = result.node_names
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["src", "dst", "association_sign", "causal_dir", "causal_dir_p", "cond_prob"])
    for s, t in sorted(result.e_hat.edges):
        dg = result.diagnostics[(min(s, t), max(s, t))]
        sign = 1 if s < t else -1
        w.writerow([names[s], names[t], dg.association_sign, repr(sign * float(dg.causal_dir.mean)),
                    repr(float(dg.causal_dir.p_value)), repr(float(dg.cond_prob["mean"]))])
    return buf.getvalue()


def to_dot(result: DiscoveryResult) -> str:
    labels = {}
    for s, t in result.e_hat.edges:
        dg = result.diagnostics[(min(s, t), max(s, t))]
        sign = 1 if s < t else -1
        labels[(s, t)] = f"{sign * dg.causal_dir.mean:.3f}"
    return result.e_hat.to_dot("bicausal", labels)
