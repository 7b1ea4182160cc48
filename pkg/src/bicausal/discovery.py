"""Causal graph inference for binary variables.

Three phases share one set of bootstrap resamples:

1. screening: keep pairs whose dependency is significantly above zero (E0);
2. confounder filtering: a pair with a common E0-neighbour ``Z`` is dropped
   (E2) as soon as one such ``Z`` makes it conditionally independent,
   otherwise it becomes a causal candidate (E1);
3. orientation: the sign of the bootstrap mean of ``causal_dir`` decides
   the direction when it differs significantly from zero (E-hat); other
   candidates end in E2.

Negatively associated candidates are left undirected by default; with
``negative_orientation="flip"`` the values of ``X_i`` are swapped before
computing ``causal_dir``, which presumes ``X_i`` is the cause.

Two decision procedures are available. ``test="resampling"`` (default)
compares the observed dependency with draws under a within-stratum
permutation null and uses bootstrap sign counts for signed statistics.
``test="mann-whitney"`` ranks the bootstrap replicates against an all-zero
sample; replicates of a non-negative statistic rarely touch zero, so this
variant rejects independence far more often than ``alpha``.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import stats
from .alignment import align
from .dataset import BinaryDataset, validate
from .graph import CausalGraph
from .stats import HypothesisResult

logger = logging.getLogger(__name__)

TESTS = ("resampling", "mann-whitney")
CONSTANT_POLICIES = ("skip", "error")
NEGATIVE_ORIENTATIONS = ("undirected", "flip")

# spawn-key tags separating the random streams of each phase
_BOOT, _SCREEN, _FILTER = 0, 1, 2


class DiscoveryError(ValueError):
    pass


class ConstantColumnWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DiscoveryConfig:
    alpha: float = 0.05
    q: int = 100
    seed: int = 0
    constant_column_policy: str = "skip"
    require_association_sign: bool = True
    test: str = "resampling"
    negative_orientation: str = "undirected"
    jobs: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DiscoveryError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.q < stats.MW_MIN_REPLICATES:
            raise DiscoveryError(f"q must be >= {stats.MW_MIN_REPLICATES}, got {self.q}")
        if self.constant_column_policy not in CONSTANT_POLICIES:
            raise DiscoveryError(f"constant_column_policy must be one of {CONSTANT_POLICIES}")
        if self.test not in TESTS:
            raise DiscoveryError(f"test must be one of {TESTS}, got {self.test!r}")
        if self.negative_orientation not in NEGATIVE_ORIENTATIONS:
            raise DiscoveryError(f"negative_orientation must be one of {NEGATIVE_ORIENTATIONS}")
        if self.jobs < 1:
            raise DiscoveryError("jobs must be >= 1")

    def as_dict(self):
        return asdict(self)


@dataclass
class ConditioningCheck:
    z: int
    test: HypothesisResult


@dataclass
class PairDiagnostics:
    """Everything computed for one unordered pair ``i < j``.

    ``status`` is one of ``independent``, ``confounded``, ``directed``,
    ``undirected``, ``negative-association``, ``no-association`` or
    ``insufficient-support``.
    """

    i: int
    j: int
    dependency: HypothesisResult
    status: str = "independent"
    conditioning: list = field(default_factory=list)
    association_sign: int | None = None
    odd_diff: HypothesisResult | None = None
    values: tuple | None = None
    causal_dir: HypothesisResult | None = None
    skipped_fraction: float | None = None
    direction: tuple | None = None
    cond_prob: dict | None = None
    note: str | None = None


@dataclass
class DiscoveryResult:
    node_names: list
    e0: frozenset
    e1: frozenset
    e2: frozenset
    e_hat: CausalGraph
    diagnostics: dict
    config: DiscoveryConfig
    skipped_columns: list = field(default_factory=list)

    @property
    def confounded(self) -> frozenset:
        """Ordered pairs discarded by the confounder filter."""
        return frozenset(p for p in self.e2 if self.diagnostics[_key(*p)].status == "confounded")

    def undirected_pairs(self) -> list:
        return sorted(k for k, dg in self.diagnostics.items() if dg.status == "undirected")


def _key(i, j):
    return (i, j) if i < j else (j, i)


def _both(i, j):
    return {(i, j), (j, i)}


class _Runner:
    def __init__(self, ds: BinaryDataset, cfg: DiscoveryConfig, active):
        self.cfg = cfg
        self.ad = align(ds)
        self.active = active
        self.patterns = self.ad.patterns
        self.counts = stats.resample_counts(self.ad, cfg.q, (cfg.seed, _BOOT))

    def _map(self, fn, items):
        items = list(items)
        if self.cfg.jobs > 1 and len(items) > 1:
            with ThreadPoolExecutor(self.cfg.jobs) as pool:
                return list(pool.map(fn, items))
        return [fn(x) for x in items]

    def boot(self, stat):
        return stats.distribution_from(stat, self.patterns, self.counts, self.cfg.seed)

    def nonneg_test(self, stat, bd, null_fn):
        if self.cfg.test == "mann-whitney":
            return stats.mw_test(bd, self.cfg.alpha, alternative="greater")
        observed = stat(self.ad)
        return stats.null_rank_test(observed, null_fn(), bd, self.cfg.alpha)

    def signed_test(self, bd):
        if self.cfg.test == "mann-whitney":
            return stats.mw_test(bd, self.cfg.alpha, alternative="two-sided")
        return stats.sign_test(bd, self.cfg.alpha)

    # phase 1
    def screen_pair(self, pair):
        i, j = pair
        stat = stats.dependency_stat(i, j)
        rng = stats.replicate_rng(self.cfg.seed, _SCREEN, i, j)
        result = self.nonneg_test(stat, self.boot(stat),
                                  lambda: stats.dependency_null(self.ad, i, j, self.cfg.q, rng))
        return PairDiagnostics(i, j, result)

    # phase 2
    def condition_pair(self, args):
        (i, j), candidates = args
        checks = []
        for z in candidates:
            stat = stats.cond_dependency_stat(i, j, z)
            rng = stats.replicate_rng(self.cfg.seed, _FILTER, i, j, z)
            res = self.nonneg_test(stat, self.boot(stat),
                                   lambda: stats.cond_dependency_null(self.ad, i, j, z, self.cfg.q, rng))
            checks.append(ConditioningCheck(z, res))
            if not res.reject_null:
                break
        return checks

    # phase 3
    def orient_pair(self, dg: PairDiagnostics):
        i, j = dg.i, dg.j
        t = stats.pair_table(self.patterns, self.ad.counts, i, j)
        negative = t[1, 1] * t[0, 0] < t[0, 1] * t[1, 0]
        a = 0 if negative else 1
        dg.association_sign = -1 if negative else 1
        dg.values = (a, 1)

        od = self.boot(stats.odd_diff_stat(i, j))
        dg.odd_diff = self.signed_test(od)

        cd = self.boot(stats.causal_dir_stat(i, j, a, 1))
        dg.skipped_fraction = cd.skipped / cd.q
        if not cd.reliable or cd.effective < stats.MW_MIN_REPLICATES:
            dg.status = "insufficient-support"
            dg.note = f"causal_dir undefined in {cd.skipped} of {cd.q} replicates"
            return dg
        dg.causal_dir = self.signed_test(cd)

        if self.cfg.require_association_sign and not dg.odd_diff.reject_null:
            dg.status = "no-association"
            return dg
        if negative and self.cfg.negative_orientation == "undirected":
            # With X_i flipped, both causal orders leave the (0, 0) cell empty,
            # so the flipped comparison follows column order, not causal order.
            dg.status = "negative-association"
            return dg
        if dg.causal_dir.reject_null and dg.causal_dir.mean > 0:
            dg.direction = (i, j)
            cp = self.boot(stats.cond_prob_stat(i, j, a, 1))
        elif dg.causal_dir.reject_null and dg.causal_dir.mean < 0:
            dg.direction = (j, i)
            cp = self.boot(stats.cond_prob_stat(j, i, 1, a))
        else:
            dg.status = "undirected"
            return dg
        dg.status = "directed"
        src, dst = dg.direction
        src_val = a if src == i else 1
        dst_val = 1 if dst == j else a
        ci = stats.percentile_ci(cp, 1 - self.cfg.alpha)
        dg.cond_prob = {"event": (dst, dst_val), "given": (src, src_val),
                        "mean": cp.mean, "ci": ci.as_list()}
        return dg


def _active_columns(ds, cfg):
    report = validate(ds)
    const = report.constant_columns
    if const:
        names = [ds.column_names[k] for k in const]
        if cfg.constant_column_policy == "error":
            raise DiscoveryError(f"constant columns: {', '.join(names)}")
        warnings.warn(f"skipping constant columns: {', '.join(names)}", ConstantColumnWarning, stacklevel=3)
    return [k for k in range(ds.d) if k not in const], const


def screen_dependencies(ds, cfg=DiscoveryConfig(), _runner=None):
    """Symmetric set E0 of ordered pairs whose dependency test rejects independence.

    Returns ``(e0, diagnostics)`` with one :class:`PairDiagnostics` per tested pair.
    """
    if _runner is None:
        active, _ = _active_columns(ds, cfg)
        _runner = _Runner(ds, cfg, active)
    pairs = list(itertools.combinations(_runner.active, 2))
    diags = _runner._map(_runner.screen_pair, pairs)
    e0 = set()
    for dg in diags:
        if dg.dependency.reject_null:
            e0 |= _both(dg.i, dg.j)
    return frozenset(e0), {(dg.i, dg.j): dg for dg in diags}


def filter_confounders(ds, e0, cfg=DiscoveryConfig(), diagnostics=None, _runner=None):
    """Split E0 into candidates E1 and confounded pairs E2.

    A pair keeps its place in E1 only if it stays dependent given every
    ``Z`` adjacent in E0 to both of its variables.
    """
    if _runner is None:
        active, _ = _active_columns(ds, cfg)
        _runner = _Runner(ds, cfg, active)
    e0 = frozenset(e0)
    diagnostics = {} if diagnostics is None else diagnostics
    nodes = sorted({k for p in e0 for k in p})
    neighbours = {k: {t for s, t in e0 if s == k} for k in nodes}
    pairs = sorted({_key(*p) for p in e0})
    work = [((i, j), sorted((neighbours[i] & neighbours[j]) - {i, j})) for i, j in pairs]
    results = _runner._map(_runner.condition_pair, work)
    e1, e2 = set(), set()
    for ((i, j), _), checks in zip(work, results):
        dg = diagnostics.get((i, j))
        if dg is None:
            dg = diagnostics[(i, j)] = _runner.screen_pair((i, j))
        dg.conditioning = checks
        if all(c.test.reject_null for c in checks):
            dg.status = "candidate"
            e1 |= _both(i, j)
        else:
            dg.status = "confounded"
            dg.note = f"conditionally independent given {ds.column_names[checks[-1].z]}"
            e2 |= _both(i, j)
    return frozenset(e1), frozenset(e2)


def orient_edges(ds, e1, cfg=DiscoveryConfig(), diagnostics=None, _runner=None):
    """Direct the candidate pairs; returns ``(e_hat_edges, e2_additions)``."""
    if _runner is None:
        active, _ = _active_columns(ds, cfg)
        _runner = _Runner(ds, cfg, active)
    diagnostics = {} if diagnostics is None else diagnostics
    pairs = sorted({_key(*p) for p in e1})
    items = []
    for i, j in pairs:
        dg = diagnostics.get((i, j))
        if dg is None:
            dg = diagnostics[(i, j)] = _runner.screen_pair((i, j))
        items.append(dg)
    done = _runner._map(_runner.orient_pair, items)
    edges, e2 = set(), set()
    for dg in done:
        if dg.direction is not None:
            edges.add(dg.direction)
        else:
            e2 |= _both(dg.i, dg.j)
    return frozenset(edges), frozenset(e2)


def discover(ds: BinaryDataset, cfg: DiscoveryConfig = DiscoveryConfig()) -> DiscoveryResult:
    """Run screening, confounder filtering and orientation on ``ds``."""
    active, const = _active_columns(ds, cfg)
    runner = _Runner(ds, cfg, active)
    e0, diags = screen_dependencies(ds, cfg, _runner=runner)
    e1, e2_conf = filter_confounders(ds, e0, cfg, diags, _runner=runner)
    edges, e2_orient = orient_edges(ds, e1, cfg, diags, _runner=runner)
    e_hat = CausalGraph(tuple(ds.column_names), edges)

    has_parent = {t for _, t in edges}
    for dg in diags.values():
        if dg.cond_prob is not None and dg.direction[0] not in has_parent:
            dg.cond_prob["interventional"] = True
            dg.note = "source has no inferred parent: conditional estimate read as P(effect | do(cause))"

    logger.debug("E0=%d E1=%d E2=%d edges=%d", len(e0) // 2, len(e1) // 2,
                 len(e2_conf | e2_orient) // 2, len(edges))
    return DiscoveryResult(
        node_names=list(ds.column_names),
        e0=e0,
        e1=e1,
        e2=e2_conf | e2_orient,
        e_hat=e_hat,
        diagnostics=dict(sorted(diags.items())),
        config=cfg,
        skipped_columns=list(const),
    )
