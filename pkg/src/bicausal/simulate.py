"""Bernoulli structural causal models: definition, sampling, model files.

A variable is the OR of its polarity-adjusted parents and its own Bernoulli
noise term::

    X_j = OR_{i in PA_j} (X_i if c_ij == 1 else not X_i)  OR  N_j

Model file grammar (one item per line, ``#`` starts a comment)::

    [variables]
    A
    B
    [edges]
    A B +        # src dst polarity; polarity in {+, -, 1, 0}
    [noise]
    A 0.3        # var p
    * 0.1        # default for variables not listed
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .dataset import BinaryDataset
from .graph import CausalGraph


class ModelError(ValueError):
    pass


class ModelParseError(ModelError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class BscmModel:
    """b-SCM over ``len(names)`` variables.

    ``parents[j]`` maps each parent index of variable ``j`` to its polarity
    (1 positive, 0 negative). ``noise_p[j]`` is ``P(N_j = 1)``; the direction
    criterion used by discovery assumes every ``noise_p < 1``, but sampling
    accepts the closed interval.
    """

    names: tuple
    parents: tuple
    noise_p: tuple

    def __post_init__(self):
        d = len(self.names)
        names = tuple(str(x) for x in self.names)
        if len(set(names)) != d:
            raise ModelError("variable names must be unique")
        if len(self.parents) != d or len(self.noise_p) != d:
            raise ModelError("parents and noise_p must have one entry per variable")
        parents = tuple({int(i): int(c) for i, c in dict(pa).items()} for pa in self.parents)
        for j, pa in enumerate(parents):
            for i, c in pa.items():
                if not 0 <= i < d or i == j:
                    raise ModelError(f"invalid parent {i} of variable {names[j]}")
                if c not in (0, 1):
                    raise ModelError(f"polarity of {names[i]} -> {names[j]} must be 0 or 1")
        noise = tuple(float(p) for p in self.noise_p)
        for j, p in enumerate(noise):
            if not 0.0 <= p <= 1.0:
                raise ModelError(f"noise probability of {names[j]} must lie in [0, 1], got {p}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "noise_p", noise)
        try:
            self.graph().topological_order()
        except ValueError as exc:
            raise ModelError(str(exc)) from None

    @property
    def d(self) -> int:
        return len(self.names)

    def graph(self) -> CausalGraph:
        return CausalGraph(self.names, frozenset((i, j) for j, pa in enumerate(self.parents) for i in pa))

    @classmethod
    def from_edges(cls, names, edges, noise_p):
        """``edges``: iterable of ``(src, dst)`` or ``(src, dst, polarity)`` by index or name."""
        names = tuple(names)
        index = {n: k for k, n in enumerate(names)}
        parents = [dict() for _ in names]
        for e in edges:
            s, t = (index.get(x, x) for x in e[:2])
            c = e[2] if len(e) > 2 else 1
            parents[int(t)][int(s)] = int(c)
        if np.isscalar(noise_p):
            noise_p = [noise_p] * len(names)
        return cls(names, tuple(parents), tuple(noise_p))


def sample(model: BscmModel, n: int, seed: int) -> BinaryDataset:
    """Draw ``n`` i.i.d. rows from ``model``; identical output for identical seed."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    noise = rng.random((n, model.d)) < np.asarray(model.noise_p)
    x = np.zeros((n, model.d), dtype=bool)
    for j in model.graph().topological_order():
        v = noise[:, j].copy()
        for i, c in model.parents[j].items():
            v |= x[:, i] if c == 1 else ~x[:, i]
        x[:, j] = v
    return BinaryDataset(x.astype(np.uint8), model.names)


BENCHMARK_EDGES = ((2, 1), (3, 1), (2, 4), (5, 4), (1, 6), (4, 6))


def benchmark_model(p: float) -> BscmModel:
    """Ten-variable benchmark: X1 <- X2|X3, X4 <- X2|X5, X6 <- X1|X4, every noise Bernoulli(p)."""
    if not 0.0 < p < 1.0:
        raise ModelError(f"p must lie in (0, 1), got {p}")
    names = [f"X{k}" for k in range(1, 11)]
    return BscmModel.from_edges(names, [(s - 1, t - 1, 1) for s, t in BENCHMARK_EDGES], p)


def ground_truth(model: BscmModel, task: str = "directed") -> CausalGraph:
    if task == "directed":
        return model.graph()
    if task == "transitive":
        return model.graph().transitive_closure()
    raise ValueError(f"task must be 'directed' or 'transitive', got {task!r}")


_POLARITY = {"+": 1, "1": 1, "-": 0, "0": 0}


def parse_model(text: str) -> BscmModel:
    """Parse the plain-text model format described in the module docstring."""
    section = None
    names, edges, noise = [], [], {}
    default = None
    edge_lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1).lower()
            if section not in ("variables", "edges", "noise"):
                raise ModelParseError(lineno, f"unknown section [{m.group(1)}]")
            continue
        fields = [f for f in re.split(r"[,\s]+", line) if f]
        if section is None:
            raise ModelParseError(lineno, "content before the first section header")
        if section == "variables":
            if len(fields) != 1:
                raise ModelParseError(lineno, "expected one variable name")
            if fields[0] in names:
                raise ModelParseError(lineno, f"duplicate variable {fields[0]!r}")
            names.append(fields[0])
        elif section == "edges":
            if len(fields) == 4 and fields[1] == "->":
                fields = [fields[0], fields[2], fields[3]]
            if len(fields) == 3 and fields[1] == "->":
                fields = [fields[0], fields[2], "+"]
            if len(fields) not in (2, 3):
                raise ModelParseError(lineno, "expected 'src dst [polarity]'")
            pol = fields[2] if len(fields) == 3 else "+"
            if pol not in _POLARITY:
                raise ModelParseError(lineno, f"polarity must be one of + - 1 0, got {pol!r}")
            edges.append((fields[0], fields[1], _POLARITY[pol]))
            edge_lines[len(edges) - 1] = lineno
        else:
            if len(fields) != 2:
                raise ModelParseError(lineno, "expected 'var p'")
            try:
                p = float(fields[1])
            except ValueError:
                raise ModelParseError(lineno, f"not a number: {fields[1]!r}") from None
            if not 0.0 <= p <= 1.0:
                raise ModelParseError(lineno, f"noise probability must lie in [0, 1], got {p}")
            if fields[0] == "*":
                default = p
            else:
                noise[fields[0]] = (p, lineno)

    if not names:
        raise ModelParseError(0, "no [variables] declared")
    for k, (s, t, _) in enumerate(edges):
        for v in (s, t):
            if v not in names:
                raise ModelParseError(edge_lines[k], f"undeclared variable {v!r}")
        if s == t:
            raise ModelParseError(edge_lines[k], f"self-loop on {s!r}")
    for v, (_, lineno) in noise.items():
        if v not in names:
            raise ModelParseError(lineno, f"undeclared variable {v!r}")
    probs = []
    for v in names:
        if v in noise:
            probs.append(noise[v][0])
        elif default is not None:
            probs.append(default)
        else:
            raise ModelParseError(0, f"no noise probability for {v!r} and no '*' default")
    try:
        return BscmModel.from_edges(names, edges, probs)
    except ModelError as exc:
        raise ModelParseError(0, str(exc)) from exc


def format_model(model: BscmModel) -> str:
    lines = ["[variables]", *model.names, "", "[edges]"]
    for j, pa in enumerate(model.parents):
        for i, c in sorted(pa.items()):
            lines.append(f"{model.names[i]} {model.names[j]} {'+' if c == 1 else '-'}")
    lines += ["", "[noise]"]
    lines += [f"{name} {p!r}" for name, p in zip(model.names, model.noise_p)]
    return "\n".join(lines) + "\n"
