"""Directed graphs over named variables."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CausalGraph:
    """Directed graph on ``len(node_names)`` nodes; edges are ``(source, target)`` indices."""

    node_names: tuple
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "node_names", tuple(str(x) for x in self.node_names))
        edges = frozenset((int(s), int(t)) for s, t in self.edges)
        d = len(self.node_names)
        for s, t in edges:
            if s == t:
                raise ValueError(f"self-loop on node {self.node_names[s] if s < d else s}")
            if not (0 <= s < d and 0 <= t < d):
                raise ValueError(f"edge ({s}, {t}) out of range for {d} nodes")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_named_edges(cls, node_names, named_edges):
        index = {name: k for k, name in enumerate(node_names)}
        return cls(tuple(node_names), frozenset((index[s], index[t]) for s, t in named_edges))

    @property
    def d(self) -> int:
        return len(self.node_names)

    def named_edges(self) -> list:
        return [(self.node_names[s], self.node_names[t]) for s, t in sorted(self.edges)]

    def has_two_cycle(self) -> bool:
        return any((t, s) in self.edges for s, t in self.edges)

    def parents(self, node) -> set:
        return {s for s, t in self.edges if t == node}

    def transitive_closure(self) -> CausalGraph:
        """Edge ``i -> j`` whenever a directed path leads from ``i`` to ``j``."""
        reach = {k: set() for k in range(self.d)}
        for s, t in self.edges:
            reach[s].add(t)
        changed = True
        while changed:
            changed = False
            for s in range(self.d):
                extra = set().union(*(reach[t] for t in reach[s])) - reach[s] - {s}
                if extra:
                    reach[s] |= extra
                    changed = True
        return CausalGraph(self.node_names, frozenset((s, t) for s in reach for t in reach[s] if s != t))

    def topological_order(self) -> list:
        indeg = [0] * self.d
        children = {k: [] for k in range(self.d)}
        for s, t in self.edges:
            indeg[t] += 1
            children[s].append(t)
        ready = [k for k in range(self.d) if indeg[k] == 0]
        order = []
        while ready:
            k = ready.pop(0)
            order.append(k)
            for c in sorted(children[k]):
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != self.d:
            raise ValueError("graph contains a directed cycle")
        return order

    def relabel(self, permutation) -> CausalGraph:
        """Move node ``k`` to position ``permutation[k]``."""
        names = [None] * self.d
        for k, name in enumerate(self.node_names):
            names[permutation[k]] = name
        return CausalGraph(tuple(names), frozenset((permutation[s], permutation[t]) for s, t in self.edges))

    def to_dot(self, name="G", edge_labels=None) -> str:
        """Graphviz ``digraph`` text; ``edge_labels`` maps ``(s, t)`` to a label string."""
        def q(text):
            return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'

        lines = [f"digraph {q(name)} {{"]
        for node in self.node_names:
            lines.append(f"  {q(node)};")
        for s, t in sorted(self.edges):
            attr = ""
            if edge_labels and (s, t) in edge_labels:
                attr = f" [label={q(edge_labels[(s, t)])}]"
            lines.append(f"  {q(self.node_names[s])} -> {q(self.node_names[t])}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"
