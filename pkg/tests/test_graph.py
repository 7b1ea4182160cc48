import networkx as nx
import pydot
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bicausal.graph import CausalGraph

NAMES = tuple(f"V{k}" for k in range(6))
edge_sets = st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda e: e[0] != e[1]), max_size=15)


def test_rejects_self_loop_and_range():
    with pytest.raises(ValueError):
        CausalGraph(("a", "b"), {(0, 0)})
    with pytest.raises(ValueError):
        CausalGraph(("a", "b"), {(0, 2)})


def test_chain_closure():
    g = CausalGraph(("1", "2", "3"), {(0, 1), (1, 2)})
    assert g.transitive_closure().edges == {(0, 1), (1, 2), (0, 2)}


@given(edge_sets)
def test_closure_matches_networkx_and_is_idempotent(edges):
    g = CausalGraph(NAMES, edges)
    closed = g.transitive_closure()
    ref = nx.transitive_closure(nx.DiGraph(list(edges)), reflexive=False)
    assert closed.edges == {(s, t) for s, t in ref.edges if s != t}
    assert closed.transitive_closure() == closed


def test_topological_order_and_cycle():
    g = CausalGraph(("a", "b", "c"), {(2, 0), (0, 1)})
    assert g.topological_order() == [2, 0, 1]
    with pytest.raises(ValueError):
        CausalGraph(("a", "b"), {(0, 1), (1, 0)}).topological_order()


def test_two_cycle_and_parents():
    g = CausalGraph(("a", "b", "c"), {(0, 1), (1, 0), (2, 1)})
    assert g.has_two_cycle()
    assert g.parents(1) == {0, 2}


def test_dot_parses():
    g = CausalGraph(('x "quoted"', "y", "z"), {(0, 1), (1, 2)})
    parsed = pydot.graph_from_dot_data(g.to_dot("G", {(0, 1): "0.5"}))[0]
    assert len(parsed.get_edges()) == 2
    assert {n.get_name().strip('"') for n in parsed.get_nodes()} >= {"y", "z"}


def test_named_round_trip():
    g = CausalGraph.from_named_edges(("a", "b", "c"), [("c", "a")])
    assert g.named_edges() == [("c", "a")]
