import random

import networkx as nx

from adfbn.graphs import (
    has_cycle_through,
    is_acyclic,
    reverse_reachable,
    strongly_connected_components,
    terminal_components,
)


def random_digraph(rng, n, p):
    adj = {v: [w for w in range(n) if rng.random() < p] for v in range(n)}
    G = nx.DiGraph()
    G.add_nodes_from(range(n))
    G.add_edges_from((v, w) for v, ws in adj.items() for w in ws)
    return adj, G


def test_tarjan_matches_networkx():
    rng = random.Random(71)
    for _ in range(300):
        adj, G = random_digraph(rng, rng.randint(0, 12), rng.random() * 0.4)
        ours = sorted(sorted(c) for c in strongly_connected_components(list(adj), adj.__getitem__))
        assert ours == sorted(sorted(c) for c in nx.strongly_connected_components(G))
        term = sorted(sorted(c) for c in terminal_components(list(adj), adj.__getitem__))
        assert term == sorted(sorted(c) for c in nx.attracting_components(G))
        assert is_acyclic(list(adj), adj) == nx.is_directed_acyclic_graph(G)


def test_deep_chain_does_not_recurse():
    n = 50_000
    adj = {i: [i + 1] for i in range(n - 1)}
    adj[n - 1] = [0]
    comps = strongly_connected_components(range(n), adj.__getitem__)
    assert len(comps) == 1 and len(comps[0]) == n


def test_cycle_through_singletons():
    assert has_cycle_through([0], {0: [0]}.__getitem__)
    assert not has_cycle_through([0], {0: []}.__getitem__)
    assert has_cycle_through([0, 1], {0: [1], 1: [0]}.__getitem__)


def test_reverse_reachable():
    pred = {2: [1], 1: [0], 3: [2]}
    assert reverse_reachable([2], pred) == {0, 1, 2}
