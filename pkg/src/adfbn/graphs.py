"""Small directed-graph helpers over integer or hashable vertices."""
from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Mapping, Sequence, TypeVar

V = TypeVar("V", bound=Hashable)


def strongly_connected_components(
    vertices: Iterable[V], successors: Callable[[V], Iterable[V]]
) -> list[list[V]]:
    """Tarjan's algorithm, iterative so deep state graphs do not hit the recursion limit.

    Components come out in reverse topological order (sinks first).
    """
    index: dict[V, int] = {}
    lowlink: dict[V, int] = {}
    on_stack: set[V] = set()
    stack: list[V] = []
    components: list[list[V]] = []
    counter = 0

    for root in vertices:
        if root in index:
            continue
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
    return components


def terminal_components(
    vertices: Iterable[V], successors: Callable[[V], Iterable[V]]
) -> list[list[V]]:
    """SCCs with no edge leaving them."""
    result = []
    for comp in strongly_connected_components(vertices, successors):
        members = set(comp)
        if all(w in members for v in comp for w in successors(v)):
            result.append(comp)
    return result


def has_cycle_through(comp: Sequence[V], successors: Callable[[V], Iterable[V]]) -> bool:
    """True if the SCC ``comp`` carries at least one cycle."""
    if len(comp) > 1:
        return True
    v = comp[0]
    return v in set(successors(v))


def is_acyclic(vertices: Iterable[V], adjacency: Mapping[V, Iterable[V]]) -> bool:
    """Kahn's algorithm on the subgraph induced by ``vertices``."""
    verts = set(vertices)
    indeg = {v: 0 for v in verts}
    for v in verts:
        for w in adjacency.get(v, ()):
            if w in verts:
                indeg[w] += 1
    queue = deque(v for v, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in adjacency.get(v, ()):
            if w in verts:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    return seen == len(verts)


def reverse_reachable(targets: Iterable[V], predecessors: Mapping[V, Iterable[V]]) -> set[V]:
    seen = set(targets)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for u in predecessors.get(v, ()):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen
