"""Signed regulatory-graph analysis: cycle signs, fixpoint-existence criteria,
minimum feedback vertex sets and exact two-valued model counting."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping

import networkx as nx
import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .formula import LinkType
from .graphs import has_cycle_through, is_acyclic, strongly_connected_components
from .model import NEG, POS, Adf, BooleanNetwork, bn_to_adf, classify
from .semantics import DEFAULT_BUDGET, Budget

CONCLUSIONS = ("unique", "at_most_one", "at_least_one", "none", "no_conclusion")


@dataclass(frozen=True)
class SignedCycle:
    vertices: tuple[str, ...]
    signs: tuple[str, ...]  # signs[i] labels the arc vertices[i] -> vertices[i+1]

    @property
    def positive(self) -> bool:
        return self.signs.count(NEG) % 2 == 0

    @property
    def sign(self) -> str:
        return "positive" if self.positive else "negative"

    def rotated(self, k: int) -> "SignedCycle":
        k %= len(self.vertices)
        return SignedCycle(self.vertices[k:] + self.vertices[:k], self.signs[k:] + self.signs[:k])


def signed_graph(M: BooleanNetwork | Adf) -> dict[tuple[str, str], frozenset[str]]:
    """Sign set of every link, from the semantic role of the parent in the child's function.

    Links that never matter carry both signs.  Raises PreconditionError on a
    link that is neither supporting nor attacking.
    """
    D = bn_to_adf(M) if isinstance(M, BooleanNetwork) else M
    signs = {}
    for (u, v), kind in classify(D).per_link.items():
        if kind is LinkType.NEITHER:
            raise PreconditionError(
                f"not sign-definite: the function of {v!r} is neither increasing nor decreasing in {u!r}"
            )
        signs[(u, v)] = {
            LinkType.SUPPORTING: frozenset(POS),
            LinkType.ATTACKING: frozenset(NEG),
            LinkType.BOTH: frozenset((POS, NEG)),
        }[kind]
    return signs


def _digraph(vertices: Iterable[str], signs: Mapping[tuple[str, str], frozenset[str]]) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(vertices)
    G.add_edges_from(signs)
    return G


def iter_signed_cycles(
    vertices: Iterable[str], signs: Mapping[tuple[str, str], frozenset[str]]
) -> Iterator[SignedCycle]:
    """Every simple cycle, once per choice of sign on its arcs.

    Each cycle starts at its earliest vertex in ``vertices`` order, so the
    output does not depend on string hashing inside networkx.
    """
    vertices = list(vertices)
    rank = {v: i for i, v in enumerate(vertices)}
    G = _digraph(vertices, signs)
    for cyc in nx.simple_cycles(G):
        k = min(range(len(cyc)), key=lambda i: rank[cyc[i]])
        cyc = cyc[k:] + cyc[:k]
        arcs = [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
        for choice in itertools.product(*(sorted(signs[a]) for a in arcs)):
            yield SignedCycle(tuple(cyc), tuple(choice))


def signed_cycles(M: BooleanNetwork, budget: Budget = DEFAULT_BUDGET) -> list[SignedCycle]:
    """All signed simple cycles, sorted by length, then vertex positions, then signs."""
    signs = signed_graph(M)
    out = []
    for cyc in iter_signed_cycles(M.variables, signs):
        out.append(cyc)
        if len(out) > budget.max_cycles:
            raise BudgetExceeded(f"more than {budget.max_cycles} signed cycles")
    rank = M.index
    return sorted(out, key=lambda c: (len(c.vertices), [rank[v] for v in c.vertices], c.signs))


def has_negative_cycle(vertices: Iterable[str], signs: Mapping[tuple[str, str], frozenset[str]]) -> bool:
    """Odd closed walk in the sign-doubled graph.

    A closed walk with an odd number of negative arcs splits into simple
    cycles, at least one of them negative, so this decides negative cycles
    exactly without enumerating them.
    """
    vertices = list(vertices)
    out: dict[str, list[tuple[str, int]]] = {v: [] for v in vertices}
    for (u, v), ss in signs.items():
        for s in ss:
            out[u].append((v, int(s == NEG)))
    for root in vertices:
        seen = {(root, 0)}
        queue = deque(seen)
        while queue:
            v, parity = queue.popleft()
            for w, flip in out[v]:
                node = (w, parity ^ flip)
                if node == (root, 1):
                    return True
                if node not in seen:
                    seen.add(node)
                    queue.append(node)
    return False


def has_positive_cycle(
    vertices: Iterable[str], signs: Mapping[tuple[str, str], frozenset[str]], max_cycles: int = 100_000
) -> bool:
    """Lazy cycle enumeration with early exit.

    Even closed walks may be built from two negative cycles, so parity
    reachability cannot decide this case.
    """
    for k, cyc in enumerate(iter_signed_cycles(vertices, signs)):
        if cyc.positive:
            return True
        if k >= max_cycles:
            raise BudgetExceeded(f"no positive cycle among the first {max_cycles} cycles")
    return False


def min_fvs(vertices: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]], max_vertices: int = 20):
    """Minimum feedback vertex set by exact search over subsets of increasing size.

    Returns ``(tau, witness)``; ties are broken by the first subset in
    vertex order.
    """
    vertices = list(dict.fromkeys(vertices))
    adjacency: dict[Hashable, list[Hashable]] = {v: [] for v in vertices}
    for u, v in edges:
        adjacency[u].append(v)
    # only vertices lying on some cycle are useful
    comps = strongly_connected_components(vertices, lambda v: adjacency[v])
    cyclic = [v for v in vertices if any(v in c and has_cycle_through(c, lambda x: adjacency[x]) for c in comps)]
    if len(cyclic) > max_vertices:
        raise BudgetExceeded(f"exact FVS search over {len(cyclic)} vertices exceeds the budget of {max_vertices}")
    forced = [v for v in cyclic if v in adjacency[v]]
    rest = [v for v in cyclic if v not in forced]
    for k in range(len(rest) + 1):
        for extra in itertools.combinations(rest, k):
            removed = set(forced) | set(extra)
            if is_acyclic([v for v in vertices if v not in removed], adjacency):
                return len(removed), frozenset(removed)
    raise AssertionError("removing every cyclic vertex always leaves an acyclic graph")


def count_two_valued(D: Adf | BooleanNetwork, budget: Budget = DEFAULT_BUDGET, chunk_bits: int = 16) -> int:
    """|{omega : omega(s) = omega(C_s) for all s}| by a full scan in index-range chunks."""
    if isinstance(D, BooleanNetwork):
        D = bn_to_adf(D)
    n = len(D.atoms)
    budget.check2(n)
    total = 0
    step = 1 << min(n, chunk_bits)
    for start in range(0, 1 << n, step):
        idx = np.arange(start, start + step, dtype=np.int64)
        ok = np.ones(step, dtype=bool)
        for s, rule in enumerate(D.rules):
            code = np.zeros(step, dtype=np.int64)
            for p in rule.parents:
                code = (code << 1) | ((idx >> (n - 1 - p)) & 1)
            ok &= rule.table[code] == ((idx >> (n - 1 - s)) & 1)
        total += int(ok.sum())
    return total


def _admits(conclusion: str, count: int) -> bool:
    return {
        "unique": count == 1,
        "at_most_one": count <= 1,
        "at_least_one": count >= 1,
        "none": count == 0,
        "no_conclusion": True,
    }[conclusion]


def strongest(drawn: Iterable[str]) -> str:
    """Single summary of the conclusions drawn: none > unique > at_most_one / at_least_one."""
    drawn = set(drawn)
    if "none" in drawn:
        return "none"
    if "unique" in drawn or {"at_most_one", "at_least_one"} <= drawn:
        return "unique"
    for k in ("at_most_one", "at_least_one"):
        if k in drawn:
            return k
    return "no_conclusion"


@dataclass
class ExistenceReport:
    acyclic: bool
    has_positive_cycle: bool
    has_negative_cycle: bool
    negative_closed_scc: bool
    conclusion: str
    conclusions: list[str]
    fvs_size: int
    fvs_witness: frozenset[str]
    exact_count: int | None = None
    redundant_link_on_cycle: bool = False
    negative_in_arc_everywhere: bool = False
    notes: list[str] = field(default_factory=list)

    def violations(self) -> list[str]:
        """Drawn conclusions (and the FVS bound) contradicted by the exact count."""
        if self.exact_count is None:
            return []
        c = self.exact_count
        bad = [f"concluded {k} but counted {c}" for k in self.conclusions if not _admits(k, c)]
        if self.negative_in_arc_everywhere and c > 2**self.fvs_size:
            bad.append(f"counted {c} > 2^tau = {2 ** self.fvs_size}")
        return bad

    @property
    def consistent(self) -> bool:
        return not self.violations()

    def as_dict(self) -> dict:
        return {
            "acyclic": self.acyclic,
            "has_positive_cycle": self.has_positive_cycle,
            "has_negative_cycle": self.has_negative_cycle,
            "negative_closed_scc": self.negative_closed_scc,
            "conclusion": self.conclusion,
            "conclusions": list(self.conclusions),
            "fvs_size": self.fvs_size,
            "fvs_witness": sorted(self.fvs_witness),
            "exact_count": self.exact_count,
            "redundant_link_on_cycle": self.redundant_link_on_cycle,
            "negative_in_arc_everywhere": self.negative_in_arc_everywhere,
            "notes": list(self.notes),
        }


def negative_closed_scc(vertices: Iterable[str], signs: Mapping[tuple[str, str], frozenset[str]], max_cycles: int = 100_000) -> bool:
    """Some SCC carrying a cycle has only negative cycles and no arcs entering it from outside."""
    vertices = list(vertices)
    succ: dict[str, list[str]] = {v: [] for v in vertices}
    for u, v in signs:
        succ[u].append(v)
    for comp in strongly_connected_components(vertices, lambda v: succ[v]):
        if not has_cycle_through(comp, lambda v: succ[v]):
            continue
        members = set(comp)
        if any(u not in members for (u, v) in signs if v in members):
            continue
        inner = {a: s for a, s in signs.items() if a[0] in members and a[1] in members}
        if not has_positive_cycle(comp, inner, max_cycles):
            return True
    return False


def existence_report(M: BooleanNetwork, budget: Budget = DEFAULT_BUDGET) -> ExistenceReport:
    """Apply the cycle-sign fixpoint criteria; attach the exact count when affordable."""
    signs = signed_graph(M)
    V = M.variables
    G = _digraph(V, signs)
    acyclic = nx.is_directed_acyclic_graph(G)
    neg = has_negative_cycle(V, signs)
    pos = has_positive_cycle(V, signs, budget.max_cycles)
    closed = negative_closed_scc(V, signs, budget.max_cycles)

    redundant = [a for a, s in signs.items() if len(s) == 2]
    on_cycle = any(
        G.has_edge(*a) and (a[0] == a[1] or nx.has_path(G, a[1], a[0])) for a in redundant
    )
    notes = []
    drawn = []
    if on_cycle:
        notes.append("a link that never influences its target lies on a cycle; criteria not applied")
    else:
        if acyclic:
            drawn.append("unique")
        if not pos:
            drawn.append("at_most_one")
        if not neg:
            drawn.append("at_least_one")
        if closed:
            drawn.append("none")
    conclusion = strongest(drawn)

    tau, witness = min_fvs(V, signs.keys(), budget.state_atoms)
    attacked = {v for (u, v), s in signs.items() if s == frozenset(NEG)}
    everywhere = bool(V) and all(v in attacked for v in V)

    exact = None
    if len(V) <= budget.state_atoms:
        exact = count_two_valued(M, budget)
    return ExistenceReport(
        acyclic=acyclic,
        has_positive_cycle=pos,
        has_negative_cycle=neg,
        negative_closed_scc=closed,
        conclusion=conclusion,
        conclusions=drawn,
        fvs_size=tau,
        fvs_witness=witness,
        exact_count=exact,
        redundant_link_on_cycle=on_cycle,
        negative_in_arc_everywhere=everywhere,
        notes=notes,
    )
