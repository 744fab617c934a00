"""State transition graphs, attractors, subspaces and trap spaces of Boolean networks.

States are bit tuples in variable order; inside an :class:`Stg` they are
integers whose most significant bit is the first variable, so ``format(i,
f"0{n}b")`` is the usual ``1010`` rendering.  Subspaces share the
interpretation encoding of :mod:`adfbn.semantics` with ``U`` standing for a
free variable.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .formula import U, atoms as free_atoms, constant_value, eval2, substitute
from .graphs import reverse_reachable, terminal_components
from .model import BooleanNetwork
from .semantics import (
    DEFAULT_BUDGET,
    Budget,
    Interp3,
    State,
    all_interpretations,
    all_states,
    index_state,
    render,
    state_index,
)


class Scheme(enum.Enum):
    SYNC = "sync"
    ASYNC = "async"  # exactly one variable updated per step
    GENERAL = "general"  # any non-empty set of variables updated per step


def successors(M: BooleanNetwork, s: Sequence[int], scheme: Scheme | str = Scheme.SYNC) -> set[State]:
    """One-step successors of ``s`` evaluated directly on the formulas.

    Asynchronous schemes only keep the stutter step ``s -> s`` when no
    variable can change.
    """
    scheme = Scheme(scheme)
    s = tuple(s)
    if len(s) != len(M.variables):
        raise ValueError(f"state has {len(s)} positions, network has {len(M.variables)} variables")
    omega = dict(zip(M.variables, s))
    image = tuple(eval2(M.functions[v], omega) for v in M.variables)
    if scheme is Scheme.SYNC:
        return {image}
    changing = [i for i in range(len(s)) if image[i] != s[i]]
    if not changing:
        return {s}
    if scheme is Scheme.ASYNC:
        subsets = [(i,) for i in changing]
    else:
        subsets = [c for r in range(1, len(changing) + 1) for c in itertools.combinations(changing, r)]
    out = set()
    for subset in subsets:
        t = list(s)
        for i in subset:
            t[i] = image[i]
        out.add(tuple(t))
    return out


@dataclass(frozen=True, eq=False)
class Stg:
    variables: tuple[str, ...]
    scheme: Scheme
    succ: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.variables)

    def __len__(self) -> int:
        return len(self.succ)

    def label(self, i: int) -> str:
        return format(i, f"0{self.n}b") if self.n else ""

    def state(self, i: int) -> State:
        return index_state(i, self.n)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, out in enumerate(self.succ) for j in out]

    def predecessors(self) -> dict[int, list[int]]:
        pred: dict[int, list[int]] = {}
        for i, out in enumerate(self.succ):
            for j in out:
                pred.setdefault(j, []).append(i)
        return pred


def next_states(M: BooleanNetwork, budget: Budget = DEFAULT_BUDGET) -> np.ndarray:
    """Synchronous image of every state, as a (2^n x n) bit array."""
    n = len(M.variables)
    budget.check2(n)
    states = all_states(n)
    image = np.empty_like(states)
    for v, rule in enumerate(M.rules):
        code = np.zeros(len(states), dtype=np.int64)
        for p in rule.parents:
            code = (code << 1) | states[:, p]
        image[:, v] = rule.table[code]
    return image


def build_stg(M: BooleanNetwork, scheme: Scheme | str = Scheme.SYNC, budget: Budget = DEFAULT_BUDGET) -> Stg:
    scheme = Scheme(scheme)
    n = len(M.variables)
    image = next_states(M, budget)
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    target = image @ weights if n else np.zeros(1, dtype=np.int64)
    if scheme is Scheme.SYNC:
        return Stg(M.variables, scheme, tuple((int(t),) for t in target))
    # bits that would flip under their own update
    flips = (np.arange(1 << n, dtype=np.int64) ^ target).tolist()
    succ = []
    for i, mask in enumerate(flips):
        if mask == 0:
            succ.append((i,))
        elif scheme is Scheme.ASYNC:
            succ.append(tuple(sorted(i ^ (1 << b) for b in range(n) if mask >> b & 1)))
        else:
            subs = []
            sub = mask
            while sub:
                subs.append(i ^ sub)
                sub = (sub - 1) & mask
            succ.append(tuple(sorted(subs)))
    return Stg(M.variables, scheme, tuple(succ))


def _indices(G: Stg, states: Iterable) -> set[int]:
    out = set()
    for s in states:
        if isinstance(s, str):
            out.add(int(s, 2) if s else 0)
        elif isinstance(s, (int, np.integer)):
            out.add(int(s))
        else:
            out.add(state_index(s))
    return out


def is_trap_set(G: Stg, states: Iterable) -> bool:
    """No transition leaves ``states`` (bit strings, bit tuples or indices)."""
    members = _indices(G, states)
    return all(j in members for i in members for j in G.succ[i])


def attractor_indices(G: Stg) -> list[list[int]]:
    comps = terminal_components(range(len(G)), lambda i: G.succ[i])
    return sorted(sorted(c) for c in comps)


def attractors(G: Stg) -> list[frozenset[str]]:
    """Terminal strongly connected components, as sets of bit strings."""
    return [frozenset(G.label(i) for i in comp) for comp in attractor_indices(G)]


def stable_states(G: Stg) -> list[str]:
    return sorted(G.label(c[0]) for c in attractor_indices(G) if len(c) == 1)


def basins(G: Stg) -> list[tuple[frozenset[str], frozenset[str]]]:
    """Each attractor with the states that can reach it (basins overlap under async)."""
    pred = G.predecessors()
    out = []
    for comp in attractor_indices(G):
        reach = reverse_reachable(comp, pred)
        out.append((frozenset(G.label(i) for i in comp), frozenset(G.label(i) for i in reach)))
    return out


# --------------------------------------------------------------------------
# subspaces


def subspace_states(m: Sequence[int]) -> list[State]:
    """S[m]: states agreeing with ``m`` on its fixed variables, sorted."""
    free = [i for i, v in enumerate(m) if v == U]
    out = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        s = list(m)
        for i, b in zip(free, bits):
            s[i] = b
        out.append(tuple(s))
    return out


def subspace_leq(m1: Sequence[int], m2: Sequence[int]) -> bool:
    """m1 <= m2 iff S[m1] is a subset of S[m2], decided on fixed-bit masks."""
    mask1, val1 = _mask_value(m1)
    mask2, val2 = _mask_value(m2)
    return (mask2 & ~mask1) == 0 and (val1 & mask2) == val2


def _mask_value(m: Sequence[int]) -> tuple[int, int]:
    mask = val = 0
    for v in m:
        mask <<= 1
        val <<= 1
        if v != U:
            mask |= 1
            val |= v
    return mask, val


def f_of_m(M: BooleanNetwork, m: Sequence[int]) -> Interp3:
    """F[m]: the constant value of each f_i with m's fixed variables substituted, else U."""
    fixed = {v: x for v, x in zip(M.variables, m) if x != U}
    out = []
    for v in M.variables:
        c = constant_value(substitute(M.functions[v], fixed))
        out.append(U if c is None else c)
    return tuple(out)


def is_trap_space(M: BooleanNetwork, m: Sequence[int]) -> bool:
    """S[F[m]] is contained in S[m]: every variable fixed by m is forced to its value."""
    return _forced(m, f_of_m(M, m))


def _forced(m: Sequence[int], fm: Sequence[int]) -> bool:
    return all(x == U or x == f for x, f in zip(m, fm))


def is_trap_space_stg(G: Stg, m: Sequence[int]) -> bool:
    """Direct check: S[m] is a trap set of ``G``."""
    mask, val = _mask_value(m)
    members = [i for i in range(len(G)) if i & mask == val]
    return all((j & mask) == val for i in members for j in G.succ[i])


def trap_spaces_by_closure(G: Stg, chunk: int = 512) -> list[Interp3]:
    """All subspaces whose state set no edge of ``G`` leaves."""
    edges = G.edges()
    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    spaces = all_subspaces(G.n)
    mv = np.array([_mask_value(m) for m in spaces], dtype=np.int64)
    out = []
    for start in range(0, len(spaces), chunk):
        mask = mv[start:start + chunk, 0][:, None]
        val = mv[start:start + chunk, 1][:, None]
        leaves = ((src[None, :] & mask) == val) & ((dst[None, :] & mask) != val)
        ok = ~leaves.any(axis=1)
        out.extend(m for m, k in zip(spaces[start:start + chunk], ok.tolist()) if k)
    return out


class _ForcedValueScan:
    """F[m] with per-variable memoisation on the restriction of m to the parents."""

    def __init__(self, M: BooleanNetwork):
        self.M = M
        self.parents = [[M.index[p] for p in sorted(free_atoms(M.functions[v]), key=M.index.get)] for v in M.variables]
        self.memo: list[dict[tuple[int, ...], int]] = [{} for _ in M.variables]

    def value(self, i: int, m: Sequence[int]) -> int:
        key = tuple(m[p] for p in self.parents[i])
        memo = self.memo[i]
        if key not in memo:
            names = self.M.variables
            fixed = {names[p]: x for p, x in zip(self.parents[i], key) if x != U}
            c = constant_value(substitute(self.M.functions[names[i]], fixed))
            memo[key] = U if c is None else c
        return memo[key]

    def is_trap(self, m: Sequence[int]) -> bool:
        for i, x in enumerate(m):
            if x != U and self.value(i, m) != x:
                return False
        return True


def all_trap_spaces(M: BooleanNetwork, budget: Budget = DEFAULT_BUDGET) -> list[Interp3]:
    """Every trap space, by a full 3^n scan filtered with the F[m] criterion."""
    n = len(M.variables)
    budget.check3(n)
    scan = _ForcedValueScan(M)
    out = []
    for m in itertools.product((0, 1, U), repeat=n):
        if scan.is_trap(m):
            out.append(m)
    return out


def _subset_matrix(block: np.ndarray, other: np.ndarray) -> np.ndarray:
    """[i, j] = S[block_i] is a subset of S[other_j]."""
    mb, vb = block[:, 0][:, None], block[:, 1][:, None]
    mo, vo = other[:, 0][None, :], other[:, 1][None, :]
    return ((mo & ~mb) == 0) & ((vb & mo) == vo)


def minimal_subspaces(spaces: Sequence[Sequence[int]], chunk: int = 256) -> list[Interp3]:
    """Spaces with no other listed space strictly inside them."""
    if not spaces:
        return []
    mv = np.array([_mask_value(m) for m in spaces], dtype=np.int64)
    keep = []
    for start in range(0, len(mv), chunk):
        inside = _subset_matrix(mv, mv[start:start + chunk])  # [j, i]: S[j] subset of S[start+i]
        keep.extend((inside.sum(axis=0) == 1).tolist())
    return [tuple(m) for m, k in zip(spaces, keep) if k]


def maximal_subspaces(spaces: Sequence[Sequence[int]], chunk: int = 256) -> list[Interp3]:
    """Non-trivial spaces with no other non-trivial listed space strictly containing them."""
    spaces = [tuple(m) for m in spaces if any(x != U for x in m)]
    if not spaces:
        return []
    mv = np.array([_mask_value(m) for m in spaces], dtype=np.int64)
    keep = []
    for start in range(0, len(mv), chunk):
        inside = _subset_matrix(mv[start:start + chunk], mv)  # [i, j]: S[start+i] subset of S[j]
        keep.extend((inside.sum(axis=1) == 1).tolist())
    return [m for m, k in zip(spaces, keep) if k]


@dataclass
class TrapReport:
    variables: tuple[str, ...]
    scheme: Scheme
    trap_spaces: list[Interp3]
    minimal: list[Interp3]
    maximal: list[Interp3]
    attractors: list[frozenset[str]]
    stable_states: list[str]
    basins: list[tuple[frozenset[str], frozenset[str]]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "scheme": self.scheme.value,
            "trap_spaces": sorted(render(m, "-") for m in self.trap_spaces),
            "minimal_trap_spaces": sorted(render(m, "-") for m in self.minimal),
            "maximal_trap_spaces": sorted(render(m, "-") for m in self.maximal),
            "attractors": sorted(sorted(a) for a in self.attractors),
            "stable_states": sorted(self.stable_states),
            "basins": [
                {"attractor": sorted(a), "basin": sorted(b)} for a, b in sorted(self.basins, key=lambda ab: sorted(ab[0]))
            ],
        }


def trap_spaces(M: BooleanNetwork, scheme: Scheme | str = Scheme.SYNC, budget: Budget = DEFAULT_BUDGET) -> TrapReport:
    spaces = all_trap_spaces(M, budget)
    G = build_stg(M, scheme, budget)
    return TrapReport(
        variables=M.variables,
        scheme=G.scheme,
        trap_spaces=spaces,
        minimal=minimal_subspaces(spaces),
        maximal=maximal_subspaces(spaces),
        attractors=attractors(G),
        stable_states=stable_states(G),
        basins=basins(G),
    )


def all_subspaces(n: int) -> list[Interp3]:
    return [tuple(int(x) for x in row) for row in all_interpretations(n)]
