"""ADF and Boolean network types with the conversion between them.

Also classifies links as supporting or attacking.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ModelMismatchError
from .formula import (
    Atom,
    Formula,
    LinkType,
    Polarity,
    atoms as free_atoms,
    consensus_table,
    semantic_polarity,
    syntactic_polarity,
    to_nnf,
    truth_table,
)

POS, NEG = "+", "-"


class MixedPolarityWarning(UserWarning):
    """An atom occurs both positively and negatively in an NNF condition."""


@dataclass(frozen=True)
class Rule:
    """A condition compiled against the model's atom order.

    ``parents`` are indices of the condition's free atoms (ascending), the
    first parent being the most significant bit of a ``table`` index and the
    most significant base-3 digit of a ``table3`` index.
    """

    parents: tuple[int, ...]
    table: np.ndarray
    table3: np.ndarray


def compile_rules(names: Sequence[str], conditions: Mapping[str, Formula]) -> tuple[Rule, ...]:
    pos = {a: i for i, a in enumerate(names)}
    rules = []
    for a in names:
        phi = conditions[a]
        parents = tuple(sorted(pos[p] for p in free_atoms(phi)))
        table = truth_table(phi, [names[i] for i in parents])
        rules.append(Rule(parents, table, consensus_table(table, len(parents))))
    return tuple(rules)


def _check_atoms(names: Sequence[str], conditions: Mapping[str, Formula], what: str) -> None:
    if len(set(names)) != len(names):
        dup = next(a for a in names if names.count(a) > 1)
        raise ValueError(f"duplicate {what} {dup!r}")
    missing = [a for a in names if a not in conditions]
    if missing:
        raise ValueError(f"no condition for {what} {missing[0]!r}")
    extra = [a for a in conditions if a not in set(names)]
    if extra:
        raise ModelMismatchError(f"condition given for unknown {what} {extra[0]!r}")
    known = set(names)
    for a in names:
        for p in free_atoms(conditions[a]):
            if p not in known:
                raise ModelMismatchError(f"condition of {a!r} mentions unknown {what} {p!r}")


@dataclass(frozen=True, eq=False)
class Adf:
    atoms: tuple[str, ...]
    conditions: Mapping[str, Formula]
    links: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "conditions", dict(self.conditions))
        object.__setattr__(self, "links", frozenset(self.links))
        _check_atoms(self.atoms, self.conditions, "atom")
        known = set(self.atoms)
        for u, v in self.links:
            if u not in known or v not in known:
                raise ModelMismatchError(f"link ({u}, {v}) has an endpoint outside the atom set")
        for s in self.atoms:
            for p in free_atoms(self.conditions[s]):
                if (p, s) not in self.links:
                    raise ValueError(f"condition of {s!r} uses {p!r} but there is no link ({p}, {s})")

    @classmethod
    def from_conditions(cls, conditions: Mapping[str, Formula], atoms: Iterable[str] | None = None) -> "Adf":
        """Build an ADF whose links are exactly the free atoms of each condition."""
        names = tuple(atoms) if atoms is not None else tuple(conditions)
        links = {(p, s) for s in names if s in conditions for p in free_atoms(conditions[s])}
        return cls(names, conditions, frozenset(links))

    def __eq__(self, other):
        if not isinstance(other, Adf):
            return NotImplemented
        return (self.atoms, self.links) == (other.atoms, other.links) and dict(self.conditions) == dict(other.conditions)

    def __hash__(self):
        return hash((self.atoms, self.links))

    def __len__(self) -> int:
        return len(self.atoms)

    @cached_property
    def index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.atoms)}

    def parents(self, s: str) -> list[str]:
        """par_D(s) in atom order."""
        return [u for u in self.atoms if (u, s) in self.links]

    def vacuous_links(self) -> set[tuple[str, str]]:
        return {(u, v) for u, v in self.links if u not in free_atoms(self.conditions[v])}

    @cached_property
    def rules(self) -> tuple[Rule, ...]:
        return compile_rules(self.atoms, self.conditions)


@dataclass(frozen=True, eq=False)
class BooleanNetwork:
    variables: tuple[str, ...]
    functions: Mapping[str, Formula]
    edges: frozenset[tuple[str, str, str]]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "functions", dict(self.functions))
        object.__setattr__(self, "edges", frozenset(self.edges))
        _check_atoms(self.variables, self.functions, "variable")
        known = set(self.variables)
        into = {(u, v) for u, v, _ in self.edges}
        for u, v, sign in self.edges:
            if u not in known or v not in known:
                raise ModelMismatchError(f"edge ({u}, {v}, {sign}) has an endpoint outside V")
            if sign not in (POS, NEG):
                raise ValueError(f"edge sign must be '+' or '-', got {sign!r}")
        for v in self.variables:
            for p in free_atoms(self.functions[v]):
                if (p, v) not in into:
                    raise ValueError(f"f_{v} depends on {p!r} but there is no edge ({p}, {v})")

    @classmethod
    def from_functions(cls, functions: Mapping[str, Formula], variables: Iterable[str] | None = None) -> "BooleanNetwork":
        """Signed edges are read off the NNF of each function (mixed atoms get both signs)."""
        names = tuple(variables) if variables is not None else tuple(functions)
        return cls(names, functions, frozenset(signed_edges(names, functions)))

    def __eq__(self, other):
        if not isinstance(other, BooleanNetwork):
            return NotImplemented
        return (self.variables, self.edges) == (other.variables, other.edges) and dict(self.functions) == dict(
            other.functions
        )

    def __hash__(self):
        return hash((self.variables, self.edges))

    def __len__(self) -> int:
        return len(self.variables)

    @property
    def inputs(self) -> list[str]:
        return [v for v in self.variables if self.functions[v] == Atom(v)]

    @cached_property
    def index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.variables)}

    @cached_property
    def rules(self) -> tuple[Rule, ...]:
        return compile_rules(self.variables, self.functions)


def signed_edges(names: Sequence[str], functions: Mapping[str, Formula]) -> set[tuple[str, str, str]]:
    edges = set()
    for v in names:
        for u, pol in syntactic_polarity(to_nnf(functions[v])).items():
            if pol in (Polarity.POSITIVE, Polarity.BOTH):
                edges.add((u, v, POS))
            if pol in (Polarity.NEGATIVE, Polarity.BOTH):
                edges.add((u, v, NEG))
            if pol is Polarity.BOTH:
                warnings.warn(f"{u} occurs with both polarities in the condition of {v}", MixedPolarityWarning, stacklevel=3)
    return edges


def bn_to_adf(M: BooleanNetwork) -> Adf:
    return Adf(M.variables, M.functions, frozenset((u, v) for u, v, _ in M.edges))


def adf_to_bn(D: Adf) -> BooleanNetwork:
    functions = {s: to_nnf(D.conditions[s]) for s in D.atoms}
    return BooleanNetwork(D.atoms, functions, frozenset(signed_edges(D.atoms, functions)))


@dataclass(frozen=True)
class Classification:
    bipolar: bool
    per_link: dict[tuple[str, str], LinkType] = field(default_factory=dict)


def classify(D: Adf | BooleanNetwork) -> Classification:
    """Semantic role of every link; for a network this decides sign-definiteness."""
    if isinstance(D, BooleanNetwork):
        D = bn_to_adf(D)
    per_link = {}
    for u, v in sorted(D.links, key=lambda l: (D.index[l[1]], D.index[l[0]])):
        phi = D.conditions[v]
        per_link[(u, v)] = semantic_polarity(phi, u) if u in free_atoms(phi) else LinkType.BOTH
    bipolar = LinkType.NEITHER not in per_link.values()
    return Classification(bipolar, per_link)


def is_sign_definite(M: BooleanNetwork) -> bool:
    """Every function is monotone (up or down) in each of its arguments.

    Decided on compiled truth tables, independently of :func:`classify`.
    """
    for rule in M.rules:
        k = len(rule.parents)
        for j in range(k):
            bit = 1 << (k - 1 - j)
            idx = np.arange(1 << k)
            low = idx[(idx & bit) == 0]
            diff = rule.table[low | bit].astype(int) - rule.table[low].astype(int)
            if (diff > 0).any() and (diff < 0).any():
                return False
    return True
