"""Three-valued interpretations, the Gamma operator, the reduct and ADF semantics.

Interpretations are tuples aligned with ``D.atoms`` holding ``0``, ``1`` or
``U``; two-valued states are tuples of bits.  Exhaustive scans are guarded by
a :class:`Budget`.
"""
from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .formula import FALSE, U, eval2, eval3, substitute
from .model import Adf

Interp3 = tuple[int, ...]
State = tuple[int, ...]

_SYMBOLS = {"0": 0, "1": 1, "u": U, "U": U, "-": U, "*": U}


@dataclass(frozen=True)
class Budget:
    """Largest atom counts for which exhaustive scans are allowed."""

    interp_atoms: int = 12  # 3^n scans
    state_atoms: int = 20  # 2^n scans
    max_cycles: int = 100_000

    def __post_init__(self):
        if min(self.interp_atoms, self.state_atoms, self.max_cycles) <= 0:
            raise ValueError("budgets must be positive")

    @classmethod
    def from_env(cls) -> "Budget":
        """Defaults overridable through ADFBN_MAX_3N, ADFBN_MAX_2N and ADFBN_MAX_CYCLES."""
        default = cls()
        return cls(
            int(os.environ.get("ADFBN_MAX_3N", default.interp_atoms)),
            int(os.environ.get("ADFBN_MAX_2N", default.state_atoms)),
            int(os.environ.get("ADFBN_MAX_CYCLES", default.max_cycles)),
        )

    def check3(self, n: int) -> None:
        if n > self.interp_atoms:
            raise BudgetExceeded(
                f"3^{n} interpretation scan exceeds the budget of {self.interp_atoms} atoms"
            )

    def check2(self, n: int) -> None:
        if n > self.state_atoms:
            raise BudgetExceeded(f"2^{n} state scan exceeds the budget of {self.state_atoms} atoms")


DEFAULT_BUDGET = Budget()


class Semantics(enum.Enum):
    TWO_VALUED = "2v"
    ADMISSIBLE = "adm"
    COMPLETE = "cmp"
    PREFERRED = "prf"
    GROUNDED = "grnd"
    STABLE = "stb"


# --------------------------------------------------------------------------
# rendering


def render(values: Sequence[int], undecided: str = "u") -> str:
    return "".join(undecided if v == U else str(v) for v in values)


def parse_interp(text: str, n: int | None = None) -> Interp3:
    """Read ``10u``, ``10-`` or ``10*`` style strings."""
    try:
        values = tuple(_SYMBOLS[c] for c in text.strip())
    except KeyError as exc:
        raise ValueError(f"bad interpretation symbol {exc.args[0]!r} in {text!r}") from None
    if n is not None and len(values) != n:
        raise ValueError(f"{text!r} has {len(values)} positions, expected {n}")
    return values


def as_mapping(D: Adf, values: Sequence[int]) -> dict[str, int]:
    if len(values) != len(D.atoms):
        raise ValueError(f"interpretation has {len(values)} positions, model has {len(D.atoms)} atoms")
    return dict(zip(D.atoms, values))


def state_index(bits: Sequence[int]) -> int:
    i = 0
    for b in bits:
        i = (i << 1) | b
    return i


def index_state(i: int, n: int) -> State:
    return tuple((i >> (n - 1 - j)) & 1 for j in range(n))


# --------------------------------------------------------------------------
# orders and completions


def leq_i(nu1: Sequence[int], nu2: Sequence[int]) -> bool:
    """Information order: u below 0 and 1, lifted pointwise."""
    if len(nu1) != len(nu2):
        raise ValueError("interpretations over different atom sets")
    return all(a == U or a == b for a, b in zip(nu1, nu2))


def completions(nu: Sequence[int], budget: Budget = DEFAULT_BUDGET) -> list[State]:
    """All two-valued states above ``nu``, sorted."""
    free = [i for i, v in enumerate(nu) if v == U]
    budget.check2(len(free))
    out = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        state = list(nu)
        for i, b in zip(free, bits):
            state[i] = b
        out.append(tuple(state))
    return out


def is_two_valued(nu: Sequence[int]) -> bool:
    return all(v != U for v in nu)


# --------------------------------------------------------------------------
# Gamma


def gamma(D: Adf, nu: Sequence[int]) -> Interp3:
    """Each atom gets the consensus value of its condition over completions of ``nu``."""
    mapping = as_mapping(D, nu)
    return tuple(eval3(D.conditions[s], mapping) for s in D.atoms)


def gamma_many(D: Adf, interps: np.ndarray) -> np.ndarray:
    """Vectorised Gamma over a (rows x atoms) array using compiled condition tables."""
    interps = np.asarray(interps, dtype=np.int64)
    out = np.empty_like(interps)
    for s, rule in enumerate(D.rules):
        code = np.zeros(len(interps), dtype=np.int64)
        for p in rule.parents:
            code = code * 3 + interps[:, p]
        out[:, s] = rule.table3[code]
    return out


def all_interpretations(n: int) -> np.ndarray:
    """Every element of {0,1,u}^n as rows, in lexicographic order (0 < 1 < u)."""
    codes = np.arange(3**n, dtype=np.int64)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack([(codes // 3 ** (n - 1 - j)) % 3 for j in range(n)], axis=1).reshape(3**n, n)


def all_states(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack([(idx >> (n - 1 - j)) & 1 for j in range(n)], axis=1).reshape(1 << n, n)


def _rows(arr: np.ndarray) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in row) for row in arr]


# --------------------------------------------------------------------------
# reduct


def reduct(D: Adf, omega: Sequence[int]) -> Adf:
    """Sub-ADF on the true atoms, with false atoms replaced by FALSE.

    ``omega`` must be a two-valued model of ``D``.
    """
    if not is_two_valued(omega):
        raise PreconditionError("the reduct is only defined for two-valued interpretations")
    mapping = as_mapping(D, omega)
    if any(eval2(D.conditions[s], mapping) != mapping[s] for s in D.atoms):
        raise PreconditionError(f"{render(omega)} is not a two-valued model")
    kept = [s for s in D.atoms if mapping[s] == 1]
    false = {s: FALSE for s in D.atoms if mapping[s] == 0}
    conditions = {s: substitute(D.conditions[s], false) for s in kept}
    keep = set(kept)
    links = frozenset((u, v) for u, v in D.links if u in keep and v in keep)
    return Adf(tuple(kept), conditions, links)


# --------------------------------------------------------------------------
# semantics


def two_valued_models(D: Adf, budget: Budget = DEFAULT_BUDGET) -> list[State]:
    """States with omega(s) == omega(C_s) for every atom."""
    n = len(D.atoms)
    budget.check2(n)
    states = all_states(n)
    ok = np.ones(len(states), dtype=bool)
    for s, rule in enumerate(D.rules):
        code = np.zeros(len(states), dtype=np.int64)
        for p in rule.parents:
            code = (code << 1) | states[:, p]
        ok &= rule.table[code] == states[:, s]
    return _rows(states[ok])


def _admissible_array(D: Adf, budget: Budget) -> tuple[np.ndarray, np.ndarray]:
    n = len(D.atoms)
    budget.check3(n)
    interps = all_interpretations(n)
    g = gamma_many(D, interps)
    adm = np.all((interps == U) | (interps == g), axis=1)
    cmp_ = np.all(interps == g, axis=1)
    return interps[adm], interps[cmp_]


def admissible(D: Adf, budget: Budget = DEFAULT_BUDGET) -> list[Interp3]:
    return _rows(_admissible_array(D, budget)[0])


def complete(D: Adf, budget: Budget = DEFAULT_BUDGET) -> list[Interp3]:
    return _rows(_admissible_array(D, budget)[1])


def maximal_elements(interps: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Rows with no other row strictly above them in the information order."""
    interps = np.asarray(interps)
    keep = np.ones(len(interps), dtype=bool)
    for start in range(0, len(interps), chunk):
        block = interps[start:start + chunk]
        below = np.all(
            (block[:, None, :] == U) | (block[:, None, :] == interps[None, :, :]), axis=2
        )
        # each row is below itself; anything more means a strictly larger row exists
        keep[start:start + chunk] = below.sum(axis=1) == 1
    return interps[keep]


def minimal_elements(interps: np.ndarray, chunk: int = 256) -> np.ndarray:
    interps = np.asarray(interps)
    keep = np.ones(len(interps), dtype=bool)
    for start in range(0, len(interps), chunk):
        block = interps[start:start + chunk]
        above = np.all(
            (interps[None, :, :] == U) | (interps[None, :, :] == block[:, None, :]), axis=2
        )
        keep[start:start + chunk] = above.sum(axis=1) == 1
    return interps[keep]


def preferred(D: Adf, budget: Budget = DEFAULT_BUDGET) -> list[Interp3]:
    return _rows(maximal_elements(_admissible_array(D, budget)[0]))


def grounded(D: Adf) -> Interp3:
    """Least fixpoint of Gamma, reached by iterating from all-u (at most n steps)."""
    nu = (U,) * len(D.atoms)
    while True:
        nxt = gamma(D, nu)
        if nxt == nu:
            return nu
        nu = nxt


def minimal_complete(D: Adf, budget: Budget = DEFAULT_BUDGET) -> list[Interp3]:
    """The information-minimal complete interpretations, found by a full scan."""
    return _rows(minimal_elements(_admissible_array(D, budget)[1]))


def is_stable(D: Adf, omega: Sequence[int]) -> bool:
    """Two-valued model whose true atoms are exactly those true in the reduct's grounded model."""
    if not is_two_valued(omega):
        return False
    try:
        red = reduct(D, omega)
    except PreconditionError:
        return False
    return all(v == 1 for v in grounded(red))


def stable(D: Adf, budget: Budget = DEFAULT_BUDGET) -> list[State]:
    return [w for w in two_valued_models(D, budget) if is_stable(D, w)]


def enumerate_models(D: Adf, sigma: Semantics | str, budget: Budget = DEFAULT_BUDGET) -> list[Interp3]:
    """Exact, sorted result set of one semantics."""
    sigma = Semantics(sigma)
    if sigma is Semantics.TWO_VALUED:
        return two_valued_models(D, budget)
    if sigma is Semantics.ADMISSIBLE:
        return admissible(D, budget)
    if sigma is Semantics.COMPLETE:
        return complete(D, budget)
    if sigma is Semantics.PREFERRED:
        return preferred(D, budget)
    if sigma is Semantics.GROUNDED:
        return [grounded(D)]
    return stable(D, budget)


def all_semantics(D: Adf, budget: Budget = DEFAULT_BUDGET) -> dict[Semantics, list[Interp3]]:
    adm, cmp_ = _admissible_array(D, budget)
    two = two_valued_models(D, budget)
    return {
        Semantics.TWO_VALUED: two,
        Semantics.ADMISSIBLE: _rows(adm),
        Semantics.COMPLETE: _rows(cmp_),
        Semantics.PREFERRED: _rows(maximal_elements(adm)),
        Semantics.GROUNDED: [grounded(D)],
        Semantics.STABLE: [w for w in two if is_stable(D, w)],
    }


def meet(interps: Iterable[Sequence[int]]) -> Interp3:
    """Pointwise consensus of a non-empty collection of interpretations."""
    interps = [tuple(v) for v in interps]
    if not interps:
        raise ValueError("meet of an empty set")
    return tuple(col[0] if all(x == col[0] for x in col) else U for col in zip(*interps))
