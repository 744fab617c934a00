"""Run both sides of every ADF / Boolean-network correspondence on one instance.

Each check compares two independently computed objects: an ADF-side answer
built from Gamma and the information order, and a network-side answer built
from the F[m] criterion or the state transition graph.  Results are
collected in a :class:`CheckReport`; observations that are expected to differ
in general are recorded as notes rather than failures.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .dynamics import (
    Scheme,
    all_subspaces,
    all_trap_spaces,
    attractor_indices,
    build_stg,
    minimal_subspaces,
    stable_states,
    subspace_leq,
    subspace_states,
    trap_spaces_by_closure,
    _mask_value,
)
from .errors import PreconditionError
from .formula import U
from .model import Adf, BooleanNetwork, adf_to_bn, bn_to_adf, classify, is_sign_definite
from .semantics import (
    DEFAULT_BUDGET,
    Budget,
    Semantics,
    all_semantics,
    completions,
    leq_i,
    minimal_complete,
    render,
)
from .structure import existence_report

ORDER_PAIRS = 1000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CheckReport:
    variables: tuple[str, ...]
    results: list[CheckResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def lines(self) -> list[str]:
        out = [f"{'PASS' if r.passed else 'FAIL'} {r.name}" + (f": {r.detail}" if r.detail else "") for r in self.results]
        out += [f"note: {n}" for n in self.notes]
        return out

    def as_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "passed": self.passed,
            "results": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in self.results],
            "notes": list(self.notes),
        }


def _diff(left: set, right: set, names: tuple[str, str], sym: str = "-") -> str:
    """Short description of where two sets of rendered tuples disagree."""
    if left == right:
        return f"{len(left)} on both sides"
    only_l = sorted(render(x, sym) for x in left - right)
    only_r = sorted(render(x, sym) for x in right - left)
    return f"only {names[0]}: {only_l}; only {names[1]}: {only_r}"


def _pairs(n: int, rng: random.Random) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    if 9**n <= ORDER_PAIRS:
        spaces = all_subspaces(n)
        return [(a, b) for a in spaces for b in spaces]
    draw = lambda: tuple(rng.choice((0, 1, U)) for _ in range(n))  # noqa: E731
    return [(draw(), draw()) for _ in range(ORDER_PAIRS)]


def check(model: Adf | BooleanNetwork, budget: Budget = DEFAULT_BUDGET, seed: int = 0) -> CheckReport:
    """Every correspondence property on one instance.

    An ADF input is compared with its NNF network, a network input with its
    ADF; the ADF side always works on the given or converted ADF, the network
    side on the given or converted network.
    """
    if isinstance(model, Adf):
        D, M = model, adf_to_bn(model)
    else:
        D, M = bn_to_adf(model), model
    n = len(M.variables)
    budget.check3(n)
    report = CheckReport(M.variables)
    add = report.results.append

    sem = all_semantics(D, budget)
    sync = build_stg(M, Scheme.SYNC, budget)
    asyn = build_stg(M, Scheme.ASYNC, budget)

    two = set(sem[Semantics.TWO_VALUED])
    stable_sync = {tuple(int(c) for c in s) for s in stable_states(sync)}
    stable_async = {tuple(int(c) for c in s) for s in stable_states(asyn)}
    add(CheckResult("stable-states-two-valued", stable_sync == two, _diff(stable_sync, two, ("stg", "adf"))))
    add(CheckResult("stable-states-scheme-independent", stable_sync == stable_async,
                    _diff(stable_sync, stable_async, ("sync", "async"))))

    traps = set(all_trap_spaces(M, budget))
    adm = set(sem[Semantics.ADMISSIBLE])
    add(CheckResult("trap-space-admissible", traps == adm, _diff(traps, adm, ("trap", "adm"))))

    for name, G in (("sync", sync), ("async", asyn)):
        closed = set(trap_spaces_by_closure(G))
        add(CheckResult(f"trap-space-closure-{name}", closed == traps, _diff(closed, traps, ("closure", "F[m]"))))

    minimal = set(minimal_subspaces(sorted(traps)))
    prf = set(sem[Semantics.PREFERRED])
    add(CheckResult("minimal-trap-space-preferred", minimal == prf, _diff(minimal, prf, ("minimal", "prf"))))

    rng = random.Random(seed)
    bad = [(a, b) for a, b in _pairs(n, rng) if subspace_leq(a, b) != leq_i(b, a)]
    add(CheckResult("subspace-order-information-order", not bad,
                    f"{len(bad)} disagreeing pairs" if bad else ""))

    bad_c = [m for m in all_subspaces(n) if completions(m, budget) != subspace_states(m)] if n <= 8 else []
    add(CheckResult("completions-subspace-states", not bad_c, ", ".join(render(m, "-") for m in bad_c[:5])))

    stb = set(sem[Semantics.STABLE])
    cmp_ = set(sem[Semantics.COMPLETE])
    grnd = sem[Semantics.GROUNDED]
    chain = stb <= two <= prf <= cmp_ <= adm and len(grnd) == 1 and grnd[0] in cmp_
    add(CheckResult("semantics-inclusions", chain))
    least = minimal_complete(D, budget)
    add(CheckResult("grounded-least-complete", least == grnd,
                    f"iteration {render(grnd[0])}, scan {[render(x) for x in least]}"))

    sd = is_sign_definite(M)
    bip = classify(D).bipolar
    add(CheckResult("sign-definite-bipolar", sd == bip, f"sign-definite={sd}, bipolar={bip}"))

    if sd:
        try:
            rep = existence_report(M, budget)
        except PreconditionError as exc:  # pragma: no cover - guarded by sd
            report.notes.append(f"existence criteria skipped: {exc}")
        else:
            v = rep.violations()
            add(CheckResult("existence-criteria", not v,
                            "; ".join(v) or f"concluded {rep.conclusion}, counted {rep.exact_count}"))
    else:
        report.notes.append("network is not sign-definite; cycle-sign existence criteria do not apply")

    # informational: these are not equivalences and may legitimately differ
    if cmp_ != traps:
        report.notes.append(
            "complete interpretations differ from trap spaces (" + _diff(cmp_, traps, ("cmp", "trap")) + ")"
        )
    if cmp_ != minimal:
        report.notes.append(
            "complete interpretations differ from minimal trap spaces ("
            + _diff(cmp_, minimal, ("cmp", "minimal")) + ")"
        )
    masks = [_mask_value(m) for m in minimal]
    for name, G in (("sync", sync), ("async", asyn)):
        outside = [
            comp for comp in attractor_indices(G)
            if not any(all(i & mk == vl for i in comp) for mk, vl in masks)
        ]
        if outside:
            shown = sorted(sorted(G.label(i) for i in comp) for comp in outside)
            report.notes.append(f"{name} attractors outside every minimal trap space: {shown}")
    return report
