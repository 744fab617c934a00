import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings

from adfbn.dynamics import (
    Scheme,
    all_subspaces,
    all_trap_spaces,
    attractor_indices,
    attractors,
    basins,
    build_stg,
    f_of_m,
    is_trap_set,
    is_trap_space,
    is_trap_space_stg,
    maximal_subspaces,
    minimal_subspaces,
    stable_states,
    subspace_leq,
    subspace_states,
    successors,
    trap_spaces,
    trap_spaces_by_closure,
)
from adfbn.formula import U, parse_formula as P
from adfbn.model import BooleanNetwork, adf_to_bn, bn_to_adf
from adfbn.semantics import admissible, completions, leq_i, parse_interp as I, preferred, render

from generators import network_family, networks


def bn(**fs):
    return BooleanNetwork.from_functions({k: P(v) for k, v in fs.items()})


def rendered(xs):
    return sorted(render(x, "-") for x in xs)


# -- successors and STG --------------------------------------------------------------


def test_successor_examples(cycle3, fig2):
    M = adf_to_bn(cycle3)
    assert successors(M, (0, 0, 0), "sync") == {(1, 1, 1)}
    assert successors(fig2, (0, 0, 0, 0), "async") == {(0, 0, 0, 0)}
    assert successors(fig2, (0, 0, 0, 0), "sync") == {(0, 0, 0, 0)}


@settings(max_examples=100, deadline=None)
@given(networks())
def test_vectorised_stg_matches_formula_successors(M):
    n = len(M.variables)
    for scheme in Scheme:
        G = build_stg(M, scheme)
        for i in range(1 << n):
            got = {G.state(j) for j in G.succ[i]}
            assert got == successors(M, G.state(i), scheme)


@settings(max_examples=60, deadline=None)
@given(networks())
def test_out_degree_bounds(M):
    n = len(M.variables)
    assert all(len(out) == 1 for out in build_stg(M, "sync").succ)
    assert all(1 <= len(out) <= max(n, 1) for out in build_stg(M, "async").succ)


def test_empty_network_stg():
    G = build_stg(bn(), "sync")
    assert len(G) == 1 and G.succ == ((0,),)
    assert G.label(0) == ""


def test_fig2_sync_attractors(fig2):
    atts = set(attractors(build_stg(fig2, "sync")))
    assert frozenset({"0000"}) in atts
    assert frozenset({"0101", "1101", "1011", "0011"}) in atts


def test_fig2_async_keeps_stable_state(fig2):
    G = build_stg(fig2, "async")
    assert "0000" in stable_states(G)


# -- trap sets and attractors ---------------------------------------------------------


def test_trap_set_examples(cycle3):
    G = build_stg(adf_to_bn(cycle3), "sync")
    assert is_trap_set(G, {"000", "111"})
    assert is_trap_set(G, range(len(G)))
    assert not is_trap_set(G, {"000"})
    assert frozenset({"000", "111"}) in attractors(G)


def test_single_variable_identity():
    G = build_stg(bn(a="a"), "sync")
    assert sorted(sorted(x) for x in attractors(G)) == [["0"], ["1"]]


@settings(max_examples=80, deadline=None)
@given(networks())
def test_attractors_are_networkx_attracting_components(M):
    for scheme in (Scheme.SYNC, Scheme.ASYNC):
        G = build_stg(M, scheme)
        ref = nx.DiGraph()
        ref.add_nodes_from(range(len(G)))
        ref.add_edges_from(G.edges())
        expected = sorted(sorted(c) for c in nx.attracting_components(ref))
        assert attractor_indices(G) == expected


def test_attractors_are_minimal_trap_sets_on_small_instances():
    for M in network_family(31, 40):
        if len(M.variables) > 3:
            continue
        G = build_stg(M, "async")
        n = len(G)
        traps = [set(c) for r in range(1, n + 1) for c in itertools.combinations(range(n), r) if is_trap_set(G, c)]
        minimal = [t for t in traps if not any(o < t for o in traps)]
        assert sorted(sorted(t) for t in minimal) == attractor_indices(G)


def test_basins_cover_every_state():
    for M in network_family(32, 30):
        G = build_stg(M, "sync")
        covered = set().union(*(b for _, b in basins(G)))
        assert covered == {G.label(i) for i in range(len(G))}
        # synchronous basins are disjoint
        sizes = sum(len(b) for _, b in basins(G))
        assert sizes == len(G)


def test_stable_states_scheme_independent():
    for M in network_family(33, 100):
        assert stable_states(build_stg(M, "sync")) == stable_states(build_stg(M, "async"))


# -- subspaces and F[m] ----------------------------------------------------------------------


def test_f_of_m_examples(taut):
    M = bn(a="a", b="b", c="c", x="(a | b) & c")
    fm = f_of_m(M, (0, U, 1, U))
    assert fm[3] == U
    assert f_of_m(M, (0, 1, 1, U))[3] == 1
    Mt = adf_to_bn(taut)
    assert f_of_m(Mt, (U, U)) == (1, U)


def test_f_of_m_on_full_states_is_sync_image():
    for M in network_family(34, 40):
        G = build_stg(M, "sync")
        for i in range(len(G)):
            assert f_of_m(M, G.state(i)) == G.state(G.succ[i][0])


def test_trap_space_examples(taut, self_adf, cycle3):
    Mt = adf_to_bn(taut)
    for m in ("-1", "11", "--"):
        assert is_trap_space(Mt, I(m))
    Ms = adf_to_bn(self_adf)
    for m in ("-", "0", "1"):
        assert is_trap_space(Ms, I(m))
    Mc = adf_to_bn(cycle3)
    for m in all_subspaces(3):
        if sum(x != U for x in m) == 1:
            assert not is_trap_space(Mc, m)


def test_taut_has_six_trap_spaces(taut):
    assert rendered(all_trap_spaces(adf_to_bn(taut))) == ["--", "-0", "-1", "1-", "10", "11"]


def test_forced_value_criterion_equals_closure_and_admissible():
    for M in network_family(35, 120):
        traps = all_trap_spaces(M)
        assert set(traps) == set(admissible(bn_to_adf(M)))
        for scheme in (Scheme.SYNC, Scheme.ASYNC, Scheme.GENERAL):
            G = build_stg(M, scheme)
            assert set(trap_spaces_by_closure(G)) == set(traps)
        G = build_stg(M, "async")
        for m in traps[:20]:
            assert is_trap_space_stg(G, m)


def test_minimal_trap_spaces_are_preferred():
    for M in network_family(36, 120):
        assert set(minimal_subspaces(all_trap_spaces(M))) == set(preferred(bn_to_adf(M)))


def test_subspace_order_is_reverse_information_order():
    rng = random.Random(37)
    for _ in range(1000):
        n = rng.randint(1, 6)
        m1 = tuple(rng.choice((0, 1, U)) for _ in range(n))
        m2 = tuple(rng.choice((0, 1, U)) for _ in range(n))
        direct = set(subspace_states(m1)) <= set(subspace_states(m2))
        assert subspace_leq(m1, m2) == direct == leq_i(m2, m1)


def test_completions_equal_subspace_states():
    for m in all_subspaces(4):
        assert completions(m) == subspace_states(m)


# -- trap reports ----------------------------------------------------------------------------


def test_self_report(self_adf):
    rep = trap_spaces(adf_to_bn(self_adf))
    assert rendered(rep.minimal) == ["0", "1"]
    assert (U,) not in rep.minimal
    assert rendered(rep.maximal) == ["0", "1"]


def test_cycle_report_has_no_stable_states(cycle3):
    assert trap_spaces(adf_to_bn(cycle3)).stable_states == []


def test_empty_network_report():
    rep = trap_spaces(bn())
    assert rep.trap_spaces == [()] and rep.maximal == [] and rep.minimal == [()]


def test_travel_grounded_is_trivial_and_not_maximal(travel):
    rep = trap_spaces(adf_to_bn(travel))
    assert (U,) * 4 in rep.trap_spaces
    assert (U,) * 4 not in rep.maximal


def test_maximal_excludes_trivial_as_comparator():
    spaces = [I("--"), I("1-"), I("11"), I("-0")]
    assert rendered(maximal_subspaces(spaces)) == ["-0", "1-"]
    assert rendered(minimal_subspaces(spaces)) == ["-0", "11"]


def test_report_invariants():
    for M in network_family(38, 60):
        rep = trap_spaces(M, "async")
        assert set(rep.minimal) | set(rep.maximal) <= set(rep.trap_spaces)
        in_attr = set().union(*rep.attractors) if rep.attractors else set()
        assert set(rep.stable_states) <= in_attr


def test_async_attractors_lie_in_minimal_trap_spaces():
    for M in network_family(39, 200):
        rep = trap_spaces(M, "async")
        spaces = [set(subspace_states(m)) for m in rep.minimal]
        for att in rep.attractors:
            states = {tuple(int(c) for c in s) for s in att}
            assert any(states <= S for S in spaces)


def test_every_minimal_trap_space_holds_an_attractor():
    for M in network_family(40, 120):
        for scheme in ("sync", "async"):
            rep = trap_spaces(M, scheme)
            for m in rep.minimal:
                S = {render(s, "-") for s in subspace_states(m)}
                assert any(set(a) <= S for a in rep.attractors)


def test_sync_attractor_can_escape_minimal_trap_spaces():
    M = bn(x="y", y="x")
    rep = trap_spaces(M, "sync")
    assert rendered(rep.minimal) == ["00", "11"]
    assert frozenset({"01", "10"}) in rep.attractors


@pytest.mark.parametrize("scheme", ["sync", "async", "general"])
def test_scheme_names(scheme):
    assert build_stg(bn(a="!a"), scheme).scheme is Scheme(scheme)
