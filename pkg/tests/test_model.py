import random
import warnings

import pytest
from hypothesis import given, settings

from adfbn.errors import ModelMismatchError
from adfbn.formula import FALSE, LinkType, atoms, is_nnf, parse_formula as P
from adfbn.model import (
    NEG,
    POS,
    Adf,
    BooleanNetwork,
    MixedPolarityWarning,
    adf_to_bn,
    bn_to_adf,
    classify,
    is_sign_definite,
)
from adfbn.semantics import two_valued_models

from generators import network_family, networks


def adf(**conds):
    return Adf.from_conditions({k: P(v) for k, v in conds.items()})


def test_fig2_links(fig2):
    D = bn_to_adf(fig2)
    assert D.atoms == ("v1", "v2", "v3", "v4")
    assert fig2.inputs == ["v4"]
    # the input node keeps the self-link implied by f_v4 = v4
    assert D.links - {("v4", "v4")} == {
        ("v1", "v2"), ("v1", "v3"), ("v2", "v1"), ("v2", "v3"), ("v4", "v2"), ("v4", "v3")
    }
    assert fig2.edges - {("v4", "v4", POS)} == {
        ("v1", "v2", NEG), ("v1", "v3", POS), ("v2", "v1", POS),
        ("v2", "v3", POS), ("v4", "v2", POS), ("v4", "v3", NEG),
    }


def test_empty_models_convert():
    M = BooleanNetwork.from_functions({})
    D = bn_to_adf(M)
    assert D.atoms == () and D.links == frozenset()
    assert adf_to_bn(D) == M


def test_adf_to_bn_examples(travel):
    M = adf_to_bn(travel)
    assert {("t", "v", NEG), ("p", "v", POS)} <= M.edges
    assert adf_to_bn(adf(a="a")).edges == {("a", "a", POS)}
    M = adf_to_bn(adf(a="a", b="!(a & !b)"))
    assert M.edges >= {("a", "b", NEG), ("b", "b", POS)}
    assert M.functions["b"] == P("!a | b")


def test_mixed_polarity_warns_and_signs_both():
    with pytest.warns(MixedPolarityWarning):
        M = adf_to_bn(adf(a="a | !a"))
    assert M.edges == {("a", "a", POS), ("a", "a", NEG)}


def test_adf_validation():
    with pytest.raises(ModelMismatchError):
        Adf(("a",), {"a": P("b")}, frozenset())
    with pytest.raises(ValueError):
        Adf(("a",), {"a": P("a")}, frozenset())  # link (a, a) missing
    with pytest.raises(ValueError):
        Adf(("a", "b"), {"a": P("a")}, frozenset({("a", "a")}))
    # extra links are allowed and reported as vacuous
    D = Adf(("a", "b"), {"a": FALSE, "b": P("b")}, frozenset({("b", "a"), ("b", "b")}))
    assert D.vacuous_links() == {("b", "a")}


def test_network_validation():
    with pytest.raises(ValueError):
        BooleanNetwork(("a", "b"), {"a": P("b"), "b": P("b")}, frozenset({("b", "b", POS)}))


def test_classify_examples(travel):
    assert classify(travel).bipolar
    c = classify(adf(a="a", b="b", c="(a & !b) | (!a & b)"))
    assert not c.bipolar
    assert c.per_link[("a", "c")] is LinkType.NEITHER
    assert c.per_link[("b", "c")] is LinkType.NEITHER
    c = classify(adf(a="b & !b", b="b"))
    assert c.per_link[("b", "a")] is LinkType.BOTH


def test_classify_travel_link_types(travel):
    per = classify(travel).per_link
    assert per[("t", "v")] is LinkType.ATTACKING
    assert per[("p", "v")] is LinkType.SUPPORTING
    assert per[("v", "f")] is LinkType.SUPPORTING


@settings(max_examples=150, deadline=None)
@given(networks())
def test_sign_definite_iff_bipolar(M):
    assert is_sign_definite(M) == classify(bn_to_adf(M)).bipolar


def test_sign_definite_iff_bipolar_on_seeded_family():
    for M in network_family(11, 200):
        assert is_sign_definite(M) == classify(M).bipolar
    for M in network_family(12, 100, sign_definite=True):
        assert is_sign_definite(M)


@settings(max_examples=100, deadline=None)
@given(networks())
def test_conversion_round_trip_preserves_models(M):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MixedPolarityWarning)
        back = adf_to_bn(bn_to_adf(M))
    assert all(is_nnf(f) for f in back.functions.values())
    assert two_valued_models(bn_to_adf(back)) == two_valued_models(bn_to_adf(M))


def test_links_follow_free_atoms():
    rng = random.Random(3)
    for M in network_family(rng.randint(0, 99), 50):
        D = bn_to_adf(M)
        for s in D.atoms:
            assert set(D.parents(s)) >= set(atoms(D.conditions[s]))


def test_equality_and_hash(travel):
    again = adf(p="p", t="p", v="!t & p", f="t | v")
    assert again == travel and hash(again) == hash(travel)
    assert adf(a="a") != adf(a="!a")
