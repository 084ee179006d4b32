import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from movcat.construct import NullFamily, find_domination, find_null_family
from movcat.errors import (
    FactorMismatch,
    IncompleteFactorTable,
    InvalidFunctorData,
    InvalidNullFamily,
    NotARetraction,
    NotInitial,
    WitnessViolation,
)
from movcat.fincat import (
    NatTrans,
    RawCategory,
    compose_functors,
    dual,
    identity_functor,
    identity_nat_trans,
    product,
    section_functor,
    validate_category,
)
from movcat.fixtures import fix_a, fix_b, fix_b_plus, fix_c
from movcat.generate import random_category
from movcat.movability import (
    MovabilityWitness,
    UniformMovabilityWitness,
    check_pullback_relation,
    decide_category,
    decide_co_movable,
    decide_movable,
    decide_uniformly_movable,
    movable_search,
    product_witness,
    recheck_failure,
    transfer_domination,
    transfer_weak_functorial,
    uniform_search,
    verify_witness,
    witness_from_initial,
    witness_from_nulls,
    witness_violations,
)

from oracles import movable_by_enumeration

seeds = st.integers(min_value=0, max_value=10**6)


def idempotent_monoid():
    return validate_category(
        RawCategory(
            objects=["*"],
            morphisms=[("1", "*", "*"), ("e", "*", "*")],
            identities={"*": "1"},
            compose=[("1", "1", "1"), ("1", "e", "e"), ("e", "1", "e"), ("e", "e", "e")],
        )
    )


def test_poset_witness_verifies():
    w = UniformMovabilityWitness("1", "0", "le01", {"id_1": "le01", "le01": "id_0"})
    assert verify_witness(fix_b(), w, uniform=True) is w


def test_collapse_witness_is_movable_but_not_uniform():
    a = fix_a()
    w = MovabilityWitness("s1", "s2", "collapse", {"id_s1": "collapse", "collapse": "id_s2"})
    verify_witness(a, w, uniform=False)
    with pytest.raises(WitnessViolation) as info:
        verify_witness(a, w, uniform=True)
    triples = {v.ids for v in info.value.violations}
    assert ("collapse", "collapse", "swap") in triples
    assert info.value.laws == {"condition 2"}


def test_incomplete_factor_table():
    w = MovabilityWitness("s1", "s2", "collapse", {"id_s1": "collapse"})
    with pytest.raises(IncompleteFactorTable):
        verify_witness(fix_a(), w, uniform=False)


def test_example_singleton_in_sets():
    a = fix_a()
    w = decide_movable(a, "s1")
    assert w is not None
    verify_witness(a, w, uniform=False)
    assert decide_uniformly_movable(a, "s1") is None
    assert not movable_by_enumeration(a, "s1", uniform=True)
    assert movable_by_enumeration(a, "s1", uniform=False)


def test_movable_deciders_on_small_fixtures():
    w = decide_movable(fix_b(), "2")
    assert (w.mover, w.morphism) == ("0", "le02")
    w = decide_movable(idempotent_monoid(), "*")
    assert w.morphism == "e"
    w = decide_uniformly_movable(fix_b(), "1")
    assert w.mover == "0"
    w = decide_uniformly_movable(fix_c(), "P2")
    nulls = find_null_family(fix_c())
    assert w.morphism == nulls["P1", "P2"]
    assert all(u == nulls["P1", fix_c().dom(p)] for p, u in w.factors.items())


def test_category_verdicts():
    assert decide_category(fix_b(), uniform=True).verdict
    report = decide_category(fix_a(), uniform=True)
    assert not report.verdict and "s1" in report.failing
    assert decide_category(fix_c(), uniform=True).verdict


def test_negative_certificates_recheck():
    a = fix_a()
    result = uniform_search(a, "s1")
    assert not result.found and result.failures
    assert all(recheck_failure(a, "s1", f, uniform=True) for f in result.failures)


def test_co_movability_is_movability_in_the_dual():
    b = fix_b()
    w = decide_co_movable(b, "1", uniform=True)
    assert w == decide_uniformly_movable(dual(b), "1")
    verify_witness(dual(b), w, uniform=True)
    a = fix_a()
    assert decide_co_movable(a, "s1", uniform=True) == decide_uniformly_movable(dual(a), "s1")


def test_witness_from_initial():
    b = fix_b()
    w = witness_from_initial(b, "0", "1")
    assert (w.mover, w.morphism) == ("0", "le01")
    assert witness_from_initial(b, "0", "0").morphism == "id_0"
    prod = product([b, b]).category
    w = witness_from_initial(prod, "(0,0)", "(1,2)")
    assert w.morphism == "(le01,le02)"
    verify_witness(prod, w, uniform=True)
    with pytest.raises(NotInitial):
        witness_from_initial(b, "1", "1")


def test_witness_from_nulls():
    c = fix_c()
    nulls = find_null_family(c)
    w = witness_from_nulls(c, nulls, "P2", "P1")
    assert set(w.factors.values()) <= set(nulls.table.values())
    verify_witness(c, w, uniform=True)
    assert witness_from_nulls(c, nulls, "P1", "P1").morphism == "id_P1"
    broken = NullFamily({**nulls.table, ("P2", "P2"): "id_P2"})
    with pytest.raises(InvalidNullFamily):
        witness_from_nulls(c, broken, "P2")


def test_transfer_domination():
    c = fix_c()
    wx = decide_uniformly_movable(c, "P2")
    assert transfer_domination(c, wx, "id_P2", "id_P2") == UniformMovabilityWitness(
        wx.target, wx.mover, wx.morphism, dict(wx.factors)
    )
    wy = transfer_domination(c, wx, "collapse", "incl")
    assert wy.target == "P1"
    verify_witness(c, wy, uniform=True)
    a = fix_a()
    fake = MovabilityWitness("s2", "s2", "id_s2", {p: p for p in a.into("s2")})
    with pytest.raises((WitnessViolation, IncompleteFactorTable)):
        transfer_domination(a, fake, "collapse", "const_a")
    with pytest.raises(NotARetraction):
        transfer_domination(c, wx, "collapse", "collapse")


def test_transfer_weak_functorial():
    b = fix_b()
    ident = identity_functor(b)
    ws = {x: decide_uniformly_movable(b, x) for x in b.objects}
    out = transfer_weak_functorial(b, b, ident, ident, identity_nat_trans(ident), ws)
    assert {x: (w.mover, w.morphism, dict(w.factors)) for x, w in out.items()} == {
        x: (w.mover, w.morphism, dict(w.factors)) for x, w in ws.items()
    }

    prod = product([b, b])
    J = section_functor(prod, 0, ["0", "0"])
    D = prod.projections[0]
    kws = {x: decide_uniformly_movable(prod.category, x) for x in prod.category.objects}
    psi = NatTrans(compose_functors(D, J), ident, {x: b.identities[x] for x in b.objects})
    out = transfer_weak_functorial(b, prod.category, J, D, psi, kws)
    for x, w in out.items():
        verify_witness(b, w, uniform=True)

    broken = NatTrans(psi.source, ident, {"0": "id_0", "1": "id_1", "2": "le02"})
    with pytest.raises(InvalidFunctorData):
        transfer_weak_functorial(b, prod.category, J, D, broken, kws)


def test_product_witness():
    b = fix_b()
    prod = product([b, b])
    w1, w2 = decide_uniformly_movable(b, "1"), decide_uniformly_movable(b, "2")
    w = product_witness(prod, [w1, w2])
    assert (w.target, w.mover) == ("(1,2)", "(0,0)")
    verify_witness(prod.category, w, uniform=True)
    single = product([b])
    w = product_witness(single, [w1])
    assert (w.target, w.mover, w.morphism) == ("(1)", "(0)", "(le01)")
    with pytest.raises(FactorMismatch):
        product_witness(prod, [w1])


def test_pullback_relation():
    bp = fix_b_plus()
    wz = witness_from_initial(bp, "0", "3")
    assert check_pullback_relation(bp, wz, "le13", "le23").holds
    assert check_pullback_relation(bp, wz, "id_3", "id_3").holds


def small(seed, budget=12):
    rng = random.Random(seed)
    return random_category(rng, rng.randint(1, 3), rng.choice([0.2, 0.3, 0.5]), budget)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_deciders_match_enumeration(seed):
    cat = small(seed)
    for x in cat.objects:
        for uniform in (False, True):
            result = uniform_search(cat, x) if uniform else movable_search(cat, x)
            assert result.found == movable_by_enumeration(cat, x, uniform)
            if result.found:
                assert witness_violations(cat, result.witness, uniform) == []
            else:
                assert all(recheck_failure(cat, x, f, uniform) for f in result.failures)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_uniform_implies_movable(seed):
    cat = small(seed, 20)
    for x in cat.objects:
        if decide_uniformly_movable(cat, x) is not None:
            assert decide_movable(cat, x) is not None


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_domination_transfers_uniform_witnesses(seed):
    cat = small(seed, 20)
    for x in cat.objects:
        wx = decide_uniformly_movable(cat, x)
        if wx is None:
            continue
        for y in cat.objects:
            pair = find_domination(cat, y, x)
            if pair is not None:
                verify_witness(cat, transfer_domination(cat, wx, *pair), uniform=True)
