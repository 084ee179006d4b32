import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from movcat.construct import comma_category
from movcat.errors import ExpansionInvalid, ThreadVerificationFailure, WitnessVerificationFailure
from movcat.fincat import full_subcategory, restrict
from movcat.fixtures import (
    collapse_expansion,
    constant_expansion,
    fix_a,
    fix_c,
    fix_c_expansion,
    fix_exp,
    fix_exp_category,
)
from movcat.generate import expansion_passes, random_category, random_expansion
from movcat.movability import UniformMovabilityWitness, witness_violations
from movcat.prosys import (
    Expansion,
    PeriodicSequence,
    system_uniform_search,
    thread_violations,
    validate_expansion,
)
from movcat.shapebridge import (
    comma_to_system_witness,
    corollary_sequence_check,
    round_trip,
    system_to_comma_witness,
    theorem_check,
)

seeds = st.integers(min_value=0, max_value=10**6)


def run(exp):
    return theorem_check(exp.ambient, exp.sub, exp.apex, exp)


def assert_sound(report, exp):
    assert report.consistent
    assert report.constructions_ok, report.construction_errors
    for got in report.to_system.values():
        assert thread_violations(exp.system, got.thread) == []
    for got in report.to_comma.values():
        assert witness_violations(report.comma.base, got.witness, uniform=True) == []


def test_single_object_comma():
    exp = fix_exp()
    report = run(exp)
    assert report.comma_uniform and report.system_uniform
    assert_sound(report, exp)
    got = report.to_system["1"]
    assert (got.index, dict(got.thread.values)) == ("1", {"1": "id_P"})
    w = report.to_comma["p"].witness
    assert (w.mover, w.morphism) == ("p", "id_P@p")


def test_pointed_sets_expansion():
    exp = fix_c_expansion()
    report = run(exp)
    assert report.comma_uniform and report.system_uniform
    assert_sound(report, exp)
    assert set(round_trip(report, exp)) == set(report.comma.base.objects)


def test_broken_equalization_is_not_an_expansion():
    T = fix_a()
    sub = full_subcategory(T, ["s2"])
    sys = PeriodicSequence(restrict(T, sub), (), (), ("s2",), ("id_s2",))
    exp = validate_expansion(Expansion(T, sub, "s1", sys, cycle_legs=("const_a",)))
    with pytest.raises(ExpansionInvalid) as info:
        run(exp)
    assert "AE2" in info.value.laws


def test_mutated_comma_witness_gives_a_bad_thread():
    exp = validate_expansion(collapse_expansion())
    report = run(exp)
    w = report.comma_side.witnesses()["collapse"]
    # send the factor of the leg at level 1 to a comma morphism with the wrong target
    bad = UniformMovabilityWitness(
        w.target, w.mover, w.morphism, {**w.factors, "id_s1@collapse": "swap@id_s2"}
    )
    with pytest.raises(ThreadVerificationFailure):
        comma_to_system_witness(exp, report.comma, bad, "1")


def test_threads_must_commute_with_the_legs():
    exp = validate_expansion(collapse_expansion())
    comma = comma_category(exp.ambient, exp.sub, exp.apex)
    plain = system_uniform_search(exp.system)
    assert plain.indices["1"].at("2") == "const_a"
    # the literal construction from this thread lands outside the comma category
    with pytest.raises(WitnessVerificationFailure):
        system_to_comma_witness(exp, comma, plain.indices, "collapse")
    fitted = system_uniform_search(exp.system, over=exp)
    for f in comma.base.objects:
        w = system_to_comma_witness(exp, comma, fitted.indices, f).witness
        assert witness_violations(comma.base, w, uniform=True) == []
    report = run(exp)
    assert report.consistent and report.constructions_ok


def test_sequence_expansion_movable_iff_uniform():
    T = fix_c()
    sub = full_subcategory(T, ["P1"])
    rep = corollary_sequence_check(T, sub, "P2", constant_expansion(T, sub, "P2", "P1", "collapse"))
    assert rep.agree and rep.uniform.verdict
    T = fix_exp_category()
    sub = full_subcategory(T, ["P"])
    rep = corollary_sequence_check(T, sub, "X", constant_expansion(T, sub, "X", "P", "p"))
    assert rep.agree and rep.movable.verdict
    with pytest.raises(ExpansionInvalid):
        corollary_sequence_check(T, sub, "X", fix_exp())


def passing_expansion(seed, sequence):
    rng = random.Random(seed)
    T = random_category(rng, rng.randint(1, 3), rng.choice([0.3, 0.5]), 24)
    for _ in range(10):
        exp = random_expansion(rng, T, sequence=sequence)
        if exp is not None and expansion_passes(exp):
            return exp
    return None


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_generated_expansions_agree(seed):
    exp = passing_expansion(seed, sequence=False)
    if exp is None:
        return
    report = run(exp)
    assert report.comma_uniform == report.system_uniform
    assert_sound(report, exp)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_generated_sequence_expansions_agree(seed):
    exp = passing_expansion(seed, sequence=True)
    if exp is None:
        return
    rep = corollary_sequence_check(exp.ambient, exp.sub, exp.apex, exp)
    assert rep.agree
    assert_sound(run(exp), exp)
