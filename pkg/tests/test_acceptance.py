"""The eleven acceptance criteria, one check each, printed as PASS/FAIL lines.

Run with ``pytest tests/test_acceptance.py`` (lines go straight to the
terminal) or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from movcat.construct import find_domination, find_null_family, find_pullback
from movcat.errors import AE1Violation, AE2Violation, ExpansionInvalid, LawViolation
from movcat.fincat import (
    NatTrans,
    compose_functors,
    dual,
    full_subcategory,
    identity_functor,
    product,
    restrict,
    section_functor,
    validate_category,
)
from movcat.fixtures import (
    collapse_expansion,
    div_221,
    fix_a,
    fix_b,
    fix_b_plus,
    fix_c,
    fix_exp_category,
    solenoid2,
)
from movcat.generate import (
    expansion_passes,
    random_category,
    random_divisibility,
    random_expansion,
    random_periodic_sequence,
    random_subcategory,
)
from movcat.movability import (
    check_pullback_relation,
    decide_category,
    decide_co_movable,
    decide_movable,
    decide_uniformly_movable,
    movable_search,
    product_witness,
    transfer_domination,
    transfer_weak_functorial,
    uniform_search,
    verify_witness,
    witness_from_initial,
    witness_from_nulls,
    witness_violations,
)
from movcat.prosys import (
    DivisibilitySequence,
    Expansion,
    PeriodicSequence,
    check_AE1,
    check_AE2,
    system_movable_search,
    system_uniform_search,
    thread_violations,
)
from movcat.shapebridge import theorem_check
from movcat.workspace import fixture_path, load_workspace

from mutations import mutations
from oracles import (
    Table,
    assignment_count,
    divisibility_movable,
    movable_by_enumeration,
    periodic_movable,
    unrolled_bonds,
    unrolled_objects,
)


def fixture_categories():
    cats = {
        "FIX-A": fix_a(),
        "FIX-B": fix_b(),
        "FIX-B+": fix_b_plus(),
        "FIX-C": fix_c(),
        "FIX-EXP-T": fix_exp_category(),
    }
    for name, cat in load_workspace(fixture_path()).categories.items():
        cats.setdefault(name, cat)
    return cats


def small(rng, budget):
    return random_category(rng, rng.randint(1, 3), rng.choice([0.2, 0.3, 0.5]), budget)


# ---------------------------------------------------------------------------
# the criteria; each returns a one-line summary and fails by assertion


def c1_singleton_in_sets():
    a = fix_a()
    w = decide_movable(a, "s1")
    assert w is not None and witness_violations(a, w, uniform=False) == []
    assert decide_uniformly_movable(a, "s1") is None
    assert movable_by_enumeration(a, "s1", uniform=False)
    assert not movable_by_enumeration(a, "s1", uniform=True)
    return f"FIX-A s1 movable, not uniform; enumeration over {assignment_count(a, 's1')} assignments agrees"


def c2_initial_and_null():
    b, c = fix_b(), fix_c()
    assert decide_category(b, uniform=True).verdict
    assert decide_category(c, uniform=True).verdict
    for x in b.objects:
        verify_witness(b, witness_from_initial(b, "0", x), uniform=True)
    nulls = find_null_family(c)
    for x in c.objects:
        verify_witness(c, witness_from_nulls(c, nulls, x), uniform=True)
    return f"{len(b.objects)} + {len(c.objects)} objects uniform; closed-form witnesses verify"


def c3_transfers():
    b = fix_b()
    b_witness = {x: decide_uniformly_movable(b, x) for x in b.objects}
    inputs = artifacts = 0
    seed = 0
    while inputs < 100:
        rng = random.Random(seed)
        seed += 1
        cat = small(rng, 16)
        ws = {x: decide_uniformly_movable(cat, x) for x in cat.objects}
        ws = {x: w for x, w in ws.items() if w is not None}
        if not ws:
            continue
        inputs += 1
        for x, wx in ws.items():
            for y in cat.objects:
                pair = find_domination(cat, y, x)
                if pair is not None:
                    verify_witness(cat, transfer_domination(cat, wx, *pair), uniform=True)
                    artifacts += 1
        prod = product([cat, b])
        for x, wx in ws.items():
            for o, wo in b_witness.items():
                verify_witness(prod.category, product_witness(prod, [wx, wo]), uniform=True)
                artifacts += 1
        # L = cat retracts onto K = cat × FIX-B through the slice at the initial object
        J = section_functor(prod, 0, [cat.objects[0], "0"])
        D = prod.projections[0]
        ident = identity_functor(cat)
        psi = NatTrans(compose_functors(D, J), ident, dict(cat.identities))
        kws = {J.objects[x]: decide_uniformly_movable(prod.category, J.objects[x]) for x in ws}
        out = transfer_weak_functorial(cat, prod.category, J, D, psi, kws, objects=list(ws))
        for w in out.values():
            verify_witness(cat, w, uniform=True)
            artifacts += 1
    return f"{inputs} seeded inputs, {artifacts} transferred witnesses verified"


def c4_product_law():
    pairs = both = 0
    seed = 0
    while pairs < 50:
        rng = random.Random(10_000 + seed)
        seed += 1
        a, b = small(rng, 8), small(rng, 8)
        va = decide_category(a, uniform=True).verdict
        vb = decide_category(b, uniform=True).verdict
        vp = decide_category(product([a, b]).category, uniform=True).verdict
        assert vp == (va and vb), seed
        pairs += 1
        both += va and vb
    return f"{pairs} pairs agree ({both} uniform products, {pairs - both} not)"


def c5_duality():
    checked = 0
    for name, cat in fixture_categories().items():
        op = dual(cat)
        for x in cat.objects:
            for uniform in (False, True):
                direct = decide_uniformly_movable(op, x) if uniform else decide_movable(op, x)
                assert decide_co_movable(cat, x, uniform) == direct, (name, x)
                checked += 1
    return f"{checked} (fixture, object, mode) co-verdicts equal the dual verdicts"


def c6_pullbacks():
    checked = 0
    for name, cat in fixture_categories().items():
        for z in cat.objects:
            wz = decide_uniformly_movable(cat, z)
            if wz is None:
                continue
            into = cat.into(z)
            for f in into:
                for g in into:
                    if find_pullback(cat, f, g) is None:
                        continue
                    rel = check_pullback_relation(cat, wz, f, g)
                    assert rel.holds, (name, f, g)
                    checked += 1
    assert checked
    return f"{checked} fixture pullbacks satisfy the relation"


def c7_solenoid():
    result = system_movable_search(solenoid2())
    assert not result.holds and result.failure.lam == 1 and result.failure.blocks
    assert system_uniform_search(solenoid2()).holds is False
    indices = system_movable_search(div_221())
    assert indices.holds and indices.indices[1].m == 3
    return "SOLENOID2 refuted at λ=1; DIV-221 movable with m(1)=3"


def _sequence(seed):
    rng = random.Random(seed)
    if seed % 2:
        return random_divisibility(rng)
    return random_periodic_sequence(rng, small(rng, 20))


def _oracle_index(seq, lam, horizon):
    if isinstance(seq, DivisibilitySequence):
        return divisibility_movable(seq.prefix, seq.cycle, lam, horizon)
    objs = unrolled_objects(seq.prefix_objects, seq.cycle_objects, horizon)
    bonds = unrolled_bonds(seq.prefix_bonds, seq.cycle_bonds, horizon)
    return periodic_movable(Table.of(seq.ambient), objs, bonds, lam, horizon)


def c8_sequences():
    movable_count = 0
    for seed in range(100):
        seq = _sequence(seed)
        mov, uni = system_movable_search(seq), system_uniform_search(seq)
        assert mov.holds == uni.holds, seed
        horizon = 2 * (seq.prefix_len + 12 * seq.cycle_len + 8)
        expected = {lam: _oracle_index(seq, lam, horizon) for lam in seq.levels()}
        if mov.holds:
            movable_count += 1
            assert {lam: ix.m for lam, ix in mov.indices.items()} == expected
            assert {lam: t.m for lam, t in uni.indices.items()} == expected
            for t in uni.indices.values():
                assert thread_violations(seq, t) == []
        else:
            assert None in expected.values()
    return f"100 sequences: {movable_count} movable, {100 - movable_count} not; verdicts and indices agree"


def _ae2_broken_only(exp):
    try:
        check_AE1(exp)
    except AE1Violation:
        return False
    try:
        check_AE2(exp)
    except AE2Violation:
        return True
    return False


def mutated_bond_expansions(seeds=range(400)):
    """Stationary expansions whose idempotent bond ``e`` (with ``e∘p = p``) is edited to the identity.

    The legs stay compatible and AE1 is untouched, so only AE2 can change;
    pairs where the original passes and the edit breaks AE2 are kept.
    """
    out = []
    for seed in seeds:
        rng = random.Random(seed)
        T = small(rng, 24)
        sub = random_subcategory(rng, T, full=True)
        P = restrict(T, sub)
        for y in P.objects:
            ident = P.identities[y]
            for e in P.hom(y, y):
                if e == ident or P.compose(e, e) != e:
                    continue
                for x in T.objects:
                    for p in T.hom(x, y):
                        if T.compose(e, p) != p:
                            continue
                        good = Expansion(T, sub, x, PeriodicSequence(P, (), (), (y,), (e,)), cycle_legs=(p,))
                        bad = Expansion(T, sub, x, PeriodicSequence(P, (), (), (y,), (ident,)), cycle_legs=(p,))
                        if expansion_passes(good) and _ae2_broken_only(bad):
                            out.append(bad)
    return out


def c9_cross_fire():
    passing, broken = [], []
    seed = 0
    while len(passing) < 100:
        rng = random.Random(20_000 + seed)
        seed += 1
        T = small(rng, 24)
        for _ in range(10):
            exp = random_expansion(rng, T, sequence=bool(seed % 2))
            if exp is None:
                continue
            if expansion_passes(exp):
                passing.append(exp)
                break
            if _ae2_broken_only(exp):
                broken.append(exp)
    passing.append(collapse_expansion())
    uniform = 0
    for exp in passing:
        report = theorem_check(exp.ambient, exp.sub, exp.apex, exp)
        assert report.consistent
        assert report.constructions_ok, report.construction_errors
        for got in report.to_system.values():
            assert thread_violations(exp.system, got.thread) == []
        for got in report.to_comma.values():
            assert witness_violations(report.comma.base, got.witness, uniform=True) == []
        uniform += report.comma_uniform
    # the bond of the stationary FIX-A expansion mutated from fold_a to id_s2
    T = fix_a()
    sub = full_subcategory(T, ["s2"])
    seq = PeriodicSequence(restrict(T, sub), (), (), ("s2",), ("id_s2",))
    mutated = [Expansion(T, sub, "s1", seq, cycle_legs=("const_a",))] + mutated_bond_expansions()
    for exp in mutated + broken:
        with pytest.raises(ExpansionInvalid):
            theorem_check(exp.ambient, exp.sub, exp.apex, exp)
    return (
        f"{len(passing)} expansions agree ({uniform} uniform) with verified constructions; "
        f"{len(mutated)} bond mutations and {len(broken)} other AE2-broken candidates rejected"
    )


def c10_csp_vs_brute_force():
    corpus = [c for c in fixture_categories().values() if len(c.morphisms) <= 12]
    for seed in range(200):
        cat = small(random.Random(30_000 + seed), 12)
        if len(cat.morphisms) <= 12:
            corpus.append(cat)
    checks = 0
    for cat in corpus:
        for x in cat.objects:
            for uniform in (False, True):
                found = (uniform_search if uniform else movable_search)(cat, x).found
                assert found == movable_by_enumeration(cat, x, uniform)
                checks += 1
    return f"{len(corpus)} categories, {checks} verdicts equal to brute force"


def c11_adversarial():
    suite = mutations()
    assert len(suite) == 200
    for m in suite:
        expected = m.oracle_laws()
        assert m.kind in expected
        try:
            validate_category(m.raw)
        except LawViolation as exc:
            assert exc.laws == expected, (m.source, m.edit)
        else:
            raise AssertionError(f"accepted: {m.source} {m.edit}")
    return "200 mutations rejected with the law the oracle names"


CRITERIA = [
    c1_singleton_in_sets,
    c2_initial_and_null,
    c3_transfers,
    c4_product_law,
    c5_duality,
    c6_pullbacks,
    c7_solenoid,
    c8_sequences,
    c9_cross_fire,
    c10_csp_vs_brute_force,
    c11_adversarial,
]


def run_criterion(number, check):
    start = time.perf_counter()
    try:
        detail, ok = check(), True
    except Exception as exc:
        detail, ok = f"{type(exc).__name__}: {exc}", False
    took = time.perf_counter() - start
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {check.__name__} [{took:.2f}s] {detail}"
    return ok, line


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, capsys):
    ok, line = run_criterion(number, CRITERIA[number - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    start = time.perf_counter()
    results = [run_criterion(i, c) for i, c in enumerate(CRITERIA, 1)]
    for _, line in results:
        print(line)
    print(f"{sum(ok for ok, _ in results)}/{len(results)} passed in {time.perf_counter() - start:.1f}s")
    sys.exit(0 if all(ok for ok, _ in results) else 1)
