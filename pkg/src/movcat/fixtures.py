"""Canonical small categories, systems and expansions used across the tool."""

from __future__ import annotations

from .fincat import FinCategory, RawCategory, SubcategorySpec, from_function_table, full_subcategory, restrict, validate_category
from .prosys import (
    DivisibilitySequence,
    Expansion,
    PeriodicSequence,
    finite_system,
    preorder_from_cover,
)


def fix_a() -> FinCategory:
    """Nonempty sets {*} and {a, b} with all eight maps between them."""
    return from_function_table(
        {"s1": ["*"], "s2": ["a", "b"]},
        [
            ("id_s1", "s1", "s1", {"*": "*"}),
            ("id_s2", "s2", "s2", {"a": "a", "b": "b"}),
            ("const_a", "s1", "s2", {"*": "a"}),
            ("const_b", "s1", "s2", {"*": "b"}),
            ("collapse", "s2", "s1", {"a": "*", "b": "*"}),
            ("swap", "s2", "s2", {"a": "b", "b": "a"}),
            ("fold_a", "s2", "s2", {"a": "a", "b": "a"}),
            ("fold_b", "s2", "s2", {"a": "b", "b": "b"}),
        ],
    )


def poset(elements, pairs) -> FinCategory:
    """The thin category of a partial order given by its non-identity relations."""
    morphisms = [(f"id_{e}", e, e) for e in elements]
    morphisms += [(f"le{a}{b}", a, b) for a, b in pairs]
    name = {(d, c): m for m, d, c in morphisms}
    comp = []
    for g, gd, gc in morphisms:
        for f, fd, fc in morphisms:
            if fc == gd:
                comp.append((g, f, name[fd, gc]))
    return validate_category(
        RawCategory(
            objects=list(elements),
            morphisms=morphisms,
            identities={e: f"id_{e}" for e in elements},
            compose=comp,
        )
    )


def fix_b() -> FinCategory:
    """The poset 0 <= 1, 0 <= 2 (0 is initial)."""
    return poset(["0", "1", "2"], [("0", "1"), ("0", "2")])


def fix_b_plus() -> FinCategory:
    """The lattice 0 <= 1 <= 3, 0 <= 2 <= 3."""
    return poset(
        ["0", "1", "2", "3"],
        [("0", "1"), ("0", "2"), ("1", "3"), ("2", "3"), ("0", "3")],
    )


def fix_c() -> FinCategory:
    """Pointed sets ({*}, *) and ({*, a}, *) with all base-point maps."""
    return from_function_table(
        {"P1": ["*"], "P2": ["*", "a"]},
        [
            ("id_P1", "P1", "P1", {"*": "*"}),
            ("id_P2", "P2", "P2", {"*": "*", "a": "a"}),
            ("incl", "P1", "P2", {"*": "*"}),
            ("collapse", "P2", "P1", {"*": "*", "a": "*"}),
            ("zero", "P2", "P2", {"*": "*", "a": "*"}),
        ],
    )


def fix_exp_category(extra: bool = False) -> FinCategory:
    """Objects X and P with a single morphism p: X -> P (and q when ``extra``)."""
    morphisms = [("id_X", "X", "X"), ("id_P", "P", "P"), ("p", "X", "P")]
    comp = [
        ("id_X", "id_X", "id_X"),
        ("id_P", "id_P", "id_P"),
        ("p", "id_X", "p"),
        ("id_P", "p", "p"),
    ]
    if extra:
        morphisms.append(("q", "X", "P"))
        comp += [("q", "id_X", "q"), ("id_P", "q", "q")]
    return validate_category(
        RawCategory(
            objects=["X", "P"],
            morphisms=morphisms,
            identities={"X": "id_X", "P": "id_P"},
            compose=comp,
        )
    )


def singleton_expansion(T: FinCategory, sub: SubcategorySpec, apex: str, obj: str, leg: str) -> Expansion:
    """Expansion over a one-element index with the identity bond."""
    P = restrict(T, sub)
    index = preorder_from_cover(["1"], [])
    sys = finite_system(index, P, {"1": obj}, {})
    return Expansion(T, sub, apex, sys, legs={"1": leg})


def constant_expansion(T: FinCategory, sub: SubcategorySpec, apex: str, obj: str, leg: str) -> Expansion:
    """Stationary sequence expansion: every level is ``obj``, bonds identities."""
    P = restrict(T, sub)
    ident = T.identities[obj]
    sys = PeriodicSequence(P, (), (), (obj,), (ident,))
    return Expansion(T, sub, apex, sys, cycle_legs=(leg,))


def fix_exp(extra: bool = False) -> Expansion:
    T = fix_exp_category(extra)
    return singleton_expansion(T, full_subcategory(T, ["P"]), "X", "P", "p")


def fix_c_expansion() -> Expansion:
    """P = full on ({*}); X = ({*, a}) with the collapse as its only leg."""
    T = fix_c()
    return singleton_expansion(T, full_subcategory(T, ["P1"]), "P2", "P1", "collapse")


def solenoid2() -> DivisibilitySequence:
    return DivisibilitySequence((), (2,))


def div_221() -> DivisibilitySequence:
    return DivisibilitySequence((2, 2), (1,))


def const_fold_sequence() -> PeriodicSequence:
    """The stationary sequence on {a, b} whose every bond is the constant map at a."""
    return PeriodicSequence(fix_a(), (), (), ("s2",), ("fold_a",))


def collapse_expansion() -> Expansion:
    """FIX-A with P everything and X = {a, b}: levels {*} <- {a, b}, legs collapse and id.

    Threads of the system need not commute with the legs here: at level 1
    with index 1, ``r^2 = const_a`` is a thread but ``const_a∘collapse`` is
    not the leg at level 2.
    """
    T = fix_a()
    sub = full_subcategory(T, T.objects)
    index = preorder_from_cover(["1", "2"], [("1", "2")])
    sys = finite_system(index, restrict(T, sub), {"1": "s1", "2": "s2"}, {("1", "2"): "collapse"})
    return Expansion(T, sub, "s2", sys, legs={"1": "collapse", "2": "id_s2"})
