"""Seeded random instances: categories, subcategories, systems, expansions.

Categories are concrete: every object is a small finite set, a few random maps
are chosen as generators, and the family is closed under composition.  A
closure that grows past the morphism budget is thrown away and redrawn.
"""

from __future__ import annotations

import random

from .errors import SizeOverflow
from .fincat import FinCategory, SubcategorySpec, from_function_table, full_subcategory, restrict
from .prosys import (
    DivisibilitySequence,
    Expansion,
    PeriodicSequence,
    finite_system,
    preorder_from_cover,
)

MAX_OBJECTS = 8
MAX_MORPHISMS = 64
ATTEMPTS = 200


def _close(objects: dict[str, int], maps: list[tuple[str, str, tuple]], budget: int):
    """Close ``(dom, cod, table)`` triples under composition; None past ``budget``."""
    if len(maps) > budget:
        return None
    known = {m: i for i, m in enumerate(maps)}
    out = list(maps)
    frontier = list(maps)
    while frontier:
        fresh = []
        for new in frontier:
            for old in list(out):
                for g, f in ((new, old), (old, new)):
                    if f[1] != g[0]:
                        continue
                    comp = (f[0], g[1], tuple(g[2][x] for x in f[2]))
                    if comp not in known:
                        known[comp] = len(out)
                        out.append(comp)
                        fresh.append(comp)
                        if len(out) > budget:
                            return None
        frontier = fresh
    return out


def random_category(
    rng: random.Random, objects: int = 3, density: float = 0.3, max_morphisms: int = MAX_MORPHISMS
) -> FinCategory:
    """A category of maps between sets of size 1-3, closed under composition."""
    if not 1 <= objects <= MAX_OBJECTS:
        raise ValueError(f"objects must be between 1 and {MAX_OBJECTS}")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    names = [f"o{i + 1}" for i in range(objects)]
    for _ in range(ATTEMPTS):
        sizes = {o: rng.randint(1, 3) for o in names}
        idents = [(o, o, tuple(range(sizes[o]))) for o in names]
        gens = []
        for _ in range(max(1, round(density * objects * objects))):
            a, b = rng.choice(names), rng.choice(names)
            gens.append((a, b, tuple(rng.randrange(sizes[b]) for _ in range(sizes[a]))))
        seed = list(dict.fromkeys(idents + gens))
        closed = _close(sizes, seed, max_morphisms)
        if closed is None:
            continue
        maps = []
        counter = 0
        for d, c, table in closed:
            if (d, c, table) in idents:
                mid = f"id_{d}"
            else:
                counter += 1
                mid = f"f{counter}"
            maps.append((mid, d, c, dict(enumerate(table))))
        return from_function_table({o: list(range(sizes[o])) for o in names}, maps)
    raise SizeOverflow(f"no category within {max_morphisms} morphisms after {ATTEMPTS} draws")


def random_subcategory(rng: random.Random, cat: FinCategory, full: bool = False) -> SubcategorySpec:
    """Random objects; then all morphisms among them, or the closure of a random subset."""
    objs = [o for o in cat.objects if rng.random() < 0.6] or [rng.choice(cat.objects)]
    if full:
        return full_subcategory(cat, objs)
    inside = [m.id for m in cat.morphisms if m.dom in objs and m.cod in objs]
    chosen = {m for m in inside if rng.random() < 0.4} | {cat.identities[o] for o in objs}
    changed = True
    while changed:
        changed = False
        for g in list(chosen):
            for f in list(chosen):
                if cat.cod(f) == cat.dom(g):
                    gf = cat.compose(g, f)
                    if gf not in chosen:
                        chosen.add(gf)
                        changed = True
    return SubcategorySpec(objs, chosen)


def _random_tree(rng: random.Random, size: int) -> dict[str, str | None]:
    """Parent map of a rooted tree on ``1..size``; the root (the top index) is ``size``."""
    names = [str(i + 1) for i in range(size)]
    parent: dict[str, str | None] = {names[-1]: None}
    for i in range(size - 2, -1, -1):
        parent[names[i]] = rng.choice(names[i + 1 :])
    return parent


def _tree_system(rng, cat: FinCategory, top_object: str, parent, pick_object):
    """Objects and bonds along a tree, composite bonds derived by composition."""
    names = sorted(parent, key=int)
    objects = {names[-1]: top_object}
    step = {}
    for lam in reversed(names[:-1]):
        up = parent[lam]
        choice = pick_object(objects[up])
        if choice is None:
            return None
        objects[lam], step[lam] = choice
    pairs = []
    bonds = {}
    for lam in names:
        acc = cat.identities[objects[lam]]
        mu = lam
        while parent[mu] is not None:
            acc = cat.compose(acc, step[mu])
            mu = parent[mu]
            bonds[lam, mu] = acc
            pairs.append((lam, mu))
    index = preorder_from_cover(names, pairs)
    return finite_system(index, cat, objects, bonds), objects


def random_finite_system(rng: random.Random, cat: FinCategory, size: int = 4):
    """A finite system over a random rooted tree of indices (the root is above all)."""
    for _ in range(ATTEMPTS):
        parent = _random_tree(rng, size)

        def pick(upper):
            options = [(o, f) for o in cat.objects for f in cat.hom(upper, o)]
            return rng.choice(options)

        got = _tree_system(rng, cat, rng.choice(cat.objects), parent, pick)
        if got is not None:
            return got[0]
    raise SizeOverflow("no finite system found")


def random_periodic_sequence(rng: random.Random, cat: FinCategory) -> PeriodicSequence:
    for _ in range(ATTEMPTS):
        k, c = rng.randint(0, 2), rng.randint(1, 3)
        cyc = [rng.choice(cat.objects) for _ in range(c)]
        bonds = []
        for phase in range(c):
            options = cat.hom(cyc[(phase + 1) % c], cyc[phase])
            if not options:
                break
            bonds.append(rng.choice(options))
        else:
            pre_obj, pre_bonds = [], []
            upper = cyc[0]
            for _ in range(k):
                options = [(o, f) for o in cat.objects for f in cat.hom(upper, o)]
                o, f = rng.choice(options)
                pre_obj.insert(0, o)
                pre_bonds.insert(0, f)
                upper = o
            return PeriodicSequence(cat, tuple(pre_obj), tuple(pre_bonds), tuple(cyc), tuple(bonds))
    raise SizeOverflow("no periodic sequence found")


def random_divisibility(rng: random.Random) -> DivisibilitySequence:
    k, c = rng.randint(0, 3), rng.randint(1, 3)
    pool = [1, 1, 1, 2, 3]
    return DivisibilitySequence(
        tuple(rng.choice(pool) for _ in range(k)), tuple(rng.choice(pool) for _ in range(c))
    )


# ---------------------------------------------------------------------------
# expansions


def reflections(T: FinCategory, sub: SubcategorySpec, x: str) -> list[tuple[str, str]]:
    """``(Y, p)`` with ``p: X -> Y`` through which every ``X -> Q`` factors uniquely in ``sub``."""
    objs = [o for o in T.objects if o in sub.objects]
    out = []
    for y in objs:
        for p in T.hom(x, y):
            ok = True
            for q in objs:
                maps = [g for g in T.hom(y, q) if g in sub.morphisms]
                for f in T.hom(x, q):
                    if sum(1 for g in maps if T.compose(g, p) == f) != 1:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append((y, p))
    return out


def _automorphisms(T: FinCategory, sub: SubcategorySpec, y: str) -> dict[str, str]:
    ident = T.identities[y]
    ends = [g for g in T.hom(y, y) if g in sub.morphisms]
    inv = {}
    for g in ends:
        for h in ends:
            if T.compose(g, h) == ident and T.compose(h, g) == ident:
                inv[g] = h
    return inv


def random_expansion(rng: random.Random, T: FinCategory, sequence: bool = False) -> Expansion | None:
    """An expansion candidate of a random object, or None when none was built.

    Half of the time the top leg is a reflection into the subcategory, which
    makes AE1 and AE2 hold; otherwise it is an arbitrary morphism and the
    axioms may fail.  Callers filter with the AE checkers.
    """
    sub = random_subcategory(rng, T, full=True)
    x = rng.choice(T.objects)
    objs = [o for o in T.objects if o in sub.objects]
    refl = reflections(T, sub, x)
    if refl and rng.random() < 0.5:
        y, p = rng.choice(refl)
    else:
        options = [(o, f) for o in objs for f in T.hom(x, o)]
        if not options:
            return None
        y, p = rng.choice(options)
    P = restrict(T, sub)

    def pick(upper):
        options = [(o, f) for o in objs for f in P.hom(upper, o)]
        return rng.choice(options) if options else None

    if not sequence:
        parent = _random_tree(rng, rng.randint(1, 4))
        got = _tree_system(rng, P, y, parent, pick)
        if got is None:
            return None
        sys, objects = got
        top = max(sys.levels(), key=int)
        legs = {lam: T.compose(sys.bonds[lam, top], p) for lam in sys.levels()}
        return Expansion(T, sub, x, sys, legs=legs)

    inv = _automorphisms(T, sub, y)
    autos = list(inv)
    c = rng.randint(1, 3)
    cycle = [rng.choice(autos) for _ in range(c - 1)]
    loop = T.identities[y]
    for a in cycle:
        loop = T.compose(loop, a)
    cycle.append(inv[loop])
    cycle_legs = [p]
    for phase in range(c - 1):
        cycle_legs.append(T.compose(inv[cycle[phase]], cycle_legs[-1]))
    pre_obj, pre_bonds, pre_legs = [], [], []
    upper, upper_leg = y, p
    for _ in range(rng.randint(0, 2)):
        choice = pick(upper)
        if choice is None:
            break
        o, f = choice
        pre_obj.insert(0, o)
        pre_bonds.insert(0, f)
        upper_leg = T.compose(f, upper_leg)
        pre_legs.insert(0, upper_leg)
        upper = o
    sys = PeriodicSequence(P, tuple(pre_obj), tuple(pre_bonds), (y,) * c, tuple(cycle))
    return Expansion(T, sub, x, sys, prefix_legs=tuple(pre_legs), cycle_legs=tuple(cycle_legs))


# ---------------------------------------------------------------------------
# workspace output


def gen_random(seed: int, objects: int = 3, density: float = 0.3):
    """A workspace with one random instance of every kind; same seed, same output."""
    from .prosys import validate_expansion
    from .workspace import ExpansionEntry, SubcategoryEntry, SystemEntry, Workspace

    rng = random.Random(seed)
    T = random_category(rng, objects, density)
    ws = Workspace()
    ws.categories["G"] = T
    ws.subcategories["G-SUB"] = SubcategoryEntry("G", random_subcategory(rng, T))
    ws.systems["G-FIN"] = SystemEntry("finite", "G", random_finite_system(rng, T))
    ws.systems["G-SEQ"] = SystemEntry("periodic", "G", random_periodic_sequence(rng, T))
    ws.systems["G-DIV"] = SystemEntry("divisibility", None, random_divisibility(rng))
    for name, seq in (("G-EXP", False), ("G-EXP-SEQ", True)):
        for _ in range(20):
            exp = random_expansion(rng, T, sequence=seq)
            if exp is None:
                continue
            validate_expansion(exp)
            sub_name = f"{name}-P"
            sys_name = f"{name}-SYS"
            ws.subcategories[sub_name] = SubcategoryEntry("G", exp.sub, True)
            ws.systems[sys_name] = SystemEntry(
                "periodic" if seq else "finite", "G", exp.system.with_ambient(T)
            )
            ws.expansions[name] = ExpansionEntry("G", sub_name, sys_name, exp)
            break
    return ws


def expansion_passes(exp: Expansion) -> bool:
    """Whether an expansion candidate satisfies AE1 and AE2."""
    from .errors import AE1Violation, AE2Violation
    from .prosys import check_AE1, check_AE2

    try:
        check_AE1(exp)
        check_AE2(exp)
    except (AE1Violation, AE2Violation):
        return False
    return True
