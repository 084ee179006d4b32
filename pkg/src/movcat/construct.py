"""Comma categories, pullbacks, initial objects, null morphisms, domination."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    CodomainMismatch,
    InvalidSubcategory,
    NotClosed,
    Violation,
)
from .fincat import FinCategory, Morphism, SubcategorySpec, _build, is_subcategory


@dataclass(frozen=True, eq=False)
class CommaCategory:
    """The comma category of ``apex`` over a subcategory, with its embedding.

    ``object_table`` sends a comma object to the ambient morphism ``X -> P`` it
    is; ``morphism_table`` sends a comma morphism to the ambient ``u: P -> P'``.
    Comma objects reuse the ambient morphism id; a comma morphism ``u`` out of
    the object ``p`` is named ``"u@p"``.
    """

    base: FinCategory
    ambient: FinCategory
    sub: SubcategorySpec
    apex: str
    object_table: Mapping[str, str]
    morphism_table: Mapping[str, str]

    def object_for(self, p: str) -> str:
        """The comma object that is the ambient morphism ``p``."""
        if p not in self.object_table:
            raise KeyError(f"{p!r} is not a morphism from {self.apex!r} into the subcategory")
        return p

    def morphism_for(self, u: str, source: str) -> str:
        """The comma morphism given by ambient ``u`` out of comma object ``source``."""
        mid = comma_morphism_id(u, source)
        if mid not in self.morphism_table:
            raise KeyError(f"{u!r} is not a comma morphism out of {source!r}")
        return mid


def comma_morphism_id(u: str, source: str) -> str:
    return f"{u}@{source}"


def comma_category(T: FinCategory, P: SubcategorySpec, X: str) -> CommaCategory:
    T.require_object(X)
    try:
        is_subcategory(T, P)
    except (NotClosed, InvalidSubcategory) as exc:
        raise InvalidSubcategory("not a subcategory", exc.violations) from None
    except Exception as exc:
        raise InvalidSubcategory(str(exc)) from None

    objects = [p for p in T.out_of(X) if T.cod(p) in P.objects]
    object_set = set(objects)
    morphisms: list[Morphism] = []
    table: dict[str, str] = {}
    key: dict[tuple[str, str], str] = {}
    for p in objects:
        for u in T.out_of(T.cod(p)):
            if u not in P.morphisms:
                continue
            target = T.compose(u, p)
            assert target in object_set
            mid = comma_morphism_id(u, p)
            morphisms.append(Morphism(mid, p, target))
            table[mid] = u
            key[u, p] = mid
    identities = {p: key[T.identities[T.cod(p)], p] for p in objects}
    comp = {}
    by_dom = defaultdict(list)
    for m in morphisms:
        by_dom[m.dom].append(m)
    for f in morphisms:
        for g in by_dom[f.cod]:
            comp[g.id, f.id] = key[T.compose(table[g.id], table[f.id]), f.dom]
    base = _build(objects, morphisms, identities, comp)
    return CommaCategory(base, T, P, X, {p: p for p in objects}, table)


# ---------------------------------------------------------------------------
# pullbacks


@dataclass(frozen=True)
class PullbackData:
    f: str
    g: str
    apex: str
    p_x: str
    p_y: str
    mediators: Mapping[tuple[str, str], str]  # (u_X, u_Y) -> u_X ×_Z u_Y

    def mediator(self, u_x: str, u_y: str) -> str:
        return self.mediators[u_x, u_y]


def _cones(cat: FinCategory, f: str, g: str):
    x, y = cat.dom(f), cat.dom(g)
    cones = {}
    for u in cat.objects:
        cones[u] = [
            (ux, uy)
            for ux in cat.hom(u, x)
            for uy in cat.hom(u, y)
            if cat.compose(f, ux) == cat.compose(g, uy)
        ]
    return cones


def find_pullback(cat: FinCategory, f: str, g: str) -> PullbackData | None:
    """Exhaustive search for a pullback of ``f: X -> Z`` and ``g: Y -> Z``.

    Candidates ``(W, p_X, p_Y)`` are tried in object order, then morphism
    order; the first one with the universal property is returned.
    """
    if cat.cod(f) != cat.cod(g):
        raise CodomainMismatch(f"cod({f})={cat.cod(f)!r} but cod({g})={cat.cod(g)!r}")
    cones = _cones(cat, f, g)
    for w in cat.objects:
        for px, py in cones[w]:
            mediators = {}
            ok = True
            for u in cat.objects:
                for ux, uy in cones[u]:
                    found = [
                        m
                        for m in cat.hom(u, w)
                        if cat.compose(px, m) == ux and cat.compose(py, m) == uy
                    ]
                    if len(found) != 1:
                        ok = False
                        break
                    mediators[ux, uy] = found[0]
                if not ok:
                    break
            if ok:
                return PullbackData(f, g, w, px, py, mediators)
    return None


# ---------------------------------------------------------------------------
# initial objects, null morphisms, domination


def find_initial(cat: FinCategory) -> str | None:
    for o in cat.objects:
        if all(len(cat.hom(o, b)) == 1 for b in cat.objects):
            return o
    return None


@dataclass(frozen=True)
class NullFamily:
    table: Mapping[tuple[str, str], str]

    def __getitem__(self, pair: tuple[str, str]) -> str:
        return self.table[pair]


def null_family_violations(cat: FinCategory, nulls: NullFamily) -> list[Violation]:
    out = []
    for a in cat.objects:
        for b in cat.objects:
            z = nulls.table.get((a, b))
            if z is None or not cat.has_morphism(z) or cat.dom(z) != a or cat.cod(z) != b:
                out.append(Violation("totality", (a, b), "no null morphism of the right type"))
    if out:
        return out
    for (a, b), z in nulls.table.items():
        for f in cat.out_of(b):
            if cat.compose(f, z) != nulls.table[a, cat.cod(f)]:
                out.append(Violation("left absorption", (f, z), f"{f}∘0 != 0"))
        for g in cat.into(a):
            if cat.compose(z, g) != nulls.table[cat.dom(g), b]:
                out.append(Violation("right absorption", (z, g), f"0∘{g} != 0"))
    return out


def find_null_family(cat: FinCategory) -> NullFamily | None:
    """First absorbing assignment ``(A, B) -> 0_AB`` by backtracking, or None."""
    pairs = [(a, b) for a in cat.objects for b in cat.objects]
    if any(not cat.hom(a, b) for a, b in pairs):
        return None
    # constraints: comp(k, value[x]) == value[y] and comp(value[x], k) == value[y]
    checks = defaultdict(list)
    for a, b in pairs:
        for f in cat.out_of(b):
            c = ("post", (a, b), f, (a, cat.cod(f)))
            checks[a, b].append(c)
            checks[a, cat.cod(f)].append(c)
        for g in cat.into(a):
            c = ("pre", (a, b), g, (cat.dom(g), b))
            checks[a, b].append(c)
            checks[cat.dom(g), b].append(c)
    value: dict[tuple[str, str], str] = {}

    def consistent(pair) -> bool:
        for kind, x, k, y in checks[pair]:
            if x in value and y in value:
                got = cat.compose(k, value[x]) if kind == "post" else cat.compose(value[x], k)
                if got != value[y]:
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(pairs):
            return True
        pair = pairs[i]
        for z in cat.hom(*pair):
            value[pair] = z
            if consistent(pair) and search(i + 1):
                return True
        del value[pair]
        return False

    return NullFamily(dict(value)) if search(0) else None


def find_domination(cat: FinCategory, y: str, x: str) -> tuple[str, str] | None:
    """First ``(f: X -> Y, g: Y -> X)`` with ``f∘g = id_Y``."""
    cat.require_object(x)
    cat.require_object(y)
    idy = cat.identities[y]
    for f in cat.hom(x, y):
        for g in cat.hom(y, x):
            if cat.compose(f, g) == idy:
                return f, g
    return None
