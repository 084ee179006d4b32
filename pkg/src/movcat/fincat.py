"""Finite categories given by explicit composition tables.

Composition is written ``compose(cat, g, f)`` and means *g after f*; it is
defined exactly when ``cod(f) == dom(g)``.  Every enumeration follows the
declaration order of objects and morphisms, so all searches built on top of
this module are deterministic.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    DanglingReference,
    DuplicateId,
    EmptyFactorList,
    LawViolation,
    NotClosed,
    NotComposable,
    UnknownMorphism,
    UnknownObject,
    Violation,
)

# law names used in diagnostics
DUPLICATE = "duplicate id"
DANGLING = "dangling reference"
IDENTITY = "identity"
ASSOCIATIVITY = "associativity"
MISSING = "missing composite"
DOMCOD = "dom/cod"
COMPOSITION = "composition"
NATURALITY = "naturality"
TOTALITY = "totality"


@dataclass(frozen=True)
class Morphism:
    id: str
    dom: str
    cod: str


@dataclass
class RawCategory:
    """An unvalidated category description, as read from a file."""

    objects: list[str]
    morphisms: list[tuple[str, str, str]]
    identities: dict[str, str]
    compose: list[tuple[str, str, str]]  # (g, f, g∘f)


@dataclass(frozen=True, eq=False)
class FinCategory:
    """A validated finite category.  Build one with :func:`validate_category`."""

    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    identities: Mapping[str, str]
    comp: Mapping[tuple[str, str], str]
    _by_id: Mapping[str, Morphism] = field(repr=False, default=None)
    _hom: Mapping[tuple[str, str], tuple[str, ...]] = field(repr=False, default=None)
    _into: Mapping[str, tuple[str, ...]] = field(repr=False, default=None)
    _out: Mapping[str, tuple[str, ...]] = field(repr=False, default=None)
    _order: Mapping[str, int] = field(repr=False, default=None)

    def __post_init__(self):
        by_id = {m.id: m for m in self.morphisms}
        hom = defaultdict(list)
        into = defaultdict(list)
        out = defaultdict(list)
        for m in self.morphisms:
            hom[m.dom, m.cod].append(m.id)
            into[m.cod].append(m.id)
            out[m.dom].append(m.id)
        set_ = object.__setattr__
        set_(self, "identities", MappingProxyType(dict(self.identities)))
        set_(self, "comp", MappingProxyType(dict(self.comp)))
        set_(self, "_by_id", MappingProxyType(by_id))
        set_(self, "_hom", MappingProxyType({k: tuple(v) for k, v in hom.items()}))
        set_(self, "_into", MappingProxyType({k: tuple(v) for k, v in into.items()}))
        set_(self, "_out", MappingProxyType({k: tuple(v) for k, v in out.items()}))
        set_(self, "_order", MappingProxyType({m.id: i for i, m in enumerate(self.morphisms)}))
        set_(self, "_object_set", frozenset(self.objects))

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and dict(self.identities) == dict(other.identities)
            and dict(self.comp) == dict(other.comp)
        )

    def __hash__(self):
        return hash((self.objects, self.morphisms))

    def __repr__(self):
        return f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    # lookups -----------------------------------------------------------
    def has_object(self, a: str) -> bool:
        return a in self._object_set

    def has_morphism(self, f: str) -> bool:
        return f in self._by_id

    def morphism(self, f: str) -> Morphism:
        try:
            return self._by_id[f]
        except KeyError:
            raise UnknownMorphism(f"unknown morphism {f!r}") from None

    def dom(self, f: str) -> str:
        return self.morphism(f).dom

    def cod(self, f: str) -> str:
        return self.morphism(f).cod

    def identity(self, a: str) -> str:
        self.require_object(a)
        return self.identities[a]

    def require_object(self, a: str) -> None:
        if a not in self._object_set:
            raise UnknownObject(f"unknown object {a!r}")

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._hom.get((a, b), ())

    def into(self, x: str) -> tuple[str, ...]:
        """All morphisms with codomain ``x``, in declaration order."""
        return self._into.get(x, ())

    def out_of(self, x: str) -> tuple[str, ...]:
        return self._out.get(x, ())

    def index(self, f: str) -> int:
        return self._order[f]

    def is_identity(self, f: str) -> bool:
        m = self.morphism(f)
        return self.identities[m.dom] == f

    def compose(self, g: str, f: str) -> str:
        try:
            return self.comp[g, f]
        except KeyError:
            pass
        raise NotComposable(
            f"cannot compose {g!r} after {f!r}: cod({f})={self.cod(f)!r}, dom({g})={self.dom(g)!r}"
        )

    def compose_path(self, *fs: str) -> str:
        """``compose_path(h, g, f)`` is h∘g∘f."""
        result = fs[-1]
        for g in reversed(fs[:-1]):
            result = self.compose(g, result)
        return result

    def ids(self) -> list[str]:
        return [m.id for m in self.morphisms]


# ---------------------------------------------------------------------------
# validation


def category_violations(raw: RawCategory) -> list[Violation]:
    """Every violated law of ``raw``; empty when it describes a category.

    Duplicate and dangling ids are reported alone, since the composition laws
    are meaningless until every name resolves.
    """
    out: list[Violation] = []
    seen: set[str] = set()
    for a in raw.objects:
        if a in seen:
            out.append(Violation(DUPLICATE, (a,), "object declared twice"))
        seen.add(a)
    seen = set()
    for mid, _, _ in raw.morphisms:
        if mid in seen:
            out.append(Violation(DUPLICATE, (mid,), "morphism declared twice"))
        seen.add(mid)
    pairs: dict[tuple[str, str], str] = {}
    for g, f, gf in raw.compose:
        if (g, f) in pairs and pairs[g, f] != gf:
            out.append(Violation(DUPLICATE, (g, f), "composite declared twice"))
        pairs[g, f] = gf
    if out:
        return out

    objs = set(raw.objects)
    mors = {mid: (d, c) for mid, d, c in raw.morphisms}
    for mid, d, c in raw.morphisms:
        for end in (d, c):
            if end not in objs:
                out.append(Violation(DANGLING, (mid, end), "unknown object"))
    for a, i in raw.identities.items():
        if a not in objs:
            out.append(Violation(DANGLING, (a,), "identity for unknown object"))
        if i not in mors:
            out.append(Violation(DANGLING, (a, i), "identity names unknown morphism"))
    for a in raw.objects:
        if a not in raw.identities:
            out.append(Violation(DANGLING, (a,), "object has no identity"))
    for g, f, gf in raw.compose:
        for name in (g, f, gf):
            if name not in mors:
                out.append(Violation(DANGLING, (g, f, gf), f"unknown morphism {name!r}"))
    if out:
        return out

    dom = {m: dc[0] for m, dc in mors.items()}
    cod = {m: dc[1] for m, dc in mors.items()}
    ident = raw.identities
    for a, i in ident.items():
        if dom[i] != a or cod[i] != a:
            out.append(Violation(IDENTITY, (a, i), "identity is not an endomorphism of its object"))

    comp: dict[tuple[str, str], str] = {}
    for (g, f), gf in pairs.items():
        if cod[f] != dom[g]:
            out.append(Violation(DOMCOD, (g, f, gf), "composite given for a non-composable pair"))
            continue
        if dom[gf] != dom[f] or cod[gf] != cod[g]:
            out.append(Violation(DOMCOD, (g, f, gf), "composite has wrong domain or codomain"))
            continue
        comp[g, f] = gf

    into = defaultdict(list)
    out_of = defaultdict(list)
    order = [m for m, _, _ in raw.morphisms]
    for m in order:
        into[cod[m]].append(m)
        out_of[dom[m]].append(m)
    for f in order:
        for g in out_of[cod[f]]:
            if (g, f) not in pairs:
                out.append(Violation(MISSING, (g, f), "composable pair has no composite"))

    for f in order:
        left = comp.get((ident.get(cod[f]), f))
        if left is not None and left != f:
            out.append(Violation(IDENTITY, (ident[cod[f]], f, left), "id∘f != f"))
        right = comp.get((f, ident.get(dom[f])))
        if right is not None and right != f:
            out.append(Violation(IDENTITY, (f, ident[dom[f]], right), "f∘id != f"))

    for f in order:
        for g in out_of[cod[f]]:
            gf = comp.get((g, f))
            if gf is None:
                continue
            for h in out_of[cod[g]]:
                hg = comp.get((h, g))
                if hg is None:
                    continue
                a, b = comp.get((h, gf)), comp.get((hg, f))
                if a is not None and b is not None and a != b:
                    out.append(
                        Violation(ASSOCIATIVITY, (h, g, f), f"h∘(g∘f)={a} but (h∘g)∘f={b}")
                    )
    return out


def validate_category(raw: RawCategory) -> FinCategory:
    """Check every category law and return the validated category.

    Raises :class:`DuplicateId`, :class:`DanglingReference` or
    :class:`LawViolation`; the exception's ``violations`` lists every offence.
    """
    violations = category_violations(raw)
    if violations:
        laws = {v.law for v in violations}
        if DUPLICATE in laws:
            raise DuplicateId("duplicate ids", violations)
        if DANGLING in laws:
            raise DanglingReference("dangling references", violations)
        raise LawViolation("category laws violated", violations)
    return _build(
        raw.objects,
        [Morphism(*m) for m in raw.morphisms],
        raw.identities,
        {(g, f): gf for g, f, gf in raw.compose},
    )


def _build(objects, morphisms, identities, comp) -> FinCategory:
    return FinCategory(tuple(objects), tuple(morphisms), dict(identities), dict(comp))


def to_raw(cat: FinCategory) -> RawCategory:
    return RawCategory(
        objects=list(cat.objects),
        morphisms=[(m.id, m.dom, m.cod) for m in cat.morphisms],
        identities={a: cat.identities[a] for a in cat.objects},
        compose=[(g, f, gf) for (g, f), gf in cat.comp.items()],
    )


def compose(cat: FinCategory, g: str, f: str) -> str:
    """g∘f ("g after f"); raises :class:`NotComposable` unless cod(f) = dom(g)."""
    cat.morphism(g)
    cat.morphism(f)
    return cat.compose(g, f)


def hom(cat: FinCategory, a: str, b: str) -> tuple[str, ...]:
    cat.require_object(a)
    cat.require_object(b)
    return cat.hom(a, b)


def dual(cat: FinCategory) -> FinCategory:
    """The opposite category: same ids, dom/cod swapped, comp_op(g, f) = comp(f, g)."""
    return _build(
        cat.objects,
        [Morphism(m.id, m.cod, m.dom) for m in cat.morphisms],
        cat.identities,
        {(f, g): gf for (g, f), gf in cat.comp.items()},
    )


def from_function_table(
    objects: Mapping[str, Sequence],
    maps: Sequence[tuple[str, str, str, Mapping]],
) -> FinCategory:
    """Category of the given set maps, composition computed as functions.

    ``maps`` holds ``(id, dom, cod, table)`` with ``table`` a dict from
    elements of ``dom`` to elements of ``cod``.  The family must be closed
    under composition and contain the identities.
    """
    tables = {mid: (d, c, dict(t)) for mid, d, c, t in maps}
    lookup = {}
    for mid, (d, c, t) in tables.items():
        lookup[d, c, tuple(sorted(t.items(), key=repr))] = mid
    identities = {}
    for a, elems in objects.items():
        key = (a, a, tuple(sorted(((e, e) for e in elems), key=repr)))
        if key not in lookup:
            raise LawViolation("function family lacks an identity", [Violation(IDENTITY, (a,))])
        identities[a] = lookup[key]
    comp = {}
    for g, (gd, gc, gt) in tables.items():
        for f, (fd, fc, ft) in tables.items():
            if fc != gd:
                continue
            composite = {x: gt[ft[x]] for x in objects[fd]}
            key = (fd, gc, tuple(sorted(composite.items(), key=repr)))
            if key not in lookup:
                raise LawViolation(
                    "function family not closed", [Violation(MISSING, (g, f))]
                )
            comp[g, f] = lookup[key]
    raw = RawCategory(
        objects=list(objects),
        morphisms=[(mid, d, c) for mid, d, c, _ in maps],
        identities=identities,
        compose=[(g, f, gf) for (g, f), gf in comp.items()],
    )
    return validate_category(raw)


# ---------------------------------------------------------------------------
# functors and natural transformations


@dataclass(frozen=True, eq=False)
class Functor:
    source: FinCategory
    target: FinCategory
    objects: Mapping[str, str]
    morphisms: Mapping[str, str]

    def ob(self, a: str) -> str:
        return self.objects[a]

    def mor(self, f: str) -> str:
        return self.morphisms[f]

    def same_maps(self, other: "Functor") -> bool:
        return dict(self.objects) == dict(other.objects) and dict(self.morphisms) == dict(
            other.morphisms
        )


def identity_functor(cat: FinCategory) -> Functor:
    return Functor(cat, cat, {a: a for a in cat.objects}, {f: f for f in cat.ids()})


def compose_functors(g: Functor, f: Functor) -> Functor:
    """G∘F."""
    return Functor(
        f.source,
        g.target,
        {a: g.objects[f.objects[a]] for a in f.source.objects},
        {m: g.morphisms[f.morphisms[m]] for m in f.source.ids()},
    )


def functor_violations(F: Functor) -> list[Violation]:
    src, tgt = F.source, F.target
    out = []
    for a in src.objects:
        if a not in F.objects or not tgt.has_object(F.objects[a]):
            out.append(Violation(TOTALITY, (a,), "object map undefined or leaves the target"))
    for m in src.morphisms:
        if m.id not in F.morphisms or not tgt.has_morphism(F.morphisms[m.id]):
            out.append(Violation(TOTALITY, (m.id,), "morphism map undefined or leaves the target"))
    if out:
        return out
    for m in src.morphisms:
        img = tgt.morphism(F.morphisms[m.id])
        if img.dom != F.objects[m.dom] or img.cod != F.objects[m.cod]:
            out.append(Violation(DOMCOD, (m.id, img.id), "image has wrong domain or codomain"))
    for a in src.objects:
        if F.morphisms[src.identities[a]] != tgt.identities[F.objects[a]]:
            out.append(Violation(IDENTITY, (a,), "identity not preserved"))
    if out:
        return out
    for (g, f), gf in src.comp.items():
        lhs = F.morphisms[gf]
        rhs = tgt.compose(F.morphisms[g], F.morphisms[f])
        if lhs != rhs:
            out.append(Violation(COMPOSITION, (g, f), f"F({g}∘{f})={lhs} but F({g})∘F({f})={rhs}"))
    return out


def validate_functor(F: Functor) -> Functor:
    """Raise :class:`LawViolation` naming the first broken law; return ``F`` otherwise."""
    violations = functor_violations(F)
    if violations:
        raise LawViolation("not a functor", violations)
    return F


@dataclass(frozen=True, eq=False)
class NatTrans:
    source: Functor
    target: Functor
    components: Mapping[str, str]


def identity_nat_trans(F: Functor) -> NatTrans:
    return NatTrans(F, F, {a: F.target.identities[F.objects[a]] for a in F.source.objects})


def nat_trans_violations(psi: NatTrans) -> list[Violation]:
    F, G = psi.source, psi.target
    if F.source is not G.source and F.source != G.source:
        return [Violation(NATURALITY, (), "functors have different sources")]
    if F.target is not G.target and F.target != G.target:
        return [Violation(NATURALITY, (), "functors have different targets")]
    src, tgt = F.source, F.target
    out = []
    for a in src.objects:
        c = psi.components.get(a)
        if c is None or not tgt.has_morphism(c):
            out.append(Violation(TOTALITY, (a,), "missing component"))
        elif tgt.dom(c) != F.objects[a] or tgt.cod(c) != G.objects[a]:
            out.append(Violation(DOMCOD, (a, c), "component has wrong domain or codomain"))
    if out:
        return out
    for m in src.morphisms:
        lhs = tgt.compose(G.morphisms[m.id], psi.components[m.dom])
        rhs = tgt.compose(psi.components[m.cod], F.morphisms[m.id])
        if lhs != rhs:
            out.append(Violation(NATURALITY, (m.id,), f"G(f)∘ψ={lhs} but ψ∘F(f)={rhs}"))
    return out


def validate_nat_trans(psi: NatTrans) -> NatTrans:
    violations = nat_trans_violations(psi)
    if violations:
        raise LawViolation("not a natural transformation", violations)
    return psi


# ---------------------------------------------------------------------------
# subcategories


@dataclass(frozen=True)
class SubcategorySpec:
    objects: frozenset
    morphisms: frozenset

    def __init__(self, objects: Iterable[str], morphisms: Iterable[str]):
        object.__setattr__(self, "objects", frozenset(objects))
        object.__setattr__(self, "morphisms", frozenset(morphisms))


def full_subcategory(cat: FinCategory, objects: Iterable[str]) -> SubcategorySpec:
    objs = set(objects)
    for a in objs:
        cat.require_object(a)
    return SubcategorySpec(objs, [m.id for m in cat.morphisms if m.dom in objs and m.cod in objs])


def subcategory_violations(cat: FinCategory, spec: SubcategorySpec) -> list[Violation]:
    out = []
    for a in sorted(spec.objects):
        if not cat.has_object(a):
            out.append(Violation(DANGLING, (a,), "unknown object"))
    for f in sorted(spec.morphisms):
        if not cat.has_morphism(f):
            out.append(Violation(DANGLING, (f,), "unknown morphism"))
    if out:
        return out
    for a in cat.objects:
        if a in spec.objects and cat.identities[a] not in spec.morphisms:
            out.append(Violation("identities", (a, cat.identities[a]), "identity missing"))
    for m in cat.morphisms:
        if m.id in spec.morphisms and (m.dom not in spec.objects or m.cod not in spec.objects):
            out.append(Violation(DOMCOD, (m.id,), "endpoint outside the subcategory"))
    for (g, f), gf in cat.comp.items():
        if g in spec.morphisms and f in spec.morphisms and gf not in spec.morphisms:
            out.append(Violation(COMPOSITION, (g, f, gf), f"{g}∘{f}={gf} missing"))
    return out


def is_subcategory(cat: FinCategory, spec: SubcategorySpec) -> SubcategorySpec:
    """Raise :class:`NotClosed` unless ``spec`` is closed in ``cat``."""
    violations = subcategory_violations(cat, spec)
    if violations:
        if any(v.law == DANGLING for v in violations):
            raise DanglingReference("subcategory names unknown ids", violations)
        raise NotClosed("not a subcategory", violations)
    return spec


def restrict(cat: FinCategory, spec: SubcategorySpec) -> FinCategory:
    """The subcategory as a category in its own right, keeping ids and order."""
    is_subcategory(cat, spec)
    mors = [m for m in cat.morphisms if m.id in spec.morphisms]
    return _build(
        [a for a in cat.objects if a in spec.objects],
        mors,
        {a: cat.identities[a] for a in cat.objects if a in spec.objects},
        {
            (g, f): gf
            for (g, f), gf in cat.comp.items()
            if g in spec.morphisms and f in spec.morphisms
        },
    )


def inclusion_functor(cat: FinCategory, sub: FinCategory) -> Functor:
    return Functor(sub, cat, {a: a for a in sub.objects}, {f: f for f in sub.ids()})


# ---------------------------------------------------------------------------
# products


def tuple_id(parts: Sequence[str]) -> str:
    return "(" + ",".join(parts) + ")"


@dataclass(frozen=True, eq=False)
class Product:
    category: FinCategory
    factors: tuple[FinCategory, ...]
    projections: tuple[Functor, ...]
    object_parts: Mapping[str, tuple[str, ...]]
    morphism_parts: Mapping[str, tuple[str, ...]]

    def object_id(self, parts: Sequence[str]) -> str:
        return tuple_id(parts)

    def morphism_id(self, parts: Sequence[str]) -> str:
        return tuple_id(parts)


def product(cats: Sequence[FinCategory]) -> Product:
    """Product category with componentwise composition, plus its projections."""
    cats = tuple(cats)
    if not cats:
        raise EmptyFactorList("product needs at least one factor")
    obj_parts = {}
    for parts in itertools.product(*(c.objects for c in cats)):
        obj_parts[tuple_id(parts)] = parts
    mor_parts = {}
    morphisms = []
    for ms in itertools.product(*(c.morphisms for c in cats)):
        parts = tuple(m.id for m in ms)
        mid = tuple_id(parts)
        mor_parts[mid] = parts
        morphisms.append(
            Morphism(mid, tuple_id([m.dom for m in ms]), tuple_id([m.cod for m in ms]))
        )
    n_obj = 1
    n_mor = 1
    for c in cats:
        n_obj *= len(c.objects)
        n_mor *= len(c.morphisms)
    if len(obj_parts) != n_obj or len(mor_parts) != n_mor:
        raise DuplicateId("factor ids collide after tupling", [])
    identities = {
        a: tuple_id([c.identities[p] for c, p in zip(cats, parts)]) for a, parts in obj_parts.items()
    }
    comp = {}
    by_dom = defaultdict(list)
    for m in morphisms:
        by_dom[m.dom].append(m)
    for f in morphisms:
        for g in by_dom[f.cod]:
            gp, fp = mor_parts[g.id], mor_parts[f.id]
            comp[g.id, f.id] = tuple_id([c.compose(x, y) for c, x, y in zip(cats, gp, fp)])
    cat = _build(list(obj_parts), morphisms, identities, comp)
    projections = tuple(
        Functor(
            cat,
            c,
            {a: parts[i] for a, parts in obj_parts.items()},
            {f: parts[i] for f, parts in mor_parts.items()},
        )
        for i, c in enumerate(cats)
    )
    return Product(cat, cats, projections, obj_parts, mor_parts)


def section_functor(prod: Product, slot: int, fixed: Sequence[str]) -> Functor:
    """Insert the ``slot`` factor, holding the other coordinates at ``fixed`` objects.

    ``fixed`` lists one object per factor; its entry at ``slot`` is ignored.
    """
    factor = prod.factors[slot]

    def obj(a):
        parts = list(fixed)
        parts[slot] = a
        return tuple_id(parts)

    def mor(f):
        parts = [c.identities[x] for c, x in zip(prod.factors, fixed)]
        parts[slot] = f
        return tuple_id(parts)

    return Functor(
        factor,
        prod.category,
        {a: obj(a) for a in factor.objects},
        {f: mor(f) for f in factor.ids()},
    )
