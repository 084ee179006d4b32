"""Reading and writing workspace files.

A workspace holds named categories, subcategories, inverse systems,
expansions and movability witnesses.  The grammar lives in
``data/workspace.lark``; :func:`print_workspace` writes the canonical form, and
parsing a canonical file then printing it reproduces the same bytes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .errors import SystemInvalid, UnresolvedReference, WorkspaceSyntaxError
from .fincat import (
    FinCategory,
    RawCategory,
    SubcategorySpec,
    full_subcategory,
    is_subcategory,
    restrict,
    validate_category,
)
from .movability import MovabilityWitness, UniformMovabilityWitness
from .prosys import (
    DivisibilitySequence,
    Expansion,
    FiniteIndexSystem,
    PeriodicSequence,
    finite_system,
    preorder_from_cover,
    validate_expansion,
    validate_system,
)

FORMAT_VERSION = 1
FIXTURE_ENV = "MOVCAT_FIXTURES"


@dataclass
class SubcategoryEntry:
    category: str
    spec: SubcategorySpec
    full: bool = False


@dataclass
class SystemEntry:
    kind: str  # "finite" | "periodic" | "divisibility"
    category: str | None
    system: object


@dataclass
class ExpansionEntry:
    ambient: str
    sub: str
    system: str
    expansion: Expansion


@dataclass
class WitnessEntry:
    category: str
    witness: MovabilityWitness

    @property
    def uniform(self) -> bool:
        return isinstance(self.witness, UniformMovabilityWitness)


@dataclass
class Workspace:
    version: int = FORMAT_VERSION
    categories: dict[str, FinCategory] = field(default_factory=dict)
    subcategories: dict[str, SubcategoryEntry] = field(default_factory=dict)
    systems: dict[str, SystemEntry] = field(default_factory=dict)
    expansions: dict[str, ExpansionEntry] = field(default_factory=dict)
    witnesses: dict[str, WitnessEntry] = field(default_factory=dict)

    def category(self, name: str) -> FinCategory:
        if name not in self.categories:
            raise UnresolvedReference(name, "category")
        return self.categories[name]

    def subcategory(self, name: str) -> SubcategoryEntry:
        if name not in self.subcategories:
            raise UnresolvedReference(name, "subcategory")
        return self.subcategories[name]

    def system(self, name: str):
        if name not in self.systems:
            raise UnresolvedReference(name, "system")
        return self.systems[name].system

    def expansion(self, name: str) -> Expansion:
        if name not in self.expansions:
            raise UnresolvedReference(name, "expansion")
        return self.expansions[name].expansion

    def names(self) -> list[str]:
        out = []
        for table in (self.categories, self.subcategories, self.systems, self.expansions, self.witnesses):
            out += list(table)
        return out


# ---------------------------------------------------------------------------
# parsing


@lru_cache(maxsize=1)
def _parser() -> Lark:
    grammar = resources.files("movcat").joinpath("data/workspace.lark").read_text("utf-8")
    return Lark(grammar, parser="lalr", propagate_positions=True)


def grammar_text() -> str:
    return resources.files("movcat").joinpath("data/workspace.lark").read_text("utf-8")


def _words(node: Tree) -> list[str]:
    return [str(t) for t in node.children if isinstance(t, Token)]


def _line(node) -> int | None:
    meta = getattr(node, "meta", None)
    return getattr(meta, "line", None) if meta is not None and not meta.empty else None


def _need(name: str, known, context: str) -> str:
    if name not in known:
        raise UnresolvedReference(name, context)
    return name


def parse_workspace(text: str) -> Workspace:
    try:
        tree = _parser().parse(text)
    except UnexpectedInput as exc:
        raise WorkspaceSyntaxError(_describe(exc), exc.line, exc.column) from None
    header, *sections = tree.children
    version = int(header.children[0])
    if version != FORMAT_VERSION:
        raise WorkspaceSyntaxError(f"unsupported format {version}", _line(header), 1)
    ws = Workspace(version)
    names: set[str] = set()
    for node in sections:
        name = str(node.children[0])
        if name in names:
            raise WorkspaceSyntaxError(f"duplicate section name {name!r}", _line(node), 1)
        names.add(name)
    # resolve in dependency order, whatever the order in the file
    for kind, load in _LOADERS:
        for node in sections:
            if node.data == kind:
                load(ws, node)
    return ws


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedEOF):
        return "unexpected end of file"
    if isinstance(exc, UnexpectedToken):
        return f"unexpected {exc.token!r}"
    if isinstance(exc, UnexpectedCharacters):
        return f"unexpected character {exc.char!r}"
    return "syntax error"


def _load_category(ws: Workspace, node: Tree) -> None:
    name = str(node.children[0])
    objects: list[str] = []
    morphisms: list[tuple[str, str, str]] = []
    seen: set[str] = set()
    identities: dict[str, str] = {}
    compose: list[tuple[str, str, str]] = []
    items = [c for c in node.children[1:] if isinstance(c, Tree)]
    for item in items:
        if item.data == "cat_objects":
            for o in _words(item):
                if o in objects:
                    raise WorkspaceSyntaxError(f"duplicate object {o!r}", _line(item), 1)
                objects.append(o)
    ctx = f"category {name}"
    for item in items:
        w = _words(item)
        if item.data == "cat_morphism":
            mid, dom, cod = w
            if mid in seen:
                raise WorkspaceSyntaxError(f"duplicate morphism id {mid!r}", _line(item), 1)
            seen.add(mid)
            _need(dom, objects, ctx)
            _need(cod, objects, ctx)
            morphisms.append((mid, dom, cod))
    for item in items:
        w = _words(item)
        if item.data == "cat_identity":
            _need(w[0], objects, ctx)
            _need(w[1], seen, ctx)
            identities[w[0]] = w[1]
        elif item.data == "cat_compose":
            for x in w:
                _need(x, seen, ctx)
            compose.append(tuple(w))
    ws.categories[name] = validate_category(RawCategory(objects, morphisms, identities, compose))


def _load_subcategory(ws: Workspace, node: Tree) -> None:
    name, cname = str(node.children[0]), str(node.children[1])
    cat = ws.category(cname)
    objects, morphisms, full = [], [], False
    for item in node.children[2:]:
        if not isinstance(item, Tree):
            continue
        if item.data == "sub_objects":
            objects += _words(item)
        elif item.data == "sub_morphisms":
            morphisms += _words(item)
        else:
            full = True
    ctx = f"subcategory {name}"
    for o in objects:
        _need(o, cat.objects, ctx)
    for m in morphisms:
        if not cat.has_morphism(m):
            raise UnresolvedReference(m, ctx)
    if full:
        spec = full_subcategory(cat, objects)
        spec = SubcategorySpec(spec.objects, spec.morphisms | set(morphisms))
    else:
        spec = SubcategorySpec(objects, morphisms)
    is_subcategory(cat, spec)
    ws.subcategories[name] = SubcategoryEntry(cname, spec, full)


def _load_system(ws: Workspace, node: Tree) -> None:
    tokens = [c for c in node.children if isinstance(c, Token)]
    name, kind = str(tokens[0]), str(tokens[1])
    cname = str(tokens[2]) if len(tokens) > 2 else None
    items = [c for c in node.children if isinstance(c, Tree)]
    ctx = f"system {name}"
    if kind == "divisibility":
        if cname is not None:
            raise WorkspaceSyntaxError("divisibility systems take no category", _line(node), 1)
        prefix, cycle = (), ()
        for item in items:
            nums = tuple(int(x) for x in _words(item))
            if item.data == "sys_prefix":
                prefix = nums
            elif item.data == "sys_cycle":
                cycle = nums
            else:
                raise WorkspaceSyntaxError(f"{item.data[4:]} not allowed here", _line(item), 1)
        sys = DivisibilitySequence(prefix, cycle)
    else:
        if cname is None:
            raise WorkspaceSyntaxError(f"{kind} systems need `over CATEGORY`", _line(node), 1)
        cat = ws.category(cname)
        if kind == "finite":
            sys = _finite_from(cat, items, ctx)
        else:
            lists = {
                "sys_prefix_objects": (),
                "sys_prefix_bonds": (),
                "sys_cycle_objects": (),
                "sys_cycle_bonds": (),
            }
            for item in items:
                if item.data not in lists:
                    raise WorkspaceSyntaxError(f"{item.data[4:]} not allowed here", _line(item), 1)
                lists[item.data] = tuple(_words(item))
            for key in ("sys_prefix_objects", "sys_cycle_objects"):
                for o in lists[key]:
                    _need(o, cat.objects, ctx)
            for key in ("sys_prefix_bonds", "sys_cycle_bonds"):
                for b in lists[key]:
                    if not cat.has_morphism(b):
                        raise UnresolvedReference(b, ctx)
            sys = PeriodicSequence(cat, *lists.values())
    validate_system(sys)
    ws.systems[name] = SystemEntry(kind, cname, sys)


def _finite_from(cat: FinCategory, items, ctx: str) -> FiniteIndexSystem:
    index, les, objects, bonds = [], [], {}, {}
    for item in items:
        w = _words(item)
        if item.data == "sys_index":
            index += w
        elif item.data == "sys_le":
            les.append(tuple(w))
        elif item.data == "sys_object":
            objects[w[0]] = w[1]
        elif item.data == "sys_bond":
            bonds[w[0], w[1]] = w[2]
        else:
            raise WorkspaceSyntaxError(f"{item.data[4:]} not allowed here", _line(item), 1)
    for a, b in les:
        _need(a, index, ctx)
        _need(b, index, ctx)
    for lam, o in objects.items():
        _need(lam, index, ctx)
        _need(o, cat.objects, ctx)
    for (a, b), f in bonds.items():
        _need(a, index, ctx)
        _need(b, index, ctx)
        if not cat.has_morphism(f):
            raise UnresolvedReference(f, ctx)
    return finite_system(preorder_from_cover(index, les), cat, objects, bonds)


def _load_expansion(ws: Workspace, node: Tree) -> None:
    name = str(node.children[0])
    fields: dict[str, str] = {}
    legs: dict[str, str] = {}
    prefix_legs: tuple[str, ...] = ()
    cycle_legs: tuple[str, ...] = ()
    for item in node.children[1:]:
        if not isinstance(item, Tree):
            continue
        w = _words(item)
        if item.data == "exp_leg":
            legs[w[0]] = w[1]
        elif item.data == "exp_prefix_legs":
            prefix_legs = tuple(w)
        elif item.data == "exp_cycle_legs":
            cycle_legs = tuple(w)
        else:
            fields[item.data[4:]] = w[0]
    for key in ("ambient", "sub", "apex", "system"):
        if key not in fields:
            raise WorkspaceSyntaxError(f"expansion {name} lacks `{key}`", _line(node), 1)
    T = ws.category(fields["ambient"])
    sub = ws.subcategory(fields["sub"])
    if sub.category != fields["ambient"]:
        raise UnresolvedReference(fields["sub"], f"subcategory of {fields['ambient']}")
    entry = ws.systems.get(fields["system"])
    if entry is None:
        raise UnresolvedReference(fields["system"], "system")
    if entry.category != fields["ambient"]:
        raise SystemInvalid(f"system {fields['system']} is not over {fields['ambient']}")
    ctx = f"expansion {name}"
    _need(fields["apex"], T.objects, ctx)
    for leg in list(legs.values()) + list(prefix_legs) + list(cycle_legs):
        if not T.has_morphism(leg):
            raise UnresolvedReference(leg, ctx)
    sys = entry.system
    used = sys.morphisms_used()
    if not used <= sub.spec.morphisms:
        bad = sorted(used - sub.spec.morphisms)
        raise SystemInvalid(f"bonds outside the subcategory: {', '.join(bad)}")
    rebased = sys.with_ambient(restrict(T, sub.spec))
    if isinstance(sys, FiniteIndexSystem):
        exp = Expansion(T, sub.spec, fields["apex"], rebased, legs=legs)
    else:
        exp = Expansion(
            T, sub.spec, fields["apex"], rebased, prefix_legs=prefix_legs, cycle_legs=cycle_legs
        )
    validate_expansion(exp)
    ws.expansions[name] = ExpansionEntry(fields["ambient"], fields["sub"], fields["system"], exp)


def _load_witness(ws: Workspace, node: Tree) -> None:
    name, cname = str(node.children[0]), str(node.children[1])
    cat = ws.category(cname)
    fields: dict[str, str] = {}
    factors: dict[str, str] = {}
    uniform = False
    for item in node.children[2:]:
        if not isinstance(item, Tree):
            continue
        w = _words(item)
        if item.data == "wit_factor":
            factors[w[0]] = w[1]
        elif item.data == "wit_uniform":
            uniform = w[0] == "yes"
        else:
            fields[item.data[4:]] = w[0]
    for key in ("target", "mover", "morphism"):
        if key not in fields:
            raise WorkspaceSyntaxError(f"witness {name} lacks `{key}`", _line(node), 1)
    ctx = f"witness {name}"
    _need(fields["target"], cat.objects, ctx)
    _need(fields["mover"], cat.objects, ctx)
    for m in [fields["morphism"], *factors, *factors.values()]:
        if not cat.has_morphism(m):
            raise UnresolvedReference(m, ctx)
    kind = UniformMovabilityWitness if uniform else MovabilityWitness
    ws.witnesses[name] = WitnessEntry(
        cname, kind(fields["target"], fields["mover"], fields["morphism"], factors)
    )


_LOADERS = (
    ("category", _load_category),
    ("subcategory", _load_subcategory),
    ("system", _load_system),
    ("expansion", _load_expansion),
    ("witness", _load_witness),
)


# ---------------------------------------------------------------------------
# printing


def print_category(name: str, cat: FinCategory) -> str:
    lines = [f"category {name}", "  objects " + " ".join(cat.objects)]
    lines += [f"  morphism {m.id} {m.dom} {m.cod}" for m in cat.morphisms]
    lines += [f"  identity {o} {cat.identities[o]}" for o in cat.objects]
    for g in cat.morphisms:
        for f in cat.into(g.dom):
            lines.append(f"  compose {g.id} {f} {cat.compose(g.id, f)}")
    lines.append("end")
    return "\n".join(lines)


def _print_subcategory(name: str, entry: SubcategoryEntry, cat: FinCategory) -> str:
    objects = [o for o in cat.objects if o in entry.spec.objects]
    lines = [f"subcategory {name} of {entry.category}", "  objects " + " ".join(objects)]
    if entry.full:
        lines.append("  full")
    else:
        morphisms = [m.id for m in cat.morphisms if m.id in entry.spec.morphisms]
        lines.append("  morphisms " + " ".join(morphisms))
    lines.append("end")
    return "\n".join(lines)


def _join(key: str, items) -> str:
    return "  " + " ".join([key, *map(str, items)])


def _print_system(name: str, entry: SystemEntry) -> str:
    sys = entry.system
    head = f"system {name} {entry.kind}"
    if entry.category is not None:
        head += f" over {entry.category}"
    lines = [head]
    if isinstance(sys, DivisibilitySequence):
        lines += [_join("prefix", sys.prefix), _join("cycle", sys.cycle)]
    elif isinstance(sys, PeriodicSequence):
        lines += [
            _join("prefix-objects", sys.prefix_objects),
            _join("prefix-bonds", sys.prefix_bonds),
            _join("cycle-objects", sys.cycle_objects),
            _join("cycle-bonds", sys.cycle_bonds),
        ]
    else:
        elems = sys.index.elements
        lines.append(_join("index", elems))
        pairs = [(a, b) for a in elems for b in sys.index.above(a) if a != b]
        lines += [f"  le {a} {b}" for a, b in pairs]
        lines += [f"  object {lam} {sys.objects[lam]}" for lam in elems]
        lines += [f"  bond {a} {b} {sys.bonds[a, b]}" for a, b in pairs]
    lines.append("end")
    return "\n".join(line.rstrip() for line in lines)


def _print_expansion(name: str, entry: ExpansionEntry) -> str:
    exp = entry.expansion
    lines = [
        f"expansion {name}",
        f"  ambient {entry.ambient}",
        f"  sub {entry.sub}",
        f"  apex {exp.apex}",
        f"  system {entry.system}",
    ]
    if exp.is_sequence:
        lines += [_join("prefix-legs", exp.prefix_legs), _join("cycle-legs", exp.cycle_legs)]
    else:
        lines += [f"  leg {lam} {exp.legs[lam]}" for lam in exp.system.levels()]
    lines.append("end")
    return "\n".join(line.rstrip() for line in lines)


def print_witness(name: str, category: str, w: MovabilityWitness, cat: FinCategory | None = None) -> str:
    lines = [
        f"witness {name} in {category}",
        f"  target {w.target}",
        f"  mover {w.mover}",
        f"  morphism {w.morphism}",
    ]
    keys = list(w.factors)
    if cat is not None:
        keys = [p for p in cat.into(w.target) if p in w.factors]
    lines += [f"  factor {p} {w.factors[p]}" for p in keys]
    lines.append(f"  uniform {'yes' if isinstance(w, UniformMovabilityWitness) else 'no'}")
    lines.append("end")
    return "\n".join(lines)


def print_workspace(ws: Workspace) -> str:
    blocks = [f"format {ws.version}"]
    blocks += [print_category(n, c) for n, c in ws.categories.items()]
    blocks += [
        _print_subcategory(n, e, ws.categories[e.category]) for n, e in ws.subcategories.items()
    ]
    blocks += [_print_system(n, e) for n, e in ws.systems.items()]
    blocks += [_print_expansion(n, e) for n, e in ws.expansions.items()]
    blocks += [
        print_witness(n, e.category, e.witness, ws.categories[e.category])
        for n, e in ws.witnesses.items()
    ]
    return "\n\n".join(blocks) + "\n"


# ---------------------------------------------------------------------------
# files


def fixture_path() -> Path:
    """The shipped fixture workspace, or ``$MOVCAT_FIXTURES/fixtures.ws`` when set."""
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override) / "fixtures.ws"
    return Path(str(resources.files("movcat").joinpath("data/fixtures.ws")))


def load_workspace(path: str | os.PathLike) -> Workspace:
    text = Path(path).read_text("utf-8")
    return parse_workspace(text)
