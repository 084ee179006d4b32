"""Inverse systems with decidable presentations.

Three presentations are supported:

* :class:`FiniteIndexSystem` - a finite directed preorder of indices with an
  explicit bond table in a finite category;
* :class:`PeriodicSequence` - an inverse sequence in a finite category whose
  objects and step bonds repeat with a fixed cycle after a finite prefix;
* :class:`DivisibilitySequence` - an inverse sequence in the one-object model
  where every hom-set is the integers and composition is multiplication.

Sequence levels are the integers ``n >= 1`` and the step bond at ``n`` goes
``X_{n+1} -> X_n``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import (
    FunctorialityViolation,
    NotComparable,
    NotDirected,
    PhaseMismatch,
    SystemInvalid,
    Violation,
)
from ..fincat import FinCategory


@dataclass(frozen=True)
class DirectedPreorder:
    elements: tuple[str, ...]
    relation: frozenset  # pairs (a, b) meaning a <= b

    def __init__(self, elements: Sequence[str], relation):
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "relation", frozenset(tuple(p) for p in relation))

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.relation

    def above(self, a: str) -> list[str]:
        return [b for b in self.elements if (a, b) in self.relation]

    def upper_bounds(self, *xs: str) -> list[str]:
        return [b for b in self.elements if all((a, b) in self.relation for a in xs)]

    def tops(self) -> list[str]:
        """Elements above everything (non-empty for a finite directed preorder)."""
        return self.upper_bounds(*self.elements)


def preorder_from_cover(elements: Sequence[str], pairs) -> DirectedPreorder:
    """Reflexive-transitive closure of ``pairs``."""
    rel = {(a, a) for a in elements} | {tuple(p) for p in pairs}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return DirectedPreorder(elements, rel)


def preorder_violations(ix: DirectedPreorder) -> list[Violation]:
    out = []
    elems = set(ix.elements)
    if len(elems) != len(ix.elements):
        out.append(Violation("duplicate id", tuple(ix.elements), "index listed twice"))
    if not ix.elements:
        out.append(Violation("directed", (), "empty index set"))
    for a, b in sorted(ix.relation):
        if a not in elems or b not in elems:
            out.append(Violation("dangling reference", (a, b), "unknown index"))
    if out:
        return out
    for a in ix.elements:
        if not ix.leq(a, a):
            out.append(Violation("reflexive", (a,)))
    for a in ix.elements:
        for b in ix.above(a):
            for c in ix.above(b):
                if not ix.leq(a, c):
                    out.append(Violation("transitive", (a, b, c)))
    for i, a in enumerate(ix.elements):
        for b in ix.elements[i + 1 :]:
            if not ix.upper_bounds(a, b):
                out.append(Violation("directed", (a, b), "no upper bound"))
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteIndexSystem:
    index: DirectedPreorder
    ambient: FinCategory
    objects: Mapping[str, str]
    bonds: Mapping[tuple[str, str], str]  # (λ, λ') with λ <= λ' -> X_λ' -> X_λ

    def obj(self, lam: str) -> str:
        return self.objects[lam]

    def compose(self, g, f):
        return self.ambient.compose(g, f)

    def levels(self) -> list[str]:
        return list(self.index.elements)

    def above(self, lam: str) -> list[str]:
        return self.index.above(lam)

    def leq(self, a, b) -> bool:
        return self.index.leq(a, b)

    def hom(self, src_level, dst_level):
        return self.ambient.hom(self.obj(src_level), self.obj(dst_level))

    def with_ambient(self, cat: FinCategory) -> "FiniteIndexSystem":
        return dataclasses.replace(self, ambient=cat)

    def morphisms_used(self) -> set[str]:
        return set(self.bonds.values())


def finite_system(
    index: DirectedPreorder,
    ambient: FinCategory,
    objects: Mapping[str, str],
    bonds: Mapping[tuple[str, str], str],
) -> FiniteIndexSystem:
    """Build a finite system, filling identity bonds ``p_λλ`` that were left out."""
    table = dict(bonds)
    for lam in index.elements:
        if (lam, lam) not in table and lam in objects and ambient.has_object(objects[lam]):
            table[lam, lam] = ambient.identities[objects[lam]]
    return FiniteIndexSystem(index, ambient, dict(objects), table)


class InverseSequence:
    """Shared behaviour of the two sequence presentations."""

    prefix_len: int
    cycle_len: int

    def obj(self, n: int):
        raise NotImplementedError

    def step(self, n: int):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, n: int):
        raise NotImplementedError

    def hom(self, src_level: int, dst_level: int):
        raise NotImplementedError

    def phase_key(self, n: int) -> tuple[int, int]:
        k, c = self.prefix_len, self.cycle_len
        if n <= k:
            return (0, n)
        return (1, (n - k - 1) % c)

    def levels(self) -> list[int]:
        """Representative levels: the prefix and one full cycle.

        Every level past these repeats one of them (same object, same future).
        """
        return list(range(1, self.prefix_len + self.cycle_len + 1))

    def leq(self, a: int, b: int) -> bool:
        return a <= b

    def composite(self, n: int, m: int):
        """p_nm = step(n) ∘ step(n+1) ∘ ... ∘ step(m-1)."""
        if m < n:
            raise NotComparable(f"{n} is not <= {m}")
        cache = self._composite_cache()
        if (n, m) in cache:
            return cache[n, m]
        acc = self.identity(n)
        for i in range(n, m):
            acc = self.compose(acc, self.step(i))
            cache.setdefault((n, i + 1), acc)
        cache[n, m] = acc
        return acc

    def _composite_cache(self) -> dict:
        try:
            return self.__dict__["_cache"]
        except KeyError:
            cache: dict = {}
            object.__setattr__(self, "_cache", cache)
            return cache

    def state_walk(self, lam: int, start: int) -> tuple[list[int], int]:
        """Levels ``start, start+1, ...`` up to the first repeat of ``(phase(ν), p_λν)``.

        Returns ``(levels, back)``: the level ``end = levels[-1] + 1`` has the
        same state as ``back``, so any property that depends only on that state
        is exhausted by ``levels``.  Needs finitely many values of ``p_λν``.
        """
        seen: dict = {}
        levels = []
        nu = start
        acc = self.composite(lam, start)
        while True:
            state = (self.phase_key(nu), acc)
            if state in seen:
                return levels, seen[state]
            seen[state] = nu
            levels.append(nu)
            acc = self.compose(acc, self.step(nu))
            nu += 1


def reduce_level(n: int, end: int, back: int) -> int:
    """Map a level onto ``[.., end)`` using a repeat of state ``end ~ back``."""
    if n < end:
        return n
    period = end - back
    return back + (n - back) % period


@dataclass(frozen=True, eq=False)
class PeriodicSequence(InverseSequence):
    ambient: FinCategory
    prefix_objects: tuple[str, ...]
    prefix_bonds: tuple[str, ...]
    cycle_objects: tuple[str, ...]
    cycle_bonds: tuple[str, ...]

    def __post_init__(self):
        for name in ("prefix_objects", "prefix_bonds", "cycle_objects", "cycle_bonds"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def prefix_len(self) -> int:
        return len(self.prefix_objects)

    @property
    def cycle_len(self) -> int:
        return len(self.cycle_objects)

    def obj(self, n: int) -> str:
        k = self.prefix_len
        if n <= k:
            return self.prefix_objects[n - 1]
        return self.cycle_objects[(n - k - 1) % self.cycle_len]

    def step(self, n: int) -> str:
        k = self.prefix_len
        if n <= k:
            return self.prefix_bonds[n - 1]
        return self.cycle_bonds[(n - k - 1) % self.cycle_len]

    def compose(self, g: str, f: str) -> str:
        return self.ambient.compose(g, f)

    def identity(self, n: int) -> str:
        return self.ambient.identities[self.obj(n)]

    def hom(self, src_level: int, dst_level: int):
        return self.ambient.hom(self.obj(src_level), self.obj(dst_level))

    def with_ambient(self, cat: FinCategory) -> "PeriodicSequence":
        return PeriodicSequence(
            cat, self.prefix_objects, self.prefix_bonds, self.cycle_objects, self.cycle_bonds
        )

    def morphisms_used(self) -> set[str]:
        return set(self.prefix_bonds) | set(self.cycle_bonds)


@dataclass(frozen=True, eq=False)
class DivisibilitySequence(InverseSequence):
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))

    @property
    def prefix_len(self) -> int:
        return len(self.prefix)

    @property
    def cycle_len(self) -> int:
        return len(self.cycle)

    def multiplier(self, n: int) -> int:
        k = self.prefix_len
        if n <= k:
            return self.prefix[n - 1]
        return self.cycle[(n - k - 1) % self.cycle_len]

    def obj(self, n: int) -> str:
        return "Z"

    def step(self, n: int) -> int:
        return self.multiplier(n)

    def compose(self, g: int, f: int) -> int:
        return g * f

    def identity(self, n: int) -> int:
        return 1


# ---------------------------------------------------------------------------
# validation


def system_violations(sys) -> list[Violation]:
    if isinstance(sys, FiniteIndexSystem):
        return _finite_violations(sys)
    if isinstance(sys, PeriodicSequence):
        return _periodic_violations(sys)
    if isinstance(sys, DivisibilitySequence):
        return _divisibility_violations(sys)
    raise TypeError(f"not an inverse system: {type(sys).__name__}")


def _finite_violations(sys: FiniteIndexSystem) -> list[Violation]:
    out = preorder_violations(sys.index)
    if out:
        return out
    cat = sys.ambient
    for lam in sys.index.elements:
        x = sys.objects.get(lam)
        if x is None or not cat.has_object(x):
            out.append(Violation("typing", (lam,), "no object assigned"))
    if out:
        return out
    for lam in sys.index.elements:
        for mu in sys.index.above(lam):
            b = sys.bonds.get((lam, mu))
            if b is None or not cat.has_morphism(b):
                out.append(Violation("typing", (lam, mu), "bond missing"))
            elif cat.dom(b) != sys.obj(mu) or cat.cod(b) != sys.obj(lam):
                out.append(Violation("typing", (lam, mu, b), "bond has wrong dom/cod"))
    for pair in sys.bonds:
        if not sys.index.leq(*pair):
            out.append(Violation("typing", pair, "bond between incomparable indices"))
    if out:
        return out
    for lam in sys.index.elements:
        if sys.bonds[lam, lam] != cat.identities[sys.obj(lam)]:
            out.append(Violation("functoriality", (lam, lam, lam), "p_λλ is not the identity"))
    for a in sys.index.elements:
        for b in sys.index.above(a):
            for c in sys.index.above(b):
                lhs = cat.compose(sys.bonds[a, b], sys.bonds[b, c])
                if lhs != sys.bonds[a, c]:
                    out.append(
                        Violation("functoriality", (a, b, c), f"p_ab∘p_bc={lhs} != p_ac")
                    )
    return out


def _periodic_violations(sys: PeriodicSequence) -> list[Violation]:
    out = []
    cat = sys.ambient
    if sys.cycle_len < 1:
        return [Violation("phase", (), "cycle must be non-empty")]
    if len(sys.prefix_bonds) != sys.prefix_len or len(sys.cycle_bonds) != sys.cycle_len:
        return [Violation("phase", (), "one step bond per prefix and cycle object required")]
    for name in sys.prefix_objects + sys.cycle_objects:
        if not cat.has_object(name):
            out.append(Violation("typing", (name,), "unknown object"))
    for name in sys.prefix_bonds + sys.cycle_bonds:
        if not cat.has_morphism(name):
            out.append(Violation("typing", (name,), "unknown morphism"))
    if out:
        return out
    for n in range(1, sys.prefix_len + sys.cycle_len + 1):
        b = sys.step(n)
        if cat.dom(b) != sys.obj(n + 1) or cat.cod(b) != sys.obj(n):
            out.append(
                Violation("phase", (n, b), f"step bond must go {sys.obj(n + 1)} -> {sys.obj(n)}")
            )
    return out


def _divisibility_violations(sys: DivisibilitySequence) -> list[Violation]:
    out = []
    if sys.cycle_len < 1:
        out.append(Violation("phase", (), "cycle must be non-empty"))
    for i, d in enumerate(sys.prefix + sys.cycle):
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            out.append(Violation("typing", (i, d), "multipliers must be positive integers"))
    return out


def validate_system(sys):
    violations = system_violations(sys)
    if violations:
        laws = {v.law for v in violations}
        if "directed" in laws or "reflexive" in laws or "transitive" in laws:
            raise NotDirected("index set is not a directed preorder", violations)
        if "functoriality" in laws:
            raise FunctorialityViolation("bonds are not functorial", violations)
        if "phase" in laws:
            raise PhaseMismatch("step bonds do not chain", violations)
        raise SystemInvalid("invalid system", violations)
    return sys


def composite_bond(sys, lam, m):
    """p_{λ m} for ``λ <= m``."""
    if isinstance(sys, FiniteIndexSystem):
        if not sys.index.leq(lam, m):
            raise NotComparable(f"{lam!r} is not <= {m!r}")
        return sys.bonds[lam, m]
    if lam < 1:
        raise NotComparable(f"levels start at 1, got {lam}")
    return sys.composite(lam, m)


# ---------------------------------------------------------------------------
# threads


@dataclass(frozen=True)
class FiniteThread:
    """A thread ``ν -> r^ν: X_m -> X_ν`` over a finite index set."""

    lam: str
    m: str
    values: Mapping[str, str]

    def at(self, nu):
        return self.values[nu]


@dataclass(frozen=True)
class SequenceThread:
    """An eventually periodic thread over a sequence.

    ``values`` holds levels ``1 .. base + period - 1``; higher levels repeat
    with the given period from ``base`` on.
    """

    lam: int
    m: int
    values: Mapping[int, object]
    base: int
    period: int

    def at(self, n: int):
        if n < self.base + self.period:
            return self.values[n]
        return self.values[self.base + (n - self.base) % self.period]

    def horizon(self) -> int:
        return self.base + 2 * self.period


def thread_violations(sys, thread) -> list[Violation]:
    """Compatibility ``p_νν'∘r^ν' = r^ν`` and ``r^λ = p_{λ m}``.

    Sequence threads are checked on every level up to two full periods past
    their base, which covers every residue class of an eventually periodic
    thread whose base lies past the prefix.
    """
    out = []
    if isinstance(sys, FiniteIndexSystem):
        cat = sys.ambient
        src = sys.obj(thread.m)
        for nu in sys.index.elements:
            v = thread.values.get(nu)
            if v is None or not cat.has_morphism(v):
                out.append(Violation("typing", (nu,), "missing thread value"))
            elif cat.dom(v) != src or cat.cod(v) != sys.obj(nu):
                out.append(Violation("typing", (nu, v), "thread value has wrong dom/cod"))
        if out:
            return out
        for a in sys.index.elements:
            for b in sys.index.above(a):
                if cat.compose(sys.bonds[a, b], thread.values[b]) != thread.values[a]:
                    out.append(Violation("compatibility", (a, b), "p_ab∘r^b != r^a"))
        if thread.values[thread.lam] != sys.bonds[thread.lam, thread.m]:
            out.append(Violation("base", (thread.lam, thread.m), "r^λ != p_λm"))
        return out

    k, c = sys.prefix_len, sys.cycle_len
    if thread.base <= k or thread.period < 1 or thread.period % c:
        return [Violation("presentation", (thread.base, thread.period), "base must lie past the prefix and the period must be a multiple of the cycle")]
    top = max(thread.horizon(), thread.lam, thread.m) + 1
    if isinstance(sys, PeriodicSequence):
        cat = sys.ambient
        src = sys.obj(thread.m)
        for n in range(1, top + 1):
            v = thread.at(n)
            if not cat.has_morphism(v) or cat.dom(v) != src or cat.cod(v) != sys.obj(n):
                out.append(Violation("typing", (n, v), "thread value has wrong dom/cod"))
        if out:
            return out
    for n in range(1, top):
        if sys.compose(sys.step(n), thread.at(n + 1)) != thread.at(n):
            out.append(Violation("compatibility", (n, n + 1), "step∘r^{n+1} != r^n"))
    if thread.at(thread.lam) != sys.composite(thread.lam, thread.m):
        out.append(Violation("base", (thread.lam, thread.m), "r^λ != p_λm"))
    return out


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True, eq=False)
class Expansion:
    """Legs ``p_λ: X -> X_λ`` from an object of ``ambient`` into a system in ``sub``.

    ``system`` lives over the subcategory realised as a category (same ids as
    ``ambient``).  Finite systems carry ``legs``; sequences carry
    ``prefix_legs`` and ``cycle_legs`` with the same phase layout as the
    sequence's objects.
    """

    ambient: FinCategory
    sub: "object"
    apex: str
    system: object
    legs: Mapping[str, str] | None = None
    prefix_legs: tuple[str, ...] = ()
    cycle_legs: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix_legs", tuple(self.prefix_legs))
        object.__setattr__(self, "cycle_legs", tuple(self.cycle_legs))

    @property
    def is_sequence(self) -> bool:
        return isinstance(self.system, InverseSequence)

    def leg(self, lam):
        if not self.is_sequence:
            return self.legs[lam]
        k = len(self.prefix_legs)
        if lam <= k:
            return self.prefix_legs[lam - 1]
        return self.cycle_legs[(lam - k - 1) % len(self.cycle_legs)]

    def levels(self) -> list:
        return self.system.levels()

    def levels_from(self, lower) -> list:
        """Levels ``>= lower`` that exhaust every (object, leg) state."""
        sys = self.system
        if not self.is_sequence:
            return sys.above(lower)
        hi = max(lower, sys.prefix_len + 1) + sys.cycle_len
        return list(range(lower, hi))

    def bond(self, lam, mu):
        return composite_bond(self.system, lam, mu)

    def upward(self, lam) -> list:
        """Levels ``>= λ`` exhausting every value of ``(phase, p_λν)``."""
        if not self.is_sequence:
            return self.system.above(lam)
        levels, _ = self.system.state_walk(lam, lam)
        return levels


def expansion_violations(exp: Expansion) -> list[Violation]:
    from ..fincat import subcategory_violations

    T = exp.ambient
    out = list(subcategory_violations(T, exp.sub))
    if out:
        return out
    if not T.has_object(exp.apex):
        return [Violation("typing", (exp.apex,), "apex is not an object of the ambient category")]
    sys = exp.system
    out += system_violations(sys)
    if out:
        return out
    sub_cat = sys.ambient
    for m in sub_cat.morphisms:
        if not T.has_morphism(m.id) or T.morphism(m.id) != m:
            out.append(Violation("embedding", (m.id,), "system category disagrees with ambient"))
    if out:
        return out
    for (g, f), gf in sub_cat.comp.items():
        if T.compose(g, f) != gf:
            out.append(Violation("embedding", (g, f), "composition disagrees with ambient"))
    levels = sys.levels()
    for lam in levels:
        if sys.obj(lam) not in exp.sub.objects:
            out.append(Violation("subcategory", (lam, sys.obj(lam)), "system object outside P"))
    for b in sorted(sys.morphisms_used()):
        if b not in exp.sub.morphisms:
            out.append(Violation("subcategory", (b,), "bond outside P"))
    if out:
        return out
    if exp.is_sequence:
        if len(exp.prefix_legs) != sys.prefix_len or len(exp.cycle_legs) != sys.cycle_len:
            return [Violation("legs", (), "leg layout must match the sequence's phases")]
        check = range(1, sys.prefix_len + sys.cycle_len + 1)
    else:
        check = levels
        if set(exp.legs) != set(levels):
            return [Violation("legs", (), "one leg per index required")]
    for lam in check:
        p = exp.leg(lam)
        if not T.has_morphism(p) or T.dom(p) != exp.apex or T.cod(p) != sys.obj(lam):
            out.append(Violation("legs", (lam, p), f"leg must go {exp.apex} -> {sys.obj(lam)}"))
    if out:
        return out
    if exp.is_sequence:
        for n in check:
            if T.compose(sys.step(n), exp.leg(n + 1)) != exp.leg(n):
                out.append(Violation("legs", (n, n + 1), "step∘p_{n+1} != p_n"))
    else:
        for a in levels:
            for b in sys.above(a):
                if T.compose(sys.bonds[a, b], exp.legs[b]) != exp.legs[a]:
                    out.append(Violation("legs", (a, b), "p_ab∘p_b != p_a"))
    return out


def validate_expansion(exp: Expansion) -> Expansion:
    violations = expansion_violations(exp)
    if violations:
        raise SystemInvalid("invalid expansion", violations)
    return exp
