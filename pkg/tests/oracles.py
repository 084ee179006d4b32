"""Brute-force reference implementations used to check the library.

Nothing here imports the deciders or validators under test.  The oracles read
plain tables (object list, ``id -> (dom, cod)``, ``(g, f) -> g∘f``) and
enumerate.
"""

from __future__ import annotations

import itertools


# ---------------------------------------------------------------------------
# category laws


def law_names(objects, morphisms, identities, compose) -> set[str]:
    """Names of the laws broken by a raw table.

    ``morphisms`` is a list of ``(id, dom, cod)``; ``compose`` a list of
    ``(g, f, g∘f)``.  Composites with the wrong ends are dropped before the
    identity and associativity checks, as in any sensible reading of the laws.
    """
    ends = {m: (d, c) for m, d, c in morphisms}
    broken = set()
    table = {}
    for g, f, gf in compose:
        if ends[f][1] != ends[g][0] or ends[gf] != (ends[f][0], ends[g][1]):
            broken.add("dom/cod")
            continue
        table[g, f] = gf
    given = {(g, f) for g, f, _ in compose}
    for g in ends:
        for f in ends:
            if ends[f][1] == ends[g][0] and (g, f) not in given:
                broken.add("missing composite")
    for a, i in identities.items():
        if ends[i] != (a, a):
            broken.add("identity")
    for f, (d, c) in ends.items():
        if table.get((identities[c], f), f) != f or table.get((f, identities[d]), f) != f:
            broken.add("identity")
    for h, g, f in itertools.product(ends, repeat=3):
        if (g, f) in table and (h, g) in table:
            left = table.get((h, table[g, f]))
            right = table.get((table[h, g], f))
            if left is not None and right is not None and left != right:
                broken.add("associativity")
    return broken


def compose_maps(g: dict, f: dict) -> dict:
    """Composite of two set maps given as dicts."""
    return {x: g[y] for x, y in f.items()}


def function_table(maps: dict[str, tuple[str, str, dict]]) -> dict[tuple[str, str], str]:
    """The composition table of a family of set maps, found by matching graphs."""
    by_graph = {(d, c, tuple(sorted(t.items()))): name for name, (d, c, t) in maps.items()}
    out = {}
    for g, (gd, gc, gt) in maps.items():
        for f, (fd, fc, ft) in maps.items():
            if fc == gd:
                out[g, f] = by_graph[fd, gc, tuple(sorted(compose_maps(gt, ft).items()))]
    return out


# ---------------------------------------------------------------------------
# movability by enumeration


class Table:
    """Read-only view of a category as bare tables."""

    def __init__(self, objects, ends: dict[str, tuple[str, str]], comp: dict, ident: dict):
        self.objects = list(objects)
        self.ends = dict(ends)
        self.comp = dict(comp)
        self.ident = dict(ident)

    @classmethod
    def of(cls, cat) -> "Table":
        ends = {m.id: (m.dom, m.cod) for m in cat.morphisms}
        return cls(cat.objects, ends, cat.comp, cat.identities)

    def hom(self, a, b):
        return [m for m, e in self.ends.items() if e == (a, b)]

    def into(self, x):
        return [m for m, e in self.ends.items() if e[1] == x]


def movability_tables(t: Table, x: str, uniform: bool):
    """Yield every ``(M, m, u)`` satisfying condition 1, and condition 2 when ``uniform``.

    Every assignment of a morphism ``M -> dom p`` to every ``p`` is produced
    and tested; no pruning beyond the per-variable hom-set.
    """
    into = t.into(x)
    triples = [
        (p, q, r)
        for p in into
        for q in into
        for r in t.hom(t.ends[q][0], t.ends[p][0])
        if t.comp[p, r] == q
    ]
    for mover in t.objects:
        for m in t.hom(mover, x):
            choices = [t.hom(mover, t.ends[p][0]) for p in into]
            for values in itertools.product(*choices):
                u = dict(zip(into, values))
                if any(t.comp[p, u[p]] != m for p in into):
                    continue
                if uniform and any(u[p] != t.comp[r, u[q]] for p, q, r in triples):
                    continue
                yield mover, m, u


def movable_by_enumeration(cat, x: str, uniform: bool) -> bool:
    return next(movability_tables(Table.of(cat), x, uniform), None) is not None


def assignment_count(cat, x: str) -> int:
    """Number of ``(M, m, u)`` assignments the enumeration ranges over."""
    t = Table.of(cat)
    total = 0
    for mover in t.objects:
        per_u = 1
        for p in t.into(x):
            per_u *= len(t.hom(mover, t.ends[p][0]))
        total += len(t.hom(mover, x)) * per_u
    return total


# ---------------------------------------------------------------------------
# inverse sequences by unrolling


def unrolled_bonds(prefix, cycle, horizon: int) -> list:
    """Step bonds ``b[n]: X_{n+1} -> X_n`` for ``n = 1..horizon`` (index 0 unused)."""
    out = [None]
    for n in range(1, horizon + 1):
        if n <= len(prefix):
            out.append(prefix[n - 1])
        else:
            out.append(cycle[(n - len(prefix) - 1) % len(cycle)])
    return out


def divisibility_movable(prefix, cycle, lam: int, horizon: int) -> int | None:
    """First ``m >= lam`` such that ``p_{lam,m}`` divides ``p_{lam,n}`` for every ``n`` up to ``horizon``.

    In hom = ℤ with multiplication, ``p_{lam,m} = a∘p_{lam,n}`` is solvable
    exactly when ``p_{lam,n}`` divides ``p_{lam,m}``.
    """
    bonds = unrolled_bonds(prefix, cycle, horizon)

    def p(a, b):
        out = 1
        for i in range(a, b):
            out *= bonds[i]
        return out

    for m in range(lam, horizon // 2):
        if all(p(lam, m) % p(lam, n) == 0 for n in range(m, horizon)):
            return m
    return None


def divisibility_uniform(prefix, cycle, lam: int, horizon: int) -> int | None:
    """First ``m`` admitting a thread ``r^n`` (n ≤ horizon) with ``r^lam = p_{lam,m}``.

    A thread is determined by its value far down; working backwards, ``r^n``
    must satisfy ``p_{n,n'}·r^{n'} = r^n``.  Over ℤ this means the integers
    ``p_{lam,m} / p_{lam,n}`` for ``n ≥ m`` are all integral.
    """
    bonds = unrolled_bonds(prefix, cycle, horizon)
    for m in range(lam, horizon // 2):
        base = 1
        for i in range(lam, m):
            base *= bonds[i]
        acc, ok = 1, True
        for n in range(lam, horizon):
            if n > lam:
                acc *= bonds[n - 1]
            if n >= m and base % acc:
                ok = False
                break
        if ok:
            return m
    return None


def unrolled_objects(prefix, cycle, horizon: int) -> list:
    """Objects ``X_1..X_horizon`` of an eventually periodic sequence (index 0 unused)."""
    out = [None]
    for n in range(1, horizon + 1):
        out.append(prefix[n - 1] if n <= len(prefix) else cycle[(n - len(prefix) - 1) % len(cycle)])
    return out


def periodic_movable(t: Table, objects, bonds, lam: int, horizon: int) -> int | None:
    """First ``m`` with ``p_{lam,m}`` factoring through every ``p_{lam,n}``, ``m ≤ n < horizon``.

    ``objects[n]`` and ``bonds[n]: X_{n+1} -> X_n`` are the unrolled sequence.
    """

    def p(a, b):
        acc = t.ident[objects[a]]
        for i in range(a, b):
            acc = t.comp[acc, bonds[i]]
        return acc

    for m in range(lam, horizon // 2):
        target = p(lam, m)
        if all(
            any(t.comp[p(lam, n), a] == target for a in t.hom(objects[m], objects[n]))
            for n in range(m, horizon)
        ):
            return m
    return None
