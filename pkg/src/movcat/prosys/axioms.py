"""Expansion axioms AE1/AE2 and the older global conditions G1/G2."""

from __future__ import annotations

from math import lcm
from typing import Mapping

from ..errors import AE1Violation, AE2Violation, G1Violation, G2Violation, Violation
from ..fincat import SubcategorySpec
from .systems import Expansion, FiniteIndexSystem, composite_bond


def _sub_hom(exp: Expansion, a: str, b: str) -> list[str]:
    return [g for g in exp.ambient.hom(a, b) if g in exp.sub.morphisms]


def _sub_objects(exp: Expansion) -> list[str]:
    return [o for o in exp.ambient.objects if o in exp.sub.objects]


def ae1_factor(exp: Expansion, f: str, lower=None):
    """First ``(λ, f_λ)`` with ``f = f_λ ∘ p_λ`` and ``f_λ`` in the subcategory.

    Levels are searched in index order, starting at ``lower`` when given.
    """
    T = exp.ambient
    q = T.cod(f)
    levels = exp.levels() if lower is None else exp.levels_from(lower)
    for lam in levels:
        leg = exp.leg(lam)
        for g in _sub_hom(exp, T.cod(leg), q):
            if T.compose(g, leg) == f:
                return lam, g
    return None


def check_AE1(exp: Expansion) -> dict:
    """``f -> (λ, f_λ)`` for every ``f: X -> Q`` with ``Q`` in the subcategory."""
    T = exp.ambient
    table, bad = {}, []
    for q in _sub_objects(exp):
        for f in T.hom(exp.apex, q):
            got = ae1_factor(exp, f)
            if got is None:
                bad.append(Violation("AE1", (f,), f"{f} does not factor through any leg"))
            else:
                table[f] = got
    if bad:
        raise AE1Violation("AE1 fails", bad)
    return table


def ae2_equalizer(exp: Expansion, lam, h: str, k: str):
    """First ``λ' >= λ`` with ``h ∘ p_λλ' = k ∘ p_λλ'``, or None."""
    T = exp.ambient
    for mu in exp.upward(lam):
        b = composite_bond(exp.system, lam, mu)
        if T.compose(h, b) == T.compose(k, b):
            return mu
    return None


def check_AE2(exp: Expansion) -> dict:
    """``(λ, h, k) -> λ'`` for every pair identified by ``p_λ``."""
    T = exp.ambient
    table, bad = {}, []
    for lam in exp.levels():
        leg = exp.leg(lam)
        x_lam = T.cod(leg)
        for q in _sub_objects(exp):
            maps = _sub_hom(exp, x_lam, q)
            for i, h in enumerate(maps):
                for k in maps[i + 1 :]:
                    if T.compose(h, leg) != T.compose(k, leg):
                        continue
                    mu = ae2_equalizer(exp, lam, h, k)
                    if mu is None:
                        bad.append(
                            Violation("AE2", (lam, h, k), f"{h} and {k} are never equalized")
                        )
                    else:
                        table[lam, h, k] = mu
    if bad:
        raise AE2Violation("AE2 fails", bad)
    return table


def check_G1(sys, lam, m, sub: SubcategorySpec) -> None:
    """``p_λm`` is a monomorphism against morphisms of ``sub``."""
    cat = sys.ambient
    p = composite_bond(sys, lam, m)
    x_m = sys.obj(m)
    bad = []
    for a in cat.objects:
        if a not in sub.objects:
            continue
        maps = [u for u in cat.hom(a, x_m) if u in sub.morphisms]
        for i, u in enumerate(maps):
            for v in maps[i + 1 :]:
                if cat.compose(p, u) == cat.compose(p, v):
                    bad.append(Violation("G1", (u, v), f"p∘{u} = p∘{v}"))
    if bad:
        raise G1Violation("not a monomorphism against the subcategory", bad)


def _levels_to_compare(sys, threads) -> list:
    if isinstance(sys, FiniteIndexSystem):
        return sys.levels()
    base = max(t.base for t in threads)
    period = lcm(*(t.period for t in threads))
    return list(range(1, base + period + 1))


def _g2_candidates(sys, m1, m2) -> list:
    if isinstance(sys, FiniteIndexSystem):
        return sys.index.upper_bounds(m1, m2)
    # search until (phase, p_{m1 λ*}, p_{m2 λ*}) repeats
    start = max(m1, m2)
    seen, out = set(), []
    star = start
    while True:
        state = (sys.phase_key(star), sys.composite(m1, star), sys.composite(m2, star))
        if state in seen:
            return out
        seen.add(state)
        out.append(star)
        star += 1


def check_G2(sys, indices: Mapping, threads: Mapping) -> dict:
    """``(λ, λ') -> λ*`` where both threads agree after pulling back to ``X_λ*``."""
    keys = list(threads)
    found, bad = {}, []
    for i, a in enumerate(keys):
        for b in keys[i + 1 :]:
            ra, rb = threads[a], threads[b]
            ma, mb = indices[a], indices[b]
            levels = _levels_to_compare(sys, [ra, rb])
            for star in _g2_candidates(sys, ma, mb):
                pa = composite_bond(sys, ma, star)
                pb = composite_bond(sys, mb, star)
                if all(
                    sys.compose(ra.at(nu), pa) == sys.compose(rb.at(nu), pb) for nu in levels
                ):
                    found[a, b] = star
                    break
            else:
                bad.append(Violation("G2", (a, b), "no common level makes the square commute"))
    if bad:
        raise G2Violation("threads do not agree globally", bad)
    return found
