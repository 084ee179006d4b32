"""Movable and uniformly movable objects: deciders, verification, transfers.

A witness for an object ``X`` is a mover ``M``, a morphism ``m: M -> X`` and a
factor ``u(p): M -> Y`` for every ``p: Y -> X`` with ``p∘u(p) = m``.  A
*uniform* witness additionally satisfies ``u(p) = r∘u(q)`` whenever
``p∘r = q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from . import csp
from .construct import NullFamily, find_pullback, null_family_violations
from .errors import (
    FactorMismatch,
    IncompleteFactorTable,
    InvalidFunctorData,
    InvalidNullFamily,
    MissingSourceWitness,
    NoPullback,
    NotARetraction,
    NotInitial,
    Violation,
    WitnessViolation,
)
from .fincat import (
    FinCategory,
    Functor,
    NatTrans,
    Product,
    compose_functors,
    dual,
    functor_violations,
    nat_trans_violations,
    tuple_id,
)

CONDITION_1 = "condition 1"
CONDITION_2 = "condition 2"


@dataclass(frozen=True)
class MovabilityWitness:
    target: str
    mover: str
    morphism: str
    factors: Mapping[str, str]

    def factor(self, p: str) -> str:
        return self.factors[p]


@dataclass(frozen=True)
class UniformMovabilityWitness(MovabilityWitness):
    pass


def consistency_triples(cat: FinCategory, x: str) -> Iterator[tuple[str, str, str]]:
    """All ``(p, q, r)`` with ``p: Y -> X``, ``q: Z -> X``, ``r: Z -> Y`` and ``p∘r = q``."""
    into = cat.into(x)
    for p in into:
        y = cat.dom(p)
        for q in into:
            for r in cat.hom(cat.dom(q), y):
                if cat.compose(p, r) == q:
                    yield p, q, r


def witness_violations(cat: FinCategory, w: MovabilityWitness, uniform: bool) -> list[Violation]:
    x, mover, m = w.target, w.mover, w.morphism
    cat.require_object(x)
    cat.require_object(mover)
    if not cat.has_morphism(m) or cat.dom(m) != mover or cat.cod(m) != x:
        return [Violation("typing", (m,), f"movability morphism is not {mover} -> {x}")]
    out = []
    for p in cat.into(x):
        u = w.factors.get(p)
        if u is None:
            out.append(Violation("incomplete", (p,), "no factor"))
        elif not cat.has_morphism(u) or cat.dom(u) != mover or cat.cod(u) != cat.dom(p):
            out.append(Violation("typing", (p, u), f"factor is not {mover} -> {cat.dom(p)}"))
    if out:
        return out
    for p in cat.into(x):
        if cat.compose(p, w.factors[p]) != m:
            out.append(Violation(CONDITION_1, (p, w.factors[p]), "p∘u(p) != m"))
    if uniform:
        for p, q, r in consistency_triples(cat, x):
            rhs = cat.compose(r, w.factors[q])
            if w.factors[p] != rhs:
                out.append(
                    Violation(CONDITION_2, (p, q, r), f"u(p)={w.factors[p]} but r∘u(q)={rhs}")
                )
    return out


def verify_witness(cat: FinCategory, w: MovabilityWitness, uniform: bool) -> MovabilityWitness:
    """Return ``w`` if it satisfies the conditions, else raise with the first violation first."""
    violations = witness_violations(cat, w, uniform)
    if violations:
        if any(v.law in ("incomplete", "typing") for v in violations):
            raise IncompleteFactorTable("factor table incomplete or ill-typed", violations)
        raise WitnessViolation(f"{violations[0].law} fails", violations)
    return w


# ---------------------------------------------------------------------------
# deciders


@dataclass(frozen=True)
class CandidateFailure:
    """Why a candidate ``(M, m)`` admits no witness."""

    mover: str
    morphism: str
    reason: str  # "empty domain" | "contradiction" | "exhausted"
    variable: str | None = None
    triple: tuple[str, str, str] | None = None
    nodes: int = 0


@dataclass
class SearchResult:
    target: str
    uniform: bool
    witness: MovabilityWitness | None
    failures: list[CandidateFailure] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.witness is not None


def _candidates(cat: FinCategory, x: str):
    for mover in cat.objects:
        for m in cat.hom(mover, x):
            yield mover, m


def movable_search(cat: FinCategory, x: str) -> SearchResult:
    cat.require_object(x)
    result = SearchResult(x, False, None)
    into = cat.into(x)
    for mover, m in _candidates(cat, x):
        factors = {}
        for p in into:
            for u in cat.hom(mover, cat.dom(p)):
                if cat.compose(p, u) == m:
                    factors[p] = u
                    break
            else:
                result.failures.append(CandidateFailure(mover, m, "empty domain", variable=p))
                break
        else:
            result.witness = MovabilityWitness(x, mover, m, factors)
            return result
    return result


def uniform_search(cat: FinCategory, x: str) -> SearchResult:
    """Solve condition 1 + condition 2 as a CSP for every candidate ``(M, m)``."""
    cat.require_object(x)
    result = SearchResult(x, True, None)
    into = cat.into(x)
    triples = list(consistency_triples(cat, x))
    links = [csp.Link(p, r, q, (p, q, r)) for p, q, r in triples]
    idx = cat.identities[x]
    for mover, m in _candidates(cat, x):
        domains = {
            p: [u for u in cat.hom(mover, cat.dom(p)) if cat.compose(p, u) == m] for p in into
        }
        # u(id_X) = m is forced: id∘u = m.
        domains[idx] = [m] if m in domains[idx] else []
        outcome = csp.solve(into, domains, links, cat.compose)
        if outcome.solution is not None:
            result.witness = UniformMovabilityWitness(x, mover, m, outcome.solution)
            return result
        fail = outcome.failure
        result.failures.append(
            CandidateFailure(
                mover,
                m,
                fail.reason,
                variable=fail.variable,
                triple=fail.link.tag if fail.link is not None else None,
                nodes=fail.nodes,
            )
        )
    return result


def decide_movable(cat: FinCategory, x: str) -> MovabilityWitness | None:
    return movable_search(cat, x).witness


def decide_uniformly_movable(cat: FinCategory, x: str) -> UniformMovabilityWitness | None:
    return uniform_search(cat, x).witness


def recheck_failure(cat: FinCategory, x: str, failure: CandidateFailure, uniform: bool) -> bool:
    """Independently confirm a negative certificate for one candidate."""
    mover, m = failure.mover, failure.morphism
    if failure.reason == "empty domain":
        p = failure.variable
        return all(cat.compose(p, u) != m for u in cat.hom(mover, cat.dom(p)))
    if not uniform:
        return False
    single = uniform_search_candidate(cat, x, mover, m)
    return single is None


def uniform_search_candidate(cat: FinCategory, x: str, mover: str, m: str):
    into = cat.into(x)
    links = [csp.Link(p, r, q, (p, q, r)) for p, q, r in consistency_triples(cat, x)]
    domains = {p: [u for u in cat.hom(mover, cat.dom(p)) if cat.compose(p, u) == m] for p in into}
    return csp.solve(into, domains, links, cat.compose).solution


@dataclass
class CategoryReport:
    uniform: bool
    results: dict[str, SearchResult]

    @property
    def verdict(self) -> bool:
        return all(r.found for r in self.results.values())

    @property
    def failing(self) -> list[str]:
        return [x for x, r in self.results.items() if not r.found]

    def witnesses(self) -> dict[str, MovabilityWitness]:
        return {x: r.witness for x, r in self.results.items() if r.found}


def decide_category(cat: FinCategory, uniform: bool) -> CategoryReport:
    search = uniform_search if uniform else movable_search
    return CategoryReport(uniform, {x: search(cat, x) for x in cat.objects})


def co_search(cat: FinCategory, x: str, uniform: bool) -> SearchResult:
    op = dual(cat)
    return uniform_search(op, x) if uniform else movable_search(op, x)


def decide_co_movable(cat: FinCategory, x: str, uniform: bool) -> MovabilityWitness | None:
    """A (uniform) movability witness for ``x`` in the dual category.

    Morphism ids are shared with ``cat``; read ``m`` as ``X -> M`` and each
    factor ``u(p)`` as ``Y -> M`` with ``u(p)∘p = m``.
    """
    return co_search(cat, x, uniform).witness


# ---------------------------------------------------------------------------
# closed-form witnesses and transfers


def witness_from_initial(cat: FinCategory, o: str, x: str) -> UniformMovabilityWitness:
    cat.require_object(x)
    cat.require_object(o)
    for b in cat.objects:
        if len(cat.hom(o, b)) != 1:
            raise NotInitial(f"{o!r} is not initial: |hom({o},{b})| = {len(cat.hom(o, b))}")
    (m,) = cat.hom(o, x)
    factors = {p: cat.hom(o, cat.dom(p))[0] for p in cat.into(x)}
    return UniformMovabilityWitness(x, o, m, factors)


def witness_from_nulls(
    cat: FinCategory, nulls: NullFamily, x: str, x0: str | None = None
) -> UniformMovabilityWitness:
    """Mover ``X0`` (default: first object), ``m = 0``, every factor null."""
    violations = null_family_violations(cat, nulls)
    if violations:
        raise InvalidNullFamily("not a null family", violations)
    x0 = cat.objects[0] if x0 is None else x0
    cat.require_object(x0)
    cat.require_object(x)
    factors = {p: nulls[x0, cat.dom(p)] for p in cat.into(x)}
    return UniformMovabilityWitness(x, x0, nulls[x0, x], factors)


def transfer_domination(
    cat: FinCategory, wx: MovabilityWitness, f: str, g: str
) -> UniformMovabilityWitness:
    """Witness for ``Y`` from a uniform witness for ``X`` and ``f: X -> Y``, ``g: Y -> X``, f∘g = 1."""
    x = wx.target
    y = cat.cod(f)
    if cat.dom(f) != x or cat.dom(g) != y or cat.cod(g) != x:
        raise NotARetraction(f"need f: {x} -> Y and g: Y -> {x}")
    if cat.compose(f, g) != cat.identities[y]:
        raise NotARetraction(f"{f}∘{g} = {cat.compose(f, g)} is not the identity of {y}")
    verify_witness(cat, wx, uniform=True)
    factors = {p: wx.factors[cat.compose(g, p)] for p in cat.into(y)}
    return UniformMovabilityWitness(y, wx.mover, cat.compose(f, wx.morphism), factors)


def transfer_weak_functorial(
    L: FinCategory,
    K: FinCategory,
    J: Functor,
    D: Functor,
    psi: NatTrans,
    witnesses: Mapping[str, MovabilityWitness],
    objects: Sequence[str] | None = None,
) -> dict[str, UniformMovabilityWitness]:
    """Pull uniform witnesses in ``K`` back to ``L`` along ``J``, ``D`` and ``ψ: D∘J -> 1``."""
    problems = []
    if J.source != L or J.target != K:
        problems.append(Violation("shape", ("J",), "J must go L -> K"))
    if D.source != K or D.target != L:
        problems.append(Violation("shape", ("D",), "D must go K -> L"))
    if not problems:
        problems += functor_violations(J) + functor_violations(D)
    if not problems:
        if not psi.source.same_maps(compose_functors(D, J)):
            problems.append(Violation("shape", ("ψ",), "source of ψ is not D∘J"))
        ident = {a: a for a in L.objects}
        if dict(psi.target.objects) != ident or any(
            psi.target.morphisms[f] != f for f in L.ids()
        ):
            problems.append(Violation("shape", ("ψ",), "target of ψ is not the identity"))
        problems += nat_trans_violations(psi)
    if problems:
        raise InvalidFunctorData("invalid functor data", problems)

    out = {}
    for x in L.objects if objects is None else objects:
        jx = J.objects[x]
        w = witnesses.get(jx)
        if w is None:
            raise MissingSourceWitness(f"no witness for J({x}) = {jx}")
        verify_witness(K, w, uniform=True)
        m = L.compose(psi.components[x], D.morphisms[w.morphism])
        factors = {
            p: L.compose(psi.components[L.dom(p)], D.morphisms[w.factors[J.morphisms[p]]])
            for p in L.into(x)
        }
        out[x] = UniformMovabilityWitness(x, D.objects[w.mover], m, factors)
    return out


def product_witness(prod: Product, witnesses: Sequence[MovabilityWitness]) -> UniformMovabilityWitness:
    if len(witnesses) != len(prod.factors):
        raise FactorMismatch(f"{len(witnesses)} witnesses for {len(prod.factors)} factors")
    for cat, w in zip(prod.factors, witnesses):
        verify_witness(cat, w, uniform=True)
    target = tuple_id([w.target for w in witnesses])
    factors = {}
    for p in prod.category.into(target):
        parts = prod.morphism_parts[p]
        factors[p] = tuple_id([w.factors[q] for w, q in zip(witnesses, parts)])
    return UniformMovabilityWitness(
        target,
        tuple_id([w.mover for w in witnesses]),
        tuple_id([w.morphism for w in witnesses]),
        factors,
    )


@dataclass(frozen=True)
class PullbackRelation:
    holds: bool
    mediator: str  # u(f) ×_Z u(g)
    factor: str  # u(f∘p_X)
    t: str  # f∘p_X = g∘p_Y
    apex: str


def check_pullback_relation(
    cat: FinCategory, wz: MovabilityWitness, f: str, g: str
) -> PullbackRelation:
    """Compare the mediator of ``(u(f), u(g))`` with the factor of ``f∘p_X``."""
    verify_witness(cat, wz, uniform=True)
    pb = find_pullback(cat, f, g)
    if pb is None:
        raise NoPullback(f"{f} and {g} have no pullback")
    mediator = pb.mediator(wz.factors[f], wz.factors[g])
    t = cat.compose(f, pb.p_x)
    assert t == cat.compose(g, pb.p_y)
    factor = wz.factors[t]
    return PullbackRelation(mediator == factor, mediator, factor, t, pb.apex)
