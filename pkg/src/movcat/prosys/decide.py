"""Deciders for movability and uniform movability of inverse systems.

System ``X`` is movable at ``λ`` with index ``m >= λ`` when ``p_λm`` lies in

    Im_λ'' = { p_λλ'' ∘ h : h ∈ hom(X_m, X_λ'') }   for every λ'' >= λ,

and uniformly movable when in addition the factors can be taken to form one
thread ``(r^ν)`` with ``r^λ = p_λm``.

For a periodic sequence, both questions about a level only depend on the pair
``(phase(ν), p_λν)``, which ranges over a finite set, so walking levels until
that pair repeats is a complete search.  The uniform decider does not reuse the
movable one: it works with the fibres ``A_ν = {h : p_λν ∘ h = p_λm}`` and
extracts an eventually periodic thread from an idempotent power of the loop
composite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .. import csp
from ..errors import ThreadVerificationFailure
from .systems import (
    DivisibilitySequence,
    FiniteIndexSystem,
    FiniteThread,
    PeriodicSequence,
    SequenceThread,
    composite_bond,
    reduce_level,
    thread_violations,
)


@dataclass(frozen=True)
class MovabilityIndex:
    """``m(λ)`` with a factor ``r_λ'': X_m -> X_λ''`` for every ``λ'' >= λ``.

    For sequences ``factors`` covers the levels ``λ .. end-1``; deeper levels
    reuse the factor at ``reduce_level(λ'', end, back)``.
    """

    lam: object
    m: object
    factors: Mapping
    loop: tuple[int, int] | None = None

    def factor(self, nu):
        if self.loop is None or nu in self.factors:
            return self.factors[nu]
        return self.factors[reduce_level(nu, *self.loop)]


@dataclass(frozen=True)
class Block:
    """Why candidate index ``m`` fails, with the level where it fails."""

    m: object
    level: object
    detail: str = ""


@dataclass(frozen=True)
class Obstruction:
    """Every candidate index at ``lam`` fails; one block per candidate ``m``."""

    lam: object
    blocks: tuple[Block, ...]
    summary: str = ""


@dataclass
class SystemMovability:
    uniform: bool
    indices: dict = field(default_factory=dict)  # λ -> MovabilityIndex | thread
    failure: Obstruction | None = None

    @property
    def holds(self) -> bool:
        return self.failure is None


def _first_factor(sys, lam, nu, m, target):
    bond = composite_bond(sys, lam, nu)
    for h in sys.hom(m, nu):
        if sys.compose(bond, h) == target:
            return h
    return None


# ---------------------------------------------------------------------------
# eventual images


def eventual_image(sys, lam, m):
    """Intersection of ``Im_λ''`` over all ``λ'' >= λ``.

    Finite systems and periodic sequences give a frozenset of morphisms
    ``X_m -> X_λ``.  The divisibility model gives the generator ``d`` of the
    ideal ``dℤ``, or None when the chain of ideals never stops shrinking (its
    intersection is the zero ideal).
    """
    if isinstance(sys, DivisibilitySequence):
        if any(d != 1 for d in sys.cycle):
            return None
        return sys.composite(lam, max(lam, sys.prefix_len + 1))
    if isinstance(sys, FiniteIndexSystem):
        deeper = sys.above(lam)
    else:
        deeper, _ = sys.state_walk(lam, lam)
    image = None
    for nu in deeper:
        bond = composite_bond(sys, lam, nu)
        here = {sys.compose(bond, h) for h in sys.hom(m, nu)}
        image = here if image is None else image & here
    return frozenset(image)


def _in_image(sys, image, value) -> bool:
    if isinstance(sys, DivisibilitySequence):
        return image is not None and value % image == 0
    return value in image


# ---------------------------------------------------------------------------
# movability


def _candidate_indices(sys, lam) -> list:
    if isinstance(sys, FiniteIndexSystem):
        return sys.above(lam)
    if isinstance(sys, DivisibilitySequence):
        return list(range(lam, max(lam, sys.prefix_len + 1) + sys.cycle_len + 1))
    levels, _ = sys.state_walk(lam, lam)
    return levels


def _movable_at(sys, lam) -> MovabilityIndex | Obstruction:
    blocks = []
    for m in _candidate_indices(sys, lam):
        target = composite_bond(sys, lam, m)
        if _in_image(sys, eventual_image(sys, lam, m), target):
            return _factor_table(sys, lam, m, target)
        blocks.append(_block(sys, lam, m, target))
    summary = ""
    if isinstance(sys, DivisibilitySequence):
        summary = (
            f"p_{lam}m never divides p_{lam}λ'' once λ'' passes a bond with "
            f"multiplier > 1; every cycle repeats such a bond"
        )
    return Obstruction(lam, tuple(blocks), summary)


def _factor_table(sys, lam, m, target) -> MovabilityIndex:
    if isinstance(sys, FiniteIndexSystem):
        factors = {nu: _first_factor(sys, lam, nu, m, target) for nu in sys.above(lam)}
        return MovabilityIndex(lam, m, factors)
    if isinstance(sys, DivisibilitySequence):
        end = max(m, lam, sys.prefix_len + 1) + 1
        factors = {nu: target // sys.composite(lam, nu) for nu in range(lam, end)}
        return MovabilityIndex(lam, m, factors, (end, end - 1))
    levels, back = sys.state_walk(lam, lam)
    factors = {nu: _first_factor(sys, lam, nu, m, target) for nu in levels}
    return MovabilityIndex(lam, m, factors, (levels[-1] + 1, back))


def _block(sys, lam, m, target) -> Block:
    if isinstance(sys, DivisibilitySequence):
        nu = m
        while sys.multiplier(nu) == 1:
            nu += 1
        deep = nu + 1
        bond = sys.composite(lam, deep)
        return Block(m, deep, f"p_{lam},{deep}={bond} does not divide p_{lam},{m}={target}")
    if isinstance(sys, FiniteIndexSystem):
        deeper = sys.above(lam)
    else:
        deeper, _ = sys.state_walk(lam, lam)
    for nu in deeper:
        if _first_factor(sys, lam, nu, m, target) is None:
            return Block(m, nu, f"p_{lam}{m}={target} does not factor through level {nu}")
    raise AssertionError("candidate rejected without a blocking level")


def system_movable_search(sys) -> SystemMovability:
    result = SystemMovability(False)
    for lam in sys.levels():
        got = _movable_at(sys, lam)
        if isinstance(got, Obstruction):
            result.failure = got
            return result
        result.indices[lam] = got
    return result


def decide_system_movable(sys) -> dict | None:
    """``λ -> MovabilityIndex`` for every representative level, or None."""
    result = system_movable_search(sys)
    return result.indices if result.holds else None


def movability_index(sys, lam) -> MovabilityIndex | None:
    """The movability index at any level, including levels past the representatives."""
    got = _movable_at(sys, lam)
    return None if isinstance(got, Obstruction) else got


# ---------------------------------------------------------------------------
# uniform movability


def _over_filter(over, m):
    """Keep ``h: X_m -> X_ν`` with ``h ∘ p_m = p_ν`` when legs are given."""
    if over is None:
        return lambda nu, h: True
    T, leg_m = over.ambient, over.leg(m)
    return lambda nu, h: T.compose(h, leg_m) == over.leg(nu)


def _finite_thread(sys: FiniteIndexSystem, lam, m, over=None):
    elems = sys.index.elements
    keep = _over_filter(over, m)
    domains = {nu: [h for h in sys.hom(m, nu) if keep(nu, h)] for nu in elems}
    base = sys.bonds[lam, m]
    domains[lam] = [base] if base in domains[lam] else []
    links = [
        csp.Link(nu, sys.bonds[nu, mu], mu, (nu, mu))
        for nu in elems
        for mu in sys.above(nu)
        if mu != nu
    ]
    outcome = csp.solve(elems, domains, links, sys.ambient.compose)
    if outcome.solution is None:
        fail = outcome.failure
        where = fail.variable if fail.link is None else fail.link.tag
        return Block(m, where, f"no thread: {fail.reason}")
    return FiniteThread(lam, m, outcome.solution)


def idempotent_exponent(sys, loop) -> int:
    """Least ``K >= 1`` with ``loop^K ∘ loop^K = loop^K``."""
    powers = [loop]
    seen = {loop: 1}
    while True:
        nxt = sys.compose(loop, powers[-1])
        if nxt in seen:
            # powers enter a cycle of length L from position s; loop^K idempotent
            # for the multiple of L that is >= s
            s = seen[nxt]
            length = len(powers) + 1 - s
            k = length
            while k < s:
                k += length
            return k
        powers.append(nxt)
        seen[nxt] = len(powers)


def _power(sys, f, n, ident):
    acc = ident
    for _ in range(n):
        acc = sys.compose(f, acc)
    return acc


def _periodic_thread(sys: PeriodicSequence, lam: int, m: int, over=None):
    target = sys.composite(lam, m)
    keep = _over_filter(over, m)
    start = max(m, sys.prefix_len + 1)
    levels, back = sys.state_walk(lam, start)
    # fibres at levels below the loop are images of the fibre at `back`
    nu0 = back
    period = levels[-1] + 1 - back
    bond = sys.composite(lam, nu0)
    fibre = [
        h for h in sys.hom(m, nu0) if sys.compose(bond, h) == target and keep(nu0, h)
    ]
    if not fibre:
        return Block(m, nu0, f"fibre over level {nu0} is empty")
    loop = sys.composite(nu0, nu0 + period)
    k = idempotent_exponent(sys, loop)
    e = sys.compose(_power(sys, loop, k, sys.identity(nu0)), fibre[0])
    full = k * period
    values = {}
    for i in range(full):
        values[nu0 + i] = sys.compose(sys.composite(nu0 + i, nu0 + full), e)
    for nu in range(1, nu0):
        values[nu] = sys.compose(sys.composite(nu, nu0), e)
    return SequenceThread(lam, m, values, nu0, full)


def _divisibility_thread(sys: DivisibilitySequence, lam: int, m: int):
    target = sys.composite(lam, m)
    k, c = sys.prefix_len, sys.cycle_len
    for nu in range(m + 1, m + k + c + 2):
        bond = sys.composite(lam, nu)
        if target % bond:
            return Block(m, nu, f"p_{lam},{nu}={bond} does not divide p_{lam},{m}={target}")
    base = max(m, k + 1)
    values = {nu: (sys.composite(nu, m) if nu <= m else 1) for nu in range(1, base + c)}
    return SequenceThread(lam, m, values, base, c)


def _thread_candidates(sys, lam) -> list:
    if isinstance(sys, FiniteIndexSystem):
        return sys.above(lam)
    if isinstance(sys, DivisibilitySequence):
        return list(range(lam, max(lam, sys.prefix_len + 1) + sys.cycle_len + 1))
    # own walk over (phase(m), p_λm); deliberately not shared with the movable decider
    seen = set()
    out = []
    m = lam
    while True:
        state = (sys.phase_key(m), sys.composite(lam, m))
        if state in seen:
            return out
        seen.add(state)
        out.append(m)
        m += 1


def _uniform_at(sys, lam, over=None):
    blocks = []
    for m in _thread_candidates(sys, lam):
        if isinstance(sys, FiniteIndexSystem):
            got = _finite_thread(sys, lam, m, over)
        elif isinstance(sys, DivisibilitySequence):
            got = _divisibility_thread(sys, lam, m)
        else:
            got = _periodic_thread(sys, lam, m, over)
        if not isinstance(got, Block):
            return got
        blocks.append(got)
    return Obstruction(lam, tuple(blocks), "no candidate index carries a thread")


def system_uniform_search(sys, over=None) -> SystemMovability:
    """Threads for every representative level.

    With an expansion ``over``, threads are additionally required to satisfy
    ``r^ν ∘ p_m = p_ν`` (they commute with the expansion's legs).
    """
    result = SystemMovability(True)
    for lam in sys.levels():
        got = _uniform_at(sys, lam, over)
        if isinstance(got, Obstruction):
            result.failure = got
            return result
        result.indices[lam] = got
    return result


def decide_system_uniform(sys) -> dict | None:
    """``λ -> thread`` for every representative level, or None."""
    result = system_uniform_search(sys)
    return result.indices if result.holds else None


def thread_at(sys, lam, over=None):
    """The uniform movability thread at any level, or None."""
    got = _uniform_at(sys, lam, over)
    return None if isinstance(got, Obstruction) else got


def verify_thread(sys, thread):
    violations = thread_violations(sys, thread)
    if violations:
        raise ThreadVerificationFailure("thread fails verification", violations)
    return thread
