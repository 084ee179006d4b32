"""Comma-category movability versus movability of an expansion's system.

:func:`theorem_check` decides both sides independently and compares them.
The two witness constructions translate a uniform movability witness of the
comma category into threads of the system and back; their outputs are
re-checked by the independent verifiers, so any failure is reported rather
than trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .construct import CommaCategory, comma_category, comma_morphism_id
from .errors import (
    AE1Failure,
    AE1Violation,
    AE2Failure,
    AE2Violation,
    ExpansionInvalid,
    MovcatError,
    ThreadVerificationFailure,
    Violation,
    WitnessVerificationFailure,
)
from .fincat import SubcategorySpec
from .movability import (
    CategoryReport,
    UniformMovabilityWitness,
    consistency_triples,
    decide_category,
    witness_violations,
)
from .prosys import (
    Expansion,
    FiniteIndexSystem,
    FiniteThread,
    SequenceThread,
    ae1_factor,
    ae2_equalizer,
    check_AE1,
    check_AE2,
    composite_bond,
    system_uniform_search,
    thread_violations,
    validate_expansion,
)
from .prosys.decide import SystemMovability


def _check_axioms(exp: Expansion):
    try:
        ae1 = check_AE1(exp)
    except AE1Violation as exc:
        raise AE1Failure("not an expansion: AE1 fails", exc.violations) from None
    try:
        ae2 = check_AE2(exp)
    except AE2Violation as exc:
        raise AE2Failure("not an expansion: AE2 fails", exc.violations) from None
    return ae1, ae2


def _upper_bound(sys, a, b):
    if isinstance(sys, FiniteIndexSystem):
        return sys.index.upper_bounds(a, b)[0]
    return max(a, b)


# ---------------------------------------------------------------------------
# comma witness -> thread


@dataclass(frozen=True)
class CommaToSystem:
    lam: object
    tilde: object  # level through which M(p_λ) factors
    tilde_factor: str  # f̃': X_λ̃ -> Q'
    index: object  # λ', the movability index produced
    thread: object


def comma_to_system_witness(
    exp: Expansion, comma: CommaCategory, witness: UniformMovabilityWitness, lam
) -> CommaToSystem:
    """Threads from a uniform witness at the comma object ``p_λ``.

    ``M(p_λ) = f': X -> Q'`` is factored as ``f̃' ∘ p_λ̃`` with ``λ̃ >= λ``;
    ``λ' >= λ̃`` equalizes ``p_λλ̃`` and ``η ∘ f̃'``; then
    ``r^λ'' = u(p_λλ'') ∘ f̃' ∘ p_λ̃λ'`` above ``λ`` and ``r^λ'' = p_λ''λ'``
    below it.
    """
    T = exp.ambient
    sys = exp.system
    f_prime = witness.mover
    eta = comma.morphism_table[witness.morphism]
    tilde = ae1_factor(exp, f_prime, lower=lam)
    if tilde is None:
        raise AE1Failure(
            "AE1 fails for the mover", [Violation("AE1", (f_prime,), "no factorization")]
        )
    lt, ft = tilde
    h, k = composite_bond(sys, lam, lt), T.compose(eta, ft)
    lp = ae2_equalizer(exp, lt, h, k)
    if lp is None:
        raise AE2Failure(
            "AE2 fails for the mover", [Violation("AE2", (lt, h, k), "never equalized")]
        )
    tail = T.compose(ft, composite_bond(sys, lt, lp))

    def above(nu):
        p = composite_bond(sys, lam, nu)
        u = witness.factors[comma_morphism_id(p, exp.leg(nu))]
        return T.compose(comma.morphism_table[u], tail)

    if isinstance(sys, FiniteIndexSystem):
        values = {}
        for nu in sys.levels():
            if sys.leq(lam, nu):
                values[nu] = above(nu)
            elif sys.leq(nu, lam):
                values[nu] = composite_bond(sys, nu, lp)
        # indices incomparable with λ: pull back from a common upper bound
        for nu in sys.levels():
            if nu not in values:
                mu = sys.index.upper_bounds(nu, lam)[0]
                values[nu] = T.compose(composite_bond(sys, nu, mu), values[mu])
        thread = FiniteThread(lam, lp, values)
    else:
        levels, back = sys.state_walk(lam, lam)
        values = {nu: composite_bond(sys, nu, lp) for nu in range(1, lam)}
        for nu in levels:
            values[nu] = above(nu)
        thread = SequenceThread(lam, lp, values, back, levels[-1] + 1 - back)
    bad = thread_violations(sys, thread)
    if bad:
        raise ThreadVerificationFailure("constructed thread fails verification", bad)
    return CommaToSystem(lam, lt, ft, lp, thread)


# ---------------------------------------------------------------------------
# threads -> comma witness


@dataclass(frozen=True)
class FactorStep:
    """How ``u(η')`` was built for one comma morphism ``η': f'' -> f``."""

    eta: str
    level: object  # λ''
    level_factor: str  # f_λ'': X_λ'' -> Q''
    equalizer: object  # λ'''
    value: str  # ambient u(η')


@dataclass(frozen=True)
class UpperBoundStep:
    """The λ0 / λ1 pair used to confirm one consistency triple."""

    triple: tuple[str, str, str]
    lower: object  # λ0
    equalizer: object  # λ1
    holds: bool


@dataclass(frozen=True)
class SystemToComma:
    target: str
    lam: object
    witness: UniformMovabilityWitness
    steps: tuple[FactorStep, ...]
    upper_bounds: tuple[UpperBoundStep, ...]


def system_to_comma_witness(
    exp: Expansion, comma: CommaCategory, threads, f: str
) -> SystemToComma:
    """Uniform witness at comma object ``f: X -> Q`` from threads of the system.

    ``f = f_λ ∘ p_λ``; ``M(f) = p_λ'`` for the thread's index ``λ'``;
    ``m_f = f_λ ∘ p_λλ'``; and for ``η': f'' -> f``,
    ``u(η') = f_λ'' ∘ p_λ''λ''' ∘ r^λ'''`` where ``f'' = f_λ'' ∘ p_λ''`` and
    ``λ''' >= λ''`` equalizes ``f_λ ∘ p_λλ''`` and ``η' ∘ f_λ''``.
    """
    T, sys, base = exp.ambient, exp.system, comma.base
    got = ae1_factor(exp, f)
    if got is None:
        raise AE1Failure("AE1 fails", [Violation("AE1", (f,), "no factorization")])
    lam, f_lam = got
    thread = threads[lam]
    lp = thread.m
    mover = exp.leg(lp)
    m_amb = T.compose(f_lam, composite_bond(sys, lam, lp))
    problems = []

    def comma_id(u, src):
        mid = comma_morphism_id(u, src)
        if mid not in comma.morphism_table:
            problems.append(
                Violation("comma morphism", (u, src), f"{u} does not commute with {src}")
            )
        return mid

    m_f = comma_id(m_amb, mover)
    steps = []
    factors = {}
    for eta_id in base.into(f):
        eta = comma.morphism_table[eta_id]
        src = base.dom(eta_id)  # f''
        lower = ae1_factor(exp, src, lower=lam)
        if lower is None:
            raise AE1Failure("AE1 fails", [Violation("AE1", (src,), "no factorization")])
        l2, f2 = lower
        h = T.compose(f_lam, composite_bond(sys, lam, l2))
        k = T.compose(eta, f2)
        l3 = ae2_equalizer(exp, l2, h, k)
        if l3 is None:
            raise AE2Failure("AE2 fails", [Violation("AE2", (l2, h, k), "never equalized")])
        value = T.compose_path(f2, composite_bond(sys, l2, l3), thread.at(l3))
        steps.append(FactorStep(eta_id, l2, f2, l3, value))
        factors[eta_id] = comma_id(value, mover)
    if problems:
        raise WitnessVerificationFailure("constructed factors are not comma morphisms", problems)
    witness = UniformMovabilityWitness(f, mover, m_f, factors)

    by_eta = {s.eta: s for s in steps}
    bounds = []
    for p, q, r in consistency_triples(base, f):
        sp, sq = by_eta[p], by_eta[q]
        phi = comma.morphism_table[r]
        l0 = _upper_bound(sys, sp.equalizer, sq.equalizer)
        h = T.compose_path(
            sp.level_factor,
            composite_bond(sys, sp.level, sp.equalizer),
            composite_bond(sys, sp.equalizer, l0),
        )
        k = T.compose_path(
            phi,
            sq.level_factor,
            composite_bond(sys, sq.level, sq.equalizer),
            composite_bond(sys, sq.equalizer, l0),
        )
        l1 = ae2_equalizer(exp, l0, h, k)
        holds = l1 is not None and sp.value == T.compose(phi, sq.value)
        bounds.append(UpperBoundStep((p, q, r), l0, l1, holds))

    bad = witness_violations(base, witness, uniform=True)
    if bad:
        raise WitnessVerificationFailure("constructed witness fails verification", bad)
    return SystemToComma(f, lam, witness, tuple(steps), tuple(bounds))


# ---------------------------------------------------------------------------
# the equivalence harness


@dataclass
class TheoremReport:
    ae1: dict
    ae2: dict
    comma: CommaCategory
    comma_side: CategoryReport
    system_side: SystemMovability
    leg_threads: SystemMovability
    to_system: dict = field(default_factory=dict)
    to_comma: dict = field(default_factory=dict)
    construction_errors: list = field(default_factory=list)

    @property
    def comma_uniform(self) -> bool:
        return self.comma_side.verdict

    @property
    def system_uniform(self) -> bool:
        return self.system_side.holds

    @property
    def consistent(self) -> bool:
        return self.comma_uniform == self.system_uniform

    @property
    def constructions_ok(self) -> bool:
        return not self.construction_errors


def theorem_check(T, P: SubcategorySpec, X: str, exp: Expansion) -> TheoremReport:
    """Decide both sides for a validated expansion and run both constructions.

    Raises :class:`ExpansionInvalid` (AE1/AE2 failure) before any comparison.
    A verdict disagreement is never raised; it is left in the report as
    ``consistent == False`` together with every witness computed.
    """
    if exp.ambient is not T and exp.ambient != T:
        raise ExpansionInvalid("expansion lives in another category")
    if exp.apex != X or exp.sub != P:
        raise ExpansionInvalid("expansion does not match the given subcategory and object")
    validate_expansion(exp)
    ae1, ae2 = _check_axioms(exp)
    comma = comma_category(T, P, X)
    comma_side = decide_category(comma.base, uniform=True)
    system_side = system_uniform_search(exp.system)
    leg_threads = system_uniform_search(exp.system, over=exp)
    report = TheoremReport(ae1, ae2, comma, comma_side, system_side, leg_threads)

    if comma_side.verdict:
        witnesses = comma_side.witnesses()
        for lam in exp.levels():
            try:
                report.to_system[lam] = comma_to_system_witness(
                    exp, comma, witnesses[exp.leg(lam)], lam
                )
            except MovcatError as exc:
                report.construction_errors.append(("to system", lam, exc))
    if leg_threads.holds:
        for f in comma.base.objects:
            try:
                report.to_comma[f] = system_to_comma_witness(exp, comma, leg_threads.indices, f)
            except MovcatError as exc:
                report.construction_errors.append(("to comma", f, exc))
    elif system_side.holds:
        report.construction_errors.append(
            ("to comma", None, ThreadVerificationFailure("no thread commutes with the legs"))
        )
    return report


def round_trip(report: TheoremReport, exp: Expansion) -> dict:
    """Comma witnesses rebuilt from the threads that came out of comma witnesses."""
    threads = {lam: got.thread for lam, got in report.to_system.items()}
    return {
        f: system_to_comma_witness(exp, report.comma, threads, f).witness
        for f in report.comma.base.objects
    }


@dataclass
class SequenceReport:
    movable: CategoryReport
    uniform: CategoryReport

    @property
    def agree(self) -> bool:
        return self.movable.verdict == self.uniform.verdict


def corollary_sequence_check(T, P: SubcategorySpec, X: str, exp: Expansion) -> SequenceReport:
    """For a sequence expansion: the comma category is movable iff uniformly movable."""
    if not exp.is_sequence:
        raise ExpansionInvalid("expansion is not indexed by a sequence")
    if exp.apex != X or exp.sub != P:
        raise ExpansionInvalid("expansion does not match the given subcategory and object")
    validate_expansion(exp)
    _check_axioms(exp)
    comma = comma_category(T, P, X)
    return SequenceReport(
        decide_category(comma.base, uniform=False), decide_category(comma.base, uniform=True)
    )
