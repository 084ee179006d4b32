"""Inverse systems, their movability deciders, and expansion axioms."""

from .axioms import (
    ae1_factor,
    ae2_equalizer,
    check_AE1,
    check_AE2,
    check_G1,
    check_G2,
)
from .decide import (
    Block,
    MovabilityIndex,
    Obstruction,
    SystemMovability,
    decide_system_movable,
    decide_system_uniform,
    eventual_image,
    idempotent_exponent,
    movability_index,
    system_movable_search,
    system_uniform_search,
    thread_at,
    verify_thread,
)
from .systems import (
    DirectedPreorder,
    DivisibilitySequence,
    Expansion,
    FiniteIndexSystem,
    FiniteThread,
    InverseSequence,
    PeriodicSequence,
    SequenceThread,
    composite_bond,
    expansion_violations,
    finite_system,
    preorder_from_cover,
    preorder_violations,
    system_violations,
    thread_violations,
    validate_expansion,
    validate_system,
)

ProThread = FiniteThread | SequenceThread
