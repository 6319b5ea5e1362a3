"""Asynchronous elementary cellular automata: simulation, exact dynamics
classification, skew-convergence conditions and communication-class clustering."""

__version__ = "0.1.0"

from .dynamics import (
    CommClass,
    DynamicsClass,
    EmpiricalReport,
    TransitionSummary,
    classify_empirical,
    classify_exact,
    communication_classes,
    scan_minimal,
)
from .lattice import Configuration, Region, density, is_point_attractor, regions, rmt_at
from .rules import MINIMAL_RULES, EcaRule, is_rmt_active, minimal_representative, orbit, transform
from .schemes import (
    EnumerationLimitError,
    Scheme,
    Selection,
    UpdateScheme,
    make_rng,
    sample_selection,
    space_time,
    step,
    successors,
    trajectory,
)
from .theorem import (
    ConvergenceVerdict,
    both_attractor_rules,
    convergent_minimal_rules,
    skew_convergence_conditions,
    validate_skew_convergence,
)
