"""Computations on countable Markov shifts and their one-point-per-symbol compactification."""
from .errors import CMSError
from .measures import (
    Bernoulli, Bucket, Combo, DiracInfinity, FiniteMarkov, Periodic, bernoulli_finite,
    convex_combo, entropy, integrate, mass, mass_at_infinity, partition_entropy_H,
    periodic_measure, return_time_witness, zero_measure,
)
from .potential import Potential, VarBound
from .properties import (
    check_f_property, check_uniform_rome, classify, classify_loop_system,
    f_property_word_restriction_check, find_finite_rome,
)
from .rules import rule_graph, rule_names
from .series import GeometricLaw, PowerLaw, Tail
from .shift import (
    INF, FiniteMatrix, FullShift, LoopSystem, LoopTail, clopen_radius, connect,
    enumerate_words, golden_mean, is_admissible, is_bar_admissible, is_cyclically_admissible,
    metric_d, metric_d_rho,
)

__version__ = "0.1.0"

__all__ = [
    "CMSError", "Bernoulli", "Bucket", "Combo", "DiracInfinity", "FiniteMarkov", "Periodic",
    "bernoulli_finite", "convex_combo", "entropy", "integrate", "mass", "mass_at_infinity",
    "partition_entropy_H", "periodic_measure", "return_time_witness", "zero_measure",
    "Potential", "VarBound", "check_f_property", "check_uniform_rome", "classify",
    "classify_loop_system", "f_property_word_restriction_check", "find_finite_rome",
    "rule_graph", "rule_names", "GeometricLaw", "PowerLaw", "Tail", "INF", "FiniteMatrix",
    "FullShift", "LoopSystem", "LoopTail", "clopen_radius", "connect", "enumerate_words",
    "golden_mean", "is_admissible", "is_bar_admissible", "is_cyclically_admissible",
    "metric_d", "metric_d_rho",
]
