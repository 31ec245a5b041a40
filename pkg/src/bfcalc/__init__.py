"""Bernstein functions of generators of matrix semigroups.

The package evaluates Bernstein and completely monotone functions through
their Levy-Khintchine and Laplace representations, applies them to matrix
generators by the Hille-Phillips calculus and subordination, computes the
functional ``J[g, psi] = int g psi'`` and checks the operator-norm bounds
built from these pieces.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (BFCalcError, ConfigError, DivergentIntegral, MatrixOverflow, NonIntegrable,
                     PathDisagreement, PreconditionFailed, SpecParseError, ToleranceNotMet,
                     UndecidedDivergence, Unsupported, UnsupportedPsi, Violation)
from .measures import Measure, integrate, laplace_transform
from .functions import (BernsteinFunction, CompletelyMonotoneFunction, LevyTriple, bf_derivative,
                        bf_eval, cm_eval)
from .jfunctional import c_constant, j_closed_form_exp, j_value
from .semigroup import MatrixGenerator, estimate_yosida, make_generator, operator_norm
from .calculus import bf_of_generator, hp_apply, subordinate_semigroup, subordinator_measure
from .records import BoundCheckRecord
from .harness import RunConfig, run_suite
from .specs import parse_g, parse_generator, parse_measure, parse_psi

__all__ = [
    "BFCalcError", "ConfigError", "DivergentIntegral", "MatrixOverflow", "NonIntegrable",
    "PathDisagreement", "PreconditionFailed", "SpecParseError", "ToleranceNotMet",
    "UndecidedDivergence", "Unsupported", "UnsupportedPsi", "Violation",
    "Measure", "integrate", "laplace_transform",
    "BernsteinFunction", "CompletelyMonotoneFunction", "LevyTriple", "bf_derivative", "bf_eval",
    "cm_eval", "c_constant", "j_closed_form_exp", "j_value",
    "MatrixGenerator", "estimate_yosida", "make_generator", "operator_norm",
    "bf_of_generator", "hp_apply", "subordinate_semigroup", "subordinator_measure",
    "BoundCheckRecord", "RunConfig", "run_suite",
    "parse_g", "parse_generator", "parse_measure", "parse_psi",
]
