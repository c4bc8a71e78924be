"""Linear temporal logic over threshold-diffusion network models.

Models are finite agent networks with a uniform rational adoption threshold;
each model generates a unique, finitely representable behavior path.  The
package evaluates temporal formulas on that path three independent ways --
direct semantics, a labeling checker, and translation to propositional
logic -- so the engines can cross-check each other.
"""

from .checker import LabelMap, check, init_labels, s_set_from_labels
from .errors import (
    FormulaSyntaxError,
    LtlsnError,
    MajorityExpansionError,
    ModelConstraintError,
    ModelSyntaxError,
    TranslationError,
    UnknownAgentError,
)
from .formula import (
    TOP,
    And,
    Beh,
    Formula,
    MajorityGE,
    Nbr,
    Next,
    Not,
    Top,
    Until,
    always,
    eventually,
    implies,
    iter_nodes,
    or_,
    parse_formula,
    render,
    size,
    subformulas,
)
from .model import (
    Model,
    Network,
    Trace,
    Violation,
    adopters,
    parse_model,
    step,
    threshold_met,
    trace,
    validate,
)
from .semantics import SatSet, eval_at, satisfaction_set
from .translate import (
    cost,
    eliminate_until,
    eval_prop,
    expand_majority,
    majority_formula,
    satisfaction_set_via_translation,
    to_propositional,
    until_expansion,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Beh",
    "Formula",
    "FormulaSyntaxError",
    "LabelMap",
    "LtlsnError",
    "MajorityExpansionError",
    "MajorityGE",
    "Model",
    "ModelConstraintError",
    "ModelSyntaxError",
    "Nbr",
    "Network",
    "Next",
    "Not",
    "SatSet",
    "TOP",
    "Top",
    "Trace",
    "TranslationError",
    "UnknownAgentError",
    "Until",
    "Violation",
    "adopters",
    "always",
    "check",
    "cost",
    "eliminate_until",
    "eval_at",
    "eval_prop",
    "eventually",
    "expand_majority",
    "implies",
    "init_labels",
    "iter_nodes",
    "majority_formula",
    "or_",
    "parse_formula",
    "parse_model",
    "render",
    "s_set_from_labels",
    "satisfaction_set",
    "satisfaction_set_via_translation",
    "size",
    "step",
    "subformulas",
    "threshold_met",
    "to_propositional",
    "trace",
    "until_expansion",
    "validate",
]
