"""zetalab: value-distribution functionals and explicit zeta inequality audits.

A numerical laboratory with three layers:

* certified evaluators for zeta, its derivative, and the tracked principal
  branch of log zeta (``zetalab.zeta``, ``zetalab.diskmodel``),
* value-distribution functionals m, N, T, counting identities, and
  argument-principle zero location for black-box analytic functions
  (``zetalab.nevanlinna``, ``zetalab.zeros``),
* lemma-by-lemma audits of an explicit inequality chain with a
  self-reproducing constants ledger (``zetalab.audit``) behind a CLI with
  JSON/CSV reports (``zetalab.cli``).
"""

__version__ = "0.1.0"

from .arith import MangoldtTable, log_plus, mangoldt
from .audit import (
    ConstantsLedger,
    NON_REPRODUCIBILITY_NOTE,
    TailCheckResult,
    audit_chain,
    audit_lemma4,
    audit_lemma5,
    audit_lemma6,
    audit_lemma8,
    audit_lemma9,
    audit_theorem,
    derive_constants,
)
from .diskmodel import ZetaDiskModel
from .errors import (
    BoundaryObstruction,
    BranchObstruction,
    ConvergenceError,
    DivisorOnCircle,
    Finding,
    PoleError,
    PreconditionError,
    PrecisionExhausted,
    ZetaLabError,
)
from .nevanlinna import (
    CharacteristicReport,
    DiskSpec,
    FunctionHandle,
    LemmaVerdict,
    PointList,
    borel_caratheodory_check,
    characteristic_T,
    counting_N,
    jensen_residual,
    lemma1_check,
    max_modulus,
    proximity_m,
    smt_check,
)
from .zeros import WindingResult, locate_a_points, winding_count, winding_count_jittered
from .zeta import EvalResult, log_zeta_series, log_zeta_tracked, zeta_em, zeta_em_batch

__all__ = [
    "BoundaryObstruction",
    "BranchObstruction",
    "CharacteristicReport",
    "ConstantsLedger",
    "ConvergenceError",
    "DiskSpec",
    "DivisorOnCircle",
    "EvalResult",
    "Finding",
    "FunctionHandle",
    "LemmaVerdict",
    "MangoldtTable",
    "NON_REPRODUCIBILITY_NOTE",
    "PointList",
    "PoleError",
    "PreconditionError",
    "PrecisionExhausted",
    "TailCheckResult",
    "WindingResult",
    "ZetaDiskModel",
    "ZetaLabError",
    "audit_chain",
    "audit_lemma4",
    "audit_lemma5",
    "audit_lemma6",
    "audit_lemma8",
    "audit_lemma9",
    "audit_theorem",
    "borel_caratheodory_check",
    "characteristic_T",
    "counting_N",
    "derive_constants",
    "jensen_residual",
    "lemma1_check",
    "locate_a_points",
    "log_plus",
    "log_zeta_series",
    "log_zeta_tracked",
    "mangoldt",
    "max_modulus",
    "proximity_m",
    "smt_check",
    "winding_count",
    "winding_count_jittered",
    "zeta_em",
    "zeta_em_batch",
]
