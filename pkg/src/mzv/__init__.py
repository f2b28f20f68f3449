"""Connected sums and the duality of (q-)multiple zeta values.

Exact index combinatorics, two-regime scalar arithmetic, truncated series
evaluation, transport-move proof traces and verification suites.
"""

from .errors import ConvergenceError, DomainError, RegimeError, TelescopingError
from .index import Index, compose, compositions, decompose, dual, enumerate_admissible, is_admissible, weight
from .scalar import DEFAULT_PRECISION, Params, Scalar, connector, f_q, q_integer
from .series import (
    EvalConfig,
    EvalResult,
    eval_connected,
    eval_generating,
    eval_mzv,
    eval_ohno_sum,
    eval_qmzv,
)
from .tail import estimate_tail
from .transport import (
    ConnectedState,
    ProofTrace,
    TransportMove,
    apply_move_A,
    apply_move_B,
    check_telescoping,
    prove_duality,
    verify_trace_numeric,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DomainError", "RegimeError", "TelescopingError",
    "Index", "compose", "compositions", "decompose", "dual", "enumerate_admissible",
    "is_admissible", "weight",
    "DEFAULT_PRECISION", "Params", "Scalar", "connector", "f_q", "q_integer",
    "EvalConfig", "EvalResult", "eval_connected", "eval_generating", "eval_mzv",
    "eval_ohno_sum", "eval_qmzv", "estimate_tail",
    "ConnectedState", "ProofTrace", "TransportMove", "apply_move_A", "apply_move_B",
    "check_telescoping", "prove_duality", "verify_trace_numeric",
]
