"""
gammaq - Error Types
Every error that can reach the command line carries its exit code and a
machine-readable reason.
"""


class GammaqError(Exception):
    exit_code = 3
    reason = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        out = {"reason": self.reason, "message": self.message}
        out.update(self.details)
        return out


# ─────────────────────────────────────────────
# VALUE-LEVEL ERRORS
# ─────────────────────────────────────────────
class ArityError(GammaqError):
    reason = "arity_mismatch"


class ShapeMismatchError(GammaqError):
    reason = "shape_mismatch"


class NonInvertibleError(GammaqError):
    reason = "non_invertible"


class WindowOverflowError(GammaqError):
    reason = "window_overflow"


class NonlinearTermError(GammaqError):
    reason = "nonlinear_term"


class AxiomError(GammaqError):
    """Input structure violates an axiom a constructor requires."""
    exit_code = 2
    reason = "axiom_violated"


# ─────────────────────────────────────────────
# PIPELINE ERRORS
# ─────────────────────────────────────────────
class SchemaError(GammaqError):
    reason = "schema"

    def __init__(self, message, pointer="", **details):
        super().__init__(message, pointer=pointer, **details)
        self.pointer = pointer


class DefectError(GammaqError):
    exit_code = 2
    reason = "defect"


class SolverCapError(GammaqError):
    exit_code = 4
    reason = "solver_inconsistent"


class EquivalenceError(GammaqError):
    exit_code = 5
    reason = "equivalence_not_found"


class InternalCheckError(GammaqError):
    exit_code = 70
    reason = "internal_check_failed"
