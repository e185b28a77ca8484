class SolverError(RuntimeError):
    """A solve hit a hard failure (non-finite values, broken invariant)."""


class ConvergenceError(SolverError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CFLViolation(ValueError):
    def __init__(self, verdict):
        super().__init__(f"explicit step violates the CFL bound: {verdict.message()}")
        self.verdict = verdict
