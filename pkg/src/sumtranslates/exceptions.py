"""Exception types shared across the package."""

from __future__ import annotations


class SumTranslatesError(Exception):
    """Base class for errors raised by this package."""


class KernelError(SumTranslatesError, ValueError):
    """Invalid kernel definition or evaluation request."""


class FieldError(SumTranslatesError, ValueError):
    """Invalid field definition, or a field unfit for the requested problem."""


class AdmissibilityError(SumTranslatesError):
    """The configuration does not decay numerically; no finite truncation works."""


class NotInRegularitySetError(SumTranslatesError):
    """A node configuration with at least one infinite interval supremum.

    ``index`` is the offending interval (0-based, counting from the leftmost).
    """

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class HypothesesError(SumTranslatesError):
    """The problem violates the hypotheses required by the solver."""


class SolverFailedError(SumTranslatesError):
    """All starts and the homotopy fallback stagnated.

    Carries the best attempt in ``result`` (``converged`` is False there).
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class DescriptorError(SumTranslatesError, ValueError):
    """A JSON problem descriptor failed validation; ``path`` names the spot."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
