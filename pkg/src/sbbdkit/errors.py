"""Exception hierarchy shared by all modules."""


class DesignError(ValueError):
    """Base class for every error raised by sbbdkit."""


class StructureError(DesignError):
    """Input is malformed or violates a precondition (shape, range, partition)."""


class DegenerateError(StructureError):
    """Input is well formed but too small for the requested quantity to exist."""


class VerificationError(DesignError):
    """A verifier found that the input does not satisfy the claimed axioms.

    ``violation`` is a dict describing the first offending item in canonical
    order, suitable for JSON output.
    """

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation or {}


class SearchFailure(DesignError):
    """A bounded search (spanning repair, block partition) found nothing.

    ``certificate`` carries the best partial result seen.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate or {}


class ConstructionError(RuntimeError):
    """A construction produced parameters that contradict its own theory.

    This signals a bug, never a property of the inputs.
    """
