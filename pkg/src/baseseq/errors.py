"""Exception types shared across the package."""


class MalformedInputError(ValueError):
    """Input data is structurally invalid (bad characters, length mismatch, mixed kinds)."""


class ApplicabilityError(ValueError):
    """A transformation was applied to a quad it is not defined on."""


class PreconditionError(ValueError):
    """An operation was called outside its stated domain."""


class ResourceLimitError(RuntimeError):
    """A configured resource cap was exceeded."""


class OrbitCapExceeded(ResourceLimitError):
    """Orbit closure grew past the configured cap.

    Carries the partial orbit computed so far in ``partial``.
    """

    def __init__(self, cap, partial):
        super().__init__(f"orbit exceeded cap of {cap} members")
        self.cap = cap
        self.partial = partial


class ResumeError(RuntimeError):
    """A checkpoint does not match the search configuration it is resumed with."""


class SearchInterrupted(RuntimeError):
    """Search stopped at a task boundary after writing a checkpoint (test hook)."""
