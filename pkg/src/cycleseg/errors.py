"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input data violates a documented invariant (bad record, bad config)."""


class ParseError(ValidationError):
    """A corpus or vector file line could not be parsed."""

    def __init__(self, path: str, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no


class ContractError(ValueError):
    """Caller passed structurally inconsistent arguments (mismatched ids, lengths)."""


class DegenerateSpaceError(ValueError):
    """A probability space is empty or has zero entropy where a positive one is required."""
