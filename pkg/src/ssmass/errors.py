"""Exception types shared across the package.

Everything user-facing derives from ValueError so that callers (and the
CLI) can treat "bad input" uniformly; InternalConsistencyError signals a
bug or a violated theorem, never bad input.
"""


class UnsupportedInputError(ValueError):
    """Input is syntactically fine but outside the supported domain."""


class InvalidAlgebraError(ValueError):
    """Quaternion ramification data violates a structural constraint."""


class NotSuperspecialError(ValueError):
    """A Dieudonne module fails one of the superspecial relations."""


class NonConvergenceError(ValueError):
    """A numeric series cannot certify the requested tolerance."""


class InternalConsistencyError(RuntimeError):
    """An identity that must hold mathematically failed; indicates a bug."""
