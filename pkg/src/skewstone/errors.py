"""Exception types raised across the package."""


class SkewStoneError(Exception):
    pass


class MalformedTable(SkewStoneError):
    pass


class AxiomViolation(SkewStoneError):
    """Raised by :func:`validate_algebra`; ``violations`` lists
    ``(identity_name, witness_tuple)`` pairs, one per failing identity."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(f"{name}{witness}" for name, witness in self.violations)
        super().__init__(f"axiom violations: {lines}")


class NotBoolean(SkewStoneError):
    pass


class NotBelow(SkewStoneError):
    pass


class NotProper(SkewStoneError):
    pass


class FlagNotDescending(SkewStoneError):
    pass


class SizeGuard(SkewStoneError):
    pass
