"""Exception taxonomy shared across the package.

Guard-type errors (DecayGuardError, AnalyticClassError, DivergenceError)
signal that a numerical precondition was violated; the CLI maps them to
exit code 3.
"""


class CompatPairError(Exception):
    """Base class for all package errors."""


class StructureError(CompatPairError):
    """Operands are structurally incompatible (generator sets, grids, layouts)."""


class DivergenceError(CompatPairError):
    """Rewriting exceeded its step budget; the rule set is presumed non-terminating."""


class DecayGuardError(CompatPairError):
    """A symbol violates the boundary-decay invariant; transforms would alias."""


class AnalyticClassError(CompatPairError):
    """Imaginary-shift amplification exceeded the analytic-class guard."""


class LatticeError(CompatPairError):
    """Translation parameters are off the admissible grid lattice."""


class ConventionError(CompatPairError):
    """Kernel path and direct quadrature disagree; transform conventions broken."""


class DegenerateDomainError(CompatPairError):
    """The representation images span a (numerically) zero domain."""


class BoxError(CompatPairError):
    """A group-function operation leaves the sampled support box."""


class ScenarioParseError(CompatPairError):
    """Scenario text failed to parse; carries a location."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, col {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ScenarioValidationError(CompatPairError):
    """A parsed scenario failed validation; carries every error found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
