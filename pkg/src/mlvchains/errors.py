"""Exception taxonomy shared by all modules.

Exceptions ending in ``Error`` signal malformed input or broken
preconditions; the remaining classes are mathematical outcomes that the
CLI maps to dedicated exit codes.
"""


class MLVError(Exception):
    """Base class for all library errors."""


class InputError(MLVError):
    """Malformed input: bad schema, bad grammar, wrong field."""


class MixedRank(InputError):
    """Two group values or cuts of different rank were combined."""


class UnrepresentableCut(MLVError):
    """The requested cut falls outside the closed six-variant family."""


class NegativeValue(InputError):
    """Residue was requested for an element outside the valuation ring."""


class UnsupportedFactorization(MLVError):
    """A residue-field polynomial falls outside the supported patterns."""


class NonMonic(InputError):
    """A monic polynomial was required."""


class NotKeyPolynomial(MLVError):
    """The proposed augmentation polynomial is not a key polynomial."""


class NonIncreasingValue(MLVError):
    """Augmentation value does not exceed the current value of the key."""


class TerminalValuation(MLVError):
    """Operation requires a residue-transcendental (non-terminal) valuation."""


class NotInUnitGroup(MLVError):
    """Value is not a grade of any homogeneous unit."""


class DegreeTooLarge(InputError):
    """Polynomial degree exceeds the bound for graded-unit computations."""


class PreconditionViolated(InputError):
    """A caller-asserted precondition failed on inspection."""


class Branched(MLVError):
    """The residual data splits; the input is not unibranched.

    ``factors`` carries the rendered residual factors seen at the split.
    """

    def __init__(self, factors, message="residual factorization splits"):
        super().__init__(message)
        self.factors = factors


class LimitSituation(MLVError):
    """Refinement count without degree growth exceeded the bound.

    Indicates a possible defect or a limit augmentation; the chain
    builder never synthesizes limit steps.
    """

    def __init__(self, message, refinements=None, trace=None):
        super().__init__(message)
        self.refinements = refinements
        self.trace = trace or []


class PrecisionExhausted(MLVError):
    """A truncated-series value could not be certified at this precision."""

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class NoRoot(MLVError):
    """Hensel lifting has no root (wrong congruence class)."""
