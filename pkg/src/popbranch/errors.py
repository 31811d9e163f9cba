"""Exception types raised across the package."""


class PopBranchError(Exception):
    """Base class for every error raised by popbranch."""


class InstanceError(PopBranchError):
    """Input could not be turned into a valid instance."""


class InstanceSyntaxError(InstanceError):
    """The document is not well-formed JSON or misses required keys."""


class SemanticError(InstanceError):
    """The document parses but violates an instance invariant."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class IdClash(InstanceError):
    pass


class WrongHead(PopBranchError):
    pass


class Unreachable(PopBranchError):
    """Some node cannot be reached from the root."""


class NotWeakRanking(PopBranchError):
    pass


class NotStrictRanking(PopBranchError):
    pass


class TooLarge(PopBranchError):
    pass


class BudgetExceeded(PopBranchError):
    pass


class InfeasiblePoint(PopBranchError):
    """A fractional vector is not in the arborescence polytope."""


class SupportTooLarge(BudgetExceeded):
    pass


class BadParams(PopBranchError):
    pass


class BadFormula(BadParams):
    pass


class BadInput(BadParams):
    pass


class Unsatisfied(PopBranchError):
    pass


class NotAPath(PopBranchError):
    pass
