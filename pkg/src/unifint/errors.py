"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: input problems -> 2, budget and
limit overruns -> 3.
"""


class UnifintError(Exception):
    """Base class for all library errors."""


class InputError(UnifintError):
    """Malformed input: bad files, bad signatures, ill-formed terms."""


class TermSyntaxError(InputError):
    def __init__(self, message, position=None, expected=None):
        self.position = position
        self.expected = expected
        where = f" at position {position}" if position is not None else ""
        want = f" (expected {expected})" if expected else ""
        super().__init__(f"{message}{where}{want}")


class UnknownSymbolError(InputError):
    pass


class ArityError(InputError):
    pass


class UnassignedVariable(UnifintError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class BudgetExceeded(UnifintError):
    """An element budget (subuniverse size, table size) was exceeded."""


class LimitExceeded(BudgetExceeded):
    """An enumeration limit (congruences, subalgebras) was exceeded."""


class NotAHomomorphism(UnifintError):
    pass


class NotSurjective(UnifintError):
    pass


class NotInVariety(UnifintError):
    """A supplied model fails an identity of the generating algebra."""


class ResidualMissing(UnifintError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionFailed(UnifintError):
    pass


class UnsupportedCase(UnifintError):
    """A case the construction deliberately does not attempt."""
