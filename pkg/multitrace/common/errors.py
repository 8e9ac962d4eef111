"""
Exception hierarchy.

Input errors derive from ValueError, numerical failures from RuntimeError.
The CLI maps the first family to exit code 1 and the second to exit code 2.
"""


class MultitraceError(Exception):
    """Base class for every error raised by the library"""


class InputError(MultitraceError, ValueError):
    """Malformed or inconsistent user input"""


class NumericalError(MultitraceError, RuntimeError):
    """A numerical computation did not produce a trustworthy answer"""


class ParseError(InputError):
    """System source does not conform to the input grammar"""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DimensionMismatch(InputError):
    pass


class VariableCollision(InputError):
    pass


class DimsOutOfRange(InputError):
    pass


class SchemaError(InputError):
    """Serialized data does not match the documented schema or the system"""


class NoConvergence(NumericalError):
    pass


class SingularJacobian(NumericalError):
    pass


class GenericityFailure(NumericalError):
    """Too many paths failed; the caller should reseed"""


class MoveFailure(NumericalError):
    def __init__(self, index: int, status: str) -> None:
        super().__init__(f"point {index} failed to track ({status})")
        self.index = index


class AmbiguousMatch(NumericalError):
    pass


class RankAmbiguous(NumericalError):
    pass


class ProductCase(NumericalError):
    """Surface is a product of curves; decompose the factors instead"""


class MergeFailure(NumericalError):
    pass


class FewerThanThreeSamples(InputError):
    pass
