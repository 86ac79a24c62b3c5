"""Exception hierarchy shared by the library and the command line."""


class L2TTError(Exception):
    """Base class for every error raised by l2tt."""


class MalformedInputError(L2TTError, ValueError):
    """A value was built from letters, steps or names that make no sense."""


class StructuralError(L2TTError):
    """A graph, morphism or filtration violates a structural requirement."""


class ConventionError(L2TTError):
    """The morphism does not fix its basepoint with a trivial connecting path.

    Pass to a power first (see :func:`l2tt.morphism.vertex_fixing_power`).
    """


class ConvergenceError(L2TTError):
    """An iterative spectral computation did not reach its tolerance."""


class ParseError(L2TTError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
