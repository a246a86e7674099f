"""Exception hierarchy shared by every netpath module."""


class NetpathError(Exception):
    """Base class for all errors raised by netpath."""


class MissingData(NetpathError):
    pass


class InvalidVariance(NetpathError):
    pass


class InvalidComparison(NetpathError):
    pass


class DisconnectedNetwork(NetpathError):
    def __init__(self, components):
        self.components = [sorted(c) for c in components]
        names = "; ".join("{" + ", ".join(c) + "}" for c in self.components)
        super().__init__(f"network is disconnected, components: {names}")


class UnknownTreatment(NetpathError):
    pass


class NumericalFailure(NetpathError):
    pass


class PathExplosion(NetpathError):
    def __init__(self, reached, cap):
        self.reached = reached
        self.cap = cap
        super().__init__(f"path enumeration reached {reached} paths, exceeding cap {cap}")


class InvalidTolerance(NetpathError):
    pass


class InsufficientPaths(NetpathError):
    pass


class NoDirectEvidence(NetpathError):
    pass


class NoIndirectEvidence(NetpathError):
    pass


class InvalidLoop(NetpathError):
    pass


class DomainError(NetpathError):
    pass


class ParseError(NetpathError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column!r}"
            where += ": "
        super().__init__(where + message)
