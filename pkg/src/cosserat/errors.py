"""Exception types raised by the toolkit."""


class CosseratError(Exception):
    """Base class for all toolkit errors."""


class InvalidInput(CosseratError, ValueError):
    """Malformed or non-finite input data."""


class InvalidMass(InvalidInput):
    """A mass matrix entry is not strictly positive."""


class InvalidDirection(InvalidInput):
    """A propagation direction is not a unit vector."""


class MissingLengthScale(CosseratError, ValueError):
    """A conversion into the dislocation format needs a characteristic length."""


class OutOfRange(CosseratError, ValueError):
    """A physical parameter lies outside its admissible range."""


class Unavailable(CosseratError, ValueError):
    """A quantity is undefined for the given (e.g. infinite) parameters."""


class UnsupportedNotation(CosseratError, ValueError):
    """The operation is not defined for the given parameter notation."""


class EvanescentBranch(CosseratError, ValueError):
    """The requested wave branch has a non-positive squared frequency."""


class MissingDynamicData(InvalidInput):
    """Density or rotational inertia is required but absent."""


class SchemaError(InvalidInput):
    """A material document is structurally malformed."""
