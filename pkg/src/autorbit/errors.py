"""Exception types shared across the package."""


class AutorbitError(Exception):
    """Base class for all package-specific errors."""


class MalformedCycleError(AutorbitError, ValueError):
    """A cycle list repeats a point or is otherwise not a set of disjoint cycles."""


class PointRangeError(AutorbitError, ValueError):
    """A point lies outside 1..degree."""


class DegreeMismatchError(AutorbitError, ValueError):
    """Two permutations (or a permutation and a group) have different degrees."""


class NotBijectionError(AutorbitError, ValueError):
    """An image sequence is not a bijection of 1..degree."""


class CapacityError(AutorbitError, RuntimeError):
    """A group is too large for an exhaustive operation.

    The message always names the offending order.
    """

    def __init__(self, order, cap, what="element table"):
        self.order = order
        self.cap = cap
        super().__init__(f"group order {order} exceeds {what} cap {cap}")


class NormalityError(AutorbitError, ValueError):
    """A quotient was requested by a subgroup that is not normal."""


class DivisibilityError(AutorbitError, ValueError):
    """A Sylow subgroup was requested for a prime not dividing the group order."""


class NormalizationError(AutorbitError, ValueError):
    """A permutation does not normalize the group it was supposed to act on."""


class UnknownGroupNameError(AutorbitError, ValueError):
    """A catalog name is not part of the catalog grammar."""


class GroupFileError(AutorbitError, ValueError):
    """A group file failed to parse; carries a line number when available."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
