from enum import Enum


class Verdict(Enum):
    """Three-valued outcome of a bounded decision procedure."""

    EQUAL = "equal"
    UNEQUAL = "unequal"
    UNDECIDED = "undecided"

    def __bool__(self) -> bool:
        return self is Verdict.EQUAL


def tristate(value) -> str:
    """Render a predicate value where None stands for undecided."""
    if value is None:
        return "undecided"
    return "true" if value else "false"
