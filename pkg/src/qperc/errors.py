class QPercError(Exception):
    """Base class for errors raised by qperc."""


class InvalidArgumentError(QPercError, ValueError):
    """An argument violates an operation's precondition."""


class ResourceLimitError(QPercError, RuntimeError):
    """A request exceeds the simulator's memory/size budget."""
