"""Exception types raised by the behavioral models."""


class ProtocolError(RuntimeError):
    """A hardware model was driven out of its legal operating sequence."""


class CrossbarViolation(ProtocolError):
    """A crossbar was over-subscribed within a single clock cycle."""


class CapacityError(ProtocolError):
    """A memory was asked to hold more bits than it was built for."""


class UnsupportedModeError(ProtocolError):
    """The operation does not exist for the configured memory mode."""
