"""Exception types shared across the engine and service layers."""


class GameError(Exception):
    """Base class for all engine errors."""


class SchemaError(GameError):
    """A scenario document is structurally invalid (missing/mistyped field)."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class ValidationError(GameError):
    """A scenario document is semantically invalid (cycles, bounds, roster)."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class UnknownViewer(GameError):
    pass


class StaleOrders(GameError):
    pass


class MissingOrders(GameError):
    def __init__(self, teams):
        self.teams = sorted(teams)
        super().__init__(f"missing orders for: {', '.join(self.teams)}")


class InvalidTarget(GameError):
    pass


class NotAState(GameError):
    pass


class InsufficientHardPower(GameError):
    pass


class WrongAllegiance(GameError):
    pass


class AlreadyControlled(GameError):
    pass


class PrerequisitesUnmet(GameError):
    pass


class PauseNotAnswered(GameError):
    pass


class UnknownAgent(GameError):
    pass


class SequenceGap(GameError):
    pass


class DigestMismatch(GameError):
    pass


class CorruptEvent(GameError):
    def __init__(self, seq: int, message: str = "corrupt event"):
        self.seq = seq
        super().__init__(f"event {seq}: {message}")


class OutcomeAlreadySet(GameError):
    pass
