"""Exception hierarchy shared by every module."""


class LFError(Exception):
    """Base class for all errors raised by :mod:`sflattice`."""

    code = "error"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


class DuplicatePoint(LFError, ValueError):
    code = "duplicate_point"


class BudgetExceeded(LFError):
    code = "budget_exceeded"


class NotFoundInWindow(LFError):
    """A search over the current window came up empty.

    ``stage`` names the step that failed so callers know what to enlarge.
    """

    code = "not_found_in_window"

    def __init__(self, message, stage=None, window=None):
        super().__init__(message)
        self.stage = stage
        self.window = window

    def to_json(self):
        doc = super().to_json()
        doc["stage"] = self.stage
        doc["window"] = self.window
        return doc


class NoSparePoint(LFError):
    code = "no_spare_point"


class JoinNotFinitelyDescribable(LFError):
    code = "join_not_finitely_describable"


class ParseError(LFError, ValueError):
    code = "parse_error"

    def __init__(self, message, location=None):
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location

    def to_json(self):
        doc = super().to_json()
        doc["location"] = self.location
        return doc


class StepMismatch(LFError):
    code = "step_mismatch"

    def __init__(self, index, expected, got):
        super().__init__(f"step {index}: expected {expected!r}, got {got!r}")
        self.index = index
        self.expected = expected
        self.got = got

    def to_json(self):
        doc = super().to_json()
        doc["index"] = self.index
        return doc
