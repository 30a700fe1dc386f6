from typing import List, Optional


class GradedKitError(Exception):
    pass


class SpecError(GradedKitError, ValueError):
    def __init__(self, message: str, errors: Optional[List[str]] = None):
        self.errors = list(errors or [])
        if self.errors:
            message = message + ": " + "; ".join(self.errors[:8])
            if len(self.errors) > 8:
                message += f" (+{len(self.errors) - 8} more)"
        super().__init__(message)


class CompositionError(GradedKitError, ValueError):
    pass


class TypingError(GradedKitError, TypeError):
    pass


class SizeBoundError(GradedKitError, RuntimeError):
    pass


class OffGridError(GradedKitError, LookupError):
    pass


class PreconditionError(GradedKitError, RuntimeError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ProgramSyntaxError(GradedKitError, ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
