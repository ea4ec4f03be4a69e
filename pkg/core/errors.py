"""
Error types
Every failure raised by the library derives from PAGraphError
"""
from typing import Optional


class PAGraphError(Exception):
    """Base class for all library errors"""

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag

    def to_dict(self) -> dict:
        return {"success": False, "error": str(self), "flag": self.flag}


class DomainError(PAGraphError, ValueError):
    """A parameter lies outside the domain where the model is defined"""


class InputFormatError(DomainError):
    """Malformed degree / increment / weights file"""

    def __init__(self, message: str, line_number: Optional[int] = None, flag: Optional[str] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message, flag=flag)
        self.line_number = line_number


class ConvergenceError(PAGraphError, RuntimeError):
    """The mean-weight fixed point could not be solved"""


class GenerationError(PAGraphError, RuntimeError):
    """Graph growth cannot proceed"""


class CalibrationError(PAGraphError, ValueError):
    """The empirical data cannot be fitted with the requested options"""
