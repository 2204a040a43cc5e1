"""
Error types for the semigroup toolkit.

Every error carries the process exit code the CLI reports for it.
"""

from typing import Optional


class SemigroupError(Exception):
    """Base error; exit_code is what main.py exits with"""

    exit_code: int = 1
    label: str = "error"

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or ""


class InputError(SemigroupError):
    """Malformed input or violated precondition"""

    exit_code = 2
    label = "input error"


class GuardError(SemigroupError):
    """Mathematical guard refused the analysis"""

    exit_code = 3
    label = "guard failure"


class NotInverseError(GuardError):
    label = "not an inverse semigroup"


class CharacteristicError(GuardError):
    label = "characteristic guard"


class ResourceCapError(SemigroupError):
    """Enumeration grew past the element cap or the product table memory budget"""

    exit_code = 4
    label = "resource cap"


class UnsupportedGroupError(InputError):
    """Maximal subgroup without built-in irreducibles and none supplied"""

    label = "unsupported maximal subgroup"
