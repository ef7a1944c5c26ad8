"""Exception hierarchy and process exit codes.

Every failure the workbench can produce falls into one of three buckets:
bad input, a violated certificate, or a blown resource budget.  The CLI
maps them onto stable exit codes so scripted callers can branch on them.
"""

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CERTIFICATE = 3
EXIT_RESOURCE = 4


class WorkbenchError(Exception):
    """Base class for all workbench failures."""


class InputError(WorkbenchError):
    """Malformed or inconsistent input (bad point, singular curve, c4 <= 1, ...)."""

    exit_code = EXIT_INPUT


class CertificateError(WorkbenchError):
    """An empirical count or cover violated the bound it was certified against."""

    exit_code = EXIT_CERTIFICATE


class DiagnosticError(CertificateError):
    """Two independent criteria disagreed (usually a tolerance set too loose)."""


class ResourceError(WorkbenchError):
    """A configured size or precision budget was exhausted before completion."""

    exit_code = EXIT_RESOURCE

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
