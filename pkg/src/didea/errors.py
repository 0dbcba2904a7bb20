"""Exception hierarchy shared across the package."""


class DideaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(DideaError, ValueError):
    """An argument violates an operation's precondition."""


class ParseError(DideaError):
    """An input file is malformed.

    Carries enough context (file, line number or scan id) to locate the
    offending record.
    """

    def __init__(self, message, path=None, line=None, scan=None):
        ctx = []
        if path is not None:
            ctx.append(str(path))
        if line is not None:
            ctx.append(f"line {line}")
        if scan is not None:
            ctx.append(f"scan {scan}")
        if ctx:
            message = f"{message} ({', '.join(ctx)})"
        super().__init__(message)
        self.path = path
        self.line = line
        self.scan = scan


class ConfigError(DideaError):
    """A configuration value is out of range or inconsistent."""
