"""
Error hierarchy for cantor-forge
Every error knows the process exit code the command line reports for it
"""

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_NON_CONVERGENCE = 4
EXIT_INVARIANT = 5


class CantorError(Exception):
    """Base class for every failure the library reports on purpose"""
    exit_code = EXIT_INVARIANT

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_payload(self):
        payload = {
            'status': 'error',
            'type': type(self).__name__,
            'message': self.message,
            'exit_code': self.exit_code,
        }
        for key, value in self.details.items():
            if isinstance(value, (str, int, float, bool)) or value is None:
                payload[key] = value
        return payload


class InputError(CantorError):
    exit_code = EXIT_INPUT


class SpecSyntaxError(InputError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column)
        self.line = line
        self.column = column


class SpecValidationError(InputError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}", field=field)
        self.field = field


class OverlapError(InputError):
    pass


class DegenerateAttractorError(InputError):
    pass


class DepthUnavailableError(InputError):
    pass


class UndefinedRatioError(InputError):
    pass


class CertificateError(InputError):
    pass


class UndefinedDistanceError(InputError):
    pass


class ResolutionError(InputError):
    pass


class MapValidationError(InputError):
    pass


class BudgetError(CantorError):
    exit_code = EXIT_BUDGET

    def __init__(self, message, partial=None, **details):
        super().__init__(message, **details)
        self.partial = partial


class NonConvergenceError(CantorError):
    exit_code = EXIT_NON_CONVERGENCE

    def __init__(self, message, last=None, history=(), **details):
        super().__init__(message, **details)
        self.last = last
        self.history = tuple(history)


class InvariantError(CantorError):
    exit_code = EXIT_INVARIANT
