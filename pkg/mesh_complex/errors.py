"""
Error hierarchy shared by all decflow packages.

ValidationError subclasses map to CLI exit status 1, NumericalError
subclasses to exit status 2.
"""


class DecFlowError(Exception):
    """Base class; `module` records which package raised it."""

    exit_code = 2

    def __init__(self, message: str, module: str = 'decflow'):
        super().__init__(message)
        self.module = module

    def to_dict(self) -> dict:
        return {
            'error': type(self).__name__,
            'module': self.module,
            'message': str(self),
        }


class ValidationError(DecFlowError):
    exit_code = 1


class MeshError(ValidationError):
    def __init__(self, message: str, module: str = 'mesh_complex'):
        super().__init__(message, module)


class CochainMismatchError(ValidationError):
    def __init__(self, message: str, module: str = 'dec_core'):
        super().__init__(message, module)


class ConfigError(ValidationError):
    def __init__(self, message: str, field: str = '', module: str = 'cli'):
        super().__init__(message, module)
        self.field = field

    def to_dict(self) -> dict:
        report = super().to_dict()
        report['field'] = self.field
        return report


class NumericalError(DecFlowError):
    exit_code = 2


class OperatorError(NumericalError):
    def __init__(self, message: str, module: str = 'dec_core'):
        super().__init__(message, module)


class SolverError(NumericalError):
    def __init__(self, message: str, module: str = 'dec_core'):
        super().__init__(message, module)


class EigenError(NumericalError):
    def __init__(self, message: str, module: str = 'leray_pressure'):
        super().__init__(message, module)


class StepRejected(NumericalError):
    """Raised by a single step; carries the suggested smaller step."""

    def __init__(self, message: str, suggested_dt: float, module: str = 'dynamics'):
        super().__init__(message, module)
        self.suggested_dt = suggested_dt


class IntegrationError(NumericalError):
    def __init__(self, message: str, module: str = 'dynamics'):
        super().__init__(message, module)
