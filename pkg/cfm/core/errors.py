"""
Structured errors for the cfm package
Every error carries a stable code and a machine-readable detail payload
"""
from typing import Any, Dict, Optional


class CFMError(Exception):
    """Base error with a stable code and a JSON-friendly detail dict"""

    code: str = "cfm_error"

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used by the CLI and the HTTP layer"""
        return {"code": self.code, "message": self.message, "detail": self.detail}


class DimensionError(CFMError):
    code = "dimension_mismatch"

    def __init__(self, message: str, expected: Any, got: Any):
        super().__init__(message, {"expected": expected, "got": got})


class ParameterError(CFMError):
    code = "invalid_parameter"


class NumericalError(CFMError):
    code = "numerical_failure"


class DivergenceError(CFMError):
    """Raised by solvers when the objective blows up; keeps the partial trace"""

    code = "divergence"

    def __init__(self, message: str, trace: Any = None, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message, detail)
        self.trace = trace


class ModelError(CFMError):
    code = "model_error"


class CertificateError(CFMError):
    code = "certificate_error"


class ConfigError(CFMError):
    code = "config_error"


class ProblemFileError(CFMError):
    code = "problem_file_error"
