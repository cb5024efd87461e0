from typing import Optional

from pydantic import ValidationError


class FeketeError(RuntimeError):
    """Base error; `code` is the machine-readable name used in error JSON."""

    code = "fekete-error"

    def __init__(self, detail: str, field: Optional[str] = None):
        super().__init__(detail)
        self.detail = detail
        self.field = field

    def to_dict(self) -> dict:
        return {"error": self.code, "field": self.field, "detail": self.detail}


class ConfigError(FeketeError):
    code = "invalid-config"


class DimensionError(FeketeError):
    code = "invalid-dimension"


class InvalidWeightError(FeketeError):
    code = "invalid-weight"


class MeshTooSmallError(FeketeError):
    code = "mesh-too-small"


class SingularConfigurationError(FeketeError):
    code = "singular-configuration"


class NotDeterminingError(FeketeError):
    code = "measure-not-determining"


class NotUnisolventError(FeketeError):
    code = "not-unisolvent"


class BudgetExceededError(FeketeError):
    code = "budget-exceeded"


class OverlapError(FeketeError):
    code = "component-overlap"


def validation_error_body(exc: ValidationError) -> dict:
    """Error JSON for a config that failed schema validation; `field` is the dotted path of the first error."""
    first = exc.errors()[0]
    field = ".".join(str(part) for part in first.get("loc", ())) or None
    return {"error": "invalid-config", "field": field, "detail": first.get("msg", str(exc))}
