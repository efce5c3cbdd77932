from rest_framework.views import exception_handler
from rest_framework.response import Response
from rest_framework import status


class ReconciliationError(ValueError):
    """Base class for every domain error raised by the reconciliation apps."""


class DimensionError(ReconciliationError):
    pass


class AlistParseError(ReconciliationError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RankDeficientError(ReconciliationError):
    pass


class ConstructionError(ReconciliationError):
    pass


class PlanError(ReconciliationError):
    pass


class InfeasibleRateError(PlanError):
    """The target rate cannot be reached even when the whole budget is shortened."""


class DegenerateTargetError(PlanError):
    pass


class DegenerateLengthError(PlanError):
    pass


class DomainError(ReconciliationError):
    pass


class PreconditionError(ReconciliationError):
    pass


class BudgetError(ReconciliationError):
    pass


class ConfigError(ReconciliationError):
    def __init__(self, errors):
        self.errors = errors
        super().__init__(f"invalid experiment config: {errors}")


def custom_exception_handler(exc, context):
    # First call DRF's default exception handler
    response = exception_handler(exc, context)

    if response is not None:
        response.data["status_code"] = response.status_code
        return response

    if isinstance(exc, ReconciliationError):
        return Response(
            {"error": str(exc), "status_code": status.HTTP_400_BAD_REQUEST},
            status=status.HTTP_400_BAD_REQUEST,
        )

    # For non-DRF exceptions (e.g. Python errors)
    return Response(
        {"error": str(exc), "status_code": status.HTTP_500_INTERNAL_SERVER_ERROR},
        status=status.HTTP_500_INTERNAL_SERVER_ERROR,
    )
