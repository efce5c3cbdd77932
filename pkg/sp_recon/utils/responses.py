# utils/responses.py
from rest_framework.response import Response


def success_response(data=None, message="OK", status=200, meta=None):
    """Envelope shared by every API view: success flag, message, payload."""
    body = {"success": True, "message": message, "data": data, "errors": None}
    if meta is not None:
        body["meta"] = meta
    return Response(body, status=status)


def error_response(errors=None, message="Request rejected", status=400):
    return Response(
        {"success": False, "message": message, "data": None, "errors": errors or {}},
        status=status,
    )
