"""JSON response helpers shared by the blueprint routes."""
from __future__ import annotations

from flask import current_app, jsonify, request

from .errors import ConeTypesError
from .group.services import GroupElement, RelatorTable, build_relator_table, parse_element
from .logging_service import log_manager


def json_response(payload: dict[str, object], *, status: int = 200):
    """Return a JSON response with a consistent structure."""

    response = jsonify(payload)
    response.status_code = status
    return response


def json_error(message: str, *, status: int = 400):
    """Return a JSON error payload with the supplied status."""

    return json_response({"success": False, "message": message}, status=status)


def domain_error(exc: ConeTypesError, *, component: str, action: str):
    """Log a failed request and answer with the status the error maps to."""

    level = "error" if exc.http_status >= 413 else "warn"
    log_manager.record_failure(
        component, action, exc, level=level, title=f"{component} {action} rejected"
    )
    return json_error(str(exc), status=exc.http_status)


def request_genus() -> int:
    return request.args.get("genus", type=int) or current_app.config["CONETYPE_GENUS"]


def request_table() -> RelatorTable:
    return build_relator_table(request_genus())


def request_element(name: str, table: RelatorTable) -> GroupElement:
    return parse_element(request.args.get(name, ""), table)
