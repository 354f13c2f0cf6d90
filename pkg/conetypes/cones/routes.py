"""JSON endpoints for the cone-type table and classification."""
from __future__ import annotations

from flask import current_app, request

from ..errors import ConeTypesError
from ..logging_service import log_manager
from ..responses import domain_error, json_error, json_response, request_element, request_genus
from . import bp
from .services import build_cone_table, classify, classify_by_oracle, table_rows


@bp.route("/table")
def cone_table():
    """Representatives in table order with their successor rows."""

    try:
        cones = build_cone_table(
            request_genus(), current_app.config["CONETYPE_EXPERIMENTAL_CASCADE"]
        )
    except ConeTypesError as exc:
        return domain_error(exc, component="ConeTypes", action="table")

    rows = table_rows(cones)
    return json_response({"success": True, "count": cones.count, "types": rows})


@bp.route("/classify")
def classify_element():
    """Cone type of an element by the automaton or by fingerprints."""

    method = request.args.get("method", "automaton")
    if method not in {"automaton", "oracle"}:
        log_manager.record(
            component="ConeTypes",
            action="classify",
            level="warn",
            title="Unknown classification method",
            user_summary=f"Method {method!r} is not available.",
            technical_details="cones.classify accepts method=automaton or method=oracle.",
        )
        return json_error("Choose method=automaton or method=oracle.")

    try:
        cones = build_cone_table(
            request_genus(), current_app.config["CONETYPE_EXPERIMENTAL_CASCADE"]
        )
        element = request_element("word", cones.relator_table)
        if method == "oracle":
            depth = request.args.get("depth", type=int) or current_app.config[
                "CONETYPE_FINGERPRINT_DEPTH"
            ]
            cone_type = classify_by_oracle(element, cones, depth)
        else:
            cone_type = classify(element, cones)
    except ConeTypesError as exc:
        return domain_error(exc, component="ConeTypes", action="classify")

    log_manager.record(
        component="ConeTypes",
        action="classify",
        level="info",
        title="Element classified",
        user_summary=f"The element has cone type {cone_type}.",
        technical_details=f"cones.classify used the {method} classifier.",
    )
    return json_response(
        {
            "success": True,
            "id": cone_type,
            "representative": cones.label(cone_type) if cone_type else "e",
            "method": method,
        }
    )
