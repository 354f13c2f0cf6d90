"""JSON endpoints for the successor matrix and its spectrum."""
from __future__ import annotations

from flask import Response, current_app, request

from ..errors import ConeTypesError
from ..logging_service import log_manager
from ..responses import domain_error, json_error, json_response, request_genus
from . import bp
from .services import (
    cached_matrix,
    format_blocks,
    growth_counts,
    perron as perron_root,
    primitivity_certificate,
    require_primitive,
    to_csv,
    verify_against_printed,
)


def _matrix():
    return cached_matrix(request_genus(), current_app.config["CONETYPE_EXPERIMENTAL_CASCADE"])


@bp.route("/")
def matrix():
    """Matrix as nested arrays, CSV or the printed block layout."""

    output_format = request.args.get("format", "json")
    try:
        built = _matrix()
    except ConeTypesError as exc:
        return domain_error(exc, component="ConeMatrix", action="matrix")

    if output_format == "csv":
        return Response(to_csv(built), mimetype="text/csv")
    if output_format == "paper-blocks":
        return Response(format_blocks(built), mimetype="text/plain")
    if output_format != "json":
        log_manager.record(
            component="ConeMatrix",
            action="matrix",
            level="warn",
            title="Unknown matrix format",
            user_summary=f"Format {output_format!r} is not available.",
            technical_details="matrix.matrix accepts json, csv or paper-blocks.",
        )
        return json_error("Choose format=json, csv or paper-blocks.")
    return json_response(
        {
            "success": True,
            "order": built.order,
            "class_sizes": list(built.class_sizes),
            "entries": built.to_nested(),
        }
    )


@bp.route("/verify")
def verify():
    """Diff against the printed blocks; 422 when a difference is not a known erratum."""

    try:
        report = verify_against_printed(cached_matrix(2))
    except ConeTypesError as exc:
        return domain_error(exc, component="ConeMatrix", action="verify")

    log_manager.record(
        component="ConeMatrix",
        action="verify",
        level="info" if report.passed else "error",
        title="Matrix compared with printed blocks",
        user_summary=f"{len(report.diff)} differences, {len(report.unexplained)} unexplained.",
        technical_details="matrix.verify parsed the paper-blocks fixture and the errata list.",
    )
    payload = {"success": report.passed, **report.serialize()}
    return json_response(payload, status=200 if report.passed else 422)


@bp.route("/primitivity")
def primitivity():
    try:
        certificate = primitivity_certificate(_matrix())
    except ConeTypesError as exc:
        return domain_error(exc, component="ConeMatrix", action="primitivity")
    return json_response({"success": certificate.passed, **certificate.serialize()})


@bp.route("/perron")
def perron():
    """Perron root with left and right eigenvectors."""

    config = current_app.config
    try:
        built = _matrix()
        require_primitive(primitivity_certificate(built))
        result = perron_root(
            built,
            tol=request.args.get("tol", type=float) or config["CONETYPE_TOLERANCE"],
            max_iter=config["CONETYPE_MAX_ITER"],
            seed=request.args.get("seed", config["CONETYPE_SEED"], type=int),
        )
    except ConeTypesError as exc:
        return domain_error(exc, component="ConeMatrix", action="perron")
    return json_response({"success": True, **result.serialize()})


@bp.route("/growth")
def growth():
    """Automaton sphere counts up to ``n``."""

    try:
        rows = growth_counts(_matrix(), request.args.get("n", 7, type=int))
    except ConeTypesError as exc:
        return domain_error(exc, component="ConeMatrix", action="growth")
    return json_response(
        {
            "success": True,
            "rows": [{"n": row.n, "count": row.count, "vector": list(row.vector)} for row in rows],
        }
    )
