"""JSON endpoints over the brute-force Cayley graph oracle."""
from __future__ import annotations

from flask import Response, current_app, request

from ..errors import ConeTypesError
from ..logging_service import log_manager
from ..responses import domain_error, json_response, request_element, request_table
from . import bp
from .services import ball_to_dot, build_ball, fingerprint, quadruple_occurrences, sphere_sizes


def _radius() -> int:
    return request.args.get("radius", type=int) or current_app.config["CONETYPE_RADIUS"]


@bp.route("/spheres")
def spheres():
    """Element sphere sizes out to the requested radius."""

    try:
        table = request_table()
        radius = _radius()
        sizes = sphere_sizes(radius, table, max_elements=current_app.config["CONETYPE_MAX_BALL"])
    except ConeTypesError as exc:
        return domain_error(exc, component="Oracle", action="spheres")

    log_manager.record(
        component="Oracle",
        action="spheres",
        level="info",
        title="Sphere sizes computed",
        user_summary=f"Counted {sum(sizes)} elements within radius {radius}.",
        technical_details="oracle.spheres ran the streaming breadth-first search.",
    )
    return json_response({"success": True, "radius": radius, "sphere_sizes": sizes})


@bp.route("/ball.dot")
def ball_dot():
    """Geodesic DAG of a small ball in Graphviz DOT syntax."""

    try:
        table = request_table()
        ball = build_ball(
            request.args.get("radius", 2, type=int),
            table,
            max_elements=current_app.config["CONETYPE_MAX_BALL"],
        )
    except ConeTypesError as exc:
        return domain_error(exc, component="Oracle", action="ball")

    return Response(ball_to_dot(ball), mimetype="text/vnd.graphviz")


@bp.route("/fingerprint")
def element_fingerprint():
    """Members of the cone type of an element up to the requested depth."""

    try:
        table = request_table()
        element = request_element("word", table)
        depth = request.args.get("depth", type=int) or current_app.config[
            "CONETYPE_FINGERPRINT_DEPTH"
        ]
        found = fingerprint(element, depth, table)
    except ConeTypesError as exc:
        return domain_error(exc, component="Oracle", action="fingerprint")

    return json_response(
        {
            "success": True,
            "depth": found.depth,
            "size": len(found),
            "members": sorted((table.format(word) for word in found.members), key=lambda w: (len(w), w)),
        }
    )


@bp.route("/quadruples")
def quadruples():
    """Half-relator windows over every geodesic word of an element."""

    try:
        table = request_table()
        element = request_element("word", table)
        occurrences = sorted(quadruple_occurrences(element, table))
    except ConeTypesError as exc:
        return domain_error(exc, component="Oracle", action="quadruples")

    return json_response(
        {
            "success": True,
            "occurrences": [
                {"word": table.format(word), "position": position, "quadruple": table.format(window)}
                for word, position, window in occurrences
            ],
        }
    )
