"""JSON endpoints for normal forms, distances and geodesic classes."""
from __future__ import annotations

from ..errors import ConeTypesError
from ..logging_service import log_manager
from ..responses import domain_error, json_response, request_element, request_table
from . import bp
from .services import distance, geodesic_class, subwords_by_length


@bp.route("/alphabet")
def alphabet():
    """Describe the generators, their order and the relator."""

    try:
        table = request_table()
    except ConeTypesError as exc:
        return domain_error(exc, component="Group", action="alphabet")

    letters = table.alphabet.generators
    return json_response(
        {
            "success": True,
            "genus": table.genus.g,
            "generators": [generator.letter for generator in letters],
            "inverses": [table.alphabet.letter(index) for index in table.inverse],
            "drawing_order": [table.alphabet.letter(index) for index in table.alphabet.drawing_order],
            "relator": table.format(table.relator),
            "subwords_by_length": {str(k): v for k, v in subwords_by_length(table).items()},
        }
    )


@bp.route("/normalize")
def normalize():
    """Return the shortlex-least geodesic word of an element."""

    try:
        table = request_table()
        element = request_element("word", table)
    except ConeTypesError as exc:
        return domain_error(exc, component="Group", action="normalize")

    log_manager.record(
        component="Group",
        action="normalize",
        level="info",
        title="Word normalized",
        user_summary=f"Normal form has length {element.length}.",
        technical_details="group.normalize reduced the word with the Dehn rewrite and twin closure.",
    )
    return json_response(
        {"success": True, "normal_form": table.format(element.word), "length": element.length}
    )


@bp.route("/distance")
def word_distance():
    """Word-metric distance between ``x`` (default identity) and ``y``."""

    try:
        table = request_table()
        x = request_element("x", table)
        y = request_element("y", table)
    except ConeTypesError as exc:
        return domain_error(exc, component="Group", action="distance")

    return json_response({"success": True, "distance": distance(x, y, table)})


@bp.route("/geodesics")
def geodesics():
    """List every geodesic word of an element."""

    try:
        table = request_table()
        element = request_element("word", table)
        words = sorted(geodesic_class(element.word, table))
    except ConeTypesError as exc:
        return domain_error(exc, component="Group", action="geodesics")

    return json_response(
        {
            "success": True,
            "normal_form": table.format(element.word),
            "count": len(words),
            "geodesics": [table.format(word) for word in words],
        }
    )
