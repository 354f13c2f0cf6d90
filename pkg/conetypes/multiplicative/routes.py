"""JSON endpoints for matrix systems and multiplicative functions."""
from __future__ import annotations

from fractions import Fraction

from flask import current_app, request

from ..cones.services import build_cone_table
from ..errors import ConeTypesError, PreconditionError
from ..group.services import parse_element
from ..logging_service import log_manager
from ..matrix.services import cached_matrix
from ..responses import domain_error, json_error, json_response
from . import bp
from .services import (
    EVALUATORS,
    EvaluationContext,
    admissible_pairs,
    base_cone_type,
    constant_system,
    elementary_function,
    format_vector,
    load_system,
    random_system,
    vectors_agree,
)


@bp.route("/pairs")
def pairs():
    """Admissible ``(c', c)`` pairs with the generator realizing each."""

    cones = build_cone_table(2)
    try:
        found = admissible_pairs(cached_matrix(2), cones)
    except ConeTypesError as exc:
        return domain_error(exc, component="Multiplicative", action="pairs")

    alphabet = cones.relator_table.alphabet
    return json_response(
        {
            "success": True,
            "count": len(found),
            "pairs": [
                {"to": target, "from": source, "generator": alphabet.letter(letter)}
                for (target, source), letter in sorted(found.items())
            ],
        }
    )


@bp.route("/evaluate", methods=["POST"])
def evaluate():
    """Evaluate a multiplicative function at ``z`` with one or all evaluators."""

    payload = request.get_json(silent=True)
    if not isinstance(payload, dict):
        return json_error("Send a JSON object with system, z and optional x, y, vector.")

    method = payload.get("method", "all")
    if method != "all" and method not in EVALUATORS:
        log_manager.record(
            component="Multiplicative",
            action="evaluate",
            level="warn",
            title="Unknown evaluator",
            user_summary=f"Evaluator {method!r} is not available.",
            technical_details="mult.evaluate accepts all, recursive, geodesic or matrix.",
        )
        return json_error("Choose method all, recursive, geodesic or matrix.")

    cones = build_cone_table(2)
    table = cones.relator_table
    matrix = cached_matrix(2)
    exact = bool(payload.get("exact", current_app.config["CONETYPE_EXACT"]))
    try:
        source = payload.get("system", "ones")
        if source == "ones":
            system = constant_system(matrix, cones, exact=exact)
        elif source == "random":
            system = random_system(
                matrix,
                cones,
                payload.get("dims", 1),
                seed=int(payload.get("seed", current_app.config["CONETYPE_SEED"])),
                exact=exact,
            )
        elif isinstance(source, dict):
            system = load_system(source, matrix, cones, exact=exact)
        else:
            raise PreconditionError("system must be 'ones', 'random' or a system object.")

        x = parse_element(str(payload.get("x", "e")), table)
        y = parse_element(str(payload.get("y", "b")), table)
        z = parse_element(str(payload.get("z", "")), table)
        cone_type = base_cone_type(x, y, cones)
        raw = payload.get("vector") or [1] * system.dims[cone_type]
        try:
            values = [Fraction(str(item)) for item in raw]
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"Cannot read the vector: {exc}") from exc
        function = elementary_function(x, y, values, system, cones)
        methods = list(EVALUATORS) if method == "all" else [method]
        context = EvaluationContext(function, system, cones)
        results = {
            name: EVALUATORS[name](function, system, z, cones, context=context) for name in methods
        }
    except ConeTypesError as exc:
        return domain_error(exc, component="Multiplicative", action="evaluate")

    first = results[methods[0]]
    agree = all(vectors_agree(first, other, exact=system.exact) for other in results.values())
    log_manager.record(
        component="Multiplicative",
        action="evaluate",
        level="info" if agree else "error",
        title="Multiplicative function evaluated",
        user_summary=f"Evaluated with {', '.join(methods)}; agreement {agree}.",
        technical_details="mult.evaluate translated the base to the identity before evaluating.",
    )
    return json_response(
        {
            "success": agree,
            "cone_type": cone_type,
            "values": {name: format_vector(value) for name, value in results.items()},
            "agree": agree,
        },
        status=200 if agree else 422,
    )
