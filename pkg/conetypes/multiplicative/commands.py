"""Commands for matrix systems and multiplicative-function evaluation."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import click

from ..cli import emit, exact_option, format_option, logged_command, seed_option, setting
from ..cones.services import build_cone_table
from ..errors import PreconditionError, VerificationError
from ..group.services import parse_element
from ..matrix.services import cached_matrix
from . import bp
from .services import (
    EVALUATORS,
    EvaluationContext,
    MatrixSystem,
    base_cone_type,
    constant_system,
    dump_system,
    elementary_function,
    format_vector,
    load_system,
    parse_dims_profile,
    random_system,
    vectors_agree,
)


def resolve_system(source: str, *, dims: str, seed: int, exact: bool) -> MatrixSystem:
    """``ones``, ``random`` or a path to a system JSON file."""

    cones = build_cone_table(2)
    matrix = cached_matrix(2)
    if source == "ones":
        return constant_system(matrix, cones, exact=exact)
    if source == "random":
        return random_system(matrix, cones, parse_dims_profile(dims), seed=seed, exact=exact)
    path = Path(source)
    if not path.is_file():
        raise PreconditionError(f"System file {source} does not exist.")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise PreconditionError(f"System file {source} is not valid JSON: {exc}") from exc
    return load_system(payload, matrix, cones, exact=exact)


def parse_vector(text: str) -> list[Fraction]:
    try:
        return [Fraction(item.strip()) for item in text.split(",") if item.strip()]
    except (ValueError, ZeroDivisionError):
        raise PreconditionError(f"Cannot read the vector {text!r}.") from None


@bp.cli.command("system")
@click.option("--dims", default="1", help="Uniform dimension or class=dim pairs.")
@seed_option
@exact_option
@logged_command("Multiplicative", "system")
def system(dims, seed, exact):
    """Print a reproducible random matrix system as JSON."""

    built = resolve_system(
        "random",
        dims=dims,
        seed=setting(seed, "CONETYPE_SEED"),
        exact=setting(exact, "CONETYPE_EXACT"),
    )
    click.echo(json.dumps(dump_system(built), indent=2))


@bp.cli.command("mu")
@click.argument("source")
@click.argument("z")
@click.option("--x", "base_x", default="e", help="First base element (default e).")
@click.option("--y", "base_y", default="b", help="Second base element (default b).")
@click.option("--vector", default=None, help="Comma-separated entries of v (default all ones).")
@click.option(
    "--method",
    type=click.Choice(["all", *EVALUATORS]),
    default="all",
    help="Evaluator to run; all runs the three and checks they agree.",
)
@click.option("--dims", default="1", help="Dimension profile when SOURCE is random.")
@seed_option
@exact_option
@format_option
@logged_command("Multiplicative", "mu")
def mu(source, z, base_x, base_y, vector, method, dims, seed, exact, output_format):
    """Evaluate mu[C(x, y), v] at Z for the system SOURCE (a JSON file, ones or random)."""

    exact = setting(exact, "CONETYPE_EXACT")
    built = resolve_system(source, dims=dims, seed=setting(seed, "CONETYPE_SEED"), exact=exact)
    cones = build_cone_table(2)
    table = cones.relator_table
    x, y, point = (parse_element(text, table) for text in (base_x, base_y, z))

    cone_type = base_cone_type(x, y, cones)
    values = parse_vector(vector) if vector else [1] * built.dims[cone_type]
    function = elementary_function(x, y, values, built, cones)

    methods = list(EVALUATORS) if method == "all" else [method]
    context = EvaluationContext(function, built, cones)
    results = {
        name: EVALUATORS[name](function, built, point, cones, context=context) for name in methods
    }
    first = results[methods[0]]
    agree = all(vectors_agree(first, other, exact=built.exact) for other in results.values())
    payload = {
        "x": table.format(x.word) or "e",
        "y": table.format(y.word) or "e",
        "z": table.format(point.word) or "e",
        "cone_type": function.cone_type,
        "values": {name: format_vector(value) for name, value in results.items()},
        "agree": agree,
    }
    emit(
        payload,
        output_format,
        {"text": lambda: " ".join(str(item) for item in format_vector(first))},
    )
    if not agree:
        raise VerificationError(f"Evaluators disagree at {payload['z']}.")
