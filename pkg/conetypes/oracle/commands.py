"""Commands over the brute-force Cayley graph oracle."""
from __future__ import annotations

import click
from flask import current_app

from ..cli import emit, format_option, genus_option, logged_command, radius_option, setting
from ..group.services import build_relator_table, parse_element
from . import bp
from .services import ball_to_dot, build_ball, geodesic_counts, quadruple_occurrences, sphere_sizes


@bp.cli.command("ball")
@radius_option
@genus_option
@format_option
@logged_command("Oracle", "ball")
def ball(radius, genus, output_format):
    """Build a ball and print its sphere sizes, or its geodesic DAG with --format dot."""

    table = build_relator_table(setting(genus, "CONETYPE_GENUS"))
    found = build_ball(
        setting(radius, "CONETYPE_RADIUS"),
        table,
        max_elements=current_app.config["CONETYPE_MAX_BALL"],
    )
    counts = geodesic_counts(found)
    words = [sum(counts[word] for word in sphere) for sphere in found.spheres]
    emit(
        {"radius": found.radius, "sphere_sizes": found.sphere_sizes(), "geodesic_words": words},
        output_format,
        {
            "dot": lambda: ball_to_dot(found),
            "text": lambda: "\n".join(
                f"{n}\t{size}\t{count}" for n, (size, count) in enumerate(zip(found.sphere_sizes(), words))
            ),
        },
    )


@bp.cli.command("spheres")
@radius_option
@genus_option
@format_option
@logged_command("Oracle", "spheres")
def spheres(radius, genus, output_format):
    """Print element sphere sizes keeping only two spheres in memory."""

    table = build_relator_table(setting(genus, "CONETYPE_GENUS"))
    sizes = sphere_sizes(
        setting(radius, "CONETYPE_RADIUS"),
        table,
        max_elements=current_app.config["CONETYPE_MAX_BALL"],
    )
    emit(
        {"sphere_sizes": sizes},
        output_format,
        {"text": lambda: "\n".join(f"{n}\t{size}" for n, size in enumerate(sizes))},
    )


@bp.cli.command("quadruples")
@click.argument("word")
@genus_option
@format_option
@logged_command("Oracle", "quadruples")
def quadruples(word, genus, output_format):
    """Print the half-relator windows of every geodesic word of WORD."""

    table = build_relator_table(setting(genus, "CONETYPE_GENUS"))
    occurrences = sorted(quadruple_occurrences(parse_element(word, table), table))
    rows = [
        {"word": table.format(item), "position": position, "quadruple": table.format(window)}
        for item, position, window in occurrences
    ]
    emit(
        {"occurrences": rows},
        output_format,
        {"text": lambda: "\n".join(f"{row['word']}\t{row['position']}\t{row['quadruple']}" for row in rows)},
    )
