"""Commands for normal forms, distances and geodesic classes."""
from __future__ import annotations

import click

from ..cli import emit, format_option, genus_option, logged_command, setting
from . import bp
from .services import (
    build_relator_table,
    distance as word_distance,
    geodesic_class,
    parse_element,
)


@bp.cli.command("normalize")
@click.argument("word")
@genus_option
@format_option
@logged_command("Group", "normalize")
def normalize(word, genus, output_format):
    """Print the normal form of WORD."""

    table = build_relator_table(setting(genus, "CONETYPE_GENUS"))
    element = parse_element(word, table)
    normal = table.format(element.word)
    emit(
        {"input": word, "normal_form": normal, "length": element.length},
        output_format,
        {"text": lambda: normal},
    )


@bp.cli.command("distance")
@click.argument("word")
@click.argument("other", required=False)
@genus_option
@format_option
@logged_command("Group", "distance")
def distance(word, other, genus, output_format):
    """Print |WORD|, or d(WORD, OTHER) when two words are given."""

    table = build_relator_table(setting(genus, "CONETYPE_GENUS"))
    if other is None:
        x, y = parse_element("", table), parse_element(word, table)
    else:
        x, y = parse_element(word, table), parse_element(other, table)
    value = word_distance(x, y, table)
    emit({"distance": value}, output_format, {"text": lambda: str(value)})


@bp.cli.command("geodesics")
@click.argument("word")
@genus_option
@format_option
@logged_command("Group", "geodesics")
def geodesics(word, genus, output_format):
    """Print every geodesic word of the element WORD represents."""

    table = build_relator_table(setting(genus, "CONETYPE_GENUS"))
    element = parse_element(word, table)
    words = [table.format(item) for item in sorted(geodesic_class(element.word, table))]
    emit(
        {"normal_form": table.format(element.word), "count": len(words), "geodesics": words},
        output_format,
        {"text": lambda: "\n".join(words)},
    )
