"""Commands for the cone-type table and element classification."""
from __future__ import annotations

import csv
import io

import click
from flask import current_app

from ..cli import emit, format_option, genus_option, logged_command, setting
from ..group.services import parse_element
from . import bp
from .services import (
    ConeTypeTable,
    build_cone_table,
    classify,
    classify_by_oracle,
    length_class_name,
    table_rows,
)


def configured_cones(genus) -> ConeTypeTable:
    return build_cone_table(
        setting(genus, "CONETYPE_GENUS"), current_app.config["CONETYPE_EXPERIMENTAL_CASCADE"]
    )


def _rows_to_csv(rows: list[dict[str, object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["id", "representative", "length_class", "successors"])
    for row in rows:
        successors = row.get("successors", {})
        writer.writerow(
            [
                row["id"],
                row["representative"],
                row["length_class"],
                " ".join(f"{letter}:{target}" for letter, target in successors.items()),
            ]
        )
    return buffer.getvalue()


@bp.cli.command("conetype")
@click.argument("word")
@click.option("--oracle", is_flag=True, help="Classify by fingerprint instead of the automaton.")
@click.option("--depth", type=int, default=None, help="Fingerprint depth for --oracle.")
@genus_option
@format_option
@logged_command("ConeTypes", "conetype")
def conetype(word, oracle, depth, genus, output_format):
    """Print the cone type of WORD."""

    cones = configured_cones(genus)
    table = cones.relator_table
    element = parse_element(word, table)
    if oracle or cones.successors is None:
        method = "oracle"
        cone_type = classify_by_oracle(
            element, cones, setting(depth, "CONETYPE_FINGERPRINT_DEPTH")
        )
    else:
        method = "automaton"
        cone_type = classify(element, cones)
    representative = cones.label(cone_type) if cone_type else "e"
    payload = {
        "word": word,
        "normal_form": table.format(element.word),
        "id": cone_type,
        "representative": representative,
        "length_class": length_class_name(cones.length_class(cone_type)) if cone_type else "identity",
        "method": method,
    }
    emit(payload, output_format, {"text": lambda: f"{cone_type}\t{representative}"})


@bp.cli.command("table")
@genus_option
@format_option
@logged_command("ConeTypes", "table")
def table(genus, output_format):
    """Print the cone-type representatives and their successor rows."""

    rows = table_rows(configured_cones(genus))
    emit(
        {"count": len(rows) - 1, "types": rows},
        output_format,
        {
            "csv": lambda: _rows_to_csv(rows),
            "text": lambda: "\n".join(f"{row['id']}\t{row['representative']}" for row in rows),
        },
    )
