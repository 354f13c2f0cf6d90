"""Commands for the successor matrix, its fixture check and its spectrum."""
from __future__ import annotations

from pathlib import Path

import click
from flask import current_app

from ..cli import (
    emit,
    format_option,
    genus_option,
    logged_command,
    radius_option,
    seed_option,
    setting,
    tol_option,
)
from ..cones.services import build_cone_table, oracle_transitions
from ..errors import VerificationError
from ..group.services import build_relator_table
from ..oracle.services import sphere_sizes
from . import bp
from .services import (
    cached_matrix,
    format_blocks,
    growth_counts,
    growth_rate_estimate,
    matrix_from_transitions,
    perron as perron_root,
    primitivity_certificate,
    require_primitive,
    to_csv,
    verify_against_printed,
)


def configured_matrix(genus):
    return cached_matrix(
        setting(genus, "CONETYPE_GENUS"), current_app.config["CONETYPE_EXPERIMENTAL_CASCADE"]
    )


@bp.cli.command("matrix")
@click.option(
    "--source",
    type=click.Choice(["automaton", "oracle"]),
    default="automaton",
    help="Build from the successor map or from fingerprints.",
)
@genus_option
@format_option
@logged_command("ConeMatrix", "matrix")
def matrix(source, genus, output_format):
    """Print the cone-type successor matrix."""

    if source == "oracle":
        cones = build_cone_table(setting(genus, "CONETYPE_GENUS"))
        built = matrix_from_transitions(
            oracle_transitions(cones, current_app.config["CONETYPE_FINGERPRINT_DEPTH"]), cones
        )
    else:
        built = configured_matrix(genus)
    emit(
        {"order": built.order, "class_sizes": list(built.class_sizes), "entries": built.to_nested()},
        output_format,
        {
            "csv": lambda: to_csv(built),
            "paper-blocks": lambda: format_blocks(built),
            "text": lambda: "\n".join("".join(str(v) for v in row) for row in built.to_nested()),
        },
    )


@bp.cli.command("verify")
@click.option("--fixture", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--errata", type=click.Path(dir_okay=False, path_type=Path), default=None)
@format_option
@logged_command("ConeMatrix", "verify")
def verify(fixture, errata, output_format):
    """Compare the computed matrix with the printed blocks; exit 4 on unexplained differences."""

    report = verify_against_printed(cached_matrix(2), fixture_path=fixture, errata_path=errata)
    payload = report.serialize()
    emit(
        payload,
        output_format,
        {
            "text": lambda: "\n".join(
                [f"passed\t{report.passed}"]
                + [f"{d.row}\t{d.column}\t{d.computed}\t{d.printed}" for d in report.diff]
            )
        },
    )
    if not report.passed:
        raise VerificationError(
            f"{len(report.unexplained)} unexplained differences and "
            f"{len(report.missing_errata)} missing errata."
        )


@bp.cli.command("primitivity")
@genus_option
@format_option
@logged_command("ConeMatrix", "primitivity")
def primitivity(genus, output_format):
    """Print the smallest positive power and the staged row checks."""

    certificate = primitivity_certificate(configured_matrix(genus))
    emit(certificate.serialize(), output_format, {"text": lambda: str(certificate.k)})
    require_primitive(certificate)


@bp.cli.command("perron")
@tol_option
@click.option("--max-iter", type=int, default=None, help="Iteration cap (default CONETYPE_MAX_ITER).")
@seed_option
@radius_option
@genus_option
@format_option
@logged_command("ConeMatrix", "perron")
def perron(tol, max_iter, seed, radius, genus, output_format):
    """Print the Perron root and eigenvectors; --radius adds the sphere-ratio estimate."""

    built = configured_matrix(genus)
    require_primitive(primitivity_certificate(built))
    result = perron_root(
        built,
        tol=setting(tol, "CONETYPE_TOLERANCE"),
        max_iter=setting(max_iter, "CONETYPE_MAX_ITER"),
        seed=setting(seed, "CONETYPE_SEED"),
    )
    payload = result.serialize()
    if radius is not None:
        sizes = sphere_sizes(
            radius,
            build_relator_table(setting(genus, "CONETYPE_GENUS")),
            max_elements=current_app.config["CONETYPE_MAX_BALL"],
        )
        payload["sphere_ratio"] = growth_rate_estimate(sizes)
    emit(payload, output_format, {"text": lambda: f"{result.r:.12f}"})


@bp.cli.command("growth")
@click.argument("n_max", type=int)
@genus_option
@format_option
@logged_command("ConeMatrix", "growth")
def growth(n_max, genus, output_format):
    """Print automaton sphere counts s(0)..s(N_MAX) with per-type vectors."""

    rows = growth_counts(configured_matrix(genus), n_max)
    emit(
        {"rows": [{"n": row.n, "count": row.count, "vector": list(row.vector)} for row in rows]},
        output_format,
        {
            "text": lambda: "\n".join(f"{row.n}\t{row.count}" for row in rows),
            "csv": lambda: "n,count\n" + "\n".join(f"{row.n},{row.count}" for row in rows),
        },
    )
