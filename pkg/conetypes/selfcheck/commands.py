"""The ``selfcheck`` command."""
from __future__ import annotations

import json

import click
from flask import current_app

from ..cli import logged_command, seed_option, setting, tol_option
from ..errors import VerificationError
from . import bp
from .services import SelfCheck, SelfCheckSettings


@bp.cli.command("selfcheck")
@click.option("--radius", type=int, default=7, show_default=True, help="Oracle ball radius.")
@click.option("--sample-size", type=int, default=None, help="Random elements to classify.")
@click.option("--systems", type=int, default=10, show_default=True, help="Random matrix systems.")
@click.option("--mult-radius", type=int, default=6, show_default=True, help="Largest |z| evaluated.")
@click.option("--nesting-samples", type=int, default=1_000, show_default=True)
@seed_option
@tol_option
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
@logged_command("SelfCheck", "selfcheck")
def selfcheck(radius, sample_size, systems, mult_radius, nesting_samples, seed, tol, output_format):
    """Run every acceptance check; exit 4 if any fails."""

    config = current_app.config
    settings = SelfCheckSettings(
        radius=radius,
        sample_size=setting(sample_size, "CONETYPE_SAMPLE_SIZE"),
        systems=systems,
        mult_radius=mult_radius,
        nesting_samples=nesting_samples,
        seed=setting(seed, "CONETYPE_SEED"),
        tol=setting(tol, "CONETYPE_TOLERANCE"),
        max_iter=config["CONETYPE_MAX_ITER"],
        depth=config["CONETYPE_FINGERPRINT_DEPTH"],
        max_elements=config["CONETYPE_MAX_BALL"],
    )

    results = []
    for result in SelfCheck(settings).run():
        results.append(result)
        if output_format == "text":
            status = "PASS" if result.passed else "FAIL"
            click.echo(f"{status} {result.name} ({result.elapsed:.2f}s) {result.detail}")
    if output_format == "json":
        click.echo(json.dumps({"checks": [result.serialize() for result in results]}, indent=2))

    failed = [result.name for result in results if not result.passed]
    if failed:
        raise VerificationError(f"Failed checks: {', '.join(failed)}.")
