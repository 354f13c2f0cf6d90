"""Command printing the structured logs."""
from __future__ import annotations

import json

import click

from ..logging_service import log_manager
from . import bp


@bp.cli.command("logs")
@click.option("--level", type=click.Choice(["info", "warn", "error"]), default=None)
@click.option("--component", default=None)
@click.option("--search", default=None)
@click.option("--limit", type=int, default=50)
def logs(level, component, search, limit):
    """Print stored log entries, newest first."""
    entries = log_manager.fetch_logs(level=level, component=component, search=search, limit=limit)
    click.echo(json.dumps({"logs": entries, "latest": log_manager.latest_timestamp()}, indent=2))
