"""Command-line entry point and the helpers shared by the blueprint commands.

Commands live next to their routes in each blueprint's ``commands.py``. This module
holds the shared options, output rendering, and the mapping of domain errors to
stable exit codes.
"""
from __future__ import annotations

import functools
import json
import sys
from typing import Callable, Mapping, Optional

import click
from flask import current_app
from flask.cli import FlaskGroup

from .errors import EXIT_USAGE, ConeTypesError, PreconditionError
from .logging_service import log_manager

FORMATS = ("json", "csv", "text", "dot", "paper-blocks")


class CommandFailure(click.ClickException):
    """A domain error surfaced to the shell with its own exit code."""

    def __init__(self, error: ConeTypesError) -> None:
        super().__init__(str(error))
        self.exit_code = error.exit_code


def setting(value, key: str):
    """Return ``value`` unless it is ``None``, else the configured default."""
    return current_app.config[key] if value is None else value


genus_option = click.option(
    "--genus", type=int, default=None, help="Surface genus (default CONETYPE_GENUS)."
)
radius_option = click.option(
    "--radius", type=int, default=None, help="Ball radius (default CONETYPE_RADIUS)."
)
tol_option = click.option(
    "--tol", type=float, default=None, help="Convergence tolerance (default CONETYPE_TOLERANCE)."
)
seed_option = click.option(
    "--seed", type=int, default=None, help="Random seed (default CONETYPE_SEED)."
)
format_option = click.option(
    "--format",
    "output_format",
    type=click.Choice(FORMATS),
    default=None,
    help="Output format (default CONETYPE_OUTPUT_FORMAT).",
)
exact_option = click.option(
    "--exact/--float",
    default=None,
    help="Exact rationals or floats (default CONETYPE_EXACT).",
)


def logged_command(component: str, action: str):
    """Log the outcome of a command and turn domain errors into exit codes."""

    def decorator(func: Callable):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                result = func(*args, **kwargs)
            except ConeTypesError as exc:
                log_manager.record_failure(component, action, exc, title=f"{action} command failed")
                raise CommandFailure(exc) from exc
            log_manager.record(
                component=component,
                action=action,
                title=f"{action} command completed",
                user_summary=f"The {action} command finished.",
                technical_details=f"cli.{action} ran with {sorted(kwargs)}.",
            )
            return result

        return wrapper

    return decorator


def emit(
    payload: Mapping[str, object],
    output_format: Optional[str] = None,
    renderers: Optional[Mapping[str, Callable[[], str]]] = None,
) -> None:
    """Print ``payload`` as JSON or through one of the command's text renderers."""

    output_format = setting(output_format, "CONETYPE_OUTPUT_FORMAT")
    if output_format == "json":
        text = json.dumps(payload, indent=2)
    else:
        renderer = (renderers or {}).get(output_format)
        if renderer is None:
            raise PreconditionError(f"Format {output_format!r} is not supported by this command.")
        text = renderer()
    click.echo(text.rstrip("\n"))


class ConeTypesGroup(FlaskGroup):
    """Flask command group that reports usage errors with exit code 1."""

    def main(self, args=None, prog_name=None, **extra):
        extra.pop("standalone_mode", None)
        try:
            result = super().main(
                args=args, prog_name=prog_name, standalone_mode=False, **extra
            )
        except click.UsageError as exc:
            exc.show()
            return EXIT_USAGE
        except click.ClickException as exc:
            exc.show()
            return exc.exit_code
        except click.Abort:
            click.echo("Aborted!", err=True)
            return EXIT_USAGE
        return result if isinstance(result, int) else 0


def build_cli(create_app: Optional[Callable] = None) -> ConeTypesGroup:
    if create_app is None:
        from . import create_app

    return ConeTypesGroup(
        create_app=create_app,
        load_dotenv=False,
        help="Cone types of surface groups.",
    )


def main(args=None, create_app: Optional[Callable] = None) -> None:
    sys.exit(build_cli(create_app).main(args=args, prog_name="conetypes"))
