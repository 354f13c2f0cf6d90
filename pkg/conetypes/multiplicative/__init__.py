"""Matrix systems and multiplicative functions."""
from flask import Blueprint

bp = Blueprint("multiplicative", __name__, cli_group=None)

from . import commands, routes  # noqa: E402,F401
