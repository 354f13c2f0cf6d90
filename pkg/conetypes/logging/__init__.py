"""Blueprint exposing log endpoints."""
from flask import Blueprint

bp = Blueprint("logging", __name__, cli_group=None)

from . import commands, routes  # noqa: E402,F401
