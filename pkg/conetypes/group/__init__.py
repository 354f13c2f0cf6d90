"""Word normalization, distances and geodesic classes."""
from flask import Blueprint

bp = Blueprint("group", __name__, cli_group=None)

from . import commands, routes  # noqa: E402,F401
