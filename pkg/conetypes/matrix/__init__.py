"""Cone-type successor matrix."""
from flask import Blueprint

bp = Blueprint("matrix", __name__, cli_group=None)

from . import commands, routes  # noqa: E402,F401
