"""Cone-type table and classification."""
from flask import Blueprint

bp = Blueprint("cones", __name__, cli_group=None)

from . import commands, routes  # noqa: E402,F401
