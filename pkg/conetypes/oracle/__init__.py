"""Brute-force Cayley graph oracle."""
from flask import Blueprint

bp = Blueprint("oracle", __name__, cli_group=None)

from . import commands, routes  # noqa: E402,F401
