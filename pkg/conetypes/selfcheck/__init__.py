"""One-shot acceptance checks."""
from flask import Blueprint

bp = Blueprint("selfcheck", __name__, cli_group=None)

from . import commands  # noqa: E402,F401
