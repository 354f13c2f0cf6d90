"""Configuration settings for the cone-type service."""
from __future__ import annotations

import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent


def _flag(name: str, default: bool) -> bool:
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


class Config:
    """Base configuration class."""

    SECRET_KEY = os.environ.get("CONETYPE_SECRET_KEY", "conetypes-dev-key")
    SQLALCHEMY_DATABASE_URI = os.environ.get(
        "CONETYPE_DATABASE_URI", f"sqlite:///{BASE_DIR / 'conetypes.db'}"
    )
    SQLALCHEMY_TRACK_MODIFICATIONS = False
    ENVIRONMENT = os.environ.get("CONETYPE_ENV", "development")
    LOG_RETENTION = int(os.environ.get("CONETYPE_LOG_RETENTION", 200))

    CONETYPE_GENUS = int(os.environ.get("CONETYPE_GENUS", 2))
    CONETYPE_MAX_BALL = int(float(os.environ.get("CONETYPE_MAX_BALL", 20_000_000)))
    CONETYPE_RADIUS = int(os.environ.get("CONETYPE_RADIUS", 6))
    CONETYPE_TOLERANCE = float(os.environ.get("CONETYPE_TOLERANCE", 1e-12))
    CONETYPE_MAX_ITER = int(float(os.environ.get("CONETYPE_MAX_ITER", 100_000)))
    CONETYPE_FINGERPRINT_DEPTH = int(os.environ.get("CONETYPE_FINGERPRINT_DEPTH", 4))
    CONETYPE_SEED = int(os.environ.get("CONETYPE_SEED", 0))
    CONETYPE_EXACT = _flag("CONETYPE_EXACT", True)
    CONETYPE_OUTPUT_FORMAT = os.environ.get("CONETYPE_OUTPUT_FORMAT", "json")
    CONETYPE_EXPERIMENTAL_CASCADE = _flag("CONETYPE_EXPERIMENTAL_CASCADE", False)
    CONETYPE_SAMPLE_SIZE = int(os.environ.get("CONETYPE_SAMPLE_SIZE", 10_000))
