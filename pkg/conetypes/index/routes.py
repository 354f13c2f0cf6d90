"""Routes for the service summary."""
from __future__ import annotations

from flask import current_app, jsonify

from ..logging_service import log_manager
from . import bp


@bp.route("/")
def home():
    """Describe the service, its defaults and its endpoints."""

    log_manager.record(
        component="Home",
        action="view",
        level="info",
        title="Service summary requested",
        user_summary="Service summary served.",
        technical_details="index.home listed the configured defaults and endpoint prefixes.",
    )

    config = current_app.config
    return jsonify(
        {
            "service": "conetypes",
            "environment": config.get("ENVIRONMENT", "development"),
            "defaults": {
                "genus": config["CONETYPE_GENUS"],
                "radius": config["CONETYPE_RADIUS"],
                "tolerance": config["CONETYPE_TOLERANCE"],
                "seed": config["CONETYPE_SEED"],
                "exact": config["CONETYPE_EXACT"],
                "max_ball": config["CONETYPE_MAX_BALL"],
                "fingerprint_depth": config["CONETYPE_FINGERPRINT_DEPTH"],
            },
            "endpoints": ["/group", "/oracle", "/cones", "/matrix", "/mult", "/logs"],
            "log_components": log_manager.available_components,
        }
    )
