"""Application factory for the cone-type service."""
from __future__ import annotations

from flask import Flask

from .config import Config
from .extensions import db
from .logging_service import log_manager


def create_app(config_class: type[Config] = Config) -> Flask:
    """Create and configure the Flask application."""
    app = Flask(__name__)
    app.config.from_object(config_class)

    db.init_app(app)
    log_manager.init_app(app)

    with app.app_context():
        # Import models to ensure they are registered before table creation.
        from . import models as core_models  # noqa: F401

        db.create_all()

    from .index import bp as index_bp
    from .group import bp as group_bp
    from .oracle import bp as oracle_bp
    from .cones import bp as cones_bp
    from .matrix import bp as matrix_bp
    from .multiplicative import bp as multiplicative_bp
    from .logging import bp as logging_bp
    from .selfcheck import bp as selfcheck_bp

    app.register_blueprint(index_bp)
    app.register_blueprint(group_bp, url_prefix="/group")
    app.register_blueprint(oracle_bp, url_prefix="/oracle")
    app.register_blueprint(cones_bp, url_prefix="/cones")
    app.register_blueprint(matrix_bp, url_prefix="/matrix")
    app.register_blueprint(multiplicative_bp, url_prefix="/mult")
    app.register_blueprint(logging_bp, url_prefix="/logs")
    app.register_blueprint(selfcheck_bp)

    for component in (
        "Home",
        "Group",
        "Oracle",
        "ConeTypes",
        "ConeMatrix",
        "Multiplicative",
        "SelfCheck",
        "Logging",
    ):
        log_manager.register_component(component)

    return app
