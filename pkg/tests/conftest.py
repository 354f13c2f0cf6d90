from __future__ import annotations

from pathlib import Path
import sys

import pytest
from sqlalchemy.pool import StaticPool

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from conetypes import create_app
from conetypes.config import Config
from conetypes.extensions import db
from conetypes.cones.services import build_cone_table
from conetypes.group.services import build_relator_table
from conetypes.matrix.services import cached_matrix
from conetypes.oracle.services import build_ball


class TestingConfig(Config):
    """Configuration tuned for isolated unit tests."""

    TESTING = True
    SQLALCHEMY_DATABASE_URI = "sqlite:///:memory:"
    SQLALCHEMY_ENGINE_OPTIONS = {
        "connect_args": {"check_same_thread": False},
        "poolclass": StaticPool,
    }
    CONETYPE_OUTPUT_FORMAT = "json"
    CONETYPE_EXACT = True
    CONETYPE_EXPERIMENTAL_CASCADE = False


@pytest.fixture()
def app():
    """Create a Flask app instance backed by an in-memory database."""

    application = create_app(TestingConfig)
    yield application
    with application.app_context():
        db.drop_all()
        db.session.remove()


@pytest.fixture()
def client(app):
    """Provide a Flask test client for request assertions."""

    return app.test_client()


@pytest.fixture()
def runner(app):
    """Provide a CLI runner bound to the test application."""

    return app.test_cli_runner()


@pytest.fixture(scope="session")
def table():
    """Genus-2 relator table."""

    return build_relator_table(2)


@pytest.fixture(scope="session")
def cones():
    """Genus-2 cone-type table with its successor map."""

    return build_cone_table(2)


@pytest.fixture(scope="session")
def matrix():
    """Genus-2 successor matrix."""

    return cached_matrix(2)


@pytest.fixture(scope="session")
def ball(table):
    """Radius-5 ball of the genus-2 Cayley graph."""

    return build_ball(5, table)
