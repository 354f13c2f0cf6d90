from __future__ import annotations

from conetypes.selfcheck import services
from conetypes.selfcheck.services import SelfCheck, SelfCheckSettings


def small(**overrides):
    values = {"radius": 3, "sample_size": 20, "systems": 2, "mult_radius": 2, "nesting_samples": 10}
    values.update(overrides)
    return SelfCheck(SelfCheckSettings(**values))


def test_default_sizes():
    """Defaults run the full acceptance sizes."""

    settings = SelfCheckSettings()
    assert settings.radius == 7
    assert settings.systems == 10
    assert settings.mult_radius == 6
    assert settings.sample_size == 10_000


def test_geodesic_check_covers_every_reduced_word():
    """Every reduced word up to the radius is compared with the ball."""

    passed, detail = small().check_geodesics()
    assert passed, detail
    assert detail.startswith(f"{1 + 8 + 56 + 392} words against the ball, 20 long words")


def test_geodesic_check_catches_a_lax_criterion(monkeypatch):
    """Accepting every word fails once a length-5 relator window appears."""

    monkeypatch.setattr(services, "is_geodesic_word", lambda word, table: True)
    passed, detail = small(radius=5).check_geodesics()
    assert not passed
    assert "disagrees with the ball" in detail


def test_multiplicative_check_at_small_scale():
    """Evaluators agree when each function shares one context."""

    passed, detail = small().check_multiplicative()
    assert passed, detail
    assert detail.endswith("over 2 systems")
