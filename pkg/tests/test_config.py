"""
Tests for runtime settings.
"""

from fractions import Fraction

from effcurves.config import Settings, get_settings, reset_settings


def test_defaults(monkeypatch):
    for name in ("EFFCURVES_PRECISION", "EFFCURVES_MAX_DEPTH", "EFFCURVES_WORKERS"):
        monkeypatch.delenv(name, raising=False)
    settings = get_settings()
    assert settings.precision == 128
    assert settings.workers == 1
    assert settings.eps0 == Fraction(1, 10)
    assert get_settings() is settings


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("EFFCURVES_PRECISION", "256")
    monkeypatch.setenv("EFFCURVES_WORKERS", "4")
    settings = get_settings()
    assert settings.precision == 256
    assert settings.workers == 4
    assert settings.max_depth == Settings().max_depth


def test_bad_environment_values_are_ignored(monkeypatch):
    monkeypatch.setenv("EFFCURVES_PRECISION", "lots")
    monkeypatch.setenv("EFFCURVES_MAX_DEPTH", "-3")
    settings = get_settings()
    assert settings.precision == 128
    assert settings.max_depth == 40


def test_with_overrides_skips_none():
    settings = Settings().with_overrides(precision=512, workers=None)
    assert settings.precision == 512
    assert settings.workers == 1


def test_reset_installs_settings():
    reset_settings(Settings(bfs_radius=3))
    assert get_settings().bfs_radius == 3
    reset_settings()
    assert get_settings().bfs_radius == 8
