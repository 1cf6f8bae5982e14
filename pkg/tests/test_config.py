"""Tests for configuration selection (config.py) and error tracking (observability.py)."""
import importlib
import logging

import pytest

import config
import observability


@pytest.fixture
def reload_config(monkeypatch):
    """Re-import config.py after the environment has been patched."""
    def _reload(**env):
        for key, value in env.items():
            monkeypatch.setenv(key, value)
        return importlib.reload(config)
    yield _reload
    monkeypatch.undo()
    importlib.reload(config)


@pytest.fixture(autouse=True)
def _detach_handlers():
    yield
    logger = logging.getLogger("lorec")
    for handler in [h for h in logger.handlers if getattr(h, "_lorec_handler", False)]:
        logger.removeHandler(handler)


# ── config ──────────────────────────────────────────────────────────────────
def test_environment_selects_config(monkeypatch):
    monkeypatch.setenv("LOREC_ENV", "production")
    assert config.get_config() is config.ProductionConfig
    monkeypatch.setenv("LOREC_ENV", "staging")
    assert config.get_config() is config.DevelopmentConfig


def test_jobs_and_log_level_from_environment(reload_config):
    cfg = reload_config(LOREC_JOBS="3", LOREC_LOG_LEVEL="warning")
    assert cfg.Config.JOBS == 3
    assert cfg.Config.init_logging().level == logging.WARNING


def test_init_logging_adds_one_handler():
    logger = config.DevelopmentConfig.init_logging()
    config.DevelopmentConfig.init_logging()
    assert sum(getattr(h, "_lorec_handler", False) for h in logger.handlers) == 1


def test_production_rejects_nonpositive_jobs(reload_config):
    cfg = reload_config(LOREC_JOBS="0")
    with pytest.raises(RuntimeError):
        cfg.ProductionConfig.init_logging()


# ── observability ───────────────────────────────────────────────────────────
def test_sentry_disabled_without_dsn(monkeypatch):
    monkeypatch.delenv("SENTRY_DSN", raising=False)
    assert observability.init_sentry() is False


def test_scrub_drops_argv_and_paths():
    event = {
        "extra": {"sys.argv": ["lorec", "decompose", "/data/private/sigma.csv"], "run": 1},
        "contexts": {"argv": [], "runtime": {"name": "CPython"}},
        "breadcrumbs": {"values": [
            {"message": "/data/private/returns.csv", "data": {"path": "/data/private/x.csv", "n": 3}},
            {"message": "relative/name.csv"},
        ]},
        "user": {"ip_address": "10.0.0.1"},
    }
    scrubbed = observability._scrub(event, None)
    assert scrubbed["extra"] == {"run": 1}
    assert scrubbed["contexts"] == {"runtime": {"name": "CPython"}}
    crumbs = scrubbed["breadcrumbs"]["values"]
    assert crumbs[0]["message"] == "returns.csv"
    assert crumbs[0]["data"] == {"path": "x.csv", "n": 3}
    assert crumbs[1]["message"] == "relative/name.csv"
    assert "user" not in scrubbed


def test_report_exception_is_noop_when_disabled():
    observability.report_exception(RuntimeError("not sent"))
