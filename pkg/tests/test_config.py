import pytest

from src.utils.config import Settings, get_settings
from src.utils.errors import CapacityError, ConvergenceError, ParameterError, ToolkitError


def test_defaults():
    settings = get_settings()
    assert settings.max_size == 20
    assert settings.threads == 1
    assert settings.bound_tol == 1e-9
    assert settings.seed == 0


def test_environment_overrides_are_read_on_every_call(monkeypatch):
    monkeypatch.setenv("CHEEGER_MAX_SIZE", "12")
    monkeypatch.setenv("CHEEGER_THREADS", "0")
    settings = get_settings()
    assert settings.max_size == 12
    assert settings.threads == 1
    monkeypatch.setenv("CHEEGER_MAX_SIZE", "")
    assert get_settings().max_size == Settings().max_size


def test_bad_values_raise(monkeypatch):
    monkeypatch.setenv("CHEEGER_MAX_SIZE", "many")
    with pytest.raises(EnvironmentError):
        get_settings()
    monkeypatch.setenv("CHEEGER_MAX_SIZE", "20")
    monkeypatch.setenv("CHEEGER_BOUND_TOL", "tiny")
    with pytest.raises(EnvironmentError):
        get_settings()


def test_error_exit_codes_and_prefixes():
    assert ToolkitError("plain").exit_code == 2
    assert str(ToolkitError("bad", "metrics")) == "metrics: bad"
    assert CapacityError("too big").exit_code == 3
    error = ParameterError("radius", "must be positive")
    assert error.field == "radius"
    assert error.exit_code == 2
    assert ConvergenceError("no convergence", 1e-3).residual == 1e-3
