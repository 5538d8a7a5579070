import pytest


@pytest.fixture(autouse=True)
def isolated_log(tmp_path, monkeypatch):
    """Every test writes its experiment log under its own tmp_path."""
    log_file = tmp_path / "logs" / "experiment_data.json"
    monkeypatch.setenv("CHEEGER_LOG_FILE", str(log_file))
    monkeypatch.setenv("CHEEGER_LOG_ENABLED", "1")
    for name in ("CHEEGER_MAX_SIZE", "CHEEGER_THREADS", "CHEEGER_DENSE_LIMIT", "CHEEGER_BOUND_TOL", "CHEEGER_SEED"):
        monkeypatch.delenv(name, raising=False)
    return log_file
