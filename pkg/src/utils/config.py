import os
from dataclasses import dataclass, asdict

from dotenv import load_dotenv

load_dotenv()


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise EnvironmentError(f"❌ {name} must be a number, got '{raw}'")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise EnvironmentError(f"❌ {name} must be an integer, got '{raw}'")


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return raw.strip().lower() not in {"0", "false", "no", "off"}


@dataclass(frozen=True)
class Settings:
    max_size: int = 20
    threads: int = 1
    dense_limit: int = 500
    intrinsic_rtol: float = 1e-12
    bound_tol: float = 1e-9
    residual_rtol: float = 1e-8
    growth_slack: float = 0.05
    seed: int = 0
    log_file: str = os.path.join("logs", "experiment_data.json")
    log_enabled: bool = True

    def as_dict(self) -> dict:
        return asdict(self)


def get_settings() -> Settings:
    """
    Read the toolkit settings from the environment (and .env).
    Re-evaluated on every call so overrides take effect immediately.
    """
    defaults = Settings()
    return Settings(
        max_size=_env_int("CHEEGER_MAX_SIZE", defaults.max_size),
        threads=max(1, _env_int("CHEEGER_THREADS", defaults.threads)),
        dense_limit=_env_int("CHEEGER_DENSE_LIMIT", defaults.dense_limit),
        intrinsic_rtol=_env_float("CHEEGER_INTRINSIC_RTOL", defaults.intrinsic_rtol),
        bound_tol=_env_float("CHEEGER_BOUND_TOL", defaults.bound_tol),
        residual_rtol=_env_float("CHEEGER_RESIDUAL_RTOL", defaults.residual_rtol),
        growth_slack=_env_float("CHEEGER_GROWTH_SLACK", defaults.growth_slack),
        seed=_env_int("CHEEGER_SEED", defaults.seed),
        log_file=os.getenv("CHEEGER_LOG_FILE") or defaults.log_file,
        log_enabled=_env_bool("CHEEGER_LOG_ENABLED", defaults.log_enabled),
    )
