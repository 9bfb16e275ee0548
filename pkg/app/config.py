"""Configuration settings for ZDGVerify."""
import os
from dotenv import load_dotenv

from app.models import ConfigurationError

# Load environment variables from .env file
load_dotenv()


def _int_env(key: str, default: int) -> int:
    raw = os.getenv(key, str(default))
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{key} must be an integer, got {raw!r}")


class Settings:
    """Search budgets and bounds loaded from environment variables."""

    # Candidate subsets an exhaustive Det / dim_M search may test before it
    # gives up and reports a bound pair instead of an exact value.
    EXHAUSTIVE_LIMIT: int = _int_env("ZDG_EXHAUSTIVE_LIMIT", 5_000_000)

    # Worker threads for suite sweeps (cases are independent).
    WORKERS: int = _int_env("ZDG_WORKERS", 1)

    # Rings up to this order get their multiplication table materialized and
    # checked exhaustively (commutativity, associativity, identities).
    VERIFY_TABLE_LIMIT: int = _int_env("ZDG_VERIFY_TABLE_LIMIT", 256)

    # Ring-spec bounds
    MAX_FIELD_ORDER: int = _int_env("ZDG_MAX_FIELD_ORDER", 2 ** 16)
    MAX_RING_ORDER: int = _int_env("ZDG_MAX_RING_ORDER", 2 ** 20)

    # Automorphism search bound (vertices)
    MAX_AUT_VERTICES: int = _int_env("ZDG_MAX_AUT_VERTICES", 2 ** 12)

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FILE: str = os.getenv("ZDG_LOG_FILE", "")

    @classmethod
    def reload(cls) -> "Settings":
        """Re-read every setting from the current environment."""
        cls.EXHAUSTIVE_LIMIT = _int_env("ZDG_EXHAUSTIVE_LIMIT", 5_000_000)
        cls.WORKERS = _int_env("ZDG_WORKERS", 1)
        cls.VERIFY_TABLE_LIMIT = _int_env("ZDG_VERIFY_TABLE_LIMIT", 256)
        cls.MAX_FIELD_ORDER = _int_env("ZDG_MAX_FIELD_ORDER", 2 ** 16)
        cls.MAX_RING_ORDER = _int_env("ZDG_MAX_RING_ORDER", 2 ** 20)
        cls.MAX_AUT_VERTICES = _int_env("ZDG_MAX_AUT_VERTICES", 2 ** 12)
        cls.LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
        cls.LOG_FILE = os.getenv("ZDG_LOG_FILE", "")
        cls.validate()
        return settings

    @classmethod
    def validate(cls) -> bool:
        """Validate limits; every budget must be positive."""
        for key in ("EXHAUSTIVE_LIMIT", "WORKERS", "VERIFY_TABLE_LIMIT",
                    "MAX_FIELD_ORDER", "MAX_RING_ORDER", "MAX_AUT_VERTICES"):
            if getattr(cls, key) < 1:
                raise ConfigurationError(f"{key} must be positive, got {getattr(cls, key)}")
        return True


# Global settings instance
settings = Settings()
