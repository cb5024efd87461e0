import sys
from functools import lru_cache
from pathlib import Path

from loguru import logger
from pydantic import Field
from pydantic_settings import BaseSettings

VERSION = "0.3.0"


class Settings(BaseSettings):
    output_dir: Path = Field(default=Path("out"), alias="FEKETE_OUTPUT_DIR")
    workers: int = Field(default=1, ge=1, alias="FEKETE_WORKERS")
    seed: int = Field(default=0, ge=0, alias="FEKETE_SEED")
    log_level: str = Field(default="INFO", alias="FEKETE_LOG_LEVEL")
    cache_ttl_seconds: int = Field(default=3600, alias="FEKETE_CACHE_TTL_SECONDS")
    cors_origins: list[str] = Field(default=["*"], alias="FEKETE_CORS_ORIGINS")
    # enumeration caps for the exhaustive oracles
    brute_force_budget: int = Field(default=10_000_000, alias="FEKETE_BRUTE_FORCE_BUDGET")
    free_energy_budget: int = Field(default=1_000_000, alias="FEKETE_FREE_ENERGY_BUDGET")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"  # ignore unrelated env vars to avoid validation errors


@lru_cache
def get_settings() -> Settings:
    return Settings()


def configure_logging(level: str | None = None) -> None:
    """Route loguru to stderr at the configured level; stdout stays for results."""
    logger.remove()
    logger.add(sys.stderr, level=(level or get_settings().log_level).upper())
