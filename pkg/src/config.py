"""Run configuration using pydantic BaseSettings."""

from __future__ import annotations

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class Settings(BaseSettings):
    """Settings for one toolkit run.

    Values come only from keyword arguments (the CLI passes its flags);
    environment variables and .env files are not read.
    """

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"

    # Worker processes for the oracle and the exhaustive Psi_2 search
    threads: int = Field(1, ge=1)

    # Search budgets
    oracle_node_cap: int = Field(50_000_000, ge=1)
    exhaustive_cap: int = Field(10_000_000, ge=1)

    # Local search for Psi_2 minimisation
    local_restarts: int = Field(8, ge=1)
    local_budget: int = Field(20_000, ge=1)

    model_config = SettingsConfigDict(frozen=True)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)


def get_settings(**overrides: object) -> Settings:
    """Create and return a validated Settings instance."""
    return Settings(**overrides)  # type: ignore[arg-type]
