from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="SQUEEZELAB_", env_file=".env", extra="ignore"
    )

    tol: float = Field(default=1e-6, gt=0)              # verification tolerance
    tail_mass_limit: float = Field(default=1e-8, gt=0)  # oracle validity gate
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"
