import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

load_dotenv()

LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}

ENV_VARS = {
    "data_dir": "GORDAN_DATA",
    "seed": "GORDAN_SEED",
    "witness_budget": "GORDAN_WITNESS_BUDGET",
    "hom_degree": "GORDAN_HOM_DEGREE",
    "log_level": "GORDAN_LOG_LEVEL",
}


class Settings(BaseModel):
    data_dir: Path = Path("data")
    seed: int = 0
    witness_budget: int = Field(default=10_000, ge=0)
    hom_degree: int = Field(default=5, ge=2)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}")
        return value


def invalid_variables(exc: ValidationError) -> list:
    """Environment variable names behind a Settings validation error."""
    names = []
    for err in exc.errors():
        field = err["loc"][0] if err["loc"] else None
        name = ENV_VARS.get(field, str(field))
        if name not in names:
            names.append(name)
    return names


def get_settings() -> Settings:
    """Settings from the environment (and an optional .env file)."""
    env = {field: os.getenv(name) for field, name in ENV_VARS.items()}
    return Settings(**{k: v for k, v in env.items() if v not in (None, "")})
