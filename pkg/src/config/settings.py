from enum import Enum
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

from .utils import get_version_from_pyproject


class Environment(str, Enum):
    DEV = "dev"
    PROD = "prod"


class Settings(BaseSettings):
    environment: Environment = Environment.DEV
    version: Optional[str] = get_version_from_pyproject()
    log_level: str = "INFO"

    # Run catalog
    database_path: Optional[str] = "gfflab.db"
    output_dir: str = "runs"

    # Worker pool; GFFLAB_THREADS wins over the run config
    threads: Optional[int] = None
    chunk_size: int = 4096

    # Numerics
    kernel_cutoff_radius: float = 64.0
    step_limit: int = 10_000_000_000
    dense_cutoff: int = 2000
    solve_batch: int = 64

    model_config = SettingsConfigDict(
        env_prefix="GFFLAB_", env_file=".env", extra="ignore"
    )


settings = Settings()
