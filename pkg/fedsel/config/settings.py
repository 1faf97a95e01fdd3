from pydantic_settings import BaseSettings
from typing import Optional
from pathlib import Path
import os

# Get absolute path to the source root (config/settings.py -> fedsel/)
_source_dir = Path(__file__).parent.parent
# Prefer the repository-root .env.local, fall back to fedsel/.env.local, then .env.
# Without any file, Pydantic reads OS env vars only.
_root_dir = _source_dir.parent
_env_local = _root_dir / '.env.local'
if not _env_local.exists():
    _env_local = _source_dir / '.env.local'
_env_file = _source_dir / '.env'


class Settings(BaseSettings):
    """Process-level settings"""

    # Overrides the experiment config seed when set
    FEDSEL_SEED: Optional[int] = None

    # Engine worker pool size; 0 = available parallelism
    FEDSEL_WORKERS: int = 0

    FEDSEL_LOG_LEVEL: str = "INFO"

    class Config:
        env_file = str(_env_local) if _env_local.exists() else str(_env_file)
        case_sensitive = True
        extra = "ignore"  # Ignore extra fields from environment file

    def get_workers(self) -> int:
        """Resolve the worker count (0 means one per available CPU)"""
        if self.FEDSEL_WORKERS > 0:
            return self.FEDSEL_WORKERS
        return os.cpu_count() or 1


def get_settings() -> Settings:
    """Fresh settings read from the current environment"""
    return Settings()


settings = Settings()
