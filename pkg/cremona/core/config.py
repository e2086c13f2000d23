"""Application configuration."""

from typing import List
from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    """Application settings."""
    
    # Application settings
    APP_NAME: str = "Real Cremona Involutions API"
    DEBUG: bool = False
    HOST: str = "127.0.0.1"
    PORT: int = 8000
    
    # Logging settings
    CREMONA_VERBOSITY: str = "WARNING"
    
    # Search settings
    DEFAULT_SEED: int = 20240601
    REPARAM_SEARCH_HEIGHT: int = 8
    DIAGONALIZE_SEARCH_BOUND: int = 4
    FAMILY_SAMPLE_HEIGHT: int = 12
    FAMILY_MAX_ATTEMPTS: int = 500
    DIFFERENTIAL_SAMPLES: int = 1000
    SELFCHECK_PAIRED_FRACTION: float = 0.0
    
    # CORS settings
    ALLOWED_ORIGINS: List[str] = ["*"]
    
    class Config:
        env_file = ".env"
        case_sensitive = True

# Create global settings instance
settings = Settings()
