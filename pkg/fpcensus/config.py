"""Application configuration using Pydantic settings."""

from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Census settings loaded from environment variables."""

    # Presentation parser
    max_nesting: int = 100
    max_word_length: int = 1_000_000

    # Coset enumeration
    max_cosets: int = 1_000_000

    # Low-index search (partial-table extensions)
    max_nodes: int = 10_000_000

    # Census
    census_index: int = 4
    census_workers: int = 4
    presentation_glob: str = "*.fp"

    # Reports
    json_indent: int = 2

    # Logging
    log_level: str = "INFO"
    log_json: bool = True

    model_config = {
        "env_prefix": "FPCENSUS_",
        "env_file": ".env",
        "case_sensitive": False,
    }


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
