"""
Configuration Management

Centralized configuration using pydantic-settings.
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # Group data - searched before the bundled tables
    data_dir: Optional[Path] = None

    # Logging
    log_level: str = "WARNING"
    log_format: Literal["json", "console"] = "json"

    # Solver
    workers: int = Field(1, ge=1, description="Process pool size for power assignments")
    report_timings: bool = False  # Timings break byte-stable reports

    # OpenTelemetry Configuration
    otel_enabled: bool = False
    otel_exporter_otlp_endpoint: Optional[str] = None
    otel_service_name: str = "zc-help"

    class Config:
        env_prefix = "ZC_HELP_"
        env_file = ".env"
        env_file_encoding = "utf-8"


settings = Settings()
