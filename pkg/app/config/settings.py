from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    # Application
    app_name: str = Field(default="Parallel Robot Adaptive Control", env="APP_NAME")
    app_version: str = Field(default="1.0.0", env="APP_VERSION")
    debug: bool = Field(default=False, env="DEBUG")
    environment: str = Field(default="development", env="ENVIRONMENT")

    # Logging
    log_level: str = Field(default="INFO", env="LOG_LEVEL")
    log_format: str = Field(default="console", env="LOG_FORMAT")

    # Output
    output_dir: str = Field(default="runs", env="OUTPUT_DIR")
    csv_significant_digits: int = Field(default=15, env="CSV_SIGNIFICANT_DIGITS")

    # Integration
    consistency_check_interval: int = Field(default=100, env="CONSISTENCY_CHECK_INTERVAL")

    # Numerical guards
    eps_length: float = Field(default=1e-6, env="EPS_LENGTH")
    eps_determinant: float = Field(default=1e-6, env="EPS_DETERMINANT")
    determinant_margin: float = Field(default=0.25, env="DETERMINANT_MARGIN")
    path_check_samples: int = Field(default=1000, env="PATH_CHECK_SAMPLES")

    # Validation suite
    validation_samples: int = Field(default=1000, env="VALIDATION_SAMPLES")
    validation_seed: int = Field(default=0, env="VALIDATION_SEED")
    skew_step: float = Field(default=1e-6, env="SKEW_STEP")

    # Metrics
    tail_fraction: float = Field(default=0.5, env="TAIL_FRACTION")
    settling_band: float = Field(default=1e-3, env="SETTLING_BAND")
    lyapunov_max_step_increase: float = Field(default=1e-6, env="LYAPUNOV_MAX_STEP_INCREASE")
    lyapunov_max_increase_run: int = Field(default=10, env="LYAPUNOV_MAX_INCREASE_RUN")
    lyapunov_min_bound_fraction: float = Field(default=0.99, env="LYAPUNOV_MIN_BOUND_FRACTION")

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8")


# Create global settings instance
settings = Settings()
