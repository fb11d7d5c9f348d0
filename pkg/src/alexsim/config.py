"""
Configuration management for AlexSim.

This module provides the process-wide defaults used when a scenario file
leaves a value out: plant and control timing, fuzzy engine resolution,
tuning search schedules and color classifier tolerances.

Settings are never read from the environment or from ``.env`` files; runs
are reproducible from command-line flags and scenario files alone.
"""

from typing import Optional, Tuple

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class LoggingConfig(BaseModel):
    """Configuration for logging."""

    level: str = Field(default="INFO")
    format: str = Field(
        default=(
            "<level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - "
            "<level>{message}</level>\n"
        )
    )
    file: Optional[str] = Field(default=None)


class SimulationDefaults(BaseModel):
    """Plant and control-loop timing defaults."""

    dt_plant: float = Field(
        default=0.001, gt=0.0, le=0.001, description="Mechanical Euler step (s)"
    )
    dt_control: float = Field(default=0.01, gt=0.0, description="Control period (s)")
    actuation_delay: int = Field(
        default=0, ge=0, description="Control periods before a PWM is applied"
    )
    watchdog_limit: int = Field(default=50, gt=0, description="Encoder discrepancy limit (counts)")
    completion_tolerance: int = Field(default=5, ge=0, description="Setpoint tolerance (counts)")
    settle_periods: int = Field(default=5, gt=0)
    output_limit: float = Field(default=255.0, gt=0.0)
    counts_per_rev: int = Field(default=360, gt=0)
    mass: float = Field(default=2.0, gt=0.0, description="Robot mass (kg)")
    duration: float = Field(default=20.0, gt=0.0)


class FuzzyDefaults(BaseModel):
    """Fuzzy engine defaults."""

    centroid_samples: int = Field(default=1001, ge=3)
    k_e: float = Field(default=1.0, gt=0.0, description="Error quantization gain")
    k_ec: float = Field(default=1.0, gt=0.0, description="Error-rate quantization gain")
    scales: Tuple[float, float, float] = Field(
        default=(0.0, 0.0, 0.0), description="s_p, s_i, s_d when a scenario omits them"
    )


class TuningDefaults(BaseModel):
    """Search schedules for the automated tuning procedures."""

    kp_start: float = Field(default=0.1, gt=0.0)
    kp_factor: float = Field(default=1.5, gt=1.0)
    kp_max: float = Field(default=1000.0, gt=0.0)
    ki_start: float = Field(default=1e-4, gt=0.0)
    ki_factor: float = Field(default=2.0, gt=1.0)
    ki_max: float = Field(default=10.0, gt=0.0)
    kd_start: float = Field(default=1e-3, gt=0.0)
    kd_factor: float = Field(default=2.0, gt=1.0)
    kd_max: float = Field(default=10.0, gt=0.0)
    sustained_band: Tuple[float, float] = Field(default=(0.9, 1.1))
    quarter_decay: float = Field(default=0.25)
    quarter_band: float = Field(default=0.1)
    peak_distance: int = Field(default=3, ge=1, description="Minimum samples between peaks")
    peak_prominence: float = Field(default=0.01, ge=0.0, description="Fraction of max |error|")
    bisection_tolerance: float = Field(
        default=0.01, gt=0.0, description="Fraction of upper bracket"
    )
    steady_state_tolerance: float = Field(default=0.01, gt=0.0, description="Fraction of setpoint")


class ColorDefaults(BaseModel):
    """Color classifier defaults."""

    ambiguity_tolerance: float = Field(default=1e-9, ge=0.0)
    noise: float = Field(default=0.0, ge=0.0)


class Settings(BaseSettings):
    """Root configuration for the simulator."""

    model_config = SettingsConfigDict(extra="ignore", validate_assignment=True)

    logging: LoggingConfig = LoggingConfig()
    simulation: SimulationDefaults = SimulationDefaults()
    fuzzy: FuzzyDefaults = FuzzyDefaults()
    tuning: TuningDefaults = TuningDefaults()
    color: ColorDefaults = ColorDefaults()

    debug_mode: bool = Field(default=False, description="Enable debug logging")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Explicit values only; no environment or dotenv lookups.
        return (init_settings,)

    def model_post_init(self, __context: object) -> None:
        if self.debug_mode:
            self.logging.level = "DEBUG"


# Global singleton instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Reset the global settings instance (useful for testing)."""
    global _settings
    _settings = None
