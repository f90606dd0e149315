from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from dispatchengine.core.errors import ConfigError
from dispatchengine.models.phone_tree import format_validation_error
from dispatchengine.models.policy import ConfidencePolicy


class CliConfig(BaseModel):
    """Options shared by the CLI subcommands"""

    tree_path: Optional[Path] = Field(default=None, description="Phone tree JSON")
    patterns_path: Optional[Path] = Field(default=None, description="Handover patterns JSON")
    stubs_path: Optional[Path] = Field(default=None, description="Stub backend config JSON")
    lambda1: Optional[float] = Field(default=None, gt=0.0, lt=1.0, description="Itemization threshold")
    lambda2: Optional[float] = Field(default=None, gt=0.0, lt=1.0, description="Type threshold")
    trials: Optional[int] = Field(default=None, gt=0, description="Trials per decision")
    cap: Optional[int] = Field(default=None, gt=0, description="Clarification cap")
    seed: int = Field(default=0, description="Base seed of all stub randomness")
    backend: str = Field(default="stub", description="stub or api")
    out_dir: Optional[Path] = Field(default=None, description="Directory for output files")

    @field_validator("tree_path", "patterns_path", "stubs_path")
    @classmethod
    def _file_exists(cls, v: Optional[Path]) -> Optional[Path]:
        if v is not None and not v.is_file():
            raise ValueError(f"file not found: {v}")
        return v

    @field_validator("backend")
    @classmethod
    def _known_backend(cls, v: str) -> str:
        if v not in ("stub", "api"):
            raise ValueError(f"unknown backend '{v}'")
        return v

    @classmethod
    def from_options(cls, **options: Any) -> "CliConfig":
        """Build from click options, reporting bad values as ConfigError."""
        try:
            return cls(**options)
        except ValidationError as e:
            raise ConfigError("Invalid options", format_validation_error(e)) from e

    def policy(self) -> ConfidencePolicy:
        overrides: Dict[str, Any] = {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "trials": self.trials,
            "clarification_cap": self.cap,
        }
        try:
            return ConfidencePolicy(**{k: v for k, v in overrides.items() if v is not None})
        except ValidationError as e:
            raise ConfigError("Invalid confidence policy", format_validation_error(e)) from e
