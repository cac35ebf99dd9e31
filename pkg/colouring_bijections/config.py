"""
Configuration management using Pydantic models with environment overrides.
"""

import os
from enum import Enum
from pathlib import Path
from typing import List

from pydantic import BaseModel, Field, field_validator


PACKAGE_ROOT = Path(__file__).resolve().parent
DEFAULT_DATA_DIR = PACKAGE_ROOT.parent / "data"


class LiftKind(str, Enum):
    """Normal subgroups a colouring bijection can be lifted across."""
    C3XC3_CENTRAL = "C3xC3-central"
    C3XC3 = "C3xC3"
    C9XC3 = "C9xC3"


class GroupLimits(BaseModel):
    """Size guards for table construction and structural queries."""
    max_table_order: int = Field(
        default_factory=lambda: int(os.getenv("COLOURING_MAX_TABLE_ORDER", "2187")),
        ge=1, le=2187, description="Largest group built as an explicit table"
    )
    max_lifting_order: int = Field(243, ge=1, description="Largest group the lifting routines accept")
    max_automorphism_order: int = Field(243, ge=1, description="Largest group for automorphism enumeration")
    max_generators: int = Field(3, ge=1, description="Largest minimal generating tuple for automorphisms")


class SearchDefaults(BaseModel):
    """Backtracking search defaults."""
    exhaustive_guard: int = Field(81, ge=1, description="Largest order for unbudgeted count/enumerate")
    census_guard: int = Field(16, ge=1, description="Largest order for a full SCM census")
    restart_unit: int = Field(
        default_factory=lambda: int(os.getenv("COLOURING_RESTART_UNIT", "64")),
        ge=1, description="Node allowance of the shortest restart run"
    )
    seed: int = Field(
        default_factory=lambda: int(os.getenv("COLOURING_SEARCH_SEED", "0")),
        ge=0, description="Seed for randomized restarts"
    )
    fallback_budget: int = Field(
        default_factory=lambda: int(os.getenv("COLOURING_FALLBACK_BUDGET", "200000")),
        ge=1, description="Node budget of the search fallback in colour()"
    )


class ProcessingConfig(BaseModel):
    """Processing and performance configuration."""
    max_workers: int = Field(
        default_factory=lambda: int(os.getenv("COLOURING_MAX_WORKERS", "16")),
        ge=1, le=32, description="Maximum number of worker processes or threads"
    )
    default_jobs: int = Field(1, ge=1, description="Jobs used when --jobs is not given")


class PathConfig(BaseModel):
    """Data locations."""
    data_dir: str = Field(
        default_factory=lambda: os.getenv("COLOURING_DATA_DIR", str(DEFAULT_DATA_DIR)),
        description="Directory holding the table permutation files"
    )


class GraphLimits(BaseModel):
    """Limits for the explicit Cayley graph tooling."""
    dimacs_max_order: int = Field(9, ge=1, description="Largest group whose graph may be exported")
    max_verify_order: int = Field(
        default_factory=lambda: int(os.getenv("COLOURING_GRAPH_MAX_ORDER", "81")),
        ge=1, description="Largest group whose graph colouring is checked exhaustively"
    )


class ColourLimits(BaseModel):
    """Strategy settings for the recursive colouring driver."""
    max_order: int = Field(243, ge=1, description="Largest group colour() accepts")
    lift_preference: List[LiftKind] = Field(
        default_factory=lambda: [LiftKind.C3XC3_CENTRAL, LiftKind.C3XC3, LiftKind.C9XC3],
        description="Order in which lifting subgroup kinds are tried"
    )

    @field_validator("lift_preference")
    @classmethod
    def validate_preference(cls, v):
        """Each kind may appear at most once."""
        if len(set(v)) != len(v):
            raise ValueError("lift_preference contains duplicates")
        return v


class Config(BaseModel):
    """Main configuration for the colouring bijection toolkit."""

    groups: GroupLimits = Field(default_factory=GroupLimits)
    search: SearchDefaults = Field(default_factory=SearchDefaults)
    processing: ProcessingConfig = Field(default_factory=ProcessingConfig)
    paths: PathConfig = Field(default_factory=PathConfig)
    graph: GraphLimits = Field(default_factory=GraphLimits)
    colour: ColourLimits = Field(default_factory=ColourLimits)

    log_level: str = Field(
        default_factory=lambda: os.getenv("COLOURING_LOG_LEVEL", "WARNING"),
        description="Log level for console logging"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        """Accept the standard logging level names in any case."""
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    @classmethod
    def from_env(cls) -> "Config":
        """Create configuration with environment variable overrides."""
        return cls()

    def get_data_dir(self) -> Path:
        """Directory of the shipped table files."""
        return Path(self.paths.data_dir)


# Default configuration instance
default_config = Config()
