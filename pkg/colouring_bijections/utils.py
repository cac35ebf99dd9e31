"""
Utility functions for run identifiers and output paths.
"""

from datetime import datetime
from pathlib import Path
from typing import List, Union


def generate_run_id() -> str:
    """Generate a unique run identifier."""
    return datetime.now().strftime("%Y%m%d_%H%M%S_%f")[:-3]


def ensure_directory(path: Path) -> Path:
    """Ensure directory exists, creating if necessary."""
    path.mkdir(parents=True, exist_ok=True)
    return path


def numbered_paths(path: Union[str, Path], count: int) -> List[Path]:
    """
    Output paths for several results written under one name.

    A single result keeps the name; otherwise ``sigma.perm`` becomes
    ``sigma_0.perm``, ``sigma_1.perm``, ...

    Args:
        path: Requested output path
        count: Number of files to write

    Returns:
        List of paths, one per result
    """
    path = Path(path)
    if count <= 1:
        return [path][:count]
    return [path.with_name(f"{path.stem}_{i}{path.suffix}") for i in range(count)]
