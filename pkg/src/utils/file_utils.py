"""Utility functions for file operations."""

import json
import os
from pathlib import Path
from typing import Any, Union

PathLike = Union[str, os.PathLike]


def ensure_dir(directory: PathLike) -> Path:
    """Create a directory (and parents) if it does not exist.

    Args:
        directory: Directory to create

    Returns:
        The directory as a Path
    """
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    return path


def save_json_to_file(data: Any, file_path: PathLike, indent: int = 2) -> str:
    """Save JSON data to a file, creating the parent directory.

    Output bytes are a deterministic function of `data`: insertion order is
    kept and the file ends with a single newline.

    Args:
        data: JSON-serializable object
        file_path: Destination file
        indent: Number of spaces for JSON indentation (default: 2)

    Returns:
        Path to the saved file
    """
    if data is None:
        raise ValueError(f"Cannot save empty data: {file_path}")

    path = Path(file_path)
    if path.parent != Path(""):
        ensure_dir(path.parent)

    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=indent, ensure_ascii=False)
        f.write("\n")

    return str(path)


def load_json_file(file_path: PathLike) -> Any:
    """Load a JSON file.

    Args:
        file_path: File to read

    Returns:
        Parsed JSON content
    """
    with open(file_path, encoding="utf-8") as f:
        return json.load(f)
