"""
Path validation for input and output files
"""
import os
import re
from pathlib import Path
from typing import Optional, Tuple

INPUT_EXTENSIONS = ('.tsv', '.txt', '.edges', '.mtx', '.csv', '.json')
OUTPUT_EXTENSIONS = ('.csv', '.json', '.jsonl', '.xlsx', '.tsv', '.mtx')
MAX_INPUT_SIZE = 2 * 1024 * 1024 * 1024  # 2GB
DANGEROUS_PREFIXES = ['/etc', '/sys', '/proc', '/dev', '/boot', '/bin', '/sbin']
MAX_NAME_LENGTH = 255
UNSAFE_NAME_CHARS = re.compile(r"[^A-Za-z0-9._-]+")


def _in_system_directory(path: Path) -> bool:
    if os.name == 'nt':
        return False
    resolved = str(path.resolve())
    return any(resolved == prefix or resolved.startswith(prefix + '/') for prefix in DANGEROUS_PREFIXES)


def validate_export_path(file_path: str, allowed_extensions: Optional[Tuple[str, ...]] = OUTPUT_EXTENSIONS) -> bool:
    """
    Validate an output file path

    Absolute paths are accepted; parent-directory components are not.

    Args:
        file_path: Path to validate
        allowed_extensions: Tuple of allowed file extensions

    Returns:
        True if path is safe, False otherwise
    """
    try:
        path = Path(file_path)

        if '..' in path.parts:
            return False
        if _in_system_directory(path):
            return False

        if allowed_extensions:
            if not any(str(path).lower().endswith(ext) for ext in allowed_extensions):
                return False

        parent = path.parent
        if parent != Path('.') and not parent.is_dir():
            return False

        return True

    except (OSError, ValueError):
        return False


def validate_input_path(file_path: str, allowed_extensions: Optional[Tuple[str, ...]] = INPUT_EXTENSIONS) -> bool:
    """
    Validate an input file path

    Args:
        file_path: Path to an existing file
        allowed_extensions: Tuple of allowed file extensions

    Returns:
        True if path is safe, False otherwise
    """
    try:
        path = Path(file_path)

        # Must be an existing regular file
        if not path.is_file():
            return False
        if _in_system_directory(path):
            return False
        if path.stat().st_size > MAX_INPUT_SIZE:
            return False

        if allowed_extensions:
            if not any(str(path).lower().endswith(ext) for ext in allowed_extensions):
                return False

        return True

    except (OSError, ValueError):
        return False


def sanitize_filename(filename: str) -> str:
    """
    Make a derived output name (such as a per-angle beampattern file) safe

    Runs of characters outside letters, digits, dot, dash and underscore
    become one underscore; the stem is cut so the name fits MAX_NAME_LENGTH.

    Args:
        filename: Proposed file name without directories

    Returns:
        Safe file name
    """
    cleaned = UNSAFE_NAME_CHARS.sub("_", filename.replace("..", "_"))
    if len(cleaned) <= MAX_NAME_LENGTH:
        return cleaned
    stem, dot, suffix = cleaned.rpartition(".")
    if not dot:
        return cleaned[:MAX_NAME_LENGTH]
    return stem[:MAX_NAME_LENGTH - len(suffix) - 1] + "." + suffix
