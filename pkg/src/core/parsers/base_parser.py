"""
Base parser class for graph, matrix and signal files
"""
import logging
import os
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Tuple

from ..exceptions import ConfigError
from ..models import calculate_file_hash
from ...utils.security import validate_input_path

# Configure logging
logger = logging.getLogger(__name__)


class BaseParser(ABC):
    """Base class for input file parsers"""

    extensions: Tuple[str, ...] = ()

    def __init__(self, file_path: str):
        """
        Initialize parser with a file path

        Args:
            file_path: Path to the input file
        """
        self.file_path = Path(file_path)
        self.file_hash = ""

        if not validate_input_path(str(file_path), self.extensions or None):
            logger.error(f"Invalid or unsafe input path: {file_path}")
            raise ConfigError(f"Invalid input file (missing, unsafe or wrong extension): {file_path}")

        if not os.access(self.file_path, os.R_OK):
            logger.error(f"Input file is not readable: {self.file_path.name}")
            raise PermissionError("Input file is not readable")

        # provenance for result metadata
        self.file_hash = calculate_file_hash(str(self.file_path))
        logger.info(f"Input {self.file_path.name} loaded, hash: {self.file_hash[:16]}...")

    def _fail(self, message: str):
        logger.error(f"{self.file_path.name}: {message}")
        raise ConfigError(f"{self.file_path.name}: {message}")

    @abstractmethod
    def parse(self) -> Any:
        """
        Parse the file

        Returns:
            Parsed object
        """
        pass
