"""
JSON document parser (filter specifications, design reports)
"""
import json
import logging
from typing import Any, Dict

from .base_parser import BaseParser

logger = logging.getLogger(__name__)


class JsonParser(BaseParser):
    """Parse a JSON object"""

    extensions = ('.json',)

    def parse(self) -> Dict[str, Any]:
        try:
            with open(self.file_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            self._fail(f"invalid JSON ({e})")
        if not isinstance(data, dict):
            self._fail("expected a JSON object")
        logger.debug(f"Parsed JSON document with keys {sorted(data)}")
        return data
