"""
Experiment configuration loading
"""
import json
import logging
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..core.exceptions import ConfigError
from ..core.experiments import ExperimentConfig
from .security import validate_input_path

# Configure logging
logger = logging.getLogger(__name__)

CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)}


def parse_orders(text: str) -> List[int]:
    """
    Parse an order list such as "1..6", "2,4,8" or "1..3,6"

    Args:
        text: Order specification

    Returns:
        Sorted distinct positive orders
    """
    orders = set()
    try:
        for part in str(text).split(','):
            part = part.strip()
            if not part:
                continue
            if '..' in part:
                low, high = part.split('..', 1)
                orders.update(range(int(low), int(high) + 1))
            else:
                orders.add(int(part))
    except ValueError:
        logger.error(f"Invalid order list: {text}")
        raise ConfigError(f"Invalid order list '{text}'")
    if not orders or min(orders) < 1:
        raise ConfigError(f"Orders must be positive, got '{text}'")
    return sorted(orders)


def _load_json(config_path: str) -> Dict[str, Any]:
    if not validate_input_path(config_path, ('.json',)):
        logger.error(f"Invalid configuration path: {config_path}")
        raise ConfigError(f"Configuration file not found or not a .json file: {config_path}")
    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in configuration file: {str(e)}")
        raise ConfigError(f"Invalid JSON in {Path(config_path).name}: {e}")
    except OSError as e:
        logger.error(f"Error reading configuration: {type(e).__name__}: {str(e)}")
        raise ConfigError(f"Cannot read {config_path}")
    if not isinstance(data, dict):
        raise ConfigError("Configuration must be a JSON object")
    logger.debug(f"Loaded {len(data)} configuration keys from {Path(config_path).name}")
    return data


def build_experiment_config(values: Dict[str, Any]) -> ExperimentConfig:
    """
    Build and validate an ExperimentConfig from plain values

    Args:
        values: Keys named after ExperimentConfig fields

    Returns:
        Validated ExperimentConfig
    """
    unknown = sorted(set(values) - CONFIG_KEYS)
    if unknown:
        logger.error(f"Unknown configuration keys: {unknown}")
        raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
    values = dict(values)
    if isinstance(values.get('orders'), str):
        values['orders'] = parse_orders(values['orders'])
    try:
        cfg = ExperimentConfig(**values)
    except TypeError as e:
        raise ConfigError(str(e))
    try:
        cfg.validate()
    except TypeError as e:
        logger.error(f"Configuration value has the wrong type: {e}")
        raise ConfigError(f"Configuration value has the wrong type: {e}")
    return cfg


def load_experiment_config(config_path: Optional[str] = None,
                           overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Load an experiment configuration file and apply overrides

    Args:
        config_path: JSON file (optional)
        overrides: Values taking precedence over the file; None entries are ignored

    Returns:
        Validated ExperimentConfig
    """
    values = _load_json(config_path) if config_path else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    cfg = build_experiment_config(values)
    logger.info(f"Experiment configuration ready: {cfg.name}, n={cfg.n}, orders={cfg.orders}")
    return cfg
