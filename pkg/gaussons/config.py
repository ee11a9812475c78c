"""
Configuration files for the experiment commands.

A configuration file holds one `key = value` pair per line. Blank lines and
text after `#` are ignored. Command-line overrides use the same `key=value`
form and are applied after the file. Values stay strings until the
ExperimentConfig model validates them, so every error is reported in one
place and as a ConfigError.
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union

from pydantic import ValidationError

from gaussons.core.errors import ConfigError
from gaussons.models.data_models import ExperimentConfig

logger = logging.getLogger(__name__)


def parse_assignment(text: str, where: str = "override") -> Tuple[str, str]:
    """
    Split `key = value` into a stripped pair.

    >>> parse_assignment("grid.N = 2048")
    ('grid.N', '2048')
    """
    key, sep, value = text.partition("=")
    key, value = key.strip(), value.strip()
    if not sep or not key:
        raise ConfigError(f"{where}: expected key=value, got {text!r}")
    return key, value


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Raw key/value pairs of a configuration file, later keys winning."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read configuration file {path}: {e}") from e
    values: Dict[str, str] = {}
    for number, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = parse_assignment(line, where=f"{path}:{number}")
        if key in values:
            logger.debug(f"[load_config] {key} set twice in {path}, keeping line {number}")
        values[key] = value
    return values


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Iterable[str] = (),
) -> ExperimentConfig:
    """
    Build an ExperimentConfig from a file and key=value overrides.

    Args:
        path: Configuration file, or None for defaults only
        overrides: Assignments applied after the file

    Returns:
        ExperimentConfig: The validated configuration

    Raises:
        ConfigError: Unreadable file, malformed line, unknown key or invalid
            value (physical keys are checked against PhysParams)
    """
    values = read_config_file(path) if path is not None else {}
    for item in overrides:
        key, value = parse_assignment(item)
        values[key] = value
    try:
        cfg = ExperimentConfig.model_validate(values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigError(f"invalid configuration: {problems}") from e
    logger.debug(f"[load_config] loaded {len(values)} keys from {path or 'defaults'}")
    return cfg


def dump_config(cfg: ExperimentConfig) -> str:
    """Render a configuration back to the file format, aliases included."""
    lines = []
    for key, value in cfg.model_dump(by_alias=True, mode="json").items():
        if isinstance(value, list):
            value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
