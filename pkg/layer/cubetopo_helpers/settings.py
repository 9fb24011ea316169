from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

import toml
from aws_lambda_powertools.utilities.validation import SchemaValidationError, validate

from cubetopo_helpers.errors import InputError, ParseError

SETTINGS_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "tietze_budget": {"type": "integer", "minimum": 1},
        "collapse_budget": {"type": "integer", "minimum": 1},
        "k_max": {"type": "integer", "minimum": 1},
        "vertex_cap": {"type": "integer", "minimum": 1},
        "saturation_rounds": {"type": "integer", "minimum": 0},
    },
}


@dataclass(frozen=True)
class Settings:
    """
    Budgets and caps shared by all commands.

    Attributes:
        tietze_budget (int): Rewriting steps for fundamental group certificates.
        collapse_budget (int): Elementary collapses tried before giving up.
        k_max (int): Steps a flow may take for one strict descent.
        vertex_cap (int): Largest Stein-Farley truncation.
        saturation_rounds (int): Generator translation rounds for truncations.
    """

    tietze_budget: int = 10000
    collapse_budget: int = 100000
    k_max: int = 64
    vertex_cap: int = 10000
    saturation_rounds: int = 1

    def updated(self, overrides: Mapping[str, Any]) -> "Settings":
        """
        Returns a copy with every known, non-None key of overrides applied.

        Raises:
            InputError: If an applied value is out of range.
        """
        names = {f.name for f in fields(self)}
        changes = {k: v for k, v in overrides.items() if k in names and v is not None}
        settings = replace(self, **changes)
        settings.validate()
        return settings

    def validate(self) -> None:
        try:
            validate(event=asdict(self), schema=SETTINGS_SCHEMA)
        except SchemaValidationError as e:
            raise InputError("Invalid settings: %s" % (getattr(e, "validation_message", None) or e))


def load_settings(path: Optional[Path] = None) -> Settings:
    """
    Defaults, overridden by an optional TOML settings file.

    Raises:
        ParseError: If the file cannot be read or has unknown keys.
    """
    if path is None:
        return Settings()
    try:
        content = toml.load(path)
    except toml.TomlDecodeError as e:
        raise ParseError("Invalid settings file %s: %s" % (path, e.msg), e.lineno)
    except OSError as e:
        raise ParseError("Cannot read settings file %s: %s" % (path, e.strerror))
    try:
        validate(event=content, schema=SETTINGS_SCHEMA)
    except SchemaValidationError as e:
        raise ParseError(
            "Invalid settings file %s: %s" % (path, getattr(e, "validation_message", None) or e)
        )
    return Settings().updated(content)
