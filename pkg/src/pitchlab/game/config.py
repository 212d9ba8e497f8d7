"""Plain key=value config files for the gridworld game, and the --env
specifier grammar used by the command line (rps | matrix:FILE |
minipitch[:FILE])."""

from __future__ import annotations

from typing import Union

from .matrix import MatrixGame, load_matrix, matching_pennies, rock_paper_scissors
from .types import MiniPitchConfig

_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}

_INT_FIELDS = ("width", "height", "n_per_team", "max_steps", "seed")
_BOOL_FIELDS = ("academy_mode", "halftime_swap")


def parse_minipitch_config(text: str) -> MiniPitchConfig:
    fields: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _INT_FIELDS:
            fields[key] = int(value)
        elif key in _BOOL_FIELDS:
            if value.lower() not in _BOOL:
                raise ValueError(f"line {lineno}: bad boolean {value!r}")
            fields[key] = _BOOL[value.lower()]
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    return MiniPitchConfig(**fields)


def load_minipitch_config(path) -> MiniPitchConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_minipitch_config(fh.read())


def parse_env_spec(spec: str) -> Union[MatrixGame, MiniPitchConfig]:
    """rps | pennies | matrix:FILE | minipitch | minipitch:FILE"""
    if spec == "rps":
        return rock_paper_scissors()
    if spec == "pennies":
        return matching_pennies()
    if spec.startswith("matrix:"):
        return load_matrix(spec.split(":", 1)[1])
    if spec == "minipitch":
        return MiniPitchConfig()
    if spec.startswith("minipitch:"):
        return load_minipitch_config(spec.split(":", 1)[1])
    raise ValueError(
        f"unknown --env {spec!r} (expected rps, pennies, matrix:FILE, "
        f"minipitch or minipitch:FILE)"
    )
