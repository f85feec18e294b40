"""File formats: canonical rational strings, configuration JSON, certificates."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .lines3d import Configuration, Line4


def rational_str(x) -> str:
    """``"p/q"`` with ``q`` omitted when 1."""
    return str(Fraction(x))


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise TypeError(f"expected a 'p/q' string, got {type(s).__name__}")


def config_to_json(config: Configuration) -> dict:
    return {
        "label": config.label,
        "lines": [[rational_str(v) for v in line.coords()] for line in config.lines],
    }


def config_from_json(data: dict) -> Configuration:
    rows = data["lines"]
    for k, row in enumerate(rows):
        if len(row) != 4:
            raise ValueError(f"line {k} must have 4 coordinates, got {len(row)}")
    return Configuration(
        tuple(Line4(*(parse_rational(v) for v in row)) for row in rows), data.get("label", "")
    )


def dumps(data) -> str:
    """Deterministic JSON text (sorted keys, trailing newline)."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_config(path) -> Configuration:
    return config_from_json(json.loads(Path(path).read_text()))


def save_config(config: Configuration, path) -> None:
    write_atomic(path, dumps(config_to_json(config)))


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".cert.json")


def save_certificate(config: Configuration, path, trans: int, seed: int | None) -> None:
    """Configuration JSON plus a sidecar ``{"trans", "verified", "seed"}``."""
    save_config(config, path)
    write_atomic(sidecar_path(path), dumps({"trans": trans, "verified": True, "seed": seed}))


def load_certificate(path) -> tuple[Configuration, dict]:
    return load_config(path), json.loads(sidecar_path(path).read_text())
