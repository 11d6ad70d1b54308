"""Run configuration: a flat ``key = value`` file.

Resource paths are resolved relative to the directory of the config
file.  ``ASAP_RESOURCES`` may point at an alternative resource root; it
then supplies the default config (``asap.conf``) and default facet map.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import List, Optional, Tuple

from .errors import ConfigNotFound, MalformedInput, MissingResource
from .jape.parser import rule_file_paths
from .structure import DEFAULT_STRIP_TYPES

CONFIG_NAME = "asap.conf"
KNOWN_KEYS = ("gazetteer_index", "rule_files", "facet_mapping", "strip_types", "beta",
              "output_dir", "html_strip")


def resources_root() -> Path:
    env = os.environ.get("ASAP_RESOURCES")
    if env:
        return Path(env)
    return Path(str(resources.files("asap") / "resources"))


def default_config_path() -> Path:
    return resources_root() / CONFIG_NAME


@dataclass
class Config:
    gazetteer_index: Path
    rule_files: List[Path]
    facet_mapping: Path
    strip_types: Tuple[str, ...] = DEFAULT_STRIP_TYPES
    beta: float = 1.0
    output_dir: Path = Path("out")
    html_strip: bool = True
    source: Optional[Path] = field(default=None, compare=False)

    def digest(self) -> str:
        """SHA-256 over the settings and the bytes of every resource they name."""
        h = hashlib.sha256()
        h.update(repr((self.strip_types, self.beta, self.html_strip)).encode())
        paths = [self.gazetteer_index, *_list_files(self.gazetteer_index), self.facet_mapping]
        for rf in self.rule_files:
            paths += rule_file_paths(rf)
        for p in paths:
            h.update(p.name.encode())
            h.update(p.read_bytes())
        return h.hexdigest()


def _list_files(index: Path) -> List[Path]:
    out = []
    for line in index.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            p = index.parent / line.split(":", 1)[0].strip()
            if p.is_file():
                out.append(p)
    return out


def _parse_bool(value: str, lineno: int, origin: str) -> bool:
    v = value.lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise MalformedInput(f"not a boolean: {value!r}", lineno, 1, origin)


def load_config(path=None) -> Config:
    path = Path(path) if path is not None else default_config_path()
    if not path.is_file():
        raise ConfigNotFound(str(path))
    base = path.parent
    raw = {}
    lines = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in KNOWN_KEYS:
            raise MalformedInput(f"unknown or malformed setting {line!r}", lineno, 1, str(path))
        raw[key] = value
        lines[key] = lineno

    def resource(value) -> Path:
        p = Path(value)
        p = p if p.is_absolute() else base / p
        if not p.is_file():
            raise MissingResource(str(p))
        return p

    if "gazetteer_index" not in raw:
        raise MalformedInput("gazetteer_index is required", 1, 1, str(path))
    if not raw.get("rule_files"):
        raise MalformedInput("rule_files is required", 1, 1, str(path))
    cfg = Config(
        gazetteer_index=resource(raw["gazetteer_index"]),
        rule_files=[resource(v.strip()) for v in raw["rule_files"].split(",") if v.strip()],
        facet_mapping=(resource(raw["facet_mapping"]) if "facet_mapping" in raw
                       else resource(str(resources_root() / "facets.map"))),
        source=path,
    )
    if "strip_types" in raw:
        cfg.strip_types = tuple(t.strip() for t in raw["strip_types"].split(",") if t.strip())
    if "beta" in raw:
        try:
            cfg.beta = float(raw["beta"])
        except ValueError:
            raise MalformedInput(f"beta is not a number: {raw['beta']!r}",
                                 lines["beta"], 1, str(path)) from None
    if "output_dir" in raw:
        cfg.output_dir = Path(raw["output_dir"])
    if "html_strip" in raw:
        cfg.html_strip = _parse_bool(raw["html_strip"], lines["html_strip"], str(path))
    return cfg
