"""Engine configuration: analyzer resources, toggles and BM25 parameters.

A config can come from a JSON file whose keys mirror :class:`EngineConfig`
fields; relative resource paths resolve against the file's directory.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .analysis import AnalyzerConfig
from .errors import ResourceError, SiltSearchError
from .retrieval import BM25Params

RESOURCE_FIELDS = ("stopwords", "stem_dict", "synonyms", "fold_table")
SEARCH_DEPTH = 10
EVAL_DEPTH = 1000


class ConfigError(SiltSearchError, ValueError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    stopwords: Optional[str] = None
    stem_dict: Optional[str] = None
    synonyms: Optional[str] = None
    fold_table: Optional[str] = None
    fold_homophones: bool = True
    enable_stemming: bool = True
    enable_synonyms: bool = True
    k1: float = 1.2
    b: float = 0.75
    k: Optional[int] = None

    @classmethod
    def from_dict(cls, data: dict, base_dir=None) -> EngineConfig:
        return cls().merged(data, base_dir)

    @classmethod
    def load(cls, path) -> EngineConfig:
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return cls.from_dict(data, path.parent)

    def merged(self, overrides: dict, base_dir=None) -> EngineConfig:
        """Return a copy with every non-None value of ``overrides`` applied."""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        changes = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key in RESOURCE_FIELDS:
                p = Path(value)
                if base_dir is not None and not p.is_absolute():
                    p = Path(base_dir) / p
                value = str(p)
            changes[key] = value
        return replace(self, **changes)

    def validate(self) -> EngineConfig:
        for name in RESOURCE_FIELDS:
            path = getattr(self, name)
            if path is not None and not Path(path).is_file():
                raise ResourceError(f"{name} file not found: {path}")
        if self.k is not None and self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        self.params()
        return self

    def params(self) -> BM25Params:
        try:
            return BM25Params(float(self.k1), float(self.b))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def analyzer(self) -> AnalyzerConfig:
        self.validate()
        return AnalyzerConfig.from_files(
            self.stopwords,
            self.stem_dict,
            self.synonyms,
            self.fold_table,
            fold_homophones=self.fold_homophones,
            enable_stemming=self.enable_stemming,
            enable_synonyms=self.enable_synonyms,
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        for name in RESOURCE_FIELDS:
            if data[name] is not None:
                data[name] = str(Path(data[name]).resolve())
        return data
