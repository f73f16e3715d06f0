"""Dataset registry: which training datasets exist, their label schemes, caps.

The registry file is a JSON array of entries:
  {"dataset_id": str, "label_scheme": "three_way"|"binary_contradiction"|
   "binary_neutral"|"regression", "enabled": bool, "is_qa": bool,
   "cap": int, "source": str (optional), "note": str (optional)}

Unknown dataset ids are always errors, never defaulted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError, UnknownDatasetError

LABEL_SCHEMES = ("three_way", "binary_contradiction", "binary_neutral", "regression")
DEFAULT_CAP = 20000


@dataclass(frozen=True)
class DatasetRegistryEntry:
    dataset_id: str
    label_scheme: str
    enabled: bool = True
    is_qa: bool = False
    cap: int = DEFAULT_CAP
    source: str | None = None
    note: str | None = None

    def __post_init__(self):
        if self.label_scheme not in LABEL_SCHEMES:
            raise ConfigError(
                f"dataset {self.dataset_id!r}: unknown label scheme {self.label_scheme!r}"
            )
        if self.cap <= 0:
            raise ConfigError(f"dataset {self.dataset_id!r}: cap must be positive, got {self.cap}")

    def source_name(self) -> str:
        return self.source if self.source else f"{self.dataset_id}.jsonl"


@dataclass
class DatasetRegistry:
    entries: dict[str, DatasetRegistryEntry] = field(default_factory=dict)

    def get(self, dataset_id: str) -> DatasetRegistryEntry:
        try:
            return self.entries[dataset_id]
        except KeyError:
            raise UnknownDatasetError(dataset_id) from None

    def __contains__(self, dataset_id: str) -> bool:
        return dataset_id in self.entries

    def enabled_entries(self) -> list[DatasetRegistryEntry]:
        return [e for e in self.entries.values() if e.enabled]

    @classmethod
    def from_list(cls, raw: list[dict]) -> "DatasetRegistry":
        entries: dict[str, DatasetRegistryEntry] = {}
        for item in raw:
            try:
                entry = DatasetRegistryEntry(
                    dataset_id=item["dataset_id"],
                    label_scheme=item["label_scheme"],
                    enabled=bool(item.get("enabled", True)),
                    is_qa=bool(item.get("is_qa", False)),
                    cap=int(item.get("cap", DEFAULT_CAP)),
                    source=item.get("source"),
                    note=item.get("note"),
                )
            except KeyError as exc:
                raise ConfigError(f"registry entry missing field {exc}: {item!r}") from exc
            if entry.dataset_id in entries:
                raise ConfigError(f"duplicate registry entry for {entry.dataset_id!r}")
            entries[entry.dataset_id] = entry
        return cls(entries)

    @classmethod
    def from_path(cls, path: str | Path) -> "DatasetRegistry":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"registry file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"registry file {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, list):
            raise ConfigError(f"registry file {path} must contain a JSON array")
        return cls.from_list(raw)

    @classmethod
    def default(cls) -> "DatasetRegistry":
        """The packaged registry covering the standard training datasets."""
        global _DEFAULT
        if _DEFAULT is None:
            text = resources.files("factalign.data").joinpath("registry.json").read_text("utf-8")
            _DEFAULT = cls.from_list(json.loads(text))
        return _DEFAULT


_DEFAULT: DatasetRegistry | None = None
