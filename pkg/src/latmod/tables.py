"""Shared result containers: exact series tables and extrapolation reports.

All exact enumeration results are Python ints (arbitrary precision), so
``BigCount`` is just an alias documenting intent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

BigCount = int


@dataclass
class SeriesTable:
    """Ordered map from an integer index (n, r, or k) to an exact count.

    Carries provenance metadata so emitted tables are self-describing.
    """

    model: str
    entries: dict[int, int] = field(default_factory=dict)
    lattice: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {int(k): int(v) for k, v in sorted(self.entries.items())}

    def __getitem__(self, n: int) -> int:
        return self.entries[n]

    def __contains__(self, n: int) -> bool:
        return n in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def indices(self) -> list[int]:
        return list(self.entries.keys())

    def values(self) -> list[int]:
        return list(self.entries.values())

    def items(self):
        return self.entries.items()

    def to_jsonable(self) -> dict:
        return {
            "type": "SeriesTable",
            "model": self.model,
            "lattice": self.lattice,
            "params": self.params,
            # JSON objects need string keys; ints round-trip exactly in Python
            "entries": {str(k): v for k, v in self.entries.items()},
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "SeriesTable":
        return cls(
            model=obj["model"],
            lattice=obj.get("lattice"),
            params=obj.get("params", {}),
            entries={int(k): int(v) for k, v in obj["entries"].items()},
        )

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SeriesTable":
        return cls.from_jsonable(json.loads(text))


@dataclass
class EstimateReport:
    """Extrapolated limit of a finite-size sequence plus its raw inputs.

    ``error_proxy`` is the spread of the last accelerated iterates; it is a
    convergence indicator, not a rigorous bound.  ``target``/``residual`` are
    filled when a registry value exists to compare against.
    """

    value: float
    raw: list[float]
    method: str
    error_proxy: float
    indices: list[int] = field(default_factory=list)
    target: float | None = None
    residual: float | None = None
    low_confidence: bool = False
    notes: str = ""

    def to_jsonable(self) -> dict:
        return {
            "type": "EstimateReport",
            "value": self.value,
            "raw": list(self.raw),
            "method": self.method,
            "error_proxy": self.error_proxy,
            "indices": list(self.indices),
            "target": self.target,
            "residual": self.residual,
            "low_confidence": self.low_confidence,
            "notes": self.notes,
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "EstimateReport":
        return cls(
            value=obj["value"],
            raw=list(obj["raw"]),
            method=obj["method"],
            error_proxy=obj["error_proxy"],
            indices=list(obj.get("indices", [])),
            target=obj.get("target"),
            residual=obj.get("residual"),
            low_confidence=obj.get("low_confidence", False),
            notes=obj.get("notes", ""),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "EstimateReport":
        return cls.from_jsonable(json.loads(text))
