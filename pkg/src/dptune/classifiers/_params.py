"""Declared parameter spaces and concrete settings for classifiers.

Kinds follow the tuning-table convention: numeric, logical, factor. Numeric
candidate lists are strictly increasing and the default is always one of the
candidates.
"""

from collections.abc import Mapping
from dataclasses import dataclass

KINDS = ("numeric", "logical", "factor")


def _kind_ok(kind: str, value) -> bool:
    if kind == "logical":
        return isinstance(value, bool)
    if kind == "numeric":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind == "factor":
        return isinstance(value, str)
    return False


@dataclass(frozen=True)
class ParameterSpec:
    name: str
    kind: str
    default: object
    candidates: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown parameter kind {self.kind!r}")
        cands = tuple(self.candidates)
        if not cands:
            raise ValueError(f"parameter {self.name!r}: empty candidate list")
        if len(set(cands)) != len(cands):
            raise ValueError(f"parameter {self.name!r}: duplicate candidates")
        for c in cands:
            if not _kind_ok(self.kind, c):
                raise ValueError(f"parameter {self.name!r}: candidate {c!r} is not {self.kind}")
        if self.kind == "numeric" and any(a >= b for a, b in zip(cands, cands[1:])):
            raise ValueError(f"parameter {self.name!r}: numeric candidates must strictly increase")
        if self.default not in cands:
            raise ValueError(f"parameter {self.name!r}: default {self.default!r} not a candidate")
        object.__setattr__(self, "candidates", cands)


class ParameterSetting(Mapping):
    """Immutable name -> value assignment; hashable so it can key caches."""

    def __init__(self, values: dict | None = None, **kwargs):
        merged = dict(values or {})
        merged.update(kwargs)
        self._values = {k: merged[k] for k in sorted(merged)}

    def __getitem__(self, key):
        return self._values[key]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def key(self) -> tuple:
        return tuple(self._values.items())

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        if isinstance(other, ParameterSetting):
            return self.key() == other.key()
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self._values.items())
        return f"ParameterSetting({inner})"


@dataclass(frozen=True)
class ParameterSpace:
    classifier_id: str
    specs: tuple

    def __post_init__(self):
        specs = tuple(self.specs)
        names = [s.name for s in specs]
        if len(set(names)) != len(names):
            raise ValueError(f"{self.classifier_id}: duplicate parameter names")
        object.__setattr__(self, "specs", specs)

    @property
    def names(self) -> tuple:
        return tuple(s.name for s in self.specs)

    @property
    def size(self) -> int:
        n = 1
        for s in self.specs:
            n *= len(s.candidates)
        return n

    def default_setting(self) -> ParameterSetting:
        return ParameterSetting({s.name: s.default for s in self.specs})

    def validate(self, setting: ParameterSetting) -> None:
        given = set(setting)
        declared = set(self.names)
        if given != declared:
            raise ValueError(
                f"{self.classifier_id}: setting names {sorted(given)} "
                f"do not match declared {sorted(declared)}"
            )
        for spec in self.specs:
            if not _kind_ok(spec.kind, setting[spec.name]):
                raise ValueError(
                    f"{self.classifier_id}: parameter {spec.name!r} expects a "
                    f"{spec.kind} value, got {setting[spec.name]!r}"
                )
