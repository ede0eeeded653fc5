"""Domain types shared by every other module: property schemas, visual-impact
scores, variation configs, coverage reports, and sampling requests.

All types are immutable value objects with canonical JSON forms. No I/O and no
policy lives here; validation is a total function returning violation strings.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Sequence

from .values import JsonValue, canonicalize, value_key, values_equal


class PropertyKind(str, Enum):
    BOOLEAN = "boolean"
    NUMBER = "number"
    STRING = "string"
    CATEGORICAL = "categorical"
    OBJECT = "object"
    ARRAY = "array"
    FUNCTION = "function"
    NODE = "node"


#: Kinds that never receive impact scores and are never sampled.
UNSCORED_KINDS = frozenset({PropertyKind.NODE, PropertyKind.FUNCTION})


@dataclass(frozen=True)
class PropertySpec:
    """One declared component property: its kind, domain, and default."""

    name: str
    kind: PropertyKind
    required: bool = False
    default: Optional[JsonValue] = None
    has_default: bool = False
    allowed_values: Optional[tuple] = None
    description: str = ""
    element_schema: Optional[tuple] = None  # tuple of PropertySpec

    def __post_init__(self):
        if self.default is not None and not self.has_default:
            object.__setattr__(self, "has_default", True)
        if self.allowed_values is not None:
            object.__setattr__(self, "allowed_values", tuple(self.allowed_values))
        if self.element_schema is not None:
            object.__setattr__(self, "element_schema", tuple(self.element_schema))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "required": self.required,
            "default": canonicalize(self.default) if self.has_default else None,
            "allowed_values": (
                [canonicalize(v) for v in self.allowed_values]
                if self.allowed_values is not None else None
            ),
            "description": self.description,
            "element_schema": (
                [s.to_dict() for s in self.element_schema]
                if self.element_schema is not None else None
            ),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PropertySpec":
        return cls(
            name=d["name"],
            kind=PropertyKind(d["kind"]),
            required=bool(d.get("required", False)),
            default=d.get("default"),
            has_default=d.get("default") is not None,
            allowed_values=(
                tuple(d["allowed_values"]) if d.get("allowed_values") is not None else None
            ),
            description=d.get("description") or "",
            element_schema=(
                tuple(PropertySpec.from_dict(e) for e in d["element_schema"])
                if d.get("element_schema") is not None else None
            ),
        )


@dataclass(frozen=True)
class ComponentSchema:
    """The discovered property interface of one component."""

    component_name: str
    has_children: bool
    properties: tuple  # tuple of PropertySpec
    source_digest: str

    def __post_init__(self):
        object.__setattr__(self, "properties", tuple(self.properties))

    def property_map(self) -> dict:
        return {p.name: p for p in self.properties}

    def get(self, name: str) -> Optional[PropertySpec]:
        return self.property_map().get(name)

    def to_dict(self) -> dict:
        return {
            "component_name": self.component_name,
            "has_children": self.has_children,
            "properties": [p.to_dict() for p in self.properties],
            "source_digest": self.source_digest,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComponentSchema":
        return cls(
            component_name=d["component_name"],
            has_children=bool(d["has_children"]),
            properties=tuple(PropertySpec.from_dict(p) for p in d["properties"]),
            source_digest=d["source_digest"],
        )


def source_digest(source: str) -> str:
    """Content hash of analyzed source; changes iff the bytes change."""
    return hashlib.sha256(source.encode("utf-8")).hexdigest()


class ViContextKind(str, Enum):
    """Visually impactful code context kinds, ordered coarse to fine."""

    STRUCTURE = "structure"
    CONTENT = "content"
    STYLING = "styling"

    @property
    def base_score(self) -> float:
        return _BASE_SCORES[self]

    @property
    def rank(self) -> int:
        # Structure > Content > Styling
        return {"structure": 3, "content": 2, "styling": 1}[self.value]


_BASE_SCORES = {
    ViContextKind.STRUCTURE: 100.0,
    ViContextKind.CONTENT: 80.0,
    ViContextKind.STYLING: 60.0,
}


@dataclass(frozen=True)
class ViContextOccurrence:
    """One visually impactful code context a property flows into."""

    property: str
    kind: ViContextKind
    span: tuple  # (byte offset start, end) in the analyzed source
    snippet: str  # verbatim excerpt at span, truncated to 200 chars

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "span": [self.span[0], self.span[1]],
            "snippet": self.snippet,
        }


class ImpactLevel(str, Enum):
    HIGH = "High"
    MEDIUM = "Medium"
    LOW = "Low"


def impact_coefficient(n: int) -> float:
    """Usage-frequency boost with diminishing returns; 1 <= C < 2.

    For n >= ~354 the float value rounds to exactly 2.0; clamp one ulp under
    so the strict upper bound holds by construction.
    """
    coeff = 1.0 + (1.0 - math.exp(-n / 10.0))
    return min(coeff, math.nextafter(2.0, 0.0))


def impact_level(impact: float) -> ImpactLevel:
    if impact >= 100.0:
        return ImpactLevel.HIGH
    if impact >= 80.0:
        return ImpactLevel.MEDIUM
    return ImpactLevel.LOW


@dataclass(frozen=True)
class ImpactScore:
    """The scored visual impact of one property."""

    property: str
    occurrences: tuple  # tuple of ViContextOccurrence
    n: int
    base: float
    coefficient: float
    impact: float
    level: ImpactLevel
    impactful: bool

    @classmethod
    def compute(cls, prop: str, occurrences: Sequence[ViContextOccurrence]) -> "ImpactScore":
        occs = tuple(occurrences)
        n = len(occs)
        if n == 0:
            return cls(prop, occs, 0, 0.0, 1.0, 0.0, ImpactLevel.LOW, False)
        base = max(o.kind.base_score for o in occs)
        coeff = impact_coefficient(n)
        impact = coeff * base
        return cls(prop, occs, n, base, coeff, impact, impact_level(impact),
                   impact >= 100.0)

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "n": self.n,
            "base": self.base,
            "coefficient": round(self.coefficient, 4),
            "impact": round(self.impact, 4),
            "level": self.level.value,
            "impactful": self.impactful,
            "occurrences": [o.to_dict() for o in self.occurrences],
        }


@dataclass(frozen=True)
class VariationConfig:
    """One concrete instantiation: named assignment of values to properties.

    The wire key for ``assignments`` is ``properties`` in every JSON format.
    """

    name: str
    description: str
    assignments: dict

    def __post_init__(self):
        object.__setattr__(self, "assignments",
                           {k: canonicalize(v) for k, v in self.assignments.items()})

    def to_dict(self, key_order: Optional[Sequence[str]] = None) -> dict:
        props = self.assignments
        if key_order is not None:
            ordered = {k: props[k] for k in key_order if k in props}
            ordered.update({k: v for k, v in props.items() if k not in ordered})
            props = ordered
        return {"name": self.name, "description": self.description,
                "properties": dict(props)}

    @classmethod
    def from_dict(cls, d: dict) -> "VariationConfig":
        return cls(name=d["name"], description=d.get("description", ""),
                   assignments=dict(d.get("properties", {})))

    def __eq__(self, other):
        if not isinstance(other, VariationConfig):
            return NotImplemented
        return (self.name == other.name
                and self.description == other.description
                and {k: value_key(v) for k, v in self.assignments.items()}
                == {k: value_key(v) for k, v in other.assignments.items()})

    def __hash__(self):
        return hash((self.name, self.description,
                     tuple(sorted((k, value_key(v)) for k, v in self.assignments.items()))))


@dataclass(frozen=True)
class CoverageEntry:
    """Per-property equivalence-class coverage."""

    property: str
    domain_classes: tuple
    observed_classes: tuple
    ratio: float
    missing: tuple  # human-readable gap descriptors
    children: Optional[tuple] = None  # nested CoverageEntry for object/array

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "domain_classes": list(self.domain_classes),
            "observed_classes": list(self.observed_classes),
            "ratio": self.ratio,
            "missing": list(self.missing),
            "children": ([c.to_dict() for c in self.children]
                         if self.children is not None else None),
        }


@dataclass(frozen=True)
class CoverageReport:
    """Coverage entries plus the aggregate over impactful properties."""

    entries: tuple  # tuple of CoverageEntry
    aggregate: float
    fully_covered: bool

    def entry(self, prop: str) -> Optional[CoverageEntry]:
        for e in self.entries:
            if e.property == prop:
                return e
        return None

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "aggregate": self.aggregate,
            "fully_covered": self.fully_covered,
        }


@dataclass(frozen=True)
class SamplingRequest:
    """Everything one sampling round needs."""

    schema: ComponentSchema
    impacts: tuple  # tuple of ImpactScore
    existing: tuple  # tuple of VariationConfig
    coverage_gaps: str
    user_instruction: Optional[str]
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        object.__setattr__(self, "impacts", tuple(self.impacts))
        object.__setattr__(self, "existing", tuple(self.existing))


# ---------------------------------------------------------------------------
# Schema validation
# ---------------------------------------------------------------------------

_SCALAR_KINDS = {
    PropertyKind.BOOLEAN: (bool,),
    PropertyKind.NUMBER: (int, float),
    PropertyKind.STRING: (str,),
}


def value_matches_kind(value: JsonValue, spec: PropertySpec) -> bool:
    """Does a canonicalized value type-check against a PropertySpec's kind?"""
    value = canonicalize(value)
    kind = spec.kind
    if kind == PropertyKind.BOOLEAN:
        return isinstance(value, bool)
    if kind == PropertyKind.NUMBER:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind in (PropertyKind.STRING, PropertyKind.FUNCTION):
        return isinstance(value, str)
    if kind == PropertyKind.CATEGORICAL:
        return any(values_equal(value, a) for a in (spec.allowed_values or ()))
    if kind == PropertyKind.OBJECT:
        return isinstance(value, dict)
    if kind == PropertyKind.ARRAY:
        return isinstance(value, list)
    if kind == PropertyKind.NODE:
        return False
    return False


def validate_schema(schema: ComponentSchema) -> list:
    """Check every type invariant; returns violation descriptors (empty = ok).

    Total function: never raises, each violation names the property and rule.
    """
    violations: list = []
    if not schema.properties:
        violations.append("schema: properties must be non-empty")
    _validate_specs(schema.properties, violations, prefix="")
    return violations


def _validate_specs(specs: Sequence[PropertySpec], violations: list, prefix: str):
    seen = set()
    for spec in specs:
        label = prefix + spec.name
        if spec.name in seen:
            violations.append(f"{label}: duplicate property name")
        seen.add(spec.name)
        if spec.kind == PropertyKind.CATEGORICAL and not spec.allowed_values:
            violations.append(f"{label}: categorical requires allowed_values")
        if spec.allowed_values is not None:
            for v in spec.allowed_values:
                if isinstance(v, (list, dict)):
                    violations.append(f"{label}: allowed_values must be JSON scalars")
                    break
        has_elem = spec.element_schema is not None
        needs_elem = spec.kind in (PropertyKind.OBJECT, PropertyKind.ARRAY)
        if has_elem and not needs_elem:
            violations.append(f"{label}: element_schema only valid for object/array")
        if needs_elem and not has_elem:
            violations.append(f"{label}: {spec.kind.value} requires element_schema")
        if spec.has_default:
            if spec.kind == PropertyKind.NODE:
                violations.append(f"{label}: node properties cannot carry defaults")
            elif not value_matches_kind(spec.default, spec):
                if spec.kind == PropertyKind.CATEGORICAL:
                    violations.append(f"{label}: default not in allowed_values")
                else:
                    violations.append(
                        f"{label}: default does not type-check against {spec.kind.value}")
        if spec.element_schema:
            _validate_specs(spec.element_schema, violations, prefix=label + ".")


# ---------------------------------------------------------------------------
# Canonical JSON text
# ---------------------------------------------------------------------------

def to_canonical_json(doc: dict) -> str:
    """Canonical document text: 2-space indent, UTF-8, trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
