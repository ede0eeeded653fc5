"""Design-space coverage: extract observed values from variations, map them
into semantic equivalence classes, compute per-property ratios, and render
gap instructions that feed back into the sampler prompt.

Per-kind rules:

* categorical — identity classes over allowed_values; values outside the
  domain map to a reserved "invalid" class that never counts.
* boolean     — domain {true, false}; defaults count as observed.
* string      — 0.5 * min(u,3)/3 + 0.5 * [any value longer than 50 chars].
* number      — min(u,3)/3 over distinct values.
* object      — mean over element_schema field coverage, recursively.
* array       — mean of pooled element coverage and length-class coverage
                over {0, 1-4, 5+}.
* function/node — excluded entirely.
"""
from __future__ import annotations

import logging
import re
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .schema import (ComponentSchema, CoverageEntry, CoverageReport,
                     ImpactScore, PropertyKind, PropertySpec, UNSCORED_KINDS,
                     VariationConfig)
from .tsx import ast as A
from .tsx.parser import parse_module
from .values import JsonValue, canonicalize, dumps_canonical, value_key

log = logging.getLogger(__name__)

LONG_STRING_THRESHOLD = 50
UNIQUE_TARGET = 3
_LENGTH_CLASSES = ("length:0", "length:1-4", "length:5+")


class UnknownProperty(Exception):
    """A variation assigns a property the schema does not declare."""

    def __init__(self, prop: str, variation: str = ""):
        self.prop = prop
        self.variation = variation
        where = f" (variation '{variation}')" if variation else ""
        super().__init__(f"unknown property '{prop}'{where}")


class NotAStoryFile(Exception):
    """The module has no story metadata (CSF default export)."""


class EquivalenceClassifier:
    """Maps values into per-kind semantic equivalence classes f(.)

    Total on type-correct values and stable across runs. Numeric bucketing
    beyond distinct values is an extension point; see class_of.
    """

    def class_of(self, spec: PropertySpec, value: JsonValue) -> str:
        value = canonicalize(value)
        if spec.kind == PropertyKind.CATEGORICAL:
            for allowed in spec.allowed_values or ():
                if value_key(allowed) == value_key(value):
                    return dumps_canonical(allowed)
            return "invalid"
        if spec.kind == PropertyKind.BOOLEAN:
            if isinstance(value, bool):
                return "true" if value else "false"
            return "invalid"
        return dumps_canonical(value)

    def domain_classes(self, spec: PropertySpec) -> Optional[List[str]]:
        """Enumerable class list; None for unbounded kinds."""
        if spec.kind == PropertyKind.CATEGORICAL:
            return [dumps_canonical(v) for v in spec.allowed_values or ()]
        if spec.kind == PropertyKind.BOOLEAN:
            return ["true", "false"]
        return None


DEFAULT_CLASSIFIER = EquivalenceClassifier()


# ---------------------------------------------------------------------------
# observed values
# ---------------------------------------------------------------------------

def observed_values(schema: ComponentSchema,
                    variations: Sequence[VariationConfig]) -> Dict[str, List[JsonValue]]:
    """Multiset of values per property across variations.

    A variation that omits a property with a default exhibits the default, so
    the default is recorded as observed. Unknown assignments raise
    UnknownProperty.
    """
    known = {p.name for p in schema.properties}
    observed: Dict[str, List[JsonValue]] = {
        p.name: [] for p in schema.properties if p.kind not in UNSCORED_KINDS}
    for config in variations:
        for name in config.assignments:
            if name not in known:
                raise UnknownProperty(name, config.name)
        for spec in schema.properties:
            if spec.kind in UNSCORED_KINDS:
                continue
            if spec.name in config.assignments:
                observed[spec.name].append(config.assignments[spec.name])
            elif spec.has_default:
                observed[spec.name].append(spec.default)
    return observed


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------

def coverage(schema: ComponentSchema, impacts: Sequence[ImpactScore],
             variations: Sequence[VariationConfig],
             classifier: EquivalenceClassifier = DEFAULT_CLASSIFIER) -> CoverageReport:
    observed = observed_values(schema, variations)
    entries = []
    for spec in schema.properties:
        if spec.kind in UNSCORED_KINDS:
            continue
        entries.append(_entry_for(spec, observed[spec.name], classifier))

    impactful = {s.property for s in impacts if s.impactful}
    impactful_entries = [e for e in entries if e.property in impactful]
    if impactful_entries:
        aggregate = sum(e.ratio for e in impactful_entries) / len(impactful_entries)
    else:
        aggregate = 1.0
    fully = all(e.ratio >= 1.0 - 1e-9 for e in impactful_entries)
    return CoverageReport(entries=tuple(entries), aggregate=aggregate,
                          fully_covered=fully)


def _entry_for(spec: PropertySpec, values: List[JsonValue],
               classifier: EquivalenceClassifier) -> CoverageEntry:
    kind = spec.kind
    if kind in (PropertyKind.CATEGORICAL, PropertyKind.BOOLEAN):
        return _class_entry(spec, values, classifier)
    if kind == PropertyKind.STRING:
        return _string_entry(spec, values)
    if kind == PropertyKind.NUMBER:
        return _number_entry(spec, values)
    if kind == PropertyKind.OBJECT:
        return _object_entry(spec, values, classifier)
    if kind == PropertyKind.ARRAY:
        return _array_entry(spec, values, classifier)
    # Unreachable for scoreable kinds; keep a degenerate entry for safety.
    return CoverageEntry(property=spec.name, domain_classes=(),
                         observed_classes=(), ratio=1.0, missing=())


def _class_entry(spec: PropertySpec, values: List[JsonValue],
                 classifier: EquivalenceClassifier) -> CoverageEntry:
    domain = classifier.domain_classes(spec) or []
    seen = []
    invalid = False
    for v in values:
        cls = classifier.class_of(spec, v)
        if cls == "invalid":
            invalid = True
            continue
        if cls not in seen:
            seen.append(cls)
    if invalid:
        log.warning("property '%s': observed value outside its domain", spec.name)
    observed = [c for c in domain if c in seen]
    ratio = len(observed) / len(domain) if domain else 0.0
    missing = tuple(f"value {c} unobserved" for c in domain if c not in seen)
    return CoverageEntry(property=spec.name, domain_classes=tuple(domain),
                         observed_classes=tuple(observed), ratio=ratio,
                         missing=missing)


def _string_entry(spec: PropertySpec, values: List[JsonValue]) -> CoverageEntry:
    strings = [v for v in values if isinstance(v, str)]
    unique = sorted(set(strings))
    u = len(unique)
    has_long = any(len(s) > LONG_STRING_THRESHOLD for s in strings)
    ratio = 0.5 * min(u, UNIQUE_TARGET) / UNIQUE_TARGET + (0.5 if has_long else 0.0)
    missing = []
    if u < UNIQUE_TARGET:
        missing.append(f"only {u} of {UNIQUE_TARGET} unique values observed")
    if not has_long:
        missing.append(f"no value longer than {LONG_STRING_THRESHOLD} characters")
    domain = (f"{UNIQUE_TARGET}+ unique values",
              f"a value longer than {LONG_STRING_THRESHOLD} characters")
    observed = tuple(c for c, ok in zip(domain, (u >= UNIQUE_TARGET, has_long)) if ok)
    return CoverageEntry(property=spec.name, domain_classes=domain,
                         observed_classes=observed, ratio=ratio,
                         missing=tuple(missing))


def _number_entry(spec: PropertySpec, values: List[JsonValue]) -> CoverageEntry:
    nums = [v for v in values
            if isinstance(v, (int, float)) and not isinstance(v, bool)]
    u = len({value_key(v) for v in nums})
    ratio = min(u, UNIQUE_TARGET) / UNIQUE_TARGET
    missing = ()
    if u < UNIQUE_TARGET:
        missing = (f"only {u} of {UNIQUE_TARGET} unique values observed",)
    domain = (f"{UNIQUE_TARGET}+ unique values",)
    observed = domain if u >= UNIQUE_TARGET else ()
    return CoverageEntry(property=spec.name, domain_classes=domain,
                         observed_classes=observed, ratio=ratio, missing=missing)


def _object_entry(spec: PropertySpec, values: List[JsonValue],
                  classifier: EquivalenceClassifier) -> CoverageEntry:
    objects = [v for v in values if isinstance(v, dict)]
    children = []
    for fld in spec.element_schema or ():
        if fld.kind in UNSCORED_KINDS:
            continue
        field_values = []
        for obj in objects:
            if fld.name in obj:
                field_values.append(obj[fld.name])
            elif fld.has_default:
                field_values.append(fld.default)
        children.append(_entry_for(fld, field_values, classifier))
    ratio = (sum(c.ratio for c in children) / len(children)) if children else 0.0
    return CoverageEntry(property=spec.name, domain_classes=(),
                         observed_classes=(), ratio=ratio, missing=(),
                         children=tuple(children))


def _array_entry(spec: PropertySpec, values: List[JsonValue],
                 classifier: EquivalenceClassifier) -> CoverageEntry:
    arrays = [v for v in values if isinstance(v, list)]
    elements: List[JsonValue] = []
    for arr in arrays:
        elements.extend(arr)

    elem_specs = [f for f in (spec.element_schema or ())
                  if f.kind not in UNSCORED_KINDS]
    children = []
    if len(elem_specs) == 1 and elem_specs[0].name == "item":
        children.append(_entry_for(elem_specs[0], elements, classifier))
    else:
        dict_elements = [e for e in elements if isinstance(e, dict)]
        for fld in elem_specs:
            field_values = []
            for obj in dict_elements:
                if fld.name in obj:
                    field_values.append(obj[fld.name])
                elif fld.has_default:
                    field_values.append(fld.default)
            children.append(_entry_for(fld, field_values, classifier))
    elem_ratio = (sum(c.ratio for c in children) / len(children)) if children else 0.0

    observed_lengths = set()
    for arr in arrays:
        observed_lengths.add(_length_class(len(arr)))
    length_observed = [c for c in _LENGTH_CLASSES if c in observed_lengths]
    length_ratio = len(length_observed) / len(_LENGTH_CLASSES)
    missing = tuple(f"no variation with {_length_label(c)} items"
                    for c in _LENGTH_CLASSES if c not in observed_lengths)
    ratio = (elem_ratio + length_ratio) / 2.0
    return CoverageEntry(property=spec.name, domain_classes=_LENGTH_CLASSES,
                         observed_classes=tuple(length_observed), ratio=ratio,
                         missing=missing, children=tuple(children))


def _length_class(n: int) -> str:
    if n == 0:
        return "length:0"
    if n <= 4:
        return "length:1-4"
    return "length:5+"


def _length_label(cls: str) -> str:
    return {"length:0": "0", "length:1-4": "1-4", "length:5+": "5 or more"}[cls]


# ---------------------------------------------------------------------------
# gap instructions
# ---------------------------------------------------------------------------

def render_gap_instructions(report: CoverageReport,
                            impacts: Sequence[ImpactScore]) -> str:
    """One bullet per missing descriptor, highest visual impact first.

    Fills the coverage-requirements slot of the sampler prompt; empty string
    when nothing is missing.
    """
    impact_of = {s.property: s.impact for s in impacts}
    ranked = sorted(report.entries,
                    key=lambda e: (-impact_of.get(e.property, 0.0), e.property))
    lines: List[str] = []
    for entry in ranked:
        _render_entry_gaps(entry, entry.property, lines)
    return "\n".join(lines)


def _render_entry_gaps(entry: CoverageEntry, path: str, lines: List[str]):
    for descriptor in entry.missing:
        lines.append(f'- Property "{path}": {_instruction_for(descriptor)}')
    is_array = entry.domain_classes == _LENGTH_CLASSES
    for child in entry.children or ():
        if child.property == "item":
            child_path = f"{path}[]"
        elif is_array:
            child_path = f"{path}[].{child.property}"
        else:
            child_path = f"{path}.{child.property}"
        _render_entry_gaps(child, child_path, lines)


def _instruction_for(descriptor: str) -> str:
    m = re.fullmatch(r"value (.+) unobserved", descriptor)
    if m:
        return f"generate at least one variation with value {m.group(1)}"
    m = re.fullmatch(r"only (\d+) of (\d+) unique values observed", descriptor)
    if m:
        need = int(m.group(2)) - int(m.group(1))
        return f"generate at least {need} more unique values"
    m = re.fullmatch(r"no value longer than (\d+) characters", descriptor)
    if m:
        return f"generate at least one value longer than {m.group(1)} characters"
    m = re.fullmatch(r"no variation with (.+) items", descriptor)
    if m:
        return f"generate at least one variation with {m.group(1)} items"
    return descriptor


# ---------------------------------------------------------------------------
# distinctness signatures
# ---------------------------------------------------------------------------

def distinctness_signature(schema: ComponentSchema,
                           impacts: Sequence[ImpactScore],
                           config: VariationConfig,
                           classifier: EquivalenceClassifier = DEFAULT_CLASSIFIER) -> Tuple:
    """Tuple of f-mapped values of the impactful properties.

    Two variations with equal signatures explore the same visible facet and
    are considered redundant. Falls back to all assignments when the
    component has no impactful properties.
    """
    impactful = {s.property for s in impacts if s.impactful}
    spec_map = schema.property_map()
    parts = []
    props = [p.name for p in schema.properties if p.name in impactful]
    if not props:
        props = [p.name for p in schema.properties
                 if p.kind not in UNSCORED_KINDS]
    for name in props:
        spec = spec_map[name]
        if name in config.assignments:
            value = config.assignments[name]
        elif spec.has_default:
            value = spec.default
        else:
            parts.append((name, "<unset>"))
            continue
        parts.append((name, classifier.class_of(spec, value)))
    return tuple(parts)


# ---------------------------------------------------------------------------
# story extraction
# ---------------------------------------------------------------------------

def extract_from_story_source(source: str,
                              filename: str = "<story>") -> List[VariationConfig]:
    """Parse a CSF-style story module back into VariationConfigs.

    Only literal values are extracted; non-literal expressions are recorded
    as their source text (opaque) with a warning. Raises NotAStoryFile when
    the module has no default-export story metadata.
    """
    program, comments = parse_module(source, filename)
    if not _has_story_meta(program):
        raise NotAStoryFile(f"{filename}: no default-export story metadata found")

    configs: List[VariationConfig] = []
    for stmt in program.body:
        if not (isinstance(stmt, A.VarDecl) and stmt.export):
            continue
        for decl in stmt.declarators:
            if not isinstance(decl.pattern, A.IdentPattern):
                continue
            if not isinstance(decl.init, A.ObjectExpr):
                continue
            story = _object_props(decl.init)
            if "args" not in story or not isinstance(story["args"], A.ObjectExpr):
                continue
            name = decl.pattern.name
            name_override = story.get("name")
            if isinstance(name_override, A.Literal) and isinstance(name_override.value, str):
                name = name_override.value
            description = _leading_comment(source, comments, stmt.start)
            assignments = {}
            for prop in story["args"].props:
                if not isinstance(prop, A.ObjectProp):
                    continue
                assignments[prop.key] = _extract_value(source, filename,
                                                       prop.key, prop.value)
            configs.append(VariationConfig(name=name, description=description,
                                           assignments=assignments))
    return configs


def _has_story_meta(program: A.Program) -> bool:
    object_vars = {}
    for stmt in program.body:
        if isinstance(stmt, A.VarDecl):
            for d in stmt.declarators:
                if isinstance(d.pattern, A.IdentPattern) and \
                        isinstance(d.init, A.ObjectExpr):
                    object_vars[d.pattern.name] = d.init
    for stmt in program.body:
        if isinstance(stmt, A.ExportDefault):
            expr = stmt.expr
            if isinstance(expr, A.Ident):
                expr = object_vars.get(expr.name)
            if isinstance(expr, A.ObjectExpr):
                keys = {p.key for p in expr.props if isinstance(p, A.ObjectProp)}
                if keys & {"title", "component"}:
                    return True
    return False


def _object_props(obj: A.ObjectExpr) -> Dict[str, Any]:
    return {p.key: p.value for p in obj.props
            if isinstance(p, A.ObjectProp) and not p.computed}


def _leading_comment(source: str, comments, stmt_start: int) -> str:
    best = ""
    for start, end, text in comments:
        if end <= stmt_start and source[end:stmt_start].strip() == "":
            best = _clean_doc_comment(text)
    return best


def _clean_doc_comment(text: str) -> str:
    lines = []
    for line in text.splitlines():
        line = line.strip().lstrip("*").strip()
        if line:
            lines.append(line)
    return " ".join(lines)


def _extract_value(source: str, filename: str, key: str, expr: Any) -> JsonValue:
    from .tsx.component import _literal_value, _NOT_LITERAL
    value = _literal_value(expr)
    if value is _NOT_LITERAL:
        text = source[expr.start:expr.end].strip()
        log.warning("%s: non-literal value for '%s' recorded opaque: %s",
                    filename, key, text)
        return text
    return value
