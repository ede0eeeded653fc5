"""Coverage-guided sampling: prompt construction, backend protocol, response
validation with one repair round, and distinctness enforcement.

The prompt is the shipped template (templates/sampler_prompt.txt) with its
slots filled; values for all properties are requested jointly in a single
backend call. A deterministic stub backend implements the same contract
offline by parsing the prompt it is given.
"""
from __future__ import annotations

import hashlib
import json
import logging
import random
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Dict, List, Optional, Protocol, Sequence, Tuple
from urllib.parse import urlparse

from .coverage import distinctness_signature
from .schema import (ComponentSchema, ImpactLevel, ImpactScore, PropertyKind,
                     PropertySpec, SamplingRequest, UNSCORED_KINDS,
                     VariationConfig)
from .values import canonicalize

log = logging.getLogger(__name__)

GENERATION_QUERY = (
    "Generate the configurations now. Respond with only a JSON array "
    "containing one configuration object per sample."
)

_PLACEHOLDER_RE = re.compile(r"^https://placehold\.co/\d+x\d+([/?#].*)?$")
_IMAGE_NAME_RE = re.compile(
    r"image|img|avatar|photo|picture|thumbnail|icon|logo|banner|poster",
    re.IGNORECASE)
_NUMERIC_STRING_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")

_PROPERTY_BLOCK = """For each property:
- Property name (dataType)
- Required: boolean
- Default value: if applicable
- Allowed values: for categorical properties
- Usage Examples: usage context / code examples"""

_SECTION_HEADERS = {
    ImpactLevel.HIGH: "*High Visual Impact Properties:*",
    ImpactLevel.MEDIUM: "*Medium Visual Impact Properties:*",
    ImpactLevel.LOW: "*Low Visual Impact Properties:*",
}


class BackendUnavailable(Exception):
    """The sampling backend cannot be reached or refuses credentials."""


class QuotaExceeded(Exception):
    """The sampling backend reported a rate/usage limit."""


class MalformedResponse(Exception):
    """The backend did not return a JSON array of configs after one re-ask."""


class SamplerBackend(Protocol):
    def complete(self, system_prompt: str, user_message: str,
                 json_mode: bool = True) -> str: ...


@dataclass
class ValidationOutcome:
    accepted: List[VariationConfig] = field(default_factory=list)
    rejected: List[Tuple[Any, List[str]]] = field(default_factory=list)
    repaired_count: int = 0


def load_template() -> str:
    return resources.files("facet").joinpath(
        "templates/sampler_prompt.txt").read_text(encoding="utf-8")


def load_word_corpus() -> List[str]:
    text = resources.files("facet").joinpath("data/words.txt").read_text("utf-8")
    return [w for w in text.split() if w]


# ---------------------------------------------------------------------------
# prompt construction
# ---------------------------------------------------------------------------

def build_prompt(req: SamplingRequest, blank_slots: bool = False) -> str:
    """Instantiate the sampler prompt template.

    With blank_slots=True every slot keeps its placeholder text, which must
    reproduce the shipped template byte-for-byte (prompt-fidelity check).
    """
    template = load_template()
    if blank_slots:
        sections = {level: _PROPERTY_BLOCK for level in _SECTION_HEADERS}
        return _render(template, "{componentName}", "{boolean}", sections,
                       "{story_count}", "{instructions_from_coverage_analyzer}",
                       "{custom_instructions}")
    sections = _render_sections(req)
    gaps = req.coverage_gaps.strip() or "(none)"
    instruction = (req.user_instruction or "").strip() or "(none)"
    return _render(template, req.schema.component_name,
                   "true" if req.schema.has_children else "false",
                   sections, str(req.count), gaps, instruction)


def _render(template: str, component_name: str, has_children: str,
            sections: Dict[ImpactLevel, str], story_count: str,
            gaps: str, instruction: str) -> str:
    out = template
    for level, header in _SECTION_HEADERS.items():
        block = header + "\n" + _PROPERTY_BLOCK
        replacement = header + "\n" + sections[level]
        if block not in out:
            raise AssertionError(f"prompt template is missing the {header} block")
        out = out.replace(block, replacement, 1)
    out = out.replace("{componentName}", component_name, 1)
    out = out.replace("{boolean}", has_children, 1)
    out = out.replace("{story_count}", story_count, 1)
    out = out.replace("{instructions_from_coverage_analyzer}", gaps, 1)
    out = out.replace("{custom_instructions}", instruction, 1)
    return out


def _render_sections(req: SamplingRequest) -> Dict[ImpactLevel, str]:
    level_of: Dict[str, ImpactLevel] = {s.property: s.level for s in req.impacts}
    score_of: Dict[str, ImpactScore] = {s.property: s for s in req.impacts}
    grouped: Dict[ImpactLevel, List[PropertySpec]] = {
        ImpactLevel.HIGH: [], ImpactLevel.MEDIUM: [], ImpactLevel.LOW: []}
    ordered: List[PropertySpec] = []
    spec_map = req.schema.property_map()
    for score in req.impacts:  # already sorted by impact, descending
        spec = spec_map.get(score.property)
        if spec is not None:
            ordered.append(spec)
    for spec in req.schema.properties:
        if spec not in ordered and spec.kind not in (PropertyKind.NODE,):
            ordered.append(spec)
    for spec in ordered:
        grouped[level_of.get(spec.name, ImpactLevel.LOW)].append(spec)

    return {level: "\n".join(_render_property(spec, score_of.get(spec.name))
                             for spec in specs) or "(none)"
            for level, specs in grouped.items()}


def _render_property(spec: PropertySpec, score: Optional[ImpactScore]) -> str:
    lines = [f"- {spec.name} ({spec.kind.value})",
             f"  - Required: {'true' if spec.required else 'false'}"]
    if spec.has_default:
        lines.append(f"  - Default value: {json.dumps(spec.default)}")
    if spec.kind == PropertyKind.CATEGORICAL:
        lines.append(f"  - Allowed values: "
                     f"{json.dumps(list(spec.allowed_values or ()))}")
    if spec.description:
        lines.append(f"  - Description: {spec.description}")
    if spec.kind in (PropertyKind.OBJECT, PropertyKind.ARRAY):
        lines.append(f"  - Value shape: {json.dumps(_shape(spec))}")
    if score is not None and score.occurrences:
        best = sorted(score.occurrences,
                      key=lambda o: (-o.kind.base_score, o.span))[:3]
        lines.append("  - Usage Examples:")
        for occ in best:
            snippet = " ".join(occ.snippet.split())
            lines.append(f"    - [{occ.kind.value}] {snippet}")
    return "\n".join(lines)


def _shape(spec: PropertySpec) -> dict:
    d: dict = {"kind": spec.kind.value}
    if spec.required:
        d["required"] = True
    if spec.allowed_values:
        d["allowed"] = [canonicalize(v) for v in spec.allowed_values]
    if spec.has_default:
        d["default"] = canonicalize(spec.default)
    if spec.kind == PropertyKind.OBJECT:
        d["fields"] = [dict(_shape(f), name=f.name)
                       for f in spec.element_schema or ()]
    elif spec.kind == PropertyKind.ARRAY:
        elems = spec.element_schema or ()
        if len(elems) == 1 and elems[0].name == "item":
            d["item"] = _shape(elems[0])
        else:
            d["item"] = {"kind": "object",
                         "fields": [dict(_shape(f), name=f.name) for f in elems]}
    return d


# ---------------------------------------------------------------------------
# config validation
# ---------------------------------------------------------------------------

def validate_config(schema: ComponentSchema,
                    raw: Any) -> Tuple[Optional[VariationConfig], List[str]]:
    """Type-check one raw config against the schema.

    Returns (config, []) on success or (None, violations). Coercions are
    applied (numeric strings, "true"/"false"); unknown and render-slot
    properties are dropped with a warning, never a violation.
    """
    violations: List[str] = []
    if not isinstance(raw, dict):
        return None, ["configuration must be a JSON object"]
    name = raw.get("name")
    if not isinstance(name, str) or not name.strip():
        violations.append("name: required, must be a non-empty string")
        name = ""
    description = raw.get("description")
    if not isinstance(description, str):
        description = "" if description is None else str(description)
    assignments_raw = raw.get("properties")
    if not isinstance(assignments_raw, dict):
        violations.append("properties: required, must be an object")
        assignments_raw = {}

    spec_map = schema.property_map()
    assignments: Dict[str, Any] = {}
    attempted: set = set()
    for key, value in assignments_raw.items():
        spec = spec_map.get(key)
        if spec is None:
            log.warning("config '%s': unknown property '%s' dropped", name, key)
            continue
        if spec.kind == PropertyKind.NODE:
            log.warning("config '%s': render-slot property '%s' dropped",
                        name, key)
            continue
        attempted.add(key)
        checked, errs = _check_value(spec, value, key)
        if errs:
            violations.extend(errs)
        else:
            assignments[key] = checked

    for spec in schema.properties:
        if spec.required and not spec.has_default \
                and spec.kind not in UNSCORED_KINDS \
                and spec.name not in attempted:
            violations.append(f"{spec.name}: required, no default")

    if violations:
        return None, violations
    return VariationConfig(name=name.strip(), description=description,
                           assignments=assignments), []


def _coerce(spec: PropertySpec, value: Any) -> Any:
    if isinstance(value, str):
        if spec.kind == PropertyKind.NUMBER and _NUMERIC_STRING_RE.fullmatch(value.strip()):
            num = float(value)
            return int(num) if num.is_integer() else num
        if spec.kind == PropertyKind.BOOLEAN and value.strip().lower() in ("true", "false"):
            return value.strip().lower() == "true"
    return value


def _check_value(spec: PropertySpec, value: Any, path: str) -> Tuple[Any, List[str]]:
    value = _coerce(spec, value)
    kind = spec.kind
    if kind == PropertyKind.BOOLEAN:
        if not isinstance(value, bool):
            return None, [f"{path}: expected boolean"]
        return value, []
    if kind == PropertyKind.NUMBER:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return None, [f"{path}: expected number"]
        return canonicalize(value), []
    if kind == PropertyKind.STRING:
        if not isinstance(value, str):
            return None, [f"{path}: expected string"]
        if _IMAGE_NAME_RE.search(spec.name) and value:
            if not _PLACEHOLDER_RE.match(value) and not _is_url(value):
                return None, [f"{path}: expected a placeholder URL "
                              f"(https://placehold.co/{{width}}x{{height}}) or a "
                              f"well-formed URL"]
        return value, []
    if kind == PropertyKind.FUNCTION:
        if not isinstance(value, str):
            return None, [f"{path}: expected a string describing the function"]
        return value, []
    if kind == PropertyKind.CATEGORICAL:
        for allowed in spec.allowed_values or ():
            if _scalar_matches(allowed, value):
                return canonicalize(allowed), []
        return None, [f"{path}: not in allowed values"]
    if kind == PropertyKind.OBJECT:
        if not isinstance(value, dict):
            return None, [f"{path}: expected object"]
        return _check_object(spec.element_schema or (), value, path)
    if kind == PropertyKind.ARRAY:
        if not isinstance(value, list):
            return None, [f"{path}: expected array"]
        return _check_array(spec, value, path)
    return None, [f"{path}: unsupported property kind {kind.value}"]


def _scalar_matches(allowed: Any, value: Any) -> bool:
    if isinstance(allowed, bool) or isinstance(value, bool):
        return allowed is value
    if isinstance(allowed, (int, float)) and isinstance(value, (int, float)):
        return float(allowed) == float(value)
    if isinstance(allowed, (int, float)) and isinstance(value, str):
        try:
            return float(allowed) == float(value)
        except ValueError:
            return False
    return allowed == value


def _check_object(fields: Sequence[PropertySpec], value: dict,
                  path: str) -> Tuple[Any, List[str]]:
    errs: List[str] = []
    out: Dict[str, Any] = {}
    known = {f.name for f in fields}
    for key in value:
        if key not in known:
            log.warning("unknown field '%s.%s' dropped", path, key)
    for fld in fields:
        if fld.kind in UNSCORED_KINDS and fld.kind == PropertyKind.NODE:
            continue
        if fld.name in value:
            checked, sub = _check_value(fld, value[fld.name], f"{path}.{fld.name}")
            if sub:
                errs.extend(sub)
            else:
                out[fld.name] = checked
        elif fld.required and not fld.has_default:
            errs.append(f"{path}.{fld.name}: required, no default")
    if errs:
        return None, errs
    return out, []


def _check_array(spec: PropertySpec, value: list, path: str) -> Tuple[Any, List[str]]:
    elems = spec.element_schema or ()
    errs: List[str] = []
    out: List[Any] = []
    if len(elems) == 1 and elems[0].name == "item":
        item_spec = elems[0]
        for i, item in enumerate(value):
            checked, sub = _check_value(item_spec, item, f"{path}[{i}]")
            errs.extend(sub)
            if not sub:
                out.append(checked)
    else:
        for i, item in enumerate(value):
            if not isinstance(item, dict):
                errs.append(f"{path}[{i}]: expected object")
                continue
            checked, sub = _check_object(elems, item, f"{path}[{i}]")
            errs.extend(sub)
            if not sub:
                out.append(checked)
    if errs:
        return None, errs
    return out, []


def _is_url(value: str) -> bool:
    try:
        parsed = urlparse(value)
    except ValueError:
        return False
    return parsed.scheme in ("http", "https") and bool(parsed.netloc)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample(req: SamplingRequest, backend: SamplerBackend,
           seed: Optional[int] = None) -> ValidationOutcome:
    """One sampling round: build prompt, call the backend once, validate,
    repair once, and enforce distinctness against existing variations."""
    prompt = build_prompt(req)
    raw_text = backend.complete(prompt, GENERATION_QUERY, json_mode=True)
    raw_configs = _parse_config_array(raw_text)
    if raw_configs is None:
        retry_query = (GENERATION_QUERY +
                       "\nYour previous reply was not a JSON array of "
                       "configuration objects. Respond with only the JSON array.")
        raw_text = backend.complete(prompt, retry_query, json_mode=True)
        raw_configs = _parse_config_array(raw_text)
        if raw_configs is None:
            raise MalformedResponse(
                "backend did not return a JSON array of configurations")

    outcome = ValidationOutcome()
    invalid: List[Tuple[Any, List[str]]] = []
    valid: List[VariationConfig] = []
    for raw in raw_configs:
        config, violations = validate_config(req.schema, raw)
        if config is None:
            invalid.append((raw, violations))
        else:
            valid.append(config)

    if invalid:
        repaired = _repair_round(req, backend, prompt, invalid)
        for raw, violations in invalid:
            key = _raw_name(raw)
            fixed = repaired.pop(key, None) if key else None
            if fixed is not None:
                config, errs = validate_config(req.schema, fixed)
                if config is not None:
                    valid.append(config)
                    outcome.repaired_count += 1
                    continue
                violations = errs
            outcome.rejected.append((raw, violations))
        # Repaired configs the backend renamed still count if they validate.
        for raw in repaired.values():
            config, errs = validate_config(req.schema, raw)
            if config is not None:
                valid.append(config)
                outcome.repaired_count += 1

    seen = {}
    for config in req.existing:
        seen[distinctness_signature(req.schema, req.impacts, config)] = config.name
    used_names = {c.name for c in req.existing}
    for config in valid:
        signature = distinctness_signature(req.schema, req.impacts, config)
        if signature in seen:
            outcome.rejected.append(
                (config.to_dict(),
                 [f"non-distinct: same impactful-property values as "
                  f"'{seen[signature]}'"]))
            continue
        config = _uniquify_name(config, used_names)
        used_names.add(config.name)
        seen[signature] = config.name
        outcome.accepted.append(config)
    return outcome


def _raw_name(raw: Any) -> Optional[str]:
    if isinstance(raw, dict) and isinstance(raw.get("name"), str):
        return raw["name"]
    return None


def _repair_round(req: SamplingRequest, backend: SamplerBackend, prompt: str,
                  invalid: List[Tuple[Any, List[str]]]) -> Dict[str, Any]:
    """Ask the backend once to correct the invalid configs; returns them
    keyed by name. Failures here are silent: still-invalid configs are
    reported by the caller."""
    report_lines = []
    for raw, violations in invalid:
        name = _raw_name(raw) or "<unnamed>"
        report_lines.append(f"- {name}: " + "; ".join(violations))
    query = (GENERATION_QUERY +
             "\nThe following configurations were invalid:\n" +
             "\n".join(report_lines) +
             "\nReturn a corrected JSON array containing only these "
             "configurations, fixed.")
    try:
        text = backend.complete(prompt, query, json_mode=True)
    except Exception:
        return {}
    repaired = _parse_config_array(text)
    if repaired is None:
        return {}
    out: Dict[str, Any] = {}
    for raw in repaired:
        name = _raw_name(raw)
        if name:
            out[name] = raw
    return out


def _uniquify_name(config: VariationConfig, used: set) -> VariationConfig:
    if config.name not in used:
        return config
    base = config.name
    i = 2
    while f"{base}{i}" in used:
        i += 1
    return VariationConfig(name=f"{base}{i}", description=config.description,
                           assignments=config.assignments)


def _parse_config_array(text: str) -> Optional[List[Any]]:
    t = text.strip()
    fence = re.match(r"^```(?:json)?\s*(.*?)\s*```$", t, re.DOTALL)
    if fence:
        t = fence.group(1)
    data = None
    try:
        data = json.loads(t)
    except json.JSONDecodeError:
        start, end = t.find("["), t.rfind("]")
        if 0 <= start < end:
            try:
                data = json.loads(t[start:end + 1])
            except json.JSONDecodeError:
                return None
    if isinstance(data, list):
        # Non-object elements are rejected per-config by validation.
        return data
    if isinstance(data, dict):
        for key in ("configurations", "variations", "configs", "samples"):
            if isinstance(data.get(key), list):
                return data[key]
        if len(data) == 1:
            (value,) = data.values()
            if isinstance(value, list):
                return value
        if {"name", "properties"} <= set(data):
            return [data]
    return None


# ---------------------------------------------------------------------------
# deterministic stub backend
# ---------------------------------------------------------------------------

@dataclass
class _PromptSchema:
    component: str = "Component"
    count: int = 1
    props: List[dict] = field(default_factory=list)
    gaps: Dict[str, List[Tuple[str, Any]]] = field(default_factory=dict)


class StubBackend:
    """Offline sampler: pure function of (prompt, seed).

    Parses the property sections and coverage requirements out of the prompt
    it receives, consumes gap instructions first, and free-samples the rest
    from a bundled word corpus.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.words = load_word_corpus()

    def complete(self, system_prompt: str, user_message: str,
                 json_mode: bool = True) -> str:
        parsed = self._parse_prompt(system_prompt)
        digest = hashlib.sha256(
            f"{self.seed}|{system_prompt}".encode("utf-8")).hexdigest()
        rng = random.Random(digest)
        used_strings: Dict[str, set] = {}
        configs = []
        for i in range(parsed.count):
            configs.append(self._one_config(parsed, i, rng, used_strings))
        return json.dumps(configs, indent=2)

    # -- prompt parsing ------------------------------------------------------

    def _parse_prompt(self, prompt: str) -> _PromptSchema:
        out = _PromptSchema()
        m = re.search(r"^Component: (.+)$", prompt, re.MULTILINE)
        if m:
            out.component = m.group(1).strip()
        m = re.search(r"\(where N = (\d+)\)", prompt)
        if m:
            out.count = int(m.group(1))

        section = prompt.split("**Sampling Strategy:**")[0]
        current: Optional[dict] = None
        for line in section.splitlines():
            m = re.match(r"^- ([A-Za-z_$][\w$]*) "
                         r"\((boolean|number|string|categorical|object|array|function)\)$",
                         line)
            if m:
                current = {"name": m.group(1), "kind": m.group(2),
                           "required": False, "allowed": None, "default": None,
                           "has_default": False, "shape": None}
                out.props.append(current)
                continue
            if current is None:
                continue
            m = re.match(r"^  - Required: (true|false)$", line)
            if m:
                current["required"] = m.group(1) == "true"
                continue
            m = re.match(r"^  - Default value: (.*)$", line)
            if m:
                current["default"] = json.loads(m.group(1))
                current["has_default"] = True
                continue
            m = re.match(r"^  - Allowed values: (.*)$", line)
            if m:
                current["allowed"] = json.loads(m.group(1))
                continue
            m = re.match(r"^  - Value shape: (.*)$", line)
            if m:
                current["shape"] = json.loads(m.group(1))
                continue

        gaps_text = ""
        m = re.search(r"\*\*Coverage Requirements\*\*\n(.*?)\n\*\*User Instructions\*\*",
                      prompt, re.DOTALL)
        if m:
            gaps_text = m.group(1)
        for line in gaps_text.splitlines():
            m = re.match(r'^- Property "([^"]+)": (.+)$', line)
            if not m:
                continue
            path, instruction = m.group(1), m.group(2)
            request = self._parse_gap(instruction)
            if request is not None:
                out.gaps.setdefault(path, []).append(request)
        return out

    @staticmethod
    def _parse_gap(instruction: str) -> Optional[Tuple[str, Any]]:
        m = re.match(r"^generate at least one variation with value (.+)$",
                     instruction)
        if m:
            try:
                return ("value", json.loads(m.group(1)))
            except json.JSONDecodeError:
                return None
        m = re.match(r"^generate at least (\d+) more unique values$", instruction)
        if m:
            return ("unique", int(m.group(1)))
        m = re.match(r"^generate at least one value longer than (\d+) characters$",
                     instruction)
        if m:
            return ("long", int(m.group(1)))
        m = re.match(r"^generate at least one variation with (.+) items$",
                     instruction)
        if m:
            label = m.group(1)
            length = {"0": 0, "1-4": 2, "5 or more": 5}.get(label)
            return ("length", length) if length is not None else None
        return None

    # -- value generation -------------------------------------------------------

    def _one_config(self, parsed: _PromptSchema, index: int,
                    rng: random.Random, used: Dict[str, set]) -> dict:
        props: Dict[str, Any] = {}
        for prop in parsed.props:
            props[prop["name"]] = self._value_for(
                parsed, prop["name"], prop, prop.get("shape"), index, rng, used)
        adjective = self.words[rng.randrange(len(self.words))].capitalize()
        noun = self.words[rng.randrange(len(self.words))].capitalize()
        return {
            "name": f"{adjective}{noun}{index + 1}",
            "description": f"Deterministic sample {index + 1} for "
                           f"{parsed.component}.",
            "properties": props,
        }

    def _value_for(self, parsed: _PromptSchema, path: str, prop: dict,
                   shape: Optional[dict], index: int, rng: random.Random,
                   used: Dict[str, set]) -> Any:
        kind = prop["kind"]
        requests = parsed.gaps.get(path, [])
        value_requests = [v for (t, v) in requests if t == "value"]
        if index < len(value_requests):
            return value_requests[index]
        wants_long = any(t == "long" for (t, _) in requests)
        length_requests = [v for (t, v) in requests if t == "length"]

        if kind == "categorical":
            allowed = prop.get("allowed") or []
            if not allowed:
                return None
            return allowed[(index + rng.randrange(len(allowed))) % len(allowed)]
        if kind == "boolean":
            return bool((index + rng.randrange(2)) % 2)
        if kind == "number":
            pool = [0, 1, 2, 3, 5, 7, 9.99, 12, 19.5, 24, 42, 60, 75, 99,
                    120, 149.99, 250, 480, 999]
            return self._fresh(path, used, lambda: pool[rng.randrange(len(pool))])
        if kind == "string":
            if _IMAGE_NAME_RE.search(prop["name"]):
                return self._image_url(path, index, wants_long, rng, used)
            return self._string(path, index, wants_long, rng, used)
        if kind == "function":
            return f"handle{prop['name'][:1].upper()}{prop['name'][1:]}"
        if kind == "object":
            return self._object_value(parsed, path, shape or {}, index, rng, used)
        if kind == "array":
            return self._array_value(parsed, path, shape or {}, index, rng,
                                     used, length_requests)
        return None

    def _fresh(self, path: str, used: Dict[str, set], make) -> Any:
        seen = used.setdefault(path, set())
        for _ in range(64):
            value = make()
            key = json.dumps(value, sort_keys=True)
            if key not in seen:
                seen.add(key)
                return value
        return make()

    def _string(self, path: str, index: int, long: bool,
                rng: random.Random, used: Dict[str, set]) -> str:
        def make():
            a = self.words[rng.randrange(len(self.words))].capitalize()
            b = self.words[rng.randrange(len(self.words))]
            return f"{a} {b}"

        if long and index == 0:
            parts = [self.words[rng.randrange(len(self.words))]
                     for _ in range(9)]
            return self._fresh(path, used,
                               lambda: " ".join(parts).capitalize())
        return self._fresh(path, used, make)

    def _image_url(self, path: str, index: int, long: bool,
                   rng: random.Random, used: Dict[str, set]) -> str:
        dims = [(600, 400), (400, 300), (800, 450), (320, 240), (1200, 800),
                (640, 480), (750, 500)]
        if long and index == 0:
            word = self.words[rng.randrange(len(self.words))]
            return (f"https://placehold.co/1200x800?text="
                    f"{word.capitalize()}+product+photography+sample")
        w, h = dims[(index + rng.randrange(len(dims))) % len(dims)]
        return self._fresh(
            path, used,
            lambda: f"https://placehold.co/{w + 10 * rng.randrange(8)}x{h}")

    def _object_value(self, parsed: _PromptSchema, path: str, shape: dict,
                      index: int, rng: random.Random,
                      used: Dict[str, set]) -> dict:
        out = {}
        for fld in shape.get("fields", []):
            sub = {"name": fld.get("name", "value"),
                   "kind": fld.get("kind", "string"),
                   "allowed": fld.get("allowed"),
                   "has_default": "default" in fld,
                   "default": fld.get("default"), "required": fld.get("required")}
            out[sub["name"]] = self._value_for(
                parsed, f"{path}.{sub['name']}", sub, fld, index, rng, used)
        return out

    def _array_value(self, parsed: _PromptSchema, path: str, shape: dict,
                     index: int, rng: random.Random, used: Dict[str, set],
                     length_requests: List[int]) -> list:
        if index < len(length_requests):
            length = length_requests[index]
        else:
            length = (1, 3, 5, 2, 0, 4, 6)[(index + rng.randrange(3)) % 7]
        item_shape = shape.get("item") or {"kind": "string"}
        items = []
        for i in range(length):
            sub = {"name": "item", "kind": item_shape.get("kind", "string"),
                   "allowed": item_shape.get("allowed"),
                   "has_default": False, "default": None, "required": False}
            items.append(self._value_for(
                parsed, f"{path}[]", sub, item_shape, index + i, rng, used))
        return items


def stub_backend(seed: int = 0) -> StubBackend:
    return StubBackend(seed)


# ---------------------------------------------------------------------------
# remote backend
# ---------------------------------------------------------------------------

class RemoteBackend:
    """Chat-completion client speaking the OpenAI-compatible JSON protocol."""

    def __init__(self, base_url: str, api_key: str, model: str,
                 timeout: float = 60.0, max_retries: int = 2):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.model = model
        self.timeout = timeout
        self.max_retries = max_retries

    def complete(self, system_prompt: str, user_message: str,
                 json_mode: bool = True) -> str:
        import httpx

        payload: Dict[str, Any] = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": system_prompt},
                {"role": "user", "content": user_message},
            ],
        }
        if json_mode:
            payload["response_format"] = {"type": "json_object"}
        last_error: Optional[Exception] = None
        for attempt in range(self.max_retries + 1):
            try:
                response = httpx.post(
                    f"{self.base_url}/chat/completions",
                    json=payload,
                    headers={"Authorization": f"Bearer {self.api_key}"},
                    timeout=self.timeout,
                )
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code == 429:
                raise QuotaExceeded(f"backend rate limit: {response.text[:200]}")
            if response.status_code in (401, 403):
                raise BackendUnavailable(
                    f"backend refused credentials ({response.status_code})")
            if response.status_code >= 500:
                last_error = BackendUnavailable(
                    f"backend error {response.status_code}")
                continue
            try:
                body = response.json()
                return body["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise MalformedResponse(
                    f"unexpected completion payload: {exc}") from exc
        raise BackendUnavailable(f"backend unreachable: {last_error}")
