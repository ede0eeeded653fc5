"""Serialization of variation sets: canonical JSON documents and CSF-style
story modules. The story emitter is the inverse of the coverage engine's
extract_from_story_source for literal-valued variations.
"""
from __future__ import annotations

import json
import re
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .schema import (ComponentSchema, PropertyKind, VariationConfig,
                     to_canonical_json)
from .values import JsonValue, canonicalize

_JS_RESERVED = {
    "break", "case", "catch", "class", "const", "continue", "debugger",
    "default", "delete", "do", "else", "enum", "export", "extends", "false",
    "finally", "for", "function", "if", "import", "in", "instanceof", "new",
    "null", "return", "super", "switch", "this", "throw", "true", "try",
    "typeof", "var", "void", "while", "with", "yield", "let", "static",
    "await", "args",
}
_IDENT_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$]*$")


class UnserializableValue(Exception):
    """A variation value cannot be rendered as a literal."""


def emit_json(schema: ComponentSchema,
              variations: Sequence[VariationConfig]) -> str:
    """Canonical variations document; stable byte-for-byte across runs."""
    order = [p.name for p in schema.properties]
    doc = {
        "component": schema.component_name,
        "source_digest": schema.source_digest,
        "variations": [v.to_dict(key_order=order) for v in variations],
    }
    return to_canonical_json(doc)


def parse_variations_json(text: str) -> Tuple[str, str, List[VariationConfig]]:
    """Inverse of emit_json: (component, source_digest, configs)."""
    doc = json.loads(text)
    configs = [VariationConfig.from_dict(v) for v in doc.get("variations", [])]
    return doc.get("component", ""), doc.get("source_digest", ""), configs


def sanitize_identifier(name: str) -> str:
    """Story-export identifier: non-alphanumerics collapse to '_', leading
    digits get a 'V' prefix."""
    ident = re.sub(r"[^0-9A-Za-z]+", "_", name).strip("_")
    if not ident:
        ident = "V"
    if ident[0].isdigit():
        ident = "V" + ident
    if ident in _JS_RESERVED:
        ident += "_"
    return ident


def emit_story_module(schema: ComponentSchema,
                      variations: Sequence[VariationConfig],
                      component_import_path: Optional[str] = None) -> str:
    """A CSF-style module: default export metadata plus one named story
    export per variation with a literal args object."""
    component = schema.component_name
    import_path = component_import_path or f"./{component}"
    order = [p.name for p in schema.properties]

    lines = [
        f'import {{ {component} }} from "{json_escape_path(import_path)}";',
        "",
        "export default {",
        f'  title: "Generated/{component}",',
        f"  component: {component},",
        "};",
    ]
    used: Dict[str, int] = {}
    for config in variations:
        ident = sanitize_identifier(config.name)
        if ident in used:
            used[ident] += 1
            ident_unique = f"{ident}{used[ident]}"
        else:
            used[ident] = 1
            ident_unique = ident
        lines.append("")
        if config.description:
            lines.append(f"/** {escape_block_comment(config.description)} */")
        lines.append(f"export const {ident_unique} = {{")
        if config.name != ident_unique:
            lines.append(f"  name: {json.dumps(config.name, ensure_ascii=False)},")
        lines.append("  args: {")
        ordered = sorted(config.assignments.items(),
                         key=lambda kv: (order.index(kv[0])
                                         if kv[0] in order else len(order)))
        for key, value in ordered:
            rendered = render_literal(value, indent=4)
            key_text = key if _IDENT_RE.match(key) else json.dumps(key)
            lines.append(f"    {key_text}: {rendered},")
        lines.append("  },")
        lines.append("};")
    return "\n".join(lines) + "\n"


def escape_block_comment(text: str) -> str:
    return text.replace("*/", "*\\/").replace("\n", " ")


def json_escape_path(path: str) -> str:
    return path.replace("\\", "/").replace('"', "")


def render_literal(value: JsonValue, indent: int = 0) -> str:
    """A TS literal expression for a JSON value, 2-space indented."""
    value = canonicalize(value)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return json.dumps(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    pad = " " * indent
    inner_pad = " " * (indent + 2)
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [f"{inner_pad}{render_literal(v, indent + 2)}," for v in value]
        return "[\n" + "\n".join(items) + f"\n{pad}]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = []
        for key, v in value.items():
            key_text = key if _IDENT_RE.match(key) else json.dumps(key)
            items.append(f"{inner_pad}{key_text}: {render_literal(v, indent + 2)},")
        return "{\n" + "\n".join(items) + f"\n{pad}}}"
    raise UnserializableValue(f"cannot render {value!r} as a literal")
