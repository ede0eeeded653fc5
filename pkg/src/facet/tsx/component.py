"""Discovery pass over a parsed module: locate the exported component, build
its property schema from TS annotations and destructuring, and resolve the
alias table (renamed/destructured props, state variables).
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple

from . import ast as A
from .parser import Parser, TsxSyntaxError, parse_module
from ..schema import (ComponentSchema, PropertyKind, PropertySpec,
                      source_digest)

log = logging.getLogger(__name__)

#: Type names that mark render-slot (node-kind) properties.
_NODE_TYPE_NAMES = {
    "ReactNode", "React.ReactNode", "ReactElement", "React.ReactElement",
    "JSX.Element", "ReactChild", "React.ReactChild", "ReactPortal",
    "Element",
}
#: Component-typed consts that implicitly accept children.
_FC_TYPE_NAMES = {"React.FC", "FC", "React.FunctionComponent", "FunctionComponent"}

_STATE_HOOKS = {"useState", "useReducer"}


class NoComponentFound(Exception):
    """No exported function/arrow component definition was detected."""


class UnsupportedTypeConstruct(Warning):
    """A prop type the discovery pass cannot model; recorded, never raised."""


@dataclass
class ParsedComponent:
    """A parsed component plus everything the analysis passes need."""

    ast: A.Program
    source: str
    filename: str
    component_name: str
    params: List[A.Param]
    body: Any                        # Block or expression body
    prop_bindings: Dict[str, str] = field(default_factory=dict)
    state_vars: Set[str] = field(default_factory=set)
    type_decls: Dict[str, Any] = field(default_factory=dict)
    props_param_name: Optional[str] = None
    props_type: Any = None           # resolved TSObject, when annotated
    fc_annotated: bool = False
    comments: List[Tuple[int, int, str]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def warn(self, message: str):
        self.warnings.append(message)
        log.warning("%s: %s", self.filename, message)


# ---------------------------------------------------------------------------
# parse_source
# ---------------------------------------------------------------------------

def parse_source(source: str, filename: str = "<source>") -> ParsedComponent:
    """Parse TSX/JSX text and locate the first exported component.

    Raises TsxSyntaxError on malformed input and NoComponentFound when no
    exported function/arrow component with a single props parameter exists.
    """
    program, comments = parse_module(source, filename)
    type_decls = _collect_type_decls(program)
    found = _find_component(program, filename)
    if found is None:
        raise NoComponentFound(
            f"{filename}: no exported function or arrow component found")
    name, params, body, var_type = found

    pc = ParsedComponent(ast=program, source=source, filename=filename,
                         component_name=name, params=params, body=body,
                         type_decls=type_decls, comments=comments)
    pc.props_type, pc.fc_annotated = _resolve_props_type(pc, var_type)
    _bind_param_props(pc)
    _collect_state_vars(pc)
    resolve_aliases(pc)
    return pc


def _collect_type_decls(program: A.Program) -> Dict[str, Any]:
    decls: Dict[str, Any] = {}
    for stmt in program.body:
        if isinstance(stmt, A.InterfaceDecl):
            decls[stmt.name] = A.TSObject(start=stmt.start, end=stmt.end,
                                          fields=stmt.fields)
        elif isinstance(stmt, A.TypeAlias):
            decls[stmt.name] = stmt.ts_type
    return decls


def _find_component(program: A.Program, filename: str):
    """First exported function/arrow with one parameter whose body has JSX."""
    local_fns: Dict[str, Tuple[List[A.Param], Any, Any]] = {}
    candidates = []
    for stmt in program.body:
        if isinstance(stmt, A.FunctionDecl):
            entry = (stmt.params, stmt.body, None)
            local_fns[stmt.name] = entry
            if stmt.export:
                candidates.append((stmt.name,) + entry)
        elif isinstance(stmt, A.VarDecl):
            for d in stmt.declarators:
                if not isinstance(d.pattern, A.IdentPattern):
                    continue
                if isinstance(d.init, (A.Arrow, A.FunctionExpr)):
                    entry = (d.init.params, d.init.body, d.ts_type)
                    local_fns[d.pattern.name] = entry
                    if stmt.export:
                        candidates.append((d.pattern.name,) + entry)
        elif isinstance(stmt, A.ExportDefault):
            expr = stmt.expr
            if isinstance(expr, (A.Arrow, A.FunctionExpr)):
                name = getattr(expr, "name", None) or _name_from_filename(filename)
                candidates.append((name, expr.params, expr.body, None))
            elif isinstance(expr, A.Ident) and expr.name in local_fns:
                candidates.append((expr.name,) + local_fns[expr.name])
    for name, params, body, var_type in candidates:
        if len(params) == 1 and _contains_jsx(body):
            return name, params, body, var_type
    return None


def _name_from_filename(filename: str) -> str:
    stem = re.split(r"[/\\]", filename)[-1].split(".")[0]
    stem = re.sub(r"[^0-9A-Za-z_$]", "", stem) or "Component"
    return stem[0].upper() + stem[1:]


def _contains_jsx(node: Any) -> bool:
    if node is None:
        return False
    for n in A.walk(node):
        if isinstance(n, (A.JSXElement, A.JSXFragment)):
            return True
    return False


def _resolve_props_type(pc: ParsedComponent, var_type: Any) -> Tuple[Any, bool]:
    """Returns (TSObject or None, fc_annotated)."""
    param = pc.params[0]
    fc = False
    ts_type = param.ts_type
    if var_type is not None and isinstance(var_type, A.TSRef):
        base = var_type.name
        if base in _FC_TYPE_NAMES:
            fc = True
            if ts_type is None and var_type.args:
                ts_type = var_type.args[0]
    resolved = _resolve_named(pc, ts_type) if ts_type is not None else None
    if ts_type is not None and resolved is None:
        pc.warn(f"props type is not an object type the analyzer can model: "
                f"{_type_text(pc, ts_type)}")
    return resolved, fc


def _resolve_named(pc: ParsedComponent, ts_type: Any, depth: int = 0) -> Optional[A.TSObject]:
    if depth > 8 or ts_type is None:
        return None
    if isinstance(ts_type, A.TSObject):
        return ts_type
    if isinstance(ts_type, A.TSRef):
        target = pc.type_decls.get(ts_type.name)
        if target is not None:
            return _resolve_named(pc, target, depth + 1)
    return None


def _type_text(pc: ParsedComponent, node: A.Node) -> str:
    return pc.source[node.start:node.end]


# ---------------------------------------------------------------------------
# bindings, state vars, aliases
# ---------------------------------------------------------------------------

def _bind_param_props(pc: ParsedComponent):
    """Identity + rename bindings from the props parameter pattern."""
    pattern = pc.params[0].pattern
    if isinstance(pattern, A.IdentPattern):
        pc.props_param_name = pattern.name
    elif isinstance(pattern, A.ObjectPattern):
        for prop in pattern.props:
            _bind_pattern(pc, prop.key, prop.value)


def _bind_pattern(pc: ParsedComponent, prop_name: str, value: Any):
    if isinstance(value, A.IdentPattern):
        pc.prop_bindings[value.name] = prop_name
    elif isinstance(value, A.ObjectPattern):
        # Nested destructuring: locals derive from the top-level prop.
        for sub in value.props:
            _bind_pattern(pc, prop_name, sub.value)
    elif isinstance(value, A.ArrayPattern):
        for el in value.elements:
            if el is not None:
                _bind_pattern(pc, prop_name, el)


def _collect_state_vars(pc: ParsedComponent):
    for node in A.walk(pc.body):
        if not isinstance(node, A.Declarator):
            continue
        if not _is_state_hook_call(node.init):
            continue
        for pat in A.walk(node.pattern):
            if isinstance(pat, A.IdentPattern):
                pc.state_vars.add(pat.name)


def _is_state_hook_call(init: Any) -> bool:
    if not isinstance(init, A.Call):
        return False
    callee = init.callee
    if isinstance(callee, A.Ident):
        return callee.name in _STATE_HOOKS
    if isinstance(callee, A.Member) and not callee.computed:
        return callee.prop in _STATE_HOOKS
    return False


def resolve_aliases(pc: ParsedComponent) -> Dict[str, str]:
    """Fill the alias table: destructuring renames plus single-assignment
    `const x = props.y` / `const x = y` aliases one hop from a prop binding.

    Reassigned identifiers are dropped (conservative). Returns the table.
    """
    base = dict(pc.prop_bindings)
    declared = set(base.values())
    candidates: Dict[str, str] = {}

    for node in A.walk(pc.body):
        if isinstance(node, A.Declarator):
            init = node.init
            if _is_state_hook_call(init):
                continue
            pattern = node.pattern
            # const { a, b: c } = props
            if isinstance(pattern, A.ObjectPattern) and _is_props_ref(pc, init):
                for prop in pattern.props:
                    _bind_pattern(pc, prop.key, prop.value)
                    declared.add(prop.key)
                continue
            if not isinstance(pattern, A.IdentPattern):
                continue
            target = _prop_of_expr(pc, init, base)
            if target is not None:
                candidates[pattern.name] = target

    reassigned = _reassigned_names(pc.body)
    for name, prop in candidates.items():
        if name in reassigned or name in pc.state_vars:
            continue
        pc.prop_bindings.setdefault(name, prop)
    for name in reassigned:
        # Reassignment invalidates aliases, but identity bindings stay.
        if name in pc.prop_bindings and pc.prop_bindings[name] != name:
            del pc.prop_bindings[name]
    return pc.prop_bindings


def _is_props_ref(pc: ParsedComponent, expr: Any) -> bool:
    return (pc.props_param_name is not None and isinstance(expr, A.Ident)
            and expr.name == pc.props_param_name)


def _prop_of_expr(pc: ParsedComponent, expr: Any, base: Dict[str, str]) -> Optional[str]:
    """The prop a bare alias initializer refers to, if it is one hop away."""
    if isinstance(expr, A.Member) and not expr.computed and _is_props_ref(pc, expr.obj):
        return expr.prop
    if isinstance(expr, A.Ident) and expr.name in base:
        return base[expr.name]
    return None


def _reassigned_names(body: Any) -> Set[str]:
    names: Set[str] = set()
    for node in A.walk(body):
        if isinstance(node, A.Assignment) and isinstance(node.target, A.Ident):
            names.add(node.target.name)
        elif isinstance(node, A.Unary) and node.op in ("++", "--") and \
                isinstance(node.operand, A.Ident):
            names.add(node.operand.name)
    return names


# ---------------------------------------------------------------------------
# discover_schema
# ---------------------------------------------------------------------------

def discover_schema(pc: ParsedComponent) -> ComponentSchema:
    """Build the ComponentSchema from the props type and destructuring."""
    specs: List[PropertySpec] = []
    seen: Set[str] = set()
    defaults = _destructuring_defaults(pc)

    if pc.props_type is not None:
        for fld in pc.props_type.fields:
            spec = _spec_from_field(pc, fld, defaults.get(fld.name))
            specs.append(spec)
            seen.add(fld.name)

    # Destructured props not present in the annotation (or untyped components).
    pattern = pc.params[0].pattern
    if isinstance(pattern, A.ObjectPattern):
        for prop in pattern.props:
            if prop.key in seen:
                continue
            default = defaults.get(prop.key)
            kind = _kind_from_default(default)
            if kind is None:
                kind = PropertyKind.STRING
                pc.warn(f"property '{prop.key}' has no type annotation; "
                        f"recorded as string")
            specs.append(PropertySpec(
                name=prop.key, kind=kind,
                required=default is None,
                default=default[0] if default else None,
                has_default=default is not None,
                element_schema=_element_schema_for_default(default, kind)))
            seen.add(prop.key)

    has_children = "children" in seen or _uses_children(pc)
    if "children" not in seen and (pc.fc_annotated or has_children):
        specs.append(PropertySpec(name="children", kind=PropertyKind.NODE,
                                  required=False,
                                  description="render slot"))
        has_children = True

    if not specs:
        raise NoComponentFound(
            f"{pc.filename}: component '{pc.component_name}' declares no "
            f"properties the analyzer can model")

    for spec in specs:
        pc.prop_bindings.setdefault(spec.name, spec.name)

    return ComponentSchema(
        component_name=pc.component_name,
        has_children=has_children,
        properties=tuple(specs),
        source_digest=source_digest(pc.source),
    )


def _uses_children(pc: ParsedComponent) -> bool:
    if pc.prop_bindings.get("children"):
        return True
    for node in A.walk(pc.body):
        if isinstance(node, A.Ident) and node.name == "children":
            return True
        if isinstance(node, A.Member) and not node.computed and \
                node.prop == "children" and _is_props_ref(pc, node.obj):
            return True
    return False


def _destructuring_defaults(pc: ParsedComponent) -> Dict[str, Tuple[Any]]:
    """prop name -> (literal default,) for defaults the pass can evaluate."""
    out: Dict[str, Tuple[Any]] = {}

    def visit_pattern(pattern: Any):
        if not isinstance(pattern, A.ObjectPattern):
            return
        for prop in pattern.props:
            default_expr = prop.default
            if default_expr is None and isinstance(prop.value, A.IdentPattern):
                default_expr = prop.value.default
            if default_expr is not None:
                value = _literal_value(default_expr)
                if value is not _NOT_LITERAL:
                    out[prop.key] = (value,)

    visit_pattern(pc.params[0].pattern)
    for node in A.walk(pc.body):
        if isinstance(node, A.Declarator) and _is_props_ref(pc, node.init):
            visit_pattern(node.pattern)
    return out


_NOT_LITERAL = object()


def _literal_value(expr: Any) -> Any:
    """Evaluate a literal expression; _NOT_LITERAL when it is not one."""
    if isinstance(expr, A.Literal):
        return expr.value
    if isinstance(expr, A.TemplateLiteral) and not expr.exprs:
        return expr.quasis[0]
    if isinstance(expr, A.Unary) and expr.op == "-":
        inner = _literal_value(expr.operand)
        if isinstance(inner, (int, float)) and not isinstance(inner, bool):
            return -inner
        return _NOT_LITERAL
    if isinstance(expr, A.Ident) and expr.name == "undefined":
        return _NOT_LITERAL
    if isinstance(expr, A.ArrayExpr):
        items = []
        for el in expr.elements:
            v = _literal_value(el) if el is not None else _NOT_LITERAL
            if v is _NOT_LITERAL:
                return _NOT_LITERAL
            items.append(v)
        return items
    if isinstance(expr, A.ObjectExpr):
        obj = {}
        for prop in expr.props:
            if not isinstance(prop, A.ObjectProp) or prop.computed:
                return _NOT_LITERAL
            v = _literal_value(prop.value)
            if v is _NOT_LITERAL:
                return _NOT_LITERAL
            obj[prop.key] = v
        return obj
    return _NOT_LITERAL


def _kind_from_default(default: Optional[Tuple[Any]]) -> Optional[PropertyKind]:
    if default is None:
        return None
    value = default[0]
    if isinstance(value, bool):
        return PropertyKind.BOOLEAN
    if isinstance(value, (int, float)):
        return PropertyKind.NUMBER
    if isinstance(value, str):
        return PropertyKind.STRING
    if isinstance(value, list):
        return PropertyKind.ARRAY
    if isinstance(value, dict):
        return PropertyKind.OBJECT
    return None


def _element_schema_for_default(default, kind: Optional[PropertyKind]):
    if kind == PropertyKind.ARRAY:
        return (PropertySpec(name="item", kind=PropertyKind.STRING),)
    if kind == PropertyKind.OBJECT:
        fields = []
        for key, value in (default[0] or {}).items():
            fields.append(PropertySpec(
                name=key, kind=_kind_from_default((value,)) or PropertyKind.STRING))
        return tuple(fields) or (PropertySpec(name="value", kind=PropertyKind.STRING),)
    return None


def _spec_from_field(pc: ParsedComponent, fld: A.TSField,
                     default: Optional[Tuple[Any]]) -> PropertySpec:
    kind, allowed, element = _kind_from_type(pc, fld.ts_type, fld.name)
    description = _field_description(pc, fld)
    has_default = default is not None and kind not in (PropertyKind.NODE,)
    default_value = default[0] if has_default else None
    if has_default and kind == PropertyKind.CATEGORICAL and allowed is not None:
        if not any(_scalar_eq(default_value, a) for a in allowed):
            pc.warn(f"property '{fld.name}': default {default_value!r} is not "
                    f"in its allowed values")
    return PropertySpec(
        name=fld.name,
        kind=kind,
        required=not fld.optional and not has_default,
        default=default_value,
        has_default=has_default,
        allowed_values=allowed,
        description=description,
        element_schema=element,
    )


def _scalar_eq(a: Any, b: Any) -> bool:
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    return a == b


def _field_description(pc: ParsedComponent, fld: A.TSField) -> str:
    src = pc.source
    leading: List[str] = []
    trailing: List[str] = []
    for start, end, text in pc.comments:
        if end <= fld.start and src[end:fld.start].strip() == "":
            # Leading comments must start their own line, otherwise they are
            # the previous field's trailing comment.
            line_start = src.rfind("\n", 0, start) + 1
            if src[line_start:start].strip() == "":
                leading.append(text)
        elif start >= fld.end and src[fld.end:start].strip() == "" \
                and "\n" not in src[fld.end:start]:
            trailing.append(text)
    return " ".join(p for p in leading + trailing if p)


def _kind_from_type(pc: ParsedComponent, ts_type: Any, prop_name: str,
                    depth: int = 0):
    """Map a TS type node to (kind, allowed_values, element_schema)."""
    if depth > 8 or ts_type is None:
        return _unsupported(pc, prop_name, ts_type)

    if isinstance(ts_type, A.TSRef):
        name = ts_type.name
        short = name.split(".")[-1]
        if name == "boolean":
            return PropertyKind.BOOLEAN, None, None
        if name == "number":
            return PropertyKind.NUMBER, None, None
        if name == "string":
            return PropertyKind.STRING, None, None
        if name in _NODE_TYPE_NAMES or short == "ReactNode":
            return PropertyKind.NODE, None, None
        if short in ("Array", "ReadonlyArray") and ts_type.args:
            return _array_of(pc, ts_type.args[0], prop_name, depth)
        target = pc.type_decls.get(name)
        if target is not None:
            return _kind_from_type(pc, target, prop_name, depth + 1)
        return _unsupported(pc, prop_name, ts_type)

    if isinstance(ts_type, A.TSLiteral):
        return PropertyKind.CATEGORICAL, (ts_type.value,), None

    if isinstance(ts_type, A.TSUnion):
        members = [m for m in ts_type.members
                   if not (isinstance(m, A.TSRef) and m.name in ("null", "undefined", "void"))]
        if not members:
            return _unsupported(pc, prop_name, ts_type)
        if len(members) == 1:
            return _kind_from_type(pc, members[0], prop_name, depth + 1)
        if all(isinstance(m, A.TSLiteral) for m in members):
            values = tuple(m.value for m in members)
            if all(isinstance(v, bool) for v in values):
                return PropertyKind.BOOLEAN, None, None
            return PropertyKind.CATEGORICAL, values, None
        return _unsupported(pc, prop_name, ts_type)

    if isinstance(ts_type, A.TSObject):
        fields = tuple(_spec_from_field(pc, f, None) for f in ts_type.fields)
        if not fields:
            fields = (PropertySpec(name="value", kind=PropertyKind.STRING),)
        return PropertyKind.OBJECT, None, fields

    if isinstance(ts_type, A.TSArray):
        return _array_of(pc, ts_type.element, prop_name, depth)

    if isinstance(ts_type, A.TSFunction):
        return PropertyKind.FUNCTION, None, None

    return _unsupported(pc, prop_name, ts_type)


def _array_of(pc: ParsedComponent, element: Any, prop_name: str, depth: int):
    kind, allowed, elem_schema = _kind_from_type(pc, element, prop_name + "[]",
                                                 depth + 1)
    if kind == PropertyKind.OBJECT and elem_schema is not None:
        return PropertyKind.ARRAY, None, elem_schema
    item = PropertySpec(name="item", kind=kind, allowed_values=allowed,
                        element_schema=elem_schema)
    return PropertyKind.ARRAY, None, (item,)


def _unsupported(pc: ParsedComponent, prop_name: str, ts_type: Any):
    text = _type_text(pc, ts_type) if isinstance(ts_type, A.Node) else "?"
    pc.warn(f"property '{prop_name}': unsupported type construct "
            f"'{text[:60]}'; recorded as string")
    return PropertyKind.STRING, None, None


# ---------------------------------------------------------------------------
# byte spans
# ---------------------------------------------------------------------------

def byte_converter(source: str):
    """codepoint offset -> UTF-8 byte offset, O(1) per lookup after setup."""
    if source.isascii():
        return lambda i: i
    offsets = [0]
    total = 0
    for ch in source:
        total += len(ch.encode("utf-8"))
        offsets.append(total)
    return lambda i: offsets[i]
