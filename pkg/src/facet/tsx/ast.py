"""AST node types for the bounded TSX/JSX grammar the analyzers need.

Nodes carry codepoint spans into the original source; byte spans for reports
are derived later. The tree is plain dataclasses, walked with iter_children.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Union


@dataclass
class Node:
    start: int = field(default=0, compare=False)
    end: int = field(default=0, compare=False)


# --- type annotations -------------------------------------------------------

@dataclass
class TSRef(Node):
    name: str = ""              # possibly dotted, e.g. "React.ReactNode"
    args: List[Any] = field(default_factory=list)


@dataclass
class TSLiteral(Node):
    value: Any = None           # string / number / boolean literal type


@dataclass
class TSUnion(Node):
    members: List[Any] = field(default_factory=list)


@dataclass
class TSField(Node):
    name: str = ""
    optional: bool = False
    ts_type: Any = None
    description: str = ""


@dataclass
class TSObject(Node):
    fields: List[TSField] = field(default_factory=list)


@dataclass
class TSArray(Node):
    element: Any = None


@dataclass
class TSFunction(Node):
    pass


@dataclass
class TSUnknown(Node):
    text: str = ""


# --- patterns ---------------------------------------------------------------

@dataclass
class IdentPattern(Node):
    name: str = ""
    default: Any = None         # expression or None


@dataclass
class ObjectPatternProp(Node):
    key: str = ""               # the property name being destructured
    value: Any = None           # nested pattern (IdentPattern for rename)
    default: Any = None


@dataclass
class ObjectPattern(Node):
    props: List[ObjectPatternProp] = field(default_factory=list)
    rest: Optional[str] = None


@dataclass
class ArrayPattern(Node):
    elements: List[Any] = field(default_factory=list)  # pattern or None (hole)


Pattern = Union[IdentPattern, ObjectPattern, ArrayPattern]


@dataclass
class Param(Node):
    pattern: Any = None
    ts_type: Any = None


# --- expressions ------------------------------------------------------------

@dataclass
class Ident(Node):
    name: str = ""


@dataclass
class Literal(Node):
    value: Any = None           # None / bool / int / float / str
    raw: str = ""


@dataclass
class TemplateLiteral(Node):
    quasis: List[str] = field(default_factory=list)
    exprs: List[Any] = field(default_factory=list)


@dataclass
class Unary(Node):
    op: str = ""
    operand: Any = None


@dataclass
class Binary(Node):
    op: str = ""
    left: Any = None
    right: Any = None


@dataclass
class Logical(Node):
    op: str = ""                # && || ??
    left: Any = None
    right: Any = None


@dataclass
class Conditional(Node):
    test: Any = None
    consequent: Any = None
    alternate: Any = None


@dataclass
class Assignment(Node):
    op: str = "="
    target: Any = None
    value: Any = None


@dataclass
class Call(Node):
    callee: Any = None
    args: List[Any] = field(default_factory=list)
    is_new: bool = False


@dataclass
class Member(Node):
    obj: Any = None
    prop: Any = None            # str for .name, expression when computed
    computed: bool = False


@dataclass
class Arrow(Node):
    params: List[Param] = field(default_factory=list)
    body: Any = None            # Block or expression


@dataclass
class FunctionExpr(Node):
    name: Optional[str] = None
    params: List[Param] = field(default_factory=list)
    body: Any = None


@dataclass
class ObjectProp(Node):
    key: str = ""
    value: Any = None
    shorthand: bool = False
    computed: bool = False


@dataclass
class SpreadElement(Node):
    argument: Any = None


@dataclass
class ObjectExpr(Node):
    props: List[Any] = field(default_factory=list)  # ObjectProp | SpreadElement


@dataclass
class ArrayExpr(Node):
    elements: List[Any] = field(default_factory=list)


@dataclass
class Sequence(Node):
    exprs: List[Any] = field(default_factory=list)


# --- JSX --------------------------------------------------------------------

@dataclass
class JSXAttr(Node):
    name: str = ""
    value: Any = None           # None (bare), Literal, or JSXExprContainer


@dataclass
class JSXSpreadAttr(Node):
    argument: Any = None


@dataclass
class JSXExprContainer(Node):
    expr: Any = None            # None for comment-only containers


@dataclass
class JSXText(Node):
    value: str = ""


@dataclass
class JSXElement(Node):
    name: str = ""              # tag text, possibly dotted
    attrs: List[Any] = field(default_factory=list)
    children: List[Any] = field(default_factory=list)
    self_closing: bool = False


@dataclass
class JSXFragment(Node):
    children: List[Any] = field(default_factory=list)


# --- statements -------------------------------------------------------------

@dataclass
class Program(Node):
    body: List[Any] = field(default_factory=list)


@dataclass
class ImportDecl(Node):
    text: str = ""


@dataclass
class TypeAlias(Node):
    name: str = ""
    ts_type: Any = None
    export: bool = False


@dataclass
class InterfaceDecl(Node):
    name: str = ""
    fields: List[TSField] = field(default_factory=list)
    export: bool = False


@dataclass
class Declarator(Node):
    pattern: Any = None
    ts_type: Any = None
    init: Any = None


@dataclass
class VarDecl(Node):
    kind: str = "const"
    declarators: List[Declarator] = field(default_factory=list)
    export: bool = False


@dataclass
class FunctionDecl(Node):
    name: str = ""
    params: List[Param] = field(default_factory=list)
    body: Any = None
    export: bool = False
    export_default: bool = False


@dataclass
class ExportDefault(Node):
    expr: Any = None


@dataclass
class ReturnStmt(Node):
    argument: Any = None


@dataclass
class IfStmt(Node):
    test: Any = None
    consequent: Any = None
    alternate: Any = None


@dataclass
class Block(Node):
    body: List[Any] = field(default_factory=list)


@dataclass
class ExprStmt(Node):
    expr: Any = None


@dataclass
class LoopStmt(Node):
    """for / while, modeled only as (header exprs, body)."""
    header: List[Any] = field(default_factory=list)
    body: Any = None


@dataclass
class OpaqueStmt(Node):
    """A statement the grammar does not model (class, enum, ...)."""
    text: str = ""


# --- traversal --------------------------------------------------------------

_CHILD_FIELDS = {
    Program: ("body",),
    TypeAlias: ("ts_type",),
    InterfaceDecl: ("fields",),
    TSRef: ("args",),
    TSUnion: ("members",),
    TSObject: ("fields",),
    TSField: ("ts_type",),
    TSArray: ("element",),
    VarDecl: ("declarators",),
    Declarator: ("pattern", "ts_type", "init"),
    FunctionDecl: ("params", "body"),
    ExportDefault: ("expr",),
    ReturnStmt: ("argument",),
    IfStmt: ("test", "consequent", "alternate"),
    Block: ("body",),
    ExprStmt: ("expr",),
    LoopStmt: ("header", "body"),
    Param: ("pattern", "ts_type"),
    IdentPattern: ("default",),
    ObjectPattern: ("props",),
    ObjectPatternProp: ("value", "default"),
    ArrayPattern: ("elements",),
    TemplateLiteral: ("exprs",),
    Unary: ("operand",),
    Binary: ("left", "right"),
    Logical: ("left", "right"),
    Conditional: ("test", "consequent", "alternate"),
    Assignment: ("target", "value"),
    Call: ("callee", "args"),
    Member: ("obj", "prop"),
    Arrow: ("params", "body"),
    FunctionExpr: ("params", "body"),
    ObjectProp: ("value",),
    SpreadElement: ("argument",),
    ObjectExpr: ("props",),
    ArrayExpr: ("elements",),
    Sequence: ("exprs",),
    JSXAttr: ("value",),
    JSXSpreadAttr: ("argument",),
    JSXExprContainer: ("expr",),
    JSXElement: ("attrs", "children"),
    JSXFragment: ("children",),
}


def iter_children(node):
    """Yield direct child nodes of `node` in source order."""
    fields = _CHILD_FIELDS.get(type(node), ())
    for name in fields:
        value = getattr(node, name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, Node):
                    yield item


def walk(node):
    """Depth-first pre-order walk of the subtree rooted at `node`."""
    yield node
    for child in iter_children(node):
        yield from walk(child)
