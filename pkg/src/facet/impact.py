"""Visual-impact analysis: the second AST pass.

Traces property flow into visually impactful code contexts (vi-contexts),
classifies each as structure / content / styling, and scores properties with
the base-times-coefficient formula. Classification rules:

* structure — the prop appears in the test of a conditional that selects a
  JSX subtree (``cond && <jsx>``, ternaries with a JSX branch, early-return
  guards), or in dynamic component selection (prop-derived tag names).
* content — the prop is interpolated into rendered children or drives
  list/map rendering.
* styling — the prop flows into any JSX attribute value (className, style
  objects, src, alt, ...).

A conditional test whose branches are all non-JSX classifies by the branch
context instead of structure. n counts distinct vi-context AST nodes: two
mentions of a prop inside one context count once.
"""
from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from .schema import (ComponentSchema, ImpactScore, UNSCORED_KINDS,
                     ViContextKind, ViContextOccurrence)
from .tsx import ast as A
from .tsx.component import (ParsedComponent, byte_converter, discover_schema,
                            parse_source)

SNIPPET_LIMIT = 200


def find_vi_contexts(pc: ParsedComponent,
                     schema: ComponentSchema) -> List[ViContextOccurrence]:
    """All (property, vi-context) occurrences in the component body."""
    finder = _ContextFinder(pc, schema)
    finder.visit_statement(pc.body)
    return finder.finish()


def score_property(prop: str,
                   occurrences: Sequence[ViContextOccurrence]) -> ImpactScore:
    """Score one property from its occurrence set."""
    return ImpactScore.compute(prop, occurrences)


def analyze_component(source: str,
                      filename: str = "<source>") -> Tuple[ComponentSchema, List[ImpactScore]]:
    """Full pipeline: parse, discover, find vi-contexts, score.

    Scores are sorted by impact descending with ties broken by declaration
    order; node- and function-kind properties are never scored.
    """
    pc = parse_source(source, filename)
    schema = discover_schema(pc)
    occurrences = find_vi_contexts(pc, schema)
    by_prop: Dict[str, List[ViContextOccurrence]] = {}
    for occ in occurrences:
        by_prop.setdefault(occ.property, []).append(occ)
    scores = []
    decl_order = {p.name: i for i, p in enumerate(schema.properties)}
    for spec in schema.properties:
        if spec.kind in UNSCORED_KINDS:
            continue
        scores.append(score_property(spec.name, by_prop.get(spec.name, [])))
    scores.sort(key=lambda s: (-s.impact, decl_order[s.property]))
    return schema, scores


def impact_report(scores: Sequence[ImpactScore]) -> list:
    """JSON-ready impact report."""
    return [s.to_dict() for s in scores]


# ---------------------------------------------------------------------------
# traversal
# ---------------------------------------------------------------------------

class _ContextFinder:
    def __init__(self, pc: ParsedComponent, schema: ComponentSchema):
        self.pc = pc
        self.src = pc.source
        self.scoreable = {p.name for p in schema.properties
                          if p.kind not in UNSCORED_KINDS}
        self.shadows: List[Set[str]] = []
        self._found: Dict[Tuple[str, int], Tuple[str, ViContextKind, A.Node]] = {}
        self._to_bytes = byte_converter(pc.source)

    # -- occurrence recording ------------------------------------------------

    def record(self, prop: str, kind: ViContextKind, node: A.Node):
        self._found.setdefault((prop, id(node)), (prop, kind, node))

    def finish(self) -> List[ViContextOccurrence]:
        occs = []
        for prop, kind, node in self._found.values():
            start, end = node.start, node.end
            # parse extents may trail into skipped trivia; trim it off
            while end > start and self.src[end - 1] in " \t\r\n":
                end -= 1
            span = (self._to_bytes(start), self._to_bytes(end))
            snippet = self.src[start:end][:SNIPPET_LIMIT]
            occs.append(ViContextOccurrence(property=prop, kind=kind, span=span,
                                            snippet=snippet))
        occs.sort(key=lambda o: (o.span, o.property))
        return occs

    # -- identifier resolution -------------------------------------------------

    def resolve_ident(self, name: str) -> Optional[str]:
        for scope in reversed(self.shadows):
            if name in scope:
                return None
        if name in self.pc.state_vars:
            return None
        prop = self.pc.prop_bindings.get(name)
        return prop if prop in self.scoreable else None

    def resolve_member(self, node: A.Member) -> Optional[str]:
        if node.computed or not isinstance(node.prop, str):
            return None
        obj = node.obj
        if isinstance(obj, A.Ident) and obj.name == self.pc.props_param_name \
                and not self._is_shadowed(obj.name):
            return node.prop if node.prop in self.scoreable else None
        return None

    def _is_shadowed(self, name: str) -> bool:
        return any(name in scope for scope in self.shadows)

    # -- statements ------------------------------------------------------------

    def visit_statement(self, stmt: Any):
        if stmt is None:
            return
        if isinstance(stmt, A.Block):
            for s in stmt.body:
                self.visit_statement(s)
        elif isinstance(stmt, A.ReturnStmt):
            if stmt.argument is not None:
                self.visit_rendered_expr(stmt.argument, content_node=stmt.argument)
        elif isinstance(stmt, A.IfStmt):
            if _contains_return(stmt):
                self.collect_refs(stmt.test,
                                  lambda p: self.record(p, ViContextKind.STRUCTURE, stmt))
            else:
                self.visit_neutral(stmt.test)
            self.visit_statement(stmt.consequent)
            self.visit_statement(stmt.alternate)
        elif isinstance(stmt, A.VarDecl):
            for d in stmt.declarators:
                if d.init is not None:
                    self.visit_neutral(d.init)
        elif isinstance(stmt, A.ExprStmt):
            self.visit_neutral(stmt.expr)
        elif isinstance(stmt, A.LoopStmt):
            for h in stmt.header:
                self.visit_neutral(h)
            self.visit_statement(stmt.body)
        elif isinstance(stmt, A.Node) and not isinstance(
                stmt, (A.ImportDecl, A.OpaqueStmt, A.TypeAlias, A.InterfaceDecl)):
            # Arrow bodies that are bare expressions arrive here.
            if isinstance(stmt, tuple(_EXPR_TYPES)):
                self.visit_rendered_expr(stmt, content_node=stmt)

    # -- expression contexts ---------------------------------------------------

    def visit_rendered_expr(self, expr: Any, content_node: A.Node):
        """An expression whose value becomes rendered output."""
        expr = _strip_sequence(expr)
        if isinstance(expr, (A.JSXElement, A.JSXFragment)):
            self.walk_jsx(expr)
        elif self._is_structural(expr):
            self.handle_structural(expr, content_node=content_node)
        elif self._map_call_prop(expr) is not None:
            self.handle_map_call(expr)
        else:
            self.collect_refs(
                expr, lambda p: self.record(p, ViContextKind.CONTENT, content_node))

    def visit_neutral(self, expr: Any):
        """Statement-position expression: only JSX subtrees, structural
        conditionals, and map rendering inside it are vi-contexts."""
        if expr is None or not isinstance(expr, A.Node):
            return
        if isinstance(expr, (A.JSXElement, A.JSXFragment)):
            self.walk_jsx(expr)
            return
        if self._is_structural(expr):
            self.handle_structural(expr)
            return
        if self._map_call_prop(expr) is not None:
            self.handle_map_call(expr)
            return
        if isinstance(expr, (A.Arrow, A.FunctionExpr)):
            self._descend_function(expr, neutral=True)
            return
        for child in A.iter_children(expr):
            self.visit_neutral(child)

    # -- JSX ---------------------------------------------------------------------

    def walk_jsx(self, element: Any):
        if isinstance(element, A.JSXFragment):
            for child in element.children:
                self._visit_jsx_child(child)
            return
        tag_root = element.name.split(".")[0]
        prop = self.resolve_ident(tag_root)
        if prop is not None:
            # Dynamic component selection: the prop picks the subtree kind.
            self.record(prop, ViContextKind.STRUCTURE, element)
        for attr in element.attrs:
            if isinstance(attr, A.JSXSpreadAttr):
                self.collect_refs(
                    attr.argument,
                    lambda p: self.record(p, ViContextKind.STYLING, attr))
            elif isinstance(attr, A.JSXAttr):
                self._visit_attr(attr)
        for child in element.children:
            self._visit_jsx_child(child)

    def _visit_attr(self, attr: A.JSXAttr):
        value = attr.value
        if value is None or isinstance(value, A.Literal):
            return
        if isinstance(value, (A.JSXElement, A.JSXFragment)):
            self.walk_jsx(value)
            return
        expr = value.expr if isinstance(value, A.JSXExprContainer) else value
        if expr is None:
            return
        expr = _strip_sequence(expr)
        if isinstance(expr, (A.JSXElement, A.JSXFragment)):
            self.walk_jsx(expr)
        elif self._is_structural(expr):
            self.handle_structural(expr, attr_node=attr)
        elif self._map_call_prop(expr) is not None:
            self.handle_map_call(expr)
        else:
            self.collect_refs(
                expr, lambda p: self.record(p, ViContextKind.STYLING, attr))

    def _visit_jsx_child(self, child: Any):
        if isinstance(child, (A.JSXElement, A.JSXFragment)):
            self.walk_jsx(child)
            return
        if not isinstance(child, A.JSXExprContainer) or child.expr is None:
            return
        self.visit_rendered_expr(child.expr, content_node=child)

    # -- conditionals and maps ---------------------------------------------------

    def _is_structural(self, expr: Any) -> bool:
        if isinstance(expr, A.Logical):
            if expr.op == "&&":
                return _yields_jsx(expr.right)
            return _yields_jsx(expr.left) or _yields_jsx(expr.right)
        if isinstance(expr, A.Conditional):
            return _yields_jsx(expr.consequent) or _yields_jsx(expr.alternate)
        return False

    def handle_structural(self, expr: Any, content_node: Optional[A.Node] = None,
                          attr_node: Optional[A.Node] = None):
        """Record test props as structure; dispatch branches by their shape."""
        record_test = lambda p: self.record(p, ViContextKind.STRUCTURE, expr)

        def branch(sub: Any):
            sub = _strip_sequence(sub)
            if isinstance(sub, (A.JSXElement, A.JSXFragment)):
                self.walk_jsx(sub)
            elif self._is_structural(sub):
                self.handle_structural(sub, content_node=content_node,
                                       attr_node=attr_node)
            elif self._map_call_prop(sub) is not None:
                self.handle_map_call(sub)
            elif content_node is not None:
                self.collect_refs(sub, lambda p: self.record(
                    p, ViContextKind.CONTENT, content_node))
            elif attr_node is not None:
                self.collect_refs(sub, lambda p: self.record(
                    p, ViContextKind.STYLING, attr_node))
            else:
                self.visit_neutral(sub)

        if isinstance(expr, A.Logical) and expr.op == "&&":
            self.collect_refs(expr.left, record_test)
            branch(expr.right)
        elif isinstance(expr, A.Logical):  # || and ??
            for side in (expr.left, expr.right):
                if _yields_jsx(side):
                    branch(side)
                else:
                    self.collect_refs(side, record_test)
        else:  # Conditional
            self.collect_refs(expr.test, record_test)
            branch(expr.consequent)
            branch(expr.alternate)

    def _map_call_prop(self, expr: Any) -> Optional[str]:
        """The prop driving an ``xs.map(cb)`` call, if any."""
        if not isinstance(expr, A.Call):
            return None
        callee = expr.callee
        if not isinstance(callee, A.Member) or callee.computed or callee.prop != "map":
            return None
        obj = callee.obj
        if isinstance(obj, A.Ident):
            return self.resolve_ident(obj.name)
        if isinstance(obj, A.Member):
            return self.resolve_member(obj)
        return None

    def handle_map_call(self, expr: A.Call):
        prop = self._map_call_prop(expr)
        if prop is not None:
            self.record(prop, ViContextKind.CONTENT, expr)
        for arg in expr.args:
            if isinstance(arg, (A.Arrow, A.FunctionExpr)):
                self._descend_function(arg, neutral=False)
            else:
                self.visit_neutral(arg)

    def _descend_function(self, fn: Any, neutral: bool):
        shadow = set()
        for param in fn.params:
            for pat in A.walk(param.pattern):
                if isinstance(pat, A.IdentPattern):
                    shadow.add(pat.name)
        self.shadows.append(shadow)
        try:
            body = fn.body
            if isinstance(body, A.Block):
                self.visit_statement(body)
            elif neutral:
                self.visit_neutral(body)
            else:
                self.visit_rendered_expr(body, content_node=body)
        finally:
            self.shadows.pop()

    # -- reference collection ----------------------------------------------------

    def collect_refs(self, expr: Any, record):
        """Record every scoreable prop referenced inside `expr`.

        Nested JSX is walked as rendered output, nested structural conditionals
        and map calls claim their own contexts, and function params shadow.
        """
        if expr is None or not isinstance(expr, A.Node):
            return
        expr = _strip_sequence(expr)
        if isinstance(expr, (A.JSXElement, A.JSXFragment)):
            self.walk_jsx(expr)
            return
        if self._is_structural(expr):
            self.handle_structural(expr)
            return
        if isinstance(expr, (A.Arrow, A.FunctionExpr)):
            shadow = set()
            for param in expr.params:
                for pat in A.walk(param.pattern):
                    if isinstance(pat, A.IdentPattern):
                        shadow.add(pat.name)
            self.shadows.append(shadow)
            try:
                if isinstance(expr.body, A.Block):
                    self.visit_statement(expr.body)
                else:
                    self.collect_refs(expr.body, record)
            finally:
                self.shadows.pop()
            return
        if isinstance(expr, A.Ident):
            prop = self.resolve_ident(expr.name)
            if prop is not None:
                record(prop)
            return
        if isinstance(expr, A.Member):
            prop = self.resolve_member(expr)
            if prop is not None:
                record(prop)
                if isinstance(expr.prop, A.Node):
                    self.collect_refs(expr.prop, record)
                return
            # obj.path.leaf: the root identifier may be an alias of a prop.
            self.collect_refs(expr.obj, record)
            if expr.computed and isinstance(expr.prop, A.Node):
                self.collect_refs(expr.prop, record)
            return
        if self._map_call_prop(expr) is not None:
            self.handle_map_call(expr)
            return
        for child in A.iter_children(expr):
            self.collect_refs(child, record)


_EXPR_TYPES = (A.Ident, A.Literal, A.TemplateLiteral, A.Unary, A.Binary,
               A.Logical, A.Conditional, A.Assignment, A.Call, A.Member,
               A.Arrow, A.FunctionExpr, A.ObjectExpr, A.ArrayExpr, A.Sequence,
               A.JSXElement, A.JSXFragment)


def _strip_sequence(expr: Any) -> Any:
    while isinstance(expr, A.Sequence) and expr.exprs:
        expr = expr.exprs[-1]
    return expr


def _yields_jsx(expr: Any) -> bool:
    expr = _strip_sequence(expr)
    if isinstance(expr, (A.JSXElement, A.JSXFragment)):
        return True
    if isinstance(expr, A.Conditional):
        return _yields_jsx(expr.consequent) or _yields_jsx(expr.alternate)
    if isinstance(expr, A.Logical):
        return _yields_jsx(expr.left) or _yields_jsx(expr.right)
    return False


def _contains_return(stmt: Any) -> bool:
    for branch in (stmt.consequent, stmt.alternate):
        if branch is None:
            continue
        for node in A.walk(branch):
            if isinstance(node, A.ReturnStmt):
                return True
    return False
