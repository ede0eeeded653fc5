"""Scannerless recursive-descent parser for the TSX/JSX subset the analyzers
consume: ES module scaffolding, TypeScript type declarations, function and
arrow components, expressions, and JSX trees.

The grammar is deliberately bounded (see the tsx analysis design notes in the
README): it covers function/arrow components with TS annotations plus the CSF
story-module shape. Unsupported statements (classes, enums, ...) are consumed
as opaque spans rather than failing the parse, but malformed JSX and broken
expressions raise TsxSyntaxError with line/column info.
"""
from __future__ import annotations

import bisect
from typing import Any, List, Optional, Tuple

from . import ast as A

_ID_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_ID_CONT = _ID_START | set("0123456789")
_KEYWORDS = {
    "const", "let", "var", "function", "return", "if", "else", "for", "while",
    "do", "switch", "case", "default", "break", "continue", "new", "typeof",
    "instanceof", "in", "of", "class", "extends", "import", "export", "from",
    "as", "async", "await", "try", "catch", "finally", "throw", "delete",
    "void", "yield", "static",
}

# Binary operator precedence (higher binds tighter). && / || / ?? become
# Logical nodes, everything else Binary.
_BIN_OPS = [
    ("??", 1), ("||", 2), ("&&", 3),
    ("|", 4), ("^", 5), ("&", 6),
    ("===", 7), ("!==", 7), ("==", 7), ("!=", 7),
    ("<=", 8), (">=", 8), ("<", 8), (">", 8),
    ("instanceof", 8), ("in", 8),
    ("<<", 9), (">>>", 9), (">>", 9),
    ("+", 10), ("-", 10),
    ("*", 11), ("/", 11), ("%", 11),
    ("**", 12),
]
_ASSIGN_OPS = sorted(
    ["=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=",
     "&&=", "||=", "??=", "&=", "|=", "^="],
    key=len, reverse=True)


class TsxSyntaxError(SyntaxError):
    """Parse failure with source position."""

    def __init__(self, message: str, filename: str, lineno: int, col: int):
        super().__init__(message, (filename, lineno, col + 1, None))
        self.message = message
        self.line = lineno
        self.col = col

    def __str__(self):
        return f"{self.filename}:{self.line}:{self.col + 1}: {self.message}"


class Parser:
    def __init__(self, source: str, filename: str = "<source>"):
        self.src = source
        self.n = len(source)
        self.pos = 0
        self.filename = filename
        self.comments: List[Tuple[int, int, str]] = []
        self._comment_starts: set = set()
        self._line_starts = [0]
        for i, ch in enumerate(source):
            if ch == "\n":
                self._line_starts.append(i + 1)

    # -- low-level helpers ---------------------------------------------------

    def error(self, message: str, pos: Optional[int] = None):
        p = self.pos if pos is None else pos
        line = bisect.bisect_right(self._line_starts, p)
        col = p - self._line_starts[line - 1]
        raise TsxSyntaxError(message, self.filename, line, col)

    def _skip(self):
        """Skip whitespace and comments, recording comments once."""
        src, n = self.src, self.n
        while self.pos < n:
            ch = src[self.pos]
            if ch in " \t\r\n\f\v":
                self.pos += 1
            elif ch == "/" and self.pos + 1 < n and src[self.pos + 1] == "/":
                start = self.pos
                end = src.find("\n", self.pos)
                end = n if end == -1 else end
                self._record_comment(start, end, src[start + 2:end])
                self.pos = end
            elif ch == "/" and self.pos + 1 < n and src[self.pos + 1] == "*":
                start = self.pos
                end = src.find("*/", self.pos + 2)
                if end == -1:
                    self.error("unterminated block comment", start)
                self._record_comment(start, end + 2, src[start + 2:end])
                self.pos = end + 2
            else:
                return

    def _record_comment(self, start: int, end: int, text: str):
        if start not in self._comment_starts:
            self._comment_starts.add(start)
            self.comments.append((start, end, text.strip()))

    def at_end(self) -> bool:
        self._skip()
        return self.pos >= self.n

    def peek(self) -> str:
        self._skip()
        return self.src[self.pos] if self.pos < self.n else ""

    def at(self, s: str) -> bool:
        self._skip()
        return self.src.startswith(s, self.pos)

    def eat(self, s: str) -> bool:
        if self.at(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.eat(s):
            got = self.src[self.pos:self.pos + 12].split("\n")[0] or "end of file"
            self.error(f"expected {s!r}, found {got!r}")

    def at_word(self, w: str) -> bool:
        self._skip()
        if not self.src.startswith(w, self.pos):
            return False
        end = self.pos + len(w)
        return end >= self.n or self.src[end] not in _ID_CONT

    def eat_word(self, w: str) -> bool:
        if self.at_word(w):
            self.pos += len(w)
            return True
        return False

    def expect_word(self, w: str):
        if not self.eat_word(w):
            self.error(f"expected keyword {w!r}")

    def peek_ident(self) -> Optional[str]:
        self._skip()
        p = self.pos
        if p < self.n and self.src[p] in _ID_START:
            end = p + 1
            while end < self.n and self.src[end] in _ID_CONT:
                end += 1
            return self.src[p:end]
        return None

    def parse_ident(self) -> str:
        name = self.peek_ident()
        if name is None:
            self.error("expected identifier")
        self.pos += len(name)
        return name

    # -- program ---------------------------------------------------------------

    def parse_program(self) -> A.Program:
        prog = A.Program(start=0, body=[])
        while not self.at_end():
            if self.eat(";"):
                continue
            stmt = self.parse_statement()
            if stmt is not None:
                prog.body.append(stmt)
        prog.end = self.n
        return prog

    # -- statements --------------------------------------------------------

    def parse_statement(self) -> Any:
        self._skip()
        start = self.pos
        if self.at_word("import"):
            return self._parse_import(start)
        if self.at_word("export"):
            return self._parse_export(start)
        if self.at_word("interface"):
            return self._parse_interface(start, export=False)
        if self.at_word("type"):
            alias = self._try_parse_type_alias(start, export=False)
            if alias is not None:
                return alias
        for kw in ("const", "let", "var"):
            if self.at_word(kw):
                return self._parse_var_decl(start, export=False)
        if self.at_word("function") or (self.at_word("async") and self._lookahead_word_after("async") == "function"):
            self.eat_word("async")
            return self._parse_function_decl(start, export=False)
        if self.at_word("return"):
            return self._parse_return(start)
        if self.at_word("if"):
            return self._parse_if(start)
        if self.at_word("for"):
            return self._parse_for(start)
        if self.at_word("while"):
            return self._parse_while(start)
        if self.at_word("do"):
            return self._parse_do(start)
        if self.at_word("switch"):
            return self._parse_switch(start)
        if self.at_word("try"):
            return self._parse_try(start)
        if self.at_word("throw"):
            self.eat_word("throw")
            expr = self.parse_expression()
            self.eat(";")
            return A.ExprStmt(start=start, end=self.pos, expr=expr)
        for kw in ("break", "continue"):
            if self.eat_word(kw):
                self.peek_ident() and self.parse_ident()  # optional label
                self.eat(";")
                return A.OpaqueStmt(start=start, end=self.pos, text=kw)
        for kw in ("class", "enum", "namespace", "declare", "abstract"):
            if self.at_word(kw):
                return self._skip_opaque_decl(start)
        if self.at("{"):
            return self.parse_block()
        expr = self.parse_expression()
        self.eat(";")
        return A.ExprStmt(start=start, end=self.pos, expr=expr)

    def _lookahead_word_after(self, w: str) -> Optional[str]:
        save = self.pos
        self.eat_word(w)
        nxt = self.peek_ident()
        self.pos = save
        return nxt

    def _parse_import(self, start: int) -> A.ImportDecl:
        self.expect_word("import")
        # Consume until the module string (or a bare ';').
        while not self.at_end():
            ch = self.peek()
            if ch in "'\"":
                self._scan_string()
                self.eat(";")
                break
            if ch == ";":
                self.pos += 1
                break
            if ch == "{":
                self._skip_balanced("{", "}")
            else:
                self.pos += 1
        return A.ImportDecl(start=start, end=self.pos, text=self.src[start:self.pos])

    def _parse_export(self, start: int) -> Any:
        self.expect_word("export")
        if self.eat_word("default"):
            if self.at_word("function") or (self.at_word("async") and self._lookahead_word_after("async") == "function"):
                self.eat_word("async")
                fn = self._parse_function_decl(start, export=True)
                fn.export_default = True
                return fn
            expr = self.parse_expression()
            self.eat(";")
            return A.ExportDefault(start=start, end=self.pos, expr=expr)
        if self.at_word("interface"):
            return self._parse_interface(start, export=True)
        if self.at_word("type"):
            alias = self._try_parse_type_alias(start, export=True)
            if alias is not None:
                return alias
            self.error("malformed exported type alias")
        for kw in ("const", "let", "var"):
            if self.at_word(kw):
                return self._parse_var_decl(start, export=True)
        if self.at_word("function") or (self.at_word("async") and self._lookahead_word_after("async") == "function"):
            self.eat_word("async")
            return self._parse_function_decl(start, export=True)
        for kw in ("class", "enum", "namespace", "declare", "abstract"):
            if self.at_word(kw):
                return self._skip_opaque_decl(start)
        if self.at("{"):
            self._skip_balanced("{", "}")
            if self.eat_word("from"):
                self._scan_string()
            self.eat(";")
            return A.OpaqueStmt(start=start, end=self.pos, text="export-list")
        if self.eat("*"):
            self.eat_word("as") and self.parse_ident()
            self.expect_word("from")
            self._scan_string()
            self.eat(";")
            return A.OpaqueStmt(start=start, end=self.pos, text="export-star")
        self.error("unsupported export form")

    def _try_parse_type_alias(self, start: int, export: bool) -> Optional[A.TypeAlias]:
        save = self.pos
        self.eat_word("type")
        name = self.peek_ident()
        if name is None:
            self.pos = save
            return None
        self.pos += len(name)
        if self.at("<"):  # generic alias: skip the parameter list
            self._skip_balanced("<", ">")
        if not self.eat("="):
            self.pos = save
            return None
        ts_type = self.parse_type()
        self.eat(";")
        return A.TypeAlias(start=start, end=self.pos, name=name, ts_type=ts_type,
                           export=export)

    def _parse_interface(self, start: int, export: bool) -> A.InterfaceDecl:
        self.expect_word("interface")
        name = self.parse_ident()
        if self.at("<"):
            self._skip_balanced("<", ">")
        if self.eat_word("extends"):
            self.parse_type()
            while self.eat(","):
                self.parse_type()
        obj = self._parse_type_object()
        return A.InterfaceDecl(start=start, end=self.pos, name=name,
                               fields=obj.fields, export=export)

    def _parse_var_decl(self, start: int, export: bool) -> A.VarDecl:
        kind = self.parse_ident()  # const / let / var
        decls = []
        while True:
            dstart = self.pos
            self._skip()
            dstart = self.pos
            pattern = self.parse_pattern()
            ts_type = None
            if self.eat("!"):  # definite assignment assertion
                pass
            if self.at(":") and not self.at("::"):
                self.eat(":")
                ts_type = self.parse_type()
            init = None
            if self.at("=") and not self.at("=>") and not self.at("=="):
                self.eat("=")
                init = self.parse_assignment_expr()
            decls.append(A.Declarator(start=dstart, end=self.pos, pattern=pattern,
                                      ts_type=ts_type, init=init))
            if not self.eat(","):
                break
        self.eat(";")
        return A.VarDecl(start=start, end=self.pos, kind=kind, declarators=decls,
                         export=export)

    def _parse_function_decl(self, start: int, export: bool) -> A.FunctionDecl:
        self.expect_word("function")
        name = self.parse_ident() if self.peek_ident() else ""
        if self.at("<"):
            self._skip_balanced("<", ">")
        params = self.parse_params()
        if self.eat(":"):
            self.parse_type()
        body = self.parse_block()
        return A.FunctionDecl(start=start, end=self.pos, name=name, params=params,
                              body=body, export=export)

    def _parse_return(self, start: int) -> A.ReturnStmt:
        self.expect_word("return")
        self._skip()
        arg = None
        if self.pos < self.n and self.src[self.pos] not in ";})":
            arg = self.parse_expression()
        self.eat(";")
        return A.ReturnStmt(start=start, end=self.pos, argument=arg)

    def _parse_if(self, start: int) -> A.IfStmt:
        self.expect_word("if")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        cons = self.parse_statement()
        alt = None
        if self.eat_word("else"):
            alt = self.parse_statement()
        return A.IfStmt(start=start, end=self.pos, test=test, consequent=cons,
                        alternate=alt)

    def _parse_for(self, start: int) -> A.LoopStmt:
        self.expect_word("for")
        self.expect("(")
        header: List[Any] = []
        if any(self.at_word(k) for k in ("const", "let", "var")):
            self.parse_ident()
            self.parse_pattern()
            if self.eat_word("of") or self.eat_word("in"):
                header.append(self.parse_expression())
            else:
                if self.eat("="):
                    header.append(self.parse_expression())
                self.eat(";")
                if not self.at(";") and not self.at(")"):
                    header.append(self.parse_expression())
                self.eat(";")
                if not self.at(")"):
                    header.append(self.parse_expression())
        else:
            if not self.at(";"):
                first = self.parse_expression()
                header.append(first)
                if self.eat_word("of") or self.eat_word("in"):
                    header.append(self.parse_expression())
            if self.eat(";"):
                if not self.at(";") and not self.at(")"):
                    header.append(self.parse_expression())
                self.eat(";")
                if not self.at(")"):
                    header.append(self.parse_expression())
        self.expect(")")
        body = self.parse_statement()
        return A.LoopStmt(start=start, end=self.pos, header=header, body=body)

    def _parse_while(self, start: int) -> A.LoopStmt:
        self.expect_word("while")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return A.LoopStmt(start=start, end=self.pos, header=[test], body=body)

    def _parse_do(self, start: int) -> A.LoopStmt:
        self.expect_word("do")
        body = self.parse_statement()
        self.expect_word("while")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        self.eat(";")
        return A.LoopStmt(start=start, end=self.pos, header=[test], body=body)

    def _parse_switch(self, start: int) -> A.LoopStmt:
        self.expect_word("switch")
        self.expect("(")
        disc = self.parse_expression()
        self.expect(")")
        self.expect("{")
        header = [disc]
        stmts: List[Any] = []
        while not self.at("}"):
            if self.eat_word("case"):
                header.append(self.parse_expression())
                self.expect(":")
            elif self.eat_word("default"):
                self.expect(":")
            else:
                if self.eat(";"):
                    continue
                stmts.append(self.parse_statement())
        self.expect("}")
        body = A.Block(start=start, end=self.pos, body=stmts)
        return A.LoopStmt(start=start, end=self.pos, header=header, body=body)

    def _parse_try(self, start: int) -> A.Block:
        self.expect_word("try")
        parts = [self.parse_block()]
        if self.eat_word("catch"):
            if self.eat("("):
                self.parse_pattern()
                if self.eat(":"):
                    self.parse_type()
                self.expect(")")
            parts.append(self.parse_block())
        if self.eat_word("finally"):
            parts.append(self.parse_block())
        return A.Block(start=start, end=self.pos, body=parts)

    def _skip_opaque_decl(self, start: int) -> A.OpaqueStmt:
        # class / enum / namespace / declare ...: consume through the body.
        while not self.at_end() and not self.at("{") and not self.at(";"):
            if self.peek() in "'\"":
                self._scan_string()
            else:
                self.pos += 1
        if self.at("{"):
            self._skip_balanced("{", "}")
        self.eat(";")
        return A.OpaqueStmt(start=start, end=self.pos,
                            text=self.src[start:self.pos][:40])

    def parse_block(self) -> A.Block:
        self._skip()
        start = self.pos
        self.expect("{")
        body = []
        while not self.at("}"):
            if self.at_end():
                self.error("unterminated block", start)
            if self.eat(";"):
                continue
            body.append(self.parse_statement())
        self.expect("}")
        return A.Block(start=start, end=self.pos, body=body)

    # -- patterns ------------------------------------------------------------

    def parse_pattern(self) -> Any:
        self._skip()
        start = self.pos
        if self.at("{"):
            return self._parse_object_pattern(start)
        if self.at("["):
            return self._parse_array_pattern(start)
        name = self.parse_ident()
        return A.IdentPattern(start=start, end=self.pos, name=name)

    def _parse_object_pattern(self, start: int) -> A.ObjectPattern:
        self.expect("{")
        props: List[A.ObjectPatternProp] = []
        rest = None
        while not self.at("}"):
            self._skip()
            pstart = self.pos
            if self.eat("..."):
                rest = self.parse_ident()
            else:
                key = self.parse_ident()
                value: Any = A.IdentPattern(start=pstart, end=self.pos, name=key)
                if self.eat(":"):
                    value = self.parse_pattern()
                default = None
                if self.at("=") and not self.at("=>") and not self.at("=="):
                    self.eat("=")
                    default = self.parse_assignment_expr()
                props.append(A.ObjectPatternProp(start=pstart, end=self.pos,
                                                 key=key, value=value,
                                                 default=default))
            if not self.eat(","):
                break
        self.expect("}")
        return A.ObjectPattern(start=start, end=self.pos, props=props, rest=rest)

    def _parse_array_pattern(self, start: int) -> A.ArrayPattern:
        self.expect("[")
        elements: List[Any] = []
        while not self.at("]"):
            if self.eat(","):
                elements.append(None)
                continue
            if self.eat("..."):
                elements.append(self.parse_pattern())
            else:
                pat = self.parse_pattern()
                if self.at("=") and not self.at("=>") and not self.at("=="):
                    self.eat("=")
                    default = self.parse_assignment_expr()
                    if isinstance(pat, A.IdentPattern):
                        pat.default = default
                elements.append(pat)
            if not self.eat(","):
                break
        self.expect("]")
        return A.ArrayPattern(start=start, end=self.pos, elements=elements)

    def parse_params(self) -> List[A.Param]:
        self.expect("(")
        params: List[A.Param] = []
        while not self.at(")"):
            self._skip()
            pstart = self.pos
            self.eat("...")
            pattern = self.parse_pattern()
            self.eat("?")
            ts_type = None
            if self.eat(":"):
                ts_type = self.parse_type()
            if self.at("=") and not self.at("=>") and not self.at("=="):
                self.eat("=")
                default = self.parse_assignment_expr()
                if isinstance(pattern, A.IdentPattern):
                    pattern.default = default
            params.append(A.Param(start=pstart, end=self.pos, pattern=pattern,
                                  ts_type=ts_type))
            if not self.eat(","):
                break
        self.expect(")")
        return params

    # -- types -----------------------------------------------------------------

    def parse_type(self) -> Any:
        save = self.pos
        try:
            return self._parse_type_union()
        except TsxSyntaxError:
            # Unsupported construct: consume a balanced blob so parsing resumes.
            self.pos = save
            return self._skip_type_blob()

    def _skip_type_blob(self) -> A.TSUnknown:
        self._skip()
        start = self.pos
        depth = 0
        while self.pos < self.n:
            ch = self.src[self.pos]
            if ch in "'\"`":
                self._scan_string() if ch != "`" else self.parse_template_literal()
                continue
            if ch in "([{<":
                depth += 1
            elif ch in ")]}>":
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and ch in ",;=\n":
                break
            self.pos += 1
        return A.TSUnknown(start=start, end=self.pos, text=self.src[start:self.pos])

    def _parse_type_union(self) -> Any:
        self._skip()
        start = self.pos
        self.eat("|")
        members = [self._parse_type_intersection()]
        while self.at("|") and not self.at("||"):
            self.eat("|")
            members.append(self._parse_type_intersection())
        if len(members) == 1:
            return members[0]
        return A.TSUnion(start=start, end=self.pos, members=members)

    def _parse_type_intersection(self) -> Any:
        members = [self._parse_type_postfix()]
        while self.at("&") and not self.at("&&"):
            self.eat("&")
            members.append(self._parse_type_postfix())
        if len(members) == 1:
            return members[0]
        # Merge object intersections; anything else is out of scope.
        if all(isinstance(m, A.TSObject) for m in members):
            merged = A.TSObject(start=members[0].start, end=members[-1].end)
            for m in members:
                merged.fields.extend(m.fields)
            return merged
        return A.TSUnknown(start=members[0].start, end=members[-1].end,
                           text="intersection")

    def _parse_type_postfix(self) -> Any:
        t = self._parse_type_primary()
        while True:
            self._skip()
            if self.src.startswith("[]", self.pos):
                self.pos += 2
                t = A.TSArray(start=t.start, end=self.pos, element=t)
            elif self.src.startswith("[", self.pos):
                # Indexed access type T["k"]: out of scope.
                self._skip_balanced("[", "]")
                t = A.TSUnknown(start=t.start, end=self.pos, text="indexed-access")
            else:
                break
        return t

    def _parse_type_primary(self) -> Any:
        self._skip()
        start = self.pos
        ch = self.peek()
        if ch == "(":
            fn = self._try_parse_function_type(start)
            if fn is not None:
                return fn
            self.expect("(")
            inner = self.parse_type()
            self.expect(")")
            return inner
        if ch == "{":
            return self._parse_type_object()
        if ch == "[":
            self._skip_balanced("[", "]")
            return A.TSUnknown(start=start, end=self.pos, text="tuple")
        if ch in "'\"":
            value = self._scan_string()
            return A.TSLiteral(start=start, end=self.pos, value=value)
        if ch == "`":
            self.parse_template_literal()
            return A.TSUnknown(start=start, end=self.pos, text="template-type")
        if ch and (ch.isdigit() or ch == "-"):
            neg = self.eat("-")
            num = self._scan_number()
            return A.TSLiteral(start=start, end=self.pos, value=-num if neg else num)
        for kw in ("keyof", "typeof", "readonly", "infer"):
            if self.eat_word(kw):
                inner = self._parse_type_postfix()
                return A.TSUnknown(start=start, end=self.pos, text=kw)
        if self.eat_word("true"):
            return A.TSLiteral(start=start, end=self.pos, value=True)
        if self.eat_word("false"):
            return A.TSLiteral(start=start, end=self.pos, value=False)
        if self.eat_word("new"):
            self._try_parse_function_type(start)
            return A.TSUnknown(start=start, end=self.pos, text="constructor")
        name = self.peek_ident()
        if name is None:
            self.error("expected a type")
        self.pos += len(name)
        while self.at("."):
            self.eat(".")
            name += "." + self.parse_ident()
        args: List[Any] = []
        if self.at("<") and not self.at("<="):
            self.eat("<")
            args.append(self.parse_type())
            while self.eat(","):
                args.append(self.parse_type())
            self._expect_type_args_close()
        return A.TSRef(start=start, end=self.pos, name=name, args=args)

    def _expect_type_args_close(self):
        # '>>' from nested generics must close one level at a time.
        self._skip()
        if self.pos < self.n and self.src[self.pos] == ">":
            self.pos += 1
            return
        self.error("expected '>' to close type arguments")

    def _try_parse_function_type(self, start: int) -> Optional[A.TSFunction]:
        save = self.pos
        try:
            self.expect("(")
            while not self.at(")"):
                self.eat("...")
                self.parse_ident()
                self.eat("?")
                if self.eat(":"):
                    self._parse_type_union()
                if not self.eat(","):
                    break
            self.expect(")")
            self.expect("=>")
            self._parse_type_union()
            return A.TSFunction(start=start, end=self.pos)
        except TsxSyntaxError:
            self.pos = save
            return None

    def _parse_type_object(self) -> A.TSObject:
        self._skip()
        start = self.pos
        self.expect("{")
        fields: List[A.TSField] = []
        while not self.at("}"):
            self._skip()
            fstart = self.pos
            if self.at_end():
                self.error("unterminated type literal", start)
            if self.at("["):
                self._skip_balanced("[", "]")  # index signature key
                self.eat("?")
                if self.eat(":"):
                    self.parse_type()
                self.eat(";") or self.eat(",")
                continue
            if self.eat_word("readonly"):
                pass
            name = self.peek_ident()
            if name is not None:
                self.pos += len(name)
            else:
                name = self._scan_string() if self.peek() in "'\"" else None
                if name is None:
                    self.error("expected a property name in type literal")
            optional = self.eat("?")
            if self.at("("):  # method signature
                self._skip_balanced("(", ")")
                if self.eat(":"):
                    self.parse_type()
                ts_type: Any = A.TSFunction(start=fstart, end=self.pos)
            elif self.eat(":"):
                ts_type = self.parse_type()
            else:
                self.error(f"expected ':' after property {name!r}")
            self.eat(";") or self.eat(",")
            fields.append(A.TSField(start=fstart, end=self.pos, name=name,
                                    optional=optional, ts_type=ts_type))
        self.expect("}")
        return A.TSObject(start=start, end=self.pos, fields=fields)

    # -- expressions -----------------------------------------------------------

    def parse_expression(self) -> Any:
        return self.parse_assignment_expr()

    def parse_assignment_expr(self) -> Any:
        self._skip()
        start = self.pos
        arrow = self._try_parse_arrow(start)
        if arrow is not None:
            return arrow
        left = self._parse_conditional()
        self._skip()
        for op in _ASSIGN_OPS:
            if self._at_op(op):
                self.pos += len(op)
                value = self.parse_assignment_expr()
                return A.Assignment(start=start, end=self.pos, op=op, target=left,
                                    value=value)
        return left

    def _at_op(self, op: str) -> bool:
        """Operator match that never bites into a longer operator."""
        if not self.src.startswith(op, self.pos):
            return False
        nxt = self.src[self.pos + len(op):self.pos + len(op) + 1]
        if op == "=" and nxt in ("=", ">"):
            return False
        if op in ("==", "!=", "<", ">", "<<", ">>", "*", "**", "&&", "||", "&",
                  "|", "^", "+", "-", "/", "%", "<=", ">=", "??") and nxt == "=":
            return False
        if op == "&" and nxt == "&":
            return False
        if op == "|" and nxt == "|":
            return False
        if op == "*" and nxt == "*":
            return False
        if op == "<" and nxt == "<":
            return False
        if op == ">" and nxt == ">":
            return False
        if op == "?" and nxt in (".", "?"):
            return False
        return True

    def _try_parse_arrow(self, start: int) -> Optional[A.Arrow]:
        self._skip()
        self.eat_word("async")
        self._skip()
        if self.pos < self.n and self.src[self.pos] in _ID_START:
            save = self.pos
            name = self.peek_ident()
            if name is not None and name not in _KEYWORDS:
                self.pos += len(name)
                if self.at("=>"):
                    self.eat("=>")
                    pat = A.IdentPattern(start=save, end=save + len(name), name=name)
                    param = A.Param(start=save, end=save + len(name), pattern=pat)
                    body = self.parse_block() if self.at("{") else self.parse_assignment_expr()
                    return A.Arrow(start=start, end=self.pos, params=[param], body=body)
            self.pos = start
            return None
        if self.pos < self.n and self.src[self.pos] == "(":
            save = self.pos
            try:
                params = self.parse_params()
                if self.eat(":"):
                    self.parse_type()
                committed = self.eat("=>")
            except TsxSyntaxError:
                self.pos = start
                return None
            if not committed:
                self.pos = start
                return None
            # Past '=>' this is an arrow for sure; body errors are real.
            body = self.parse_block() if self.at("{") else self.parse_assignment_expr()
            return A.Arrow(start=start, end=self.pos, params=params, body=body)
        self.pos = start
        return None

    def _parse_conditional(self) -> Any:
        self._skip()
        start = self.pos
        test = self._parse_binary(1)
        self._skip()
        if self.pos < self.n and self.src[self.pos] == "?" and self._at_op("?"):
            self.pos += 1
            cons = self.parse_assignment_expr()
            self.expect(":")
            alt = self.parse_assignment_expr()
            return A.Conditional(start=start, end=self.pos, test=test,
                                 consequent=cons, alternate=alt)
        return test

    def _parse_binary(self, min_prec: int) -> Any:
        self._skip()
        start = self.pos
        left = self._parse_unary()
        while True:
            self._skip()
            matched = None
            for op, prec in _BIN_OPS:
                if prec < min_prec:
                    continue
                if op in ("instanceof", "in"):
                    if self.at_word(op):
                        matched = (op, prec)
                        break
                elif self._at_op(op):
                    matched = (op, prec)
                    break
            if matched is None:
                return left
            op, prec = matched
            if op in ("instanceof", "in"):
                self.eat_word(op)
            else:
                self.pos += len(op)
            right = self._parse_binary(prec + 1)
            cls = A.Logical if op in ("&&", "||", "??") else A.Binary
            left = cls(start=start, end=self.pos, op=op, left=left, right=right)

    def _parse_unary(self) -> Any:
        self._skip()
        start = self.pos
        for op in ("++", "--", "!", "~", "+", "-"):
            if self.src.startswith(op, self.pos):
                if op in "+-" and self.src.startswith(op * 2, self.pos):
                    continue  # ++/-- handled by the longer match
                self.pos += len(op)
                operand = self._parse_unary()
                return A.Unary(start=start, end=self.pos, op=op, operand=operand)
        for op in ("typeof", "void", "delete", "await"):
            if self.eat_word(op):
                operand = self._parse_unary()
                return A.Unary(start=start, end=self.pos, op=op, operand=operand)
        return self._parse_postfix()

    def _parse_postfix(self) -> Any:
        self._skip()
        start = self.pos
        expr = self._parse_primary()
        while True:
            self._skip()
            if self.pos >= self.n:
                return expr
            ch = self.src[self.pos]
            if ch == "." and not self.src.startswith("...", self.pos):
                self.pos += 1
                prop = self.parse_ident()
                expr = A.Member(start=start, end=self.pos, obj=expr, prop=prop)
            elif self.src.startswith("?.", self.pos):
                self.pos += 2
                if self.at("("):
                    args = self._parse_call_args()
                    expr = A.Call(start=start, end=self.pos, callee=expr, args=args)
                elif self.at("["):
                    self.eat("[")
                    idx = self.parse_expression()
                    self.expect("]")
                    expr = A.Member(start=start, end=self.pos, obj=expr, prop=idx,
                                    computed=True)
                else:
                    prop = self.parse_ident()
                    expr = A.Member(start=start, end=self.pos, obj=expr, prop=prop)
            elif ch == "[":
                self.pos += 1
                idx = self.parse_expression()
                self.expect("]")
                expr = A.Member(start=start, end=self.pos, obj=expr, prop=idx,
                                computed=True)
            elif ch == "(":
                args = self._parse_call_args()
                expr = A.Call(start=start, end=self.pos, callee=expr, args=args)
            elif ch == "<" and isinstance(expr, (A.Ident, A.Member)):
                call = self._try_parse_generic_call(start, expr)
                if call is None:
                    return expr
                expr = call
            elif ch == "`":
                tpl = self.parse_template_literal()
                expr = A.Call(start=start, end=self.pos, callee=expr, args=[tpl])
            elif ch == "!" and not self.src.startswith("!=", self.pos):
                self.pos += 1  # non-null assertion
            elif self.src.startswith(("++", "--"), self.pos):
                self.pos += 2
            elif self.at_word("as"):
                self.eat_word("as")
                if not self.eat_word("const"):
                    self.parse_type()
            elif self.at_word("satisfies"):
                self.eat_word("satisfies")
                self.parse_type()
            else:
                return expr

    def _try_parse_generic_call(self, start: int, callee: Any) -> Optional[A.Call]:
        save = self.pos
        try:
            self.expect("<")
            self.parse_type()
            while self.eat(","):
                self.parse_type()
            self._expect_type_args_close()
            confirmed = self.at("(")
        except TsxSyntaxError:
            self.pos = save
            return None
        if not confirmed:
            self.pos = save
            return None
        args = self._parse_call_args()
        return A.Call(start=start, end=self.pos, callee=callee, args=args)

    def _parse_call_args(self) -> List[Any]:
        self.expect("(")
        args: List[Any] = []
        while not self.at(")"):
            self._skip()
            astart = self.pos
            if self.eat("..."):
                args.append(A.SpreadElement(start=astart, end=self.pos,
                                            argument=self.parse_assignment_expr()))
            else:
                args.append(self.parse_assignment_expr())
            if not self.eat(","):
                break
        self.expect(")")
        return args

    def _parse_primary(self) -> Any:
        self._skip()
        start = self.pos
        if self.pos >= self.n:
            self.error("unexpected end of file in expression")
        ch = self.src[self.pos]
        if ch in "'\"":
            value = self._scan_string()
            return A.Literal(start=start, end=self.pos, value=value,
                             raw=self.src[start:self.pos])
        if ch == "`":
            return self.parse_template_literal()
        if ch.isdigit() or (ch == "." and self.pos + 1 < self.n
                            and self.src[self.pos + 1].isdigit()):
            value = self._scan_number()
            return A.Literal(start=start, end=self.pos, value=value,
                             raw=self.src[start:self.pos])
        if ch == "(":
            self.pos += 1
            expr = self.parse_expression()
            exprs = [expr]
            while self.eat(","):
                exprs.append(self.parse_assignment_expr())
            self.expect(")")
            if len(exprs) > 1:
                return A.Sequence(start=start, end=self.pos, exprs=exprs)
            return expr
        if ch == "{":
            return self._parse_object_literal(start)
        if ch == "[":
            return self._parse_array_literal(start)
        if ch == "<":
            return self.parse_jsx()
        if ch == "/":
            return self._scan_regex(start)
        if self.eat_word("new"):
            callee = self._parse_postfix()
            if isinstance(callee, A.Call):
                callee.is_new = True
                callee.start = start
                return callee
            return A.Call(start=start, end=self.pos, callee=callee, args=[],
                          is_new=True)
        if self.at_word("function"):
            self.eat_word("function")
            name = self.parse_ident() if (self.peek_ident() and not self.at("(")) else None
            params = self.parse_params()
            if self.eat(":"):
                self.parse_type()
            body = self.parse_block()
            return A.FunctionExpr(start=start, end=self.pos, name=name,
                                  params=params, body=body)
        if self.eat_word("true"):
            return A.Literal(start=start, end=self.pos, value=True, raw="true")
        if self.eat_word("false"):
            return A.Literal(start=start, end=self.pos, value=False, raw="false")
        if self.eat_word("null"):
            return A.Literal(start=start, end=self.pos, value=None, raw="null")
        name = self.peek_ident()
        if name is not None:
            self.pos += len(name)
            return A.Ident(start=start, end=self.pos, name=name)
        self.error(f"unexpected character {ch!r} in expression")

    def _parse_object_literal(self, start: int) -> A.ObjectExpr:
        self.expect("{")
        props: List[Any] = []
        while not self.at("}"):
            self._skip()
            pstart = self.pos
            if self.eat("..."):
                props.append(A.SpreadElement(start=pstart, end=self.pos,
                                             argument=self.parse_assignment_expr()))
            else:
                computed = False
                if self.at("["):
                    self.eat("[")
                    key_expr = self.parse_expression()
                    self.expect("]")
                    key = self.src[key_expr.start:key_expr.end]
                    computed = True
                elif self.peek() in "'\"":
                    key = self._scan_string()
                elif self.peek().isdigit():
                    key = str(self._scan_number())
                else:
                    key = self.parse_ident()
                if self.at("(") or self.at("<"):
                    # method shorthand: parse params + block, value is a function
                    if self.at("<"):
                        self._skip_balanced("<", ">")
                    params = self.parse_params()
                    if self.eat(":"):
                        self.parse_type()
                    body = self.parse_block()
                    value: Any = A.FunctionExpr(start=pstart, end=self.pos,
                                                name=key, params=params, body=body)
                    props.append(A.ObjectProp(start=pstart, end=self.pos, key=key,
                                              value=value, computed=computed))
                elif self.eat(":"):
                    value = self.parse_assignment_expr()
                    props.append(A.ObjectProp(start=pstart, end=self.pos, key=key,
                                              value=value, computed=computed))
                else:
                    ident = A.Ident(start=pstart, end=self.pos, name=key)
                    props.append(A.ObjectProp(start=pstart, end=self.pos, key=key,
                                              value=ident, shorthand=True,
                                              computed=computed))
            if not self.eat(","):
                break
        self.expect("}")
        return A.ObjectExpr(start=start, end=self.pos, props=props)

    def _parse_array_literal(self, start: int) -> A.ArrayExpr:
        self.expect("[")
        elements: List[Any] = []
        while not self.at("]"):
            self._skip()
            estart = self.pos
            if self.eat("..."):
                elements.append(A.SpreadElement(start=estart, end=self.pos,
                                                argument=self.parse_assignment_expr()))
            else:
                elements.append(self.parse_assignment_expr())
            if not self.eat(","):
                break
        self.expect("]")
        return A.ArrayExpr(start=start, end=self.pos, elements=elements)

    # -- scanning helpers --------------------------------------------------

    def _scan_string(self) -> str:
        self._skip()
        quote = self.src[self.pos]
        if quote not in "'\"":
            self.error("expected string literal")
        start = self.pos
        self.pos += 1
        out = []
        while self.pos < self.n:
            ch = self.src[self.pos]
            if ch == "\\":
                if self.pos + 1 >= self.n:
                    self.error("unterminated string literal", start)
                out.append(self._scan_escape())
            elif ch == quote:
                self.pos += 1
                return "".join(out)
            elif ch == "\n":
                self.error("unterminated string literal", start)
            else:
                out.append(ch)
                self.pos += 1
        self.error("unterminated string literal", start)

    def _scan_escape(self) -> str:
        # self.pos is at the backslash.
        esc = self.src[self.pos + 1]
        if esc == "u":
            if self.src[self.pos + 2:self.pos + 3] == "{":
                end = self.src.find("}", self.pos + 3)
                if end == -1:
                    self.error("malformed unicode escape", self.pos)
                code = int(self.src[self.pos + 3:end], 16)
                self.pos = end + 1
                return chr(code)
            hex4 = self.src[self.pos + 2:self.pos + 6]
            self.pos += 6
            return chr(int(hex4, 16))
        if esc == "x":
            hex2 = self.src[self.pos + 2:self.pos + 4]
            self.pos += 4
            return chr(int(hex2, 16))
        self.pos += 2
        return self._unescape(esc)

    @staticmethod
    def _unescape(ch: str) -> str:
        return {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f",
                "v": "\v", "0": "\0"}.get(ch, ch)

    def _scan_number(self) -> Any:
        self._skip()
        start = self.pos
        src = self.src
        if src.startswith(("0x", "0X"), self.pos):
            self.pos += 2
            while self.pos < self.n and (src[self.pos] in "0123456789abcdefABCDEF_"):
                self.pos += 1
            return int(src[start:self.pos].replace("_", ""), 16)
        if src.startswith(("0b", "0B"), self.pos):
            self.pos += 2
            while self.pos < self.n and src[self.pos] in "01_":
                self.pos += 1
            return int(src[start:self.pos].replace("_", ""), 2)
        while self.pos < self.n and (src[self.pos].isdigit() or src[self.pos] == "_"):
            self.pos += 1
        is_float = False
        if self.pos < self.n and src[self.pos] == ".":
            is_float = True
            self.pos += 1
            while self.pos < self.n and (src[self.pos].isdigit() or src[self.pos] == "_"):
                self.pos += 1
        if self.pos < self.n and src[self.pos] in "eE":
            is_float = True
            self.pos += 1
            if self.pos < self.n and src[self.pos] in "+-":
                self.pos += 1
            while self.pos < self.n and src[self.pos].isdigit():
                self.pos += 1
        text = src[start:self.pos].replace("_", "")
        if not text or text == ".":
            self.error("malformed number")
        return float(text) if is_float else int(text)

    def _scan_regex(self, start: int) -> A.Literal:
        # Expression-position '/' starts a regex literal.
        self.pos += 1
        in_class = False
        while self.pos < self.n:
            ch = self.src[self.pos]
            if ch == "\\":
                self.pos += 2
                continue
            if ch == "[":
                in_class = True
            elif ch == "]":
                in_class = False
            elif ch == "/" and not in_class:
                self.pos += 1
                while self.pos < self.n and self.src[self.pos] in _ID_CONT:
                    self.pos += 1
                raw = self.src[start:self.pos]
                return A.Literal(start=start, end=self.pos, value=raw, raw=raw)
            elif ch == "\n":
                break
            self.pos += 1
        self.error("unterminated regular expression", start)

    def parse_template_literal(self) -> A.TemplateLiteral:
        self._skip()
        start = self.pos
        self.expect("`")
        quasis: List[str] = []
        exprs: List[Any] = []
        buf: List[str] = []
        while True:
            if self.pos >= self.n:
                self.error("unterminated template literal", start)
            ch = self.src[self.pos]
            if ch == "\\":
                if self.pos + 1 >= self.n:
                    self.error("unterminated template literal", start)
                buf.append(self._scan_escape())
            elif ch == "`":
                self.pos += 1
                quasis.append("".join(buf))
                return A.TemplateLiteral(start=start, end=self.pos, quasis=quasis,
                                         exprs=exprs)
            elif self.src.startswith("${", self.pos):
                quasis.append("".join(buf))
                buf = []
                self.pos += 2
                exprs.append(self.parse_expression())
                self.expect("}")
            else:
                buf.append(ch)
                self.pos += 1

    def _skip_balanced(self, open_ch: str, close_ch: str):
        self._skip()
        if not self.src.startswith(open_ch, self.pos):
            self.error(f"expected {open_ch!r}")
        depth = 0
        start = self.pos
        while self.pos < self.n:
            ch = self.src[self.pos]
            if ch in "'\"":
                self._scan_string()
                continue
            if ch == "`":
                self.parse_template_literal()
                continue
            if ch == "/" and self.src.startswith(("//", "/*"), self.pos):
                self._skip()
                continue
            if ch == open_ch:
                depth += 1
            elif ch == close_ch:
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return
            self.pos += 1
        self.error(f"unbalanced {open_ch!r}", start)

    # -- JSX -------------------------------------------------------------------

    def parse_jsx(self) -> Any:
        self._skip()
        start = self.pos
        self.expect("<")
        if self.eat(">"):
            children = self._parse_jsx_children("<fragment>")
            # _parse_jsx_children stops right before the closing '</'
            self.expect("</")
            self.expect(">")
            return A.JSXFragment(start=start, end=self.pos, children=children)
        name = self._parse_jsx_name()
        attrs: List[Any] = []
        while True:
            self._skip()
            if self.pos >= self.n:
                self.error(f"unexpected end of file inside <{name}>", start)
            if self.at("/>"):
                self.eat("/>")
                return A.JSXElement(start=start, end=self.pos, name=name,
                                    attrs=attrs, children=[], self_closing=True)
            if self.at(">"):
                self.eat(">")
                break
            astart = self.pos
            if self.at("{"):
                self.eat("{")
                self.expect("...")
                arg = self.parse_assignment_expr()
                self.expect("}")
                attrs.append(A.JSXSpreadAttr(start=astart, end=self.pos,
                                             argument=arg))
                continue
            attr_name = self._parse_jsx_name(allow_dash=True)
            value: Any = None
            if self.eat("="):
                self._skip()
                if self.peek() in "'\"":
                    vstart = self.pos
                    raw = self._scan_jsx_attr_string()
                    value = A.Literal(start=vstart, end=self.pos, value=raw,
                                      raw=self.src[vstart:self.pos])
                elif self.at("{"):
                    value = self._parse_jsx_expr_container()
                elif self.at("<"):
                    value = self.parse_jsx()
                else:
                    self.error(f"malformed value for JSX attribute {attr_name!r}")
            attrs.append(A.JSXAttr(start=astart, end=self.pos, name=attr_name,
                                   value=value))
        children = self._parse_jsx_children(name)
        self.expect("</")
        close_name = self._parse_jsx_name() if not self.at(">") else ""
        if close_name != name:
            self.error(f"mismatched JSX closing tag: expected </{name}>, "
                       f"found </{close_name}>")
        self.expect(">")
        return A.JSXElement(start=start, end=self.pos, name=name, attrs=attrs,
                            children=children, self_closing=False)

    def _parse_jsx_name(self, allow_dash: bool = False) -> str:
        self._skip()
        p = self.pos
        if p >= self.n or self.src[p] not in _ID_START:
            self.error("expected JSX name")
        end = p + 1
        extra = set("-:") if allow_dash else set(":")
        while end < self.n and (self.src[end] in _ID_CONT or self.src[end] in extra):
            end += 1
        name = self.src[p:end]
        self.pos = end
        while self.src.startswith(".", self.pos):
            self.pos += 1
            name += "." + self.parse_ident()
        return name

    def _scan_jsx_attr_string(self) -> str:
        # JSX attribute strings do not process backslash escapes.
        quote = self.src[self.pos]
        start = self.pos
        self.pos += 1
        end = self.src.find(quote, self.pos)
        if end == -1:
            self.error("unterminated JSX attribute string", start)
        raw = self.src[self.pos:end]
        self.pos = end + 1
        return raw

    def _parse_jsx_expr_container(self) -> A.JSXExprContainer:
        self._skip()
        start = self.pos
        self.expect("{")
        self._skip()
        if self.eat("}"):
            return A.JSXExprContainer(start=start, end=self.pos, expr=None)
        expr = self.parse_expression()
        self.expect("}")
        return A.JSXExprContainer(start=start, end=self.pos, expr=expr)

    def _parse_jsx_children(self, tag: str) -> List[Any]:
        children: List[Any] = []
        text_start = self.pos
        buf: List[str] = []

        def flush(end: int):
            text = "".join(buf)
            if text.strip():
                children.append(A.JSXText(start=text_start, end=end, value=text))
            buf.clear()

        while True:
            if self.pos >= self.n:
                self.error(f"unexpected end of file: <{tag}> is never closed")
            ch = self.src[self.pos]
            if ch == "<":
                flush(self.pos)
                if self.src.startswith("</", self.pos):
                    return children
                children.append(self.parse_jsx())
                text_start = self.pos
            elif ch == "{":
                flush(self.pos)
                children.append(self._parse_jsx_expr_container())
                text_start = self.pos
            else:
                buf.append(ch)
                self.pos += 1


def parse_module(source: str, filename: str = "<source>") -> Tuple[A.Program, List[Tuple[int, int, str]]]:
    """Parse a TSX/JSX module; returns (program, comments)."""
    parser = Parser(source, filename)
    program = parser.parse_program()
    return program, parser.comments
