"""Lexer and recursive-descent parser.

Grammar (statement separators are semicolons, blocks are braced):

    program   := (classdecl | mainblock)*
    classdecl := 'class' ID ['extends' ID] '{' (fielddecl | methoddecl)* '}'
    fielddecl := type ID ';'
    methoddecl:= type ID '(' [type ID (',' type ID)*] ')' '{' body '}'
    mainblock := 'main' '{' body '}'
    body      := (localdecl | command)*
    localdecl := type ID ';' | type ID ':=' expr ';'      -- the second form
                 desugars to a declaration plus an assignment
    command   := 'skip' ';' | ID ':=' expr ';' | ID '.' ID ':=' expr ';'
               | 'if' '(' guard ')' ['then'] stmt ['else' stmt]
               | 'while' '(' guard ')' ['do'] stmt
               | 'return' expr ';' | '{' body '}'
    guard     := expr cmp expr        cmp := == != < <= > >=
    expr      := arith; binary + - * on ints, atoms are literals, 'null',
                 variables, field reads, 'new' ID, and calls ID '.' ID '(args)'
                 with variable arguments.

Guards must be side-effect free: method calls and allocations inside a guard
are rejected at parse time.

Line comments start with '//'.  A comment whose text starts with '@' is an
annotation line, e.g. ``//@ init reach(a,b): [[f],[f,g]]``; annotations are
collected on the Program for the driver to resolve.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    Assign,
    BinOp,
    ClassDecl,
    Command,
    Comparison,
    Expr,
    FieldRead,
    FieldWrite,
    If,
    InitAnnotation,
    IntLit,
    MainBlock,
    MethodCall,
    MethodDecl,
    NewObject,
    NullLit,
    Program,
    Return,
    Skip,
    VarRef,
    While,
    walk_exprs,
    INT_TYPE,
    OUT_VAR,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


KEYWORDS = {
    "class",
    "extends",
    "int",
    "new",
    "null",
    "skip",
    "if",
    "then",
    "else",
    "while",
    "do",
    "return",
    "main",
}

_SYMBOLS = [
    ":=",
    "==",
    "!=",
    "<=",
    ">=",
    "{",
    "}",
    "(",
    ")",
    ";",
    ",",
    ".",
    "<",
    ">",
    "+",
    "-",
    "*",
]

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[0-9]+")


@dataclass
class Token:
    kind: str  # 'ident' | 'int' | 'kw' | 'sym' | 'eof'
    text: str
    line: int
    col: int


def _lex(source: str) -> tuple[list[Token], list[tuple[int, str]]]:
    tokens: list[Token] = []
    raw_annotations: list[tuple[int, str]] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            if j == -1:
                j = n
            text = source[i + 2 : j]
            if text.startswith("@"):
                raw_annotations.append((line, text[1:].strip()))
            col += j - i
            i = j
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            word = m.group(0)
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, line, col))
            col += len(word)
            i = m.end()
            continue
        m = _INT_RE.match(source, i)
        if m:
            tokens.append(Token("int", m.group(0), line, col))
            col += len(m.group(0))
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token("sym", sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens, raw_annotations


_ANNOT_RE = re.compile(
    r"^init\s+(reach|cyc|ds)\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*"
    r"(?:,\s*([A-Za-z_][A-Za-z0-9_]*)\s*)?\)\s*(?::\s*(.*))?$"
)


def _parse_models(text: str, line: int) -> list[list[str]]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError("annotation models must be a [[...],...] list", line, 1)
    inner = text[1:-1].strip()
    models: list[list[str]] = []
    depth = 0
    cur = ""
    parts: list[str] = []
    for ch in inner:
        if ch == "[":
            depth += 1
            if depth == 1:
                cur = ""
                continue
        elif ch == "]":
            depth -= 1
            if depth == 0:
                parts.append(cur)
                continue
            if depth < 0:
                raise ParseError("unbalanced brackets in annotation", line, 1)
        if depth >= 1:
            cur += ch
    if depth != 0:
        raise ParseError("unbalanced brackets in annotation", line, 1)
    for part in parts:
        names = [p.strip() for p in part.split(",") if p.strip()]
        for name in names:
            if not _IDENT_RE.fullmatch(name):
                raise ParseError(f"bad field name {name!r} in annotation", line, 1)
        models.append(names)
    return models


def _parse_annotation(line: int, text: str) -> InitAnnotation:
    m = _ANNOT_RE.match(text)
    if not m:
        raise ParseError(f"malformed annotation: //@ {text}", line, 1)
    kind, a, b, models_text = m.group(1), m.group(2), m.group(3), m.group(4)
    if kind == "reach":
        if b is None:
            raise ParseError("reach annotation needs two variables", line, 1)
        if models_text is None:
            raise ParseError("reach annotation needs a model list", line, 1)
        return InitAnnotation("reach", (a, b), _parse_models(models_text, line), line)
    if kind == "cyc":
        if b is not None:
            raise ParseError("cyc annotation takes one variable", line, 1)
        if models_text is None:
            raise ParseError("cyc annotation needs a model list", line, 1)
        return InitAnnotation("cyc", (a,), _parse_models(models_text, line), line)
    # ds
    if b is None:
        b = a
    if models_text:
        raise ParseError("ds annotation takes no model list", line, 1)
    return InitAnnotation("ds", (a, b), None, line)


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self._next_nid = 0

    # -- token helpers

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.text!r}", tok.line, tok.col)
        return self.advance()

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.advance()
        return None

    def nid(self) -> int:
        self._next_nid += 1
        return self._next_nid

    def ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected {what}, found {tok.text!r}", tok.line, tok.col)
        if tok.text == OUT_VAR:
            raise ParseError(f"'{OUT_VAR}' is reserved", tok.line, tok.col)
        return self.advance()

    # -- grammar

    def parse_program(self) -> Program:
        classes: list[ClassDecl] = []
        main: Optional[MainBlock] = None
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "kw" and tok.text == "class":
                classes.append(self.parse_class())
            elif tok.kind == "kw" and tok.text == "main":
                if main is not None:
                    raise ParseError("duplicate main block", tok.line, tok.col)
                main = self.parse_main()
            else:
                raise ParseError(
                    f"expected 'class' or 'main', found {tok.text!r}", tok.line, tok.col
                )
        return Program(classes, main, [])

    def parse_class(self) -> ClassDecl:
        kw = self.expect("kw", "class")
        name = self.ident("class name").text
        parent = None
        if self.accept("kw", "extends"):
            parent = self.ident("superclass name").text
        self.expect("sym", "{")
        fields: list[tuple[str, str]] = []
        methods: list[MethodDecl] = []
        while not self.accept("sym", "}"):
            ftype = self.parse_type()
            fname_tok = self.ident("member name")
            if self.peek().kind == "sym" and self.peek().text == "(":
                methods.append(self.parse_method_rest(ftype, fname_tok))
            else:
                self.expect("sym", ";")
                fields.append((fname_tok.text, ftype))
        return ClassDecl(name, parent, fields, methods, kw.line, kw.col)

    def parse_type(self) -> str:
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "int":
            self.advance()
            return INT_TYPE
        return self.ident("type name").text

    def parse_method_rest(self, return_type: str, name_tok: Token) -> MethodDecl:
        self.expect("sym", "(")
        params: list[tuple[str, str]] = []
        if not self.accept("sym", ")"):
            while True:
                ptype = self.parse_type()
                pname = self.ident("parameter name").text
                params.append((ptype, pname))
                if self.accept("sym", ")"):
                    break
                self.expect("sym", ",")
        self.expect("sym", "{")
        locals_, body = self.parse_body()
        return MethodDecl(
            name_tok.text, return_type, params, locals_, body, name_tok.line, name_tok.col
        )

    def parse_main(self) -> MainBlock:
        kw = self.expect("kw", "main")
        self.expect("sym", "{")
        locals_, body = self.parse_body()
        return MainBlock(locals_, body, kw.line, kw.col)

    def parse_body(self) -> tuple[list[tuple[str, str]], list[Command]]:
        """Parse declarations and commands up to the closing brace."""
        locals_: list[tuple[str, str]] = []
        body: list[Command] = []
        while not self.accept("sym", "}"):
            if self._at_declaration():
                dtype = self.parse_type()
                dname_tok = self.ident("variable name")
                locals_.append((dtype, dname_tok.text))
                if self.accept("sym", ":="):
                    expr = self.parse_expr()
                    body.append(
                        Assign(self.nid(), dname_tok.line, dname_tok.col, dname_tok.text, expr)
                    )
                self.expect("sym", ";")
            else:
                body.append(self.parse_command())
        return locals_, body

    def _at_declaration(self) -> bool:
        tok, nxt = self.peek(), self.peek(1)
        if tok.kind == "kw" and tok.text == "int":
            return True
        return tok.kind == "ident" and nxt.kind == "ident"

    def parse_command(self) -> Command:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "{":
            # an explicit block folds into the surrounding sequence
            raise ParseError("nested bare blocks are not allowed here", tok.line, tok.col)
        if tok.kind == "kw":
            if tok.text == "skip":
                self.advance()
                self.expect("sym", ";")
                return Skip(self.nid(), tok.line, tok.col)
            if tok.text == "if":
                return self.parse_if()
            if tok.text == "while":
                return self.parse_while()
            if tok.text == "return":
                self.advance()
                expr = self.parse_expr()
                self.expect("sym", ";")
                return Return(self.nid(), tok.line, tok.col, expr)
        if tok.kind == "ident":
            name = self.advance()
            if self.accept("sym", ":="):
                expr = self.parse_expr()
                self.expect("sym", ";")
                return Assign(self.nid(), name.line, name.col, name.text, expr)
            if self.accept("sym", "."):
                fld = self.ident("field name").text
                self.expect("sym", ":=")
                expr = self.parse_expr()
                self.expect("sym", ";")
                return FieldWrite(self.nid(), name.line, name.col, name.text, fld, expr)
            raise ParseError(f"expected ':=' or '.' after {name.text!r}", name.line, name.col)
        raise ParseError(f"expected a command, found {tok.text!r}", tok.line, tok.col)

    def parse_stmt_or_block(self) -> list[Command]:
        if self.accept("sym", "{"):
            cmds: list[Command] = []
            while not self.accept("sym", "}"):
                cmds.append(self.parse_command())
            return cmds
        return [self.parse_command()]

    def parse_if(self) -> If:
        kw = self.expect("kw", "if")
        self.expect("sym", "(")
        guard = self.parse_guard()
        self.expect("sym", ")")
        self.accept("kw", "then")
        then_body = self.parse_stmt_or_block()
        else_body: list[Command] = []
        if self.accept("kw", "else"):
            else_body = self.parse_stmt_or_block()
        return If(self.nid(), kw.line, kw.col, guard, then_body, else_body)

    def parse_while(self) -> While:
        kw = self.expect("kw", "while")
        self.expect("sym", "(")
        guard = self.parse_guard()
        self.expect("sym", ")")
        self.accept("kw", "do")
        body = self.parse_stmt_or_block()
        return While(self.nid(), kw.line, kw.col, guard, body)

    def parse_guard(self) -> Comparison:
        start = self.peek()
        left = self.parse_expr()

        def reject_side_effects(e: Expr) -> None:
            for sub in walk_exprs(e):
                if isinstance(sub, (MethodCall, NewObject)):
                    raise ParseError(
                        "guard must be side-effect free (no calls or allocations)",
                        sub.line,
                        sub.col,
                    )

        op_tok = self.peek()
        if op_tok.kind != "sym" or op_tok.text not in ("==", "!=", "<", "<=", ">", ">="):
            reject_side_effects(left)
            raise ParseError(
                "guard must be a comparison (==, !=, <, <=, >, >=)", op_tok.line, op_tok.col
            )
        self.advance()
        right = self.parse_expr()
        reject_side_effects(left)
        reject_side_effects(right)
        return Comparison(self.nid(), start.line, start.col, op_tok.text, left, right)

    # expressions: '+'/'-' over '*' over atoms

    def parse_expr(self) -> Expr:
        left = self.parse_term()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in ("+", "-"):
                self.advance()
                right = self.parse_term()
                left = BinOp(self.nid(), tok.line, tok.col, tok.text, left, right)
            else:
                return left

    def parse_term(self) -> Expr:
        left = self.parse_atom()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text == "*":
                self.advance()
                right = self.parse_atom()
                left = BinOp(self.nid(), tok.line, tok.col, "*", left, right)
            else:
                return left

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return IntLit(self.nid(), tok.line, tok.col, int(tok.text))
        if tok.kind == "sym" and tok.text == "-":
            self.advance()
            inner = self.parse_atom()
            if isinstance(inner, IntLit):
                inner.value = -inner.value
                return inner
            zero = IntLit(self.nid(), tok.line, tok.col, 0)
            return BinOp(self.nid(), tok.line, tok.col, "-", zero, inner)
        if tok.kind == "sym" and tok.text == "(":
            self.advance()
            expr = self.parse_expr()
            self.expect("sym", ")")
            return expr
        if tok.kind == "kw" and tok.text == "null":
            self.advance()
            return NullLit(self.nid(), tok.line, tok.col)
        if tok.kind == "kw" and tok.text == "new":
            self.advance()
            cname = self.ident("class name").text
            return NewObject(self.nid(), tok.line, tok.col, cname)
        if tok.kind == "ident":
            name = self.advance()
            if self.peek().kind == "sym" and self.peek().text == ".":
                self.advance()
                member = self.ident("member name").text
                if self.accept("sym", "("):
                    args: list[str] = []
                    if not self.accept("sym", ")"):
                        while True:
                            args.append(self.ident("argument variable").text)
                            if self.accept("sym", ")"):
                                break
                            self.expect("sym", ",")
                    return MethodCall(self.nid(), name.line, name.col, name.text, member, args)
                return FieldRead(self.nid(), name.line, name.col, name.text, member)
            return VarRef(self.nid(), name.line, name.col, name.text)
        raise ParseError(f"expected an expression, found {tok.text!r}", tok.line, tok.col)


def parse_program(source: str) -> Program:
    tokens, raw_annotations = _lex(source)
    parser = Parser(tokens)
    program = parser.parse_program()
    program.annotations = [_parse_annotation(line, text) for line, text in raw_annotations]
    return program
