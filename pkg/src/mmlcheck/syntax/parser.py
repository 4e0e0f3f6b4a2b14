"""Recursive-descent parser producing the span-annotated AST.

Declarations end at a newline (outside brackets) or `;`. Multi-line
expressions are written inside (), [] or {}; `case ... of` alternatives
always sit in braces, separated by `;`.
"""

from __future__ import annotations

from dataclasses import replace

from .ast import (
    Apply,
    BoolLit,
    BoolPattern,
    Case,
    CaseAlt,
    CharLit,
    CharPattern,
    ConPattern,
    ConRef,
    ConstructorDef,
    DataDecl,
    Decl,
    Expr,
    FloatLit,
    FnTypeExpr,
    If,
    ImportDecl,
    IntLit,
    IntPattern,
    Lambda,
    Let,
    LetBinding,
    ListLit,
    ListTypeExpr,
    Param,
    Pattern,
    SignatureDecl,
    Span,
    StringLit,
    TupleLit,
    TupleTypeExpr,
    TypeConExpr,
    TypeExpr,
    TypeVarExpr,
    ValueDecl,
    VarPattern,
    VarRef,
    WildcardPattern,
)
from .lexer import SyntaxErrorWithSpan, Token, tokenize

_ATOM_STARTERS = {"INT", "FLOAT", "CHAR", "STRING", "True", "False", "LOWER", "UPPER", "(", "["}

_ESCAPES_REV = {"\n": "\\n", "\t": "\\t", "\\": "\\\\", "\r": "\\r", "\0": "\\0"}


def _unquote_char(text: str) -> str:
    inner = text[1:-1]
    if inner.startswith("\\"):
        return {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"', "r": "\r", "0": "\0"}[inner[1]]
    return inner


def _unquote_string(text: str) -> str:
    out: list[str] = []
    i = 1
    while i < len(text) - 1:
        if text[i] == "\\":
            out.append({"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"', "r": "\r", "0": "\0"}[text[i + 1]])
            i += 2
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


class _Parser:
    def __init__(self, module: str, tokens: list[Token], skip_newlines: bool = False):
        self.module = module
        self.tokens = tokens
        self.pos = 0
        if skip_newlines:
            self.tokens = [t for t in tokens if t.kind != "NEWLINE"]

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {kind!r}", tok)
        return self.next()

    def error(self, expected: str, tok: Token | None = None) -> SyntaxErrorWithSpan:
        tok = tok or self.peek()
        found = tok.text or tok.kind
        if tok.kind == "EOF":
            found = "end of input"
        elif tok.kind == "NEWLINE":
            found = "end of line"
        return SyntaxErrorWithSpan(f"{expected}, found {found!r}", tok.span(self.module))

    def span_of(self, tok: Token) -> Span:
        return tok.span(self.module)

    def skip_separators(self) -> None:
        while self.peek().kind in ("NEWLINE", ";"):
            self.next()

    # -- declarations --------------------------------------------------------

    def parse_module(self) -> tuple[Decl, ...]:
        decls: list[Decl] = []
        self.skip_separators()
        while self.peek().kind != "EOF":
            decls.append(self.parse_decl())
            if self.peek().kind not in ("NEWLINE", ";", "EOF"):
                raise self.error("expected end of declaration")
            self.skip_separators()
        return tuple(decls)

    def parse_decl(self) -> Decl:
        tok = self.peek()
        if tok.kind == "import":
            start = self.next()
            name = self.expect("UPPER")
            return ImportDecl(self.span_of(start).cover(self.span_of(name)), name.text)
        if tok.kind == "data":
            return self.parse_data()
        if tok.kind == "LOWER":
            if self.peek(1).kind == "::":
                return self.parse_signature()
            return self.parse_value()
        raise self.error("expected a declaration")

    def parse_data(self) -> DataDecl:
        start = self.expect("data")
        name = self.expect("UPPER")
        params: list[str] = []
        while self.peek().kind == "LOWER":
            params.append(self.next().text)
        self.expect("=")
        cons: list[ConstructorDef] = []
        while True:
            cname = self.expect("UPPER")
            fields: list[TypeExpr] = []
            while self.peek().kind in ("LOWER", "UPPER", "(", "["):
                fields.append(self.parse_atype())
            cons.append(ConstructorDef(cname.text, self.span_of(cname), tuple(fields)))
            if self.peek().kind == "|":
                self.next()
            else:
                break
        end_span = cons[-1].fields[-1].span if cons[-1].fields else cons[-1].name_span
        return DataDecl(self.span_of(start).cover(end_span), name.text, tuple(params), tuple(cons))

    def parse_signature(self) -> SignatureDecl:
        name = self.expect("LOWER")
        self.expect("::")
        te = self.parse_type()
        return SignatureDecl(self.span_of(name).cover(te.span), name.text, self.span_of(name), te)

    def parse_value(self) -> ValueDecl:
        name = self.expect("LOWER")
        params: list[Param] = []
        while self.peek().kind == "LOWER":
            p = self.next()
            params.append(Param(p.text, self.span_of(p)))
        self.expect("=")
        body = self.parse_expr()
        return ValueDecl(self.span_of(name).cover(body.span), name.text, self.span_of(name), tuple(params), body)

    # -- types ---------------------------------------------------------------

    def parse_type(self) -> TypeExpr:
        left = self.parse_btype()
        if self.peek().kind == "->":
            self.next()
            right = self.parse_type()
            return FnTypeExpr(left.span.cover(right.span), left, right)
        return left

    def parse_btype(self) -> TypeExpr:
        if self.peek().kind == "UPPER":
            name = self.next()
            args: list[TypeExpr] = []
            while self.peek().kind in ("LOWER", "UPPER", "(", "["):
                args.append(self.parse_atype())
            span = self.span_of(name) if not args else self.span_of(name).cover(args[-1].span)
            return TypeConExpr(span, name.text, tuple(args), self.span_of(name))
        return self.parse_atype()

    def parse_atype(self) -> TypeExpr:
        tok = self.peek()
        if tok.kind == "LOWER":
            self.next()
            return TypeVarExpr(self.span_of(tok), tok.text)
        if tok.kind == "UPPER":
            self.next()
            return TypeConExpr(self.span_of(tok), tok.text, (), self.span_of(tok))
        if tok.kind == "[":
            start = self.next()
            elem = self.parse_type()
            end = self.expect("]")
            return ListTypeExpr(self.span_of(start).cover(self.span_of(end)), elem)
        if tok.kind == "(":
            start = self.next()
            first = self.parse_type()
            if self.peek().kind == ",":
                elems = [first]
                while self.peek().kind == ",":
                    self.next()
                    elems.append(self.parse_type())
                end = self.expect(")")
                return TupleTypeExpr(self.span_of(start).cover(self.span_of(end)), tuple(elems))
            end = self.expect(")")
            return replace(first, span=self.span_of(start).cover(self.span_of(end)))
        raise self.error("expected a type")

    # -- expressions -----------------------------------------------------------

    def parse_expr(self) -> Expr:
        tok = self.peek()
        if tok.kind == "\\":
            start = self.next()
            params: list[Param] = []
            while self.peek().kind == "LOWER":
                p = self.next()
                params.append(Param(p.text, self.span_of(p)))
            if not params:
                raise self.error("expected a lambda parameter")
            self.expect("->")
            body = self.parse_expr()
            return Lambda(self.span_of(start).cover(body.span), tuple(params), body)
        if tok.kind == "let":
            start = self.next()
            bindings = self.parse_let_bindings()
            self.expect("in")
            body = self.parse_expr()
            return Let(self.span_of(start).cover(body.span), bindings, body)
        if tok.kind == "if":
            start = self.next()
            cond = self.parse_expr()
            self.expect("then")
            then = self.parse_expr()
            self.expect("else")
            orelse = self.parse_expr()
            return If(self.span_of(start).cover(orelse.span), cond, then, orelse)
        if tok.kind == "case":
            return self.parse_case()
        return self.parse_app()

    def parse_let_bindings(self) -> tuple[LetBinding, ...]:
        if self.peek().kind == "{":
            self.next()
            bindings = [self.parse_binding()]
            while self.peek().kind == ";":
                self.next()
                bindings.append(self.parse_binding())
            self.expect("}")
            return tuple(bindings)
        return (self.parse_binding(),)

    def parse_binding(self) -> LetBinding:
        name = self.expect("LOWER")
        self.expect("=")
        value = self.parse_expr()
        return LetBinding(name.text, self.span_of(name), value)

    def parse_case(self) -> Case:
        start = self.expect("case")
        scrutinee = self.parse_expr()
        self.expect("of")
        self.expect("{")
        alts = [self.parse_alt()]
        while self.peek().kind == ";":
            self.next()
            alts.append(self.parse_alt())
        end = self.expect("}")
        return Case(self.span_of(start).cover(self.span_of(end)), scrutinee, tuple(alts))

    def parse_alt(self) -> CaseAlt:
        pat = self.parse_pattern()
        self.expect("->")
        body = self.parse_expr()
        return CaseAlt(pat, body, pat.span.cover(body.span))

    def parse_pattern(self) -> Pattern:
        tok = self.peek()
        if tok.kind == "UPPER" and tok.text not in ("True", "False"):
            self.next()
            binders: list[Param] = []
            span = self.span_of(tok)
            while self.peek().kind in ("LOWER", "_"):
                p = self.next()
                binders.append(Param(p.text if p.kind == "LOWER" else "_", self.span_of(p)))
                span = span.cover(self.span_of(p))
            return ConPattern(span, tok.text, tuple(binders))
        if tok.kind == "True" or tok.kind == "False":
            self.next()
            return BoolPattern(self.span_of(tok), tok.kind == "True")
        if tok.kind == "LOWER":
            self.next()
            return VarPattern(self.span_of(tok), tok.text)
        if tok.kind == "_":
            self.next()
            return WildcardPattern(self.span_of(tok))
        if tok.kind == "INT":
            self.next()
            return IntPattern(self.span_of(tok), int(tok.text))
        if tok.kind == "CHAR":
            self.next()
            return CharPattern(self.span_of(tok), _unquote_char(tok.text))
        raise self.error("expected a pattern")

    def parse_app(self) -> Expr:
        fn = self.parse_atom()
        args: list[Expr] = []
        while self.peek().kind in _ATOM_STARTERS:
            args.append(self.parse_atom())
        if not args:
            return fn
        return Apply(fn.span.cover(args[-1].span), fn, tuple(args))

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return IntLit(self.span_of(tok), int(tok.text))
        if tok.kind == "FLOAT":
            self.next()
            return FloatLit(self.span_of(tok), float(tok.text))
        if tok.kind == "CHAR":
            self.next()
            return CharLit(self.span_of(tok), _unquote_char(tok.text))
        if tok.kind == "STRING":
            self.next()
            return StringLit(self.span_of(tok), _unquote_string(tok.text))
        if tok.kind in ("True", "False"):
            self.next()
            return BoolLit(self.span_of(tok), tok.kind == "True")
        if tok.kind == "LOWER":
            self.next()
            return VarRef(self.span_of(tok), tok.text)
        if tok.kind == "UPPER":
            self.next()
            return ConRef(self.span_of(tok), tok.text)
        if tok.kind == "[":
            start = self.next()
            elems: list[Expr] = []
            if self.peek().kind != "]":
                elems.append(self.parse_expr())
                while self.peek().kind == ",":
                    self.next()
                    elems.append(self.parse_expr())
            end = self.expect("]")
            return ListLit(self.span_of(start).cover(self.span_of(end)), tuple(elems))
        if tok.kind == "(":
            start = self.next()
            first = self.parse_expr()
            if self.peek().kind == ",":
                elems = [first]
                while self.peek().kind == ",":
                    self.next()
                    elems.append(self.parse_expr())
                end = self.expect(")")
                return TupleLit(self.span_of(start).cover(self.span_of(end)), tuple(elems))
            end = self.expect(")")
            # widen to include the parentheses so the span's source slice
            # stays a self-contained expression
            return replace(first, span=self.span_of(start).cover(self.span_of(end)))
        raise self.error("expected an expression")


def parse_module(module_id: str, source: str) -> tuple[Decl, ...]:
    """Parse one module's source into span-annotated declarations."""
    return _Parser(module_id, tokenize(module_id, source)).parse_module()


def parse_expression(source: str, module_id: str = "<expr>") -> Expr:
    """Parse a standalone expression (newlines treated as whitespace)."""
    p = _Parser(module_id, tokenize(module_id, source), skip_newlines=True)
    expr = p.parse_expr()
    if p.peek().kind != "EOF":
        raise p.error("expected end of input")
    return expr


def parse_type_expression(source: str, module_id: str = "<type>") -> TypeExpr:
    p = _Parser(module_id, tokenize(module_id, source), skip_newlines=True)
    te = p.parse_type()
    if p.peek().kind != "EOF":
        raise p.error("expected end of input")
    return te
