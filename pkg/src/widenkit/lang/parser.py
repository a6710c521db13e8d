"""Recursive-descent parser for the while-language.

Grammar:

    program := decl* stmt*
    decl    := "init" IDENT "in" "[" int_or_ninf "," int_or_pinf "]" ";"
    stmt    := IDENT "=" expr ";"
             | "while" "(" cond ")" "{" stmt* "}"
             | "if" "(" cond ")" "{" stmt* "}" ("else" "{" stmt* "}")?
             | "assume" "(" cond ")" ";"
             | "havoc" IDENT ";"
    expr    := term (("+"|"-") term)*
    term    := INT | IDENT | INT "*" IDENT
    cond    := expr ("<"|"<="|">"|">="|"=="|"!=") expr

"//" comments run to end of line.  INT is an optionally-signed decimal of
unbounded width; declaration bounds additionally admit "-inf" / "inf".
Syntax errors abort at the first offender; name and linearity errors are
collected so one run reports them all.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

from ..extint import NEG_INF, POS_INF, ExtInt
from .ast import AffineExpr, Assign, Assume, Cond, Decl, Havoc, If, Program, Stmt, While

KEYWORDS = {"init", "in", "while", "if", "else", "assume", "havoc", "inf"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|==|!=|<|>|=|\+|-|\*|;|,|\(|\)|\{|\}|\[|\])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # "int", "ident", keyword text, operator text, or "eof"
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class ParseIssue:
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class ParseError(Exception):
    def __init__(self, issues: List[ParseIssue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError([ParseIssue(line, col, f"unexpected character {source[pos]!r}")])
        text = m.group()
        if m.lastgroup not in ("ws", "comment"):
            if m.lastgroup == "int":
                kind = "int"
            elif m.lastgroup == "ident":
                kind = text if text in KEYWORDS else "ident"
            else:
                kind = text
            tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        self.issues: List[ParseIssue] = []
        self.declared: List[str] = []
        self.loop_counter = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, tok: Token, message: str) -> "ParseError":
        # syntax errors abort; include any name errors gathered so far
        return ParseError(self.issues + [ParseIssue(tok.line, tok.col, message)])

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail(tok, f"expected {kind!r}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def note(self, tok: Token, message: str) -> None:
        self.issues.append(ParseIssue(tok.line, tok.col, message))

    # -- grammar -----------------------------------------------------------

    def parse_program(self) -> Program:
        decls = []
        while self.peek().kind == "init":
            decls.append(self.parse_decl())
        body = self.parse_stmts(until="eof")
        self.expect("eof")
        if self.issues:
            raise ParseError(self.issues)
        return Program(tuple(decls), tuple(body))

    def parse_decl(self) -> Decl:
        init_tok = self.expect("init")
        name_tok = self.expect("ident")
        if name_tok.text in self.declared:
            self.note(name_tok, f"duplicate declaration of {name_tok.text!r}")
        else:
            self.declared.append(name_tok.text)
        self.expect("in")
        self.expect("[")
        lo = self.parse_bound(lower=True)
        self.expect(",")
        hi = self.parse_bound(lower=False)
        self.expect("]")
        self.expect(";")
        if not lo <= hi:
            self.note(init_tok, f"empty initial interval [{lo}, {hi}] for {name_tok.text!r}")
        return Decl(name_tok.text, lo, hi, init_tok.line)

    def parse_bound(self, lower: bool) -> ExtInt:
        sign = 1
        tok = self.peek()
        if tok.kind in ("-", "+"):
            sign = -1 if tok.kind == "-" else 1
            self.advance()
            tok = self.peek()
        if tok.kind == "inf":
            self.advance()
            if lower and sign == -1:
                return NEG_INF
            if not lower and sign == 1:
                return POS_INF
            raise self.fail(tok, "'-inf' is only a lower bound and 'inf' only an upper bound")
        if tok.kind == "int":
            self.advance()
            return sign * int(tok.text)
        raise self.fail(tok, f"expected integer or infinity, found {tok.text!r}")

    def parse_stmts(self, until: str) -> List[Stmt]:
        stmts: List[Stmt] = []
        while self.peek().kind != until:
            if self.peek().kind == "eof":
                raise self.fail(self.peek(), f"expected {until!r} before end of input")
            stmts.append(self.parse_stmt())
        return stmts

    def parse_stmt(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "ident":
            return self.parse_assign()
        if tok.kind == "while":
            return self.parse_while()
        if tok.kind == "if":
            return self.parse_if()
        if tok.kind == "assume":
            self.advance()
            self.expect("(")
            cond = self.parse_cond()
            self.expect(")")
            self.expect(";")
            return Assume(cond, tok.line)
        if tok.kind == "havoc":
            self.advance()
            name = self.expect("ident")
            self.check_declared(name)
            self.expect(";")
            return Havoc(name.text, tok.line)
        if tok.kind == "init":
            raise self.fail(tok, "declarations must precede statements")
        raise self.fail(tok, f"expected a statement, found {tok.text or 'end of input'!r}")

    def parse_assign(self) -> Assign:
        name = self.expect("ident")
        self.check_declared(name)
        self.expect("=")
        expr = self.parse_expr()
        self.expect(";")
        return Assign(name.text, expr, name.line)

    def parse_while(self) -> While:
        tok = self.expect("while")
        loop_id = self.loop_counter
        self.loop_counter += 1
        self.expect("(")
        cond = self.parse_cond()
        self.expect(")")
        self.expect("{")
        body = self.parse_stmts(until="}")
        self.expect("}")
        return While(loop_id, cond, tuple(body), tok.line)

    def parse_if(self) -> If:
        tok = self.expect("if")
        self.expect("(")
        cond = self.parse_cond()
        self.expect(")")
        self.expect("{")
        then_body = self.parse_stmts(until="}")
        self.expect("}")
        else_body: List[Stmt] = []
        if self.peek().kind == "else":
            self.advance()
            self.expect("{")
            else_body = self.parse_stmts(until="}")
            self.expect("}")
        return If(cond, tuple(then_body), tuple(else_body), tok.line)

    def parse_cond(self) -> Cond:
        lhs = self.parse_expr()
        tok = self.peek()
        if tok.kind not in ("<", "<=", ">", ">=", "==", "!="):
            raise self.fail(tok, f"expected a comparison operator, found {tok.text!r}")
        self.advance()
        rhs = self.parse_expr()
        return Cond(lhs, tok.kind, rhs)

    def parse_expr(self) -> AffineExpr:
        constant, terms = self.parse_term(1)
        while self.peek().kind in ("+", "-"):
            sign = 1 if self.advance().kind == "+" else -1
            c, t = self.parse_term(sign)
            constant += c
            terms.extend(t)
        self.reject_nonlinear()
        return AffineExpr(constant, tuple(terms))

    def parse_term(self, sign: int) -> Tuple[int, List[Tuple[int, str]]]:
        tok = self.peek()
        if tok.kind in ("-", "+"):
            # optionally-signed integer literal
            self.advance()
            if tok.kind == "-":
                sign = -sign
            tok = self.peek()
            if tok.kind != "int":
                raise self.fail(tok, f"expected integer after sign, found {tok.text!r}")
        if tok.kind == "int":
            self.advance()
            value = sign * int(tok.text)
            if self.peek().kind == "*":
                self.advance()
                name = self.peek()
                if name.kind != "ident":
                    raise self.fail(
                        name, f"expected a variable after '*', found {name.text!r}"
                    )
                self.advance()
                self.check_declared(name)
                return 0, [(value, name.text)]
            return value, []
        if tok.kind == "ident":
            self.advance()
            self.check_declared(tok)
            return 0, [(sign, tok.text)]
        raise self.fail(tok, f"expected a term, found {tok.text or 'end of input'!r}")

    def reject_nonlinear(self) -> None:
        tok = self.peek()
        if tok.kind == "*":
            raise self.fail(
                tok, "nonlinear term: only integer * variable products are supported"
            )

    def check_declared(self, tok: Token) -> None:
        if tok.text not in self.declared:
            self.note(tok, f"undeclared variable {tok.text!r}")


def parse(source: str) -> Program:
    """Parse a program, raising ParseError with every collected issue."""
    return _Parser(tokenize(source)).parse_program()
