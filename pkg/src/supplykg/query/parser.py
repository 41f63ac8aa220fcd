"""Recursive-descent query parser.

Grammar (keywords case-insensitive):

    query        = select | insert
    select       = SELECT projection WHERE group
                   [GROUP BY var] [ORDER BY [ASC|DESC] var | ORDER BY (ASC|DESC) "(" var ")"]
    insert       = INSERT "{" { pattern "." } "}" WHERE group
    projection   = "*" | item+
    item         = "(" expr AS var ")" | expr [AS var]
    group        = "{" { pattern "." | FILTER expr ["."] } "}"
    pattern      = pterm pred pterm
    pterm        = iri | var | ident | literal | "<<" pattern ">>"
    pred         = iri | var | ident          (bare ident "a" means rdf:type)
    expr         = orex ; orex = andex {"||" andex} ; andex = cmp {"&&" cmp}
    cmp          = add [("="|"!="|"<"|"<="|">"|">=") add]
    add          = mul {("+"|"-") mul} ; mul = unary {("*"|"/") unary}
    unary        = "-" unary | primary
    primary      = literal | var | ident | call | "(" expr ")"
    call         = (SUM|AVG|IF|REGEX|STR) "(" expr {"," expr} ")"

Free identifiers are runtime parameters and must be declared to parse_query;
anything undeclared is a syntax error with its position. Structural checks
enforced here: every variable used in projection, filters, GROUP BY, or
ORDER BY occurs in the WHERE patterns; aggregates appear only in projection
items and do not nest; with aggregation, plain projected variables define the
grouping and must match an explicit GROUP BY when one is given.
"""

from __future__ import annotations

from typing import Iterable, Optional, Union

from ..terms import Iri, Literal, MalformedTermError, Variable
from . import ast
from .lexer import QueryLexError, Token, tokenize

_LITERAL_TAGS = ("integer", "decimal", "string", "boolean", "timestep")
_BOOL_LEXICALS = {"true": True, "false": False}


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


class _Parser:
    def __init__(self, tokens: list[Token], params: frozenset[str]):
        self.tokens = tokens
        self.pos = 0
        self.params = params

    # -- token plumbing ------------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise QuerySyntaxError(f"expected {kind!r}, got {tok.text or 'end of query'!r}", tok.line, tok.col)
        return self.take()

    def accept(self, kind: str) -> Optional[Token]:
        if self.peek().kind == kind:
            return self.take()
        return None

    def fail(self, message: str) -> QuerySyntaxError:
        tok = self.peek()
        return QuerySyntaxError(message, tok.line, tok.col)

    # -- entry ---------------------------------------------------------------

    def query(self) -> ast.Query:
        if self.accept("SELECT"):
            q = self.select_rest()
        elif self.accept("INSERT"):
            q = self.insert_rest()
        else:
            raise self.fail("query must start with SELECT or INSERT")
        self.expect("EOF")
        return q

    def select_rest(self) -> ast.SelectQuery:
        projection = self.projection()
        self.expect("WHERE")
        patterns, filters = self.group()
        group_by = None
        order_by = None
        while self.peek().kind in ("GROUP", "ORDER"):
            tok = self.take()
            self.expect("BY")
            if tok.kind == "GROUP":
                if group_by is not None:
                    raise self.fail("duplicate GROUP BY")
                group_by = self.expect("VAR").text
            else:
                if order_by is not None:
                    raise self.fail("duplicate ORDER BY")
                descending = False
                if self.peek().kind in ("ASC", "DESC"):
                    descending = self.take().kind == "DESC"
                    if self.accept("("):
                        var = self.expect("VAR").text
                        self.expect(")")
                        order_by = (var, descending)
                        continue
                order_by = (self.expect("VAR").text, descending)
        q = ast.SelectQuery(projection, tuple(patterns), tuple(filters), group_by, order_by)
        self.check_select(q)
        return q

    def insert_rest(self) -> ast.InsertWhereQuery:
        self.expect("{")
        template = []
        while not self.accept("}"):
            template.append(self.pattern())
            if self.peek().kind != "}":
                self.expect(".")
            else:
                self.accept(".")
        if not template:
            raise self.fail("INSERT template is empty")
        self.expect("WHERE")
        patterns, filters = self.group()
        q = ast.InsertWhereQuery(tuple(template), tuple(patterns), tuple(filters))
        self.check_where_exprs(q.filters, q.patterns)
        return q

    # -- projection ----------------------------------------------------------

    def projection(self) -> Optional[tuple[ast.ProjItem, ...]]:
        if self.peek().kind == "*" and self.peek(1).kind == "WHERE":
            self.take()
            return None
        items: list[ast.ProjItem] = []
        while self.peek().kind != "WHERE":
            if self.peek().kind == "EOF":
                raise self.fail("projection ran into end of query; missing WHERE")
            if self.peek().kind == "(":
                # could be "(expr AS ?alias)" or just a parenthesized expr;
                # expr() re-consumes the paren group in the latter case
                mark = self.pos
                self.take()
                expr = self.expr()
                if self.accept("AS"):
                    alias = self.expect("VAR").text
                    self.expect(")")
                    items.append(ast.ProjItem(expr, alias))
                    continue
                self.pos = mark
            expr = self.expr()
            alias = self.expect("VAR").text if self.accept("AS") else None
            items.append(ast.ProjItem(expr, alias))
        if not items:
            raise self.fail("projection is empty")
        return tuple(items)

    # -- where group ---------------------------------------------------------

    def group(self) -> tuple[list[ast.QPattern], list[ast.Expr]]:
        self.expect("{")
        patterns: list[ast.QPattern] = []
        filters: list[ast.Expr] = []
        while not self.accept("}"):
            if self.peek().kind == "EOF":
                raise self.fail("unterminated WHERE group; missing '}'")
            if self.accept("FILTER"):
                # the expression normally comes parenthesized; parsing a full
                # expr here also accepts the conjunction style (A) && (B)
                filters.append(self.expr())
                self.accept(".")
                continue
            patterns.append(self.pattern())
            if self.peek().kind != "}":
                self.expect(".")
            else:
                self.accept(".")
        if not patterns:
            raise self.fail("WHERE group has no triple patterns")
        return patterns, filters

    def pattern(self) -> ast.QPattern:
        s = self.pattern_term()
        p = self.predicate_term()
        o = self.pattern_term()
        return ast.QPattern(s, p, o)

    def pattern_term(self) -> ast.QTerm:
        tok = self.peek()
        if tok.kind == "<<":
            self.take()
            inner = self.pattern()
            self.expect(">>")
            return ast.collapse_qterm(inner)
        if tok.kind == "IRI":
            self.take()
            return Iri(tok.text)
        if tok.kind == "VAR":
            self.take()
            return Variable(tok.text)
        if tok.kind == "IDENT":
            self.take()
            return self.param_ref(tok)
        if tok.kind in ("NUMBER", "STRING", "-"):
            return self.literal()
        raise self.fail(f"expected a pattern term, got {tok.text or 'end of query'!r}")

    def predicate_term(self) -> Union[Iri, Variable, ast.ParamRef]:
        tok = self.peek()
        if tok.kind == "IRI":
            self.take()
            return Iri(tok.text)
        if tok.kind == "VAR":
            self.take()
            return Variable(tok.text)
        if tok.kind == "IDENT" and tok.text == "a":
            self.take()
            return Iri("rdf:type")
        if tok.kind == "IDENT":
            self.take()
            return self.param_ref(tok)
        raise self.fail(f"expected a predicate, got {tok.text or 'end of query'!r}")

    def param_ref(self, tok: Token) -> ast.ParamRef:
        if tok.text not in self.params:
            raise QuerySyntaxError(
                f"unknown identifier {tok.text!r} (not a declared parameter)", tok.line, tok.col
            )
        return ast.ParamRef(tok.text)

    def literal(self) -> Literal:
        if self.accept("-"):
            tok = self.expect("NUMBER")
            text = "-" + tok.text
        else:
            tok = self.peek()
            if tok.kind == "NUMBER":
                self.take()
                text = tok.text
            elif tok.kind == "STRING":
                self.take()
                if self.peek().kind == "TAG":
                    return self.tagged_literal(tok.text, self.take())
                return Literal(tok.text, "string")
            else:
                raise self.fail("expected a literal")
        try:
            return Literal(int(text), "integer")
        except ValueError:
            return Literal(float(text), "decimal")

    def tagged_literal(self, body: str, tag: Token) -> Literal:
        if tag.text not in _LITERAL_TAGS:
            raise QuerySyntaxError(f"unknown datatype tag ^^{tag.text}", tag.line, tag.col)
        try:
            if tag.text == "integer":
                return Literal(int(body), "integer")
            if tag.text == "decimal":
                return Literal(float(body), "decimal")
            if tag.text == "boolean":
                if body.lower() not in _BOOL_LEXICALS:
                    raise ValueError(f"bad boolean lexical {body!r}")
                return Literal(_BOOL_LEXICALS[body.lower()], "boolean")
            if tag.text == "timestep":
                return Literal(int(body), "timestep")
            return Literal(body, "string")
        except (ValueError, MalformedTermError) as exc:
            raise QuerySyntaxError(str(exc), tag.line, tag.col) from None

    # -- expressions ---------------------------------------------------------

    def expr(self) -> ast.Expr:
        return self.or_expr()

    def or_expr(self) -> ast.Expr:
        left = self.and_expr()
        while self.accept("||"):
            left = ast.Binary("||", left, self.and_expr())
        return left

    def and_expr(self) -> ast.Expr:
        left = self.cmp_expr()
        while self.accept("&&"):
            left = ast.Binary("&&", left, self.cmp_expr())
        return left

    def cmp_expr(self) -> ast.Expr:
        left = self.add_expr()
        if self.peek().kind in ast.COMPARISONS:
            op = self.take().kind
            return ast.Binary(op, left, self.add_expr())
        return left

    def add_expr(self) -> ast.Expr:
        left = self.mul_expr()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            left = ast.Binary(op, left, self.mul_expr())
        return left

    def mul_expr(self) -> ast.Expr:
        left = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.take().kind
            left = ast.Binary(op, left, self.unary())
        return left

    def unary(self) -> ast.Expr:
        if self.peek().kind == "-" and self.peek(1).kind != "NUMBER":
            self.take()
            zero = ast.Const(Literal(0, "integer"))
            return ast.Binary("-", zero, self.unary())
        return self.primary()

    def primary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind in ("NUMBER", "STRING", "-"):
            return ast.Const(self.literal())
        if tok.kind == "IRI":
            self.take()
            return ast.Const(Iri(tok.text))
        if tok.kind == "VAR":
            self.take()
            return ast.VarRef(tok.text)
        if tok.kind == "IDENT":
            self.take()
            return self.param_ref(tok)
        if tok.kind in ("SUM", "AVG"):
            self.take()
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return ast.Aggregate(tok.kind, arg)
        if tok.kind in ("IF", "REGEX", "STR"):
            self.take()
            self.expect("(")
            args = [self.expr()]
            while self.accept(","):
                args.append(self.expr())
            self.expect(")")
            want = {"IF": 3, "REGEX": 2, "STR": 1}[tok.kind]
            if len(args) != want:
                raise QuerySyntaxError(
                    f"{tok.kind} takes {want} argument{'s' if want > 1 else ''}, got {len(args)}",
                    tok.line,
                    tok.col,
                )
            return ast.Call(tok.kind, tuple(args))
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.fail(f"expected an expression, got {tok.text or 'end of query'!r}")

    # -- structural validation -----------------------------------------------

    def check_select(self, q: ast.SelectQuery) -> None:
        pattern_vars = set(q.pattern_variables())
        self.check_where_exprs(q.filters, q.patterns)
        if q.group_by is not None and q.group_by not in pattern_vars:
            raise QuerySyntaxError(f"GROUP BY variable ?{q.group_by} does not occur in WHERE")
        if q.order_by is not None and q.order_by[0] not in pattern_vars:
            raise QuerySyntaxError(f"ORDER BY variable ?{q.order_by[0]} does not occur in WHERE")
        if q.projection is None:
            return
        any_aggregate = False
        for item in q.projection:
            for node in ast.walk_expr(item.expr):
                if isinstance(node, ast.VarRef) and node.name not in pattern_vars:
                    raise QuerySyntaxError(f"projected variable ?{node.name} does not occur in WHERE")
                if isinstance(node, ast.Aggregate):
                    any_aggregate = True
                    if ast.has_aggregate(node.arg):
                        raise QuerySyntaxError("aggregates cannot nest")
        if any_aggregate:
            for item in q.projection:
                if ast.has_aggregate(item.expr):
                    continue
                if not isinstance(item.expr, ast.VarRef):
                    raise QuerySyntaxError(
                        "with aggregation, every non-aggregate projection item must be a plain variable"
                    )
                if q.group_by is not None and item.expr.name != q.group_by:
                    raise QuerySyntaxError(
                        f"projected variable ?{item.expr.name} is not the GROUP BY variable"
                    )
        elif q.group_by is not None:
            raise QuerySyntaxError("GROUP BY without aggregates in the projection")

    def check_where_exprs(self, filters: Iterable[ast.Expr], patterns: tuple[ast.QPattern, ...]) -> None:
        pattern_vars: set[str] = set()
        for p in patterns:
            pattern_vars |= set(p.variables())
        for f in filters:
            for node in ast.walk_expr(f):
                if isinstance(node, ast.Aggregate):
                    raise QuerySyntaxError("aggregates are not allowed in FILTER")
                if isinstance(node, ast.VarRef) and node.name not in pattern_vars:
                    raise QuerySyntaxError(f"filter variable ?{node.name} does not occur in WHERE")


def parse_query(text: str, params: Iterable[str] = ()) -> ast.Query:
    """Parse query text. ``params`` declares the free identifiers (runtime
    parameters) the text may reference; anything else is a syntax error."""
    try:
        tokens = tokenize(text)
    except QueryLexError as exc:
        raise QuerySyntaxError(str(exc).split(": ", 1)[-1], exc.line, exc.col) from None
    return _Parser(tokens, frozenset(params)).query()
