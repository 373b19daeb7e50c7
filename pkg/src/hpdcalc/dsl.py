"""Declaration language for workspaces and check pipelines.

Statements end with `;`, comments run from `#` to end of line, and polynomial
values use integer coefficients over declared symbols with `+ - *` and
parentheses. The grammar needs one token of lookahead. Every parse error and
validation error carries a (line, column) span.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .checks import (
    CheckResult,
    check_dual_profile,
    check_join_linear,
    check_main_theorem,
    check_n_hpd_center,
    check_thm_cone_part1,
    check_thm_cone_part2,
)
from .errors import (
    AmbientMismatch,
    DslSyntaxError,
    DuplicateDeclaration,
    HpdcalcError,
    Span,
    Underdetermined,
    UnknownCategory,
    UnknownSymbol,
)
from .model import LefschetzProfile, Workspace, build_profile
from .poly import InvariantExpr

__all__ = [
    "CHECK_NAMES",
    "parse",
    "validate",
    "check_requests",
    "run_check",
    "print_canonical",
    "Ast",
    "SymbolDecl",
    "CategoryDecl",
    "IntersectDecl",
    "DisjointDecl",
    "DualDecl",
    "CheckStmt",
]

CHECK_NAMES = (
    "main_theorem",
    "n_hpd_center",
    "cone_part1",
    "cone_part2",
    "join_linear",
    "dual_profile",
)

# Keyword arguments accepted per check; every other check takes none.
_CHECK_KEYWORDS = {"cone_part1": ("n2",), "cone_part2": ("n2",)}

# (min, max) positional arity; max None = unbounded.
_CHECK_ARITY = {
    "main_theorem": (2, 2),
    "n_hpd_center": (1, None),
    "cone_part1": (1, 1),
    "cone_part2": (1, 1),
    "join_linear": (1, None),
    "dual_profile": (1, 1),
}

_KEYWORDS = frozenset(
    ["symbol", "category", "over", "primitive", "left", "intersect", "disjoint", "dual", "check"]
)


# -- lexing ----------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | punct | end
    text: str
    span: Span


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        span = (line, col)
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], span))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], span))
            col += j - i
            i = j
            continue
        if ch in ",;[]()=+-*":
            tokens.append(Token("punct", ch, span))
            i += 1
            col += 1
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", span)
    tokens.append(Token("end", "", (line, col)))
    return tokens


# -- syntax tree -------------------------------------------------------------------


@dataclass(frozen=True)
class PolyNode:
    """A parsed polynomial plus the spans of the symbols it mentions."""

    expr: InvariantExpr
    span: Span
    symbol_uses: tuple[tuple[str, Span], ...]


@dataclass(frozen=True)
class SymbolDecl:
    names: tuple[tuple[str, Span], ...]
    span: Span


@dataclass(frozen=True)
class CategoryDecl:
    name: str
    rank: int
    primitives: tuple[PolyNode, ...]
    left: tuple[PolyNode, ...] | None
    span: Span


@dataclass(frozen=True)
class IntersectDecl:
    first: str
    second: str
    rank: int
    value: PolyNode
    span: Span


@dataclass(frozen=True)
class DisjointDecl:
    names: tuple[tuple[str, Span], ...]
    span: Span


@dataclass(frozen=True)
class DualDecl:
    name: str
    primitives: tuple[PolyNode, ...]
    span: Span


@dataclass(frozen=True)
class CheckStmt:
    check: str
    args: tuple[tuple[str, Span], ...]
    n2: int | None
    span: Span


Statement = SymbolDecl | CategoryDecl | IntersectDecl | DisjointDecl | DualDecl | CheckStmt


@dataclass(frozen=True)
class Ast:
    statements: tuple[Statement, ...]


# -- parsing ----------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.text != text:
            raise DslSyntaxError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.span)
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise DslSyntaxError(f"expected {what}, found {tok.text or 'end of input'!r}", tok.span)
        return self.advance()

    def expect_int(self) -> tuple[int, Span]:
        tok = self.peek()
        if tok.kind != "int":
            raise DslSyntaxError(f"expected integer, found {tok.text or 'end of input'!r}", tok.span)
        self.advance()
        return int(tok.text), tok.span

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == text

    # -- polynomial expressions ---------------------------------------------------

    def parse_poly(self) -> PolyNode:
        uses: list[tuple[str, Span]] = []
        start = self.peek().span
        expr = self._poly_sum(uses)
        return PolyNode(expr, start, tuple(uses))

    def _poly_sum(self, uses) -> InvariantExpr:
        expr = self._poly_product(uses)
        while self.at_punct("+") or self.at_punct("-"):
            op = self.advance().text
            right = self._poly_product(uses)
            expr = expr + right if op == "+" else expr - right
        return expr

    def _poly_product(self, uses) -> InvariantExpr:
        expr = self._poly_factor(uses)
        while self.at_punct("*"):
            self.advance()
            expr = expr * self._poly_factor(uses)
        return expr

    def _poly_factor(self, uses) -> InvariantExpr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return InvariantExpr.const(int(tok.text))
        if tok.kind == "ident":
            self.advance()
            uses.append((tok.text, tok.span))
            return InvariantExpr.symbol(tok.text)
        if self.at_punct("("):
            self.advance()
            expr = self._poly_sum(uses)
            self.expect_punct(")")
            return expr
        if self.at_punct("-"):
            self.advance()
            return -self._poly_factor(uses)
        if self.at_punct("+"):
            self.advance()
            return self._poly_factor(uses)
        raise DslSyntaxError(
            f"expected polynomial, found {tok.text or 'end of input'!r}", tok.span
        )

    def parse_poly_list(self) -> tuple[PolyNode, ...]:
        self.expect_punct("[")
        items = [self.parse_poly()]
        while self.at_punct(","):
            self.advance()
            items.append(self.parse_poly())
        self.expect_punct("]")
        return tuple(items)

    def parse_rank(self) -> tuple[int, Span]:
        tok = self.expect_ident("'P'")
        if tok.text != "P":
            raise DslSyntaxError(f"expected 'P', found {tok.text!r}", tok.span)
        self.expect_punct("(")
        rank, span = self.expect_int()
        self.expect_punct(")")
        return rank, span

    def parse_name_list(self) -> tuple[tuple[str, Span], ...]:
        first = self.expect_ident()
        names = [(first.text, first.span)]
        while self.at_punct(","):
            self.advance()
            tok = self.expect_ident()
            names.append((tok.text, tok.span))
        return tuple(names)

    # -- statements ----------------------------------------------------------------

    def parse_file(self) -> Ast:
        statements: list[Statement] = []
        while self.peek().kind != "end":
            statements.append(self.parse_statement())
        return Ast(tuple(statements))

    def parse_statement(self) -> Statement:
        tok = self.peek()
        if tok.kind != "ident" or tok.text not in _KEYWORDS:
            raise DslSyntaxError(
                f"expected a statement keyword, found {tok.text or 'end of input'!r}", tok.span
            )
        handler = {
            "symbol": self._stmt_symbol,
            "category": self._stmt_category,
            "intersect": self._stmt_intersect,
            "disjoint": self._stmt_disjoint,
            "dual": self._stmt_dual,
            "check": self._stmt_check,
        }.get(tok.text)
        if handler is None:
            raise DslSyntaxError(f"{tok.text!r} cannot start a statement", tok.span)
        return handler()

    def _stmt_symbol(self) -> SymbolDecl:
        span = self.advance().span
        names = self.parse_name_list()
        self.expect_punct(";")
        return SymbolDecl(names, span)

    def _stmt_category(self) -> CategoryDecl:
        span = self.advance().span
        name = self.expect_ident("category name")
        kw = self.expect_ident("'over'")
        if kw.text != "over":
            raise DslSyntaxError(f"expected 'over', found {kw.text!r}", kw.span)
        rank, _ = self.parse_rank()
        kw = self.expect_ident("'primitive'")
        if kw.text != "primitive":
            raise DslSyntaxError(f"expected 'primitive', found {kw.text!r}", kw.span)
        primitives = self.parse_poly_list()
        left = None
        if self.peek().kind == "ident" and self.peek().text == "left":
            self.advance()
            left = self.parse_poly_list()
        self.expect_punct(";")
        return CategoryDecl(name.text, rank, primitives, left, span)

    def _stmt_intersect(self) -> IntersectDecl:
        span = self.advance().span
        first = self.expect_ident("category name")
        self.expect_punct(",")
        second = self.expect_ident("category name")
        kw = self.expect_ident("'over'")
        if kw.text != "over":
            raise DslSyntaxError(f"expected 'over', found {kw.text!r}", kw.span)
        rank, _ = self.parse_rank()
        self.expect_punct("=")
        value = self.parse_poly()
        self.expect_punct(";")
        return IntersectDecl(first.text, second.text, rank, value, span)

    def _stmt_disjoint(self) -> DisjointDecl:
        span = self.advance().span
        names = self.parse_name_list()
        if len(names) < 2:
            raise DslSyntaxError("disjoint declarations need at least two names", span)
        self.expect_punct(";")
        return DisjointDecl(names, span)

    def _stmt_dual(self) -> DualDecl:
        span = self.advance().span
        name = self.expect_ident("category name")
        kw = self.expect_ident("'primitive'")
        if kw.text != "primitive":
            raise DslSyntaxError(f"expected 'primitive', found {kw.text!r}", kw.span)
        primitives = self.parse_poly_list()
        self.expect_punct(";")
        return DualDecl(name.text, primitives, span)

    def _stmt_check(self) -> CheckStmt:
        span = self.advance().span
        name = self.expect_ident("check name")
        if name.text not in CHECK_NAMES:
            raise DslSyntaxError(
                f"unknown check name {name.text!r}; expected one of {', '.join(CHECK_NAMES)}",
                name.span,
            )
        allowed_keys = _CHECK_KEYWORDS.get(name.text, ())
        self.expect_punct("(")
        args: list[tuple[str, Span]] = []
        n2: int | None = None
        saw_keyword = False
        while True:
            tok = self.expect_ident("category name or keyword")
            if self.at_punct("="):
                self.advance()
                if tok.text not in allowed_keys:
                    raise DslSyntaxError(
                        f"check {name.text!r} does not take keyword {tok.text!r}", tok.span
                    )
                value, vspan = self.expect_int()
                if value < 1:
                    raise DslSyntaxError("n2 must be a positive integer", vspan)
                if n2 is not None:
                    raise DslSyntaxError("duplicate keyword 'n2'", tok.span)
                n2 = value
                saw_keyword = True
            else:
                if saw_keyword:
                    raise DslSyntaxError(
                        "positional arguments may not follow keyword arguments", tok.span
                    )
                args.append((tok.text, tok.span))
            if self.at_punct(","):
                self.advance()
                continue
            break
        self.expect_punct(")")
        self.expect_punct(";")
        lo, hi = _CHECK_ARITY[name.text]
        if len(args) < lo or (hi is not None and len(args) > hi):
            wanted = str(lo) if hi == lo else f"at least {lo}"
            raise DslSyntaxError(
                f"check {name.text!r} takes {wanted} categories, got {len(args)}", span
            )
        if "n2" in allowed_keys and n2 is None:
            raise DslSyntaxError(f"check {name.text!r} requires n2=<rank>", span)
        return CheckStmt(name.text, tuple(args), n2, span)


def parse(text: str) -> Ast:
    """Parse source text into a statement list; raises DslSyntaxError with a span."""
    return _Parser(_lex(text)).parse_file()


# -- validation ---------------------------------------------------------------------


def _check_poly_symbols(node: PolyNode, symbols: set[str]) -> None:
    for name, span in node.symbol_uses:
        if name not in symbols:
            raise UnknownSymbol(f"symbol {name!r} is not declared", span)


def _with_span(err: HpdcalcError, span: Span) -> HpdcalcError:
    if err.span is None:
        err.span = span
    return err


def validate(ast: Ast, *, allow_nonmoderate: bool = False) -> Workspace:
    """Resolve all references and build the frozen workspace.

    Declaration order never matters: names are collected in a first pass, so
    forward references validate cleanly. `allow_nonmoderate` admits profiles
    with length >= ambient rank; duality-consuming operations still reject
    them at run time.
    """
    symbols: set[str] = set()
    category_decls: dict[str, CategoryDecl] = {}

    for stmt in ast.statements:
        if isinstance(stmt, SymbolDecl):
            for name, span in stmt.names:
                if name in symbols:
                    raise DuplicateDeclaration(f"symbol {name!r} declared twice", span)
                symbols.add(name)
        elif isinstance(stmt, CategoryDecl):
            if stmt.name in category_decls:
                raise DuplicateDeclaration(f"category {stmt.name!r} declared twice", stmt.span)
            category_decls[stmt.name] = stmt

    overlap = symbols & set(category_decls)
    if overlap:
        name = sorted(overlap)[0]
        raise DuplicateDeclaration(
            f"{name!r} is declared both as a symbol and as a category",
            category_decls[name].span,
        )

    categories: list[LefschetzProfile] = []
    for stmt in category_decls.values():
        if stmt.rank < 2:
            raise DslSyntaxError("ambient rank must be at least 2", stmt.span)
        for node in stmt.primitives + (stmt.left or ()):
            _check_poly_symbols(node, symbols)
        try:
            categories.append(
                build_profile(
                    stmt.name,
                    stmt.rank,
                    [node.expr for node in stmt.primitives],
                    [node.expr for node in stmt.left] if stmt.left is not None else None,
                    allow_nonmoderate=allow_nonmoderate,
                )
            )
        except HpdcalcError as err:
            raise _with_span(err, stmt.span)

    def require_category(name: str, span: Span) -> CategoryDecl:
        decl = category_decls.get(name)
        if decl is None:
            raise UnknownCategory(f"unknown category {name!r}", span)
        return decl

    intersections: dict[tuple[str, str], InvariantExpr] = {}
    seen_pairs: set[tuple[str, str]] = set()
    disjoint_sets: list[tuple[str, ...]] = []
    dual_profiles: dict[str, LefschetzProfile] = {}

    for stmt in ast.statements:
        if isinstance(stmt, IntersectDecl):
            a = require_category(stmt.first, stmt.span)
            b = require_category(stmt.second, stmt.span)
            if a.rank != stmt.rank or b.rank != stmt.rank:
                raise AmbientMismatch(
                    f"intersection declared over P({stmt.rank}) but {stmt.first} and "
                    f"{stmt.second} live over P({a.rank}) and P({b.rank})",
                    stmt.span,
                )
            key = tuple(sorted((stmt.first, stmt.second)))
            if key in seen_pairs:
                raise DuplicateDeclaration(
                    f"intersection of {key[0]}, {key[1]} declared twice", stmt.span
                )
            seen_pairs.add(key)
            _check_poly_symbols(stmt.value, symbols)
            intersections[(stmt.first, stmt.second)] = stmt.value.expr
        elif isinstance(stmt, DisjointDecl):
            for name, span in stmt.names:
                require_category(name, span)
            disjoint_sets.append(tuple(name for name, _ in stmt.names))
        elif isinstance(stmt, DualDecl):
            decl = require_category(stmt.name, stmt.span)
            if stmt.name in dual_profiles:
                raise DuplicateDeclaration(f"dual of {stmt.name!r} declared twice", stmt.span)
            for node in stmt.primitives:
                _check_poly_symbols(node, symbols)
            try:
                dual_profiles[stmt.name] = build_profile(
                    stmt.name,
                    decl.rank,
                    [node.expr for node in stmt.primitives],
                    allow_nonmoderate=allow_nonmoderate,
                )
            except HpdcalcError as err:
                raise _with_span(err, stmt.span)
        elif isinstance(stmt, CheckStmt):
            for name, span in stmt.args:
                require_category(name, span)

    try:
        return Workspace.build(
            symbols=symbols,
            categories=categories,
            intersections=intersections,
            disjoint_sets=disjoint_sets,
            dual_profiles=dual_profiles,
        )
    except HpdcalcError as err:
        raise _with_span(err, (1, 1))


def check_requests(ast: Ast) -> tuple[CheckStmt, ...]:
    """The check statements in file order."""
    return tuple(stmt for stmt in ast.statements if isinstance(stmt, CheckStmt))


def run_check(stmt: CheckStmt, ws: Workspace) -> CheckResult:
    """Execute one check statement against a validated workspace."""
    profiles = [ws.category(name) for name, _ in stmt.args]
    if stmt.check == "main_theorem":
        return check_main_theorem(profiles[0], profiles[1], ws)
    if stmt.check == "n_hpd_center":
        return check_n_hpd_center(profiles, ws)
    if stmt.check == "cone_part1":
        return check_thm_cone_part1(profiles[0], stmt.n2, ws)
    if stmt.check == "cone_part2":
        return check_thm_cone_part2(profiles[0], stmt.n2, ws)
    if stmt.check == "join_linear":
        return check_join_linear(profiles, ws)
    if stmt.check == "dual_profile":
        target = profiles[0]
        dual = ws.dual_of(target.name)
        if dual is None:
            raise Underdetermined(
                f"dual_profile({target.name}) needs a declared dual profile", stmt.span
            )
        return check_dual_profile(target, dual)
    raise AssertionError(f"unhandled check {stmt.check!r}")


# -- canonical printing ----------------------------------------------------------------


def _poly_list_text(values: Sequence[InvariantExpr]) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def print_canonical(ws: Workspace) -> str:
    """Deterministic source text that validates back to an equal workspace."""
    lines: list[str] = []
    if ws.symbols:
        lines.append("symbol " + ", ".join(sorted(ws.symbols)) + ";")
    for name in sorted(ws.categories):
        p = ws.categories[name]
        stmt = (
            f"category {name} over P({p.ambient_rank_N}) "
            f"primitive {_poly_list_text(p.primitive_right)}"
        )
        if p.primitive_left != p.primitive_right:
            stmt += f" left {_poly_list_text(p.primitive_left)}"
        lines.append(stmt + ";")
    for a, b, _base in sorted(ws.intersections):
        value = ws.intersections[(a, b, _base)]
        rank = ws.categories[a].ambient_rank_N
        lines.append(f"intersect {a}, {b} over P({rank}) = {value};")
    for group in sorted(sorted(g) for g in ws.disjoint_sets):
        lines.append("disjoint " + ", ".join(group) + ";")
    for name in sorted(ws.dual_profiles):
        dual = ws.dual_profiles[name]
        lines.append(f"dual {name} primitive {_poly_list_text(dual.primitive_right)};")
    return "".join(line + "\n" for line in lines)
