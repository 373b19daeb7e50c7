"""Exact multivariate integer polynomials: the value domain for additive invariants.

Values are immutable and kept in canonical form (no zero coefficients, monomials
in graded lexicographic order on symbol names), so structural equality decides
polynomial equality and printing is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union

__all__ = [
    "Symbol",
    "InvariantExpr",
    "PolySyntaxError",
    "add",
    "mul",
    "sub",
    "eq",
    "const",
    "sym",
    "parse_expr",
]

# A monomial is the multiset of symbol names it mentions, stored sorted.
Monomial = tuple[str, ...]

Coercible = Union["InvariantExpr", int]


def _is_identifier(name: str) -> bool:
    return name.isidentifier()


@dataclass(frozen=True)
class Symbol:
    """A declared unknown, such as the invariant of an undetermined intersection."""

    name: str

    def __post_init__(self) -> None:
        if not self.name or not _is_identifier(self.name):
            raise ValueError(f"symbol name must be an identifier, got {self.name!r}")

    def __str__(self) -> str:
        return self.name


def _monomial_key(m: Monomial) -> tuple[int, Monomial]:
    # Graded lex: higher total degree first, ties by name tuple.
    return (-len(m), m)


class InvariantExpr:
    """An integer polynomial over named symbols, canonical by construction."""

    __slots__ = ("_terms",)

    _terms: tuple[tuple[Monomial, int], ...]

    def __init__(self, terms: Mapping[Monomial, int] | None = None) -> None:
        cleaned = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff == 0:
                    continue
                cleaned[tuple(sorted(mono))] = cleaned.get(tuple(sorted(mono)), 0) + coeff
        items = tuple(
            (mono, coeff)
            for mono, coeff in sorted(cleaned.items(), key=lambda kv: _monomial_key(kv[0]))
            if coeff != 0
        )
        object.__setattr__(self, "_terms", items)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(value: int) -> InvariantExpr:
        return InvariantExpr({(): int(value)})

    @staticmethod
    def symbol(name: str) -> InvariantExpr:
        return InvariantExpr({(Symbol(name).name,): 1})

    @staticmethod
    def _coerce(value: Coercible) -> InvariantExpr:
        if isinstance(value, InvariantExpr):
            return value
        if isinstance(value, int):
            return InvariantExpr.const(value)
        raise TypeError(f"cannot treat {type(value).__name__} as an invariant value")

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[Monomial, int], ...]:
        return self._terms

    def symbols(self) -> frozenset[str]:
        return frozenset(name for mono, _ in self._terms for name in mono)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not mono for mono, _ in self._terms)

    def constant_value(self) -> int:
        """The value of a constant polynomial; raises otherwise."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms[0][1] if self._terms else 0

    def total_degree(self) -> int:
        return max((len(mono) for mono, _ in self._terms), default=0)

    def degree_in(self, name: str) -> int:
        return max((mono.count(name) for mono, _ in self._terms), default=0)

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        """Integer value at the given symbol assignment; all symbols must be covered."""
        value = 0
        for mono, coeff in self._terms:
            term = coeff
            for name in mono:
                term *= assignment[name]
            value += term
        return value

    def at_ones(self) -> int:
        """Evaluation with every symbol set to 1, used for plausibility screening."""
        return sum(coeff for _, coeff in self._terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: Coercible) -> InvariantExpr:
        other = InvariantExpr._coerce(other)
        acc = dict(self._terms)
        for mono, coeff in other._terms:
            acc[mono] = acc.get(mono, 0) + coeff
        return InvariantExpr(acc)

    __radd__ = __add__

    def __neg__(self) -> InvariantExpr:
        return InvariantExpr({mono: -coeff for mono, coeff in self._terms})

    def __sub__(self, other: Coercible) -> InvariantExpr:
        return self + (-InvariantExpr._coerce(other))

    def __rsub__(self, other: Coercible) -> InvariantExpr:
        return InvariantExpr._coerce(other) - self

    def __mul__(self, other: Coercible) -> InvariantExpr:
        other = InvariantExpr._coerce(other)
        acc: dict[Monomial, int] = {}
        for mono_a, coeff_a in self._terms:
            for mono_b, coeff_b in other._terms:
                mono = tuple(sorted(mono_a + mono_b))
                acc[mono] = acc.get(mono, 0) + coeff_a * coeff_b
        return InvariantExpr(acc)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = InvariantExpr.const(other)
        if not isinstance(other, InvariantExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for index, (mono, coeff) in enumerate(self._terms):
            magnitude = abs(coeff)
            factors = list(mono)
            if magnitude != 1 or not factors:
                factors = [str(magnitude)] + factors
            body = "*".join(factors)
            if index == 0:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"InvariantExpr({self})"


# -- functional wrappers ---------------------------------------------------


def add(a: Coercible, b: Coercible) -> InvariantExpr:
    return InvariantExpr._coerce(a) + b


def mul(a: Coercible, b: Coercible) -> InvariantExpr:
    return InvariantExpr._coerce(a) * b


def sub(a: Coercible, b: Coercible) -> tuple[InvariantExpr, bool]:
    """Canonical difference plus a plausibility flag: value at all-ones >= 0.

    Negative screening values are flagged rather than fatal, since a symbolic
    term may dominate a negative constant under honest assignments.
    """
    diff = InvariantExpr._coerce(a) - b
    return diff, diff.at_ones() >= 0


def eq(a: Coercible, b: Coercible) -> bool:
    return InvariantExpr._coerce(a) == InvariantExpr._coerce(b)


def const(value: int) -> InvariantExpr:
    return InvariantExpr.const(value)


def sym(name: str) -> InvariantExpr:
    return InvariantExpr.symbol(name)


ZERO = InvariantExpr.const(0)
ONE = InvariantExpr.const(1)


# -- textual syntax --------------------------------------------------------
#
# Shared with the DSL: integers, symbols, +, -, *, parentheses. The canonical
# printer above emits a subset of this syntax, so print -> parse round-trips.


class PolySyntaxError(ValueError):
    """Malformed polynomial text; carries the offset of the offending character."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def _tokenize_poly(text: str) -> Iterator[tuple[str, str, int]]:
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*()":
            yield ("op", ch, i)
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            yield ("int", text[start:i], start)
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            yield ("ident", text[start:i], start)
            continue
        raise PolySyntaxError(f"unexpected character {ch!r}", i)
    yield ("end", "", len(text))


class _PolyParser:
    def __init__(self, text: str) -> None:
        self._tokens = list(_tokenize_poly(text))
        self._pos = 0

    def _peek(self) -> tuple[str, str, int]:
        return self._tokens[self._pos]

    def _next(self) -> tuple[str, str, int]:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def parse(self) -> InvariantExpr:
        value = self._sum()
        kind, text, offset = self._peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected trailing {text!r}", offset)
        return value

    def _sum(self) -> InvariantExpr:
        value = self._product()
        while True:
            kind, text, _ = self._peek()
            if kind == "op" and text in "+-":
                self._next()
                rhs = self._product()
                value = value + rhs if text == "+" else value - rhs
            else:
                return value

    def _product(self) -> InvariantExpr:
        value = self._factor()
        while True:
            kind, text, _ = self._peek()
            if kind == "op" and text == "*":
                self._next()
                value = value * self._factor()
            else:
                return value

    def _factor(self) -> InvariantExpr:
        kind, text, offset = self._next()
        if kind == "int":
            return InvariantExpr.const(int(text))
        if kind == "ident":
            return InvariantExpr.symbol(text)
        if kind == "op" and text == "-":
            return -self._factor()
        if kind == "op" and text == "+":
            return self._factor()
        if kind == "op" and text == "(":
            value = self._sum()
            kind, text, offset = self._next()
            if not (kind == "op" and text == ")"):
                raise PolySyntaxError("expected ')'", offset)
            return value
        raise PolySyntaxError(f"expected a polynomial factor, got {text or 'end of input'!r}", offset)


def parse_expr(text: str) -> InvariantExpr:
    """Parse the shared textual polynomial syntax into canonical form."""
    return _PolyParser(text).parse()
