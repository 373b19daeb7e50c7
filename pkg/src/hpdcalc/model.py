"""Data model: Lefschetz profiles, category terms, SOD expressions, workspaces.

A profile records a category's Lefschetz data as primitive-block invariants
p_0..p_{m-1}; component k is the tail sum starting at k, and the category's
total invariant is the weighted sum over the twisted component chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    AmbientMismatch,
    ConflictingIntersection,
    ImplausibleProfile,
    LeftRightMismatch,
    NonModerate,
    UnknownCategory,
    UnresolvedIntersection,
)
from .poly import Coercible, InvariantExpr

__all__ = [
    "BASE_V",
    "BASE_V_DUAL",
    "BASE_V_SUM",
    "BASE_L",
    "BASE_L_DUAL",
    "LefschetzProfile",
    "CategoryTerm",
    "Atom",
    "Hpd",
    "Join",
    "FiberProduct",
    "PullbackImage",
    "ExceptionalPart",
    "SodBlock",
    "SodExpr",
    "Workspace",
    "build_profile",
    "component_rank",
    "total_invariant",
    "sod_equal",
]

BASE_V = "P(V)"
BASE_V_DUAL = "P(V*)"
BASE_V_SUM = "P(V+V)"
BASE_L = "P(L)"
BASE_L_DUAL = "P(L*)"


def _coerce_all(values: Iterable[Coercible]) -> tuple[InvariantExpr, ...]:
    return tuple(InvariantExpr._coerce(v) for v in values)


@dataclass(frozen=True)
class LefschetzProfile:
    """Additive-invariant data of a Lefschetz category over P(V), rank N."""

    name: str
    ambient_rank_N: int
    primitive_right: tuple[InvariantExpr, ...]
    primitive_left: tuple[InvariantExpr, ...]

    @property
    def length_m(self) -> int:
        return len(self.primitive_right)

    @property
    def is_moderate(self) -> bool:
        return self.length_m < self.ambient_rank_N

    def component_rank(self, k: int) -> InvariantExpr:
        """Invariant of the k-th component: the tail sum of primitives from k."""
        if k < 0:
            raise ValueError("component index must be nonnegative")
        total = InvariantExpr.const(0)
        for p in self.primitive_right[k:]:
            total = total + p
        return total

    def component_ranks(self) -> list[InvariantExpr]:
        return [self.component_rank(k) for k in range(self.length_m)]

    def total_invariant(self) -> InvariantExpr:
        """Sum over the twisted chain: equals sum_j (j+1) * primitive_right[j]."""
        total = InvariantExpr.const(0)
        for j, p in enumerate(self.primitive_right):
            total = total + (j + 1) * p
        return total

    def renamed(self, name: str) -> LefschetzProfile:
        return LefschetzProfile(name, self.ambient_rank_N, self.primitive_right, self.primitive_left)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "ambient_rank_N": self.ambient_rank_N,
            "length_m": self.length_m,
            "primitive_right": [str(p) for p in self.primitive_right],
            "primitive_left": [str(p) for p in self.primitive_left],
        }


def build_profile(
    name: str,
    N: int,
    primitive_right: Sequence[Coercible],
    primitive_left: Sequence[Coercible] | None = None,
    *,
    allow_nonmoderate: bool = False,
) -> LefschetzProfile:
    """Validate and freeze a profile; left data defaults to the right data."""
    if N < 2:
        raise ValueError(f"ambient rank must be at least 2, got {N}")
    right = _coerce_all(primitive_right)
    if not right:
        raise ValueError("a profile needs at least one primitive block")
    left = right if primitive_left is None else _coerce_all(primitive_left)
    profile = LefschetzProfile(name, N, right, left)
    if profile.length_m >= N and not allow_nonmoderate:
        raise NonModerate(
            f"category {name!r} has length {profile.length_m} >= ambient rank {N}"
        )
    if len(left) != len(right):
        raise LeftRightMismatch(
            f"category {name!r}: left data has {len(left)} blocks, right has {len(right)}"
        )
    weighted_left = InvariantExpr.const(0)
    for j, p in enumerate(left):
        weighted_left = weighted_left + (j + 1) * p
    if weighted_left != profile.total_invariant():
        raise LeftRightMismatch(
            f"category {name!r}: left total {weighted_left} != right total "
            f"{profile.total_invariant()}"
        )
    for j, p in enumerate(right):
        if p.at_ones() < 0:
            raise ImplausibleProfile(
                f"category {name!r}: primitive {j} is {p}, negative at all-ones"
            )
    return profile


def component_rank(profile: LefschetzProfile, k: int) -> InvariantExpr:
    return profile.component_rank(k)


def total_invariant(profile: LefschetzProfile) -> InvariantExpr:
    return profile.total_invariant()


# -- category terms ----------------------------------------------------------


class CategoryTerm:
    """Base of the finite term algebra labeling SOD blocks."""

    def render(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Atom(CategoryTerm):
    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Hpd(CategoryTerm):
    arg: CategoryTerm
    base: str = BASE_V_DUAL

    def render(self) -> str:
        return f"hpd({self.arg.render()}; {self.base})"


@dataclass(frozen=True)
class Join(CategoryTerm):
    parts: tuple[CategoryTerm, ...]

    def render(self) -> str:
        return "join(" + ", ".join(p.render() for p in self.parts) + ")"


@dataclass(frozen=True)
class FiberProduct(CategoryTerm):
    parts: tuple[CategoryTerm, ...]
    base: str = BASE_V

    def render(self) -> str:
        inner = ", ".join(p.render() for p in self.parts)
        return f"fiber({inner}; {self.base})"


@dataclass(frozen=True)
class PullbackImage(CategoryTerm):
    arg: CategoryTerm
    morphism: str

    def render(self) -> str:
        return f"pullback({self.arg.render()}; {self.morphism})"


@dataclass(frozen=True)
class ExceptionalPart(CategoryTerm):
    arg: CategoryTerm

    def render(self) -> str:
        return f"excpart({self.arg.render()})"


# -- SOD expressions ----------------------------------------------------------


@dataclass(frozen=True)
class SodBlock:
    term: CategoryTerm
    twist: int
    invariant: InvariantExpr

    def to_json_dict(self) -> dict:
        return {
            "term": self.term.render(),
            "twist": self.twist,
            "invariant": str(self.invariant),
        }


@dataclass(frozen=True)
class SodExpr:
    """An ordered block list; order is semantically significant."""

    base_tag: str
    blocks: tuple[SodBlock, ...]

    def total(self) -> InvariantExpr:
        value = InvariantExpr.const(0)
        for block in self.blocks:
            value = value + block.invariant
        return value

    def to_json_dict(self, name: str = "") -> dict:
        body = {
            "base": self.base_tag,
            "blocks": [block.to_json_dict() for block in self.blocks],
        }
        if name:
            return {"name": name, **body}
        return body


def sod_equal(x: SodExpr, y: SodExpr) -> bool:
    """Blockwise equality: same base, same order, equal terms/twists/invariants."""
    if x.base_tag != y.base_tag or len(x.blocks) != len(y.blocks):
        return False
    return all(
        a.term == b.term and a.twist == b.twist and a.invariant == b.invariant
        for a, b in zip(x.blocks, y.blocks)
    )


# -- workspace ----------------------------------------------------------------


def _pair_key(a: str, b: str, base: str) -> tuple[str, str, str]:
    lo, hi = sorted((a, b))
    return (lo, hi, base)


@dataclass(frozen=True, eq=True)
class Workspace:
    """Frozen set of declarations consumed by the engine and the checks.

    Intersections are symmetric; a declared disjoint group forces the pairwise
    intersection invariant over P(V) to zero.
    """

    symbols: frozenset[str] = frozenset()
    categories: Mapping[str, LefschetzProfile] = field(default_factory=dict)
    intersections: Mapping[tuple[str, str, str], InvariantExpr] = field(default_factory=dict)
    disjoint_sets: tuple[frozenset[str], ...] = ()
    dual_profiles: Mapping[str, LefschetzProfile] = field(default_factory=dict)
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @staticmethod
    def build(
        symbols: Iterable[str] = (),
        categories: Iterable[LefschetzProfile] = (),
        intersections: Mapping[tuple[str, str], Coercible] | None = None,
        disjoint_sets: Iterable[Iterable[str]] = (),
        dual_profiles: Mapping[str, LefschetzProfile] | None = None,
    ) -> Workspace:
        """Normalize and validate declarations into a frozen workspace."""
        cats = {p.name: p for p in categories}
        names = set(cats)
        warnings: list[str] = []

        # Deduplicate and order groups canonically so workspace equality does
        # not depend on declaration order.
        groups = tuple(sorted({frozenset(group) for group in disjoint_sets}, key=sorted))
        for group in groups:
            for member in group:
                if member not in names:
                    raise UnknownCategory(f"disjoint declaration names unknown category {member!r}")

        pairs: dict[tuple[str, str, str], InvariantExpr] = {}
        for (a, b), value in (intersections or {}).items():
            if a not in names:
                raise UnknownCategory(f"intersection names unknown category {a!r}")
            if b not in names:
                raise UnknownCategory(f"intersection names unknown category {b!r}")
            pairs[_pair_key(a, b, BASE_V)] = InvariantExpr._coerce(value)

        zero = InvariantExpr.const(0)
        for group in groups:
            members = sorted(group)
            for i, a in enumerate(members):
                for b in members[i + 1 :]:
                    key = _pair_key(a, b, BASE_V)
                    declared = pairs.get(key)
                    if declared is None or declared == zero:
                        pairs[key] = zero
                    elif declared.is_constant():
                        raise ConflictingIntersection(
                            f"{a}, {b} declared disjoint but intersect with constant {declared}"
                        )
                    else:
                        warnings.append(
                            f"intersection of {a}, {b} declared as {declared} but the pair is "
                            "declared disjoint; disjointness forces 0"
                        )
                        pairs[key] = zero

        duals = dict(dual_profiles or {})
        for name in duals:
            if name not in names:
                raise UnknownCategory(f"dual declaration names unknown category {name!r}")

        return Workspace(
            symbols=frozenset(symbols),
            categories=cats,
            intersections=pairs,
            disjoint_sets=groups,
            dual_profiles=duals,
            warnings=tuple(warnings),
        )

    # -- lookups -----------------------------------------------------------

    def category(self, name: str) -> LefschetzProfile:
        try:
            return self.categories[name]
        except KeyError:
            raise UnknownCategory(f"unknown category {name!r}") from None

    def intersection(self, a: str, b: str, base: str = BASE_V) -> InvariantExpr | None:
        return self.intersections.get(_pair_key(a, b, base))

    def require_intersection(self, a: str, b: str, base: str = BASE_V) -> InvariantExpr:
        value = self.intersection(a, b, base)
        if value is None:
            raise UnresolvedIntersection(
                f"no declared intersection invariant for {a}, {b} over {base}"
            )
        return value

    def are_disjoint(self, names: Iterable[str]) -> bool:
        wanted = set(names)
        if len(wanted) <= 1:
            return True
        return any(wanted <= group for group in self.disjoint_sets)

    def dual_of(self, name: str) -> LefschetzProfile | None:
        return self.dual_profiles.get(name)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "symbols": sorted(self.symbols),
            "categories": [
                self.categories[name].to_json_dict() for name in sorted(self.categories)
            ],
            "intersections": [
                {"left": a, "right": b, "base": base, "value": str(self.intersections[(a, b, base)])}
                for a, b, base in sorted(self.intersections)
            ],
            "disjoint_sets": sorted(sorted(group) for group in self.disjoint_sets),
            "dual_profiles": [
                {**self.dual_profiles[name].to_json_dict(), "name": name}
                for name in sorted(self.dual_profiles)
            ],
        }


def same_ambient(p: LefschetzProfile, q: LefschetzProfile) -> int:
    """The shared ambient rank, or AmbientMismatch."""
    if p.ambient_rank_N != q.ambient_rank_N:
        raise AmbientMismatch(
            f"{p.name} lives over rank {p.ambient_rank_N}, {q.name} over rank {q.ambient_rank_N}"
        )
    return p.ambient_rank_N
