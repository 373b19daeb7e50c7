"""Shared hypothesis strategies and independent reference computations.

The reference functions here deliberately avoid the engine's code paths: they
work on plain integer lists via explicit index loops, so the symbolic engine
can be cross-checked by evaluating its output at integer assignments.
"""

from __future__ import annotations

from hypothesis import strategies as st

from hpdcalc.model import LefschetzProfile, build_profile
from hpdcalc.poly import InvariantExpr

SYMBOL_NAMES = ("x", "y")


@st.composite
def primitive_exprs(draw, symbols=SYMBOL_NAMES, max_coeff=3):
    """Small polynomials with nonnegative coefficients, so any profile built
    from them passes the plausibility screen."""
    expr = InvariantExpr.const(draw(st.integers(0, max_coeff)))
    for name in draw(st.sets(st.sampled_from(symbols), max_size=len(symbols))):
        expr = expr + draw(st.integers(0, max_coeff)) * InvariantExpr.symbol(name)
    return expr


@st.composite
def profile_st(draw, name="A", N=None, max_m=5, max_rank=9, symbols=SYMBOL_NAMES):
    if N is None:
        N = draw(st.integers(2, max_rank))
    m = draw(st.integers(1, min(max_m, N - 1)))
    prims = [draw(primitive_exprs(symbols)) for _ in range(m)]
    return build_profile(name, N, prims)


@st.composite
def profile_pairs(draw, max_m=4, max_rank=9, symbols=SYMBOL_NAMES):
    N = draw(st.integers(2, max_rank))
    p = draw(profile_st(name="A", N=N, max_m=max_m, symbols=symbols))
    q = draw(profile_st(name="B", N=N, max_m=max_m, symbols=symbols))
    return p, q


def assignments(symbols=SYMBOL_NAMES, lo=0, hi=3):
    return st.fixed_dictionaries({name: st.integers(lo, hi) for name in symbols})


def primitive_values(profile: LefschetzProfile, assignment) -> list[int]:
    return [p.evaluate(assignment) for p in profile.primitive_right]


# -- integer reference computations -------------------------------------------


def ref_ruled_join(p_vals: list[int], q_vals: list[int], i: int) -> int:
    return sum(
        a * b
        for i1, a in enumerate(p_vals)
        for i2, b in enumerate(q_vals)
        if i1 + i2 >= i - 1
    )


def ref_flat_join(prim_lists: list[list[int]], i: int) -> int:
    """Exhaustive enumeration over index tuples of the n-fold join component."""
    n = len(prim_lists)
    total = 0
    stack = [(0, 0, 1)]
    while stack:
        k, index_sum, product = stack.pop()
        if k == n:
            if index_sum >= i + 1 - n:
                total += product
            continue
        for idx, value in enumerate(prim_lists[k]):
            stack.append((k + 1, index_sum + idx, product * value))
    return total


def ref_component_rank(p_vals: list[int], k: int) -> int:
    return sum(p_vals[k:])


def ref_total(p_vals: list[int]) -> int:
    return sum((j + 1) * v for j, v in enumerate(p_vals))
