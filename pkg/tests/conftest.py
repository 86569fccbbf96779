from __future__ import annotations

from fractions import Fraction

import pytest

from torofree.liealg import AlgebraDesc
from torofree.polyalg import Poly
from torofree.repmods import ModuleSpec


def mk_spec(
    family="A",
    rank=1,
    loop_vars=0,
    variant="finite",
    cocycle=(0, 0),
    lam=(),
    witt_a=None,
    base_a=None,
    base_b=0,
    S=(),
):
    """Compact ModuleSpec builder used across the test modules."""
    desc = AlgebraDesc(family, rank, loop_vars, variant, tuple(Fraction(c) for c in cocycle))
    l, n = (0, loop_vars) if variant == "witt" else (rank, loop_vars)
    if variant == "witt":
        return ModuleSpec(algebra=desc, lam=tuple(Fraction(x) for x in lam), witt_a=witt_a)
    if base_a is None:
        base_a = tuple(Fraction(1) for _ in range(rank))
    if isinstance(base_b, Poly):
        b = base_b
    else:
        b = Poly.const(l, n, Fraction(base_b))
    return ModuleSpec(
        algebra=desc,
        lam=tuple(Fraction(x) for x in lam),
        witt_a=witt_a,
        base_a=tuple(Fraction(x) for x in base_a),
        base_b=b,
        S=frozenset(S),
    )


@pytest.fixture
def sl2_finite():
    # the worked example: a = (2), b = 3, S = {1}
    return mk_spec(rank=1, base_a=(2,), base_b=3, S={1})


@pytest.fixture
def sl2_toroidal():
    return mk_spec(rank=1, loop_vars=1, variant="toroidal", lam=(5,), base_a=(2,), base_b=3, S={1})
