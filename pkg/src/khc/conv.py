"""Middle convolution with a Kummer system, on monodromy and on Hodge data."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Literal

from .core import (
    ONE,
    Angle,
    AngleLike,
    HodgeBlockData,
    HodgeSystem,
    MonodromyData,
    MonodromySystem,
    forget_hodge,
    prim_coprim,
    residue_sum,
    validate,
)
from .errors import (
    ChiIsOne,
    ChiMismatch,
    InvalidData,
    InvariantViolation,
    NegativeDimension,
    NegativeHodgeNumber,
    NotScalarAtInfinity,
)

__all__ = ["H1Result", "h1_hodge", "dim_h1_middle", "mc_local", "mc_hodge", "scalar_infinity"]

Variant = Literal["projective", "affine"]

_FLIP = {"symmetric": "skew", "skew": "symmetric"}


@dataclass(frozen=True)
class H1Result:
    """Hodge numbers of the first cohomology of the intermediate extension."""

    hodge: dict[int, int]
    total: int
    variant: Variant

    def __post_init__(self):
        if self.total != sum(self.hodge.values()):
            raise InvariantViolation("H1Result total does not match its Hodge numbers")


def _unipotent_prim(store: HodgeBlockData, p: int) -> int:
    return prim_coprim(store, ONE, p)[0]


def h1_hodge(S: HodgeSystem, variant: Variant = "affine") -> H1Result:
    """Hodge numbers of ``H^1`` with coefficients in ``S`` (irreducible, non-constant)."""
    if variant not in ("affine", "projective"):
        raise InvalidData(f"unknown H1 variant {variant!r}")
    levels = S.level_range()
    out: dict[int, int] = {}
    for p in range(levels.start, levels.stop + 1):
        v = S.degrees.get(p - 1, 0) - S.degrees.get(p, 0) - S.hodge.get(p, 0)
        for x in S.points:
            mu = S.local[x]
            v += mu.dim(p - 1) - mu.dim(p - 1, ONE)
            v += mu.dim(p, ONE)
        if variant == "projective":
            v -= _unipotent_prim(S.infinity, p - 1)
        if v < 0:
            raise NegativeHodgeNumber(f"h^{p}(H^1) = {v} < 0: inconsistent input data")
        if v:
            out[p] = v
    return H1Result(hodge=out, total=sum(out.values()), variant=variant)


def dim_h1_middle(S: MonodromySystem | HodgeSystem) -> int:
    """Dimension of the middle-extension ``H^1`` from the Euler characteristic."""
    if isinstance(S, HodgeSystem):
        S = forget_hodge(S)
    d = (S.r - 1) * S.rank - sum(nu.prim(ONE) for nu in S.all_nu())
    if d < 0:
        raise NegativeDimension(f"dim H^1 = {d} < 0")
    return d


def mc_local(S: MonodromySystem | HodgeSystem, chi: AngleLike) -> MonodromySystem:
    """Local monodromy of ``MC_chi(S)`` for regular singular ``S``.

    ``chi`` is the angle of the Kummer eigenvalue.
    """
    if isinstance(S, HodgeSystem):
        S = forget_hodge(S)
    c = Angle(chi)
    if c.is_trivial:
        raise ChiIsOne("middle convolution needs chi != 1")
    d = dim_h1_middle(S)
    local = {x: S.local[x].rotated(c) for x in S.points}
    inf: dict = defaultdict(int)
    for (a, ell), m in S.infinity.items():
        if a == c:
            if ell >= 1:
                inf[(ONE, ell - 1)] += m
        elif a.is_trivial:
            inf[(-c, ell + 1)] += m
        else:
            inf[(a - c, ell)] += m
    inf[(-c, 0)] += d
    rank = S.rank + d + S.infinity.prim(ONE) - S.infinity.prim(c)
    infinity = MonodromyData(inf)
    if infinity.total() != rank:
        raise InvariantViolation(f"convolution rank {rank} disagrees with infinity data {infinity.total()}")
    return MonodromySystem(points=S.points, local=local, infinity=infinity, rank=rank)


def scalar_infinity(S: HodgeSystem) -> Angle:
    """Angle of the scalar monodromy at infinity; raise if not scalar."""
    a = S.infinity_scalar()
    if a is None:
        raise NotScalarAtInfinity("monodromy at infinity is not scalar")
    return a


def mc_hodge(S: HodgeSystem, chi: AngleLike | None = None) -> HodgeSystem:
    """Hodge data of ``MC_chi(S)`` where ``chi`` is the scalar at infinity."""
    a_o = scalar_infinity(S)
    if a_o.is_trivial:
        raise ChiIsOne("monodromy at infinity is trivial; no convolution is allowed")
    if chi is not None and Angle(chi) != a_o:
        raise ChiMismatch(f"chi = {Angle(chi)} but the scalar at infinity is {a_o}")
    if sum(S.degrees.values()) != -residue_sum(S):
        raise InvalidData("input degrees violate the residue formula")

    hodge = h1_hodge(S, "affine").hodge
    cut = 1 - a_o.value

    local = {}
    for x in S.points:
        out: dict = defaultdict(int)
        for (p, b, ell), m in S.local[x].items():
            bump = 0 < b.value <= cut
            out[(p + 1 if bump else p, b + a_o, ell)] += m
        local[x] = HodgeBlockData(out, kind="mu")

    levels = set(hodge) | set(S.hodge) | {p + 1 for p in S.hodge}
    degrees = {}
    for p in sorted(levels):
        d = S.degrees.get(p, 0) + S.hodge.get(p, 0)
        for x in S.points:
            mu = S.local[x]
            d -= mu.dim(p, ONE)
            d -= sum(mu.dim(p - 1, b) for b in mu.angles() if 0 < b.value < cut)
        if d and not hodge.get(p):
            raise InvariantViolation(f"convolution produced degree {d} at empty level {p}")
        if d:
            degrees[p] = d

    if not hodge:
        raise NegativeDimension("convolution is zero")
    infinity = HodgeBlockData({(p, -a_o, 0): n for p, n in hodge.items()})
    pairing = _FLIP.get(S.pairing, "unknown") if a_o.value == cut else "unknown"
    out = HodgeSystem(
        points=S.points,
        local=local,
        infinity=infinity,
        hodge=hodge,
        degrees=degrees,
        pairing=pairing,
    )
    expected = mc_local(forget_hodge(S), a_o)
    if expected.rank != out.rank:
        raise InvariantViolation(f"Hodge rank {out.rank} differs from monodromy rank {expected.rank}")
    return validate(out)
