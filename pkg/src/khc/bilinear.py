"""Filtered Clebsch-Gordan calculus for tensor squares.

A Jordan block whose Hodge levels are consecutive behaves like an ``sl_2``
string; the tensor product of two strings of sizes ``m <= n`` splits into
strings of sizes ``m + n - 1 - 2k`` for ``k = 0, ..., m - 1``, the ``k``-th one
starting ``k`` levels below the sum of the two tops.  The symmetric square of a
string keeps the even ``k``, the exterior square the odd ones.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .core import (
    ONE,
    Angle,
    HodgeBlockData,
    HodgeSystem,
    mu_from_nu,
    recover_nu,
    validate,
)
from .errors import (
    Inconsistent,
    InvalidData,
    MissingTrivialBlock,
    NotMultiplicityFree,
    ShapeMismatch,
)

__all__ = [
    "FilteredBlock",
    "block_tensor",
    "block_sym2",
    "block_wedge2",
    "blocks_of",
    "store_of",
    "sym2",
    "wedge2",
    "wedge2_reduced",
    "level_angle_profile",
    "solve_degrees_h1vanishing",
]


@dataclass(frozen=True, order=True)
class FilteredBlock:
    """Jordan block of ``size`` with primitive level ``top``."""

    angle: Angle
    size: int
    top: int

    def __post_init__(self):
        object.__setattr__(self, "angle", Angle(self.angle))
        if self.size < 1:
            raise InvalidData(f"block size must be positive, got {self.size}")

    @property
    def levels(self) -> range:
        return range(self.top - self.size + 1, self.top + 1)


def block_tensor(b1: FilteredBlock, b2: FilteredBlock) -> list[FilteredBlock]:
    angle = b1.angle + b2.angle
    return [
        FilteredBlock(angle, b1.size + b2.size - 1 - 2 * k, b1.top + b2.top - k)
        for k in range(min(b1.size, b2.size))
    ]


def _self_tensor(b: FilteredBlock, parity: int) -> list[FilteredBlock]:
    angle = b.angle + b.angle
    return [
        FilteredBlock(angle, 2 * b.size - 1 - 2 * k, 2 * b.top - k)
        for k in range(b.size)
        if k % 2 == parity
    ]


def block_sym2(b: FilteredBlock) -> list[FilteredBlock]:
    return _self_tensor(b, 0)


def block_wedge2(b: FilteredBlock) -> list[FilteredBlock]:
    return _self_tensor(b, 1)


def blocks_of(nu: HodgeBlockData) -> list[FilteredBlock]:
    """Expand a nu store into a list of blocks (with repetition)."""
    out = []
    for (p, a, ell), m in nu.items():
        out.extend([FilteredBlock(a, ell + 1, p)] * m)
    return out


def store_of(blocks: Iterable[FilteredBlock]) -> HodgeBlockData:
    counts = Counter((b.top, b.angle, b.size - 1) for b in blocks)
    return HodgeBlockData(counts, kind="nu")


def _square_blocks(blocks: list[FilteredBlock], diagonal) -> list[FilteredBlock]:
    out = []
    for i, b in enumerate(blocks):
        out.extend(diagonal(b))
        for c in blocks[i + 1 :]:
            out.extend(block_tensor(b, c))
    return out


def _square_hodge(h: Mapping[int, int], sign: int) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    levels = sorted(h)
    for i, j in enumerate(levels):
        out[2 * j] += h[j] * (h[j] + sign) // 2
        for k in levels[i + 1 :]:
            out[j + k] += h[j] * h[k]
    return {p: v for p, v in out.items() if v}


def level_angle_profile(S: HodgeSystem) -> dict[tuple[int, str], Angle]:
    """Eigenvalue carried by each occupied level at each point (``"inf"`` included).

    Only defined for multiplicity-free systems.
    """
    if any(v > 1 for v in S.hodge.values()):
        raise NotMultiplicityFree(f"Hodge numbers {S.hodge} are not all <= 1")
    out = {}
    for x in list(S.points) + ["inf"]:
        for b in blocks_of(S.nu_at(x)):
            for p in b.levels:
                out[(p, x)] = b.angle
    return out


def _square_degrees(S: HodgeSystem, diagonal: bool) -> dict[int, int]:
    prof = level_angle_profile(S)
    where = list(S.points) + ["inf"]
    levels = sorted(S.hodge)
    out: dict[int, int] = defaultdict(int)
    for i, j in enumerate(levels):
        if diagonal:
            shift = sum(1 for x in where if 2 * prof[(j, x)].value >= 1)
            out[2 * j] += 2 * S.degrees.get(j, 0) + shift
        for k in levels[i + 1 :]:
            shift = sum(1 for x in where if prof[(j, x)].value + prof[(k, x)].value >= 1)
            out[j + k] += S.degrees.get(j, 0) + S.degrees.get(k, 0) + shift
    return dict(out)


def _square(S: HodgeSystem, diagonal, sign: int, keep_diag: bool) -> HodgeSystem:
    hodge = _square_hodge(S.hodge, sign)
    if not hodge:
        raise InvalidData("the square is zero")
    degrees = _square_degrees(S, keep_diag)
    local = {}
    for x in S.points:
        nu = store_of(_square_blocks(blocks_of(S.nu_at(x)), diagonal))
        local[x] = mu_from_nu(nu)
    infinity = store_of(_square_blocks(blocks_of(S.infinity), diagonal))
    pairing = "symmetric" if S.pairing in ("symmetric", "skew") else "unknown"
    return validate(
        HodgeSystem(
            points=S.points,
            local=local,
            infinity=infinity,
            hodge=hodge,
            degrees=degrees,
            pairing=pairing,
        )
    )


def sym2(S: HodgeSystem) -> HodgeSystem:
    """Symmetric square (degrees need a multiplicity-free input)."""
    return _square(S, block_sym2, +1, True)


def wedge2(S: HodgeSystem) -> HodgeSystem:
    """Exterior square (degrees need a multiplicity-free input)."""
    return _square(S, block_wedge2, -1, False)


def wedge2_reduced(S: HodgeSystem) -> HodgeSystem:
    """Rank-five complement of the symplectic line in the exterior square.

    The input must be a rank-four skew system with one-dimensional Hodge
    pieces on four consecutive levels; the symplectic line sits at the middle
    level of the square and has degree zero.
    """
    if S.pairing != "skew":
        raise ShapeMismatch(f"needs a skew pairing, got {S.pairing}")
    levels = sorted(S.hodge)
    if S.rank != 4 or len(levels) != 4 or any(S.hodge[p] != 1 for p in levels):
        raise ShapeMismatch(f"needs rank 4 with h^p <= 1, got {S.hodge}")
    p0, p1, p2, p3 = levels
    if not (p1 == p0 + 1 and p2 == p0 + 2 and p3 == p0 + 3):
        raise ShapeMismatch(f"levels {levels} are not consecutive")
    p_e = p0 + p3
    W = wedge2(S)
    line = (p_e, ONE, 0)

    def drop(nu: HodgeBlockData, where: str) -> HodgeBlockData:
        if nu[line] < 1:
            raise MissingTrivialBlock(f"no trivial size-one block at level {p_e} at {where}")
        return nu.without(line)

    local = {x: mu_from_nu(drop(W.nu_at(x), x)) for x in W.points}
    infinity = drop(W.infinity, "infinity")
    hodge = dict(W.hodge)
    hodge[p_e] -= 1
    return validate(
        W.replace(local=local, infinity=infinity, hodge=hodge, pairing="symmetric")
    )


def solve_degrees_h1vanishing(
    local: Mapping[str, HodgeBlockData],
    infinity: HodgeBlockData,
    h: Mapping[int, int],
    known_h1: Mapping[int, int] | None = None,
) -> dict[int, int]:
    """Degrees forced by known projective ``H^1`` Hodge numbers.

    The ``H^1`` formula is triangular in the degrees; it is solved from the
    top level downward and the last equation is kept as a consistency check.
    """
    known_h1 = dict(known_h1 or {})
    h = {p: v for p, v in h.items() if v}
    if not h:
        raise Inconsistent("no Hodge numbers given")
    for x, mu in local.items():
        recover_nu(mu, h)
    lo, hi = min(h), max(h)

    def rest(p: int) -> int:
        # every term of the projective formula at level p except the degrees
        v = -h.get(p, 0)
        for mu in local.values():
            v += mu.dim(p - 1) - mu.dim(p - 1, ONE) + mu.dim(p, ONE)
        v -= sum(m for (q, a, ell), m in infinity.items() if q == p - 1 and a.is_trivial)
        return v

    delta = {hi + 1: 0}
    for p in range(hi + 1, lo, -1):
        # known_h1[p] = delta[p-1] - delta[p] + rest(p)
        delta[p - 1] = known_h1.get(p, 0) + delta[p] - rest(p)
    if known_h1.get(lo, 0) != -delta[lo] + rest(lo):
        raise Inconsistent("the lowest H^1 equation has no solution")
    stray = [p for p in known_h1 if (p < lo or p > hi + 1) and known_h1[p]]
    if stray:
        raise Inconsistent(f"H^1 Hodge numbers outside the possible range: {stray}")
    out = {p: d for p, d in delta.items() if lo <= p <= hi and d}
    bad = [p for p in out if not h.get(p)]
    if bad:
        raise Inconsistent(f"solution has nonzero degree at empty levels {bad}")
    return dict(sorted(out.items()))
