"""Tensor product with a unitary rank-one local system."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Mapping
from fractions import Fraction

from .core import (
    ONE,
    Angle,
    HodgeBlockData,
    HodgeSystem,
    MonodromyData,
    MonodromySystem,
    RankOneLine,
    mu_from_nu_monodromy,
    prim_coprim,
    recover_nu,
    recover_nu_monodromy,
    tate_twist,
)
from .errors import InvalidData, NegativeMultiplicity

__all__ = ["as_line", "tensor_line", "tensor_line_monodromy", "twist_mu"]

_SELF_DUAL = (Fraction(0), Fraction(1, 2))


def as_line(L: RankOneLine | Mapping, points: tuple[str, ...]) -> RankOneLine:
    """Coerce to a :class:`RankOneLine` living on ``points``."""
    if not isinstance(L, RankOneLine):
        L = RankOneLine(L)
    extra = set(L.finite_angles) - set(points)
    if extra:
        raise InvalidData(f"line has angles at points {sorted(extra)} not present in the system")
    return L


def twist_mu(local: HodgeBlockData, h: Mapping[int, int], a: Angle) -> HodgeBlockData:
    """Vanishing-cycle data after twisting by a line with angle ``a`` at this point.

    Eigenvalues rotate by ``a``.  The two eigenvalues that cross the
    distinguished value one need care: input unipotent blocks grow by one in
    index, input blocks landing on one shrink by one, and the size-one blocks
    that were invisible in the mu store reappear with eigenvalue ``a``.
    """
    if a.is_trivial:
        return local
    out: dict = defaultdict(int)
    back = -a
    for (p, b, ell), m in local.items():
        if b.is_trivial:
            out[(p, a, ell + 1)] += m
        elif b == back:
            if ell >= 1:
                out[(p, ONE, ell - 1)] += m
        else:
            out[(p, b + a, ell)] += m
    levels = set(h) | local.levels()
    for p in levels:
        n = h.get(p, 0) - local.dim(p) - prim_coprim(local, ONE, p + 1)[1]
        if n < 0:
            raise NegativeMultiplicity(f"twist produced {n} size-one blocks at level {p}")
        if n:
            out[(p, a, 0)] += n
    return HodgeBlockData(out, kind="mu")


def _degree_correction(nu: HodgeBlockData, a: Angle, p: int) -> int:
    """Dimension at level ``p`` carried by angles in ``[1 - a, 1)``."""
    if a.is_trivial:
        return 0
    lo = 1 - a.value
    return sum(nu.dim(p, b) for b in nu.angles() if b.value >= lo)


def tensor_line(L: RankOneLine | Mapping, S: HodgeSystem) -> HodgeSystem:
    """Hodge data of ``L ⊗ S`` for a unitary rank-one ``L`` with trivial filtration."""
    L = as_line(L, S.points)
    nus = {x: recover_nu(S.local[x], S.hodge) for x in S.points}
    nus["inf"] = S.infinity
    angles = {x: L.angle_at(x) for x in S.points}
    angles["inf"] = L.infinity_angle

    local = {x: twist_mu(S.local[x], S.hodge, angles[x]) for x in S.points}
    infinity = S.infinity.rotated(angles["inf"])
    deg_line = L.degree()
    degrees = {}
    for p, hp in S.hodge.items():
        d = S.degrees.get(p, 0) + hp * deg_line
        d += sum(_degree_correction(nus[x], a, p) for x, a in angles.items())
        degrees[p] = int(d)

    if S.pairing != "unknown" and all(a.value in _SELF_DUAL for a in angles.values()):
        pairing = S.pairing
    else:
        pairing = "unknown"
    out = S.replace(local=local, infinity=infinity, degrees=degrees, pairing=pairing)
    return tate_twist(out, L.level_offset)


def tensor_line_monodromy(L: RankOneLine | Mapping, S: MonodromySystem) -> MonodromySystem:
    """Monodromy of ``L ⊗ S``: rotate the recovered nearby-cycle data pointwise."""
    L = as_line(L, S.points)
    local = {}
    for x in S.points:
        a = L.angle_at(x)
        local[x] = S.local[x] if a.is_trivial else mu_from_nu_monodromy(recover_nu_monodromy(S.local[x], S.rank).rotated(a))
    return MonodromySystem(
        points=S.points,
        local=local,
        infinity=S.infinity.rotated(L.infinity_angle),
        rank=S.rank,
    )
