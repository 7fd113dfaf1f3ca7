"""Rigidity index and the Katz reduction loop."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .conv import mc_hodge, mc_local
from .core import (
    Angle,
    HodgeSystem,
    MonodromyData,
    MonodromySystem,
    RankOneLine,
    forget_hodge,
)
from .errors import IterationCapExceeded, NotAllowed, NotRigid, NotScalarAtInfinity
from .twist import tensor_line, tensor_line_monodromy

__all__ = [
    "KatzStep",
    "KatzTrace",
    "centralizer_dim",
    "rigidity_index",
    "choose_allowed_line",
    "katz_reduce",
]

System = Union[HodgeSystem, MonodromySystem]


def _mono(S: System) -> MonodromySystem:
    return forget_hodge(S) if isinstance(S, HodgeSystem) else S


def centralizer_dim(nu: MonodromyData) -> int:
    """Dimension of the centralizer of a matrix with the given Jordan data."""
    total = 0
    for a in nu.angles():
        sizes = [(ell + 1, m) for (b, ell), m in nu.items() if b == a]
        for s1, m1 in sizes:
            for s2, m2 in sizes:
                total += m1 * m2 * min(s1, s2)
    return total


def rigidity_index(S: System) -> int:
    M = _mono(S)
    return (1 - M.r) * M.rank**2 + sum(centralizer_dim(nu) for nu in M.all_nu())


def _ell_profile(nu: MonodromyData, a: Angle) -> tuple[int, ...]:
    return tuple(ell for (b, ell), m in nu.items() if b == a for _ in range(m))


def choose_allowed_line(S: System) -> RankOneLine:
    """Twist that makes each finite point carry as many size-one blocks as possible.

    At every finite point the eigenvalue with the most Jordan blocks is moved
    to one; ties go to the smallest angle.
    """
    M = _mono(S)
    a_inf = M.infinity_scalar()
    if a_inf is None:
        raise NotScalarAtInfinity("reduction needs a scalar monodromy at infinity")
    angles = {}
    for x in M.points:
        nu = M.nu_at(x)
        best = min(nu.angles(), key=lambda a: (-nu.prim(a), a, _ell_profile(nu, a)))
        angles[x] = -best
    line = RankOneLine(angles)
    if (a_inf + line.infinity_angle).is_trivial:
        raise NotAllowed("every maximal twist makes the monodromy at infinity trivial")
    return line


@dataclass(frozen=True)
class KatzStep:
    chosen_line: RankOneLine
    chi: Angle
    before_rank: int
    after_rank: int
    snapshot: System


@dataclass(frozen=True)
class KatzTrace:
    steps: tuple[KatzStep, ...] = field(default_factory=tuple)
    terminal: System | None = None

    @property
    def ranks(self) -> list[int]:
        if not self.steps:
            return [self.terminal.rank] if self.terminal is not None else []
        return [self.steps[0].before_rank] + [s.after_rank for s in self.steps]


def katz_reduce(S: System) -> KatzTrace:
    """Reduce a rigid system to rank one by alternating twists and convolutions."""
    hodge = isinstance(S, HodgeSystem)
    if rigidity_index(S) != 2:
        raise NotRigid(f"rigidity index is {rigidity_index(S)}, not 2")
    if S.infinity_scalar() is None:
        raise NotScalarAtInfinity("reduction needs a scalar monodromy at infinity")
    cap = S.rank + 1
    steps: list[KatzStep] = []
    cur = S
    while cur.rank > 1:
        if len(steps) >= cap:
            raise IterationCapExceeded(f"no rank-one system after {cap} steps")
        line = choose_allowed_line(cur)
        twisted = tensor_line(line, cur) if hodge else tensor_line_monodromy(line, cur)
        chi = twisted.infinity_scalar()
        nxt = mc_hodge(twisted, chi) if hodge else mc_local(twisted, chi)
        if nxt.rank >= cur.rank:
            raise IterationCapExceeded(f"rank did not drop ({cur.rank} -> {nxt.rank})")
        steps.append(KatzStep(line, chi, cur.rank, nxt.rank, nxt))
        cur = nxt
    return KatzTrace(tuple(steps), cur)
