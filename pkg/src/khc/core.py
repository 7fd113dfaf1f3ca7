"""Domain types and the bookkeeping identities shared by every operation.

Eigenvalues on the unit circle are stored as rational angles ``a`` in
``[0, 1)`` with ``lambda = exp(-2 pi i a)``; multiplying eigenvalues adds
angles.  A Jordan block is a triple ``(p, a, ell)``: eigenvalue ``a``, size
``ell + 1``, primitive (top) Hodge level ``p``, occupying the consecutive
levels ``p, p-1, ..., p-ell``.

Finite points carry *vanishing-cycle* data (a ``mu`` store), the point at
infinity carries *nearby-cycle* data (a ``nu`` store).  For eigenvalue one the
two differ: a unipotent block of size ``ell + 2`` is recorded in the mu store
with index ``ell`` and size-one unipotent blocks are not recorded at all;
:func:`recover_nu` rebuilds them from the Hodge numbers.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import InvalidData, InvariantViolation, NegativeMultiplicity

__all__ = [
    "Angle",
    "HodgeBlockData",
    "MonodromyData",
    "HodgeSystem",
    "MonodromySystem",
    "RankOneLine",
    "PAIRINGS",
    "make_line",
    "recover_nu",
    "mu_from_nu",
    "prim_coprim",
    "tate_twist",
    "dual_monodromy",
    "forget_hodge",
    "finite_nu",
    "residue_sum",
    "validate",
]

PAIRINGS = ("none", "symmetric", "skew", "unknown")

AngleLike = Union["Angle", Fraction, int, str]


@total_ordering
class Angle:
    """Exact rational angle in ``[0, 1)``; addition is taken mod 1."""

    __slots__ = ("value",)

    def __init__(self, value: AngleLike = 0):
        if isinstance(value, Angle):
            # already normalized
            object.__setattr__(self, "value", value.value)
            return
        if isinstance(value, (float, complex)):
            raise InvalidData(f"angles must be exact rationals, got {value!r}")
        else:
            try:
                v = Fraction(value)
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise InvalidData(f"malformed angle {value!r}") from exc
        object.__setattr__(self, "value", v - math.floor(v))

    def __setattr__(self, name, value):
        raise AttributeError("Angle is immutable")

    def __add__(self, other: AngleLike) -> Angle:
        return Angle(self.value + Angle(other).value)

    __radd__ = __add__

    def __sub__(self, other: AngleLike) -> Angle:
        return Angle(self.value - Angle(other).value)

    def __rsub__(self, other: AngleLike) -> Angle:
        return Angle(Angle(other).value - self.value)

    def __neg__(self) -> Angle:
        return Angle(-self.value)

    def inverse(self) -> Angle:
        """Angle of the inverse eigenvalue."""
        return -self

    def __eq__(self, other) -> bool:
        if isinstance(other, Angle):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, Angle):
            return self.value < other.value
        if isinstance(other, (int, Fraction)):
            return self.value < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    @property
    def is_trivial(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"Angle({self})"


ONE = Angle(0)

# ---------------------------------------------------------------------------
# block stores
# ---------------------------------------------------------------------------

Key = tuple[int, Angle, int]


class HodgeBlockData(Mapping):
    """Sparse multiset of Jordan blocks ``(p, angle, ell) -> multiplicity``.

    ``kind`` is ``"mu"`` (vanishing cycles, finite points) or ``"nu"``
    (nearby cycles).  Instances are immutable and iterate in canonical order.
    """

    __slots__ = ("_data", "kind")

    def __init__(self, entries: Mapping | Iterable = (), kind: str = "nu"):
        if kind not in ("mu", "nu"):
            raise InvalidData(f"unknown store kind {kind!r}")
        acc: dict[Key, int] = defaultdict(int)
        items = entries.items() if isinstance(entries, Mapping) else entries
        for key, mult in items:
            p, a, ell = key
            if int(ell) != ell or ell < 0:
                raise InvalidData(f"block index ell must be a nonnegative integer: {key}")
            if int(p) != p:
                raise InvalidData(f"Hodge level must be an integer: {key}")
            if int(mult) != mult:
                raise InvalidData(f"multiplicity must be an integer: {key}")
            acc[(int(p), Angle(a), int(ell))] += int(mult)
        for key, mult in acc.items():
            if mult < 0:
                raise NegativeMultiplicity(f"negative multiplicity {mult} at {key}")
        object.__setattr__(self, "_data", {k: acc[k] for k in sorted(acc) if acc[k]})
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("HodgeBlockData is immutable")

    def __getitem__(self, key: Key) -> int:
        p, a, ell = key
        return self._data.get((p, Angle(a), ell), 0)

    def get(self, key, default=0):
        return self[key] or default

    def __iter__(self) -> Iterator[Key]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other) -> bool:
        if isinstance(other, HodgeBlockData):
            return self.kind == other.kind and self._data == other._data
        return NotImplemented

    def __hash__(self):
        return hash((self.kind, tuple(self._data.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"({p}, {a}, {ell}): {m}" for (p, a, ell), m in self._data.items())
        return f"HodgeBlockData({self.kind}, {{{body}}})"

    # -- queries --------------------------------------------------------------

    def angles(self) -> list[Angle]:
        return sorted({a for _, a, _ in self._data})

    def levels(self) -> set[int]:
        """Every level occupied by some block."""
        out = set()
        for p, _, ell in self._data:
            out.update(range(p - ell, p + 1))
        return out

    def dim(self, p: int, angle: AngleLike | None = None) -> int:
        """Dimension at level ``p`` (for one eigenvalue, or summed over all)."""
        a = None if angle is None else Angle(angle)
        return sum(
            m
            for (q, b, ell), m in self._data.items()
            if (a is None or b == a) and q - ell <= p <= q
        )

    def dim_angle(self, angle: AngleLike) -> int:
        a = Angle(angle)
        return sum((ell + 1) * m for (_, b, ell), m in self._data.items() if b == a)

    def total(self) -> int:
        return sum((ell + 1) * m for (_, _, ell), m in self._data.items())

    def count_blocks(self, angle: AngleLike | None = None) -> int:
        a = None if angle is None else Angle(angle)
        return sum(m for (_, b, _), m in self._data.items() if a is None or b == a)

    # -- transformations ------------------------------------------------------

    def shifted(self, k: int) -> HodgeBlockData:
        return HodgeBlockData(((p + k, a, ell), m) for (p, a, ell), m in self._data.items()).as_kind(self.kind)

    def rotated(self, angle: AngleLike) -> HodgeBlockData:
        return HodgeBlockData(((p, a + angle, ell), m) for (p, a, ell), m in self._data.items()).as_kind(self.kind)

    def as_kind(self, kind: str) -> HodgeBlockData:
        if kind == self.kind:
            return self
        return HodgeBlockData(self._data, kind=kind)

    def without(self, key: Key, count: int = 1) -> HodgeBlockData:
        data = dict(self._data)
        key = (key[0], Angle(key[1]), key[2])
        data[key] = data.get(key, 0) - count
        return HodgeBlockData(data, kind=self.kind)

    def forget(self) -> MonodromyData:
        return MonodromyData((((a, ell), m) for (_, a, ell), m in self._data.items()), kind=self.kind)


def _merge(stores: Iterable[Mapping], kind: str) -> HodgeBlockData:
    acc: dict = defaultdict(int)
    for s in stores:
        for key, m in s.items():
            acc[key] += m
    return HodgeBlockData(acc, kind=kind)


class MonodromyData(Mapping):
    """Level-free block multiset ``(angle, ell) -> multiplicity``."""

    __slots__ = ("_data", "kind")

    def __init__(self, entries: Mapping | Iterable = (), kind: str = "nu"):
        acc: dict[tuple[Angle, int], int] = defaultdict(int)
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (a, ell), mult in items:
            if int(ell) != ell or ell < 0:
                raise InvalidData(f"block index ell must be a nonnegative integer: {(a, ell)}")
            acc[(Angle(a), int(ell))] += int(mult)
        for key, mult in acc.items():
            if mult < 0:
                raise NegativeMultiplicity(f"negative multiplicity {mult} at {key}")
        object.__setattr__(self, "_data", {k: acc[k] for k in sorted(acc) if acc[k]})
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("MonodromyData is immutable")

    def __getitem__(self, key) -> int:
        a, ell = key
        return self._data.get((Angle(a), ell), 0)

    def get(self, key, default=0):
        return self[key] or default

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other) -> bool:
        if isinstance(other, MonodromyData):
            return self.kind == other.kind and self._data == other._data
        return NotImplemented

    def __hash__(self):
        return hash((self.kind, tuple(self._data.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"({a}, {ell}): {m}" for (a, ell), m in self._data.items())
        return f"MonodromyData({self.kind}, {{{body}}})"

    def angles(self) -> list[Angle]:
        return sorted({a for a, _ in self._data})

    def prim(self, angle: AngleLike) -> int:
        """Number of blocks with this eigenvalue."""
        a = Angle(angle)
        return sum(m for (b, _), m in self._data.items() if b == a)

    def dim_angle(self, angle: AngleLike) -> int:
        a = Angle(angle)
        return sum((ell + 1) * m for (b, ell), m in self._data.items() if b == a)

    def total(self) -> int:
        return sum((ell + 1) * m for (_, ell), m in self._data.items())

    def rotated(self, angle: AngleLike) -> MonodromyData:
        return MonodromyData((((a + angle, ell), m) for (a, ell), m in self._data.items()), kind=self.kind)

    def jordan(self) -> list[tuple[Angle, int, int]]:
        """``(angle, size, multiplicity)`` triples."""
        return [(a, ell + 1, m) for (a, ell), m in self._data.items()]


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


def _clean_int_map(values: Mapping | None, what: str) -> dict[int, int]:
    out = {}
    for k, v in dict(values or {}).items():
        if int(k) != k or int(v) != v:
            raise InvalidData(f"{what} must map integers to integers: {k!r}: {v!r}")
        if v:
            out[int(k)] = int(v)
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class HodgeSystem:
    """Local and global Hodge data of a variation on the punctured line.

    ``local`` holds mu stores at the finite points, ``infinity`` a nu store;
    ``hodge`` and ``degrees`` are the Hodge numbers and the degrees of the
    graded Hodge bundles of the canonical extension.
    """

    points: tuple[str, ...]
    local: Mapping[str, HodgeBlockData]
    infinity: HodgeBlockData
    hodge: Mapping[int, int]
    degrees: Mapping[int, int] = field(default_factory=dict)
    pairing: str = "unknown"

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise InvalidData("at least one finite point is required")
        if len(set(points)) != len(points):
            raise InvalidData(f"duplicate point labels in {points}")
        extra = set(self.local) - set(points)
        if extra:
            raise InvalidData(f"local data at undeclared points {sorted(extra)}")
        local = {}
        for x in points:
            store = self.local.get(x, HodgeBlockData(kind="mu"))
            if not isinstance(store, HodgeBlockData):
                store = HodgeBlockData(store, kind="mu")
            local[x] = store.as_kind("mu")
        inf = self.infinity if isinstance(self.infinity, HodgeBlockData) else HodgeBlockData(self.infinity)
        hodge = _clean_int_map(self.hodge, "hodge numbers")
        degrees = _clean_int_map(self.degrees, "degrees")
        if self.pairing not in PAIRINGS:
            raise InvalidData(f"pairing must be one of {PAIRINGS}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "local", local)
        object.__setattr__(self, "infinity", inf.as_kind("nu"))
        object.__setattr__(self, "hodge", hodge)
        object.__setattr__(self, "degrees", degrees)
        self._check_structure()

    def _check_structure(self) -> None:
        if any(v < 0 for v in self.hodge.values()):
            raise InvalidData(f"negative Hodge number in {self.hodge}")
        if self.rank < 1:
            raise InvalidData("rank must be at least 1")
        stray = set(self.degrees) - set(self.hodge)
        if stray:
            raise InvalidData(f"nonzero degree at levels {sorted(stray)} with h^p = 0")
        levels = set(self.hodge) | self.infinity.levels()
        for p in levels:
            if self.infinity.dim(p) != self.hodge.get(p, 0):
                raise InvalidData(
                    f"infinity data has dimension {self.infinity.dim(p)} at level {p}, "
                    f"expected h^{p} = {self.hodge.get(p, 0)}"
                )
        for x in self.points:
            nu = recover_nu(self.local[x], self.hodge)
            for p in levels | nu.levels():
                if nu.dim(p) != self.hodge.get(p, 0):
                    raise InvalidData(f"local data at {x} inconsistent with h^{p}")

    @property
    def rank(self) -> int:
        return sum(self.hodge.values())

    @property
    def r(self) -> int:
        return len(self.points)

    def nu_at(self, x: str) -> HodgeBlockData:
        """Nearby-cycle data at a finite point or at ``"inf"``."""
        if x in ("inf", "infinity", "∞"):
            return self.infinity
        return recover_nu(self.local[x], self.hodge)

    def level_range(self) -> range:
        if not self.hodge:
            return range(0)
        return range(min(self.hodge), max(self.hodge) + 1)

    def infinity_scalar(self) -> Angle | None:
        """The angle of a scalar monodromy at infinity, or None."""
        angles = self.infinity.angles()
        if len(angles) == 1 and all(ell == 0 for _, _, ell in self.infinity):
            return angles[0]
        return None

    def replace(self, **changes) -> HodgeSystem:
        data = dict(
            points=self.points,
            local=self.local,
            infinity=self.infinity,
            hodge=self.hodge,
            degrees=self.degrees,
            pairing=self.pairing,
        )
        data.update(changes)
        return HodgeSystem(**data)


@dataclass(frozen=True)
class MonodromySystem:
    """Local monodromy data without Hodge levels."""

    points: tuple[str, ...]
    local: Mapping[str, MonodromyData]
    infinity: MonodromyData
    rank: int

    def __post_init__(self):
        points = tuple(self.points)
        if not points or len(set(points)) != len(points):
            raise InvalidData(f"bad point list {points}")
        extra = set(self.local) - set(points)
        if extra:
            raise InvalidData(f"local data at undeclared points {sorted(extra)}")
        local = {}
        for x in points:
            store = self.local.get(x, MonodromyData(kind="mu"))
            if not isinstance(store, MonodromyData):
                store = MonodromyData(store, kind="mu")
            local[x] = MonodromyData(store, kind="mu")
        inf = self.infinity if isinstance(self.infinity, MonodromyData) else MonodromyData(self.infinity)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "local", local)
        object.__setattr__(self, "infinity", MonodromyData(inf, kind="nu"))
        if self.rank < 1:
            raise InvalidData("rank must be at least 1")
        if self.infinity.total() != self.rank:
            raise InvalidData(f"infinity data has dimension {self.infinity.total()} != rank {self.rank}")
        for x in points:
            recover_nu_monodromy(local[x], self.rank)

    @property
    def r(self) -> int:
        return len(self.points)

    def nu_at(self, x: str) -> MonodromyData:
        if x in ("inf", "infinity", "∞"):
            return self.infinity
        return recover_nu_monodromy(self.local[x], self.rank)

    def all_nu(self) -> list[MonodromyData]:
        return [self.nu_at(x) for x in self.points] + [self.infinity]

    def infinity_scalar(self) -> Angle | None:
        angles = self.infinity.angles()
        if len(angles) == 1 and all(ell == 0 for _, ell in self.infinity):
            return angles[0]
        return None


@dataclass(frozen=True)
class RankOneLine:
    """Rank-one unitary local system given by its finite-point angles.

    The angle at infinity is forced by the product of all local monodromies
    being one.  ``level_offset`` places the (trivial) Hodge filtration.
    """

    finite_angles: Mapping[str, Angle]
    level_offset: int = 0

    def __post_init__(self):
        angles = {x: Angle(a) for x, a in dict(self.finite_angles).items()}
        if not angles:
            raise InvalidData("a rank-one line needs at least one finite point")
        object.__setattr__(self, "finite_angles", angles)

    @property
    def infinity_angle(self) -> Angle:
        return -sum(self.finite_angles.values(), Angle(0))

    def angle_at(self, x: str) -> Angle:
        return self.finite_angles.get(x, Angle(0))

    def inverse(self) -> RankOneLine:
        return RankOneLine({x: -a for x, a in self.finite_angles.items()}, -self.level_offset)

    def degree(self) -> Fraction:
        """Degree of the canonical extension: minus the sum of all residues."""
        total = sum(a.value for a in self.finite_angles.values()) + self.infinity_angle.value
        return -total


# ---------------------------------------------------------------------------
# nu <-> mu
# ---------------------------------------------------------------------------


def prim_coprim(data: Mapping, angle: AngleLike, p: int) -> tuple[int, int, int]:
    """Primitive count, coprimitive count and total dimension at level ``p``.

    ``prim`` counts blocks whose top level is ``p``, ``coprim`` blocks whose
    bottom level is ``p``.
    """
    a = Angle(angle)
    prim = coprim = total = 0
    for (q, b, ell), m in data.items():
        if b != a:
            continue
        if q == p:
            prim += m
        if q - ell == p:
            coprim += m
        if q - ell <= p <= q:
            total += m
    return prim, coprim, total


def recover_nu(local: HodgeBlockData, h: Mapping[int, int]) -> HodgeBlockData:
    """Nearby-cycle data at a finite point from its vanishing cycles and ``h``."""
    if local.kind != "mu":
        raise InvalidData("recover_nu expects a mu store")
    out: dict[Key, int] = {}
    for (p, a, ell), m in local.items():
        if a.is_trivial:
            out[(p, a, ell + 1)] = m
        else:
            out[(p, a, ell)] = m
    levels = set(h) | local.levels() | {p + 1 for p in local.levels()} | {p - 1 for p in local.levels()}
    for p in sorted(levels):
        coprim_above = prim_coprim(local, ONE, p + 1)[1]
        n = h.get(p, 0) - local.dim(p) - coprim_above
        if n < 0:
            raise NegativeMultiplicity(
                f"recovered nu^{p}_(1,0) = {n} < 0: vanishing cycles exceed h^{p}"
            )
        if n:
            out[(p, ONE, 0)] = n
    return HodgeBlockData(out, kind="nu")


def mu_from_nu(nu: HodgeBlockData) -> HodgeBlockData:
    """Vanishing-cycle data of a nu store (unipotent part shifted down)."""
    out = {}
    for (p, a, ell), m in nu.items():
        if not a.is_trivial:
            out[(p, a, ell)] = m
        elif ell >= 1:
            out[(p, a, ell - 1)] = m
    return HodgeBlockData(out, kind="mu")


def recover_nu_monodromy(local: MonodromyData, rank: int) -> MonodromyData:
    out: dict = {}
    for (a, ell), m in local.items():
        out[(a, ell + 1 if a.is_trivial else ell)] = m
    n = rank - local.total() - local.prim(ONE)
    if n < 0:
        raise NegativeMultiplicity(f"recovered nu_(1,0) = {n} < 0: vanishing cycles exceed rank")
    if n:
        out[(ONE, 0)] = n
    return MonodromyData(out, kind="nu")


def mu_from_nu_monodromy(nu: MonodromyData) -> MonodromyData:
    out = {}
    for (a, ell), m in nu.items():
        if not a.is_trivial:
            out[(a, ell)] = m
        elif ell >= 1:
            out[(a, ell - 1)] = m
    return MonodromyData(out, kind="mu")


def finite_nu(S: HodgeSystem) -> dict[str, HodgeBlockData]:
    return {x: recover_nu(S.local[x], S.hodge) for x in S.points}


# ---------------------------------------------------------------------------
# basic operations
# ---------------------------------------------------------------------------


def make_line(finite_angles: Mapping[str, AngleLike], level: int = 0, points: Iterable[str] | None = None) -> HodgeSystem:
    """Rank-one unitary variation with trivial filtration placed at ``level``."""
    line = RankOneLine(finite_angles)
    pts = tuple(points) if points is not None else tuple(line.finite_angles)
    missing = set(line.finite_angles) - set(pts)
    if missing:
        raise InvalidData(f"line angles at undeclared points {sorted(missing)}")
    local = {
        x: HodgeBlockData({(level, a, 0): 1} if a else {}, kind="mu")
        for x, a in ((x, line.angle_at(x)) for x in pts)
    }
    inf = HodgeBlockData({(level, line.infinity_angle, 0): 1})
    deg = line.degree()
    assert deg.denominator == 1
    all_angles = list(line.finite_angles.values()) + [line.infinity_angle]
    self_dual = all(a.value in (0, Fraction(1, 2)) for a in all_angles)
    return HodgeSystem(
        points=pts,
        local=local,
        infinity=inf,
        hodge={level: 1},
        degrees={level: int(deg)},
        pairing="symmetric" if self_dual else "unknown",
    )


def tate_twist(S: HodgeSystem, k: int) -> HodgeSystem:
    """Relabel every Hodge level ``p`` as ``p + k``.

    The classical Tate twist ``(-1)`` corresponds to ``k = +1`` here.
    """
    if k == 0:
        return S
    return S.replace(
        local={x: s.shifted(k) for x, s in S.local.items()},
        infinity=S.infinity.shifted(k),
        hodge={p + k: v for p, v in S.hodge.items()},
        degrees={p + k: v for p, v in S.degrees.items()},
    )


def forget_hodge(S: HodgeSystem) -> MonodromySystem:
    return MonodromySystem(
        points=S.points,
        local={x: s.forget() for x, s in S.local.items()},
        infinity=S.infinity.forget(),
        rank=S.rank,
    )


def dual_monodromy(S: MonodromySystem | HodgeSystem) -> MonodromySystem:
    """Monodromy data of the dual local system: every angle negated."""
    if isinstance(S, HodgeSystem):
        S = forget_hodge(S)
    return MonodromySystem(
        points=S.points,
        local={
            x: MonodromyData((((-a, ell), m) for (a, ell), m in s.items()), kind="mu")
            for x, s in S.local.items()
        },
        infinity=MonodromyData(((-a, ell), m) for (a, ell), m in S.infinity.items()),
        rank=S.rank,
    )


# ---------------------------------------------------------------------------
# residue identity
# ---------------------------------------------------------------------------


def residue_sum(S: HodgeSystem | MonodromySystem) -> Fraction:
    """Sum over all points of ``angle * block size * multiplicity``.

    Unipotent blocks have angle zero, so mu stores can be used directly.
    """
    total = Fraction(0)
    stores = list(S.local.values()) + [S.infinity]
    for store in stores:
        for key, m in store.items():
            a, ell = (key[1], key[2]) if len(key) == 3 else key
            total += a.value * (ell + 1) * m
    return total


def validate(S: HodgeSystem) -> HodgeSystem:
    """Check the residue-degree identity; raise :class:`InvariantViolation`."""
    res = residue_sum(S)
    deg = sum(S.degrees.values())
    if res.denominator != 1:
        raise InvariantViolation(f"sum of residues {res} is not an integer")
    if deg != -res:
        raise InvariantViolation(f"sum of degrees {deg} != minus sum of residues {-res}")
    if deg > 0:
        raise InvariantViolation(f"degree of V^0 is positive ({deg})")
    return S
