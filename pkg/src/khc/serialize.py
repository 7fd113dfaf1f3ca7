"""Canonical JSON form of systems and reduction traces."""

from __future__ import annotations

import json
from typing import Any

from .core import Angle, HodgeBlockData, HodgeSystem, MonodromyData, MonodromySystem
from .errors import InvalidData
from .katz import KatzTrace

__all__ = [
    "system_to_dict",
    "system_from_dict",
    "to_json",
    "from_json",
    "trace_to_list",
    "dumps",
]


def _store_to_list(store) -> list[dict[str, Any]]:
    if isinstance(store, HodgeBlockData):
        return [
            {"p": p, "alpha": str(a), "ell": ell, "mult": m}
            for (p, a, ell), m in store.items()
        ]
    return [{"alpha": str(a), "ell": ell, "mult": m} for (a, ell), m in store.items()]


def _hodge_store(items, kind: str) -> HodgeBlockData:
    try:
        return HodgeBlockData(
            (((int(e["p"]), Angle(e["alpha"]), int(e["ell"])), int(e["mult"])) for e in items),
            kind=kind,
        )
    except (KeyError, TypeError) as exc:
        raise InvalidData(f"malformed block entry: {exc}") from exc


def _mono_store(items, kind: str) -> MonodromyData:
    try:
        return MonodromyData(
            (((Angle(e["alpha"]), int(e["ell"])), int(e["mult"])) for e in items),
            kind=kind,
        )
    except (KeyError, TypeError) as exc:
        raise InvalidData(f"malformed block entry: {exc}") from exc


def system_to_dict(S: HodgeSystem | MonodromySystem) -> dict[str, Any]:
    if isinstance(S, MonodromySystem):
        return {
            "points": list(S.points),
            "rank": S.rank,
            "local": {x: _store_to_list(S.local[x]) for x in S.points},
            "infinity": _store_to_list(S.infinity),
        }
    return {
        "points": list(S.points),
        "rank": S.rank,
        "hodge": {str(p): v for p, v in S.hodge.items()},
        "degrees": {str(p): v for p, v in S.degrees.items()},
        "local": {x: _store_to_list(S.local[x]) for x in S.points},
        "infinity": _store_to_list(S.infinity),
        "pairing": S.pairing,
    }


def system_from_dict(d: dict[str, Any]) -> HodgeSystem | MonodromySystem:
    try:
        points = tuple(d["points"])
        if "hodge" not in d:
            return MonodromySystem(
                points=points,
                local={x: _mono_store(v, "mu") for x, v in d.get("local", {}).items()},
                infinity=_mono_store(d["infinity"], "nu"),
                rank=int(d["rank"]),
            )
        S = HodgeSystem(
            points=points,
            local={x: _hodge_store(v, "mu") for x, v in d.get("local", {}).items()},
            infinity=_hodge_store(d["infinity"], "nu"),
            hodge={int(p): int(v) for p, v in d["hodge"].items()},
            degrees={int(p): int(v) for p, v in d.get("degrees", {}).items()},
            pairing=d.get("pairing", "unknown"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidData(f"malformed system: {exc}") from exc
    if "rank" in d and int(d["rank"]) != S.rank:
        raise InvalidData(f"declared rank {d['rank']} != sum of Hodge numbers {S.rank}")
    return S


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def to_json(S: HodgeSystem | MonodromySystem) -> str:
    return dumps(system_to_dict(S))


def from_json(text: str) -> HodgeSystem | MonodromySystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidData(f"invalid JSON: {exc}") from exc
    return system_from_dict(data)


def trace_to_list(trace: KatzTrace) -> list[dict[str, Any]]:
    return [
        {
            "step": i + 1,
            "line": {x: str(a) for x, a in s.chosen_line.finite_angles.items()},
            "chi": str(s.chi),
            "before_rank": s.before_rank,
            "after_rank": s.after_rank,
            "system": system_to_dict(s.snapshot),
        }
        for i, s in enumerate(trace.steps)
    ]
