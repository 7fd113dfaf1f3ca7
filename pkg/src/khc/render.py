"""Text and JSON renderings of systems and reduction traces."""

from __future__ import annotations

from fractions import Fraction

from .core import Angle, HodgeSystem, MonodromySystem
from .katz import KatzTrace
from .serialize import dumps, system_to_dict, trace_to_list

__all__ = ["alias", "angle_label", "render", "render_table", "render_monodromy", "render_trace"]

_ALIASES = {
    Fraction(0): "1",
    Fraction(1, 2): "-1",
    Fraction(2, 3): "φ",
    Fraction(1, 3): "φ̄",
    Fraction(1, 6): "-φ",
    Fraction(5, 6): "-φ̄",
}


def alias(a: Angle) -> str | None:
    """Name of the eigenvalue when it is a sixth root of unity."""
    return _ALIASES.get(Angle(a).value)


def angle_label(a: Angle) -> str:
    name = alias(a)
    return f"{a}({name})" if name else str(a)


def _jordan(blocks) -> str:
    """``(angle, size, mult)`` triples as a direct sum of Jordan blocks."""
    parts = []
    for a, size, m in blocks:
        name = alias(a) or f"e({a})"
        if size == 1:
            parts.append(name if m == 1 else f"{name}_{m}")
        else:
            prefix = "" if name == "1" else ("-" if name == "-1" else name)
            parts.extend([f"{prefix}J({size})"] * m)
    return " ⊕ ".join(parts) if parts else "0"


def _point_monodromy(S: HodgeSystem | MonodromySystem) -> list[str]:
    out = []
    for x in list(S.points) + ["inf"]:
        nu = S.nu_at(x)
        if isinstance(S, HodgeSystem):
            nu = nu.forget()
        out.append(f"{x}: {_jordan(nu.jordan())}")
    return out


def render_monodromy(S: MonodromySystem) -> str:
    lines = [f"rank {S.rank}"]
    lines.extend("  " + s for s in _point_monodromy(S))
    return "\n".join(lines)


def render_table(S: HodgeSystem) -> str:
    """Row-per-level table: ``h^p``, every nonzero mu family, then ``delta^p``."""
    families = []
    for x in S.points:
        keys = sorted({(a, ell) for (_, a, ell) in S.local[x]})
        families.extend((x, a, ell) for a, ell in keys)
    header = ["p", "h^p"]
    header += [f"mu[{x},{angle_label(a)},{ell}]" for x, a, ell in families]
    header.append("delta^p")
    rows = []
    for p in S.level_range():
        row = [str(p), str(S.hodge.get(p, 0))]
        row += [str(S.local[x][(p, a, ell)]) for x, a, ell in families]
        row.append(str(S.degrees.get(p, 0)))
        rows.append(row)
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]

    def fmt(r):
        return " | ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()

    rule = "-+-".join("-" * w for w in widths)
    lines = [f"rank {S.rank}, pairing {S.pairing}"]
    lines.extend("  " + s for s in _point_monodromy(S))
    lines += [fmt(header), rule] + [fmt(r) for r in rows]
    return "\n".join(lines)


def render(S: HodgeSystem | MonodromySystem, fmt: str = "table") -> str:
    if fmt == "json":
        return dumps(system_to_dict(S))
    if isinstance(S, MonodromySystem):
        return render_monodromy(S)
    return render_table(S)


def render_trace(trace: KatzTrace, fmt: str = "table") -> str:
    if fmt == "json":
        return dumps(trace_to_list(trace))
    lines = [f"ranks: {' -> '.join(map(str, trace.ranks))}"]
    for i, step in enumerate(trace.steps, 1):
        line = ", ".join(f"{x}: {angle_label(a)}" for x, a in step.chosen_line.finite_angles.items())
        lines.append(
            f"step {i}: twist ({line}), chi {angle_label(step.chi)}, "
            f"rank {step.before_rank} -> {step.after_rank}"
        )
        body = render(step.snapshot, "table")
        lines.extend("    " + s for s in body.splitlines())
    return "\n".join(lines)
