"""Top-to-bottom evaluation of parsed programs."""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Union

from .bilinear import sym2, wedge2, wedge2_reduced
from .conv import mc_hodge, mc_local
from .core import (
    Angle,
    HodgeSystem,
    MonodromySystem,
    RankOneLine,
    dual_monodromy,
    make_line,
    mu_from_nu,
    mu_from_nu_monodromy,
    tate_twist,
    validate,
)
from .dsl import (
    Check,
    Emit,
    Expr,
    Let,
    LineExpr,
    McExpr,
    Node,
    Program,
    Ref,
    TateExpr,
    TensorExpr,
    UnaryExpr,
    parse_program,
)
from .errors import InvariantViolation, KhcError
from .katz import KatzTrace, katz_reduce, rigidity_index
from .twist import tensor_line, tensor_line_monodromy

__all__ = ["EvalError", "LineValue", "CheckResult", "Evaluation", "eval_program", "run_text"]


class EvalError(KhcError):
    """A module error or a type error, tagged with the statement location."""

    def __init__(self, message: str, node: Node | None = None):
        self.line = getattr(node, "line", 0)
        self.col = getattr(node, "col", 0)
        super().__init__(f"{self.line}:{self.col}: {message}" if node else message)


@dataclass(frozen=True)
class LineValue:
    """A ``line(...)`` value: usable as a twist and as a rank-one system."""

    line: RankOneLine
    system: HodgeSystem


Value = Union[HodgeSystem, MonodromySystem, LineValue]


@dataclass(frozen=True)
class CheckResult:
    check: Check
    actual: object
    passed: bool


@dataclass
class Evaluation:
    bindings: dict[str, HodgeSystem | MonodromySystem] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)
    emitted: list[tuple[str, HodgeSystem | MonodromySystem]] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)
    traces: dict[str, KatzTrace] = field(default_factory=dict)
    log: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


_CMP = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


def _system(v: Value):
    return v.system if isinstance(v, LineValue) else v


class _Evaluator:
    def __init__(self, program: Program):
        self.program = program
        self.points = program.points.names
        self.env: dict[str, Value] = {}
        self.result = Evaluation()
        self._trace: KatzTrace | None = None

    def run(self) -> Evaluation:
        for stmt in self.program.statements:
            if isinstance(stmt, Let):
                self._let(stmt)
            elif isinstance(stmt, Emit):
                self.result.emitted.append((stmt.name, self._lookup(stmt.name, stmt)))
            else:
                self.result.checks.append(self._check(stmt))
        return self.result

    def _lookup(self, name: str, node: Node):
        if name not in self.env:
            raise EvalError(f"unbound identifier {name!r}", node)
        return _system(self.env[name])

    def _let(self, stmt: Let) -> None:
        if stmt.name in self.env:
            raise EvalError(f"{stmt.name!r} is already bound", stmt)
        self._trace = None
        value = self._eval(stmt.expr)
        self.env[stmt.name] = value
        S = _system(value)
        self.result.bindings[stmt.name] = S
        self.result.order.append(stmt.name)
        if self._trace is not None:
            self.result.traces[stmt.name] = self._trace
        kind = "hodge" if isinstance(S, HodgeSystem) else "monodromy"
        self.result.log.append(f"{stmt.line}:{stmt.col}: {stmt.name} rank {S.rank} ({kind})")

    def _eval(self, e: Expr) -> Value:
        try:
            v = self._eval_inner(e)
            S = _system(v)
            if isinstance(S, HodgeSystem):
                validate(S)
            return v
        except EvalError:
            raise
        except InvariantViolation as exc:
            raise InvariantViolation(f"{e.line}:{e.col}: {exc}") from exc
        except KhcError as exc:
            raise EvalError(f"{type(exc).__name__}: {exc}", e) from exc

    def _hodge(self, e: Expr, op: str) -> HodgeSystem:
        S = _system(self._eval(e))
        if not isinstance(S, HodgeSystem):
            raise EvalError(f"{op} needs Hodge data, got a monodromy-only value", e)
        return S

    def _eval_inner(self, e: Expr) -> Value:
        if isinstance(e, Ref):
            if e.name not in self.env:
                raise EvalError(f"unbound identifier {e.name!r}", e)
            return self.env[e.name]
        if isinstance(e, LineExpr):
            unknown = [x for x, _ in e.angles if x not in self.points]
            if unknown:
                raise EvalError(f"undeclared points {unknown}", e)
            angles = dict(e.angles)
            level = e.level or 0
            return LineValue(RankOneLine(angles, level), make_line(angles, level, self.points))
        if isinstance(e, McExpr):
            S = _system(self._eval(e.arg))
            if isinstance(S, HodgeSystem):
                return mc_hodge(S, e.chi)
            chi = S.infinity_scalar() if e.chi is None else Angle(e.chi)
            if e.chi is not None and S.infinity_scalar() not in (None, chi):
                raise EvalError(f"chi={chi} does not match the scalar at infinity", e)
            if chi is None:
                raise EvalError("mc on non-scalar infinity needs an explicit chi", e)
            return mc_local(S, chi)
        if isinstance(e, TensorExpr):
            L = self._eval(e.line_arg)
            if not isinstance(L, LineValue):
                raise EvalError("the first argument of tensor must be a line", e.line_arg)
            S = _system(self._eval(e.arg))
            if isinstance(S, HodgeSystem):
                return tensor_line(L.line, S)
            return tensor_line_monodromy(L.line, S)
        if isinstance(e, TateExpr):
            return tate_twist(self._hodge(e.arg, "tate"), e.k)
        if isinstance(e, UnaryExpr):
            if e.op == "dual":
                return dual_monodromy(_system(self._eval(e.arg)))
            if e.op == "katz":
                trace = katz_reduce(_system(self._eval(e.arg)))
                self._trace = trace
                return trace.terminal
            fn = {"sym2": sym2, "wedge2": wedge2, "wedge2t": wedge2_reduced}[e.op]
            return fn(self._hodge(e.arg, e.op))
        raise EvalError(f"unknown expression {e!r}", e)

    # -- checks ----------------------------------------------------------------

    def _check(self, c: Check) -> CheckResult:
        S = self._lookup(c.name, c)
        actual = self._field(S, c)
        expected = c.value
        if isinstance(expected, tuple):
            expected = {k: v for k, v in expected if v}
        try:
            passed = _CMP[c.cmp](actual, expected)
        except TypeError as exc:
            raise EvalError(f"cannot compare {actual!r} with {expected!r}", c) from exc
        return CheckResult(c, actual, bool(passed))

    def _field(self, S, c: Check):
        hodge = isinstance(S, HodgeSystem)
        f = c.field_name
        if f == "rank":
            return S.rank
        if f == "rigidity":
            try:
                return rigidity_index(S)
            except KhcError as exc:
                raise EvalError(str(exc), c) from exc
        if f in ("h", "delta", "pairing") and not hodge:
            raise EvalError(f"field {f} needs Hodge data", c)
        if f == "pairing":
            return S.pairing
        if f in ("h", "delta"):
            data = S.hodge if f == "h" else S.degrees
            return data.get(c.index[0], 0) if c.index else dict(data)
        x, a, ell, *rest = c.index
        if hodge != bool(rest):
            want = "point, angle, ell, p" if hodge else "point, angle, ell"
            raise EvalError(f"{f}[...] on this value takes ({want})", c)
        if x != "inf" and x not in S.points:
            raise EvalError(f"unknown point {x!r}", c)
        if f == "nu":
            store = S.nu_at(x)
        elif x == "inf":
            store = mu_from_nu(S.infinity) if hodge else mu_from_nu_monodromy(S.infinity)
        else:
            store = S.local[x]
        if hodge:
            return store[(rest[0], Angle(a), ell)]
        return store[(Angle(a), ell)]


def eval_program(program: Program) -> Evaluation:
    return _Evaluator(program).run()


def run_text(text: str) -> Evaluation:
    return eval_program(parse_program(text))
