"""Invariants checked on randomly generated systems and every operation."""

from hypothesis import given, settings
from hypothesis import strategies as st

from khc import (
    KhcError,
    forget_hodge,
    mc_hodge,
    mc_local,
    recover_nu,
    residue_sum,
    sym2,
    tate_twist,
    tensor_line,
    wedge2,
)
from strategies import line_angles, scalar_systems, systems

RUNS = 1000


def residue_ok(S) -> bool:
    return sum(S.degrees.values()) == -residue_sum(S) and residue_sum(S) >= 0


def levels_ok(S) -> bool:
    stores = [recover_nu(S.local[x], S.hodge) for x in S.points] + [S.infinity]
    for nu in stores:
        for p in S.level_range():
            if sum(nu.dim(p, a) for a in nu.angles()) != S.hodge.get(p, 0):
                return False
    return True


def _apply(op, S, data):
    if op == "tensor":
        return tensor_line(data.draw(line_angles(S.points)), S)
    if op == "tate":
        return tate_twist(S, data.draw(st.integers(-3, 3)))
    if op == "mc":
        return mc_hodge(S)
    if op == "sym2":
        return sym2(S)
    return wedge2(S)


@settings(max_examples=RUNS, deadline=None)
@given(st.data())
def test_every_operation_keeps_the_invariants(data):
    S = data.draw(systems())
    assert residue_ok(S) and levels_ok(S)
    op = data.draw(st.sampled_from(["tensor", "tate", "mc", "sym2", "wedge2"]))
    try:
        T = _apply(op, S, data)
    except KhcError:
        return
    assert residue_ok(T)
    assert levels_ok(T)
    if op in ("tensor", "tate"):
        assert T.rank == S.rank


@settings(max_examples=RUNS, deadline=None)
@given(scalar_systems())
def test_convolution_rank_and_forgetful_square(S):
    try:
        T = mc_hodge(S)
    except KhcError:
        return
    a = S.infinity_scalar()
    assert T.rank == sum(S.local[x].total() for x in S.points) - S.rank
    assert forget_hodge(T) == mc_local(forget_hodge(S), a)
    # degree of the whole bundle, written with input data only
    cut = 1 - a.value
    drop = sum(
        S.local[x].dim_angle(b) for x in S.points for b in S.local[x].angles() if b.value < cut
    )
    assert sum(T.degrees.values()) == sum(S.degrees.values()) + S.rank - drop
    assert residue_ok(T) and levels_ok(T)
    assert mc_hodge(T, 1 - a.value) == tate_twist(S, 1)
