from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khc import (
    Angle,
    InvalidData,
    RankOneLine,
    forget_hodge,
    golden_program,
    make_line,
    mc_hodge,
    recover_nu,
    run_text,
    tensor_line,
    validate,
)
from khc.twist import tensor_line_monodromy
from strategies import line_angles, systems


@pytest.fixture(scope="module")
def g2():
    return run_text(golden_program("g2_rigid")).bindings


def test_first_twist_of_g2_pipeline(g2):
    M0 = mc_hodge(make_line({"x1": F(1, 2), "x2": F(5, 6), "x3": F(5, 6)}), F(5, 6))
    assert M0.hodge == {0: 2} and M0.degrees == {0: -2}
    H1 = tensor_line({"x2": F(1, 2), "x3": F(1, 2)}, M0)
    assert H1.hodge == {0: 2}
    assert H1.degrees == {0: -2}
    assert H1 == g2["H1"]


def test_second_twist_degree(g2):
    H2 = tensor_line({"x1": F(1, 2), "x3": F(5, 6)}, g2["M1"])
    assert g2["M1"].degrees[1] == -5
    assert H2.degrees[1] == -5


def test_identity_twist(g2):
    for name in ("M0", "H3", "G"):
        S = g2[name]
        assert tensor_line({x: 0 for x in S.points}, S) == S
        assert tensor_line({"x1": 0}, S) == S


def test_twist_rejects_unknown_points(g2):
    with pytest.raises(InvalidData):
        tensor_line({"x7": F(1, 2)}, g2["G"])


def test_level_offset_is_a_tate_twist(g2):
    S = g2["H2"]
    T = tensor_line(RankOneLine({"x1": F(1, 3)}, level_offset=2), S)
    U = tensor_line(RankOneLine({"x1": F(1, 3)}), S)
    assert T.hodge == {p + 2: h for p, h in U.hodge.items()}
    assert T.degrees == {p + 2: d for p, d in U.degrees.items()}


def test_pairing_rules():
    L = make_line({"x1": F(1, 2), "x2": F(1, 2)})
    assert tensor_line({"x1": F(1, 2)}, L).pairing == "symmetric"
    assert tensor_line({"x1": F(1, 3)}, L).pairing == "unknown"


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_twist_then_inverse_is_identity(data):
    S = data.draw(systems())
    L = RankOneLine(data.draw(line_angles(S.points)))
    T = tensor_line(L, S)
    validate(T)
    assert T.hodge == S.hodge
    assert tensor_line(L.inverse(), T).replace(pairing=S.pairing) == S


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_forget_commutes_with_twist(data):
    S = data.draw(systems())
    L = RankOneLine(data.draw(line_angles(S.points)))
    T = tensor_line(L, S)
    assert forget_hodge(T) == tensor_line_monodromy(L, forget_hodge(S))


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_vanishing_cycle_count_after_twist(data):
    S = data.draw(systems())
    angles = data.draw(line_angles(S.points))
    T = tensor_line(angles, S)
    for x, a in angles.items():
        if a == 0:
            continue
        nu = recover_nu(S.local[x], S.hodge).forget()
        # eigenvalue exp(2 pi i a) becomes unipotent; each of its blocks hides one dimension
        assert T.local[x].total() == S.rank - nu.prim(Angle(-a))
