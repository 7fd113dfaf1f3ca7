"""Acceptance criteria 1-7.

Each test carries a ``criterion`` marker; the conftest prints one PASS/FAIL
line per criterion at the end of the run.
"""

import io
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from khc import (
    FilteredBlock,
    GOLDEN_PROGRAMS,
    HodgeBlockData,
    InvariantViolation,
    KhcError,
    ParseError,
    block_sym2,
    block_tensor,
    block_wedge2,
    forget_hodge,
    golden_program,
    katz_reduce,
    mc_hodge,
    mc_local,
    parse_program,
    pretty,
    rigidity_index,
    run_text,
    solve_degrees_h1vanishing,
    tate_twist,
    validate,
    wedge2,
)
from khc.cli import main as cli_main
from oracles import commutant_dim, jordan_matrix, oracle_sym2, oracle_tensor, oracle_wedge2
from programs import random_program
from strategies import scalar_systems, systems
from test_dsl import MALFORMED
from test_properties import levels_ok, residue_ok

ONE, M1, PHI, PHIB, MPHI, MPHIB = F(0), F(1, 2), F(2, 3), F(1, 3), F(1, 6), F(5, 6)

c1 = pytest.mark.criterion(1, "first G2 pipeline reproduces every intermediate table")
c2 = pytest.mark.criterion(2, "second G2 pipeline reproduces its final table and intermediate data")
c3 = pytest.mark.criterion(3, "rigidity indices and Katz reduction")
c4 = pytest.mark.criterion(4, "two convolutions give a Tate twist")
c5 = pytest.mark.criterion(5, "invariant suite on 1000 random systems")
c6 = pytest.mark.criterion(6, "Jordan blocks agree with the matrix oracle")
c7 = pytest.mark.criterion(7, "parser round trip and located errors")


@pytest.fixture(scope="module")
def g2():
    return run_text(golden_program("g2_rigid")).bindings


@pytest.fixture(scope="module")
def orth():
    return run_text(golden_program("g2_orthogonal")).bindings


# ---------------------------------------------------------------------------
# criterion 1
# ---------------------------------------------------------------------------

# name -> (columns, {p: (h^p, [mu entries in column order], delta^p)})
TABLES = {
    "M0": (
        [("x1", PHIB, 0), ("x2", PHI, 0), ("x3", PHI, 0)],
        {0: (2, [1, 1, 1], -2)},
    ),
    "H1": (
        [("x1", PHIB, 0), ("x2", MPHI, 0), ("x2", M1, 0), ("x3", MPHI, 0), ("x3", M1, 0)],
        {0: (2, [1, 1, 1, 1, 1], -2)},
    ),
    "M1": (
        [("x1", M1, 0), ("x2", PHIB, 0), ("x2", PHI, 0), ("x3", PHIB, 0), ("x3", PHI, 0)],
        {1: (3, [1, 1, 1, 1, 1], -5)},
    ),
    "H2": (
        [("x1", M1, 0), ("x2", PHIB, 0), ("x2", PHI, 0), ("x3", MPHI, 0), ("x3", M1, 0), ("x3", MPHIB, 0)],
        {1: (3, [2, 1, 1, 1, 1, 1], -5)},
    ),
    "M2": (
        [("x1", ONE, 0), ("x2", MPHIB, 0), ("x2", MPHI, 0), ("x3", PHI, 0), ("x3", ONE, 0), ("x3", PHIB, 0)],
        {1: (2, [0, 0, 1, 0, 0, 1], -2), 2: (2, [2, 1, 0, 1, 1, 0], -2)},
    ),
    "H3": (
        [("x1", ONE, 0), ("x2", PHI, 0), ("x2", MPHIB, 0), ("x3", MPHIB, 0), ("x3", MPHI, 1), ("x3", M1, 0)],
        {1: (2, [0, 0, 1, 0, 0, 1], -3), 2: (2, [2, 1, 1, 1, 1, 0], -3)},
    ),
    "M3": (
        [("x1", M1, 0), ("x2", MPHI, 0), ("x2", PHIB, 0), ("x3", PHIB, 0), ("x3", PHI, 1), ("x3", ONE, 0)],
        {
            1: (1, [0, 0, 1, 0, 0, 0], -1),
            2: (3, [2, 1, 1, 1, 0, 1], -4),
            3: (1, [0, 0, 0, 0, 1, 0], -1),
        },
    ),
    "H4": (
        [("x1", M1, 0), ("x2", MPHI, 0), ("x2", PHIB, 0), ("x3", M1, 0), ("x3", MPHIB, 1), ("x3", MPHI, 1)],
        {
            1: (1, [1, 0, 1, 0, 0, 0], -2),
            2: (3, [1, 1, 1, 1, 0, 1], -5),
            3: (1, [1, 0, 0, 0, 1, 0], -2),
        },
    ),
    "M4": (
        [("x1", PHIB, 0), ("x2", ONE, 0), ("x2", MPHI, 0), ("x3", PHIB, 0), ("x3", PHI, 1), ("x3", ONE, 1)],
        {
            1: (1, [1, 0, 1, 0, 0, 0], -1),
            2: (3, [1, 0, 1, 1, 0, 0], -2),
            3: (2, [1, 1, 0, 0, 1, 1], -1),
        },
    ),
    "H5": (
        [("x1", PHIB, 0), ("x2", MPHIB, 1), ("x2", MPHIB, 0), ("x3", M1, 0), ("x3", MPHIB, 1), ("x3", MPHI, 2)],
        {
            1: (1, [1, 0, 0, 0, 0, 0], -1),
            2: (3, [1, 0, 1, 1, 0, 0], -4),
            3: (2, [1, 1, 1, 0, 1, 1], -3),
        },
    ),
    "M5": (
        [("x1", M1, 0), ("x2", ONE, 1), ("x2", ONE, 0), ("x3", PHI, 0), ("x3", ONE, 1), ("x3", PHIB, 2)],
        {
            2: (2, [1, 0, 0, 0, 0, 0], -3),
            3: (3, [1, 0, 1, 1, 0, 0], -4),
            4: (2, [1, 1, 1, 0, 1, 1], -2),
        },
    ),
    "G": (
        [("x1", M1, 0), ("x2", ONE, 1), ("x2", ONE, 0), ("x3", PHI, 2), ("x3", PHIB, 2)],
        {
            2: (2, [1, 0, 0, 0, 0], -2),
            3: (3, [2, 0, 1, 0, 0], -2),
            4: (2, [1, 1, 1, 1, 1], -1),
        },
    ),
}


def assert_table(S, columns, rows):
    assert S.hodge == {p: h for p, (h, _, _) in rows.items()}
    assert S.degrees == {p: d for p, (_, _, d) in rows.items() if d}
    expected = {x: {} for x in S.points}
    for p, (_, mus, _) in rows.items():
        for (x, a, ell), m in zip(columns, mus):
            if m:
                expected[x][(p, a, ell)] = m
    for x in S.points:
        assert S.local[x] == HodgeBlockData(expected[x], kind="mu"), x


@c1
@pytest.mark.parametrize("name", list(TABLES))
def test_c1_tables(g2, name):
    assert_table(g2[name], *TABLES[name])


@c1
def test_c1_first_line(g2):
    L0 = g2["L0"]
    assert L0.hodge == {0: 1} and L0.degrees == {0: -3}
    assert all(L0.local[x][(0, a, 0)] == 1 for x, a in (("x1", M1), ("x2", MPHIB), ("x3", MPHIB)))


@c1
@pytest.mark.xfail(strict=True, reason="literal entry uses phi where the monodromy has -phi")
def test_c1_literal_h1_entry(g2):
    assert g2["H1"].local["x3"][(0, PHI, 0)] == 1


@c1
@pytest.mark.xfail(strict=True, reason="literal column has -1 where the J(2) block needs 1")
def test_c1_literal_m4_column(g2):
    assert g2["M4"].local["x2"][(3, M1, 0)] == 1


# ---------------------------------------------------------------------------
# criterion 2
# ---------------------------------------------------------------------------

H_MU = {
    "x1": {(2, ONE, 0): 1, (7, ONE, 0): 1, (5, ONE, 1): 1},
    "x2": {(3, M1, 1): 1, (6, M1, 1): 1},
    "x3": {(5, M1, 2): 1, (2, ONE, 0): 1, (7, ONE, 0): 1},
}
H_DELTA = [-1, -1, -2, -1, -1, -1, 0]
LITERAL_DELTA = [-1, -1, -2, -1, -2, -1, 0]


@c2
def test_c2_final_table(orth):
    H = orth["H"]
    assert H.rank == 7 and H.hodge == {p: 1 for p in range(1, 8)}
    for x, entries in H_MU.items():
        assert H.local[x] == HodgeBlockData(entries, kind="mu")
    assert [H.degrees.get(p, 0) for p in range(1, 8)] == H_DELTA


@c2
@pytest.mark.xfail(strict=True, reason="literal index 3 and degree -2 break the rank and residue counts")
def test_c2_literal_entries(orth):
    H = orth["H"]
    assert H.local["x3"][(5, M1, 3)] == 1
    assert [H.degrees.get(p, 0) for p in range(1, 8)] == LITERAL_DELTA


@c2
def test_c2_literal_entries_are_inconsistent(orth):
    H = orth["H"]
    with pytest.raises(InvariantViolation):
        validate(H.replace(degrees=dict(zip(range(1, 8), LITERAL_DELTA))))
    bad = dict(H_MU["x3"])
    del bad[(5, M1, 2)]
    bad[(5, M1, 3)] = 1
    with pytest.raises(KhcError):
        validate(H.replace(local={**H.local, "x3": HodgeBlockData(bad, kind="mu")}))


@c2
def test_c2_symmetric_square_degrees(orth):
    E = orth["E"]
    assert [E.degrees.get(p, 0) for p in range(3)] == [-1, 0, 1]
    solved = solve_degrees_h1vanishing(E.local, E.infinity, E.hodge, {})
    assert [solved.get(p, 0) for p in range(3)] == [-1, 0, 1]


@c2
def test_c2_exterior_square_degrees(orth):
    W = wedge2(orth["V"])
    assert [W.degrees.get(p, 0) for p in range(1, 6)] == [-2, -1, 0, -1, 0]


@c2
def test_c2_reduced_square_monodromy(orth):
    T = forget_hodge(orth["T"])
    for x in ("x1", "x2"):
        assert sorted((str(a), s, m) for a, s, m in T.nu_at(x).jordan()) == [("0", 1, 1), ("1/2", 2, 2)]
    assert T.nu_at("x3").jordan() == [(ONE, 5, 1)]
    assert T.infinity.jordan() == [(ONE, 1, 5)]


# ---------------------------------------------------------------------------
# criterion 3
# ---------------------------------------------------------------------------


def brute_rigidity(S) -> int:
    M = forget_hodge(S)
    total = (1 - M.r) * M.rank**2
    for nu in M.all_nu():
        label = {a: i for i, a in enumerate(sorted(nu.angles()))}
        blocks = [(label[a], size) for a, size, m in nu.jordan() for _ in range(m)]
        total += commutant_dim(jordan_matrix(blocks))
    return total


@c3
def test_c3_rigidity(g2, orth):
    assert rigidity_index(g2["G"]) == 2
    assert rigidity_index(orth["H"]) == -2
    assert brute_rigidity(orth["H"]) == -2
    for name, S in g2.items():
        assert rigidity_index(S) == 2, name


@c3
def test_c3_katz(g2):
    ranks = katz_reduce(g2["G"]).ranks
    assert ranks[:2] == [7, 6] and ranks[-1] == 1
    assert all(a > b for a, b in zip(ranks, ranks[1:]))


# ---------------------------------------------------------------------------
# criterion 4
# ---------------------------------------------------------------------------


@c4
def test_c4_involution(g2):
    checked = 0
    for name, S in g2.items():
        a = S.infinity_scalar()
        if a is None or a == 0:
            continue
        once = mc_hodge(S)
        twice = mc_hodge(once, 1 - a.value)
        target = tate_twist(S, 1)
        assert twice.local == target.local, name
        assert twice.hodge == target.hodge and twice.degrees == target.degrees, name
        assert twice == target
        checked += 1
    assert checked >= 11


# ---------------------------------------------------------------------------
# criterion 5
# ---------------------------------------------------------------------------


@c5
@settings(max_examples=1000, deadline=None)
@given(systems())
def test_c5_random_systems(S):
    assert residue_ok(S) and levels_ok(S)


@c5
@settings(max_examples=1000, deadline=None)
@given(scalar_systems())
def test_c5_convolution(S):
    try:
        T = mc_hodge(S)
    except KhcError:
        return
    assert residue_ok(T) and levels_ok(T)
    assert T.rank == sum(S.local[x].total() for x in S.points) - S.rank
    assert forget_hodge(T) == mc_local(forget_hodge(S), S.infinity_scalar())


# ---------------------------------------------------------------------------
# criterion 6
# ---------------------------------------------------------------------------


def _shape(blocks):
    from collections import Counter

    return Counter((b.size, b.top) for b in blocks)


@c6
def test_c6_all_small_sizes():
    for s1 in range(1, 6):
        b1 = FilteredBlock(0, s1, 0)
        assert _shape(block_sym2(b1)) == oracle_sym2(s1, 0)
        assert _shape(block_wedge2(b1)) == oracle_wedge2(s1, 0)
        for s2 in range(1, 6):
            assert _shape(block_tensor(b1, FilteredBlock(0, s2, 0))) == oracle_tensor(s1, 0, s2, 0)


@c6
def test_c6_random_assignments():
    import random

    rng = random.Random(7)
    angles = [F(k, d) for d in (1, 2, 3, 4, 6) for k in range(d)]
    for _ in range(200):
        s1, s2 = rng.randint(1, 5), rng.randint(1, 5)
        t1, t2 = rng.randint(-4, 6), rng.randint(-4, 6)
        b1 = FilteredBlock(rng.choice(angles), s1, t1)
        b2 = FilteredBlock(rng.choice(angles), s2, t2)
        assert _shape(block_tensor(b1, b2)) == oracle_tensor(s1, t1, s2, t2)
        assert _shape(block_sym2(b1)) == oracle_sym2(s1, t1)
        assert _shape(block_wedge2(b2)) == oracle_wedge2(s2, t2)


# ---------------------------------------------------------------------------
# criterion 7
# ---------------------------------------------------------------------------


@c7
def test_c7_round_trip():
    programs = [parse_program(golden_program(n)) for n in GOLDEN_PROGRAMS]
    programs += [random_program(seed) for seed in range(50)]
    assert len(programs) == 52
    for prog in programs:
        text = pretty(prog)
        assert parse_program(text) == prog
        assert pretty(parse_program(text)) == text


@c7
def test_c7_malformed(tmp_path, capsys):
    for i, (text, line, col) in enumerate(MALFORMED):
        with pytest.raises(ParseError) as info:
            parse_program(text)
        assert (info.value.line, info.value.col) == (line, col)
        path = tmp_path / f"bad{i}.khc"
        path.write_text(text, encoding="utf-8")
        assert cli_main(["run", str(path)], io.StringIO()) == 2
        assert f"{line}:{col}:" in capsys.readouterr().err
