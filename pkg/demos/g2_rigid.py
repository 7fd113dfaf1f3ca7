"""Build a rank-7 rigid system with G2 monodromy from a rank-one line.

Seven lines on three finite points are alternated with six middle
convolutions.  The Hodge data are printed along the way, then the Katz
reduction walks the result back down to rank one.

Run with ``python3 demos/g2_rigid.py``.
"""

from fractions import Fraction as F

from khc import katz_reduce, make_line, mc_hodge, rigidity_index, tensor_line
from khc.render import render, render_trace

half, sixth, third = F(1, 2), F(1, 6), F(1, 3)

# (twist applied before the convolution, chi); chi is the scalar at infinity
STEPS = [
    ({"x2": half, "x3": half}, sixth),
    ({"x1": half, "x3": 5 * sixth}, half),
    ({"x2": 5 * sixth, "x3": sixth}, half),
    ({"x1": half, "x3": sixth}, 5 * sixth),
    ({"x2": 5 * sixth, "x3": sixth}, sixth),
]


def main() -> None:
    S = mc_hodge(make_line({"x1": half, "x2": 5 * sixth, "x3": 5 * sixth}), 5 * sixth)
    print("first convolution:\n" + render(S), end="\n\n")
    for line, chi in STEPS:
        S = mc_hodge(tensor_line(line, S), chi)
        print(f"after twist {line} and mc(chi={chi}):")
        print(render(S), end="\n\n")
    G = tensor_line({"x1": half, "x3": third}, S)
    print("final system G:\n" + render(G), end="\n\n")
    print("rigidity index:", rigidity_index(G))
    print(render_trace(katz_reduce(G)).splitlines()[0])


if __name__ == "__main__":
    main()
