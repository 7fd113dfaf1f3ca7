"""A rank-7 system that is only orthogonally rigid.

Starting from a rank-two symplectic system, the symmetric square and the
rank-five part of an exterior square lead to a rank-7 variation whose
Hodge numbers are all one.  Its rigidity index is -2, so the Katz loop
refuses it.

Run with ``python3 demos/g2_orthogonal.py``.
"""

from fractions import Fraction as F

from khc import KhcError, katz_reduce, make_line, mc_hodge, rigidity_index, sym2, tensor_line, wedge2_reduced
from khc.render import render

half = F(1, 2)


def show(title, S):
    print(f"{title}:\n{render(S)}\n")


def main() -> None:
    M0 = mc_hodge(make_line({"x1": half, "x2": half, "x3": half}))
    show("rank two, skew", M0)
    E = sym2(M0)
    show("symmetric square", E)
    V = mc_hodge(tensor_line({"x3": half}, E))
    show("rank four", V)
    T = wedge2_reduced(V)
    show("exterior square without the symplectic line", T)
    M1 = mc_hodge(tensor_line({"x1": half}, T))
    H = mc_hodge(tensor_line({"x1": half, "x3": half}, M1))
    show("H", H)
    print("rigidity index:", rigidity_index(H))
    try:
        katz_reduce(H)
    except KhcError as exc:
        print("katz reduction:", exc)


if __name__ == "__main__":
    main()
