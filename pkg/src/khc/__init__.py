"""Exact calculator for monodromy and Hodge data of local systems on a punctured line.

Systems are described by local Jordan data with Hodge levels at each puncture,
Hodge numbers and the degrees of the graded Hodge bundles.  The supported
operations are twists by rank-one lines, middle convolution, symmetric and
exterior squares, the rigidity index and the Katz reduction loop.
"""

from importlib.resources import files

from .bilinear import (
    FilteredBlock,
    block_sym2,
    block_tensor,
    block_wedge2,
    level_angle_profile,
    solve_degrees_h1vanishing,
    sym2,
    wedge2,
    wedge2_reduced,
)
from .conv import H1Result, dim_h1_middle, h1_hodge, mc_hodge, mc_local
from .core import (
    Angle,
    HodgeBlockData,
    HodgeSystem,
    MonodromyData,
    MonodromySystem,
    RankOneLine,
    dual_monodromy,
    forget_hodge,
    make_line,
    mu_from_nu,
    prim_coprim,
    recover_nu,
    residue_sum,
    tate_twist,
    validate,
)
from .dsl import ParseError, parse_program, pretty
from .errors import *  # noqa: F401,F403
from .evaluate import eval_program, run_text
from .katz import KatzStep, KatzTrace, centralizer_dim, choose_allowed_line, katz_reduce, rigidity_index
from .render import render
from .serialize import from_json, to_json
from .twist import tensor_line, tensor_line_monodromy

__version__ = "0.1.0"

GOLDEN_PROGRAMS = ("g2_rigid", "g2_orthogonal")


def golden_program(name: str) -> str:
    """Source text of a bundled ``.khc`` program."""
    if name not in GOLDEN_PROGRAMS:
        raise KeyError(name)
    return files(__package__).joinpath("data", f"{name}.khc").read_text(encoding="utf-8")
