"""Exact intersection theory, contraction criteria and discrepancies for orbifold surface pairs."""

from .contraction import artin_test, classify_negative_curve, fundamental_cycle, platonic_check
from .discrepancy import (
    BDivisorSpec,
    b_tower,
    classify_b_pair,
    classify_pair,
    discrep_estimate,
    snc_closed_form,
    tower_discrepancies,
)
from .lattice import NEG_INF, eval_form, format_rational, is_negative_definite, parse_rational, solve_linear
from .mmp import find_negative_extremal, mmp_run, mmp_step
from .orbifold import Frac, Mult, OrbifoldDivisor, pair_degree, round_down, round_up
from .surface import (
    BlowupCenter,
    CurveConfig,
    arithmetic_genus,
    blow_up,
    contract,
    intersect,
    mumford_pullback,
    validate,
)

__version__ = "0.1.0"
