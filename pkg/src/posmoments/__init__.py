"""Entanglement certification from moments of positive maps."""

from .bipartite import (
    BipartiteState,
    bell_state,
    load_state,
    maximally_mixed,
    paper_ppt_family,
    partial_transpose,
    random_separable,
    realign,
    save_state,
    werner_state,
)
from .criteria import CriterionReport, Decision, Verdict, evaluate_all, theorem1_sign_pattern
from .errors import ConvergenceError, DomainError, PosMomentsError, ShapeError, ValidationError
from .maps import PositiveMapSpec, apply_map, extend_and_apply, hou_gamma, reduction_map, transpose_map
from .spectra import CharPolyCoeffs, MomentVector, charpoly_coeffs, moments, pt_moments, realignment_moments

__version__ = "0.1.0"
