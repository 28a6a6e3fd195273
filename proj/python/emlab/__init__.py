"""Energy-momentum tensors, O(2) differential inclusions, weak residuals."""

from ._emlab import (
    EmlabError,
    em_tensor,
    eval_dw,
    eval_w,
    grad_adj_norm_sq,
    grad_det,
    grad_inv_norm,
    hull_decompose,
    hull_membership,
    laminate_residuals,
    obstruction,
    polar_factor,
    rank_one_reflection,
    reduced_em,
    singular_values,
    staircase_trace,
)

__all__ = [
    "EmlabError",
    "em_tensor",
    "eval_dw",
    "eval_w",
    "grad_adj_norm_sq",
    "grad_det",
    "grad_inv_norm",
    "hull_decompose",
    "hull_membership",
    "laminate_residuals",
    "obstruction",
    "polar_factor",
    "rank_one_reflection",
    "reduced_em",
    "singular_values",
    "staircase_trace",
]
