"""Generalized entropies, escort distributions, Kolmogorov-Nagumo conditionals
and numerical verification of (pseudo-)additive chain rules."""

__version__ = "0.1.0"

from .chain import (
    RuleSpec,
    bayes_residual,
    chain_residual,
    mutual_information,
    n_chain_residual,
    pseudo_add_residual,
)
from .conditional import conditional, renyi_conditional_closed
from .darotzy import DarotzyParams, h_map, pseudo_add, transform
from .deformed import KNFunction, kn_mean, make_kn, q_exp, q_log
from .families import EntropySpec, entropy, ja_inner
from .landsberg import SamplerConfig, classify, probe_property
from .prob import (
    JointTable,
    ProbVector,
    conditional_slice,
    escort,
    escort_discrepancy,
    escort_joint_composed,
    escort_joint_direct,
    marginal,
    normalize_validate,
    product_join,
)
