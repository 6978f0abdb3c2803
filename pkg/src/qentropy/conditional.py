"""Conditional entropies H(X|Y) built in two steps.

Each conditioning slice gets its own entropy, then the slice values are
averaged: linearly under p(y) (Shannon), linearly under the escort
(Tsallis), or with a Kolmogorov-Nagumo mean under the escort (Renyi,
Frank-Daffertshofer, Sharma-Mittal, JA).
"""
from __future__ import annotations

import numpy as np

from .deformed import KNFunction, kn_mean, make_kn, near_one
from .errors import InvalidParameters
from .families import EntropySpec, evaluate
from .prob import Axis, JointTable, _axis_index, _escort_array

CONDITIONAL_FAMILIES = (
    "shannon",
    "renyi",
    "tsallis",
    "frank_daffertshofer",
    "sharma_mittal",
    "ja",
)


def _slices(j: JointTable, given: Axis) -> tuple[np.ndarray, np.ndarray]:
    """Conditional distributions (one per row of the result) and their masses.

    Zero-mass conditioning events are left out.
    """
    if j.ndim != 2:
        raise InvalidParameters("conditional entropies need a 2-D table")
    ax = _axis_index(given)
    cells = np.asarray(j.cells)
    if ax == 1:
        cells = cells.T
    mass = cells.sum(axis=1)
    keep = mass > 0
    return cells[keep] / mass[keep, None], mass[keep]


def _escort_order(spec: EntropySpec):
    f = spec.family
    if f == "shannon":
        return None
    if f in ("frank_daffertshofer", "sharma_mittal"):
        # the escort must match the Renyi index inside the slice entropy
        return spec.r
    return spec.q


def family_kn(spec: EntropySpec) -> KNFunction:
    f = spec.family
    if f in ("shannon", "tsallis"):
        return make_kn("linear")
    if f == "renyi":
        return make_kn("renyi", spec.q)
    if f == "frank_daffertshofer":
        return make_kn("fd", spec.q, spec.r)
    if f == "sharma_mittal":
        return make_kn("sm", spec.q, spec.r)
    if f == "ja":
        if near_one(spec.q):
            return make_kn("linear")
        from .darotzy import DarotzyParams

        # Renyi generator seen through h_{1-q}, so slices can stay in JA units
        k = 1.0 - spec.q
        return make_kn("composed", base=make_kn("renyi", spec.q), darotzy=DarotzyParams(lam=k, gamma=k))
    raise InvalidParameters(f"no conditional entropy is defined for {f}")


def aggregation_parts(spec: EntropySpec, j: JointTable, given: Axis = "y"):
    """Slice entropies, aggregation weights and KN generator for ``spec``."""
    if spec.family not in CONDITIONAL_FAMILIES:
        raise InvalidParameters(f"no conditional entropy is defined for {spec.family}")
    slices, mass = _slices(j, given)
    values = evaluate(spec, slices)
    order = _escort_order(spec)
    weights = mass if order is None else _escort_array(mass, order)
    return values, weights, family_kn(spec)


def conditional(spec: EntropySpec, j: JointTable, given: Axis = "y") -> float:
    """Entropy of the non-conditioning variable given ``given``.

    ``given='y'`` returns H(X|Y) (slices are columns); ``given='x'``
    returns H(Y|X).
    """
    values, weights, kn = aggregation_parts(spec, j, given)
    return kn_mean(values, weights, kn)


def renyi_conditional_closed(j: JointTable, q: float, given: Axis = "y") -> float:
    """Closed form (1/(1-q)) log2[sum p^q(x,y) / sum p^q(given)]."""
    if near_one(q):
        raise InvalidParameters("the closed Renyi conditional needs q != 1")
    if j.ndim != 2:
        raise InvalidParameters("conditional entropies need a 2-D table")
    ax = _axis_index(given)
    cells = np.asarray(j.cells)
    mass = cells.sum(axis=1 - ax)
    joint_sum = np.sum(np.power(cells[cells > 0], q))
    given_sum = np.sum(np.power(mass[mass > 0], q))
    return float(np.log2(joint_sum / given_sum) / (1.0 - q))
