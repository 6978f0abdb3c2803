"""Finite discrete distributions, joint tables and escort transforms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import (
    ConditionOnNullEvent,
    EmptyInput,
    EscortUndefined,
    InvalidParameters,
    NegativeWeight,
    NormalizationError,
    ZeroMass,
)

TAU_NORM = 1e-12

Axis = Union[str, int]


def _axis_index(axis: Axis) -> int:
    if isinstance(axis, str):
        key = axis.strip().lower()
        if key == "x":
            return 0
        if key == "y":
            return 1
        raise InvalidParameters(f"unknown axis {axis!r}; expected 'x' or 'y'")
    if axis in (0, 1):
        return int(axis)
    raise InvalidParameters(f"unknown axis {axis!r}; expected 'x' or 'y'")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def _check_cells(a: np.ndarray) -> None:
    if a.size == 0:
        raise EmptyInput("distribution has no entries")
    if not np.all(np.isfinite(a)):
        raise NegativeWeight("distribution contains non-finite entries")
    if np.any(a < 0):
        raise NegativeWeight(f"negative weight {a.min()!r}")
    total = a.sum()
    if abs(total - 1.0) > TAU_NORM:
        raise NormalizationError(f"weights sum to {total!r}, not 1 within {TAU_NORM}")


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Normalized nonnegative weights over a finite alphabet.

    Construction validates but never renormalizes; use
    :func:`normalize_validate` to build one from raw counts.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 1:
            raise InvalidParameters(f"ProbVector needs a flat array, got shape {w.shape}")
        _check_cells(w)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.weights, dtype=dtype)

    def __iter__(self):
        return iter(self.weights.tolist())

    def __repr__(self) -> str:
        return f"ProbVector({self.weights.tolist()!r})"

    def tolist(self) -> list[float]:
        return self.weights.tolist()

    @classmethod
    def uniform(cls, n: int) -> "ProbVector":
        if n < 1:
            raise EmptyInput("uniform distribution needs n >= 1")
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, n: int, index: int = 0) -> "ProbVector":
        w = np.zeros(n)
        w[index] = 1.0
        return cls(w)


@dataclass(frozen=True, eq=False)
class JointTable:
    """Joint distribution stored as an N-D array (rows are X, columns Y)."""

    cells: np.ndarray

    def __post_init__(self):
        c = _frozen(self.cells)
        if c.ndim < 2:
            raise InvalidParameters(f"JointTable needs at least 2 axes, got shape {c.shape}")
        _check_cells(c)
        object.__setattr__(self, "cells", c)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells.shape

    @property
    def ndim(self) -> int:
        return self.cells.ndim

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.cells, dtype=dtype)

    def __repr__(self) -> str:
        return f"JointTable({self.cells.tolist()!r})"

    def flatten(self) -> ProbVector:
        return ProbVector(self.cells.ravel())

    def tolist(self) -> list:
        return self.cells.tolist()


def normalize_validate(raw: Sequence[float]) -> ProbVector:
    """Divide nonnegative raw weights by their sum."""
    a = np.asarray(raw, dtype=np.float64)
    if a.size == 0:
        raise EmptyInput("empty weight list")
    if a.ndim != 1:
        raise InvalidParameters(f"expected a flat list of weights, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NegativeWeight("weights must be finite")
    if np.any(a < 0):
        raise NegativeWeight(f"negative weight {a.min()!r}")
    total = a.sum()
    if total <= 0:
        raise ZeroMass("weights sum to zero")
    return ProbVector(a / total)


def normalize_table(raw) -> JointTable:
    """N-D analogue of :func:`normalize_validate`."""
    a = np.asarray(raw, dtype=np.float64)
    if a.size == 0:
        raise EmptyInput("empty table")
    if not np.all(np.isfinite(a)):
        raise NegativeWeight("cells must be finite")
    if np.any(a < 0):
        raise NegativeWeight(f"negative cell {a.min()!r}")
    total = a.sum()
    if total <= 0:
        raise ZeroMass("table sums to zero")
    return JointTable(a / total)


def marginal(j: JointTable, axis: Axis) -> ProbVector:
    """Distribution of the variable on ``axis`` ('x' = rows, 'y' = columns)."""
    ax = _axis_index(axis)
    cells = np.asarray(j.cells)
    other = tuple(i for i in range(cells.ndim) if i != ax)
    return ProbVector(cells.sum(axis=other))


def conditional_slice(j: JointTable, given: Axis, index: int) -> ProbVector:
    """Distribution of the other variable conditioned on ``given == index``.

    ``conditional_slice(j, 'y', l)`` is the column r_{k|l} = r_{kl} / p_l.
    """
    ax = _axis_index(given)
    if j.ndim != 2:
        raise InvalidParameters("conditional_slice works on 2-D tables")
    cells = np.asarray(j.cells)
    row = np.take(cells, index, axis=ax)
    mass = row.sum()
    if mass <= 0:
        raise ConditionOnNullEvent(f"conditioning event {given}={index} has zero probability")
    return ProbVector(row / mass)


def product_join(px: ProbVector, py: ProbVector) -> JointTable:
    return JointTable(np.outer(px.weights, py.weights))


def _escort_array(p: np.ndarray, q: float, axis: int = -1) -> np.ndarray:
    # Zero weights stay zero for q > 0; for q <= 0 they have no escort.
    p = np.asarray(p, dtype=np.float64)
    zero = p <= 0
    if q <= 0 and np.any(zero):
        raise EscortUndefined(f"escort of order q={q} is undefined with zero weights")
    with np.errstate(divide="ignore", invalid="ignore"):
        powered = np.where(zero, 0.0, np.power(np.where(zero, 1.0, p), q))
    return powered / powered.sum(axis=axis, keepdims=True)


def escort(p: ProbVector, q: float) -> ProbVector:
    """Escort distribution rho_q(i) = p_i^q / sum_j p_j^q."""
    return ProbVector(_escort_array(p.weights, q))


def escort_joint_direct(j: JointTable, q: float) -> JointTable:
    """Escort of the joint taken cell by cell: r_kl^q / sum_mn r_mn^q."""
    cells = np.asarray(j.cells)
    return JointTable(_escort_array(cells.ravel(), q).reshape(cells.shape))


def escort_joint_composed(j: JointTable, q: float) -> JointTable:
    """Escort marginal times escort conditional, column by column.

    This is the joint one would get if the escort respected the
    marginal-times-conditional factorization r_kl = p_l r_{k|l}.
    """
    if j.ndim != 2:
        raise InvalidParameters("escort_joint_composed works on 2-D tables")
    cells = np.asarray(j.cells)
    p_y = cells.sum(axis=0)
    if np.any(p_y <= 0):
        l = int(np.argmin(p_y))
        raise ConditionOnNullEvent(f"column {l} has zero probability")
    cond = cells / p_y
    rho_y = _escort_array(p_y, q)
    rho_cond = _escort_array(cond, q, axis=0)
    return JointTable(rho_cond * rho_y)


def total_variation(a, b) -> float:
    return 0.5 * float(np.abs(np.asarray(a) - np.asarray(b)).sum())


def escort_discrepancy(j: JointTable, q: float) -> float:
    """Total-variation distance between the direct and composed escort joints."""
    return total_variation(escort_joint_direct(j, q).cells, escort_joint_composed(j, q).cells)


def random_vector(rng: np.random.Generator, n: int) -> ProbVector:
    """Uniform sample from the (n-1)-simplex (symmetric Dirichlet, alpha = 1)."""
    return ProbVector(_dirichlet(rng, n))


def random_joint(rng: np.random.Generator, shape: Sequence[int]) -> JointTable:
    shape = tuple(int(s) for s in shape)
    return JointTable(_dirichlet(rng, int(np.prod(shape))).reshape(shape))


def _dirichlet(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_exponential(n)
    w = g / g.sum()
    # one more pass keeps the sum inside TAU_NORM for large n
    return w / w.sum()
