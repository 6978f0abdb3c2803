"""Darotzy's mapping and the transform it induces on chain-rule solutions.

h(x + y) = h(x) + h(y) + gamma h(x) h(y), so pushing an additive
entropy and its conditional through h yields a solution of the
q-extensive chain rule with gamma = 1 - q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deformed import LN2, KNFunction, kn_mean, make_kn
from .errors import InvalidParameters, OutOfRange
from .families import EntropySpec, entropy


@dataclass(frozen=True)
class DarotzyParams:
    """(a, lambda, gamma) of h: a*x when lambda = 0, else (2^(lambda x) - 1)/gamma."""

    lam: float
    gamma: float
    a: float = 1.0

    def __post_init__(self):
        for name in ("lam", "gamma", "a"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidParameters(f"{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.lam == 0.0:
            if self.a <= 0:
                raise InvalidParameters("lambda = 0 requires a > 0")
            if self.gamma != 0.0:
                # a*x is a homomorphism onto (R, +) only, never onto a gamma-sum
                raise InvalidParameters("lambda = 0 (linear branch) requires gamma = 0")
        elif not self.lam * self.gamma > 0:
            raise InvalidParameters(f"lambda*gamma must be > 0, got lambda={self.lam}, gamma={self.gamma}")

    def to_dict(self) -> dict:
        return {"a": self.a, "lam": self.lam, "gamma": self.gamma}


def _out(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


def h_range(p: DarotzyParams) -> tuple[float, float]:
    if p.lam == 0.0:
        return (-math.inf, math.inf)
    if p.gamma > 0:
        return (-1.0 / p.gamma, math.inf)
    return (-math.inf, -1.0 / p.gamma)


def h_map(x, p: DarotzyParams, direction: str = "forward"):
    x = np.asarray(x, dtype=np.float64)
    if direction == "forward":
        if p.lam == 0.0:
            return _out(p.a * x)
        with np.errstate(over="ignore"):
            return _out(np.expm1(p.lam * LN2 * x) / p.gamma)
    if direction == "inverse":
        if p.lam == 0.0:
            return _out(x / p.a)
        arg = p.gamma * x
        if np.any(~(arg > -1.0)):
            raise OutOfRange(f"value outside the range of h (need 1 + gamma*y > 0, gamma={p.gamma})")
        return _out(np.log1p(arg) / (p.lam * LN2))
    raise InvalidParameters(f"direction must be 'forward' or 'inverse', got {direction!r}")


def pseudo_add(x, y, gamma: float):
    return x + y + gamma * x * y


def params_for(gamma: float, lam: float | None = None, a: float = 1.0) -> DarotzyParams:
    """Default parameters: lambda = gamma unless given."""
    return DarotzyParams(lam=gamma if lam is None else lam, gamma=gamma, a=a)


@dataclass(frozen=True)
class DarotzyTransform:
    """Entropy H' = h(H) together with the conditional built from phi o h^-1."""

    base: EntropySpec
    params: DarotzyParams

    @property
    def q(self) -> float:
        """Extensivity parameter of the transformed pair (gamma = 1 - q)."""
        return 1.0 - self.params.gamma

    @property
    def kn(self) -> KNFunction:
        from .conditional import family_kn

        return make_kn("composed", base=family_kn(self.base), darotzy=self.params)

    def entropy(self, p) -> float:
        return float(h_map(entropy(self.base, p), self.params))

    def conditional(self, j, given="y") -> float:
        from .conditional import aggregation_parts

        values, weights, base_kn = aggregation_parts(self.base, j, given)
        kn = make_kn("composed", base=base_kn, darotzy=self.params)
        return kn_mean(h_map(values, self.params), weights, kn)

    def label(self) -> str:
        p = self.params
        return f"darotzy[{self.base.label()}; a={p.a:g}, lambda={p.lam:g}, gamma={p.gamma:g}]"

    def to_dict(self) -> dict:
        return {"base": self.base.to_dict(), "darotzy": self.params.to_dict()}


def transform(base: EntropySpec, params: DarotzyParams) -> DarotzyTransform:
    from .conditional import CONDITIONAL_FAMILIES

    if base.family not in CONDITIONAL_FAMILIES:
        raise InvalidParameters(f"{base.family} has no conditional entropy to transform")
    return DarotzyTransform(base, params)
