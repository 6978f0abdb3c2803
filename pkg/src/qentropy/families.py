"""The eight entropy functionals, evaluated in bits (or their deformed analogues).

Every family is written against a plain array whose last axis is the
distribution, so a whole stack of conditional slices can be evaluated in
one call.  Zero weights are dropped from every power sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .deformed import LN2, near_one
from .errors import InvalidParameters
from .prob import JointTable, ProbVector, _escort_array

FAMILIES = (
    "shannon",
    "renyi",
    "tsallis",
    "landsberg",
    "behara_chawla",
    "sharma_mittal",
    "frank_daffertshofer",
    "ja",
)

ALIASES = {
    "bc": "behara_chawla",
    "sm": "sharma_mittal",
    "fd": "frank_daffertshofer",
    "behara-chawla": "behara_chawla",
    "sharma-mittal": "sharma_mittal",
    "frank-daffertshofer": "frank_daffertshofer",
}

_NEEDS_Q = {"renyi", "tsallis", "landsberg", "sharma_mittal", "frank_daffertshofer", "ja"}
_NEEDS_R = {"sharma_mittal", "frank_daffertshofer"}


def _finite(name: str, v) -> float:
    try:
        v = float(v)
    except (TypeError, ValueError):
        raise InvalidParameters(f"{name} must be a number, got {v!r}") from None
    if not math.isfinite(v):
        raise InvalidParameters(f"{name} must be finite, got {v!r}")
    return v


@dataclass(frozen=True)
class EntropySpec:
    """Entropy family plus its deformation parameters.

    For Behara-Chawla the coupled ``q = 2 - 2**(gamma - 1)`` is filled in
    automatically so the entropy can take part in q-parameterized rules.
    """

    family: str
    q: Optional[float] = None
    r: Optional[float] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        fam = ALIASES.get(self.family.lower(), self.family.lower())
        if fam not in FAMILIES:
            raise InvalidParameters(f"unknown entropy family {self.family!r}")
        object.__setattr__(self, "family", fam)
        if fam in _NEEDS_Q:
            if self.q is None:
                raise InvalidParameters(f"{fam} needs q")
            object.__setattr__(self, "q", _finite("q", self.q))
        if fam in _NEEDS_R:
            if self.r is None:
                raise InvalidParameters(f"{fam} needs r")
            object.__setattr__(self, "r", _finite("r", self.r))
        if fam == "behara_chawla":
            if self.gamma is None:
                raise InvalidParameters("behara_chawla needs gamma")
            g = _finite("gamma", self.gamma)
            if g <= 0:
                raise InvalidParameters("behara_chawla needs gamma > 0")
            object.__setattr__(self, "gamma", g)
            coupled = 2.0 - 2.0 ** (g - 1.0)
            if self.q is not None and abs(_finite("q", self.q) - coupled) > 1e-12:
                raise InvalidParameters(f"behara_chawla with gamma={g} is tied to q={coupled}, got q={self.q}")
            object.__setattr__(self, "q", coupled)

    @property
    def delta(self) -> Optional[float]:
        if self.family != "sharma_mittal":
            return None
        return 2.0 ** (1.0 - self.q) - 1.0

    @property
    def chain_q(self) -> float:
        """Deformation q of the (pseudo-)additive law this family obeys.

        1 means ordinary additivity.  Sharma-Mittal composes with
        coefficient delta = 2^(1-q) - 1, i.e. q' = 2 - 2^(1-q).
        """
        if self.family in ("shannon", "renyi"):
            return 1.0
        if self.family == "sharma_mittal":
            return 1.0 - self.delta
        return self.q

    def to_dict(self) -> dict:
        d = {"family": self.family}
        for k in ("q", "r", "gamma"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EntropySpec":
        fam = ALIASES.get(str(d["family"]).lower(), str(d["family"]).lower())
        q = None if fam == "behara_chawla" else d.get("q")
        return cls(fam, q=q, r=d.get("r"), gamma=d.get("gamma"))

    def label(self) -> str:
        parts = [f"{k}={v:g}" for k, v in self.to_dict().items() if k != "family"]
        return f"{self.family}({', '.join(parts)})" if parts else self.family


def _arr(p) -> np.ndarray:
    if isinstance(p, ProbVector):
        return p.weights
    if isinstance(p, JointTable):
        return p.cells.ravel()
    return np.asarray(p, dtype=np.float64)


def _power_sum(p: np.ndarray, a: float) -> np.ndarray:
    pos = p > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(pos, np.power(np.where(pos, p, 1.0), a), 0.0)
    return t.sum(axis=-1)


def _shannon(p: np.ndarray) -> np.ndarray:
    pos = p > 0
    safe = np.where(pos, p, 1.0)
    return -np.where(pos, p * np.log2(safe), 0.0).sum(axis=-1)


def _renyi(p: np.ndarray, q: float) -> np.ndarray:
    if near_one(q):
        return _shannon(p)
    return np.log2(_power_sum(p, q)) / (1.0 - q)


def _tsallis(p, q):
    if near_one(q):
        return _shannon(p) * LN2
    return (_power_sum(p, q) - 1.0) / (1.0 - q)


def _landsberg(p, q):
    if near_one(q):
        return _shannon(p) * LN2
    return (1.0 / _power_sum(p, 2.0 - q) - 1.0) / (1.0 - q)


def _behara_chawla(p, gamma):
    if near_one(gamma):
        return _shannon(p)
    return (1.0 - _power_sum(p, 1.0 / gamma) ** gamma) / (1.0 - 2.0 ** (gamma - 1.0))


def _rescaled_power_sum(p, q, r):
    # (sum p^r)^((1-q)/(1-r)), with its r -> 1 limit 2^((1-q) H)
    if near_one(r):
        return np.exp2((1.0 - q) * _shannon(p))
    return _power_sum(p, r) ** ((1.0 - q) / (1.0 - r))


def _frank_daffertshofer(p, q, r):
    if near_one(q):
        return _renyi(p, r) * LN2
    return (_rescaled_power_sum(p, q, r) - 1.0) / (1.0 - q)


def _sharma_mittal(p, q, r):
    if near_one(q):
        return _renyi(p, r)
    delta = 2.0 ** (1.0 - q) - 1.0
    return (_rescaled_power_sum(p, q, r) - 1.0) / delta


def _ja_inner(p: np.ndarray, q: float) -> np.ndarray:
    rho = _escort_array(p, q)
    pos = rho > 0
    safe = np.where(pos, p, 1.0)
    return -np.where(pos, rho * np.log2(safe), 0.0).sum(axis=-1)


def _ja(p, q):
    inner = _ja_inner(p, q)
    if near_one(q):
        return inner * LN2
    k = 1.0 - q
    return np.expm1(k * LN2 * inner) / k


def evaluate(spec: EntropySpec, p: np.ndarray) -> np.ndarray:
    """Vectorized entropy along the last axis of ``p``."""
    p = np.asarray(p, dtype=np.float64)
    f = spec.family
    if f == "shannon":
        return _shannon(p)
    if f == "renyi":
        return _renyi(p, spec.q)
    if f == "tsallis":
        return _tsallis(p, spec.q)
    if f == "landsberg":
        return _landsberg(p, spec.q)
    if f == "behara_chawla":
        return _behara_chawla(p, spec.gamma)
    if f == "frank_daffertshofer":
        return _frank_daffertshofer(p, spec.q, spec.r)
    if f == "sharma_mittal":
        return _sharma_mittal(p, spec.q, spec.r)
    return _ja(p, spec.q)


def entropy(spec: EntropySpec, p: Union[ProbVector, JointTable, np.ndarray]) -> float:
    """Entropy of a distribution; a JointTable is flattened first."""
    return float(evaluate(spec, _arr(p)))


def ja_inner(p: Union[ProbVector, np.ndarray], q: float) -> float:
    """Escort-weighted log-likelihood -sum_k rho_k(q) log2 p_k."""
    return float(_ja_inner(_arr(p), q))


def shannon_nats(p) -> float:
    return float(_shannon(_arr(p))) * LN2


def limit_value(spec: EntropySpec, p) -> float:
    """Value the family approaches as its deformation parameters go to 1.

    Families whose formula carries no logarithm (Tsallis, Landsberg, JA,
    Frank-Daffertshofer) converge to Shannon entropy in nats; the others
    converge to Shannon entropy in bits.
    """
    h = float(_shannon(_arr(p)))
    if spec.family in ("tsallis", "landsberg", "ja", "frank_daffertshofer"):
        return h * LN2
    return h
